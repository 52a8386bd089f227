#include "specbsa/bsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "specbsa/errors.hpp"
#include "specbsa/spectral.hpp"

namespace specbsa {

namespace {

constexpr std::uint64_t kBinomialCap = std::numeric_limits<std::uint64_t>::max() / 4;

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > kBinomialCap) return kBinomialCap;
    }
    return static_cast<std::uint64_t>(r);
}

// The subset of {0..N-1} of size m with the given lexicographic rank.
std::vector<int> unrank_subset(std::uint64_t rank, int n, int m) {
    std::vector<int> subset(static_cast<size_t>(m));
    int value = 0;
    for (int pos = 0; pos < m; ++pos) {
        for (;; ++value) {
            const std::uint64_t block = binomial(n - 1 - value, m - 1 - pos);
            if (rank < block) break;
            rank -= block;
        }
        subset[static_cast<size_t>(pos)] = value++;
    }
    return subset;
}

bool next_subset(std::vector<int>& s, int n) {
    const int m = static_cast<int>(s.size());
    int i = m - 1;
    while (i >= 0 && s[static_cast<size_t>(i)] == n - m + i) --i;
    if (i < 0) return false;
    ++s[static_cast<size_t>(i)];
    for (int j = i + 1; j < m; ++j) s[static_cast<size_t>(j)] = s[static_cast<size_t>(j - 1)] + 1;
    return true;
}

void validate_config(const BSAConfig& config, size_t n_data) {
    if (n_data == 0) throw InvalidArgument("dataset is empty");
    if (config.min_ref_separation < 0)
        throw InvalidArgument("min_ref_separation must be nonnegative");
    if (!config.labels.empty() && config.labels.size() != n_data)
        throw SizeMismatch("label count does not match the dataset size");
    if (config.require_distinct_labels && config.labels.empty())
        throw InvalidArgument("require_distinct_labels needs labels");
}

struct SearchContext {
    const std::vector<Spectrum>* spectra = nullptr;
    const BSAConfig* config = nullptr;
    Eigen::MatrixXd pairwise;  // spectral distances between data
};

SearchContext make_context(const std::vector<Spectrum>& spectra, const BSAConfig& config) {
    SearchContext ctx;
    ctx.spectra = &spectra;
    ctx.config = &config;
    const Eigen::Index n_data = static_cast<Eigen::Index>(spectra.size());
    if (config.min_ref_separation > 0) {
        ctx.pairwise.setZero(n_data, n_data);
        for (Eigen::Index i = 0; i < n_data; ++i)
            for (Eigen::Index j = i + 1; j < n_data; ++j)
                ctx.pairwise(i, j) = ctx.pairwise(j, i) =
                    spectral_distance(spectra[static_cast<size_t>(i)],
                                      spectra[static_cast<size_t>(j)]);
    }
    return ctx;
}

bool admissible(const SearchContext& ctx, const std::vector<int>& subset) {
    const BSAConfig& cfg = *ctx.config;
    if (cfg.min_ref_separation > 0)
        for (size_t a = 0; a < subset.size(); ++a)
            for (size_t b = a + 1; b < subset.size(); ++b)
                if (ctx.pairwise(subset[a], subset[b]) < cfg.min_ref_separation) return false;
    if (cfg.require_distinct_labels)
        for (size_t a = 0; a < subset.size(); ++a)
            for (size_t b = a + 1; b < subset.size(); ++b)
                if (cfg.labels[static_cast<size_t>(subset[a])] ==
                    cfg.labels[static_cast<size_t>(subset[b])])
                    return false;
    return true;
}

BarycentricSubspace subspace_of(const std::vector<Spectrum>& spectra,
                                const std::vector<int>& subset) {
    BarycentricSubspace bs;
    bs.refs.reserve(subset.size());
    for (int idx : subset) bs.refs.push_back(spectra[static_cast<size_t>(idx)]);
    return bs;
}

double total_sq_error(const std::vector<Spectrum>& spectra, const std::vector<int>& subset,
                      bool convex) {
    const BarycentricSubspace bs = subspace_of(spectra, subset);
    double total = 0.0;
    for (const Spectrum& s : spectra)
        total += (convex ? project_convex(bs, s) : project(bs, s)).squared_error;
    return total;
}

int thread_count(bool parallel) {
    if (!parallel) return 1;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::max(2u, std::min(hw == 0 ? 2u : hw, 8u)));
}

struct BestSubset {
    double total = std::numeric_limits<double>::infinity();
    std::vector<int> subset;
};

// Scans `count` subsets in lexicographic order starting at `first`.
BestSubset scan_range(const SearchContext& ctx, std::vector<int> first, std::uint64_t count,
                      bool convex) {
    BestSubset best;
    const int n = static_cast<int>(ctx.spectra->size());
    for (std::uint64_t k = 0; k < count; ++k) {
        if (admissible(ctx, first)) {
            const double total = total_sq_error(*ctx.spectra, first, convex);
            if (total < best.total) {
                best.total = total;
                best.subset = first;
            }
        }
        if (!next_subset(first, n)) break;
    }
    return best;
}

BSAResult finalize(const std::vector<Spectrum>& spectra, const std::vector<int>& subset,
                   bool convex) {
    const BarycentricSubspace bs = subspace_of(spectra, subset);
    const Eigen::Index n_data = static_cast<Eigen::Index>(spectra.size());
    const Eigen::Index m = static_cast<Eigen::Index>(subset.size());

    BSAResult result;
    result.ref_indices = subset;
    result.weights.resize(n_data, m);
    result.projections.reserve(static_cast<size_t>(n_data));
    result.per_datum_sq_error.resize(n_data);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n_data; ++i) {
        const Spectrum& s = spectra[static_cast<size_t>(i)];
        Projection proj = convex ? project_convex(bs, s) : project(bs, s);
        result.weights.row(i) = proj.coords.weights.transpose();
        result.per_datum_sq_error(i) = proj.squared_error;
        total += proj.squared_error;
        result.projections.push_back(std::move(proj.point));
    }
    result.mse = total / static_cast<double>(n_data);
    return result;
}

// One step of the greedy backward pass: the candidate whose removal leaves
// the smallest total error, ties resolved toward the smallest removed index.
size_t best_removal(const SearchContext& ctx, const std::vector<int>& current, bool convex,
                    bool parallel, double* best_total_out) {
    const size_t m = current.size();
    std::vector<double> totals(m);
    const int threads = std::min<int>(thread_count(parallel), static_cast<int>(m));
    if (threads <= 1) {
        for (size_t c = 0; c < m; ++c) {
            std::vector<int> candidate = current;
            candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(c));
            totals[c] = total_sq_error(*ctx.spectra, candidate, convex);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t]() {
                for (size_t c = static_cast<size_t>(t); c < m; c += static_cast<size_t>(threads)) {
                    std::vector<int> candidate = current;
                    candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(c));
                    totals[c] = total_sq_error(*ctx.spectra, candidate, convex);
                }
            });
        for (std::thread& th : pool) th.join();
    }
    size_t best = 0;
    for (size_t c = 1; c < m; ++c)
        if (totals[c] < totals[best]) best = c;
    if (best_total_out) *best_total_out = totals[best];
    return best;
}

} // namespace

BSAResult fit_spectra(const std::vector<Spectrum>& spectra, const BSAConfig& config) {
    validate_config(config, spectra.size());
    const int n_data = static_cast<int>(spectra.size());
    const int m = config.num_refs;
    if (m < 1 || m > n_data)
        throw InvalidArgument("num_refs must lie between 1 and the dataset size");

    if (config.search == SearchStrategy::GreedyBackward) {
        const BackwardPath path = fit_backward_spectra(spectra, config);
        for (const BackwardStep& step : path.steps)
            if (static_cast<int>(step.ref_indices.size()) == m)
                return finalize(spectra, step.ref_indices, config.convex);
        throw InvalidArgument("backward path has no step with the requested size");
    }

    const std::uint64_t total_subsets = binomial(n_data, m);
    if (total_subsets > config.subset_budget)
        throw BudgetExceeded("subset count " + std::to_string(total_subsets) +
                             " exceeds the budget " + std::to_string(config.subset_budget));

    const SearchContext ctx = make_context(spectra, config);
    const int threads =
        static_cast<int>(std::min<std::uint64_t>(thread_count(config.parallel), total_subsets));
    BestSubset best;
    if (threads <= 1) {
        best = scan_range(ctx, unrank_subset(0, n_data, m), total_subsets, config.convex);
    } else {
        std::vector<BestSubset> partial(static_cast<size_t>(threads));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        const std::uint64_t chunk = (total_subsets + static_cast<std::uint64_t>(threads) - 1) /
                                    static_cast<std::uint64_t>(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t]() {
                const std::uint64_t lo = static_cast<std::uint64_t>(t) * chunk;
                const std::uint64_t hi = std::min(lo + chunk, total_subsets);
                if (lo < hi)
                    partial[static_cast<size_t>(t)] = scan_range(
                        ctx, unrank_subset(lo, n_data, m), hi - lo, config.convex);
            });
        for (std::thread& th : pool) th.join();
        // Chunks are lexicographic ranges, so merging in chunk order with a
        // strict comparison keeps the earliest subset on ties.
        for (const BestSubset& cand : partial)
            if (cand.total < best.total) best = cand;
    }
    if (!std::isfinite(best.total) || best.subset.empty())
        throw EmptySelection("no reference subset satisfies the search constraints");
    return finalize(spectra, best.subset, config.convex);
}

BSAResult fit(const std::vector<Network>& dataset, const BSAConfig& config) {
    return fit_spectra(spectra_of(dataset), config);
}

BackwardPath fit_backward_spectra(const std::vector<Spectrum>& spectra, const BSAConfig& config) {
    validate_config(config, spectra.size());
    const int n_data = static_cast<int>(spectra.size());
    const SearchContext ctx = make_context(spectra, config);

    std::vector<int> current(static_cast<size_t>(n_data));
    for (int i = 0; i < n_data; ++i) current[static_cast<size_t>(i)] = i;

    BackwardPath path;
    path.steps.reserve(static_cast<size_t>(n_data));
    double total = total_sq_error(spectra, current, config.convex);
    path.steps.push_back({current, total / static_cast<double>(n_data)});
    while (current.size() > 1) {
        double best_total = 0.0;
        const size_t drop =
            best_removal(ctx, current, config.convex, config.parallel, &best_total);
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
        path.steps.push_back({current, best_total / static_cast<double>(n_data)});
    }
    return path;
}

BackwardPath fit_backward(const std::vector<Network>& dataset, const BSAConfig& config) {
    return fit_backward_spectra(spectra_of(dataset), config);
}

Network reconstruct(const Network& datum, const Projection& proj) {
    if (proj.point.size() != datum.n())
        throw SizeMismatch("projected spectrum length does not match the network");
    const EigenDecomposition ed = eigendecompose(datum);
    Eigen::MatrixXd rebuilt =
        ed.basis * proj.point.values.asDiagonal() * ed.basis.transpose();
    rebuilt = 0.5 * (rebuilt + rebuilt.transpose()).eval();
    return validate_network(rebuilt, datum.id);
}

double variance_explained_spectra(const std::vector<Spectrum>& spectra, const BSAResult& result) {
    if (spectra.empty()) throw InvalidArgument("dataset is empty");
    const Eigen::Index n_data = static_cast<Eigen::Index>(spectra.size());
    if (result.per_datum_sq_error.size() != n_data)
        throw SizeMismatch("result does not match the dataset size");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(spectra.front().size());
    for (const Spectrum& s : spectra) mean += s.values;
    mean /= static_cast<double>(n_data);
    double total_var = 0.0;
    for (const Spectrum& s : spectra) total_var += (s.values - mean).squaredNorm();
    if (total_var == 0.0) throw DegenerateDataset("dataset has zero spectral variance");
    const double ratio = 1.0 - result.per_datum_sq_error.sum() / total_var;
    return std::clamp(ratio, 0.0, 1.0);
}

double variance_explained(const std::vector<Network>& dataset, const BSAResult& result) {
    return variance_explained_spectra(spectra_of(dataset), result);
}

} // namespace specbsa
