#include "specbsa/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "specbsa/errors.hpp"

namespace specbsa {

namespace {

void check_alignment_size(Eigen::Index n) {
    if (n > kMaxAlignmentNodes)
        throw TooLarge("exhaustive permutation alignment is limited to " +
                       std::to_string(kMaxAlignmentNodes) + " nodes, got " + std::to_string(n));
}

} // namespace

Eigen::MatrixXd apply_permutation(const Eigen::MatrixXd& y, const std::vector<int>& perm) {
    const Eigen::Index n = y.rows();
    if (static_cast<Eigen::Index>(perm.size()) != n || y.cols() != n)
        throw SizeMismatch("permutation length does not match the matrix");
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = y(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
    return out;
}

PermutationAlignment best_permutation_alignment(const Network& x, const Network& y) {
    const Eigen::Index n = x.n();
    if (y.n() != n) throw SizeMismatch("networks have different node counts");
    check_alignment_size(n);

    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    const Eigen::MatrixXd& xa = x.adjacency;
    const Eigen::MatrixXd& ya = y.adjacency;
    PermutationAlignment best;
    best.residual = std::numeric_limits<double>::infinity();
    do {
        double sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int pi = perm[static_cast<size_t>(i)];
            for (Eigen::Index j = 0; j < n; ++j) {
                const double d = ya(pi, perm[static_cast<size_t>(j)]) - xa(i, j);
                sq += d * d;
            }
        }
        const double res = std::sqrt(sq);
        if (res < best.residual) {  // strict: keeps the lexicographically first
            best.residual = res;
            best.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

FrechetMeanResult frechet_mean(const std::vector<Network>& dataset, double tol, int max_iter) {
    if (dataset.empty()) throw InvalidArgument("dataset is empty");
    const Eigen::Index n = dataset.front().n();
    for (const Network& net : dataset)
        if (net.n() != n) throw SizeMismatch("networks have different node counts");
    check_alignment_size(n);
    if (max_iter < 1) throw InvalidArgument("max_iter must be positive");

    // Medoid start: the datum with minimal total squared Frobenius distance.
    const size_t n_data = dataset.size();
    size_t medoid = 0;
    double medoid_cost = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n_data; ++i) {
        double cost = 0.0;
        for (size_t j = 0; j < n_data; ++j)
            cost += (dataset[i].adjacency - dataset[j].adjacency).squaredNorm();
        if (cost < medoid_cost) {
            medoid_cost = cost;
            medoid = i;
        }
    }

    Eigen::MatrixXd mean = dataset[medoid].adjacency;
    FrechetMeanResult result;
    result.aligned.reserve(n_data);
    for (int iter = 1; iter <= max_iter; ++iter) {
        Network mean_net{"frechet-mean", mean};
        std::vector<Network> aligned;
        aligned.reserve(n_data);
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
        for (const Network& net : dataset) {
            const PermutationAlignment pa = best_permutation_alignment(mean_net, net);
            Network moved{net.id, apply_permutation(net.adjacency, pa.permutation)};
            next += moved.adjacency;
            aligned.push_back(std::move(moved));
        }
        next /= static_cast<double>(n_data);
        const double delta = (next - mean).norm();
        mean = next;
        result.aligned = std::move(aligned);
        result.iterations = iter;
        if (delta <= tol) {
            result.converged = true;
            break;
        }
    }
    result.mean = Network{"frechet-mean", mean};
    return result;
}

Eigen::VectorXd sym_vectorize(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw NonSquare("matrix is not square");
    static const double root2 = std::sqrt(2.0);
    Eigen::VectorXd v(n * (n + 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j)
            v(k++) = i == j ? m(i, j) : root2 * m(i, j);
    return v;
}

Eigen::MatrixXd sym_unvectorize(const Eigen::VectorXd& v, Eigen::Index n) {
    if (v.size() != n * (n + 1) / 2)
        throw SizeMismatch("vector length does not match a symmetric matrix of this size");
    static const double inv_root2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd m(n, n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double value = i == j ? v(k) : inv_root2 * v(k);
            m(i, j) = m(j, i) = value;
            ++k;
        }
    return m;
}

TangentPCAResult tangent_pca(const std::vector<Network>& dataset, int num_components,
                             double tol, int max_iter) {
    if (dataset.empty()) throw InvalidArgument("dataset is empty");
    const Eigen::Index n = dataset.front().n();
    const Eigen::Index n_data = static_cast<Eigen::Index>(dataset.size());
    const Eigen::Index dim = n * (n + 1) / 2;
    if (num_components < 1 || num_components > std::min<Eigen::Index>(n_data - 1, dim))
        throw InvalidArgument("num_components must lie in [1, min(N-1, n(n+1)/2)]");

    const FrechetMeanResult fm = frechet_mean(dataset, tol, max_iter);
    Eigen::MatrixXd rows(n_data, dim);
    for (Eigen::Index i = 0; i < n_data; ++i)
        rows.row(i) =
            sym_vectorize(fm.aligned[static_cast<size_t>(i)].adjacency - fm.mean.adjacency)
                .transpose();
    const Eigen::RowVectorXd centroid = rows.colwise().mean();
    rows.rowwise() -= centroid;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double total_var = sv.squaredNorm();
    if (total_var == 0.0) throw DegenerateDataset("dataset has zero variance at the mean");

    const int c = num_components;
    TangentPCAResult result;
    result.mean = fm.mean;
    result.components.reserve(static_cast<size_t>(c));
    for (int k = 0; k < c; ++k)
        result.components.push_back(sym_unvectorize(svd.matrixV().col(k), n));
    result.scores = rows * svd.matrixV().leftCols(c);
    result.explained_variance_ratio = sv.head(c).array().square() / total_var;
    return result;
}

Network component_deformation(const TangentPCAResult& result, int component, double t) {
    if (component < 0 || component >= static_cast<int>(result.components.size()))
        throw IndexOutOfRange("component index " + std::to_string(component) +
                              " is out of range");
    Eigen::MatrixXd deformed =
        result.mean.adjacency + t * result.components[static_cast<size_t>(component)];
    return Network{"deformation", std::move(deformed)};
}

} // namespace specbsa
