#include "specbsa/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace specbsa {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_symmetric(const Network& net,
                                                               bool vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(net.adjacency,
               vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw EigensolverFailure("symmetric eigensolver did not converge on network '" +
                                 net.id + "'");
    return es;
}

void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b)
        throw SizeMismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " +
                           std::to_string(b) + " differ");
}

} // namespace

Spectrum spectrum(const Network& net) {
    auto es = solve_symmetric(net, false);
    Eigen::VectorXd ev = es.eigenvalues();
    // The solver already returns ascending order; sort anyway so the contract
    // does not depend on that behavior.
    std::sort(ev.data(), ev.data() + ev.size());
    return Spectrum(ev);
}

EigenDecomposition eigendecompose(const Network& net) {
    auto es = solve_symmetric(net, true);
    Eigen::VectorXd ev = es.eigenvalues();
    Eigen::MatrixXd basis = es.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return ev[i] < ev[j]; });

    Eigen::VectorXd sorted_ev(ev.size());
    Eigen::MatrixXd sorted_basis(basis.rows(), basis.cols());
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        sorted_ev[k] = ev[order[static_cast<std::size_t>(k)]];
        sorted_basis.col(k) = basis.col(order[static_cast<std::size_t>(k)]);
    }
    return EigenDecomposition{Spectrum(sorted_ev), std::move(sorted_basis)};
}

double spectral_distance(const Spectrum& a, const Spectrum& b) {
    require_same_size(a.size(), b.size(), "spectral_distance");
    return (a.values - b.values).norm();
}

double spectral_distance(const Network& a, const Network& b) {
    require_same_size(a.n(), b.n(), "spectral_distance");
    return spectral_distance(spectrum(a), spectrum(b));
}

Eigen::MatrixXd align(const Network& a, const Network& b) {
    require_same_size(a.n(), b.n(), "align");
    const EigenDecomposition da = eigendecompose(a);
    const EigenDecomposition db = eigendecompose(b);
    return da.basis * db.basis.transpose();
}

TangentVector log_map(const Spectrum& base, const Spectrum& target) {
    require_same_size(base.size(), target.size(), "log_map");
    return TangentVector(target.values - base.values);
}

Spectrum geodesic_point(const Spectrum& a, const Spectrum& b, double t) {
    require_same_size(a.size(), b.size(), "geodesic_point");
    return Spectrum((1.0 - t) * a.values + t * b.values);
}

double tangent_inner(const TangentVector& u, const TangentVector& v) {
    require_same_size(u.size(), v.size(), "tangent_inner");
    return u.components.dot(v.components);
}

std::vector<Spectrum> spectra_of(const std::vector<Network>& nets) {
    std::vector<Spectrum> out;
    out.reserve(nets.size());
    for (const Network& net : nets) {
        if (!nets.empty() && net.n() != nets.front().n())
            throw SizeMismatch("networks do not share a node count");
        out.push_back(spectrum(net));
    }
    return out;
}

} // namespace specbsa
