#pragma once

#include <Eigen/Dense>

#include <string>

#include "specbsa/errors.hpp"

namespace specbsa {

// An undirected weighted network, stored as its symmetric adjacency matrix.
// Self-loops (nonzero diagonal) are allowed. Use validate_network() to build
// one from untrusted input; code that constructs matrices known to be
// symmetric may fill the struct directly.
struct Network {
    std::string id;
    Eigen::MatrixXd adjacency;

    Eigen::Index n() const { return adjacency.rows(); }
};

// Checks that `raw` is square, finite and symmetric. Asymmetries below
// 1e-12 relative to the largest entry are treated as ingestion noise and
// symmetrized away; anything larger is rejected.
Network validate_network(const Eigen::MatrixXd& raw, std::string id = {});

// The ascending eigenvalue vector of a network: its canonical coordinates in
// the cone  C_n = { mu : mu_1 <= ... <= mu_n }.  Construction checks sorted
// order (with a small slack for points produced by numerical projections).
struct Spectrum {
    Eigen::VectorXd values;

    explicit Spectrum(Eigen::VectorXd v);

    Eigen::Index size() const { return values.size(); }
    double operator[](Eigen::Index i) const { return values[i]; }
};

// A full symmetric eigendecomposition: adjacency = basis * diag(spectrum) * basis^T
// with eigenvalues ascending. When eigenvalues repeat the basis is one of the
// valid orthonormal choices.
struct EigenDecomposition {
    Spectrum spectrum;
    Eigen::MatrixXd basis;
};

// A tangent vector to the cone of spectra; componentwise difference of spectra.
struct TangentVector {
    Eigen::VectorXd components;

    explicit TangentVector(Eigen::VectorXd c);

    Eigen::Index size() const { return components.size(); }
};

} // namespace specbsa
