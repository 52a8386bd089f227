#pragma once

#include <vector>

#include "specbsa/types.hpp"

namespace specbsa {

// Ascending eigenvalues of the adjacency matrix, with multiplicity.
Spectrum spectrum(const Network& net);

// Eigendecomposition with eigenvalues ascending and a matching orthonormal
// eigenbasis. With repeated eigenvalues any valid basis may be returned.
EigenDecomposition eigendecompose(const Network& net);

// Distance between two unlabeled networks: the l2 distance between their
// ascending spectra. This equals the quotient distance under conjugation by
// the orthogonal group, so it is invariant under node relabeling.
double spectral_distance(const Network& a, const Network& b);
double spectral_distance(const Spectrum& a, const Spectrum& b);

// Orthogonal matrix R = Q_a * Q_b^T realizing the optimal alignment of b onto
// a: the Frobenius residual ||R b R^T - a||_F equals spectral_distance(a, b).
Eigen::MatrixXd align(const Network& a, const Network& b);

// Inverse of the unique geodesic segment: log_base(target) = target - base.
TangentVector log_map(const Spectrum& base, const Spectrum& target);

// Point (1-t)*a + t*b on the geodesic segment between two spectra. Values of
// t outside [0, 1] are permitted only while the result stays inside the cone;
// otherwise OutsideCone is thrown.
Spectrum geodesic_point(const Spectrum& a, const Spectrum& b, double t);

// Euclidean inner product of tangent vectors.
double tangent_inner(const TangentVector& u, const TangentVector& v);

// Spectra of a whole collection, in order. Throws SizeMismatch if the
// networks do not share a node count.
std::vector<Spectrum> spectra_of(const std::vector<Network>& nets);

} // namespace specbsa
