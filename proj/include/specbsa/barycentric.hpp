#pragma once

#include <array>
#include <vector>

#include "specbsa/types.hpp"

namespace specbsa {

// One facet-defining inequality alpha^T mu >= beta on spectra.
struct HalfSpace {
    Eigen::VectorXd alpha;
    double beta = 0.0;
};

// The set of all barycenters of m reference spectra: a convex polytope inside
// the cone of sorted vectors, cut out by at most n-1 half-spaces.
struct BarycentricSubspace {
    std::vector<Spectrum> refs;
    std::vector<HalfSpace> halfspaces;

    Eigen::Index n() const { return refs.empty() ? 0 : refs.front().size(); }
    Eigen::Index num_refs() const { return static_cast<Eigen::Index>(refs.size()); }

    // n x m matrix whose columns are the reference spectra.
    Eigen::MatrixXd ref_matrix() const;
    // (n-1) x m matrix of reference eigengaps; row r holds
    // refs[j][r+1] - refs[j][r] across references j.
    Eigen::MatrixXd gap_matrix() const;
};

// Barycentric weights of a point with respect to the references; they sum
// to one but individual weights may be negative.
struct BarycentricCoordinates {
    Eigen::VectorXd weights;
};

// Result of projecting a spectrum onto a barycentric subspace.
struct Projection {
    BarycentricCoordinates coords;
    Spectrum point;
    double squared_error = 0.0;
};

// Builds the subspace of the given reference spectra. Each half-space
// (alpha_r, beta_r) is the minimum-norm solution of the linear system that
// maps every reference to its r-th eigengap, so alpha_r^T mu - beta_r
// extends the gap function mu_{r+1} - mu_r to the affine hull of the
// references.
BarycentricSubspace compute_halfspaces(const std::vector<Spectrum>& refs);

// True iff `s` lies in the affine hull of the references (least-squares
// residual at most tol) and satisfies every half-space within tol. The raw
// vector overload also accepts points outside the cone of sorted vectors,
// for which it returns false whenever some half-space is violated.
bool contains(const BarycentricSubspace& bs, const Eigen::VectorXd& values, double tol = 1e-9);
bool contains(const BarycentricSubspace& bs, const Spectrum& s, double tol = 1e-9);

// Least-squares projection of `s` onto the subspace: minimizes
// ||s - sum_j w_j ref_j||^2 over weights summing to one, subject to the
// combined point staying inside the cone. When several weight vectors
// produce the projected point, the minimum-norm one is returned.
Projection project(const BarycentricSubspace& bs, const Spectrum& s);

// As project(), with the additional constraint that all weights are
// nonnegative, i.e. projection onto the convex hull of the references.
Projection project_convex(const BarycentricSubspace& bs, const Spectrum& s);

// Independent check of a projection's KKT conditions, recomputed from the
// subspace and the reported weights alone. Returns the max-norm residual
// over stationarity, primal feasibility and complementary slackness.
double projection_kkt_residual(const BarycentricSubspace& bs, const Spectrum& s,
                               const Projection& proj, bool convex);

// Dimension of the affine hull of the references (rank of the centered
// reference matrix at relative tolerance `tol`).
Eigen::Index affine_dimension(const BarycentricSubspace& bs, double tol = 1e-9);

// A facet line alpha^T (x, y) >= beta of the planar polygon.
struct HalfPlane2D {
    Eigen::Vector2d alpha;
    double beta = 0.0;
};

// Isometric planar drawing of the subspace of three references: reference
// positions with pairwise planar distances equal to the pairwise spectral
// distances, the n-1 facet lines, and the polygon they bound. `closed`
// reports whether the polygon is bounded.
struct Polygon2D {
    std::array<Eigen::Vector2d, 3> ref_points;
    std::vector<HalfPlane2D> halfplanes;
    std::vector<Eigen::Vector2d> vertices;  // counterclockwise when closed
    bool closed = false;
};

Polygon2D embed_polygon_2d(const std::vector<Spectrum>& refs);

} // namespace specbsa
