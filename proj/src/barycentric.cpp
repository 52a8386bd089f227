#include "specbsa/barycentric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "specbsa/errors.hpp"
#include "specbsa/qp.hpp"

namespace specbsa {

namespace {

constexpr double kConsistencyTol = 1e-8;

void check_refs(const std::vector<Spectrum>& refs) {
    if (refs.empty()) throw InvalidArgument("need at least one reference spectrum");
    const Eigen::Index n = refs.front().size();
    for (const Spectrum& r : refs)
        if (r.size() != n) throw SizeMismatch("reference spectra have different lengths");
    if (n < 2) throw InvalidArgument("reference spectra must have length at least 2");
}

} // namespace

Eigen::MatrixXd BarycentricSubspace::ref_matrix() const {
    check_refs(refs);
    const Eigen::Index n = refs.front().size();
    Eigen::MatrixXd L(n, num_refs());
    for (Eigen::Index j = 0; j < num_refs(); ++j) L.col(j) = refs[static_cast<size_t>(j)].values;
    return L;
}

Eigen::MatrixXd BarycentricSubspace::gap_matrix() const {
    check_refs(refs);
    const Eigen::Index n = refs.front().size();
    Eigen::MatrixXd G(n - 1, num_refs());
    for (Eigen::Index j = 0; j < num_refs(); ++j) {
        const Eigen::VectorXd& v = refs[static_cast<size_t>(j)].values;
        G.col(j) = v.tail(n - 1) - v.head(n - 1);
    }
    return G;
}

BarycentricSubspace compute_halfspaces(const std::vector<Spectrum>& refs) {
    check_refs(refs);
    BarycentricSubspace bs;
    bs.refs = refs;

    const Eigen::Index n = refs.front().size();
    const Eigen::Index m = bs.num_refs();

    // Lambda stacks the reference spectra as columns with a trailing row of
    // ones; solving Lambda^T [alpha; -beta] = theta_r makes alpha^T mu - beta
    // reproduce the r-th eigengap on every reference.
    Eigen::MatrixXd lambda(n + 1, m);
    lambda.topRows(n) = bs.ref_matrix();
    lambda.row(n).setOnes();
    const Eigen::MatrixXd gaps = bs.gap_matrix();

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lambda.transpose());
    bs.halfspaces.reserve(static_cast<size_t>(n - 1));
    for (Eigen::Index r = 0; r + 1 < n; ++r) {
        const Eigen::VectorXd theta = gaps.row(r).transpose();
        const Eigen::VectorXd v = cod.solve(theta);  // minimum-norm solution
        const double residual = (lambda.transpose() * v - theta).norm();
        if (residual > kConsistencyTol * std::max(1.0, theta.norm()))
            throw InconsistentSystem("eigengap " + std::to_string(r) +
                                     " is not reproducible on the reference spectra (residual " +
                                     std::to_string(residual) + ")");
        HalfSpace hs;
        hs.alpha = v.head(n);
        hs.beta = -v(n);
        bs.halfspaces.push_back(std::move(hs));
    }
    return bs;
}

bool contains(const BarycentricSubspace& bs, const Spectrum& s, double tol) {
    return contains(bs, s.values, tol);
}

bool contains(const BarycentricSubspace& bs, const Eigen::VectorXd& values, double tol) {
    check_refs(bs.refs);
    const Eigen::Index n = bs.n();
    if (values.size() != n) throw SizeMismatch("spectrum length does not match the subspace");
    if (static_cast<Eigen::Index>(bs.halfspaces.size()) != n - 1)
        throw InvalidArgument("subspace is missing its half-spaces; build it with compute_halfspaces");

    // Affine-hull membership: least-squares residual of s against
    // ref_0 + span(ref_j - ref_0).
    const Eigen::VectorXd base = bs.refs.front().values;
    const Eigen::Index m = bs.num_refs();
    double affine_residual;
    if (m == 1) {
        affine_residual = (values - base).norm();
    } else {
        Eigen::MatrixXd span(n, m - 1);
        for (Eigen::Index j = 1; j < m; ++j)
            span.col(j - 1) = bs.refs[static_cast<size_t>(j)].values - base;
        const Eigen::VectorXd y = values - base;
        const Eigen::VectorXd z = span.completeOrthogonalDecomposition().solve(y);
        affine_residual = (span * z - y).norm();
    }
    if (affine_residual > tol) return false;

    for (const HalfSpace& hs : bs.halfspaces)
        if (hs.alpha.dot(values) < hs.beta - tol) return false;
    return true;
}

namespace {

// Shared setup for both projection variants: least-squares fit of the weights
// with the simplex-sum equality and the cone (eigengap) inequalities.
LeastSquaresQP projection_qp(const BarycentricSubspace& bs, const Spectrum& s, bool convex) {
    const Eigen::Index n = bs.n();
    const Eigen::Index m = bs.num_refs();
    if (s.size() != n) throw SizeMismatch("spectrum length does not match the subspace");

    LeastSquaresQP qp;
    qp.M = bs.ref_matrix();
    qp.q = s.values;
    qp.E = Eigen::MatrixXd::Ones(1, m);
    qp.f = Eigen::VectorXd::Ones(1);
    const Eigen::MatrixXd gaps = bs.gap_matrix();
    if (convex) {
        qp.C.resize(n - 1 + m, m);
        qp.C.topRows(n - 1) = gaps;
        qp.C.bottomRows(m) = Eigen::MatrixXd::Identity(m, m);
    } else {
        qp.C = gaps;
    }
    qp.d = Eigen::VectorXd::Zero(qp.C.rows());
    return qp;
}

Projection finish_projection(const BarycentricSubspace& bs, const Spectrum& s,
                             Eigen::VectorXd weights) {
    const Eigen::MatrixXd L = bs.ref_matrix();
    Eigen::VectorXd point = L * weights;
    // Clamp roundoff-level cone violations of the combined point so the
    // Spectrum constructor sees a sorted vector.
    for (Eigen::Index i = 0; i + 1 < point.size(); ++i)
        if (point(i) > point(i + 1)) {
            const double mid = 0.5 * (point(i) + point(i + 1));
            point(i) = point(i + 1) = mid;
        }
    Projection proj{BarycentricCoordinates{std::move(weights)}, Spectrum(point), 0.0};
    proj.squared_error = (s.values - point).squaredNorm();
    return proj;
}

} // namespace

Projection project(const BarycentricSubspace& bs, const Spectrum& s) {
    check_refs(bs.refs);
    const Eigen::Index m = bs.num_refs();
    const LeastSquaresQP qp = projection_qp(bs, s, /*convex=*/false);
    const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    const QPSolution sol = solve_active_set(qp, w0);

    // The projected point is unique but its weights need not be when the
    // references are affinely dependent; report the minimum-norm weights.
    const Eigen::Index n = bs.n();
    Eigen::MatrixXd stacked(n + 1, m);
    stacked.topRows(n) = qp.M;
    stacked.row(n).setOnes();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = qp.M * sol.x;
    rhs(n) = 1.0;
    Eigen::VectorXd weights = stacked.completeOrthogonalDecomposition().solve(rhs);
    return finish_projection(bs, s, std::move(weights));
}

Projection project_convex(const BarycentricSubspace& bs, const Spectrum& s) {
    check_refs(bs.refs);
    const Eigen::Index m = bs.num_refs();
    const Eigen::Index n = bs.n();
    const LeastSquaresQP qp = projection_qp(bs, s, /*convex=*/true);
    const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    const QPSolution sol = solve_active_set(qp, w0);

    // Minimum-norm nonnegative weights that realize the same projected point.
    const Eigen::VectorXd point = qp.M * sol.x;
    LeastSquaresQP polish;
    polish.M = Eigen::MatrixXd::Identity(m, m);
    polish.q = Eigen::VectorXd::Zero(m);
    polish.E.resize(n + 1, m);
    polish.E.topRows(n) = qp.M;
    polish.E.row(n).setOnes();
    polish.f.resize(n + 1);
    polish.f.head(n) = point;
    polish.f(n) = 1.0;
    polish.C = Eigen::MatrixXd::Identity(m, m);
    polish.d = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd start = sol.x.cwiseMax(0.0);
    const QPSolution polished = solve_active_set(polish, start);
    return finish_projection(bs, s, polished.x);
}

double projection_kkt_residual(const BarycentricSubspace& bs, const Spectrum& s,
                               const Projection& proj, bool convex) {
    check_refs(bs.refs);
    const Eigen::Index m = bs.num_refs();
    const Eigen::Index n = bs.n();
    if (proj.coords.weights.size() != m)
        throw SizeMismatch("weight vector length does not match the reference count");
    if (s.size() != n) throw SizeMismatch("spectrum length does not match the subspace");

    const Eigen::MatrixXd L = bs.ref_matrix();
    const Eigen::MatrixXd G = bs.gap_matrix();
    const Eigen::VectorXd& w = proj.coords.weights;
    const Eigen::VectorXd point = L * w;
    const Eigen::VectorXd grad = L.transpose() * (point - s.values);
    const Eigen::VectorXd cone_slack = G * w;

    double residual = std::abs(w.sum() - 1.0);
    residual = std::max(residual, std::max(0.0, -cone_slack.minCoeff()));
    if (convex && m > 0) residual = std::max(residual, std::max(0.0, -w.minCoeff()));

    // Recover multipliers for the constraints that are (numerically) active
    // and test stationarity with the nonnegative parts only.
    const double act_tol = 1e-7 * (1.0 + cone_slack.cwiseAbs().maxCoeff() +
                                   w.cwiseAbs().maxCoeff());
    std::vector<Eigen::VectorXd> rows;
    rows.push_back(Eigen::VectorXd::Ones(m));  // equality multiplier, free sign
    std::vector<double> slacks{0.0};
    for (Eigen::Index r = 0; r + 1 < n; ++r)
        if (cone_slack(r) <= act_tol) {
            rows.push_back(G.row(r).transpose());
            slacks.push_back(cone_slack(r));
        }
    if (convex)
        for (Eigen::Index j = 0; j < m; ++j)
            if (w(j) <= act_tol) {
                rows.push_back(Eigen::VectorXd::Unit(m, j));
                slacks.push_back(w(j));
            }

    Eigen::MatrixXd at(m, static_cast<Eigen::Index>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) at.col(static_cast<Eigen::Index>(k)) = rows[k];
    Eigen::VectorXd mult = at.completeOrthogonalDecomposition().solve(grad);
    for (Eigen::Index k = 1; k < mult.size(); ++k) mult(k) = std::max(mult(k), 0.0);
    residual = std::max(residual, (grad - at * mult).lpNorm<Eigen::Infinity>());
    for (Eigen::Index k = 1; k < mult.size(); ++k)
        residual = std::max(residual, std::abs(mult(k) * slacks[static_cast<size_t>(k)]));
    return residual;
}

Eigen::Index affine_dimension(const BarycentricSubspace& bs, double tol) {
    check_refs(bs.refs);
    const Eigen::Index m = bs.num_refs();
    if (m == 1) return 0;
    const Eigen::VectorXd base = bs.refs.front().values;
    Eigen::MatrixXd span(bs.n(), m - 1);
    for (Eigen::Index j = 1; j < m; ++j)
        span.col(j - 1) = bs.refs[static_cast<size_t>(j)].values - base;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(span);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    return rank;
}

Polygon2D embed_polygon_2d(const std::vector<Spectrum>& refs) {
    if (refs.size() != 3) throw InvalidArgument("planar embedding needs exactly three references");
    check_refs(refs);
    const Eigen::Index n = refs.front().size();

    const double d01 = (refs[0].values - refs[1].values).norm();
    const double d02 = (refs[0].values - refs[2].values).norm();
    const double d12 = (refs[1].values - refs[2].values).norm();
    const double dmax = std::max({d01, d02, d12});
    if (dmax == 0.0 || std::min({d01, d02, d12}) <= 1e-12 * dmax)
        throw DegenerateTriangle("reference spectra are not pairwise distinct");

    Polygon2D poly;
    poly.ref_points[0] = Eigen::Vector2d(0.0, 0.0);
    poly.ref_points[1] = Eigen::Vector2d(d01, 0.0);
    const double x2 = (d01 * d01 + d02 * d02 - d12 * d12) / (2.0 * d01);
    const double y2sq = d02 * d02 - x2 * x2;
    const double y2 = y2sq > 0.0 ? std::sqrt(y2sq) : 0.0;
    if (y2 <= 1e-10 * dmax)
        throw DegenerateTriangle("reference spectra are collinear in spectral space");
    poly.ref_points[2] = Eigen::Vector2d(x2, y2);

    // Each facet line interpolates the r-th eigengap at the three reference
    // positions: alpha . a_i + c = gap_r(ref_i), with beta = -c.
    Eigen::Matrix3d interp;
    for (int i = 0; i < 3; ++i)
        interp.row(i) << poly.ref_points[static_cast<size_t>(i)].x(),
            poly.ref_points[static_cast<size_t>(i)].y(), 1.0;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(interp);
    if (!lu.isInvertible())
        throw SingularSystem("facet interpolation system is singular");

    poly.halfplanes.reserve(static_cast<size_t>(n - 1));
    double coef_scale = 0.0;
    for (Eigen::Index r = 0; r + 1 < n; ++r) {
        Eigen::Vector3d g;
        for (int i = 0; i < 3; ++i) {
            const Eigen::VectorXd& v = refs[static_cast<size_t>(i)].values;
            g(i) = v(r + 1) - v(r);
        }
        const Eigen::Vector3d sol = lu.solve(g);
        HalfPlane2D hp;
        hp.alpha = sol.head<2>();
        hp.beta = -sol(2);
        coef_scale = std::max(coef_scale, hp.alpha.norm());
        poly.halfplanes.push_back(hp);
    }

    // Lines that actually constrain the plane; an (almost) zero alpha comes
    // from a gap that vanishes identically on the references.
    std::vector<Eigen::Index> active;
    for (size_t k = 0; k < poly.halfplanes.size(); ++k)
        if (poly.halfplanes[k].alpha.norm() > 1e-12 * std::max(1.0, coef_scale))
            active.push_back(static_cast<Eigen::Index>(k));

    // Bounded iff the recession cone {u : alpha_k . u >= 0 for all k} is
    // trivial; any nonzero recession direction can be taken orthogonal to
    // some active line, so testing both perpendiculars per line suffices.
    bool unbounded = active.empty();
    for (Eigen::Index k : active) {
        const Eigen::Vector2d a = poly.halfplanes[static_cast<size_t>(k)].alpha.normalized();
        for (const Eigen::Vector2d u : {Eigen::Vector2d(-a.y(), a.x()), Eigen::Vector2d(a.y(), -a.x())}) {
            bool recession = true;
            for (Eigen::Index j : active) {
                const HalfPlane2D& hp = poly.halfplanes[static_cast<size_t>(j)];
                if (hp.alpha.dot(u) < -1e-12 * hp.alpha.norm()) { recession = false; break; }
            }
            if (recession) { unbounded = true; break; }
        }
        if (unbounded) break;
    }
    poly.closed = !unbounded;

    // Vertices: feasible intersections of pairs of active lines.
    std::vector<Eigen::Vector2d> verts;
    const double feas_tol = 1e-9 * (1.0 + dmax);
    for (size_t a = 0; a < active.size(); ++a)
        for (size_t b = a + 1; b < active.size(); ++b) {
            const HalfPlane2D& ha = poly.halfplanes[static_cast<size_t>(active[a])];
            const HalfPlane2D& hb = poly.halfplanes[static_cast<size_t>(active[b])];
            Eigen::Matrix2d sys;
            sys.row(0) = ha.alpha.transpose();
            sys.row(1) = hb.alpha.transpose();
            const double det = sys(0, 0) * sys(1, 1) - sys(0, 1) * sys(1, 0);
            if (std::abs(det) <= 1e-12 * ha.alpha.norm() * hb.alpha.norm()) continue;
            const Eigen::Vector2d v = sys.inverse() * Eigen::Vector2d(ha.beta, hb.beta);
            bool feasible = true;
            for (Eigen::Index j : active) {
                const HalfPlane2D& hp = poly.halfplanes[static_cast<size_t>(j)];
                if (hp.alpha.dot(v) < hp.beta - feas_tol * std::max(1.0, hp.alpha.norm())) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;
            bool duplicate = false;
            for (const Eigen::Vector2d& u : verts)
                if ((u - v).norm() <= 1e-9 * (1.0 + dmax)) { duplicate = true; break; }
            if (!duplicate) verts.push_back(v);
        }

    if (verts.size() > 2) {
        Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
        for (const Eigen::Vector2d& v : verts) centroid += v;
        centroid /= static_cast<double>(verts.size());
        std::sort(verts.begin(), verts.end(), [&](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
            return std::atan2(u.y() - centroid.y(), u.x() - centroid.x()) <
                   std::atan2(v.y() - centroid.y(), v.x() - centroid.x());
        });
    }
    poly.vertices = std::move(verts);
    return poly;
}

} // namespace specbsa
