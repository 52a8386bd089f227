#include "specbsa/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specbsa/errors.hpp"

namespace specbsa {

namespace {

constexpr double kStatTol = 1e-12;   // predicted-decrease stationarity test
constexpr double kMultTol = 1e-11;
constexpr double kDirTol = 1e-14;
constexpr double kRankTol = 1e-10;   // relative rank cutoff for reduced solves

// Stacks the equality rows with the active inequality rows.
Eigen::MatrixXd working_matrix(const LeastSquaresQP& prob, const std::vector<int>& active) {
    const Eigen::Index nx = prob.M.cols();
    Eigen::MatrixXd A(prob.E.rows() + static_cast<Eigen::Index>(active.size()), nx);
    if (prob.E.rows() > 0) A.topRows(prob.E.rows()) = prob.E;
    for (std::size_t k = 0; k < active.size(); ++k)
        A.row(prob.E.rows() + static_cast<Eigen::Index>(k)) = prob.C.row(active[k]);
    return A;
}

// Orthonormal basis of the null space of A (empty A means the full space).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, Eigen::Index nx) {
    if (A.rows() == 0) return Eigen::MatrixXd::Identity(nx, nx);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
    const Eigen::Index rank = qr.rank();
    Eigen::MatrixXd full_q = qr.householderQ();
    return full_q.rightCols(nx - rank);
}

} // namespace

QPSolution solve_active_set(const LeastSquaresQP& prob, const Eigen::VectorXd& x0,
                            int max_iterations) {
    const Eigen::Index nx = prob.M.cols();
    const Eigen::Index n_eq = prob.E.rows();
    const Eigen::Index n_ineq = prob.C.rows();
    if (x0.size() != nx)
        throw SizeMismatch("qp: start point has wrong dimension");

    Eigen::VectorXd x = x0;
    const double feas_scale = 1.0 + (n_ineq > 0 ? prob.d.cwiseAbs().maxCoeff() : 0.0);
    const double act_tol = 1e-11 * feas_scale;

    // Constraints binding at the start point form the initial working set.
    std::vector<int> active;
    std::vector<bool> in_working(static_cast<std::size_t>(n_ineq), false);
    for (Eigen::Index i = 0; i < n_ineq; ++i) {
        const double slack = prob.C.row(i).dot(x) - prob.d[i];
        if (slack < -act_tol)
            throw SolverFailure("qp: start point is infeasible");
        if (slack <= act_tol) {
            active.push_back(static_cast<int>(i));
            in_working[static_cast<std::size_t>(i)] = true;
        }
    }

    int stalls = 0;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        const Eigen::MatrixXd A = working_matrix(prob, active);
        const Eigen::MatrixXd Z = null_space(A, nx);

        // Minimize over the working-set manifold; minimum-norm reduced step
        // keeps the iteration deterministic when M^T M is singular.
        Eigen::VectorXd step = Eigen::VectorXd::Zero(nx);
        bool stationary = true;
        if (Z.cols() > 0) {
            const Eigen::MatrixXd B = prob.M * Z;
            const Eigen::VectorXd r = prob.q - prob.M * x;
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
            cod.setThreshold(kRankTol);
            cod.compute(B);
            const Eigen::VectorXd z = cod.solve(r);
            // Judge progress by the predicted decrease ‖B z‖, not the step
            // length: when the reduced system is rank deficient a roundoff
            // residual can still produce a sizable noise step, but it cannot
            // fake a real decrease because the residual is already orthogonal
            // to the range of B at a working-set optimum.
            if ((B * z).norm() > kStatTol * (1.0 + r.norm())) {
                step = Z * z;
                stationary = false;
            }
        }

        if (stationary) {
            // Stationary on the working set: check multipliers.
            const Eigen::VectorXd grad = prob.M.transpose() * (prob.M * x - prob.q);
            Eigen::VectorXd lam = Eigen::VectorXd::Zero(A.rows());
            if (A.rows() > 0) {
                Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A.transpose());
                lam = cod.solve(grad);
            }
            int worst = -1;
            double worst_val = -kMultTol * (1.0 + grad.norm());
            for (std::size_t k = 0; k < active.size(); ++k) {
                const double mu = lam[n_eq + static_cast<Eigen::Index>(k)];
                if (mu < worst_val) {
                    worst_val = mu;
                    worst = static_cast<int>(k);
                }
            }
            if (worst < 0) {
                QPSolution sol;
                sol.x = std::move(x);
                sol.eq_multipliers = lam.head(n_eq);
                sol.ineq_multipliers = Eigen::VectorXd::Zero(n_ineq);
                for (std::size_t k = 0; k < active.size(); ++k)
                    sol.ineq_multipliers[active[k]] =
                        std::max(0.0, lam[n_eq + static_cast<Eigen::Index>(k)]);
                sol.active.assign(static_cast<std::size_t>(n_ineq), false);
                for (int i : active) sol.active[static_cast<std::size_t>(i)] = true;
                sol.iterations = iter;
                return sol;
            }
            in_working[static_cast<std::size_t>(active[static_cast<std::size_t>(worst)])] =
                false;
            active.erase(active.begin() + worst);
            if (++stalls > static_cast<int>(2 * (n_ineq + n_eq) + 8))
                throw SolverFailure("qp: stalled near a degenerate vertex");
            continue;
        }

        // Longest feasible step toward the working-set optimum.
        double alpha = 1.0;
        int blocking = -1;
        for (Eigen::Index i = 0; i < n_ineq; ++i) {
            if (in_working[static_cast<std::size_t>(i)]) continue;
            const double direction = prob.C.row(i).dot(step);
            if (direction >= -kDirTol * (1.0 + step.norm())) continue;
            const double slack = prob.C.row(i).dot(x) - prob.d[i];
            const double a = std::max(0.0, slack) / (-direction);
            if (a < alpha) {
                alpha = a;
                blocking = static_cast<int>(i);
            }
        }

        x += alpha * step;
        if (blocking >= 0) {
            active.push_back(blocking);
            in_working[static_cast<std::size_t>(blocking)] = true;
        }
        if (alpha > 1e-12)
            stalls = 0;
        else if (++stalls > static_cast<int>(2 * (n_ineq + n_eq) + 8))
            throw SolverFailure("qp: stalled near a degenerate vertex");
    }
    throw SolverFailure("qp: iteration budget of " + std::to_string(max_iterations) +
                        " exhausted");
}

double kkt_residual(const LeastSquaresQP& prob, const QPSolution& sol) {
    const Eigen::VectorXd grad = prob.M.transpose() * (prob.M * sol.x - prob.q);
    Eigen::VectorXd stat = grad;
    if (prob.E.rows() > 0) stat -= prob.E.transpose() * sol.eq_multipliers;
    if (prob.C.rows() > 0) stat -= prob.C.transpose() * sol.ineq_multipliers;

    double res = stat.cwiseAbs().maxCoeff();
    if (prob.E.rows() > 0)
        res = std::max(res, (prob.E * sol.x - prob.f).cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < prob.C.rows(); ++i) {
        const double slack = prob.C.row(i).dot(sol.x) - prob.d[i];
        res = std::max(res, -slack);
        res = std::max(res, -sol.ineq_multipliers[i]);
        res = std::max(res, std::abs(sol.ineq_multipliers[i] * std::min(slack, 1.0)));
    }
    return res;
}

} // namespace specbsa
