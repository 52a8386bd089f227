#pragma once

#include <Eigen/Dense>

#include <vector>

namespace specbsa {

// Convex least-squares program
//
//   minimize    0.5 * || M x - q ||^2
//   subject to  E x  = f
//               C x >= d
//
// M^T M may be singular; the minimizing point M x is still unique and the
// solver resolves ties between minimizers deterministically (minimum-norm
// steps). E or C may be empty (0 rows).
struct LeastSquaresQP {
    Eigen::MatrixXd M;
    Eigen::VectorXd q;
    Eigen::MatrixXd E;
    Eigen::VectorXd f;
    Eigen::MatrixXd C;
    Eigen::VectorXd d;
};

struct QPSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd eq_multipliers;    // one per row of E
    Eigen::VectorXd ineq_multipliers;  // one per row of C, zero when inactive
    std::vector<bool> active;          // per row of C
    int iterations = 0;
};

// Primal active-set method with null-space steps. `x0` must be feasible.
// Throws SolverFailure if the iteration budget is exhausted or the method
// stalls without reaching a KKT point.
QPSolution solve_active_set(const LeastSquaresQP& prob, const Eigen::VectorXd& x0,
                            int max_iterations = 10000);

// Max-norm KKT residual of a candidate solution (stationarity, primal and
// dual feasibility, complementary slackness).
double kkt_residual(const LeastSquaresQP& prob, const QPSolution& sol);

} // namespace specbsa
