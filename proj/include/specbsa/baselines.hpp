#pragma once

#include <vector>

#include "specbsa/types.hpp"

namespace specbsa {

// Exact node-relabeling alignment of y onto x.
struct PermutationAlignment {
    std::vector<int> permutation;  // x-node i matches y-node permutation[i]
    double residual = 0.0;         // Frobenius distance after relabeling
};

struct FrechetMeanResult {
    Network mean;
    std::vector<Network> aligned;  // inputs relabeled onto the mean
    int iterations = 0;
    bool converged = false;
};

struct TangentPCAResult {
    std::vector<Eigen::MatrixXd> components;   // symmetric, Frobenius-orthonormal
    Eigen::MatrixXd scores;                    // N x c
    Eigen::VectorXd explained_variance_ratio;  // length c, non-increasing
    Network mean;
};

// Node count above which exhaustive permutation search is refused.
inline constexpr Eigen::Index kMaxAlignmentNodes = 10;

// Minimizes ||P y P^T - x||_F over all n! node permutations; ties broken
// toward the lexicographically smallest permutation.
PermutationAlignment best_permutation_alignment(const Network& x, const Network& y);

// Applies an alignment: entry (i, j) of the result is y(perm[i], perm[j]).
Eigen::MatrixXd apply_permutation(const Eigen::MatrixXd& y, const std::vector<int>& perm);

// Fixed-point iteration: relabel every network onto the current mean, then
// average; starts from the medoid under plain Frobenius distance.
FrechetMeanResult frechet_mean(const std::vector<Network>& dataset, double tol = 1e-9,
                               int max_iter = 100);

// PCA of the differences aligned_i - mean in the space of symmetric matrices
// with the Frobenius metric.
TangentPCAResult tangent_pca(const std::vector<Network>& dataset, int num_components,
                             double tol = 1e-9, int max_iter = 100);

// mean + t * components[component]; may contain negative edge weights.
Network component_deformation(const TangentPCAResult& result, int component, double t);

// Isometric half-vectorization: upper triangle row-major with off-diagonal
// entries scaled by sqrt(2), so vector dot products equal Frobenius inner
// products of the symmetric matrices.
Eigen::VectorXd sym_vectorize(const Eigen::MatrixXd& m);
Eigen::MatrixXd sym_unvectorize(const Eigen::VectorXd& v, Eigen::Index n);

} // namespace specbsa
