#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specbsa/barycentric.hpp"
#include "specbsa/types.hpp"

namespace specbsa {

enum class SearchStrategy { Exhaustive, GreedyBackward };

struct BSAConfig {
    int num_refs = 1;
    bool convex = false;
    SearchStrategy search = SearchStrategy::Exhaustive;
    // Minimal spectral distance allowed between any two selected references
    // (0 disables the filter).
    double min_ref_separation = 0.0;
    bool parallel = false;
    // Exhaustive search refuses to enumerate more subsets than this.
    std::uint64_t subset_budget = 1000000;
    // Optional per-datum labels; with require_distinct_labels only subsets
    // whose references carry pairwise distinct labels are searched.
    std::vector<std::string> labels;
    bool require_distinct_labels = false;
};

struct BSAResult {
    std::vector<int> ref_indices;        // ascending dataset indices
    Eigen::MatrixXd weights;             // N x m barycentric weights, row per datum
    std::vector<Spectrum> projections;   // projected spectrum per datum
    Eigen::VectorXd per_datum_sq_error;  // squared projection error per datum
    double mse = 0.0;
};

struct BackwardStep {
    std::vector<int> ref_indices;
    double mse = 0.0;
};

// Greedy removal trace: steps[k] holds the reference set of size N-k,
// from the full dataset (mse 0 by construction) down to a single reference.
struct BackwardPath {
    std::vector<BackwardStep> steps;
};

// Selects the reference subset of size config.num_refs minimizing the mean
// squared projection error of the whole dataset, projecting with project()
// or project_convex() according to config.convex. Exhaustive search scans
// subsets in lexicographic order (ties keep the earliest); greedy-backward
// search instead reads the subset off the backward path.
BSAResult fit(const std::vector<Network>& dataset, const BSAConfig& config);
BSAResult fit_spectra(const std::vector<Spectrum>& spectra, const BSAConfig& config);

// Starting from all N data as references, repeatedly drops the reference
// whose removal increases the mse the least (ties drop the smallest index),
// recording every step down to one reference.
BackwardPath fit_backward(const std::vector<Network>& dataset, const BSAConfig& config);
BackwardPath fit_backward_spectra(const std::vector<Spectrum>& spectra, const BSAConfig& config);

// Maps a projected spectrum back to a network by conjugating with the
// datum's eigenbasis; the Frobenius reconstruction error equals the spectral
// projection error.
Network reconstruct(const Network& datum, const Projection& proj);

// 1 - (total squared projection error) / (total squared spectral deviation
// from the mean spectrum), clamped to [0, 1].
double variance_explained(const std::vector<Network>& dataset, const BSAResult& result);
double variance_explained_spectra(const std::vector<Spectrum>& spectra, const BSAResult& result);

} // namespace specbsa
