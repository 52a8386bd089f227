#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specbsa/types.hpp"

namespace specbsa {

// An ordered collection of networks sharing a node count, with an optional
// label per network (cluster id, airline name, ...) and free-form string
// metadata (generator name, seed, parameters, ...).
struct Dataset {
    Eigen::Index n = 0;
    std::vector<Network> networks;
    std::vector<std::optional<std::string>> labels;  // parallel to networks
    std::map<std::string, std::string> meta;

    Eigen::Index size() const { return static_cast<Eigen::Index>(networks.size()); }
};

// Checks the Dataset invariants: labels parallel to networks, every network
// square of size n, ids pairwise distinct. Throws InvalidArgument.
void check_dataset(const Dataset& ds);

// Labels as plain strings (empty string for missing), e.g. for BSAConfig.
std::vector<std::string> label_strings(const Dataset& ds);

// One member of the two-parameter family on 6 nodes: a tree with edges
// {0,2},{1,2},{3,4},{3,5} of weight 1 and a central edge {2,3} of weight s;
// t < 0 additionally closes the two end triangles with edges {0,1},{4,5} of
// weight |t| (the "eight"), t > 0 instead adds edges {0,3},{2,4} of weight t
// (the "hourglass", two triangles sharing the central edge).
Network two_parameter_network(double s, double t, std::string id = {});

// `num` networks X(s,t) with (s,t) drawn uniformly from
// [1/2, 3/2] x [-1/2, 1/2]; labels record the topology and (s, t).
Dataset generate_two_parameter(int num, std::uint64_t seed);

// Three clusters of 10-node networks: per_cluster noisy copies of each of
// three templates (star with unit weights, 2-fully-meshed star with unit
// weights, complete network with weight 1/2), obtained by adding
// Gaussian(0, sigma) noise to every off-diagonal weight and taking absolute
// values; diagonals stay zero. Labels name the template.
Dataset generate_clustered(int per_cluster, double sigma, std::uint64_t seed);

} // namespace specbsa
