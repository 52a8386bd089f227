#include "specbsa/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <utility>

#include "specbsa/errors.hpp"
#include "specbsa/rng.hpp"
#include "specbsa/strfmt.hpp"

namespace specbsa {

namespace {

std::string numbered_id(const char* prefix, int k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-%03d", prefix, k);
    return buf;
}

void set_edge(Eigen::MatrixXd& a, int i, int j, double w) {
    a(i, j) = w;
    a(j, i) = w;
}

} // namespace

void check_dataset(const Dataset& ds) {
    if (ds.labels.size() != ds.networks.size())
        throw InvalidArgument("dataset: labels must parallel networks");
    std::set<std::string> ids;
    for (const Network& net : ds.networks) {
        if (net.n() != ds.n)
            throw InvalidArgument("dataset: network '" + net.id + "' has " +
                                  std::to_string(net.n()) + " nodes, expected " +
                                  std::to_string(ds.n));
        if (!ids.insert(net.id).second)
            throw InvalidArgument("dataset: duplicate network id '" + net.id + "'");
    }
}

std::vector<std::string> label_strings(const Dataset& ds) {
    std::vector<std::string> out;
    out.reserve(ds.labels.size());
    for (const auto& l : ds.labels) out.push_back(l.value_or(""));
    return out;
}

Network two_parameter_network(double s, double t, std::string id) {
    if (!std::isfinite(s) || !std::isfinite(t))
        throw InvalidArgument("two_parameter_network: s and t must be finite");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
    set_edge(a, 0, 2, 1.0);
    set_edge(a, 1, 2, 1.0);
    set_edge(a, 3, 4, 1.0);
    set_edge(a, 3, 5, 1.0);
    set_edge(a, 2, 3, s);
    if (t < 0.0) {
        set_edge(a, 0, 1, -t);
        set_edge(a, 4, 5, -t);
    } else if (t > 0.0) {
        set_edge(a, 0, 3, t);
        set_edge(a, 2, 4, t);
    }
    Network net;
    net.id = std::move(id);
    net.adjacency = std::move(a);
    return net;
}

Dataset generate_two_parameter(int num, std::uint64_t seed) {
    if (num < 1) throw InvalidArgument("generate_two_parameter: num must be >= 1");
    std::mt19937_64 gen(seed);
    Dataset ds;
    ds.n = 6;
    ds.meta["generator"] = "two-parameter";
    ds.meta["num"] = std::to_string(num);
    ds.meta["seed"] = std::to_string(seed);
    for (int k = 0; k < num; ++k) {
        const double s = uniform(gen, 0.5, 1.5);
        const double t = uniform(gen, -0.5, 0.5);
        const char* topology = t < 0.0 ? "eight" : (t > 0.0 ? "hourglass" : "tree");
        ds.networks.push_back(two_parameter_network(s, t, numbered_id("two-parameter", k)));
        ds.labels.emplace_back(std::string(topology) + " s=" + fmt_double(s) +
                               " t=" + fmt_double(t));
    }
    return ds;
}

Dataset generate_clustered(int per_cluster, double sigma, std::uint64_t seed) {
    if (per_cluster < 1)
        throw InvalidArgument("generate_clustered: per_cluster must be >= 1");
    if (!(sigma >= 0.0))
        throw InvalidArgument("generate_clustered: sigma must be >= 0");
    constexpr int kNodes = 10;

    Eigen::MatrixXd star = Eigen::MatrixXd::Zero(kNodes, kNodes);
    for (int j = 1; j < kNodes; ++j) set_edge(star, 0, j, 1.0);

    Eigen::MatrixXd meshed = Eigen::MatrixXd::Zero(kNodes, kNodes);
    set_edge(meshed, 0, 1, 1.0);
    for (int h = 0; h < 2; ++h)
        for (int j = 2; j < kNodes; ++j) set_edge(meshed, h, j, 1.0);

    Eigen::MatrixXd complete = Eigen::MatrixXd::Constant(kNodes, kNodes, 0.5);
    complete.diagonal().setZero();

    const std::pair<const char*, const Eigen::MatrixXd*> templates[] = {
        {"star", &star}, {"2-meshed-star", &meshed}, {"complete", &complete}};

    std::mt19937_64 gen(seed);
    Dataset ds;
    ds.n = kNodes;
    ds.meta["generator"] = "clustered";
    ds.meta["per_cluster"] = std::to_string(per_cluster);
    ds.meta["sigma"] = fmt_double(sigma);
    ds.meta["seed"] = std::to_string(seed);
    int counter = 0;
    for (const auto& [name, tpl] : templates) {
        for (int k = 0; k < per_cluster; ++k, ++counter) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kNodes, kNodes);
            for (int i = 0; i < kNodes; ++i)
                for (int j = i + 1; j < kNodes; ++j)
                    set_edge(a, i, j, std::abs((*tpl)(i, j) + sigma * gaussian(gen)));
            Network net;
            net.id = numbered_id("clustered", counter);
            net.adjacency = std::move(a);
            ds.networks.push_back(std::move(net));
            ds.labels.emplace_back(name);
        }
    }
    return ds;
}

} // namespace specbsa
