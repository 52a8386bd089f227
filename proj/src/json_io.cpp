#include "specbsa/json_io.hpp"

#include <cstdint>
#include <fstream>

#include "json.hpp"

#include "specbsa/errors.hpp"

namespace specbsa {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": invalid JSON: " + e.what());
    }
}

[[noreturn]] void fail(const std::string& path, const std::string& ptr, const std::string& what) {
    throw SchemaError(path + ": " + (ptr.empty() ? "/" : ptr) + ": " + what);
}

const json& require_key(const json& j, const char* key, const std::string& ptr,
                        const std::string& path) {
    if (!j.is_object()) fail(path, ptr, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path, ptr + "/" + key, "missing");
    return *it;
}

std::string require_string(const json& j, const std::string& ptr, const std::string& path) {
    if (!j.is_string()) fail(path, ptr, "expected a string");
    return j.get<std::string>();
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index n, const std::string& ptr,
                                 const std::string& path) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
        fail(path, ptr, "expected an array of " + std::to_string(n) + " rows");
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        const std::string rptr = ptr + "/" + std::to_string(r);
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            fail(path, rptr, "expected an array of " + std::to_string(n) + " numbers");
        for (Eigen::Index c = 0; c < n; ++c) {
            const json& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) fail(path, rptr + "/" + std::to_string(c), "expected a number");
            a(r, c) = v.get<double>();
        }
    }
    return a;
}

json matrix_to_json(const Eigen::MatrixXd& a) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed while writing file: " + path);
}

} // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
    check_dataset(ds);
    json j;
    j["n"] = static_cast<std::int64_t>(ds.n);
    json nets = json::array();
    for (std::size_t k = 0; k < ds.networks.size(); ++k) {
        json e;
        e["id"] = ds.networks[k].id;
        e["label"] = ds.labels[k] ? json(*ds.labels[k]) : json(nullptr);
        e["adjacency"] = matrix_to_json(ds.networks[k].adjacency);
        nets.push_back(std::move(e));
    }
    j["networks"] = std::move(nets);
    j["meta"] = ds.meta;
    write_file(j, path);
}

Dataset load_dataset(const std::string& path) {
    const json j = parse_file(path);
    if (!j.is_object()) fail(path, "", "expected an object");

    const json& jn = require_key(j, "n", "", path);
    if (!jn.is_number_integer() || jn.get<std::int64_t>() < 1)
        fail(path, "/n", "expected a positive integer");
    const Eigen::Index n = jn.get<Eigen::Index>();

    Dataset ds;
    ds.n = n;
    const json& jnets = require_key(j, "networks", "", path);
    if (!jnets.is_array()) fail(path, "/networks", "expected an array");
    for (std::size_t k = 0; k < jnets.size(); ++k) {
        const std::string ptr = "/networks/" + std::to_string(k);
        const json& e = jnets[k];
        if (!e.is_object()) fail(path, ptr, "expected an object");
        const std::string id = require_string(require_key(e, "id", ptr, path), ptr + "/id", path);
        const json& jlabel = require_key(e, "label", ptr, path);
        if (!jlabel.is_string() && !jlabel.is_null())
            fail(path, ptr + "/label", "expected a string or null");
        const Eigen::MatrixXd a =
            matrix_from_json(require_key(e, "adjacency", ptr, path), n, ptr + "/adjacency", path);
        try {
            ds.networks.push_back(validate_network(a, id));
        } catch (const Error& err) {
            fail(path, ptr + "/adjacency", err.what());
        }
        ds.labels.push_back(jlabel.is_null() ? std::optional<std::string>()
                                             : std::optional<std::string>(jlabel.get<std::string>()));
    }

    const json& jmeta = require_key(j, "meta", "", path);
    if (!jmeta.is_object()) fail(path, "/meta", "expected an object");
    for (const auto& [key, value] : jmeta.items()) {
        if (!value.is_string()) fail(path, "/meta/" + key, "expected a string");
        ds.meta[key] = value.get<std::string>();
    }

    try {
        check_dataset(ds);
    } catch (const Error& err) {
        fail(path, "/networks", err.what());
    }
    return ds;
}

RegionMapping load_region_mapping(const std::string& path) {
    const json j = parse_file(path);
    if (!j.is_object()) fail(path, "", "expected an object");
    RegionMapping mapping;

    const json& jregions = require_key(j, "regions", "", path);
    if (!jregions.is_array()) fail(path, "/regions", "expected an array of region names");
    for (std::size_t k = 0; k < jregions.size(); ++k)
        mapping.regions.push_back(
            require_string(jregions[k], "/regions/" + std::to_string(k), path));

    const json& jmap = require_key(j, "country_to_region", "", path);
    if (!jmap.is_object()) fail(path, "/country_to_region", "expected an object");
    for (const auto& [country, region] : jmap.items())
        mapping.country_to_region[country] =
            require_string(region, "/country_to_region/" + country, path);

    try {
        check_region_mapping(mapping);
    } catch (const Error& err) {
        fail(path, "", err.what());
    }
    return mapping;
}

void save_network(const Network& net, const std::string& path) {
    json j;
    j["id"] = net.id;
    j["adjacency"] = matrix_to_json(net.adjacency);
    write_file(j, path);
}

Network load_network(const std::string& path) {
    const json j = parse_file(path);
    if (!j.is_object()) fail(path, "", "expected an object");
    const std::string id = require_string(require_key(j, "id", "", path), "/id", path);
    const json& jadj = require_key(j, "adjacency", "", path);
    if (!jadj.is_array() || jadj.empty()) fail(path, "/adjacency", "expected a non-empty array");
    const Eigen::Index n = static_cast<Eigen::Index>(jadj.size());
    const Eigen::MatrixXd a = matrix_from_json(jadj, n, "/adjacency", path);
    try {
        return validate_network(a, id);
    } catch (const Error& err) {
        fail(path, "/adjacency", err.what());
    }
}

} // namespace specbsa
