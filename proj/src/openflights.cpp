#include "specbsa/openflights.hpp"

#include <algorithm>
#include <fstream>
#include <utility>

#include "specbsa/errors.hpp"

namespace specbsa {

namespace {

// RFC-4180-style split: comma-separated fields, optionally wrapped in double
// quotes with "" escaping an embedded quote. OpenFlights marks null fields
// with \N, normalized here to the empty string.
std::vector<std::string> split_csv_row(const std::string& line, const std::string& file,
                                       long line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (in_quotes)
        throw ParseError(file + " line " + std::to_string(line_no) +
                         ": unterminated quoted field");
    fields.push_back(std::move(cur));
    for (std::string& f : fields)
        if (f == "\\N") f.clear();
    return fields;
}

struct AirportTable {
    std::map<std::string, std::string> by_id;    // airport id -> country
    std::map<std::string, std::string> by_code;  // IATA/ICAO code -> country
};

AirportTable load_airports(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open airports file: " + path);
    AirportTable table;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_row(line, path, line_no);
        if (f.size() < 4)
            throw ParseError(path + " line " + std::to_string(line_no) +
                             ": expected at least 4 comma-separated fields "
                             "(airport id, name, city, country), got " +
                             std::to_string(f.size()));
        if (!f[0].empty()) table.by_id.emplace(f[0], f[3]);
        if (f.size() > 4 && !f[4].empty()) table.by_code.emplace(f[4], f[3]);
        if (f.size() > 5 && !f[5].empty()) table.by_code.emplace(f[5], f[3]);
    }
    return table;
}

enum class PlaceKind { Region, Unmapped, Unknown };

struct Placement {
    PlaceKind kind = PlaceKind::Unknown;
    int region = -1;
    std::string detail;  // unknown airport reference or unmapped country
};

// Resolves a route endpoint to a region node: airport id first, then the
// airport code when the id is null or absent.
Placement place_endpoint(const AirportTable& table,
                         const std::map<std::string, int>& region_index,
                         const std::map<std::string, std::string>& country_to_region,
                         const std::string& code, const std::string& id) {
    const std::string* country = nullptr;
    if (!id.empty()) {
        const auto it = table.by_id.find(id);
        if (it != table.by_id.end()) country = &it->second;
    }
    if (!country && !code.empty()) {
        const auto it = table.by_code.find(code);
        if (it != table.by_code.end()) country = &it->second;
    }
    if (!country) return {PlaceKind::Unknown, -1, id.empty() ? code : id};
    const auto rit = country_to_region.find(*country);
    if (rit == country_to_region.end()) return {PlaceKind::Unmapped, -1, *country};
    return {PlaceKind::Region, region_index.at(rit->second), {}};
}

} // namespace

void check_region_mapping(const RegionMapping& mapping) {
    if (mapping.regions.size() != 6)
        throw SchemaError("region mapping: expected exactly 6 regions, got " +
                          std::to_string(mapping.regions.size()));
    std::map<std::string, int> seen;
    for (const std::string& r : mapping.regions)
        if (++seen[r] > 1) throw SchemaError("region mapping: duplicate region '" + r + "'");
    for (const auto& [country, region] : mapping.country_to_region)
        if (seen.find(region) == seen.end())
            throw SchemaError("region mapping: country '" + country +
                              "' maps to unlisted region '" + region + "'");
}

Dataset ingest_openflights(const std::string& routes_path, const std::string& airports_path,
                           const RegionMapping& mapping,
                           const std::vector<std::string>& airlines,
                           std::vector<std::string>* warnings,
                           std::vector<IngestStats>* stats) {
    check_region_mapping(mapping);
    if (airlines.empty()) throw EmptySelection("ingest: no airline codes requested");

    std::map<std::string, std::size_t> wanted;  // airline code -> request position
    for (std::size_t k = 0; k < airlines.size(); ++k) {
        if (airlines[k].empty())
            throw InvalidArgument("ingest: empty airline code requested");
        if (!wanted.emplace(airlines[k], k).second)
            throw InvalidArgument("ingest: airline code '" + airlines[k] +
                                  "' requested twice");
    }

    const AirportTable table = load_airports(airports_path);
    std::map<std::string, int> region_index;
    for (int i = 0; i < 6; ++i) region_index.emplace(mapping.regions[static_cast<std::size_t>(i)], i);

    std::vector<Eigen::MatrixXd> counts(airlines.size(), Eigen::MatrixXd::Zero(6, 6));
    std::vector<IngestStats> tallies(airlines.size());
    for (std::size_t k = 0; k < airlines.size(); ++k) tallies[k].airline = airlines[k];

    std::ifstream in(routes_path);
    if (!in) throw IoError("cannot open routes file: " + routes_path);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_row(line, routes_path, line_no);
        if (f.size() < 6)
            throw ParseError(routes_path + " line " + std::to_string(line_no) +
                             ": expected at least 6 comma-separated fields "
                             "(airline, airline id, source airport, source airport id, "
                             "destination airport, destination airport id), got " +
                             std::to_string(f.size()));
        const auto it = wanted.find(f[0]);
        if (it == wanted.end()) continue;
        const std::size_t k = it->second;
        IngestStats& tally = tallies[k];
        ++tally.total_routes;
        const Placement src = place_endpoint(table, region_index, mapping.country_to_region,
                                             f[2], f[3]);
        const Placement dst = place_endpoint(table, region_index, mapping.country_to_region,
                                             f[4], f[5]);
        if (src.kind == PlaceKind::Unknown || dst.kind == PlaceKind::Unknown) {
            ++tally.unknown_airport_routes;
            if (warnings)
                warnings->push_back(routes_path + " line " + std::to_string(line_no) +
                                    ": airline " + f[0] + ": unknown airport '" +
                                    (src.kind == PlaceKind::Unknown ? src.detail : dst.detail) +
                                    "', route counted in denominator only");
        } else if (src.kind == PlaceKind::Unmapped || dst.kind == PlaceKind::Unmapped) {
            ++tally.unmapped_routes;
            if (warnings)
                warnings->push_back(routes_path + " line " + std::to_string(line_no) +
                                    ": airline " + f[0] + ": country '" +
                                    (src.kind == PlaceKind::Unmapped ? src.detail : dst.detail) +
                                    "' is outside the mapped regions, route counted in "
                                    "denominator only");
        } else {
            ++tally.mapped_routes;
            // Direction is collapsed: one route adds one count to the
            // unordered region pair (diagonal when both endpoints agree).
            const int i = std::min(src.region, dst.region);
            const int j = std::max(src.region, dst.region);
            counts[k](i, j) += 1.0;
        }
    }

    Dataset ds;
    ds.n = 6;
    ds.meta["generator"] = "openflights";
    ds.meta["routes_file"] = routes_path;
    ds.meta["airports_file"] = airports_path;
    std::string joined;
    for (const std::string& r : mapping.regions) {
        if (!joined.empty()) joined += "|";
        joined += r;
    }
    ds.meta["regions"] = joined;

    for (std::size_t k = 0; k < airlines.size(); ++k) {
        if (tallies[k].total_routes == 0) {
            if (warnings)
                warnings->push_back("airline '" + airlines[k] +
                                    "' matches no route; skipped");
            continue;
        }
        const double total = static_cast<double>(tallies[k].total_routes);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = i; j < 6; ++j) {
                const double w = counts[k](i, j) / total;
                a(i, j) = w;
                a(j, i) = w;
            }
        Network net;
        net.id = airlines[k];
        net.adjacency = std::move(a);
        ds.networks.push_back(std::move(net));
        ds.labels.emplace_back(airlines[k]);
    }
    if (stats) *stats = tallies;
    if (ds.networks.empty())
        throw EmptySelection("ingest: none of the requested airlines has any route");
    check_dataset(ds);
    return ds;
}

} // namespace specbsa
