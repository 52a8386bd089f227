#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "specbsa/barycentric.hpp"
#include "specbsa/baselines.hpp"
#include "specbsa/bsa.hpp"
#include "specbsa/datasets.hpp"

namespace specbsa {

inline constexpr const char* kToolVersion = "0.1.0";

// A self-contained run record. `result` carries everything the CSV plot
// tables are computed from, so re-deriving the tables from a parsed report
// (plot_tables_from_result) reproduces them byte for byte.
struct Report {
    std::string tool_version = kToolVersion;
    std::string command;
    std::map<std::string, std::string> dataset_meta;
    nlohmann::json result;
    std::map<std::string, std::string> plot_tables;  // table name -> CSV payload
};

// Deformation of the tangent-PCA mean along one principal component.
struct Deformation {
    int component = 0;
    double t = 0.0;
    Network network;
};

// Result payload builders; each tags the object with result["kind"].
nlohmann::json bsa_result_to_json(const BSAResult& result, const Dataset& ds, bool convex);
nlohmann::json backward_result_to_json(const BackwardPath& path, const BSAResult& selected,
                                       const Dataset& ds, bool convex);
nlohmann::json tpca_result_to_json(const TangentPCAResult& result, const Dataset& ds,
                                   const std::vector<Deformation>& deformations);
nlohmann::json polygon_result_to_json(const Polygon2D& polygon,
                                      const std::vector<int>& ref_indices, const Dataset& ds);

// CSV plot tables computed from a result payload alone:
//   bsa      -> per_datum_error, weights, projection_2d (three references only)
//   backward -> mse_vs_dimension plus the tables of the selected fit
//   tpca     -> explained_variance, scores
//   polygon  -> refs_2d, ref_distances, halfplanes, vertices
std::map<std::string, std::string> plot_tables_from_result(const nlohmann::json& result);

// Assembles a report: records the command line, copies the dataset metadata
// and derives the plot tables from `result`.
Report make_report(std::string command, const Dataset& ds, nlohmann::json result);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

void save_report(const Report& report, const std::string& path);
Report load_report(const std::string& path);

} // namespace specbsa
