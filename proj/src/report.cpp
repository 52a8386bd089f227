#include "specbsa/report.hpp"

#include <fstream>
#include <utility>

#include "specbsa/errors.hpp"
#include "specbsa/spectral.hpp"
#include "specbsa/strfmt.hpp"

namespace specbsa {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
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

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string label_text(const json& labels, std::size_t i) {
    const json& l = labels[i];
    return l.is_null() ? std::string() : l.get<std::string>();
}

json network_to_json(const Network& net) {
    json j;
    j["id"] = net.id;
    j["adjacency"] = matrix_to_json(net.adjacency);
    return j;
}

json label_json(const Dataset& ds, int index) {
    const auto& l = ds.labels[static_cast<std::size_t>(index)];
    return l ? json(*l) : json(nullptr);
}

std::map<std::string, std::string> bsa_tables(const json& j) {
    std::map<std::string, std::string> out;
    const json& ids = j.at("datum_ids");
    const json& labels = j.at("datum_labels");
    const json& sq_err = j.at("per_datum_sq_error");
    const json& weights = j.at("weights");
    const json& ref_indices = j.at("ref_indices");
    const std::size_t num_data = ids.size();
    const std::size_t num_refs = ref_indices.size();

    std::string errors = "index,id,label,squared_error\n";
    for (std::size_t i = 0; i < num_data; ++i)
        errors += std::to_string(i) + "," + csv_escape(ids[i].get<std::string>()) + "," +
                  csv_escape(label_text(labels, i)) + "," +
                  fmt_double(sq_err[i].get<double>()) + "\n";
    out["per_datum_error"] = std::move(errors);

    std::string wtable = "index,id";
    for (std::size_t r = 0; r < num_refs; ++r) wtable += ",w" + std::to_string(r);
    wtable += "\n";
    for (std::size_t i = 0; i < num_data; ++i) {
        wtable += std::to_string(i) + "," + csv_escape(ids[i].get<std::string>());
        for (std::size_t r = 0; r < num_refs; ++r)
            wtable += "," + fmt_double(weights[i][r].get<double>());
        wtable += "\n";
    }
    out["weights"] = std::move(wtable);

    if (num_refs == 3) {
        const json& ref_ids = j.at("ref_ids");
        const json& ref_spectra = j.at("ref_spectra");
        std::vector<Spectrum> refs;
        for (std::size_t r = 0; r < 3; ++r)
            refs.emplace_back(vector_from_json(ref_spectra[r]));
        try {
            const Polygon2D poly = embed_polygon_2d(refs);
            std::string coords = "kind,index,id,x,y\n";
            for (std::size_t r = 0; r < 3; ++r)
                coords += "reference," + std::to_string(ref_indices[r].get<int>()) + "," +
                          csv_escape(ref_ids[r].get<std::string>()) + "," +
                          fmt_double(poly.ref_points[r].x()) + "," +
                          fmt_double(poly.ref_points[r].y()) + "\n";
            for (std::size_t i = 0; i < num_data; ++i) {
                const double w0 = weights[i][0].get<double>();
                const double w1 = weights[i][1].get<double>();
                const double w2 = weights[i][2].get<double>();
                const double x = w0 * poly.ref_points[0].x() + w1 * poly.ref_points[1].x() +
                                 w2 * poly.ref_points[2].x();
                const double y = w0 * poly.ref_points[0].y() + w1 * poly.ref_points[1].y() +
                                 w2 * poly.ref_points[2].y();
                coords += "datum," + std::to_string(i) + "," +
                          csv_escape(ids[i].get<std::string>()) + "," + fmt_double(x) + "," +
                          fmt_double(y) + "\n";
            }
            out["projection_2d"] = std::move(coords);
        } catch (const Error&) {
            // Collinear or coincident references admit no planar drawing;
            // the table is simply omitted.
        }
    }
    return out;
}

std::string mse_vs_dimension_table(const json& path) {
    std::string table = "dimension,num_refs,mse\n";
    for (const json& step : path) {
        const int m = step.at("num_refs").get<int>();
        table += std::to_string(m - 1) + "," + std::to_string(m) + "," +
                 fmt_double(step.at("mse").get<double>()) + "\n";
    }
    return table;
}

std::map<std::string, std::string> tpca_tables(const json& j) {
    std::map<std::string, std::string> out;
    const json& ratios = j.at("explained_variance_ratio");
    std::string variance = "component,ratio,cumulative\n";
    double cumulative = 0.0;
    for (std::size_t c = 0; c < ratios.size(); ++c) {
        cumulative += ratios[c].get<double>();
        variance += std::to_string(c + 1) + "," + fmt_double(ratios[c].get<double>()) + "," +
                    fmt_double(cumulative) + "\n";
    }
    out["explained_variance"] = std::move(variance);

    const json& ids = j.at("datum_ids");
    const json& labels = j.at("datum_labels");
    const json& scores = j.at("scores");
    std::string stable = "index,id,label";
    for (std::size_t c = 0; c < ratios.size(); ++c) stable += ",pc" + std::to_string(c + 1);
    stable += "\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        stable += std::to_string(i) + "," + csv_escape(ids[i].get<std::string>()) + "," +
                  csv_escape(label_text(labels, i));
        for (std::size_t c = 0; c < ratios.size(); ++c)
            stable += "," + fmt_double(scores[i][c].get<double>());
        stable += "\n";
    }
    out["scores"] = std::move(stable);
    return out;
}

std::map<std::string, std::string> polygon_tables(const json& j) {
    std::map<std::string, std::string> out;
    const json& ref_indices = j.at("ref_indices");
    const json& ref_ids = j.at("ref_ids");
    const json& ref_points = j.at("ref_points");
    const json& ref_spectra = j.at("ref_spectra");

    std::string refs = "index,id,x,y\n";
    for (std::size_t r = 0; r < 3; ++r)
        refs += std::to_string(ref_indices[r].get<int>()) + "," +
                csv_escape(ref_ids[r].get<std::string>()) + "," +
                fmt_double(ref_points[r][0].get<double>()) + "," +
                fmt_double(ref_points[r][1].get<double>()) + "\n";
    out["refs_2d"] = std::move(refs);

    std::string dists = "i,j,planar_distance,spectral_distance\n";
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b) {
            const Eigen::Vector2d pa(ref_points[a][0].get<double>(),
                                     ref_points[a][1].get<double>());
            const Eigen::Vector2d pb(ref_points[b][0].get<double>(),
                                     ref_points[b][1].get<double>());
            const Eigen::VectorXd sa = vector_from_json(ref_spectra[a]);
            const Eigen::VectorXd sb = vector_from_json(ref_spectra[b]);
            dists += std::to_string(ref_indices[a].get<int>()) + "," +
                     std::to_string(ref_indices[b].get<int>()) + "," +
                     fmt_double((pa - pb).norm()) + "," + fmt_double((sa - sb).norm()) + "\n";
        }
    out["ref_distances"] = std::move(dists);

    const json& halfplanes = j.at("halfplanes");
    std::string lines = "index,alpha_x,alpha_y,beta\n";
    for (std::size_t k = 0; k < halfplanes.size(); ++k)
        lines += std::to_string(k) + "," +
                 fmt_double(halfplanes[k].at("alpha")[0].get<double>()) + "," +
                 fmt_double(halfplanes[k].at("alpha")[1].get<double>()) + "," +
                 fmt_double(halfplanes[k].at("beta").get<double>()) + "\n";
    out["halfplanes"] = std::move(lines);

    const json& vertices = j.at("vertices");
    std::string verts = "index,x,y\n";
    for (std::size_t k = 0; k < vertices.size(); ++k)
        verts += std::to_string(k) + "," + fmt_double(vertices[k][0].get<double>()) + "," +
                 fmt_double(vertices[k][1].get<double>()) + "\n";
    out["vertices"] = std::move(verts);
    return out;
}

} // namespace

json bsa_result_to_json(const BSAResult& result, const Dataset& ds, bool convex) {
    json j;
    j["kind"] = "bsa";
    j["convex"] = convex;
    j["num_refs"] = static_cast<int>(result.ref_indices.size());
    j["mse"] = result.mse;
    j["ref_indices"] = result.ref_indices;
    json ref_ids = json::array();
    json ref_labels = json::array();
    json ref_spectra = json::array();
    for (const int idx : result.ref_indices) {
        ref_ids.push_back(ds.networks[static_cast<std::size_t>(idx)].id);
        ref_labels.push_back(label_json(ds, idx));
        ref_spectra.push_back(
            vector_to_json(spectrum(ds.networks[static_cast<std::size_t>(idx)]).values));
    }
    j["ref_ids"] = std::move(ref_ids);
    j["ref_labels"] = std::move(ref_labels);
    j["ref_spectra"] = std::move(ref_spectra);

    json ids = json::array();
    json labels = json::array();
    for (std::size_t i = 0; i < ds.networks.size(); ++i) {
        ids.push_back(ds.networks[i].id);
        labels.push_back(label_json(ds, static_cast<int>(i)));
    }
    j["datum_ids"] = std::move(ids);
    j["datum_labels"] = std::move(labels);
    j["weights"] = matrix_to_json(result.weights);
    json projections = json::array();
    for (const Spectrum& s : result.projections) projections.push_back(vector_to_json(s.values));
    j["projections"] = std::move(projections);
    j["per_datum_sq_error"] = vector_to_json(result.per_datum_sq_error);
    return j;
}

json backward_result_to_json(const BackwardPath& path, const BSAResult& selected,
                             const Dataset& ds, bool convex) {
    json j;
    j["kind"] = "backward";
    j["convex"] = convex;
    json steps = json::array();
    for (const BackwardStep& step : path.steps) {
        json e;
        e["num_refs"] = static_cast<int>(step.ref_indices.size());
        e["ref_indices"] = step.ref_indices;
        json ref_ids = json::array();
        for (const int idx : step.ref_indices)
            ref_ids.push_back(ds.networks[static_cast<std::size_t>(idx)].id);
        e["ref_ids"] = std::move(ref_ids);
        e["mse"] = step.mse;
        steps.push_back(std::move(e));
    }
    j["path"] = std::move(steps);
    j["selected"] = bsa_result_to_json(selected, ds, convex);
    return j;
}

json tpca_result_to_json(const TangentPCAResult& result, const Dataset& ds,
                         const std::vector<Deformation>& deformations) {
    json j;
    j["kind"] = "tpca";
    j["num_components"] = static_cast<int>(result.components.size());
    j["explained_variance_ratio"] = vector_to_json(result.explained_variance_ratio);
    json ids = json::array();
    json labels = json::array();
    for (std::size_t i = 0; i < ds.networks.size(); ++i) {
        ids.push_back(ds.networks[i].id);
        labels.push_back(label_json(ds, static_cast<int>(i)));
    }
    j["datum_ids"] = std::move(ids);
    j["datum_labels"] = std::move(labels);
    j["scores"] = matrix_to_json(result.scores);
    j["mean"] = network_to_json(result.mean);
    json comps = json::array();
    for (const Eigen::MatrixXd& c : result.components) comps.push_back(matrix_to_json(c));
    j["components"] = std::move(comps);
    json defs = json::array();
    for (const Deformation& d : deformations) {
        json e;
        e["component"] = d.component;
        e["t"] = d.t;
        e["network"] = network_to_json(d.network);
        defs.push_back(std::move(e));
    }
    j["deformations"] = std::move(defs);
    return j;
}

json polygon_result_to_json(const Polygon2D& polygon, const std::vector<int>& ref_indices,
                            const Dataset& ds) {
    if (ref_indices.size() != 3)
        throw InvalidArgument("polygon report: exactly three reference indices expected");
    json j;
    j["kind"] = "polygon";
    j["ref_indices"] = ref_indices;
    json ref_ids = json::array();
    json ref_spectra = json::array();
    for (const int idx : ref_indices) {
        ref_ids.push_back(ds.networks[static_cast<std::size_t>(idx)].id);
        ref_spectra.push_back(
            vector_to_json(spectrum(ds.networks[static_cast<std::size_t>(idx)]).values));
    }
    j["ref_ids"] = std::move(ref_ids);
    j["ref_spectra"] = std::move(ref_spectra);
    json pts = json::array();
    for (const Eigen::Vector2d& p : polygon.ref_points) pts.push_back(json::array({p.x(), p.y()}));
    j["ref_points"] = std::move(pts);
    json halfplanes = json::array();
    for (const HalfPlane2D& h : polygon.halfplanes) {
        json e;
        e["alpha"] = json::array({h.alpha.x(), h.alpha.y()});
        e["beta"] = h.beta;
        halfplanes.push_back(std::move(e));
    }
    j["halfplanes"] = std::move(halfplanes);
    json vertices = json::array();
    for (const Eigen::Vector2d& v : polygon.vertices)
        vertices.push_back(json::array({v.x(), v.y()}));
    j["vertices"] = std::move(vertices);
    j["closed"] = polygon.closed;
    return j;
}

std::map<std::string, std::string> plot_tables_from_result(const nlohmann::json& result) {
    try {
        const std::string kind = result.at("kind").get<std::string>();
        if (kind == "bsa") return bsa_tables(result);
        if (kind == "backward") {
            auto tables = bsa_tables(result.at("selected"));
            tables["mse_vs_dimension"] = mse_vs_dimension_table(result.at("path"));
            return tables;
        }
        if (kind == "tpca") return tpca_tables(result);
        if (kind == "polygon") return polygon_tables(result);
        throw SchemaError("report result: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw SchemaError(std::string("report result: malformed payload: ") + e.what());
    }
}

Report make_report(std::string command, const Dataset& ds, nlohmann::json result) {
    Report rep;
    rep.command = std::move(command);
    rep.dataset_meta = ds.meta;
    rep.plot_tables = plot_tables_from_result(result);
    rep.result = std::move(result);
    return rep;
}

json report_to_json(const Report& report) {
    json j;
    j["tool_version"] = report.tool_version;
    j["command"] = report.command;
    j["dataset_meta"] = report.dataset_meta;
    j["result"] = report.result;
    j["plot_tables"] = report.plot_tables;
    return j;
}

Report report_from_json(const nlohmann::json& j) {
    try {
        Report rep;
        rep.tool_version = j.at("tool_version").get<std::string>();
        rep.command = j.at("command").get<std::string>();
        rep.dataset_meta = j.at("dataset_meta").get<std::map<std::string, std::string>>();
        rep.result = j.at("result");
        rep.plot_tables = j.at("plot_tables").get<std::map<std::string, std::string>>();
        return rep;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("report: malformed payload: ") + e.what());
    }
}

void save_report(const Report& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << report_to_json(report).dump(2) << "\n";
    if (!out) throw IoError("failed while writing file: " + path);
}

Report load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    try {
        return report_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": invalid JSON: " + e.what());
    }
}

} // namespace specbsa
