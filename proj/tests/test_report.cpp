#include "doctest.h"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specbsa/errors.hpp"
#include "specbsa/report.hpp"
#include "specbsa/spectral.hpp"

using namespace specbsa;

namespace {

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "specbsa-report-test";
    std::filesystem::create_directories(dir);
    return dir;
}

Report saved_and_reloaded(const Report& report, const std::string& name) {
    const std::string path = (scratch_dir() / name).string();
    save_report(report, path);
    return load_report(path);
}

void check_report_equal(const Report& a, const Report& b) {
    CHECK(a.tool_version == b.tool_version);
    CHECK(a.command == b.command);
    CHECK(a.dataset_meta == b.dataset_meta);
    CHECK(a.result == b.result);
    CHECK(a.plot_tables == b.plot_tables);
}

int line_count(const std::string& csv) {
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    return lines;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
                else if (c == '"') quoted = false;
                else cur += c;
            } else if (c == '"') quoted = true;
            else if (c == ',') fields.push_back(std::exchange(cur, {}));
            else cur += c;
        }
        fields.push_back(cur);
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace

TEST_CASE("subset-fit report: tables derive from the payload alone") {
    const Dataset ds = generate_clustered(2, 0.05, 1);
    BSAConfig cfg;
    cfg.num_refs = 3;
    cfg.convex = true;
    const BSAResult fitres = fit(ds.networks, cfg);

    const Report report = make_report("specbsa bsa --refs 3 --convex",
                                      ds, bsa_result_to_json(fitres, ds, true));
    CHECK(report.tool_version == kToolVersion);
    CHECK(report.command == "specbsa bsa --refs 3 --convex");
    CHECK(report.dataset_meta == ds.meta);
    CHECK(report.result.at("kind") == "bsa");
    CHECK(report.result.at("convex") == true);

    REQUIRE(report.plot_tables.count("per_datum_error") == 1);
    REQUIRE(report.plot_tables.count("weights") == 1);
    REQUIRE(report.plot_tables.count("projection_2d") == 1);

    const std::string& errors = report.plot_tables.at("per_datum_error");
    CHECK(errors.rfind("index,id,label,squared_error\n", 0) == 0);
    CHECK(line_count(errors) == static_cast<int>(ds.size()) + 1);
    const std::string& weights = report.plot_tables.at("weights");
    CHECK(weights.rfind("index,id,w0,w1,w2\n", 0) == 0);
    CHECK(line_count(weights) == static_cast<int>(ds.size()) + 1);
    const std::string& planar = report.plot_tables.at("projection_2d");
    CHECK(planar.rfind("kind,index,id,x,y\n", 0) == 0);
    // Three reference rows plus one row per datum.
    CHECK(line_count(planar) == static_cast<int>(ds.size()) + 4);

    const Report loaded = saved_and_reloaded(report, "bsa.json");
    check_report_equal(report, loaded);
    CHECK(plot_tables_from_result(loaded.result) == loaded.plot_tables);
}

TEST_CASE("backward report carries the dimension trace") {
    const Dataset ds = generate_clustered(2, 0.05, 1);
    const std::vector<Spectrum> spectra = spectra_of(ds.networks);
    BSAConfig cfg;
    cfg.convex = false;
    const BackwardPath path = fit_backward_spectra(spectra, cfg);

    BSAConfig sel_cfg = cfg;
    sel_cfg.num_refs = 2;
    sel_cfg.search = SearchStrategy::GreedyBackward;
    const BSAResult selected = fit_spectra(spectra, sel_cfg);

    const Report report = make_report("specbsa bsa --refs 2 --backward", ds,
                                      backward_result_to_json(path, selected, ds, false));
    CHECK(report.result.at("kind") == "backward");

    REQUIRE(report.plot_tables.count("mse_vs_dimension") == 1);
    const std::string& table = report.plot_tables.at("mse_vs_dimension");
    CHECK(table.rfind("dimension,num_refs,mse\n", 0) == 0);
    CHECK(line_count(table) == static_cast<int>(ds.size()) + 1);
    const auto rows = parse_csv(table);
    REQUIRE(rows.size() == ds.size() + 1);
    // Row k of the trace has N-k references spanning N-k-1 dimensions.
    CHECK(rows[1][0] == std::to_string(ds.size() - 1));
    CHECK(rows[1][1] == std::to_string(ds.size()));
    CHECK(rows.back()[1] == "1");
    // With all data kept as references the fit is exact.
    CHECK(std::stod(rows[1][2]) <= 1e-18);

    // The selected fit's own tables ride along.
    CHECK(report.plot_tables.count("per_datum_error") == 1);
    CHECK(report.plot_tables.count("weights") == 1);

    const Report loaded = saved_and_reloaded(report, "backward.json");
    check_report_equal(report, loaded);
    CHECK(plot_tables_from_result(loaded.result) == loaded.plot_tables);
}

TEST_CASE("tangent-PCA report round-trips with variance and score tables") {
    const Dataset ds = generate_two_parameter(8, 5);
    const TangentPCAResult res = tangent_pca(ds.networks, 2);
    std::vector<Deformation> defs;
    for (int c = 0; c < 2; ++c)
        for (double t : {-0.5, 0.5})
            defs.push_back({c, t, component_deformation(res, c, t)});

    const Report report = make_report("specbsa tpca --components 2 --deform 0.5", ds,
                                      tpca_result_to_json(res, ds, defs));
    CHECK(report.result.at("kind") == "tpca");
    CHECK(report.result.at("deformations").size() == 4);

    REQUIRE(report.plot_tables.count("explained_variance") == 1);
    const auto var_rows = parse_csv(report.plot_tables.at("explained_variance"));
    REQUIRE(var_rows.size() == 3);
    CHECK(var_rows[0] == std::vector<std::string>{"component", "ratio", "cumulative"});
    const double cum1 = std::stod(var_rows[1][2]);
    const double cum2 = std::stod(var_rows[2][2]);
    CHECK(cum2 >= cum1);
    CHECK(cum2 <= 1.0 + 1e-12);

    REQUIRE(report.plot_tables.count("scores") == 1);
    const auto score_rows = parse_csv(report.plot_tables.at("scores"));
    REQUIRE(score_rows.size() == ds.size() + 1);
    CHECK(score_rows[0] == std::vector<std::string>{"index", "id", "label", "pc1", "pc2"});

    const Report loaded = saved_and_reloaded(report, "tpca.json");
    check_report_equal(report, loaded);
    CHECK(plot_tables_from_result(loaded.result) == loaded.plot_tables);
}

TEST_CASE("polygon report records geometry consistent with the spectra") {
    const Dataset ds = generate_two_parameter(16, 7);
    const std::vector<Spectrum> spectra = spectra_of(ds.networks);
    const std::vector<Spectrum> refs = {spectra[0], spectra[1], spectra[2]};
    const Polygon2D poly = embed_polygon_2d(refs);
    REQUIRE(poly.closed);
    CHECK(poly.vertices.size() == 4);

    const Report report = make_report("specbsa polygon --refs 0,1,2", ds,
                                      polygon_result_to_json(poly, {0, 1, 2}, ds));
    CHECK(report.result.at("kind") == "polygon");
    CHECK(report.result.at("closed") == true);

    for (const char* name : {"refs_2d", "ref_distances", "halfplanes", "vertices"})
        REQUIRE(report.plot_tables.count(name) == 1);

    // Planar reference distances agree with the spectral ones pair by pair.
    const auto dist_rows = parse_csv(report.plot_tables.at("ref_distances"));
    REQUIRE(dist_rows.size() == 4);
    for (std::size_t r = 1; r < dist_rows.size(); ++r) {
        const double planar = std::stod(dist_rows[r][2]);
        const double spectral = std::stod(dist_rows[r][3]);
        CHECK(planar == doctest::Approx(spectral).epsilon(1e-9));
    }
    CHECK(parse_csv(report.plot_tables.at("vertices")).size() == 5);

    const Report loaded = saved_and_reloaded(report, "polygon.json");
    check_report_equal(report, loaded);
    CHECK(plot_tables_from_result(loaded.result) == loaded.plot_tables);
}

TEST_CASE("CSV cells with delimiters or quotes are escaped") {
    Dataset ds;
    ds.n = 3;
    for (int k = 0; k < 3; ++k) {
        Network net;
        net.id = "x" + std::to_string(k);
        net.adjacency = Eigen::MatrixXd::Zero(3, 3);
        net.adjacency(0, 1) = net.adjacency(1, 0) = 1.0 + k;
        ds.networks.push_back(std::move(net));
    }
    ds.labels = {std::string("a,b\"c"), std::string("plain"), std::nullopt};

    BSAConfig cfg;
    cfg.num_refs = 1;
    const BSAResult res = fit(ds.networks, cfg);
    const Report report = make_report("cmd", ds, bsa_result_to_json(res, ds, false));

    const std::string& table = report.plot_tables.at("per_datum_error");
    CHECK(table.find("\"a,b\"\"c\"") != std::string::npos);
    const auto rows = parse_csv(table);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][2] == "a,b\"c");
    CHECK(rows[3][2] == "");

    const Report loaded = saved_and_reloaded(report, "escape.json");
    check_report_equal(report, loaded);
    CHECK(plot_tables_from_result(loaded.result) == loaded.plot_tables);
}

TEST_CASE("report loader rejects malformed files") {
    const auto write = [](const std::string& name, const std::string& text) {
        const auto p = scratch_dir() / name;
        std::ofstream out(p);
        out << text;
        return p.string();
    };

    CHECK_THROWS_AS(load_report((scratch_dir() / "absent.json").string()), IoError);
    CHECK_THROWS_AS(load_report(write("broken.json", "{nope")), SchemaError);
    CHECK_THROWS_AS(load_report(write("noresult.json",
                                      R"({"tool_version":"0.1.0","command":"c",)"
                                      R"("dataset_meta":{},"plot_tables":{}})")),
                    SchemaError);

    nlohmann::json bogus;
    bogus["kind"] = "no-such-kind";
    CHECK_THROWS_AS(plot_tables_from_result(bogus), SchemaError);
    CHECK_THROWS_AS(plot_tables_from_result(nlohmann::json::object()), SchemaError);
}
