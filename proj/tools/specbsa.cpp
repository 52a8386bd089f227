#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "specbsa/baselines.hpp"
#include "specbsa/bsa.hpp"
#include "specbsa/datasets.hpp"
#include "specbsa/errors.hpp"
#include "specbsa/json_io.hpp"
#include "specbsa/openflights.hpp"
#include "specbsa/report.hpp"
#include "specbsa/spectral.hpp"
#include "specbsa/strfmt.hpp"

namespace {

using namespace specbsa;

std::string quote_arg(const std::string& a) {
    if (!a.empty() && a.find_first_of(" \t\"'") == std::string::npos) return a;
    std::string out = "'";
    for (const char c : a) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    out += "'";
    return out;
}

std::string command_string(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) s += " ";
        s += quote_arg(argv[i]);
    }
    return s;
}

void print_dataset_summary(const Dataset& ds, const std::string& path) {
    std::cout << "wrote " << path << ": N=" << ds.size() << " networks, n=" << ds.n
              << " nodes\n";
    for (std::size_t i = 0; i < ds.networks.size(); ++i)
        std::cout << "  " << ds.networks[i].id << "  "
                  << (ds.labels[i] ? *ds.labels[i] : std::string("(no label)")) << "\n";
}

struct GenerateArgs {
    int num = 0;
    int per_cluster = 0;
    double sigma = 0.05;
    std::uint64_t seed = 0;
    std::string out;
};

struct BSAArgs {
    std::string input;
    int refs = 0;
    bool convex = false;
    bool backward = false;
    double min_sep = 0.0;
    bool parallel = false;
    std::string out;
    std::string reconstruct_dir;
};

struct TPCAArgs {
    std::string input;
    int components = 0;
    std::string out;
    double deform = 0.0;
};

struct PolygonArgs {
    std::string input;
    std::vector<int> refs;
    std::string out;
};

struct IngestArgs {
    std::string routes;
    std::string airports;
    std::string mapping;
    std::vector<std::string> airlines;
    std::string out;
};

int run_generate_two_parameter(const GenerateArgs& args, const std::string& command) {
    (void)command;
    const Dataset ds = generate_two_parameter(args.num, args.seed);
    save_dataset(ds, args.out);
    print_dataset_summary(ds, args.out);
    return 0;
}

int run_generate_clustered(const GenerateArgs& args, const std::string& command) {
    (void)command;
    const Dataset ds = generate_clustered(args.per_cluster, args.sigma, args.seed);
    save_dataset(ds, args.out);
    print_dataset_summary(ds, args.out);
    return 0;
}

int run_bsa(const BSAArgs& args, const std::string& command) {
    const Dataset ds = load_dataset(args.input);
    const std::vector<Spectrum> spectra = spectra_of(ds.networks);

    BSAConfig cfg;
    cfg.num_refs = args.refs;
    cfg.convex = args.convex;
    cfg.min_ref_separation = args.min_sep;
    cfg.parallel = args.parallel;

    nlohmann::json result;
    BSAResult selected;
    if (args.backward) {
        const BackwardPath path = fit_backward_spectra(spectra, cfg);
        BSAConfig sel = cfg;
        sel.search = SearchStrategy::GreedyBackward;
        selected = fit_spectra(spectra, sel);
        result = backward_result_to_json(path, selected, ds, cfg.convex);
    } else {
        selected = fit_spectra(spectra, cfg);
        result = bsa_result_to_json(selected, ds, cfg.convex);
    }
    save_report(make_report(command, ds, std::move(result)), args.out);

    std::cout << "wrote " << args.out << ": mse=" << fmt_double(selected.mse) << " refs=";
    for (std::size_t k = 0; k < selected.ref_indices.size(); ++k) {
        if (k > 0) std::cout << ",";
        std::cout << ds.networks[static_cast<std::size_t>(selected.ref_indices[k])].id;
    }
    std::cout << "\n";

    if (!args.reconstruct_dir.empty()) {
        std::filesystem::create_directories(args.reconstruct_dir);
        for (std::size_t i = 0; i < ds.networks.size(); ++i) {
            const Projection proj{
                BarycentricCoordinates{selected.weights.row(static_cast<Eigen::Index>(i)).transpose()},
                selected.projections[i],
                selected.per_datum_sq_error[static_cast<Eigen::Index>(i)]};
            const Network rebuilt = reconstruct(ds.networks[i], proj);
            const std::filesystem::path file =
                std::filesystem::path(args.reconstruct_dir) / (ds.networks[i].id + ".json");
            save_network(rebuilt, file.string());
        }
        std::cout << "reconstructed " << ds.size() << " networks into " << args.reconstruct_dir
                  << "\n";
    }
    return 0;
}

int run_tpca(const TPCAArgs& args, const std::string& command, bool with_deform) {
    const Dataset ds = load_dataset(args.input);
    const TangentPCAResult res = tangent_pca(ds.networks, args.components);

    std::vector<Deformation> deformations;
    if (with_deform) {
        for (int c = 0; c < static_cast<int>(res.components.size()); ++c)
            for (const double t : {-args.deform, args.deform})
                deformations.push_back({c, t, component_deformation(res, c, t)});
    }
    save_report(make_report(command, ds, tpca_result_to_json(res, ds, deformations)), args.out);

    std::cout << "wrote " << args.out << ": explained variance ratios=";
    for (Eigen::Index c = 0; c < res.explained_variance_ratio.size(); ++c) {
        if (c > 0) std::cout << ",";
        std::cout << fmt_double(res.explained_variance_ratio[c]);
    }
    std::cout << "\n";
    return 0;
}

int run_polygon(const PolygonArgs& args, const std::string& command) {
    const Dataset ds = load_dataset(args.input);
    for (const int idx : args.refs)
        if (idx < 0 || idx >= static_cast<int>(ds.networks.size()))
            throw IndexOutOfRange("polygon: reference index " + std::to_string(idx) +
                                  " outside dataset of size " + std::to_string(ds.size()));
    std::vector<Spectrum> refs;
    for (const int idx : args.refs)
        refs.push_back(spectrum(ds.networks[static_cast<std::size_t>(idx)]));
    const Polygon2D poly = embed_polygon_2d(refs);
    save_report(make_report(command, ds, polygon_result_to_json(poly, args.refs, ds)), args.out);
    std::cout << "wrote " << args.out << ": "
              << (poly.closed ? "closed polygon" : "unbounded region") << " with "
              << poly.vertices.size() << " vertices\n";
    return 0;
}

int run_ingest(const IngestArgs& args, const std::string& command) {
    (void)command;
    const RegionMapping mapping = load_region_mapping(args.mapping);
    std::vector<std::string> warnings;
    std::vector<IngestStats> stats;
    const Dataset ds =
        ingest_openflights(args.routes, args.airports, mapping, args.airlines, &warnings, &stats);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    for (const IngestStats& s : stats)
        std::cout << "airline " << s.airline << ": routes total=" << s.total_routes
                  << " mapped=" << s.mapped_routes << " unmapped=" << s.unmapped_routes
                  << " unknown-airport=" << s.unknown_airport_routes << "\n";
    save_dataset(ds, args.out);
    std::cout << "wrote " << args.out << ": N=" << ds.size() << " networks, n=" << ds.n
              << " nodes\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Barycentric subspace analysis of unlabeled weighted networks in the "
                 "spectral cone of sorted eigenvalues"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    CLI::App* generate = app.add_subcommand("generate", "Write a generated dataset as JSON");
    generate->require_subcommand(1);
    CLI::App* gen_tp = generate->add_subcommand(
        "two-parameter", "Six-node family: five-edge tree, 'eight' (t<0) or 'hourglass' (t>0)");
    gen_tp->add_option("--num", gen_args.num, "number of networks")->required();
    gen_tp->add_option("--seed", gen_args.seed, "generator seed (default 0)");
    gen_tp->add_option("--out", gen_args.out, "output dataset JSON path")->required();
    CLI::App* gen_cl = generate->add_subcommand(
        "clustered", "Three clusters of noisy 10-node template networks");
    gen_cl->add_option("--per-cluster", gen_args.per_cluster, "networks per cluster")->required();
    gen_cl->add_option("--sigma", gen_args.sigma, "noise standard deviation (default 0.05)");
    gen_cl->add_option("--seed", gen_args.seed, "generator seed (default 0)");
    gen_cl->add_option("--out", gen_args.out, "output dataset JSON path")->required();

    BSAArgs bsa_args;
    CLI::App* bsa = app.add_subcommand(
        "bsa", "Fit a sample-limited barycentric subspace to a dataset");
    bsa->add_option("--input", bsa_args.input, "dataset JSON path")->required();
    bsa->add_option("--refs", bsa_args.refs, "number of reference networks")->required();
    bsa->add_flag("--convex", bsa_args.convex, "require nonnegative barycentric weights");
    bsa->add_flag("--backward", bsa_args.backward,
                  "record the greedy backward path from all references down to one");
    bsa->add_option("--min-sep", bsa_args.min_sep,
                    "minimal spectral distance between selected references");
    bsa->add_flag("--parallel", bsa_args.parallel, "parallelize the subset search");
    bsa->add_option("--out", bsa_args.out, "output report JSON path")->required();
    bsa->add_option("--reconstruct", bsa_args.reconstruct_dir,
                    "directory for reconstructed per-datum network JSON files");

    TPCAArgs tpca_args;
    CLI::App* tpca = app.add_subcommand(
        "tpca", "Tangent PCA at the permutation-aligned Frechet mean");
    tpca->add_option("--input", tpca_args.input, "dataset JSON path")->required();
    tpca->add_option("--components", tpca_args.components, "number of principal components")
        ->required();
    tpca->add_option("--out", tpca_args.out, "output report JSON path")->required();
    CLI::Option* deform_opt = tpca->add_option(
        "--deform", tpca_args.deform, "emit mean deformations at +/- this step per component");

    PolygonArgs poly_args;
    CLI::App* polygon = app.add_subcommand(
        "polygon", "Planar drawing of the subspace of three references");
    polygon->add_option("--input", poly_args.input, "dataset JSON path")->required();
    polygon->add_option("--refs", poly_args.refs, "three dataset indices i,j,k")
        ->required()
        ->delimiter(',');
    polygon->add_option("--out", poly_args.out, "output report JSON path")->required();

    IngestArgs ingest_args;
    CLI::App* ingest = app.add_subcommand(
        "ingest", "Build per-airline region networks from OpenFlights-style CSV files");
    ingest->add_option("--routes", ingest_args.routes, "routes CSV path")->required();
    ingest->add_option("--airports", ingest_args.airports, "airports CSV path")->required();
    ingest->add_option("--mapping", ingest_args.mapping, "region mapping JSON path")->required();
    ingest->add_option("--airlines", ingest_args.airlines, "comma-separated airline codes")
        ->required()
        ->delimiter(',');
    ingest->add_option("--out", ingest_args.out, "output dataset JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = command_string(argc, argv);
    try {
        if (generate->parsed()) {
            if (gen_tp->parsed()) return run_generate_two_parameter(gen_args, command);
            return run_generate_clustered(gen_args, command);
        }
        if (bsa->parsed()) return run_bsa(bsa_args, command);
        if (tpca->parsed()) return run_tpca(tpca_args, command, deform_opt->count() > 0);
        if (polygon->parsed()) {
            if (poly_args.refs.size() != 3) {
                std::cerr << "error: --refs expects exactly three comma-separated indices\n";
                return 2;
            }
            return run_polygon(poly_args, command);
        }
        if (ingest->parsed()) return run_ingest(ingest_args, command);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
