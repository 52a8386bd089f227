#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "specbsa/datasets.hpp"
#include "specbsa/errors.hpp"
#include "specbsa/json_io.hpp"
#include "specbsa/openflights.hpp"
#include "specbsa/spectral.hpp"

using namespace specbsa;

namespace {

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "specbsa-datasets-test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_scratch(const std::string& name, const std::string& content) {
    const auto p = scratch_dir() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

int count_edges(const Eigen::MatrixXd& a) {
    int edges = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != 0.0) ++edges;
    return edges;
}

RegionMapping test_mapping() {
    RegionMapping m;
    m.regions = {"Northern Europe", "Eastern Europe", "Southern Europe",
                 "Western Europe", "North Africa",    "Western Asia"};
    m.country_to_region = {
        {"United Kingdom", "Northern Europe"}, {"Russia", "Eastern Europe"},
        {"Spain", "Southern Europe"},          {"France", "Western Europe"},
        {"Germany", "Western Europe"},         {"Netherlands", "Western Europe"},
        {"Switzerland", "Western Europe"},     {"Morocco", "North Africa"},
        {"Turkey", "Western Asia"}};
    return m;
}

// Five airports covering four regions plus one outside any mapped country.
const char* kAirportsCsv =
    "1,\"Charles de Gaulle\",\"Paris\",\"France\",\"CDG\",\"LFPG\",49.0,2.5,392,1,\"E\",\"Europe/Paris\",\"airport\",\"test\"\n"
    "2,\"Schiphol\",\"Amsterdam\",\"Netherlands\",\"AMS\",\"EHAM\",52.3,4.8,-11,1,\"E\",\"Europe/Amsterdam\",\"airport\",\"test\"\n"
    "3,\"Frankfurt am Main\",\"Frankfurt\",\"Germany\",\"FRA\",\"EDDF\",50.0,8.6,364,1,\"E\",\"Europe/Berlin\",\"airport\",\"test\"\n"
    "4,\"Zurich Kloten\",\"Zurich\",\"Switzerland\",\"ZRH\",\"LSZH\",47.5,8.5,1416,1,\"E\",\"Europe/Zurich\",\"airport\",\"test\"\n"
    "5,\"Adolfo Suarez, Madrid\",\"Madrid\",\"Spain\",\"MAD\",\"LEMD\",40.5,-3.6,1998,1,\"E\",\"Europe/Madrid\",\"airport\",\"test\"\n"
    "6,\"Mohammed V\",\"Casablanca\",\"Morocco\",\"CMN\",\"GMMN\",33.4,-7.6,656,0,\"N\",\"Africa/Casablanca\",\"airport\",\"test\"\n"
    "7,\"Kennedy International, New York\",\"New York\",\"United States\",\"JFK\",\"KJFK\",40.6,-73.8,13,-5,\"A\",\"America/New_York\",\"airport\",\"test\"\n"
    "8,\"Ataturk\",\"Istanbul\",\"Turkey\",\\N,\"LTBA\",41.0,28.8,163,3,\"E\",\"Europe/Istanbul\",\"airport\",\"test\"\n";

} // namespace

TEST_CASE("two-parameter family members have the advertised topologies") {
    const Network tree = two_parameter_network(1.0, 0.0, "tree");
    CHECK(tree.n() == 6);
    CHECK(count_edges(tree.adjacency) == 5);
    CHECK(tree.adjacency.diagonal().isZero(0.0));
    CHECK(tree.adjacency(0, 2) == 1.0);
    CHECK(tree.adjacency(1, 2) == 1.0);
    CHECK(tree.adjacency(3, 4) == 1.0);
    CHECK(tree.adjacency(3, 5) == 1.0);
    CHECK(tree.adjacency(2, 3) == 1.0);
    // Zero diagonal forces a zero eigenvalue sum.
    CHECK(spectrum(tree).values.sum() == doctest::Approx(0.0).epsilon(1e-9));

    const Network eight = two_parameter_network(1.2, -0.3, "eight");
    CHECK(count_edges(eight.adjacency) == 7);
    CHECK(eight.adjacency(2, 3) == 1.2);
    CHECK(eight.adjacency(0, 1) == doctest::Approx(0.3));
    CHECK(eight.adjacency(4, 5) == doctest::Approx(0.3));
    CHECK(eight.adjacency(0, 3) == 0.0);

    const Network hourglass = two_parameter_network(0.8, 0.25, "hourglass");
    CHECK(count_edges(hourglass.adjacency) == 7);
    CHECK(hourglass.adjacency(0, 3) == 0.25);
    CHECK(hourglass.adjacency(2, 4) == 0.25);
    CHECK(hourglass.adjacency(0, 1) == 0.0);

    CHECK_THROWS_AS(two_parameter_network(std::nan(""), 0.0), InvalidArgument);
}

TEST_CASE("two-parameter generator draws in range and is deterministic") {
    const Dataset ds = generate_two_parameter(40, 11);
    REQUIRE(ds.size() == 40);
    CHECK(ds.n == 6);
    CHECK_NOTHROW(check_dataset(ds));
    CHECK(ds.meta.at("generator") == "two-parameter");
    for (std::size_t i = 0; i < ds.networks.size(); ++i) {
        const Eigen::MatrixXd& a = ds.networks[i].adjacency;
        const double s = a(2, 3);
        CHECK(s >= 0.5);
        CHECK(s <= 1.5);
        const double t_eight = a(0, 1);
        const double t_hour = a(0, 3);
        CHECK(t_eight * t_hour == 0.0);  // at most one topology active
        CHECK(std::max(t_eight, t_hour) <= 0.5);
        REQUIRE(ds.labels[i].has_value());
        const std::string& label = *ds.labels[i];
        const int edges = count_edges(a);
        if (t_eight > 0.0) {
            CHECK(edges == 7);
            CHECK(label.substr(0, 5) == "eight");
        } else if (t_hour > 0.0) {
            CHECK(edges == 7);
            CHECK(label.substr(0, 9) == "hourglass");
        } else {
            CHECK(edges == 5);
            CHECK(label.substr(0, 4) == "tree");
        }
        CHECK(label.find("s=") != std::string::npos);
        CHECK(label.find("t=") != std::string::npos);
    }

    const Dataset again = generate_two_parameter(40, 11);
    for (std::size_t i = 0; i < ds.networks.size(); ++i)
        CHECK((ds.networks[i].adjacency.array() == again.networks[i].adjacency.array()).all());

    const Dataset other = generate_two_parameter(40, 12);
    bool any_diff = false;
    for (std::size_t i = 0; i < ds.networks.size(); ++i)
        if ((ds.networks[i].adjacency.array() != other.networks[i].adjacency.array()).any())
            any_diff = true;
    CHECK(any_diff);

    CHECK_THROWS_AS(generate_two_parameter(0, 1), InvalidArgument);
}

TEST_CASE("clustered generator with zero noise repeats the exact templates") {
    const Dataset ds = generate_clustered(2, 0.0, 99);
    REQUIRE(ds.size() == 6);
    CHECK(ds.n == 10);
    CHECK(ds.labels[0] == std::optional<std::string>("star"));
    CHECK(ds.labels[1] == std::optional<std::string>("star"));
    CHECK(ds.labels[2] == std::optional<std::string>("2-meshed-star"));
    CHECK(ds.labels[3] == std::optional<std::string>("2-meshed-star"));
    CHECK(ds.labels[4] == std::optional<std::string>("complete"));
    CHECK(ds.labels[5] == std::optional<std::string>("complete"));

    const Eigen::MatrixXd& star = ds.networks[0].adjacency;
    for (int j = 1; j < 10; ++j) CHECK(star(0, j) == 1.0);
    CHECK(count_edges(star) == 9);
    CHECK((star.array() == ds.networks[1].adjacency.array()).all());

    const Eigen::MatrixXd& meshed = ds.networks[2].adjacency;
    CHECK(meshed(0, 1) == 1.0);
    for (int j = 2; j < 10; ++j) {
        CHECK(meshed(0, j) == 1.0);
        CHECK(meshed(1, j) == 1.0);
    }
    CHECK(count_edges(meshed) == 17);

    const Eigen::MatrixXd& complete = ds.networks[4].adjacency;
    CHECK(count_edges(complete) == 45);
    CHECK(complete.diagonal().isZero(0.0));

    // Known spectra of the noiseless templates.
    const Spectrum star_spec = spectrum(ds.networks[0]);
    CHECK(star_spec[0] == doctest::Approx(-3.0).epsilon(1e-9));
    for (int i = 1; i < 9; ++i) CHECK(star_spec[i] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(star_spec[9] == doctest::Approx(3.0).epsilon(1e-9));

    const Spectrum complete_spec = spectrum(ds.networks[4]);
    for (int i = 0; i < 9; ++i) CHECK(complete_spec[i] == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(complete_spec[9] == doctest::Approx(4.5).epsilon(1e-9));
}

TEST_CASE("clustered generator: noise properties, determinism, separation") {
    const Dataset ds = generate_clustered(5, 0.05, 42);
    REQUIRE(ds.size() == 15);
    for (const Network& net : ds.networks) {
        CHECK(net.adjacency.diagonal().isZero(0.0));
        CHECK((net.adjacency.array() >= 0.0).all());
        CHECK((net.adjacency - net.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }

    const Dataset again = generate_clustered(5, 0.05, 42);
    for (std::size_t i = 0; i < ds.networks.size(); ++i)
        CHECK((ds.networks[i].adjacency.array() == again.networks[i].adjacency.array()).all());

    // The three clusters stay separated in the spectral metric.
    const std::vector<Spectrum> spectra = spectra_of(ds.networks);
    double max_intra = 0.0;
    double min_inter = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spectra.size(); ++i)
        for (std::size_t j = i + 1; j < spectra.size(); ++j) {
            const double d = spectral_distance(spectra[i], spectra[j]);
            if (*ds.labels[i] == *ds.labels[j]) max_intra = std::max(max_intra, d);
            else min_inter = std::min(min_inter, d);
        }
    CHECK(min_inter > max_intra);

    CHECK_THROWS_AS(generate_clustered(0, 0.05, 1), InvalidArgument);
    CHECK_THROWS_AS(generate_clustered(3, -0.1, 1), InvalidArgument);
}

TEST_CASE("dataset JSON round-trip is bit-exact") {
    Dataset ds = generate_clustered(2, 0.05, 3);
    ds.labels[1].reset();  // exercise the null label path
    ds.meta["note"] = "round trip";
    const std::string path = (scratch_dir() / "roundtrip.json").string();
    save_dataset(ds, path);
    const Dataset back = load_dataset(path);

    CHECK(back.n == ds.n);
    REQUIRE(back.size() == ds.size());
    CHECK(back.meta == ds.meta);
    for (std::size_t i = 0; i < ds.networks.size(); ++i) {
        CHECK(back.networks[i].id == ds.networks[i].id);
        CHECK(back.labels[i] == ds.labels[i]);
        CHECK((back.networks[i].adjacency.array() == ds.networks[i].adjacency.array()).all());
    }

    // Saving the loaded dataset again produces the identical file.
    const std::string path2 = (scratch_dir() / "roundtrip2.json").string();
    save_dataset(back, path2);
    std::ifstream f1(path), f2(path2);
    const std::string text1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string text2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(text1 == text2);
}

TEST_CASE("dataset JSON schema violations point at the offending field") {
    const auto expect_schema_error = [](const std::string& name, const std::string& text,
                                        const std::string& needle) {
        const std::string path = write_scratch(name, text);
        try {
            load_dataset(path);
            FAIL_CHECK("expected SchemaError for ", name);
        } catch (const SchemaError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                          "message '", e.what(), "' lacks '", needle, "'");
        }
    };

    expect_schema_error("asym.json",
                        R"({"n":2,"networks":[{"id":"a","label":null,"adjacency":[[0,1],[2,0]]}],"meta":{}})",
                        "/networks/0/adjacency");
    expect_schema_error("badn.json",
                        R"({"n":3,"networks":[{"id":"a","label":null,"adjacency":[[0,1],[1,0]]}],"meta":{}})",
                        "/networks/0/adjacency");
    expect_schema_error("nonint.json", R"({"n":2.5,"networks":[],"meta":{}})", "/n");
    expect_schema_error("nometa.json",
                        R"({"n":2,"networks":[{"id":"a","label":null,"adjacency":[[0,1],[1,0]]}]})",
                        "/meta");
    expect_schema_error("badlabel.json",
                        R"({"n":2,"networks":[{"id":"a","label":7,"adjacency":[[0,1],[1,0]]}],"meta":{}})",
                        "/networks/0/label");
    expect_schema_error("dupids.json",
                        R"({"n":2,"networks":[{"id":"a","label":null,"adjacency":[[0,1],[1,0]]},)"
                        R"({"id":"a","label":null,"adjacency":[[0,2],[2,0]]}],"meta":{}})",
                        "duplicate");
    expect_schema_error("notjson.json", "{nope", "invalid JSON");
    expect_schema_error("badrow.json",
                        R"({"n":2,"networks":[{"id":"a","label":null,"adjacency":[[0,"x"],[1,0]]}],"meta":{}})",
                        "/networks/0/adjacency/0/1");

    CHECK_THROWS_AS(load_dataset((scratch_dir() / "missing-file.json").string()), IoError);
}

TEST_CASE("region mapping loader validates the schema") {
    const std::string good = write_scratch("mapping-good.json", R"({
        "regions": ["Northern Europe","Eastern Europe","Southern Europe",
                    "Western Europe","North Africa","Western Asia"],
        "country_to_region": {"France": "Western Europe", "Spain": "Southern Europe"}
    })");
    const RegionMapping mapping = load_region_mapping(good);
    REQUIRE(mapping.regions.size() == 6);
    CHECK(mapping.regions[0] == "Northern Europe");
    CHECK(mapping.regions[5] == "Western Asia");
    CHECK(mapping.country_to_region.at("France") == "Western Europe");

    const std::string five = write_scratch("mapping-five.json",
        R"({"regions": ["a","b","c","d","e"], "country_to_region": {}})");
    CHECK_THROWS_AS(load_region_mapping(five), SchemaError);

    const std::string unlisted = write_scratch("mapping-unlisted.json",
        R"({"regions": ["a","b","c","d","e","f"], "country_to_region": {"France": "Mars"}})");
    CHECK_THROWS_AS(load_region_mapping(unlisted), SchemaError);

    const std::string badtype = write_scratch("mapping-badtype.json",
        R"({"regions": "nope", "country_to_region": {}})");
    CHECK_THROWS_AS(load_region_mapping(badtype), SchemaError);
}

TEST_CASE("ingestion reproduces hand-counted weights") {
    const std::string airports = write_scratch("airports-hand.csv", kAirportsCsv);
    // 2 routes inside Western Europe, 1 Western-Southern, 1 Southern-North
    // Africa; one endpoint given only by code (null id).
    const std::string routes = write_scratch("routes-hand.csv",
        "ZZ,1,CDG,1,AMS,2,,0,320\n"
        "ZZ,1,FRA,3,ZRH,\\N,,0,320\n"
        "ZZ,1,AMS,2,MAD,5,,0,320\n"
        "ZZ,1,MAD,5,CMN,6,,0,320\n");

    std::vector<std::string> warnings;
    std::vector<IngestStats> stats;
    const Dataset ds =
        ingest_openflights(routes, airports, test_mapping(), {"ZZ"}, &warnings, &stats);
    REQUIRE(ds.size() == 1);
    CHECK(ds.n == 6);
    CHECK(ds.networks[0].id == "ZZ");

    const Eigen::MatrixXd& a = ds.networks[0].adjacency;
    // Region ordering: 0 Northern, 1 Eastern, 2 Southern, 3 Western, 4 North
    // Africa, 5 Western Asia.
    CHECK(a(3, 3) == 0.5);
    CHECK(a(2, 3) == 0.25);
    CHECK(a(3, 2) == 0.25);
    CHECK(a(2, 4) == 0.25);
    CHECK(a(4, 2) == 0.25);
    double mass = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) mass += a(i, j);
    CHECK(mass == 1.0);

    REQUIRE(stats.size() == 1);
    CHECK(stats[0].total_routes == 4);
    CHECK(stats[0].mapped_routes == 4);
    CHECK(warnings.empty());
}

TEST_CASE("ingestion counts partition the routes") {
    const std::string airports = write_scratch("airports-part.csv", kAirportsCsv);
    // 8 routes: 5 mapped, 2 with an endpoint in the United States (unmapped
    // country), 1 to an airport absent from the table.
    const std::string routes = write_scratch("routes-part.csv",
        "QQ,2,CDG,1,FRA,3,,0,320\n"
        "QQ,2,CDG,1,MAD,5,,0,320\n"
        "QQ,2,AMS,2,ZRH,4,,0,320\n"
        "QQ,2,CMN,6,CDG,1,,0,320\n"
        "QQ,2,LTBA,8,CDG,1,,0,320\n"
        "QQ,2,CDG,1,JFK,7,,0,320\n"
        "QQ,2,JFK,7,AMS,2,,0,320\n"
        "QQ,2,CDG,1,XXX,999,,0,320\n");

    std::vector<std::string> warnings;
    std::vector<IngestStats> stats;
    const Dataset ds =
        ingest_openflights(routes, airports, test_mapping(), {"QQ"}, &warnings, &stats);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].total_routes == 8);
    CHECK(stats[0].mapped_routes == 5);
    CHECK(stats[0].unmapped_routes == 2);
    CHECK(stats[0].unknown_airport_routes == 1);
    CHECK(stats[0].total_routes ==
          stats[0].mapped_routes + stats[0].unmapped_routes + stats[0].unknown_airport_routes);

    double mass = 0.0;
    const Eigen::MatrixXd& a = ds.networks[0].adjacency;
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) mass += a(i, j);
    CHECK(mass == 5.0 / 8.0);
    CHECK((a.array() >= 0.0).all());
    CHECK(warnings.size() == 3);
    CHECK(warnings[2].find("line 8") != std::string::npos);

    // The Istanbul airport row has a null IATA code; the endpoint still
    // resolves through its airport id onto the Western Asia node.
    CHECK(a(3, 5) == 1.0 / 8.0);
}

TEST_CASE("ingestion edge selections") {
    const std::string airports = write_scratch("airports-edge.csv", kAirportsCsv);
    const std::string routes = write_scratch("routes-edge.csv",
        "AA,3,JFK,7,JFK,7,,0,320\n"
        "AA,3,JFK,7,CDG,1,,0,320\n"
        "BB,4,CDG,1,AMS,2,,0,320\n");

    SUBCASE("airline with all routes outside the mapping yields a zero matrix") {
        const Dataset ds = ingest_openflights(routes, airports, test_mapping(), {"AA"});
        REQUIRE(ds.size() == 1);
        CHECK(ds.networks[0].adjacency.isZero(0.0));
    }

    SUBCASE("airlines with no routes are skipped with a warning") {
        std::vector<std::string> warnings;
        const Dataset ds =
            ingest_openflights(routes, airports, test_mapping(), {"BB", "CC"}, &warnings);
        REQUIRE(ds.size() == 1);
        CHECK(ds.networks[0].id == "BB");
        REQUIRE(!warnings.empty());
        CHECK(warnings.back().find("CC") != std::string::npos);
    }

    SUBCASE("no matched airline at all raises EmptySelection") {
        CHECK_THROWS_AS(ingest_openflights(routes, airports, test_mapping(), {"CC", "DD"}),
                        EmptySelection);
        CHECK_THROWS_AS(ingest_openflights(routes, airports, test_mapping(), {}),
                        EmptySelection);
    }

    SUBCASE("duplicate airline requests are rejected") {
        CHECK_THROWS_AS(ingest_openflights(routes, airports, test_mapping(), {"BB", "BB"}),
                        InvalidArgument);
    }

    SUBCASE("bad region mappings are rejected") {
        RegionMapping five = test_mapping();
        five.regions.pop_back();
        CHECK_THROWS_AS(ingest_openflights(routes, airports, five, {"BB"}), SchemaError);
        RegionMapping unlisted = test_mapping();
        unlisted.country_to_region["France"] = "Atlantis";
        CHECK_THROWS_AS(ingest_openflights(routes, airports, unlisted, {"BB"}), SchemaError);
    }
}

TEST_CASE("ingestion rejects malformed rows with line numbers") {
    const std::string airports = write_scratch("airports-ok.csv", kAirportsCsv);

    const std::string short_row = write_scratch("routes-short.csv",
        "ZZ,1,CDG,1,AMS,2,,0,320\n"
        "ZZ,1,CDG\n");
    try {
        ingest_openflights(short_row, airports, test_mapping(), {"ZZ"});
        FAIL_CHECK("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    const std::string bad_quote = write_scratch("routes-quote.csv",
        "ZZ,1,\"CDG,1,AMS,2,,0,320\n");
    CHECK_THROWS_AS(ingest_openflights(bad_quote, airports, test_mapping(), {"ZZ"}),
                    ParseError);

    const std::string bad_airport = write_scratch("airports-short.csv", "1,\"X\"\n");
    const std::string ok_routes = write_scratch("routes-ok.csv", "ZZ,1,CDG,1,AMS,2,,0,320\n");
    try {
        ingest_openflights(ok_routes, bad_airport, test_mapping(), {"ZZ"});
        FAIL_CHECK("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }

    CHECK_THROWS_AS(
        ingest_openflights((scratch_dir() / "no-such.csv").string(), airports, test_mapping(), {"ZZ"}),
        IoError);
}

TEST_CASE("ingested datasets persist and reload bit-exactly") {
    const std::string airports = write_scratch("airports-rt.csv", kAirportsCsv);
    const std::string routes = write_scratch("routes-rt.csv",
        "ZZ,1,CDG,1,AMS,2,,0,320\n"
        "ZZ,1,AMS,2,MAD,5,,0,320\n"
        "ZZ,1,MAD,5,CMN,6,,0,320\n"
        "ZZ,1,CDG,1,ZRH,4,,0,320\n"
        "ZZ,1,CDG,1,JFK,7,,0,320\n"
        "ZZ,1,LTBA,8,MAD,5,,0,320\n"
        "ZZ,1,CDG,1,FRA,3,,0,320\n");
    const Dataset ds = ingest_openflights(routes, airports, test_mapping(), {"ZZ"});
    const std::string path = (scratch_dir() / "ingested.json").string();
    save_dataset(ds, path);
    const Dataset back = load_dataset(path);
    CHECK((back.networks[0].adjacency.array() == ds.networks[0].adjacency.array()).all());
    CHECK(back.meta == ds.meta);
    CHECK(back.labels == ds.labels);
}
