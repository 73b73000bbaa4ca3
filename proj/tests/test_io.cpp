#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afcec/errors.hpp"
#include "afcec/generators.hpp"
#include "afcec/io.hpp"
#include "support.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace afcec;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "afcec_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

AfcecModel sample_model(const Dataset& x, std::size_t k, FamilyKind kind = FamilyKind::quadratic) {
    EngineConfig cfg;
    cfg.k_init = k;
    cfg.family = std::make_shared<const FunctionFamily>(builtin_family(kind, x.dim() - 1));
    cfg.seed = 5;
    return fit(x, cfg);
}

Dataset strokes(std::size_t n = 400) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::strokes;
    spec.n = n;
    spec.seed = 2;
    return generate(spec);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("csv parsing") {
    std::istringstream plain("1,2\n3,4\n5,6\n");
    const Dataset a = parse_csv(plain);
    CHECK(a.size() == 3);
    CHECK(a.dim() == 2);
    CHECK(a.at(2, 1) == 6.0);

    std::istringstream header("x,y\n1.5, -2e-3\r\n\n7,8\n");
    const Dataset b = parse_csv(header);
    CHECK(b.size() == 2);
    CHECK(b.at(0, 1) == -2e-3);

    std::istringstream bad("x,y\n1,2\n3,abc\n");
    try {
        parse_csv(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(e.col() == 2);
    }

    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(parse_csv(ragged), ParseError);
    std::istringstream empty("x,y\n");
    CHECK_THROWS_AS(parse_csv(empty), ParseError);
    std::istringstream nan("1,nan\n");
    CHECK_THROWS_AS(parse_csv(nan), ParseError);
    CHECK_THROWS_AS(load_csv(temp_path("does_not_exist.csv")), IoError);
}

TEST_CASE("csv round trip is exact") {
    afcec::testing::Gen g(1);
    std::vector<double> v;
    for (int i = 0; i < 300; ++i) v.push_back(g.normal(0.0, 1.0) * std::pow(10.0, g.uniform(-300, 300)));
    v.push_back(0.1);
    v.push_back(-0.0);
    v.push_back(5e-324);
    v.push_back(1.7976931348623157e308);
    const Dataset x(2, v);
    for (bool header : {true, false}) {
        const auto path = temp_path("roundtrip.csv");
        save_csv(x, path, header);
        const Dataset y = load_csv(path);
        REQUIRE(y.values().size() == x.values().size());
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(same_bits(x.values()[i], y.values()[i]));
    }
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("model json round trip") {
    const Dataset x = strokes();
    const AfcecModel m = sample_model(x, 3);
    const auto path = temp_path("model.json");
    save_model(m, path);

    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    CHECK(j.at("schema") == kModelSchemaVersion);
    CHECK(j.at("clusters").size() == m.k());

    const AfcecModel r = load_model(path);
    CHECK(r.k() == m.k());
    CHECK(r.assignment == m.assignment);
    CHECK(r.cost_trace == m.cost_trace);
    CHECK(r.deletion_trace == m.deletion_trace);
    CHECK(r.iterations == m.iterations);
    CHECK(r.converged == m.converged);
    for (std::size_t i = 0; i < m.k(); ++i) {
        const auto& a = m.clusters[i];
        const auto& b = r.clusters[i];
        CHECK(a.params.dependent_axis() == b.params.dependent_axis());
        CHECK(a.params.mean_exp() == b.params.mean_exp());
        CHECK(a.params.cov_exp() == b.params.cov_exp());
        CHECK(same_bits(a.params.resid_var(), b.params.resid_var()));
        CHECK(a.params.curve().coeffs() == b.params.curve().coeffs());
        CHECK(same_bits(a.weight, b.weight));
        CHECK(same_bits(a.cross_entropy, b.cross_entropy));
        for (std::size_t l = 0; l < x.size(); ++l)
            CHECK(same_bits(fadapted_log_density(a.params, x.point(l)), fadapted_log_density(b.params, x.point(l))));
    }
    CHECK(same_bits(cost(x, r.clusters, r.assignment), cost(x, m.clusters, m.assignment)));
}

TEST_CASE("model loading errors") {
    const auto path = temp_path("bad_schema.json");
    {
        std::ofstream out(path);
        out << R"({"schema": 2, "clusters": []})";
    }
    CHECK_THROWS_AS(load_model(path), SchemaVersionMismatch);
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(load_model(path), IoError);
    CHECK_THROWS_AS(load_model(temp_path("missing.json")), IoError);
    CHECK_THROWS_AS(save_model(sample_model(strokes(), 2), "/nonexistent_dir/m.json"), IoError);
}

TEST_CASE("plot export") {
    const Dataset x = strokes();
    const AfcecModel m = sample_model(x, 1);
    std::ostringstream out;
    write_plot_data(x, m, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "kind,cluster,x0,x1");
    std::size_t points = 0, curve = 0;
    const auto& params = m.clusters[0].params;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string kind, cl, a, b;
        std::getline(ss, kind, ',');
        std::getline(ss, cl, ',');
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        const double pt[2] = {std::stod(a), std::stod(b)};
        if (kind == "point") {
            CHECK(std::stoul(cl) == m.assignment[points]);
            ++points;
        } else {
            REQUIRE(kind == "curve");
            ++curve;
            const std::size_t j = params.dependent_axis();
            const std::vector<double> e{pt[1 - j]};
            CHECK(std::abs(pt[j] - params.curve().evaluate(e)) < 1e-12 * std::max(1.0, std::abs(pt[j])));
        }
    }
    CHECK(points == x.size());
    CHECK(curve == kCurveSamples);

    const AfcecModel m3 = sample_model(x, 3);
    std::ostringstream out3;
    write_plot_data(x, m3, out3);
    std::size_t rows = 0;
    for (char c : out3.str()) rows += c == '\n';
    CHECK(rows == 1 + x.size() + m3.k() * kCurveSamples);
}

TEST_CASE("plot export in three dimensions") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::parametric3d;
    spec.n = 300;
    const Dataset x = generate(spec);
    const AfcecModel m = sample_model(x, 2);
    const auto path = temp_path("plot3.csv");
    export_plot_data(x, m, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "kind,cluster,x0,x1,x2");
}
