#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = afcec::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "afcec_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> cells(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
    return out;
}

std::string circle_csv() {
    const auto path = temp_path("circle.csv");
    REQUIRE(run({"generate", "--kind", "circle", "--n", "600", "--noise", "0.1", "--seed", "3", "--out", path.string()}).code == 0);
    return path.string();
}

}  // namespace

TEST_CASE("generate") {
    const auto r = run({"generate", "--kind", "circle", "--n", "500"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows.size() == 501);
    CHECK(rows.front() == "x0,x1");

    const auto a = temp_path("g1.csv"), b = temp_path("g2.csv");
    CHECK(run({"generate", "--kind", "strokes", "--seed", "9", "--out", a.string()}).code == 0);
    CHECK(run({"generate", "--kind", "strokes", "--seed", "9", "--out", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));

    CHECK(run({"generate", "--kind", "torus"}).code == 1);
    CHECK(run({"generate", "--n", "5"}).code == 1);
    CHECK(run({"generate", "--noise", "-1"}).code == 1);
}

TEST_CASE("fit prints a score object") {
    const auto input = circle_csv();
    const auto model = temp_path("model.json"), plot = temp_path("plot.csv");
    const auto r = run({"fit", "--input", input, "--output-model", model.string(), "--output-plot", plot.string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"cost", "loglik", "bic", "aic", "k_final", "iterations"}) CHECK(j.contains(key));
    CHECK(std::filesystem::exists(model));
    CHECK(std::filesystem::exists(plot));
    const auto saved = nlohmann::json::parse(slurp(model));
    CHECK(saved.at("clusters").size() == j.at("k_final").get<std::size_t>());

    // Deterministic given flags.
    CHECK(run({"fit", "--input", input}).out == run({"fit", "--input", input}).out);

    const auto restarts = run({"fit", "--input", input, "--k", "3", "--restarts", "4", "--family", "cubic",
                               "--init", "kmeanspp", "--ll-mode", "max"});
    CHECK(restarts.code == 0);
}

TEST_CASE("fit exit codes") {
    const auto input = circle_csv();
    CHECK(run({"fit", "--input", input, "--k", "0"}).code == 1);
    CHECK(run({"fit", "--input", input, "--family", "quartic"}).code == 1);
    CHECK(run({"fit", "--input", input, "--epsilon", "0"}).code == 1);
    CHECK(run({"fit", "--input", input, "--ll-mode", "sum"}).code == 1);
    CHECK(run({"fit", "--input", input, "--k", "1000"}).code == 1);
    CHECK(run({"fit"}).code == 1);
    CHECK(run({"fit", "--input", input, "--bogus"}).code == 1);
    CHECK(run({}).code == 1);

    CHECK(run({"fit", "--input", temp_path("nope.csv").string()}).code == 2);
    const auto bad = temp_path("bad.csv");
    {
        std::ofstream out(bad);
        out << "x,y\n1,2\n3,oops\n";
    }
    const auto r = run({"fit", "--input", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("row 3") != std::string::npos);

    const auto flat = temp_path("flat.csv");
    {
        std::ofstream out(flat);
        for (int i = 0; i < 40; ++i) out << "1,1\n";
    }
    CHECK(run({"fit", "--input", flat.string(), "--k", "2"}).code == 3);
}

TEST_CASE("thread count comes from the environment") {
    const auto input = circle_csv();
    const std::vector<std::string> args{"fit", "--input", input, "--k", "3", "--restarts", "6"};
    ::setenv("AFCEC_THREADS", "1", 1);
    const auto serial = run(args);
    ::setenv("AFCEC_THREADS", "4", 1);
    const auto parallel = run(args);
    CHECK(serial.code == 0);
    CHECK(serial.out == parallel.out);
    ::setenv("AFCEC_THREADS", "many", 1);
    CHECK(run(args).code == 1);
    ::unsetenv("AFCEC_THREADS");
}

TEST_CASE("sweep") {
    const auto input = circle_csv();
    const auto r = run({"sweep", "--input", input, "--k-max", "3", "--restarts", "2"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "k,k_final,loglik,n_params,bic,aic");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c = cells(rows[i]);
        REQUIRE(c.size() == 6);
        CHECK(std::stoul(c[0]) == i);
        const double ll = std::stod(c[2]), np = std::stod(c[3]);
        CHECK(std::stod(c[4]) == doctest::Approx(-2 * ll + np * std::log(600.0)).epsilon(1e-12));
        CHECK(std::stod(c[5]) == doctest::Approx(-2 * ll + 2 * np).epsilon(1e-12));
    }
    CHECK(run({"sweep", "--input", input, "--k-max", "0"}).code == 1);
}

TEST_CASE("acagmm-check") {
    const auto r = run({"acagmm-check", "--n", "200"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "a,sigma1,sigma2,raw,corrected,fold_mass,unreachable_mass,excluded");
    CHECK(rows.size() == 1 + 4 * 2 * 2);
    std::size_t valid = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c = cells(rows[i]);
        REQUIRE(c.size() == 8);
        if (c[7] == "0") {
            ++valid;
            CHECK(std::abs(std::stod(c[4]) - 1.0) < 1e-3);
        }
    }
    CHECK(valid > 0);

    const auto custom = run({"acagmm-check", "--a-grid", "0.5", "--sigma-grid", "1", "--box", "6", "--n", "100"});
    CHECK(custom.code == 0);
    CHECK(lines(custom.out).size() == 2);

    CHECK(run({"acagmm-check", "--n", "3"}).code == 1);
    CHECK(run({"acagmm-check", "--a-grid", "0"}).code == 1);
    CHECK(run({"acagmm-check", "--a-grid", "x"}).code == 1);
    CHECK(run({"acagmm-check", "--box", "-1"}).code == 1);
}

TEST_CASE("help goes to stdout with exit 0") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("fit") != std::string::npos);
}
