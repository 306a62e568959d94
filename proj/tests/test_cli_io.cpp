#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "mfg/cli_io.hpp"

using namespace mfg;
namespace fs = std::filesystem;

namespace {

const char* kMinimalConfig = R"({
  "schema_version": 1,
  "mode": "solve"
})";

std::string tmp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("minimal config fills the documented defaults") {
    RunConfig cfg = parse_config(kMinimalConfig);
    CHECK(cfg.mode == RunMode::Solve);
    CHECK(cfg.grid.d == 1);
    CHECK(cfg.grid.nx == 64);
    CHECK(cfg.grid.nt == 64);
    CHECK(cfg.grid.horizon == 1.0);
    CHECK(cfg.model.hamiltonian.r == 2.0);
    CHECK(cfg.model.coupling.q == 2.0);
    CHECK(cfg.model.coupling.family == CouplingFamily::Power);
    for (double v : cfg.model.hamiltonian.c) CHECK(v == 1.0);
    for (double v : cfg.model.hamiltonian.V) CHECK(v == 0.0);
    for (double v : cfg.model.m0) CHECK(v == 1.0);
    for (double v : cfg.model.phi_T) CHECK(v == 0.0);
    CHECK(cfg.solver.max_iters == 20000);
    CHECK(cfg.solver.tol_gap == 1e-4);
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("schema violations carry the offending path") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema_version":1,"grid":{"n_x":-4}})"),
                         doctest::Contains("$.grid"), SchemaError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema_version":1,"grid":{"nx":8}})"),
                         doctest::Contains("$.grid.nx"), SchemaError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema_version":1,"bogus":3})"),
                         doctest::Contains("$.bogus"), SchemaError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"mode":"solve"})"),
                         doctest::Contains("schema_version"), SchemaError);
    CHECK_THROWS_AS(parse_config("not json at all"), SchemaError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema_version":1,"mode":"simulate"})"),
                         doctest::Contains("$.mode"), SchemaError);
}

TEST_CASE("assumption violations surface at parse time") {
    const char* cfg = R"({
      "schema_version": 1,
      "grid": {"d": 2, "n_x": 8, "n_t": 4, "T": 1.0},
      "model": {"hamiltonian": {"r": 2.0}, "coupling": {"family": "power", "q": 3.0}}
    })";
    CHECK_THROWS_WITH_AS(parse_config(cfg), doctest::Contains("r > max{d(q-1),1}"),
                         AssumptionViolation);
}

TEST_CASE("presets expand on the grid") {
    const char* cfg = R"({
      "schema_version": 1,
      "grid": {"d": 1, "n_x": 4, "n_t": 2, "T": 1.0},
      "model": {"hamiltonian": {"V": {"preset": "cosine", "amplitude": 2.0, "frequency": 1.0}}},
      "data": {"m0": {"preset": "cosine", "amplitude": 0.5, "frequency": 1.0}}
    })";
    RunConfig rc = parse_config(cfg);
    CHECK(rc.model.hamiltonian.V[0] == doctest::Approx(2.0));
    CHECK(rc.model.hamiltonian.V[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rc.model.hamiltonian.V[2] == doctest::Approx(-2.0));
    // m0 preset is 1 + amplitude*cos(...), unit mass on the grid
    CHECK(rc.model.m0[0] == doctest::Approx(1.5));
    CHECK(rc.model.m0[2] == doctest::Approx(0.5));
}

TEST_CASE("csv export layout and row count") {
    Grid g(1, 4, 2, 1.0);
    ScalarField f(g, Placement::TimeCell);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (double& x : f.v) x = u(rng);
    std::string p = tmp_path("mfg_test_field.csv");
    export_field(g, f, p, ExportFormat::Csv);
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x0,value");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8);  // n_x=4 times n_t=2 cells
}

TEST_CASE("csv round trip reproduces values exactly") {
    for (int d : {1, 2}) {
        Grid g(d, 4, 3, 2.0);
        ScalarField f(g, Placement::TimeNode);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1, 1);
        for (double& x : f.v) x = u(rng);
        std::string p = tmp_path("mfg_test_rt.csv");
        export_field(g, f, p, ExportFormat::Csv);
        Grid g2;
        ScalarField f2 = import_field(p, ExportFormat::Csv, &g2);
        CHECK(g2.d == d);
        CHECK(g2.nx == 4);
        CHECK(g2.nt == 3);
        CHECK(f2.placement == Placement::TimeNode);
        REQUIRE(f2.v.size() == f.v.size());
        for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(f2.v[i] == f.v[i]);
    }
}

TEST_CASE("binary round trip is bit-identical") {
    Grid g(2, 8, 4, 1.0);
    ScalarField f(g, Placement::TimeCell);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (double& x : f.v) x = u(rng);
    std::string p = tmp_path("mfg_test_rt.bin");
    export_field(g, f, p, ExportFormat::BinaryF64);
    ScalarField f2 = import_field(p, ExportFormat::BinaryF64);
    CHECK(f2.v == f.v);
    CHECK(f2.placement == Placement::TimeCell);
    // 32-byte header + payload
    CHECK(fs::file_size(p) == 32 + f.v.size() * sizeof(double));
}

TEST_CASE("run() writes a complete manifest") {
    const char* cfgtext = R"({
      "schema_version": 1,
      "mode": "solve",
      "grid": {"d": 1, "n_x": 8, "n_t": 8, "T": 1.0},
      "solver": {"max_iters": 5000, "rng_seed": 3},
      "output": {"directory": "DIR", "formats": ["csv", "binary-f64"]}
    })";
    std::string dir = tmp_path("mfg_run_test");
    fs::remove_all(dir);
    std::string text(cfgtext);
    text.replace(text.find("DIR"), 3, dir);
    RunConfig cfg = parse_config(text);
    int status = run(cfg, /*quiet=*/true);
    CHECK(status == 0);
    std::ifstream is(dir + "/manifest.json");
    REQUIRE(is.good());
    nlohmann::json man = nlohmann::json::parse(is);
    CHECK(man["convergence"]["converged"].get<bool>());
    CHECK(man["assumptions"]["nu"].get<double>() == doctest::Approx(0.2));
    for (const auto& fe : man["files"]) {
        fs::path p = fs::path(dir) / fe["name"].get<std::string>();
        REQUIRE(fs::exists(p));
        CHECK(fs::file_size(p) == fe["bytes"].get<std::uintmax_t>());
    }

    // identical config (same seed) reproduces binary exports byte for byte
    std::string dir2 = tmp_path("mfg_run_test2");
    fs::remove_all(dir2);
    RunConfig cfg2 = cfg;
    cfg2.output_dir = dir2;
    CHECK(run(cfg2, true) == 0);
    for (const char* name : {"m.bin", "phi.bin", "alpha.bin"}) {
        std::ifstream a(fs::path(dir) / name, std::ios::binary);
        std::ifstream b(fs::path(dir2) / name, std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
    }
}

TEST_CASE("verify mode reports residuals and exit codes") {
    std::string dir = tmp_path("mfg_verify_test");
    fs::remove_all(dir);
    std::string text = R"({
      "schema_version": 1,
      "mode": "verify",
      "grid": {"d": 1, "n_x": 8, "n_t": 8, "T": 1.0},
      "solver": {"tol_gap": 1e-5, "tol_feas": 1e-5},
      "output": {"directory": ")" + dir + R"("}
    })";
    RunConfig cfg = parse_config(text);
    CHECK(run(cfg, true) == 0);
    std::ifstream is(dir + "/manifest.json");
    nlohmann::json man = nlohmann::json::parse(is);
    CHECK(man["residuals"]["pass"].get<bool>());
    CHECK(fs::exists(fs::path(dir) / "residuals.csv"));
}

TEST_CASE("ergodic mode lands near the closed form") {
    std::string dir = tmp_path("mfg_ergodic_test");
    fs::remove_all(dir);
    std::string text = R"({
      "schema_version": 1,
      "mode": "ergodic",
      "grid": {"d": 1, "n_x": 64, "n_t": 1, "T": 1.0},
      "model": {"hamiltonian": {"V": {"preset": "cosine", "amplitude": 1.0, "frequency": 1.0}}},
      "solver": {"max_iters": 100000, "tol_gap": 1e-7, "tol_feas": 1e-6},
      "output": {"directory": ")" + dir + R"("}
    })";
    RunConfig cfg = parse_config(text);
    CHECK(run(cfg, true) == 0);
    std::ifstream is(dir + "/manifest.json");
    nlohmann::json man = nlohmann::json::parse(is);
    CHECK(std::abs(man["lambda"].get<double>() - 1.0) <= 2e-3);
}
