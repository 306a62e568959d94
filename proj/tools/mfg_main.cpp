#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "mfg/cli_io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"first-order mean field game solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool quiet = false;
    std::uint64_t seed = 0;
    bool seed_set = false;

    app.add_option("--config", config_path, "path to the JSON run config")->required();
    app.add_option("--out", out_dir, "override the output directory");
    app.add_option("--seed", seed, "override solver.rng_seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* solve = app.add_subcommand("solve", "time-dependent solve");
    auto* ergodic = app.add_subcommand("ergodic", "stationary cell problem");
    auto* longtime = app.add_subcommand("longtime", "long-horizon averaging experiment");
    auto* verify = app.add_subcommand("verify", "solve + weak-solution residual report");
    for (auto* sub : {solve, ergodic, longtime, verify}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        mfg::RunConfig cfg = mfg::load_config(config_path);
        if (solve->parsed()) cfg.mode = mfg::RunMode::Solve;
        if (ergodic->parsed()) cfg.mode = mfg::RunMode::Ergodic;
        if (longtime->parsed()) cfg.mode = mfg::RunMode::Longtime;
        if (verify->parsed()) cfg.mode = mfg::RunMode::Verify;
        if (cfg.mode == mfg::RunMode::Longtime && cfg.horizons.empty())
            cfg.horizons = {2.0, 5.0};
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (seed_set) cfg.solver.rng_seed = seed;
        return mfg::run(cfg, quiet);
    } catch (const mfg::SchemaError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const mfg::AssumptionViolation& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
