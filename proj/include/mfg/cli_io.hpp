#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfg/analysis.hpp"
#include "mfg/solver.hpp"

namespace mfg {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { Solve, Ergodic, Longtime, Verify };
enum class ExportFormat { Csv, BinaryF64 };

struct RunConfig {
    RunMode mode = RunMode::Solve;
    Grid grid;
    ModelSpec model;
    SolverOptions solver;
    std::vector<double> horizons;  // longtime mode
    std::string output_dir = "out";
    std::vector<ExportFormat> formats{ExportFormat::Csv};
    std::string echo;  // normalized config document, replayed into the manifest
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// CSV: "t,x0[,x1],value", rows lexicographic in (t, x), 17 significant digits.
// binary-f64: 32-byte header (8-byte magic + six u32: version, placement, d,
// n_x, n_t, ncomp) followed by little-endian doubles in storage order.
void export_field(const Grid& g, const ScalarField& f, const std::string& path,
                  ExportFormat format);
void export_spatial(const Grid& g, const std::vector<double>& f, const std::string& path,
                    ExportFormat format);
ScalarField import_field(const std::string& path, ExportFormat format, Grid* grid_out = nullptr);

// Dispatches on config.mode, writes outputs + manifest under config.output_dir.
// Exit status: 0 success, 2 non-convergence, 1 config/assumption error.
int run(const RunConfig& config, bool quiet = false);

}  // namespace mfg
