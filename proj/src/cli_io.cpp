#include "mfg/cli_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mfg {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kArtifactVersion = "1.0.0";
constexpr char kMagic[8] = {'M', 'F', 'G', 'F', '6', '4', '\0', '\0'};

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw SchemaError("config error at " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) schema_fail(path + "." + it.key(), "unknown key");
}

double get_num(const json& obj, const std::string& path, const std::string& key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj.at(key).is_number()) schema_fail(path + "." + key, "expected a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key, int dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj.at(key).is_number_integer()) schema_fail(path + "." + key, "expected an integer");
    return obj.at(key).get<int>();
}

std::string get_str(const json& obj, const std::string& path, const std::string& key,
                    const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj.at(key).is_string()) schema_fail(path + "." + key, "expected a string");
    return obj.at(key).get<std::string>();
}

// spatial field spec: preset {zero | constant | cosine} or inline array
std::vector<double> spatial_field(const json& spec, const std::string& path, const Grid& g,
                                  double base) {
    const std::size_t n = g.sites();
    std::vector<double> out(n, base);
    if (!spec.is_object()) schema_fail(path, "expected an object");
    if (spec.contains("array")) {
        reject_unknown(spec, path, {"array"});
        const json& arr = spec.at("array");
        if (!arr.is_array() || arr.size() != n)
            schema_fail(path + ".array", "expected " + std::to_string(n) + " values");
        for (std::size_t j = 0; j < n; ++j) out[j] = arr[j].get<double>();
        return out;
    }
    std::string preset = get_str(spec, path, "preset", "");
    if (preset == "zero" || preset == "uniform") {
        reject_unknown(spec, path, {"preset"});
    } else if (preset == "constant") {
        reject_unknown(spec, path, {"preset", "value"});
        double v = get_num(spec, path, "value", 0.0);
        for (double& o : out) o = v;
    } else if (preset == "cosine") {
        reject_unknown(spec, path, {"preset", "amplitude", "frequency", "axis"});
        double amp = get_num(spec, path, "amplitude", 1.0);
        double freq = get_num(spec, path, "frequency", 1.0);
        int axis = get_int(spec, path, "axis", 0);
        if (axis < 0 || axis >= g.d) schema_fail(path + ".axis", "axis out of range");
        for (std::size_t j = 0; j < n; ++j)
            out[j] = base + amp * std::cos(2.0 * M_PI * freq * g.coord(j, axis));
    } else {
        schema_fail(path + ".preset", "unknown preset '" + preset + "'");
    }
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct FileEntry {
    std::string name;
    std::uintmax_t bytes = 0;
    long rows = -1;  // data rows for CSV, -1 for binary
};

void write_bin_header(std::ofstream& os, std::uint32_t placement, const Grid& g,
                      std::uint32_t ncomp) {
    os.write(kMagic, 8);
    std::uint32_t hdr[6] = {kSchemaVersion, placement, static_cast<std::uint32_t>(g.d),
                            static_cast<std::uint32_t>(g.nx), static_cast<std::uint32_t>(g.nt),
                            ncomp};
    os.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("config error: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_fail("$", "expected a JSON object");
    reject_unknown(doc, "$",
                   {"schema_version", "mode", "grid", "model", "data", "solver", "longtime",
                    "output"});
    if (get_int(doc, "$", "schema_version", -1) != kSchemaVersion)
        schema_fail("$.schema_version", "must be " + std::to_string(kSchemaVersion));

    RunConfig cfg;
    std::string mode = get_str(doc, "$", "mode", "solve");
    if (mode == "solve") cfg.mode = RunMode::Solve;
    else if (mode == "ergodic") cfg.mode = RunMode::Ergodic;
    else if (mode == "longtime") cfg.mode = RunMode::Longtime;
    else if (mode == "verify") cfg.mode = RunMode::Verify;
    else schema_fail("$.mode", "unknown mode '" + mode + "'");

    json gj = doc.value("grid", json::object());
    reject_unknown(gj, "$.grid", {"d", "n_x", "n_t", "T"});
    int d = get_int(gj, "$.grid", "d", 1);
    int nx = get_int(gj, "$.grid", "n_x", 64);
    int nt = get_int(gj, "$.grid", "n_t", 64);
    double T = get_num(gj, "$.grid", "T", 1.0);
    try {
        cfg.grid = Grid(d, nx, nt, T);
    } catch (const std::invalid_argument& e) {
        schema_fail("$.grid", e.what());
    }

    json mj = doc.value("model", json::object());
    reject_unknown(mj, "$.model", {"hamiltonian", "coupling"});
    json hj = mj.value("hamiltonian", json::object());
    reject_unknown(hj, "$.model.hamiltonian", {"r", "c", "V"});
    cfg.model.hamiltonian.r = get_num(hj, "$.model.hamiltonian", "r", 2.0);
    cfg.model.hamiltonian.c = spatial_field(hj.value("c", json{{"preset", "constant"}, {"value", 1.0}}),
                                            "$.model.hamiltonian.c", cfg.grid, 0.0);
    cfg.model.hamiltonian.V =
        spatial_field(hj.value("V", json{{"preset", "zero"}}), "$.model.hamiltonian.V", cfg.grid, 0.0);
    json cj = mj.value("coupling", json::object());
    reject_unknown(cj, "$.model.coupling", {"family", "q", "a"});
    std::string family = get_str(cj, "$.model.coupling", "family", "power");
    if (family == "power") cfg.model.coupling.family = CouplingFamily::Power;
    else if (family == "log") cfg.model.coupling.family = CouplingFamily::Log;
    else schema_fail("$.model.coupling.family", "unknown family '" + family + "'");
    cfg.model.coupling.q = get_num(cj, "$.model.coupling", "q", 2.0);
    cfg.model.coupling.a = spatial_field(cj.value("a", json{{"preset", "constant"}, {"value", 1.0}}),
                                         "$.model.coupling.a", cfg.grid, 0.0);

    json dj = doc.value("data", json::object());
    reject_unknown(dj, "$.data", {"m0", "phi_T"});
    cfg.model.m0 =
        spatial_field(dj.value("m0", json{{"preset", "uniform"}}), "$.data.m0", cfg.grid, 1.0);
    cfg.model.phi_T =
        spatial_field(dj.value("phi_T", json{{"preset", "zero"}}), "$.data.phi_T", cfg.grid, 0.0);

    json sj = doc.value("solver", json::object());
    reject_unknown(sj, "$.solver",
                   {"max_iters", "tol_gap", "tol_feas", "step_primal", "step_dual", "theta",
                    "prox_inner_tol", "prox_inner_max_iters", "rng_seed", "check_every",
                    "init_noise"});
    SolverOptions so;
    so.max_iters = get_int(sj, "$.solver", "max_iters", so.max_iters);
    so.tol_gap = get_num(sj, "$.solver", "tol_gap", so.tol_gap);
    so.tol_feas = get_num(sj, "$.solver", "tol_feas", so.tol_feas);
    so.step_primal = get_num(sj, "$.solver", "step_primal", so.step_primal);
    so.step_dual = get_num(sj, "$.solver", "step_dual", so.step_dual);
    so.theta = get_num(sj, "$.solver", "theta", so.theta);
    so.prox_inner_tol = get_num(sj, "$.solver", "prox_inner_tol", so.prox_inner_tol);
    so.prox_inner_max_iters =
        get_int(sj, "$.solver", "prox_inner_max_iters", so.prox_inner_max_iters);
    if (sj.contains("rng_seed")) so.rng_seed = sj.at("rng_seed").get<std::uint64_t>();
    so.check_every = get_int(sj, "$.solver", "check_every", so.check_every);
    so.init_noise = get_num(sj, "$.solver", "init_noise", so.init_noise);
    cfg.solver = so;

    json lj = doc.value("longtime", json::object());
    reject_unknown(lj, "$.longtime", {"horizons"});
    if (lj.contains("horizons")) {
        if (!lj.at("horizons").is_array()) schema_fail("$.longtime.horizons", "expected an array");
        for (const auto& h : lj.at("horizons")) cfg.horizons.push_back(h.get<double>());
    }
    if (cfg.mode == RunMode::Longtime && cfg.horizons.empty()) cfg.horizons = {2.0, 5.0};

    json oj = doc.value("output", json::object());
    reject_unknown(oj, "$.output", {"directory", "formats"});
    cfg.output_dir = get_str(oj, "$.output", "directory", "out");
    if (oj.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : oj.at("formats")) {
            std::string s = f.get<std::string>();
            if (s == "csv") cfg.formats.push_back(ExportFormat::Csv);
            else if (s == "binary-f64") cfg.formats.push_back(ExportFormat::BinaryF64);
            else schema_fail("$.output.formats", "unknown format '" + s + "'");
        }
    }

    try {
        cfg.model.validate(cfg.grid);
    } catch (const std::invalid_argument& e) {
        schema_fail("$.model", e.what());
    }
    check_assumptions(cfg.model, cfg.grid.d);  // AssumptionViolation surfaces before any solve
    cfg.echo = doc.dump(2);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw SchemaError("config error: cannot open '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

void export_field(const Grid& g, const ScalarField& f, const std::string& path,
                  ExportFormat format) {
    if (format == ExportFormat::BinaryF64) {
        std::ofstream os(path, std::ios::binary);
        write_bin_header(os, f.placement == Placement::TimeNode ? 0u : 1u, g, 1u);
        os.write(reinterpret_cast<const char*>(f.v.data()),
                 static_cast<std::streamsize>(f.v.size() * sizeof(double)));
        return;
    }
    std::ofstream os(path);
    os << (g.d == 1 ? "t,x0,value\n" : "t,x0,x1,value\n");
    for (int k = 0; k < f.time_len; ++k) {
        double t = f.placement == Placement::TimeNode ? k * g.ht() : (k + 0.5) * g.ht();
        if (g.d == 1) {
            for (int i0 = 0; i0 < g.nx; ++i0)
                os << fmt17(t) << ',' << fmt17(i0 * g.hx()) << ','
                   << fmt17(f.at(k, static_cast<std::size_t>(i0))) << '\n';
        } else {
            for (int i0 = 0; i0 < g.nx; ++i0)
                for (int i1 = 0; i1 < g.nx; ++i1) {
                    std::size_t j = static_cast<std::size_t>(i1) * g.nx + i0;
                    os << fmt17(t) << ',' << fmt17(i0 * g.hx()) << ',' << fmt17(i1 * g.hx())
                       << ',' << fmt17(f.at(k, j)) << '\n';
                }
        }
    }
}

void export_spatial(const Grid& g, const std::vector<double>& f, const std::string& path,
                    ExportFormat format) {
    Grid flat(g.d, g.nx, 1, 1.0);
    ScalarField sf(flat, Placement::TimeCell);
    sf.v = f;
    export_field(flat, sf, path, format);
}

ScalarField import_field(const std::string& path, ExportFormat format, Grid* grid_out) {
    if (format == ExportFormat::BinaryF64) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw std::runtime_error("import_field: cannot open '" + path + "'");
        char magic[8];
        std::uint32_t hdr[6];
        is.read(magic, 8);
        is.read(reinterpret_cast<char*>(hdr), sizeof hdr);
        if (!is || std::memcmp(magic, kMagic, 8) != 0 || hdr[0] != kSchemaVersion)
            throw std::runtime_error("import_field: bad header in '" + path + "'");
        Grid g(static_cast<int>(hdr[2]), static_cast<int>(hdr[3]), static_cast<int>(hdr[4]), 1.0);
        ScalarField f(g, hdr[1] == 0 ? Placement::TimeNode : Placement::TimeCell);
        is.read(reinterpret_cast<char*>(f.v.data()),
                static_cast<std::streamsize>(f.v.size() * sizeof(double)));
        if (!is) throw std::runtime_error("import_field: truncated payload in '" + path + "'");
        if (grid_out) *grid_out = g;
        return f;
    }
    std::ifstream is(path);
    if (!is) throw std::runtime_error("import_field: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("import_field: empty file");
    const int d = line == "t,x0,value" ? 1 : 2;
    std::vector<double> ts, vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t first = line.find(','), last = line.rfind(',');
        ts.push_back(std::stod(line.substr(0, first)));
        vals.push_back(std::stod(line.substr(last + 1)));
    }
    std::size_t slice = 1;
    while (slice < ts.size() && ts[slice] == ts[0]) ++slice;
    const int time_len = static_cast<int>(ts.size() / slice);
    const int nx = d == 1 ? static_cast<int>(slice)
                          : static_cast<int>(std::lround(std::sqrt(double(slice))));
    const bool node = ts[0] == 0.0;
    Grid g(d, nx, node ? time_len - 1 : time_len,
           node ? ts.back() : ts.back() + 0.5 * (ts.back() - ts[0]) / std::max(1, time_len - 1));
    ScalarField f(g, node ? Placement::TimeNode : Placement::TimeCell);
    // rows were written lexicographically in (t, x0, x1); invert that ordering
    std::size_t row = 0;
    for (int k = 0; k < time_len; ++k) {
        if (d == 1) {
            for (int i0 = 0; i0 < nx; ++i0) f.at(k, static_cast<std::size_t>(i0)) = vals[row++];
        } else {
            for (int i0 = 0; i0 < nx; ++i0)
                for (int i1 = 0; i1 < nx; ++i1)
                    f.at(k, static_cast<std::size_t>(i1) * nx + i0) = vals[row++];
        }
    }
    if (grid_out) *grid_out = g;
    return f;
}

namespace {

FileEntry entry_for(const std::filesystem::path& p, long rows) {
    return {p.filename().string(), std::filesystem::file_size(p), rows};
}

void write_gap_history(const std::vector<GapRecord>& hist, const std::filesystem::path& p) {
    std::ofstream os(p);
    os << "iter,A,B,gap,feasibility\n";
    for (const auto& r : hist)
        os << r.iter << ',' << fmt17(r.A) << ',' << fmt17(r.B) << ',' << fmt17(r.gap) << ','
           << fmt17(r.feasibility) << '\n';
}

const char* format_ext(ExportFormat f) { return f == ExportFormat::Csv ? ".csv" : ".bin"; }

}  // namespace

int run(const RunConfig& cfg, bool quiet) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["config"] = json::parse(cfg.echo);
    std::vector<FileEntry> files;
    auto add_scalar = [&](const ScalarField& f, const Grid& g, const std::string& stem) {
        for (ExportFormat fmt : cfg.formats) {
            fs::path p = dir / (stem + format_ext(fmt));
            export_field(g, f, p.string(), fmt);
            files.push_back(entry_for(
                p, fmt == ExportFormat::Csv ? static_cast<long>(f.v.size()) : -1));
        }
    };
    auto add_spatial = [&](const std::vector<double>& f, const Grid& g, const std::string& stem) {
        for (ExportFormat fmt : cfg.formats) {
            fs::path p = dir / (stem + format_ext(fmt));
            export_spatial(g, f, p.string(), fmt);
            files.push_back(
                entry_for(p, fmt == ExportFormat::Csv ? static_cast<long>(f.size()) : -1));
        }
    };

    int status = 0;
    try {
        AssumptionReport rep = check_assumptions(cfg.model, cfg.grid.d);
        manifest["assumptions"] = {{"r", rep.r},
                                   {"r_conj", rep.r_conj},
                                   {"q", rep.q},
                                   {"growth_constant", rep.growth_constant},
                                   {"exponent_ok", rep.exponent_ok},
                                   {"nu", rep.nu}};
        if (cfg.mode == RunMode::Solve || cfg.mode == RunMode::Verify) {
            SolutionBundle sol = solve_time_dependent(cfg.model, cfg.grid, cfg.solver);
            manifest["convergence"] = {{"converged", sol.converged},
                                       {"iterations", sol.iterations},
                                       {"final_gap_rel", sol.final_gap_rel},
                                       {"final_feasibility", sol.final_feasibility},
                                       {"mass_drift_raw", sol.mass_drift_raw}};
            add_scalar(sol.phi, cfg.grid, "phi");
            add_scalar(sol.m, cfg.grid, "m");
            add_scalar(sol.alpha, cfg.grid, "alpha");
            {
                fs::path p = dir / "gap_history.csv";
                write_gap_history(sol.gap_history, p);
                files.push_back(entry_for(p, static_cast<long>(sol.gap_history.size())));
            }
            if (!sol.converged) status = 2;
            if (cfg.mode == RunMode::Verify) {
                ResidualReport res = weak_solution_residuals(sol, cfg.model, cfg.grid);
                const double thr_hj = 1e-3, thr_cont = 1e-3, thr_term = 1e-12;
                const double thr_id = 1e-3 * cfg.grid.horizon;
                bool ok = res.hj_inequality_violation <= thr_hj &&
                          res.identity_gap <= thr_id && res.continuity_residual <= thr_cont &&
                          res.terminal_violation <= thr_term;
                manifest["residuals"] = {
                    {"hj_inequality_violation", res.hj_inequality_violation},
                    {"identity_gap", res.identity_gap},
                    {"continuity_residual", res.continuity_residual},
                    {"terminal_violation", res.terminal_violation},
                    {"thresholds",
                     {{"hj", thr_hj}, {"identity", thr_id}, {"continuity", thr_cont},
                      {"terminal", thr_term}}},
                    {"pass", ok}};
                fs::path p = dir / "residuals.csv";
                {
                    std::ofstream os(p);
                    os << "hj_inequality_violation,identity_gap,continuity_residual,"
                          "terminal_violation\n"
                       << fmt17(res.hj_inequality_violation) << ',' << fmt17(res.identity_gap)
                       << ',' << fmt17(res.continuity_residual) << ','
                       << fmt17(res.terminal_violation) << '\n';
                }
                files.push_back(entry_for(p, 1));
                if (!ok) status = 2;
            }
        } else if (cfg.mode == RunMode::Ergodic) {
            ErgodicSolution sol = solve_ergodic(cfg.model, cfg.grid, cfg.solver);
            manifest["convergence"] = {{"converged", sol.converged},
                                       {"iterations", sol.iterations},
                                       {"final_gap_rel", sol.final_gap_rel},
                                       {"final_feasibility", sol.final_feasibility}};
            manifest["lambda"] = sol.lambda;
            add_spatial(sol.m, cfg.grid, "m");
            add_spatial(sol.phi, cfg.grid, "phi");
            {
                fs::path p = dir / "gap_history.csv";
                write_gap_history(sol.gap_history, p);
                files.push_back(entry_for(p, static_cast<long>(sol.gap_history.size())));
            }
            if (!sol.converged) status = 2;
        } else {  // Longtime
            LongTimeReport rep2 = long_time_experiment(cfg.model, cfg.grid, cfg.horizons,
                                                       cfg.solver);
            fs::path p = dir / "longtime.csv";
            {
                std::ofstream os(p);
                os << "T,mu_error,psi_error,mu_error_l2,psi_error_l2,converged\n";
                for (std::size_t i = 0; i < rep2.horizons.size(); ++i)
                    os << fmt17(rep2.horizons[i]) << ',' << fmt17(rep2.mu_errors[i]) << ','
                       << fmt17(rep2.psi_errors[i]) << ',' << fmt17(rep2.mu_errors_l2[i]) << ','
                       << fmt17(rep2.psi_errors_l2[i]) << ',' << (rep2.converged[i] ? 1 : 0)
                       << '\n';
            }
            files.push_back(entry_for(p, static_cast<long>(rep2.horizons.size())));
            manifest["longtime"] = {{"lambda_bar", rep2.lambda_bar},
                                    {"mu_slope", rep2.mu_slope},
                                    {"psi_slope", rep2.psi_slope},
                                    {"all_converged", rep2.all_converged}};
            manifest["convergence"] = {{"converged", rep2.all_converged}};
            if (!rep2.all_converged) status = 2;
        }
    } catch (const std::exception& e) {
        manifest["convergence"] = {{"converged", false}, {"error", e.what()}};
        status = 2;
    }

    const auto t1 = std::chrono::steady_clock::now();
    manifest["wall_time_seconds"] = std::chrono::duration<double>(t1 - t0).count();
    json jfiles = json::array();
    for (const auto& f : files)
        jfiles.push_back({{"name", f.name}, {"bytes", f.bytes}, {"rows", f.rows}});
    manifest["files"] = jfiles;
    {
        std::ofstream os(dir / "manifest.json");
        os << manifest.dump(2) << '\n';
    }
    if (!quiet) {
        const char* name = cfg.mode == RunMode::Solve     ? "solve"
                           : cfg.mode == RunMode::Ergodic ? "ergodic"
                           : cfg.mode == RunMode::Verify  ? "verify"
                                                          : "longtime";
        std::printf("%s done, status %d, outputs in %s\n", name, status,
                    cfg.output_dir.c_str());
    }
    return status;
}

}  // namespace mfg
