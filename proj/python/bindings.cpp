#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfg/analysis.hpp"
#include "mfg/cli_io.hpp"

namespace py = pybind11;
using namespace mfg;

PYBIND11_MODULE(_mfgkit, mod) {
    mod.doc() = "first-order mean field game solver";

    py::register_exception<AssumptionViolation>(mod, "AssumptionViolation");
    py::register_exception<SchemaError>(mod, "SchemaError");
    py::register_exception<WrongFamily>(mod, "WrongFamily");
    py::register_exception<InfeasibleInput>(mod, "InfeasibleInput");

    py::class_<Grid>(mod, "Grid")
        .def(py::init<int, int, int, double>(), py::arg("d"), py::arg("nx"), py::arg("nt"),
             py::arg("horizon"))
        .def_readonly("d", &Grid::d)
        .def_readonly("nx", &Grid::nx)
        .def_readonly("nt", &Grid::nt)
        .def_readonly("horizon", &Grid::horizon)
        .def("hx", &Grid::hx)
        .def("ht", &Grid::ht)
        .def("sites", &Grid::sites)
        .def("cell_volume", &Grid::cell_volume)
        .def("coord", &Grid::coord);

    py::enum_<Placement>(mod, "Placement")
        .value("TimeNode", Placement::TimeNode)
        .value("TimeCell", Placement::TimeCell);

    py::class_<ScalarField>(mod, "ScalarField")
        .def_readonly("placement", &ScalarField::placement)
        .def_readonly("time_len", &ScalarField::time_len)
        .def_readonly("n_sites", &ScalarField::n_sites)
        .def_readonly("values", &ScalarField::v)
        .def("at", [](const ScalarField& f, int k, std::size_t j) { return f.at(k, j); });

    py::class_<VectorField>(mod, "VectorField")
        .def_readonly("d", &VectorField::d)
        .def_readonly("nt", &VectorField::nt)
        .def_readonly("n_sites", &VectorField::n_sites)
        .def_readonly("values", &VectorField::v)
        .def("at", [](const VectorField& f, int k, int a, std::size_t j) { return f.at(k, a, j); });

    py::enum_<CouplingFamily>(mod, "CouplingFamily")
        .value("Power", CouplingFamily::Power)
        .value("Log", CouplingFamily::Log);

    py::class_<HamiltonianSpec>(mod, "HamiltonianSpec")
        .def(py::init<>())
        .def_readwrite("r", &HamiltonianSpec::r)
        .def_readwrite("c", &HamiltonianSpec::c)
        .def_readwrite("V", &HamiltonianSpec::V);

    py::class_<CouplingSpec>(mod, "CouplingSpec")
        .def(py::init<>())
        .def_readwrite("family", &CouplingSpec::family)
        .def_readwrite("q", &CouplingSpec::q)
        .def_readwrite("a", &CouplingSpec::a);

    py::class_<ModelSpec>(mod, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("hamiltonian", &ModelSpec::hamiltonian)
        .def_readwrite("coupling", &ModelSpec::coupling)
        .def_readwrite("m0", &ModelSpec::m0)
        .def_readwrite("phi_T", &ModelSpec::phi_T)
        .def("validate", &ModelSpec::validate);

    py::class_<AssumptionReport>(mod, "AssumptionReport")
        .def_readonly("r", &AssumptionReport::r)
        .def_readonly("r_conj", &AssumptionReport::r_conj)
        .def_readonly("q", &AssumptionReport::q)
        .def_readonly("p", &AssumptionReport::p)
        .def_readonly("growth_constant", &AssumptionReport::growth_constant)
        .def_readonly("exponent_ok", &AssumptionReport::exponent_ok)
        .def_readonly("nu", &AssumptionReport::nu);

    mod.def("check_assumptions", &check_assumptions, py::arg("model"), py::arg("d"));
    mod.def("hamiltonian", &hamiltonian);
    mod.def("hamiltonian_conjugate", &hamiltonian_conjugate);
    mod.def("lagrangian", &lagrangian);
    mod.def("coupling_f", &coupling_f);
    mod.def("coupling_F", &coupling_F);
    mod.def("coupling_F_star", &coupling_F_star);
    mod.def("coupling_F_star_subgradient", &coupling_F_star_subgradient);

    py::class_<SolverOptions>(mod, "SolverOptions")
        .def(py::init<>())
        .def_readwrite("max_iters", &SolverOptions::max_iters)
        .def_readwrite("tol_gap", &SolverOptions::tol_gap)
        .def_readwrite("tol_feas", &SolverOptions::tol_feas)
        .def_readwrite("step_primal", &SolverOptions::step_primal)
        .def_readwrite("step_dual", &SolverOptions::step_dual)
        .def_readwrite("theta", &SolverOptions::theta)
        .def_readwrite("rng_seed", &SolverOptions::rng_seed)
        .def_readwrite("check_every", &SolverOptions::check_every)
        .def_readwrite("init_noise", &SolverOptions::init_noise);

    py::class_<GapRecord>(mod, "GapRecord")
        .def_readonly("iter", &GapRecord::iter)
        .def_readonly("A", &GapRecord::A)
        .def_readonly("B", &GapRecord::B)
        .def_readonly("gap", &GapRecord::gap)
        .def_readonly("feasibility", &GapRecord::feasibility);

    py::class_<SolutionBundle>(mod, "SolutionBundle")
        .def_readonly("phi", &SolutionBundle::phi)
        .def_readonly("alpha", &SolutionBundle::alpha)
        .def_readonly("m", &SolutionBundle::m)
        .def_readonly("w", &SolutionBundle::w)
        .def_readonly("gap_history", &SolutionBundle::gap_history)
        .def_readonly("iterations", &SolutionBundle::iterations)
        .def_readonly("converged", &SolutionBundle::converged)
        .def_readonly("final_gap_rel", &SolutionBundle::final_gap_rel)
        .def_readonly("final_feasibility", &SolutionBundle::final_feasibility)
        .def_readonly("mass_drift_raw", &SolutionBundle::mass_drift_raw)
        .def_readonly("assumptions", &SolutionBundle::assumptions);

    py::class_<ErgodicSolution>(mod, "ErgodicSolution")
        .def_readonly("lambda_", &ErgodicSolution::lambda)
        .def_readonly("phi", &ErgodicSolution::phi)
        .def_readonly("m", &ErgodicSolution::m)
        .def_readonly("w", &ErgodicSolution::w)
        .def_readonly("iterations", &ErgodicSolution::iterations)
        .def_readonly("converged", &ErgodicSolution::converged)
        .def_readonly("final_gap_rel", &ErgodicSolution::final_gap_rel)
        .def_readonly("final_feasibility", &ErgodicSolution::final_feasibility);

    mod.def("solve_time_dependent", &solve_time_dependent, py::arg("model"), py::arg("grid"),
            py::arg("options") = SolverOptions{},
            py::call_guard<py::gil_scoped_release>());
    mod.def("solve_ergodic", &solve_ergodic, py::arg("model"), py::arg("grid"),
            py::arg("options") = SolverOptions{},
            py::call_guard<py::gil_scoped_release>());

    py::class_<ResidualReport>(mod, "ResidualReport")
        .def_readonly("hj_inequality_violation", &ResidualReport::hj_inequality_violation)
        .def_readonly("identity_gap", &ResidualReport::identity_gap)
        .def_readonly("continuity_residual", &ResidualReport::continuity_residual)
        .def_readonly("terminal_violation", &ResidualReport::terminal_violation);

    py::class_<EnergyReport>(mod, "EnergyReport")
        .def_readonly("lhs", &EnergyReport::lhs)
        .def_readonly("rhs", &EnergyReport::rhs)
        .def_readonly("bregman_a", &EnergyReport::bregman_a)
        .def_readonly("bregman_b", &EnergyReport::bregman_b)
        .def_readonly("monotone", &EnergyReport::monotone)
        .def_readonly("passed", &EnergyReport::pass);

    py::class_<ErgodicOracle>(mod, "ErgodicOracle")
        .def_readonly("lambda_", &ErgodicOracle::lambda)
        .def_readonly("m", &ErgodicOracle::m);

    py::class_<LongTimeReport>(mod, "LongTimeReport")
        .def_readonly("horizons", &LongTimeReport::horizons)
        .def_readonly("mu_errors", &LongTimeReport::mu_errors)
        .def_readonly("psi_errors", &LongTimeReport::psi_errors)
        .def_readonly("mu_slope", &LongTimeReport::mu_slope)
        .def_readonly("psi_slope", &LongTimeReport::psi_slope)
        .def_readonly("lambda_bar", &LongTimeReport::lambda_bar)
        .def_readonly("all_converged", &LongTimeReport::all_converged);

    mod.def("weak_solution_residuals", &weak_solution_residuals);
    mod.def("energy_inequality_check", &energy_inequality_check, py::arg("a"), py::arg("b"),
            py::arg("model"), py::arg("grid"), py::arg("t1"), py::arg("t2"),
            py::arg("tol") = 1e-3);
    mod.def("explicit_ergodic_oracle", &explicit_ergodic_oracle);
    mod.def("long_time_experiment", &long_time_experiment, py::arg("model"),
            py::arg("unit_grid"), py::arg("horizons"), py::arg("options") = SolverOptions{},
            py::call_guard<py::gil_scoped_release>());

    mod.def("parse_config", &parse_config);
    mod.def("load_config", &load_config);
    py::class_<RunConfig>(mod, "RunConfig")
        .def_readwrite("grid", &RunConfig::grid)
        .def_readwrite("model", &RunConfig::model)
        .def_readwrite("solver", &RunConfig::solver)
        .def_readwrite("output_dir", &RunConfig::output_dir);
    mod.def("run", &run, py::arg("config"), py::arg("quiet") = true);
}
