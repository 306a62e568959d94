import math

import pytest

import mfgkit as mk


def reference_model(n):
    m = mk.ModelSpec()
    m.hamiltonian.r = 2.0
    m.hamiltonian.c = [1.0] * n
    m.hamiltonian.V = [0.0] * n
    m.coupling.family = mk.CouplingFamily.Power
    m.coupling.q = 2.0
    m.coupling.a = [1.0] * n
    m.m0 = [1.0] * n
    m.phi_T = [0.0] * n
    return m


def test_grid_basics():
    g = mk.Grid(1, 8, 4, 2.0)
    assert g.hx() == pytest.approx(0.125)
    assert g.ht() == pytest.approx(0.5)
    assert g.sites() == 8


def test_assumption_gate():
    m = reference_model(8)
    rep = mk.check_assumptions(m, 1)
    assert rep.exponent_ok
    assert rep.nu == pytest.approx(0.2)

    m.coupling.q = 3.0
    with pytest.raises(mk.AssumptionViolation):
        mk.check_assumptions(m, 2)


def test_conjugates():
    m = reference_model(4)
    assert mk.coupling_F_star(m, 0, 1.0) == pytest.approx(1.0)
    assert mk.hamiltonian(m, 0, [3.0, 0.0], 1) == pytest.approx(4.5)


def test_small_solve():
    g = mk.Grid(1, 12, 12, 1.0)
    m = reference_model(12)
    sol = mk.solve_time_dependent(m, g)
    assert sol.converged
    assert sol.final_gap_rel <= 1e-4
    assert max(abs(v - 1.0) for v in sol.m.values) <= 1e-2
    res = mk.weak_solution_residuals(sol, m, g)
    assert res.identity_gap <= 1e-3


def test_ergodic_and_oracle():
    n = 64
    g = mk.Grid(1, n, 1, 1.0)
    m = reference_model(n)
    m.hamiltonian.V = [math.cos(2 * math.pi * j / n) for j in range(n)]
    oracle = mk.explicit_ergodic_oracle(m, g)
    assert oracle.lambda_ == pytest.approx(1.0, abs=1e-9)
    opts = mk.SolverOptions()
    opts.max_iters = 100000
    opts.tol_gap = 1e-7
    opts.tol_feas = 1e-6
    sol = mk.solve_ergodic(m, g, opts)
    assert sol.converged
    assert abs(sol.lambda_ - oracle.lambda_) <= 2e-3


def test_config_roundtrip(tmp_path):
    cfg = mk.parse_config(
        """
        {"schema_version": 1, "mode": "solve",
         "grid": {"d": 1, "n_x": 8, "n_t": 8, "T": 1.0},
         "solver": {"max_iters": 5000},
         "output": {"directory": "%s"}}
        """
        % (tmp_path / "out")
    )
    assert mk.run(cfg) == 0
    assert (tmp_path / "out" / "manifest.json").exists()

    with pytest.raises(mk.SchemaError):
        mk.parse_config('{"schema_version": 1, "bogus": true}')
