"""Smoke tests for the qtflow python extension."""

import math

import numpy as np
import pytest

import qtflow as qf


@pytest.fixture
def grid():
    return qf.Grid(2, 32)


def test_grid_properties(grid):
    assert grid.dim == 2
    assert grid.n_axis == 32
    assert grid.num_points == 32 * 32
    assert grid.volume == pytest.approx((2 * math.pi) ** 2)


def test_field_numpy_round_trip(grid):
    rng = np.random.default_rng(3)
    values = rng.normal(size=(1, 32, 32))
    f = qf.Field.from_numpy(grid, [], values)
    back = f.to_numpy().reshape(1, 32, 32)
    # full-band data: round trip is exact to near machine precision
    assert np.max(np.abs(back - values)) < 1e-12


def test_spectral_operators(grid):
    f = qf.random_scalar(grid, 11, 1.0)
    lap = qf.laplacian(f)
    div_grad = qf.divergence(qf.gradient(f))
    assert (div_grad - lap).norm_l2() < 1e-13
    u = qf.random_velocity(grid, 5, 1.0)
    assert qf.divergence_defect(u) < 1e-13


def test_bulk_force_matches_frozen_oracle(grid):
    # a=b=c=1, Q = diag(1,-1): F = -3 diag(1,-1)
    p = qf.ModelParams()
    p.a = p.b = p.c = 1.0
    vals = np.zeros((4, 32, 32))
    vals[0] = 1.0
    vals[3] = -1.0
    Q = qf.Field.from_numpy(grid, [2, 2], vals)
    F = qf.bulk_force(Q, p).to_numpy().reshape(4, 32, 32)
    assert F[0] == pytest.approx(-3.0, rel=1e-12)
    assert F[3] == pytest.approx(3.0, rel=1e-12)
    assert np.max(np.abs(F[1])) < 1e-13


def test_osgood_mu_frozen_value():
    assert qf.osgood_mu(1.0) == pytest.approx(3.232818396892600, rel=1e-13)
    assert qf.osgood_mu(0.0) == 0.0
    env = qf.osgood_integrate(0.0, [1.0] * 10, 0.1)
    assert all(v == 0.0 for v in env)


def test_short_run_decays_energy(grid):
    p = qf.ModelParams()
    p.a, p.b, p.c, p.xi = -0.2, 1.0, 1.0, 0.3
    s = qf.SimState()
    s.Q = qf.random_qtensor(grid, 2, 21, 0.3)
    s.u = qf.random_velocity(grid, 22, 0.3)
    cfg = qf.StepperConfig()
    cfg.dt = 1e-3
    cfg.t_final = 0.02
    out = qf.run(s, p, cfg)
    rows = out["rows"]
    assert len(rows) == 21
    assert rows[-1]["E"] < rows[0]["E"]
    assert rows[0]["E"] == pytest.approx(qf.total_energy(s.Q, s.u, p), rel=1e-12)


def test_twin_run_identical_is_exact(grid):
    p = qf.ModelParams()
    p.a, p.b, p.c, p.xi = -0.2, 1.0, 1.0, 0.3
    s = qf.SimState()
    s.Q = qf.random_qtensor(grid, 2, 31, 0.3)
    s.u = qf.random_velocity(grid, 32, 0.3)
    cfg = qf.StepperConfig()
    cfg.dt = 1e-3
    cfg.t_final = 0.01
    out = qf.twin_run(s, s, p, cfg)
    assert out["envelope_ok"]
    assert all(r["Phi"] <= 1e-24 for r in out["rows"])


def test_audit_lyapunov_via_python(grid):
    p = qf.ModelParams()
    p.a, p.b, p.c, p.xi = -0.2, 1.0, 1.0, 0.3
    Q = qf.random_qtensor(grid, 2, 41, 0.7, 2.0, 6)
    u = qf.random_velocity(grid, 42, 0.7, 2.0, 6)
    entries = qf.audit_lyapunov(Q, u, p)
    assert entries and all(e["pass"] for e in entries)


def test_dyadic_decomposition_partition(grid):
    dd = qf.DyadicDecomposition(grid)
    assert dd.partition_defect() <= 1e-12
    f = qf.random_scalar(grid, 51, 1.0)
    s_half = qf.sobolev_norm(f, 0.5)
    assert s_half > 0
    assert qf.sobolev_norm(qf.gradient(f), -0.5) == pytest.approx(s_half, rel=1e-12)
