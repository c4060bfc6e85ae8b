import math

import numpy as np
import pytest

import sqgfront as sqg


@pytest.fixture(scope="module")
def grid():
    return sqg.make_grid(16.0 * math.pi, 256)


def test_grid_and_field_roundtrip(grid):
    x = grid.points()
    # sigma = 2 keeps the spectrum far below the unpaired Nyquist mode, where
    # grid translations are exact.
    f = sqg.field(grid, 0.3 * np.exp(-((x / 2.0) ** 2)))
    assert f.l2_norm() == pytest.approx(
        math.sqrt(np.sum(0.09 * np.exp(-2 * (x / 2.0) ** 2)) * grid.dx)
    )
    shifted = sqg.spectral_shift(f, 0.5)
    back = sqg.spectral_shift(shifted, -0.5)
    assert np.max(np.abs(back.values() - f.values())) < 1e-12


def test_norms_closed_forms():
    g = sqg.make_grid(math.pi, 64)
    x = g.points()
    f = sqg.field(g, np.cos(x))
    assert sqg.sobolev_norm(f, 0.0) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert sqg.y_norm(f, 0.1) == pytest.approx(2.0, rel=1e-12)


def test_apply_A_gauge_invariance(grid):
    x = grid.points()
    phi = sqg.field(grid, 0.4 * np.exp(-(x ** 2)))
    v = sqg.field(grid, 0.2 * np.exp(-((x - 1.0) ** 2)))
    quad = sqg.make_quadrature(8.0 * math.pi, 256, 2.0)
    a1 = sqg.apply_A(phi, v, quad).values()
    phi_c = sqg.field(grid, phi.values() + 3.0)
    a2 = sqg.apply_A(phi_c, v, quad).values()
    assert np.max(np.abs(a1 - a2)) < 1e-12


def test_pv_and_q_constants():
    assert sqg.pv_unit_constant() == pytest.approx(-1.1544313298, abs=1e-6)
    q1 = sqg.q_constant(1.0)
    assert q1.imag == pytest.approx(0.0, abs=1e-8)
    assert q1.real == pytest.approx(-(4.0 / 3.0) * math.log(2.0), abs=1e-4)


def test_dispersion_identities():
    p = sqg.dispersion_point(-2.0)
    assert p["xi_v"] == pytest.approx(-1.0, rel=1e-13)
    assert p["phase"] == pytest.approx(2.0, rel=1e-13)


def test_short_evolution_conserves_mass():
    g = sqg.make_grid(32.0 * math.pi, 256)
    x = g.points()
    phi0 = sqg.field(g, 0.05 * np.exp(-(x ** 2)))
    cfg = sqg.SolverConfig()
    cfg.dt = 0.02
    cfg.t_final = 0.2
    traj = sqg.evolve(phi0, cfg)
    assert not traj.blew_up
    mon = traj.monitors()
    drift = np.max(np.abs(mon["mass"] - mon["mass"][0])) / mon["mass"][0]
    assert drift < 1e-7


def test_paradiff_probe():
    g = sqg.make_grid(math.pi, 64)
    x = g.points()
    a = sqg.field(g, 0.3 * np.exp(-(x ** 2)))
    cut = sqg.make_cutoff(8.0)
    norm = sqg.operator_norm(a, cut)
    assert 0.0 < norm <= np.max(np.abs(a.values())) * 1.05
