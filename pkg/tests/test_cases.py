"""Built-in experiments and the error / convergence helpers."""

import numpy as np
import pytest

from rsw1d import cases as cm
from rsw1d.cases import (BUILTIN_CASES, case_bump, case_geostrophic,
                         case_moving_steady, case_uniform_oscillation,
                         convergence_rates, l1_space_error, l1_time_error,
                         make_snapshot, run_case)
from rsw1d.core import State
from rsw1d.scheme import steady_distance


def test_builtin_registry():
    assert set(BUILTIN_CASES) == {"moving_steady", "geostrophic", "bump",
                                  "uniform_oscillation"}
    for name, factory in BUILTIN_CASES.items():
        c = factory()
        assert c.name == name
        snap = make_snapshot(c, 16)
        assert snap.states.h.shape == (16,)
        assert np.all(snap.states.h > 0)


def test_moving_steady_is_discrete_steady():
    # The initial sampling must be a local steady pair at every interface
    # to machine precision -- this is what the case is for.
    c = case_moving_steady()
    snap = make_snapshot(c)
    assert steady_distance(snap, c.params) < 1e-11
    h, u, v = c.initial(np.array([0.25]))
    assert h[0] == pytest.approx(np.exp(0.5))
    assert u[0] == pytest.approx(np.exp(-0.5))
    assert v[0] == pytest.approx(-0.25)


def test_geostrophic_initial_profile():
    c = case_geostrophic()
    assert (c.x_min, c.x_max) == (-5.0, 5.0)
    assert c.params.g == 1.0 and c.params.f == 10.0
    x = np.array([0.0, 1.0])
    h, u, v = c.initial(x)
    np.testing.assert_allclose(h, 2.0 - np.exp(-x ** 2))
    np.testing.assert_array_equal(u, 0.0)
    np.testing.assert_allclose(v, 0.2 * x * np.exp(-x ** 2))
    np.testing.assert_array_equal(c.topography(x), 0.0)
    # geostrophic balance g (h + z)' = f v holds for the continuous profile
    xs = np.linspace(-4, 4, 2001)
    hh, _, vv = c.initial(xs)
    dhdx = np.gradient(hh + c.topography(xs), xs)
    np.testing.assert_allclose(c.params.g * dhdx, c.params.f * vv, atol=1e-4)


def test_bump_case_setup():
    c = case_bump()
    assert c.bc.kind == "bump_inflow_outflow"
    assert c.bc.q_in == 0.18 and c.bc.h_out == 0.33
    z = c.topography(np.array([0.0, 10.0, 11.0, 20.0]))
    np.testing.assert_allclose(z, [0.0, 0.2, 0.15, 0.0])
    h, u, v = c.initial(np.array([5.0]))
    assert h[0] == 0.33 and u[0] == pytest.approx(0.18 / 0.33) and v[0] == 0


def test_uniform_oscillation_exact_solution():
    # The reference solution solves u' = f v, v' = -f u with h constant.
    c = case_uniform_oscillation()
    f = c.params.f
    t = np.linspace(0.0, 1.0, 101)
    x = np.array([0.3])
    eps = 1e-6
    for tk in (0.0, 0.37, 0.84):
        h, u, v = c.exact(x, tk)
        hp, up, vp = c.exact(x, tk + eps)
        assert h[0] == 1.0
        assert (up[0] - u[0]) / eps == pytest.approx(f * v[0], abs=1e-5)
        assert (vp[0] - v[0]) / eps == pytest.approx(-f * u[0], abs=1e-5)
    h0, u0, v0 = c.exact(x, 0.0)
    hi, ui, vi = c.initial(x)
    assert (h0[0], u0[0], v0[0]) == (hi[0], ui[0], vi[0])


def test_run_case_overrides():
    c = case_uniform_oscillation()
    rep = run_case(c, order=1, n_cells=8, t_max=0.05)
    assert rep.final.time == pytest.approx(0.05)
    assert rep.final.states.h.shape == (8,)


def test_l1_space_error():
    c = case_uniform_oscillation()
    snap = make_snapshot(c, 10)
    err = l1_space_error(snap, c.initial)
    assert err == {"h": 0.0, "hu": 0.0, "hv": 0.0}
    shifted = State(snap.states.h + 0.25, snap.states.hu, snap.states.hv)
    snap2 = cm.FieldSnapshot(snap.mesh, shifted, 0.0)
    err2 = l1_space_error(snap2, c.initial)
    assert err2["h"] == pytest.approx(0.25 * (c.x_max - c.x_min))
    with pytest.raises(ValueError):
        l1_space_error(snap, lambda x: (np.ones(3), np.zeros(3),
                                        np.zeros(3)))


def test_l1_time_error():
    # Probe history equal to the exact solution gives zero error; a
    # constant offset in hu integrates to offset * elapsed time.
    times = np.linspace(0.0, 1.0, 11)

    def exact(x, t):
        return 1.0, 0.5 * t, 0.0

    h = np.ones_like(times)
    hu = 0.5 * times
    hv = np.zeros_like(times)
    err = l1_time_error(times, State(h, hu, hv), exact, x=0.0)
    assert err["h"] == 0.0 and err["hu"] == 0.0 and err["hv"] == 0.0
    err2 = l1_time_error(times, State(h, hu + 0.2, hv), exact, x=0.0)
    assert err2["hu"] == pytest.approx(0.2 * 1.0)
    with pytest.raises(ValueError):
        l1_time_error(np.array([0.0]), State(h[:1], hu[:1], hv[:1]),
                      exact, 0.0)


def test_convergence_rates():
    errs = [1.0, 0.25, 0.0625]
    np.testing.assert_allclose(convergence_rates(errs), [2.0, 2.0])
    assert convergence_rates([8.0, 4.0]) == [pytest.approx(1.0)]
    with pytest.raises(ValueError):
        convergence_rates([1.0])
    with pytest.raises(ValueError):
        convergence_rates([1.0, 0.0])


def test_make_snapshot_rejects_dry_initial():
    c = case_uniform_oscillation()
    bad = cm.replace(c, initial=lambda x: (np.zeros_like(x),
                                           np.zeros_like(x),
                                           np.zeros_like(x)))
    with pytest.raises(ValueError):
        make_snapshot(bad, 8)
