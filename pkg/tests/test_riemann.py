"""Wave speeds, HLL state, intermediate states and the interface flux.

Covers the structural properties the solver is built around: the weak
consistency relations between the intermediate states and the HLL state,
positivity of the intermediate heights (including when the cut-off
triggers), and exact reproduction of local steady pairs.
"""

import numpy as np
import pytest

import oracles as orc
from rsw1d.core import ExtendedState, State, physical_flux
from rsw1d.riemann import (hll_state, interface_flux, intermediate_states,
                           wave_speeds)
from rsw1d.wellbalance import (InterfaceData, source_hu, source_hv,
                               steady_indicator)
from test_wellbalance import iface_of, random_pair, steady_pairs


def test_wave_speeds_match_scalar_reference():
    rng = np.random.default_rng(2)
    for _ in range(500):
        wl, wr, *_ , g, _ = random_pair(rng)
        lam_l, lam_r = wave_speeds(State(*wl), State(*wr), g)
        lo, ro = orc.speeds(wl, wr, g)
        assert lam_l == lo and lam_r == ro


def test_wave_speeds_floor_keeps_fan_open():
    # Even on a quiescent state the fan stays lambda_L < 0 < lambda_R;
    # the floor binds when |u| +- sqrt(g h) would not separate the waves.
    rng = np.random.default_rng(4)
    for _ in range(500):
        wl, wr, *_ , g, _ = random_pair(rng)
        lam_l, lam_r = wave_speeds(State(*wl), State(*wr), g,
                                   speed_floor=1e-8)
        assert lam_l <= -1e-8 < 0 < 1e-8 <= lam_r
    w = State(1e-20, 0.0, 0.0)
    lam_l, lam_r = wave_speeds(w, w, 9.81, speed_floor=1e-8)
    assert lam_l == -1e-8 and lam_r == 1e-8


def test_hll_state_matches_scalar_reference():
    rng = np.random.default_rng(6)
    for _ in range(500):
        wl, wr, *_ , g, _ = random_pair(rng)
        waves = wave_speeds(State(*wl), State(*wr), g)
        hll = hll_state(State(*wl), State(*wr), waves, g)
        ref = orc.hll(wl, wr, g, waves.lambda_L, waves.lambda_R)
        for a, b in zip(hll, ref):
            assert a == pytest.approx(b, rel=1e-13, abs=1e-13)
        assert hll.h > 0.0


def test_intermediate_states_match_scalar_reference():
    rng = np.random.default_rng(8)
    for _ in range(500):
        wl, wr, zl, zr, d, g, f = random_pair(rng)
        iface = iface_of(wl, wr, zl, zr, d)
        waves = wave_speeds(State(*wl), State(*wr), g)
        stars = intermediate_states(iface, waves, g, f)
        sl, sr = orc.stars(wl, wr, zl, zr, d, g, f)
        for a, b in zip(stars.star_L, sl):
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
        for a, b in zip(stars.star_R, sr):
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
        assert stars.star_L.hu == stars.star_R.hu == stars.q_star


def _consistency_residuals(wl, wr, zl, zr, d, g, f):
    """Relative residuals of the three weak consistency relations.

    1. lam_R h*_R - lam_L h*_L = (lam_R - lam_L) h^HLL - [hu] + [hu]
       (i.e. the h components average back to the HLL height),
    2. (lam_R - lam_L) q* = (lam_R - lam_L) hu^HLL + S^hu,
    3. lam_R (h v)*_R - lam_L (h v)*_L = (lam_R - lam_L) hv^HLL + S^hv.
    """
    iface = iface_of(wl, wr, zl, zr, d)
    waves = wave_speeds(State(*wl), State(*wr), g)
    lam_l, lam_r = float(waves.lambda_L), float(waves.lambda_R)
    hll = hll_state(State(*wl), State(*wr), waves, g)
    stars = intermediate_states(iface, waves, g, f)
    s_hu = float(source_hu(iface, g, f))
    s_hv = float(source_hv(iface, f))
    dlam = lam_r - lam_l
    r1 = lam_r * stars.star_R.h - lam_l * stars.star_L.h - dlam * hll.h
    r2 = dlam * stars.q_star - dlam * hll.hu - s_hu
    r3 = lam_r * stars.star_R.hv - lam_l * stars.star_L.hv \
        - dlam * hll.hv - s_hv
    scale = dlam * max(1.0, abs(hll.h), abs(hll.hu), abs(hll.hv),
                       abs(s_hu), abs(s_hv))
    cut_off = min(stars.star_L.h, stars.star_R.h) <= \
        min(1e-10, wl.h, wr.h, hll.h) * (1 + 1e-12)
    return np.array([r1, r2, r3]) / scale, cut_off


def test_weak_consistency_relations():
    rng = np.random.default_rng(10)
    checked = 0
    while checked < 1000:
        wl, wr, zl, zr, d, g, f = random_pair(rng)
        res, cut = _consistency_residuals(wl, wr, zl, zr, d, g, f)
        if cut:
            continue
        assert np.max(np.abs(res)) < 1e-13
        checked += 1


def test_height_consistency_survives_cutoff():
    # Dry-adjacent pairs force the height floor; the first relation is
    # preserved by the partner correction even then.
    rng = np.random.default_rng(12)
    hit = 0
    for _ in range(5000):
        h = 10.0 ** rng.uniform(-8, 1, 2)
        u = rng.uniform(-10, 10, 2)
        v = rng.uniform(-10, 10, 2)
        z = rng.uniform(-1, 1, 2)
        wl = orc.W(h[0], h[0] * u[0], h[0] * v[0])
        wr = orc.W(h[1], h[1] * u[1], h[1] * v[1])
        res, cut = _consistency_residuals(wl, wr, z[0], z[1], 0.05, 9.81, 5.0)
        assert abs(res[0]) < 1e-13
        hit += cut
    assert hit > 0  # the sweep actually exercised the cut-off


def test_intermediate_heights_positive():
    rng = np.random.default_rng(14)
    for _ in range(1000):
        h = 10.0 ** rng.uniform(-8, 1, 2)
        u = rng.uniform(-10, 10, 2)
        v = rng.uniform(-10, 10, 2)
        z = rng.uniform(-1, 1, 2)
        wl = orc.W(h[0], h[0] * u[0], h[0] * v[0])
        wr = orc.W(h[1], h[1] * u[1], h[1] * v[1])
        iface = iface_of(wl, wr, z[0], z[1], 0.1)
        waves = wave_speeds(State(*wl), State(*wr), 9.81)
        hll = hll_state(State(*wl), State(*wr), waves, 9.81)
        stars = intermediate_states(iface, waves, 9.81, 3.0)
        delta = min(1e-10, h[0], h[1], float(hll.h))
        assert delta > 0.0
        assert stars.star_L.h >= delta * (1 - 1e-12)
        assert stars.star_R.h >= delta * (1 - 1e-12)
        assert stars.star_L.h > 0.0 and stars.star_R.h > 0.0


def test_steady_pairs_reproduced_exactly():
    # On a local steady pair the solver returns the input states: this is
    # what makes the full scheme exactly well-balanced.
    for wl, wr, zl, zr, d, g, f in steady_pairs(200, seed=16):
        iface = iface_of(wl, wr, zl, zr, d)
        waves = wave_speeds(State(*wl), State(*wr), g)
        stars = intermediate_states(iface, waves, g, f, eq_tol=1e-8)
        scale = max(1.0, wl.h, wr.h, abs(wl.hu), abs(wl.hv), abs(wr.hv))
        for a, b in zip(stars.star_L, wl):
            assert abs(a - b) / scale < 1e-11
        for a, b in zip(stars.star_R, wr):
            assert abs(a - b) / scale < 1e-11


def test_flux_on_steady_pairs_is_physical():
    # Consequence of the previous property: the numerical flux on a
    # steady pair is the average of the physical fluxes plus the jump
    # terms, which collapse; combined with the source the cell update
    # vanishes.  Here: F = (f(w_L) + f(w_R))/2 when stars equal inputs.
    for wl, wr, zl, zr, d, g, f in steady_pairs(60, seed=18):
        iface = iface_of(wl, wr, zl, zr, d)
        waves = wave_speeds(State(*wl), State(*wr), g)
        stars = intermediate_states(iface, waves, g, f, eq_tol=1e-8)
        flux = interface_flux(iface, waves, stars, g)
        fl = physical_flux(State(*wl), g)
        fr = physical_flux(State(*wr), g)
        for a, b, c in zip(flux, fl, fr):
            assert a == pytest.approx(0.5 * (b + c), rel=1e-9, abs=1e-9)


def test_flux_consistency_identical_states_no_rotation():
    # With f = 0, flat z and w_L = w_R the pair is steady, the stars
    # collapse to the state itself and the flux is exactly physical.
    rng = np.random.default_rng(20)
    for _ in range(200):
        h = rng.uniform(0.05, 5.0)
        u = rng.uniform(-3, 3)
        v = rng.uniform(-3, 3)
        g = rng.uniform(0.5, 15.0)
        w = orc.W(h, h * u, h * v)
        iface = iface_of(w, w, 0.3, 0.3, 0.1)
        assert steady_indicator(iface, g, 0.0) == 0.0
        waves = wave_speeds(State(*w), State(*w), g)
        stars = intermediate_states(iface, waves, g, 0.0)
        flux = interface_flux(iface, waves, stars, g)
        for a, b in zip(flux, physical_flux(State(*w), g)):
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_flux_matches_scalar_reference():
    rng = np.random.default_rng(22)
    for _ in range(500):
        wl, wr, zl, zr, d, g, f = random_pair(rng)
        iface = iface_of(wl, wr, zl, zr, d)
        waves = wave_speeds(State(*wl), State(*wr), g)
        stars = intermediate_states(iface, waves, g, f)
        flux = interface_flux(iface, waves, stars, g)
        ref = orc.numerical_flux(wl, wr, zl, zr, d, g, f)
        for a, b in zip(flux, ref):
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
