"""Four-state approximate Riemann solver and its interface flux.

The solver fan is w_L | w*_L | w*_R | w_R with speeds
lambda_L < 0 < lambda_R and a stationary contact in between.  The
intermediate states are pinned by three weak-consistency relations (the
HLL averages plus the numerical source) and three well-balancing
relations, with a cut-off keeping the intermediate heights positive.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import Array, State, physical_flux
from .wellbalance import (InterfaceData, source_hu, source_hv,
                          steady_indicator)


class WavePair(NamedTuple):
    lambda_L: Array
    lambda_R: Array


class IntermediateStates(NamedTuple):
    star_L: State
    star_R: State
    q_star: Array


def wave_speeds(wL: State, wR: State, g: float,
                speed_floor: float = 1e-8) -> WavePair:
    """Two-rarefaction style bounds with a floor keeping lam_L < 0 < lam_R."""
    cL = np.sqrt(g * wL.h)
    cR = np.sqrt(g * wR.h)
    lam_L = np.minimum(np.minimum(wL.u - cL, wR.u - cR), -speed_floor)
    lam_R = np.maximum(np.maximum(wL.u + cL, wR.u + cR), speed_floor)
    return WavePair(lam_L, lam_R)


def hll_state(wL: State, wR: State, waves: WavePair, g: float) -> State:
    """Mean state of the two-wave HLL solver; h component stays positive."""
    lam_L, lam_R = waves
    dlam = lam_R - lam_L
    fL = physical_flux(wL, g)
    fR = physical_flux(wR, g)
    return State(
        (lam_R * wR.h - lam_L * wL.h - (fR[0] - fL[0])) / dlam,
        (lam_R * wR.hu - lam_L * wL.hu - (fR[1] - fL[1])) / dlam,
        (lam_R * wR.hv - lam_L * wL.hv - (fR[2] - fL[2])) / dlam,
    )


def intermediate_states(iface: InterfaceData, waves: WavePair, g: float,
                        f: float, eps_cutoff: float = 1e-10,
                        eq_tol: float = 1e-12,
                        indicator: Array | None = None,
                        s_hu: Array | None = None,
                        s_hv: Array | None = None) -> IntermediateStates:
    """Intermediate states w*_L, w*_R of the four-state solver.

    The optional ``indicator``/``s_hu``/``s_hv`` arguments accept
    precomputed values of the steady indicator and the numerical sources
    for this interface (they are recomputed otherwise).
    """
    (wL, _), (wR, _), _ = iface
    e = steady_indicator(iface, g, f) if indicator is None else indicator
    if s_hu is None:
        s_hu = source_hu(iface, g, f, eq_tol, indicator=e)
    if s_hv is None:
        s_hv = source_hv(iface, f)
    lam_L, lam_R = waves
    dlam = lam_R - lam_L
    hll = hll_state(wL, wR, waves, g)

    q_star = hll.hu + s_hu / dlam

    steady = e <= eq_tol
    alpha = g * 0.5 * (wL.h + wR.h) - np.abs(wL.u * wR.u)
    denom_h = np.where(steady, 1.0, alpha * alpha + e)
    delta_h = np.where(steady, wR.h - wL.h, alpha * s_hu / denom_h)

    # Cut-off: heights are floored at delta; the min-caps are the partner
    # corrections that keep the first consistency relation exact.
    delta = np.minimum(np.minimum(eps_cutoff, hll.h),
                       np.minimum(wL.h, wR.h))
    h_star_L = np.minimum(
        np.maximum(hll.h - lam_R / dlam * delta_h, delta),
        (1.0 - lam_R / lam_L) * hll.h + lam_R / lam_L * delta)
    h_star_R = np.minimum(
        np.maximum(hll.h - lam_L / dlam * delta_h, delta),
        (1.0 - lam_L / lam_R) * hll.h + lam_L / lam_R * delta)

    q_tilde = 0.5 * (wL.hu + wR.hu)
    denom_v = np.where(steady, 1.0, q_tilde * q_tilde + e)
    delta_v = np.where(steady, wR.v - wL.v, q_tilde * s_hv / denom_v)
    v_mean = hll.hv / hll.h
    v_star_L = v_mean + (s_hv - lam_R * h_star_R * delta_v) / (dlam * hll.h)
    v_star_R = v_mean + (s_hv - lam_L * h_star_L * delta_v) / (dlam * hll.h)

    return IntermediateStates(
        State(h_star_L, q_star, h_star_L * v_star_L),
        State(h_star_R, q_star, h_star_R * v_star_R),
        q_star,
    )


def interface_flux(iface: InterfaceData, waves: WavePair,
                   stars: IntermediateStates,
                   g: float) -> tuple[Array, Array, Array]:
    """Numerical flux of the Godunov-type scheme at one interface."""
    (wL, _), (wR, _), _ = iface
    lam_L, lam_R = waves
    sL, sR = stars.star_L, stars.star_R
    fL = physical_flux(wL, g)
    fR = physical_flux(wR, g)
    return (
        0.5 * (fL[0] + fR[0])
        + 0.5 * lam_R * (sR.h - wR.h) + 0.5 * lam_L * (sL.h - wL.h),
        0.5 * (fL[1] + fR[1])
        + 0.5 * lam_R * (sR.hu - wR.hu) + 0.5 * lam_L * (sL.hu - wL.hu),
        0.5 * (fL[2] + fR[2])
        + 0.5 * lam_R * (sR.hv - wR.hv) + 0.5 * lam_L * (sL.hv - wL.hv),
    )
