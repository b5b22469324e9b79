"""Discrete steady states and the consistent numerical source terms.

A pair of neighbouring states is a local steady state when the three
relations

    [hu] = 0,
    [u^2/2 + g (h + z)] = d f vbar,
    q [v] = -d f q,

hold, with [X] = X_R - X_L, Xbar = (X_L + X_R)/2 and d the interface
length parameter (the mesh spacing in the plain first-order scheme).  The
indicator returned by :func:`steady_indicator` is the Euclidean norm of
the three residuals; the source terms below are built so that they reduce
to the physical flux difference exactly on such pairs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import Array, ExtendedState, State, physical_flux

# Width of the window around Fr = 1 in which the critical limit branch of
# the hu source is taken (only relevant together with a vanishing
# indicator; see source_hu).
_FROUDE_TOL = 1e-14


class InterfaceData(NamedTuple):
    """Left/right extended states at one interface plus the length d."""

    left: ExtendedState
    right: ExtendedState
    d: Array


class SourceTerm(NamedTuple):
    s_h: Array
    s_hu: Array
    s_hv: Array


def steady_indicator(iface: InterfaceData, g: float, f: float) -> Array:
    """Local steady-state indicator; zero exactly on steady pairs."""
    (wL, zL), (wR, zR), d = iface
    uL, uR = wL.hu / wL.h, wR.hu / wR.h
    vL, vR = wL.hv / wL.h, wR.hv / wR.h
    r1 = wR.hu - wL.hu
    r2 = (0.5 * uR * uR + g * (wR.h + zR)) \
        - (0.5 * uL * uL + g * (wL.h + zL)) - d * f * 0.5 * (vL + vR)
    r3 = 0.5 * (wL.hu + wR.hu) * ((vR - vL) + f * d)
    return np.sqrt(r1 * r1 + r2 * r2 + r3 * r3)


def is_local_steady(iface: InterfaceData, g: float, f: float,
                    eq_tol: float) -> bool | np.ndarray:
    return steady_indicator(iface, g, f) <= eq_tol


def discrete_froude(wL: State, wR: State, g: float) -> Array:
    """Fr = hbar |u_L u_R| / (g h_L h_R); Fr = 1 is the critical case."""
    hbar = 0.5 * (wL.h + wR.h)
    return hbar * np.abs(wL.u * wR.u) / (g * wL.h * wR.h)


def source_hu(iface: InterfaceData, g: float, f: float,
              eq_tol: float = 1e-12, indicator: Array | None = None) -> Array:
    """Numerical source for the hu equation.

    The generic branch regularises the critical singularity by adding the
    steady indicator to the squared (1 - Fr) denominator; the limit branch
    g [h]^3 / (4 hbar) is taken only when the pair is both critical and
    steady, where the generic expression is 0/0.

    Passing a precomputed ``indicator`` avoids recomputing it in the hot
    path; the value must be steady_indicator(iface, g, f).
    """
    (wL, zL), (wR, zR), d = iface
    e = steady_indicator(iface, g, f) if indicator is None else indicator
    # Below eq_tol the indicator is treated as exactly zero; keeping the
    # raw roundoff-level value in the regularised denominator makes the
    # source hypersensitive to it near critical (Fr = 1) interfaces.
    e = np.where(e <= eq_tol, 0.0, e)
    fr = discrete_froude(wL, wR, g)
    hbar = 0.5 * (wL.h + wR.h)
    vbar = 0.5 * (wL.v + wR.v)
    dh = wR.h - wL.h
    dz = zR - zL
    limit = (np.abs(fr - 1.0) <= _FROUDE_TOL) & (e == 0.0)
    denom = (1.0 - fr) ** 2 + e
    denom = np.where(limit, 1.0, denom)
    generic = d * f * hbar * vbar - g * hbar * dz \
        + (g * fr * dh) / (4.0 * hbar) * (d * f * vbar / g - dz) ** 2 / denom
    return np.where(limit, g * dh ** 3 / (4.0 * hbar), generic)


def source_hv(iface: InterfaceData, f: float) -> Array:
    """Numerical source for the hv equation: -d f qtilde, qtilde = mean(hu)."""
    (wL, _), (wR, _), d = iface
    return -d * f * 0.5 * (wL.hu + wR.hu)


def source_term(iface: InterfaceData, g: float, f: float,
                eq_tol: float = 1e-12,
                indicator: Array | None = None) -> SourceTerm:
    """Full numerical source (0, S^hu, S^hv)."""
    return SourceTerm(np.zeros_like(np.asarray(iface.left.state.h, float)),
                      source_hu(iface, g, f, eq_tol, indicator),
                      source_hv(iface, f))


def flux_difference(wL: State, wR: State, g: float) -> SourceTerm:
    """f(w_R) - f(w_L); equals the source term on local steady pairs."""
    fL = physical_flux(wL, g)
    fR = physical_flux(wR, g)
    return SourceTerm(fR[0] - fL[0], fR[1] - fL[1], fR[2] - fL[2])
