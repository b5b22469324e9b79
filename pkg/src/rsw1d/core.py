"""States, mesh and parameters for the 1D rotating shallow-water system.

The conserved variables are (h, hu, hv): fluid height, along-channel
discharge and transverse discharge.  All container types are immutable and
every field may hold either a scalar or a numpy array; the physics
functions broadcast, so a single code path serves both pointwise unit
tests and whole-mesh sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

Array = np.ndarray | float


class State(NamedTuple):
    """Conserved triple on one cell (or a vector of cells)."""

    h: Array
    hu: Array
    hv: Array

    @property
    def u(self) -> Array:
        return self.hu / self.h

    @property
    def v(self) -> Array:
        return self.hv / self.h


class ExtendedState(NamedTuple):
    """A state together with the local topography elevation."""

    state: State
    z: Array


def is_admissible(w: State) -> bool:
    """True when every fluid height is strictly positive."""
    return bool(np.all(np.asarray(w.h) > 0.0))


def physical_flux(w: State, g: float) -> tuple[Array, Array, Array]:
    """Flux of the homogeneous system: (hu, hu^2/h + g h^2/2, hu hv/h)."""
    u = w.hu / w.h
    return (w.hu, w.hu * u + 0.5 * g * w.h * w.h, u * w.hv)


def primitive(w: State) -> tuple[Array, Array, Array]:
    """Return (h, u, v).  Rejects non-positive heights."""
    if not is_admissible(w):
        raise ValueError("state has non-positive fluid height")
    return (w.h, w.hu / w.h, w.hv / w.h)


@dataclass(frozen=True)
class Mesh:
    """Uniform 1D grid with cell-centred topography samples."""

    x_min: float
    x_max: float
    n_cells: int
    dx: float
    centers: np.ndarray
    z: np.ndarray


def build_mesh(x_min: float, x_max: float, n_cells: int,
               topography: Callable[[np.ndarray], Array]) -> Mesh:
    """Build a uniform mesh; z_i = z(x_i) (midpoint rule, second order)."""
    if not x_min < x_max:
        raise ValueError(f"invalid domain bounds [{x_min}, {x_max}]")
    if n_cells < 1:
        raise ValueError("n_cells must be at least 1")
    dx = (x_max - x_min) / n_cells
    centers = x_min + (np.arange(n_cells) + 0.5) * dx
    z = np.broadcast_to(np.asarray(topography(centers), dtype=float),
                        centers.shape).copy()
    return Mesh(x_min, x_max, n_cells, dx, centers, z)


@dataclass(frozen=True)
class SolverParams:
    """Physical and numerical constants.

    eps_cutoff is the height floor used by the intermediate-state cut-off,
    eq_tol the level below which the steady indicator is treated as zero,
    and speed_floor keeps the wave fan lambda_L < 0 < lambda_R
    non-degenerate.
    """

    g: float = 9.81
    f: float = 0.0
    cfl: float = 0.5
    eps_cutoff: float = 1e-10
    eq_tol: float = 1e-12
    speed_floor: float = 1e-8

    def __post_init__(self):
        if self.g <= 0 or self.cfl <= 0 or self.eps_cutoff <= 0 \
                or self.speed_floor <= 0:
            raise ValueError("g, cfl, eps_cutoff and speed_floor must be > 0")
        if self.eq_tol < 0:
            raise ValueError("eq_tol must be >= 0")
