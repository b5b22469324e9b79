"""Fully well-balanced finite-volume solver for the 1D rotating
shallow-water equations, at first and second order."""

from .core import (ExtendedState, Mesh, SolverParams, State, build_mesh,
                   physical_flux, primitive)
from .wellbalance import (InterfaceData, SourceTerm, discrete_froude,
                          is_local_steady, source_hu, source_hv,
                          steady_indicator)
from .riemann import (IntermediateStates, WavePair, hll_state,
                      interface_flux, intermediate_states, wave_speeds)
from .scheme import (BoundaryCondition, FieldSnapshot, RunReport, cfl_dt,
                     detector_theta, first_order_step, ghost_states, minmod,
                     reconstruct, rk2_step, run, second_order_space_step,
                     steady_distance)
from .cases import (BUILTIN_CASES, TestCase, case_bump, case_geostrophic,
                    case_moving_steady, case_uniform_oscillation,
                    convergence_rates, l1_space_error, l1_time_error,
                    make_snapshot, run_case)

__version__ = "0.1.0"
