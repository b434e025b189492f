"""Nearly-periodic-map geometric integrators.

Two families of structure-preserving maps: the symplectic Lorentz map for 2-D
guiding-center drift dynamics on the tangent bundle, and a fast-slow
generating-function integrator for a stiff oscillator coupled to planar
gravity, together with baselines (RK4, implicit midpoint) and diagnostics
(adiabatic invariants, symplecticity defect, breakdown-time estimation).
"""

from .fields import (
    DriftParams,
    FieldModel,
    FigureEightField,
    QuadraticField,
    drift_jacobian,
    drift_velocity,
)
from .slm import GCState, SlmParams, slm_step, solve_xi
from .fastslow import (
    FsParams,
    FsState,
    TwoBodyGravity,
    ZeroPotential,
    fs_step,
    stiff_midpoint_step,
)
from .baselines import rk4_step
from .diagnostics import (
    BreakdownConfig,
    MuSeries,
    breakdown_time,
    mu_fast,
    mu_gc,
    omega_star,
    symplecticity_defect,
)
from .experiments import SweepSpec, TimeSeries, run_gc, run_gravity, scan_breakdown

__all__ = [
    "DriftParams", "FieldModel", "FigureEightField", "QuadraticField",
    "drift_jacobian", "drift_velocity",
    "GCState", "SlmParams", "slm_step", "solve_xi",
    "FsParams", "FsState", "TwoBodyGravity", "ZeroPotential",
    "fs_step", "stiff_midpoint_step",
    "rk4_step",
    "BreakdownConfig", "MuSeries", "breakdown_time", "mu_fast", "mu_gc",
    "omega_star", "symplecticity_defect",
    "SweepSpec", "TimeSeries", "run_gc", "run_gravity", "scan_breakdown",
]
