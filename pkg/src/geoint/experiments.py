"""Trajectory runners, parameter sweeps and presets for the numerical studies."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from . import baselines, fastslow, slm
from .diagnostics import BreakdownConfig, MuSeries, breakdown_time, mu_fast, mu_gc
from .errors import GeointError
from .fields import FieldModel, FigureEightField, QuadraticField, b_checked, xh_scalar

GC_COLUMNS = ["step", "t", "x", "y", "vx", "vy", "mu", "energy"]
GRAVITY_COLUMNS = [
    "step", "t", "q", "p",
    "Q1x", "Q1y", "Q2x", "Q2y", "P1x", "P1y", "P2x", "P2y",
    "mu0", "eslow",
]
SCAN_COLUMNS = ["param", "value", "t_breakdown", "status"]


@dataclass
class TimeSeries:
    """Column-named record stream; ``error``/``aborted_at`` flag partial runs."""

    columns: list
    rows: np.ndarray
    error: str = None
    aborted_at: int = None


def run_gc(field, params, initial, n_steps, integrator="slm"):
    """Advance a guiding-center trajectory, recording mu and energy per step.

    Physical time is t = n * hbar * tau (the embedded clock runs tau times
    slower than true time).  For the RK4 baseline the velocity columns carry
    the slow-manifold value X_H(q).  On a stepper error the partial series is
    returned with the failing step recorded.
    """
    if integrator not in ("slm", "rk4"):
        raise ValueError(f"unknown integrator {integrator!r}")
    dp = params.drift
    dt = params.hbar * dp.tau
    rows = []
    state = initial
    error = None
    aborted_at = None

    def record(n, s):
        b = b_checked(field, s.q[0], s.q[1])
        rows.append([
            n, n * dt, s.q[0], s.q[1], s.v[0], s.v[1],
            mu_gc(field, dp, s), dp.mu_eff * b,
        ])

    try:
        record(0, state)
        for n in range(1, n_steps + 1):
            if integrator == "slm":
                state = slm.slm_step(field, state, params)
            else:
                qb = baselines.rk4_step(field, dp, state.q, params.hbar)
                state = slm.GCState(q=qb, v=xh_scalar(field, dp.mu_eff, qb[0], qb[1]))
            record(n, state)
    except GeointError as exc:
        error = str(exc)
        aborted_at = len(rows)
    return TimeSeries(GC_COLUMNS, np.array(rows), error=error, aborted_at=aborted_at)


def run_gravity(pot, params, initial, n_steps, integrator="fastslow"):
    """Advance the fast-slow or stiff-midpoint map, recording mu0 and slow energy.

    Physical time is t = n * h with h = hbar / eps for both integrators.
    """
    if integrator not in ("fastslow", "stiff_midpoint"):
        raise ValueError(f"unknown integrator {integrator!r}")
    h = params.h
    rows = []
    state = initial
    error = None
    aborted_at = None

    def record(n, s):
        eslow = 0.5 * float(s.P @ s.P) + pot.v(s.Q) + s.q * s.q * pot.w(s.Q)
        rows.append([n, n * h, s.q, s.p, *s.Q, *s.P, mu_fast(s.q, s.p), eslow])

    try:
        record(0, state)
        for n in range(1, n_steps + 1):
            if integrator == "fastslow":
                state = fastslow.fs_step(state, pot, params)
            else:
                state = fastslow.stiff_midpoint_step(
                    state, pot, h, params.eps,
                    fp_tol=params.fp_tol, fp_max_iter=params.fp_max_iter,
                )
            record(n, state)
    except GeointError as exc:
        error = str(exc)
        aborted_at = len(rows)
    return TimeSeries(
        GRAVITY_COLUMNS, np.array(rows), error=error, aborted_at=aborted_at
    )


@dataclass
class SweepSpec:
    """Breakdown-time sweep over theta0 or hbar on the figure-eight field.

    Each point runs the Lorentz map from q = (2, 0), v = X_H(q), collecting
    the invariant series in chunks until breakdown is detected or the step
    budget is exhausted.
    """

    param: str
    values: list
    base: slm.SlmParams = None
    field: FieldModel = dc_field(default_factory=FigureEightField)
    q0: tuple = (2.0, 0.0)
    breakdown: BreakdownConfig = dc_field(default_factory=BreakdownConfig)
    step_budget: int = 5_000_000
    chunk: int = 20_000

    def __post_init__(self):
        if self.param not in ("theta0", "hbar"):
            raise ValueError("param must be 'theta0' or 'hbar'")
        if self.base is None:
            self.base = slm.SlmParams(hbar=0.1, theta0=2.0)
        if self.param == "theta0":
            for v in self.values:
                if not 0.0 < v < math.pi:
                    raise ValueError("theta0 sweep values must lie in (0, pi)")


@dataclass
class ScanRow:
    param: str
    value: float
    t_breakdown: float  # None when no breakdown within budget
    status: str


def _scan_point(spec, value):
    params = replace(spec.base, **{spec.param: value})
    cfg = spec.breakdown
    min_len = cfg.amplitude_window + cfg.window + 1
    try:
        dp = params.drift
        q0 = spec.q0
        state = slm.GCState(q=q0, v=xh_scalar(spec.field, dp.mu_eff, q0[0], q0[1]))
        mu = [mu_gc(spec.field, dp, state)]
        while len(mu) <= spec.step_budget:
            target = min(len(mu) + spec.chunk, spec.step_budget + 1)
            while len(mu) < target:
                state = slm.slm_step(spec.field, state, params)
                mu.append(mu_gc(spec.field, dp, state))
            if len(mu) > min_len:
                t = breakdown_time(MuSeries(mu, params.hbar), cfg)
                if t is not None:
                    return ScanRow(spec.param, value, t, "ok")
        return ScanRow(spec.param, value, None, "none")
    except GeointError as exc:
        return ScanRow(spec.param, value, None, f"error: {exc}")


def scan_breakdown(spec, jobs=1):
    """Breakdown time for each sweep value; per-point errors do not stop the scan."""
    if jobs <= 1:
        return [_scan_point(spec, v) for v in spec.values]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_scan_point, [spec] * len(spec.values), spec.values))


# -- presets for the numerical studies ---------------------------------------

def fig2_setup():
    """Quadratic-field comparison run: slm vs RK4 over 60000 steps."""
    field = QuadraticField(b0=1.0, alpha=0.001)
    dp = slm.DriftParams(mu=1.0, tau=1000.0)
    params = slm.SlmParams(hbar=0.1, theta0=2.0, drift=dp)
    q0 = (1.0, 1.0)
    state = slm.GCState(q=q0, v=xh_scalar(field, dp.mu_eff, q0[0], q0[1]))
    return field, params, state, 60_000


def fig3_setup(n_init=7, v_offset=1.0):
    """Figure-eight invariant run: 7 initial states spread across both lobes.

    Initial velocities sit off the slow manifold by ``v_offset`` so the
    invariant starts at a nonzero value.
    """
    field = FigureEightField()
    params = slm.SlmParams(hbar=0.05, theta0=2.0, drift=slm.DriftParams(1.0, 1.0))
    xs = [1.0, -1.0, 1.4, -1.4, 1.6, -1.6, 1.2][:n_init]
    states = []
    for i, x in enumerate(xs):
        xh = xh_scalar(field, params.drift.mu_eff, x, 0.0)
        phi = 2.0 * math.pi * i / max(n_init, 1)
        v = (xh[0] + v_offset * math.cos(phi), xh[1] + v_offset * math.sin(phi))
        states.append(slm.GCState(q=(x, 0.0), v=v))
    return field, params, states, 6_000


def fig1_initial_state():
    """Two bodies on near-circular orbits of radii 1 and 2, fast phase (0.2, 0).

    The source experiments do not state the initial condition.  The fast
    amplitude is kept small so the q^2 W coupling perturbs rather than
    dominates the orbits; at q ~ 1 the inter-body force is comparable to the
    central attraction and the configuration destabilizes within a few slow
    orbits.
    """
    return fastslow.FsState(
        q=0.2, p=0.0,
        Q=np.array([1.0, 0.0, 0.0, 2.0]),
        P=np.array([0.0, 1.0, -math.sqrt(0.5), 0.0]),
    )
