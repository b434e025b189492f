import math

import numpy as np
import pytest

from geoint.diagnostics import BreakdownConfig, mu_fast, mu_gc
from geoint.experiments import (
    GC_COLUMNS,
    GRAVITY_COLUMNS,
    SweepSpec,
    fig1_initial_state,
    fig2_setup,
    fig3_setup,
    run_gc,
    run_gravity,
    scan_breakdown,
)
from geoint.fastslow import FsParams, FsState, TwoBodyGravity
from geoint.fields import (
    DriftParams,
    FigureEightField,
    QuadraticField,
    b_value,
    drift_velocity,
)
from geoint.slm import GCState, SlmParams


def gc_params(**kw):
    kw.setdefault("hbar", 0.1)
    kw.setdefault("theta0", 2.0)
    kw.setdefault("drift", DriftParams(1.0, 1.0))
    return SlmParams(**kw)


# -- guiding-center runner ----------------------------------------------------

def test_run_gc_shape_and_time_axis():
    field = QuadraticField(1.0, 0.001)
    p = gc_params(drift=DriftParams(1.0, 10.0))
    s = GCState((1.0, 1.0), (0.0, 0.0))
    series = run_gc(field, p, s, 50)
    assert series.columns == GC_COLUMNS
    assert series.rows.shape == (51, 8)
    assert series.error is None
    # t = n * hbar * tau
    assert np.allclose(series.rows[:, 1], np.arange(51) * 0.1 * 10.0, atol=0)
    assert np.array_equal(series.rows[0, 2:6], [1.0, 1.0, 0.0, 0.0])


def test_run_gc_mu_and_energy_columns():
    field = FigureEightField()
    p = gc_params()
    dp = p.drift
    s = GCState((2.0, 0.0), (0.5, 2.0))
    series = run_gc(field, p, s, 5)
    for row in series.rows:
        st = GCState((row[2], row[3]), (row[4], row[5]))
        assert row[6] == pytest.approx(mu_gc(field, dp, st), rel=1e-14)
        assert row[7] == pytest.approx(dp.mu_eff * b_value(field, st.q), rel=1e-14)


def test_run_gc_rk4_velocity_is_slow_manifold():
    field = QuadraticField(1.0, 0.001)
    p = gc_params()
    s = GCState((1.0, 1.0), (0.0, 0.0))
    series = run_gc(field, p, s, 10, integrator="rk4")
    for row in series.rows[1:]:
        xh = drift_velocity(field, p.drift, (row[2], row[3]))
        assert np.allclose(row[4:6], xh, atol=1e-14)
        # mu vanishes identically on the slow manifold
        assert row[6] == pytest.approx(0.0, abs=1e-14)


def test_run_gc_nonconvergence_yields_partial_series():
    field = FigureEightField()
    p = gc_params(hbar=10.0)
    s = GCState((2.0, 0.0), (0.5, 1.0))
    series = run_gc(field, p, s, 10)
    assert series.error is not None
    assert series.aborted_at == 1
    assert series.rows.shape[0] == 1  # only the initial record survives


def test_run_gc_rejects_unknown_integrator():
    with pytest.raises(ValueError):
        run_gc(FigureEightField(), gc_params(), GCState((2, 0), (0, 2)), 1,
               integrator="euler")


# -- gravity runner -----------------------------------------------------------

def test_run_gravity_shape_and_columns():
    p = FsParams(hbar=0.1, theta0=2.0, eps=0.001)
    series = run_gravity(TwoBodyGravity(), p, fig1_initial_state(), 20)
    assert series.columns == GRAVITY_COLUMNS
    assert series.rows.shape == (21, 14)
    assert np.allclose(series.rows[:, 1], np.arange(21) * p.h, atol=0)
    pot = TwoBodyGravity()
    for row in series.rows:
        s = FsState(q=row[2], p=row[3], Q=row[4:8], P=row[8:12])
        assert row[12] == pytest.approx(mu_fast(s.q, s.p), rel=1e-14)
        eslow = 0.5 * s.P @ s.P + pot.v(s.Q) + s.q ** 2 * pot.w(s.Q)
        assert row[13] == pytest.approx(eslow, rel=1e-12)


def test_run_gravity_resonant_fast_sign_alternation():
    p = FsParams(hbar=0.1, theta0=math.pi, eps=0.001)
    series = run_gravity(TwoBodyGravity(), p, fig1_initial_state(), 40)
    assert series.error is None
    q = series.rows[:, 2]
    expect = 0.2 * np.where(np.arange(41) % 2 == 0, 1.0, -1.0)
    assert np.array_equal(q, expect)  # |q| is preserved exactly at resonance


def test_run_gravity_stiff_midpoint_reference_energy():
    # eslow itself carries the O(1) oscillation of q^2 W; replacing q^2 by
    # its fast average 2 mu0 gives the nearly conserved slow energy
    p = FsParams(hbar=0.1 * 0.001, theta0=2.0, eps=0.001)  # h = 0.1
    series = run_gravity(TwoBodyGravity(), p, fig1_initial_state(), 500,
                         integrator="stiff_midpoint")
    assert series.error is None
    rows = series.rows
    pot = TwoBodyGravity()
    w = np.array([pot.w(r[4:8]) for r in rows])
    mu0 = rows[:, 12]
    eadiab = rows[:, 13] - rows[:, 2] ** 2 * w + 2.0 * mu0 * w
    assert np.abs(mu0 - mu0[0]).max() < 1e-3
    assert np.abs(eadiab - eadiab[0]).max() < 1e-2 * abs(eadiab[0])


def test_resonant_coupling_biases_slow_orbits_doubly():
    # at resonance q^2 is frozen at its initial (maximal) value instead of
    # oscillating about half of it, so the slow orbits feel twice the mean
    # coupling and drift further from the reference than the non-resonant run
    eps = 0.001
    s0 = fig1_initial_state()
    ref = run_gravity(TwoBodyGravity(), FsParams(hbar=0.1 * eps, theta0=2.0,
                                                 eps=eps), s0, 100_000,
                      "stiff_midpoint")

    def mean_sep(series):
        d = series.rows[:, 4:6] - series.rows[:, 6:8]
        return np.hypot(d[:, 0], d[:, 1]).mean()

    nonres = run_gravity(TwoBodyGravity(),
                         FsParams(hbar=0.1, theta0=2.0, eps=eps), s0, 100)
    res = run_gravity(TwoBodyGravity(),
                      FsParams(hbar=0.1, theta0=math.pi, eps=eps), s0, 100)
    assert ref.error is None and nonres.error is None and res.error is None
    base = mean_sep(ref)
    assert abs(mean_sep(res) - base) > abs(mean_sep(nonres) - base)


def test_run_gravity_rejects_unknown_integrator():
    with pytest.raises(ValueError):
        run_gravity(TwoBodyGravity(), FsParams(0.1, 2.0, 0.001),
                    fig1_initial_state(), 1, integrator="verlet")


# -- breakdown sweep ----------------------------------------------------------

def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(param="mu", values=[1.0])
    with pytest.raises(ValueError):
        SweepSpec(param="theta0", values=[3.5])


def test_scan_budget_exhaustion_reports_none():
    spec = SweepSpec(
        param="hbar", values=[0.02],
        base=SlmParams(hbar=0.1, theta0=2.0, drift=DriftParams(1.0, 1.0)),
        breakdown=BreakdownConfig(window=50, amplitude_window=200),
        step_budget=1500, chunk=500,
    )
    rows = scan_breakdown(spec)
    assert len(rows) == 1
    assert rows[0].status == "none"
    assert rows[0].t_breakdown is None


def test_scan_detects_breakdown_in_chaotic_regime():
    # Small theta0 puts the separatrix orbit in the chaotic regime where the
    # windowed mean of mu heats past its initial oscillation band quickly
    # (probed firing step ~750 at hbar = 0.2).
    spec = SweepSpec(
        param="hbar", values=[0.2],
        base=SlmParams(hbar=0.1, theta0=0.3, drift=DriftParams(1.0, 1.0)),
        breakdown=BreakdownConfig(window=50, amplitude_window=5000),
        step_budget=50_000, chunk=10_000,
    )
    rows = scan_breakdown(spec)
    assert rows[0].status == "ok"
    assert rows[0].t_breakdown > 0


def test_scan_error_status_does_not_stop_sweep():
    spec = SweepSpec(
        param="hbar", values=[50.0, 0.02],
        base=SlmParams(hbar=0.1, theta0=2.0, drift=DriftParams(1.0, 1.0)),
        breakdown=BreakdownConfig(window=50, amplitude_window=200),
        step_budget=1500, chunk=500,
    )
    rows = scan_breakdown(spec)
    assert rows[0].status.startswith("error")
    assert rows[1].status in ("ok", "none")


# -- presets ------------------------------------------------------------------

def test_fig2_setup():
    field, params, state, n = fig2_setup()
    assert isinstance(field, QuadraticField)
    assert params.drift.tau == 1000.0
    assert n == 60_000
    assert state.q == (1.0, 1.0)
    assert np.allclose(state.v,
                       drift_velocity(field, params.drift, state.q), atol=1e-15)


def test_fig3_setup_spreads_over_both_lobes():
    field, params, states, n = fig3_setup()
    assert len(states) == 7
    assert params.hbar == 0.05 and params.drift.tau == 1.0
    xs = [s.q[0] for s in states]
    assert any(x > 0 for x in xs) and any(x < 0 for x in xs)
    for s in states:
        assert mu_gc(field, params.drift, s) > 0.01


def test_fig1_initial_state_regular():
    s = fig1_initial_state()
    pot = TwoBodyGravity()
    assert math.isfinite(pot.v(s.Q)) and math.isfinite(pot.w(s.Q))
    assert s.q == 0.2 and s.p == 0.0
