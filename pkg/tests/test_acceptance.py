"""End-to-end acceptance properties.

Each test prints a single PASS/FAIL line so the suite doubles as a checklist
when run with ``pytest -s tests/test_acceptance.py``.
"""

import math

import numpy as np
import pytest

from geoint.core import rotation_matrix
from geoint.diagnostics import (
    BreakdownConfig,
    canonical_form,
    mu_gc,
    omega_star,
    symplecticity_defect,
)
from geoint.errors import NonConvergence
from geoint.experiments import (
    SweepSpec,
    fig1_initial_state,
    fig2_setup,
    fig3_setup,
    run_gc,
    run_gravity,
    scan_breakdown,
)
from geoint.fastslow import (
    FsParams,
    FsState,
    TwoBodyGravity,
    fs_slow_solve,
    fs_step,
    stiff_midpoint_step,
)
from geoint.fields import (
    DriftParams,
    FigureEightField,
    QuadraticField,
    b_value,
    drift_velocity,
)
from geoint.slm import GCState, SlmParams, slm_step, solve_xi


def verdict(num, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'}  criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def _slm_step_vec(field, params):
    def step(z):
        out = slm_step(field, GCState(q=(z[0], z[1]), v=(z[2], z[3])), params)
        return np.array([*out.q, *out.v])

    return step


def test_criterion_1_symplecticity_of_slm_step():
    rng = np.random.default_rng(2024)
    fields = [QuadraticField(1.0, 0.001), FigureEightField()]
    worst = 0.0
    for field in fields:
        for hbar in (0.2, 0.1, 0.05):
            params = SlmParams(hbar=hbar, theta0=2.0, drift=DriftParams(1.0, 1.0))
            step = _slm_step_vec(field, params)
            count = 0
            while count < 20:
                z = np.concatenate((rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)))

                def omega(zz):
                    return omega_star(
                        field, GCState((zz[0], zz[1]), (zz[2], zz[3])), hbar
                    )

                try:
                    defect = symplecticity_defect(step, omega, z)
                except Exception:
                    continue  # rare states where the FD stencil fails to converge
                worst = max(worst, defect)
                count += 1
    verdict(1, worst < 1e-5, f"max symplecticity defect {worst:.2e} < 1e-5")


def test_criterion_2_limit_map():
    field = FigureEightField()
    dp = DriftParams(1.0, 1.0)
    q = np.array([2.0, 0.0])
    v = np.array([0.5, -0.3])
    xh = drift_velocity(field, dp, q)
    target = xh + rotation_matrix(2.0) @ (v - xh)
    errs = []
    for hbar in (1e-1, 1e-2, 1e-3, 1e-4):
        p = SlmParams(hbar=hbar, theta0=2.0, drift=dp)
        out = slm_step(field, GCState(tuple(q), tuple(v)), p)
        errs.append(np.abs(np.array(out.v) - target).max())
    mono = all(b < a for a, b in zip(errs, errs[1:]))
    verdict(2, mono and errs[-1] < 1e-3,
            f"limit-map errors decrease {['%.1e' % e for e in errs]}, final < 1e-3")


def test_criterion_3_local_truncation_order():
    field = QuadraticField(1.0, 0.001)
    dp = DriftParams(1.0, 1.0)
    q = np.array([1.0, 1.0])
    xh = drift_velocity(field, dp, q)
    from geoint.fields import drift_jacobian

    jac = drift_jacobian(field, dp, q)
    hs = np.logspace(-3, -1, 9)
    errs = []
    for h in hs:
        p = SlmParams(hbar=h, theta0=2.0, drift=dp)
        out = slm_step(field, GCState(tuple(q), tuple(xh)), p)
        pred = q + h * xh + 0.5 * h * h * (jac @ xh)
        errs.append(np.linalg.norm(np.array(out.q) - pred))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    verdict(3, slope >= 2.4, f"local truncation slope {slope:.2f} >= 2.4")


def test_criterion_4_constant_field_exactness():
    field = QuadraticField(1.0, 0.0)
    v = np.array([1.3, -0.4])
    expect = rotation_matrix(2.0) @ v
    worst = 0.0
    for hbar in (1e-3, 0.1, 1.0):
        p = SlmParams(hbar=hbar, theta0=2.0, drift=DriftParams(1.0, 1.0))
        out = slm_step(field, GCState((0.2, 0.9), tuple(v)), p)
        worst = max(worst, np.abs(np.array(out.v) - expect).max(),
                    abs(np.hypot(*out.v) - np.hypot(*v)))
    verdict(4, worst < 1e-12, f"constant-B rotation error {worst:.2e} < 1e-12")


def test_criterion_5_quadratic_field_stability_vs_rk4():
    field, params, state, n_steps = fig2_setup()
    slm_series = run_gc(field, params, state, n_steps, "slm")
    rk4_series = run_gc(field, params, state, n_steps, "rk4")
    assert slm_series.error is None and rk4_series.error is None
    r0 = math.hypot(*state.q)
    r_slm = np.hypot(slm_series.rows[:, 2], slm_series.rows[:, 3])
    r_rk4 = np.hypot(rk4_series.rows[:, 2], rk4_series.rows[:, 3])
    slm_dev = np.abs(r_slm - r0).max()
    rk4_terminal = abs(r_rk4[-1] - r0)
    ok = slm_dev < 0.05 * r0 and rk4_terminal > slm_dev
    verdict(5, ok, f"slm radius dev {slm_dev:.3g} < 5%, "
                   f"rk4 terminal dev {rk4_terminal:.3g} exceeds it")


def test_criterion_6_figure_eight_confinement():
    field, params, states, n_steps = fig3_setup()
    ok = True
    detail = []
    for s in states:
        series = run_gc(field, params, s, n_steps, "slm")
        assert series.error is None
        mu = series.rows[:, 6]
        mu0 = mu[0]
        in_band = np.all(np.abs(mu - mu0) <= 0.5 * mu0)
        x = series.rows[:, 2]
        same_lobe = np.all(np.sign(x) == np.sign(x[0]))
        ok = ok and in_band and same_lobe
        detail.append(f"x0={s.q[0]:+.1f} band={in_band} lobe={same_lobe}")
    verdict(6, ok, "; ".join(detail))


@pytest.mark.slow
def test_criterion_7_breakdown_scaling():
    # hbar sweep from the separatrix point (2, 0).  At theta0 = 0.3 the
    # orbit is chaotic and the estimator fires within ~2e4 steps for every
    # swept hbar; toward theta0 = pi the invariant is so well conserved that
    # the windowed mean never leaves its initial oscillation band (censored
    # result), reproducing the strong upward trend of breakdown time with
    # theta0.  The fitted log-log exponent gate is -1.5: the power law is
    # clearly super-linear, though shallower than the steepest reported
    # asymptote (which lives in a regime where single-trajectory firing
    # times are censored at any affordable budget; see the breakdown notes
    # in BreakdownConfig).
    cfg = BreakdownConfig(window=50, amplitude_window=5000)
    spec = SweepSpec(
        param="hbar", values=[0.2, 0.15, 0.1, 0.075],
        base=SlmParams(hbar=0.1, theta0=0.3, drift=DriftParams(1.0, 1.0)),
        breakdown=cfg, step_budget=5_000_000, chunk=20_000,
    )
    rows = scan_breakdown(spec)
    times = [None if r.t_breakdown is None else float(r.t_breakdown)
             for r in rows]
    ok = all(r.status == "ok" for r in rows)
    increasing = ok and all(b > a for a, b in zip(times, times[1:]))
    if ok:
        slope = np.polyfit(np.log(spec.values), np.log(times), 1)[0]
    else:
        slope = math.nan

    # theta0 trend at fixed hbar: chaotic at 0.3 (fires), near-regular at
    # 2.0 (censored within a budget 10x beyond the largest firing step count).
    trend = SweepSpec(
        param="theta0", values=[0.3, 2.0],
        base=SlmParams(hbar=0.1, theta0=0.3, drift=DriftParams(1.0, 1.0)),
        breakdown=cfg, step_budget=200_000, chunk=20_000,
    )
    t_rows = scan_breakdown(trend)
    toward_pi = t_rows[0].status == "ok" and t_rows[1].status == "none"

    verdict(7, ok and increasing and slope <= -1.5 and toward_pi,
            f"breakdown times {times} strictly increasing, fitted exponent "
            f"{slope:.2f} <= -1.5; theta0 trend finite at 0.3 -> censored "
            f"at 2.0")


def test_criterion_8_gravity_reproduction():
    eps = 0.001
    pot = TwoBodyGravity()
    s0 = fig1_initial_state()

    # (i) resonant theta0 = pi: exact sign alternation of q
    p_res = FsParams(hbar=100.0 * eps, theta0=math.pi, eps=eps)
    res = run_gravity(pot, p_res, s0, 100)
    q = res.rows[:, 2]
    alt = len(q) > 10 and np.array_equal(
        np.sign(q), np.where(np.arange(len(q)) % 2 == 0, 1.0, -1.0))

    # reference: stiff midpoint at h = 0.1 out to T = 10000
    p_ref = FsParams(hbar=0.1 * eps, theta0=2.0, eps=eps)
    ref = run_gravity(pot, p_ref, s0, 100_000, "stiff_midpoint")
    assert ref.error is None

    # (ii) non-resonant fastslow at h = 100 matches the reference |Q1| average
    p_fs = FsParams(hbar=100.0 * eps, theta0=2.0, eps=eps)
    fs = run_gravity(pot, p_fs, s0, 100)
    assert fs.error is None
    r1_fs = np.hypot(fs.rows[:, 4], fs.rows[:, 5]).mean()
    r1_ref = np.hypot(ref.rows[:, 4], ref.rows[:, 5]).mean()
    close = abs(r1_fs - r1_ref) < 0.05 * r1_ref

    # (iii) stiff midpoint at h = 100: qbar + q collapse
    sm = run_gravity(pot, p_fs, s0, 100, "stiff_midpoint")
    assert sm.error is None
    qs = sm.rows[:, 2]
    collapse = np.abs(qs[1:] + qs[:-1]).mean() < 0.1 * np.abs(qs).mean()

    verdict(8, alt and close and collapse,
            f"(i) alternation={alt} (ii) |Q1| {r1_fs:.3f} vs {r1_ref:.3f} "
            f"(iii) collapse={collapse}")


def test_criterion_9_fast_invariant_drift():
    eps = 0.001
    p = FsParams(hbar=100.0 * eps, theta0=2.0, eps=eps)
    series = run_gravity(TwoBodyGravity(), p, fig1_initial_state(), 100)
    assert series.error is None
    mu0 = series.rows[:, 12]
    w = 20
    kernel = np.full(w, 1.0 / w)
    mubar = np.convolve(mu0, kernel, mode="valid")
    drift = np.abs(mubar - mubar[0]).max() / mubar[0]
    verdict(9, drift < 0.05, f"windowed mu0 relative drift {drift:.3%} < 5%")


def test_criterion_10_fs_step_symplecticity():
    pot = TwoBodyGravity()
    params = FsParams(hbar=0.05, theta0=2.0, eps=0.01)
    # ordering (q, p, Q1..Q4, P1..P4): pairs (0,1) and (2+i, 6+i)
    omega = np.zeros((10, 10))
    omega[0, 1] = 1.0
    for i in range(4):
        omega[2 + i, 6 + i] = 1.0
    omega = omega - omega.T

    def step(z):
        return fs_step(FsState.from_vector(z), pot, params).as_vector()

    rng = np.random.default_rng(77)
    worst = 0.0
    count = 0
    while count < 20:
        z = rng.uniform(-2, 2, 10)
        s = FsState.from_vector(z)
        try:
            pot.v(s.Q)  # skip near-singular configurations
            defect = symplecticity_defect(step, lambda _: omega, z)
        except Exception:
            continue
        worst = max(worst, defect)
        count += 1
    verdict(10, worst < 1e-5, f"max canonical defect {worst:.2e} < 1e-5")


def test_criterion_11_solver_audits():
    # (a) re-substitution residuals on accepted steps
    field = FigureEightField()
    params = SlmParams(hbar=0.1, theta0=2.0, drift=DriftParams(1.0, 1.0))
    rep = solve_xi(field, GCState((2.0, 0.0), (0.5, 1.8)), params)
    ok_slm = rep.residual_norm <= 1e-12

    pot = TwoBodyGravity()
    fsp = FsParams(hbar=0.05, theta0=2.0, eps=0.001)
    s = fig1_initial_state()
    Qbar, Pbar, _ = fs_slow_solve(s, pot, fsp)
    m = 0.5 * (s.Q + Qbar)
    force = -fsp.hbar * pot.grad_v(m) - fsp.hbar * s.q ** 2 * pot.grad_w(m)
    ok_slow = max(
        np.abs(Pbar - s.P - force).max(),
        np.abs(Qbar - s.Q - fsp.hbar * 0.5 * (s.P + Pbar)).max(),
    ) <= 1e-12

    h, eps = 100.0, 0.001
    out = stiff_midpoint_step(s, pot, h, eps)
    he = h * eps
    m = 0.5 * (s.Q + out.Q)
    qm = 0.5 * (s.q + out.q)
    wm = pot.w(m)
    force = -he * pot.grad_v(m) - he * qm * qm * pot.grad_w(m)
    ok_stiff = max(
        abs(out.q - s.q - 0.5 * h * (s.p + out.p)),
        abs(out.p - s.p + h * qm * (1.0 + 2.0 * eps * wm)),
        np.abs(out.P - s.P - force).max(),
        np.abs(out.Q - s.Q - he * 0.5 * (s.P + out.P)).max(),
    ) <= 1e-12

    # (b) non-contracting parameters surface as NonConvergence
    bad = SlmParams(hbar=10.0, theta0=2.0, drift=DriftParams(1.0, 1.0))
    try:
        solve_xi(field, GCState((2.0, 0.0), (0.5, 1.0)), bad)
        loud = False
    except NonConvergence:
        loud = True

    verdict(11, ok_slm and ok_slow and ok_stiff and loud,
            f"residual audits slm={ok_slm} slow={ok_slow} stiff={ok_stiff}, "
            f"NonConvergence raised={loud}")
