"""Command-line entry point: run experiments and serialize results."""

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import experiments, fastslow, slm
from .errors import GeointError
from .fields import DriftParams, make_field, xh_scalar

log = logging.getLogger("geoint")


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path, columns, rows, comment=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
        if comment:
            fh.write(f"# {comment}\n")


def write_json(path, columns, rows, comment=None):
    doc = {"columns": list(columns), "rows": [[float(v) for v in row] for row in rows]}
    if comment:
        doc["comment"] = comment
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _emit_series(args, series):
    comment = None
    if series.error is not None:
        comment = f"aborted at step {series.aborted_at}: {series.error}"
        log.error("aborted at step %d: %s", series.aborted_at, series.error)
    writer = write_json if args.format == "json" else write_csv
    writer(args.out, series.columns, series.rows, comment=comment)
    return 2 if series.error is not None else 0


def _parse_pair(text, name):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"{name} expects 'a,b', got {text!r}")
    return float(parts[0]), float(parts[1])


def _float_list(text):
    return [float(v) for v in text.split(",")]


def _add_common(sub):
    sub.add_argument("--out", required=True, help="output file path")
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.add_argument("--config", default=None,
                     help="JSON config file; explicit flags override it")
    sub.add_argument("--dump-config", default=None,
                     help="write the resolved configuration to this JSON file")
    sub.add_argument("--fp-tol", type=float, default=1e-12)
    sub.add_argument("--fp-max-iter", type=int, default=200)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="geoint",
        description="Nearly-periodic-map geometric integrators and experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gc = sub.add_parser("gc", help="guiding-center run (symplectic Lorentz map or RK4)")
    gc.add_argument("--field", choices=["quadratic", "figure-eight"], default="quadratic")
    gc.add_argument("--b0", type=float, default=1.0)
    gc.add_argument("--alpha", type=float, default=0.001)
    gc.add_argument("--mu", type=float, default=1.0)
    gc.add_argument("--tau", type=float, default=1.0)
    gc.add_argument("--hbar", type=float, default=0.1)
    gc.add_argument("--theta0", type=float, default=2.0)
    gc.add_argument("--steps", type=int, default=1000)
    gc.add_argument("--q", default="1,1", help="initial position 'x,y'")
    gc.add_argument("--v", default="xh",
                    help="initial velocity 'vx,vy', or 'xh' for the slow manifold")
    gc.add_argument("--integrator", choices=["slm", "rk4"], default="slm")
    _add_common(gc)

    gr = sub.add_parser("gravity", help="hidden-variable gravity run")
    gr.add_argument("--eps", type=float, default=0.001)
    gr.add_argument("--hbar", type=float, default=0.1)
    gr.add_argument("--theta0", type=float, default=2.0)
    gr.add_argument("--steps", type=int, default=100)
    gr.add_argument("--integrator", choices=["fastslow", "stiff_midpoint"],
                    default="fastslow")
    gr.add_argument("--potential", choices=["gravity", "zero"], default="gravity")
    gr.add_argument("--qp", default="0.2,0", help="initial fast pair 'q,p'")
    gr.add_argument("--Q", default=None, help="initial positions 'x1,y1,x2,y2'")
    gr.add_argument("--P", default=None, help="initial momenta 'x1,y1,x2,y2'")
    _add_common(gr)

    sc = sub.add_parser("scan", help="breakdown-time parameter sweep")
    sc.add_argument("--param", choices=["hbar", "theta0"], required=True)
    sc.add_argument("--values", required=True, help="comma-separated sweep values")
    sc.add_argument("--hbar", type=float, default=0.05565)
    sc.add_argument("--theta0", type=float, default=0.3)
    sc.add_argument("--mu", type=float, default=1.0)
    sc.add_argument("--tau", type=float, default=1.0)
    sc.add_argument("--window", type=int, default=50)
    sc.add_argument("--amp-window", type=int, default=5000)
    sc.add_argument("--budget", type=int, default=5_000_000)
    sc.add_argument("--chunk", type=int, default=20_000)
    sc.add_argument("--jobs", type=int, default=1)
    _add_common(sc)

    ck = sub.add_parser("check", help="run the quick invariant suite")
    ck.add_argument("--seed", type=int, default=0)
    return parser


def _apply_config(parser, argv):
    """Two-stage parse: config file sets defaults, explicit flags override."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv[1:])
    args = parser.parse_args(argv)
    if known.config:
        with open(known.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        sub = [a for a in parser._subparsers._group_actions[0].choices.values()]
        for sp in sub:
            sp.set_defaults(**{k: v for k, v in loaded.items()})
        args = parser.parse_args(argv)
    return args


def _dump_config(args):
    skip = {"command", "config", "dump_config"}
    doc = {k: v for k, v in vars(args).items() if k not in skip}
    with open(args.dump_config, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _validate(cond, message):
    if not cond:
        raise SystemExit2(message)


class SystemExit2(Exception):
    """Validation failure, reported on stderr with exit code 1."""


def cmd_gc(args):
    _validate(args.hbar > 0, "hbar must be > 0")
    _validate(abs(math.sin(args.theta0)) >= 1e-12,
              "theta0 must lie in (0, pi) or (pi, 2 pi) mod 2 pi")
    _validate(args.steps >= 0, "steps must be >= 0")
    _validate(args.mu > 0 and args.tau > 0, "mu and tau must be > 0")
    field = make_field(args.field, b0=args.b0, alpha=args.alpha)
    dp = DriftParams(mu=args.mu, tau=args.tau)
    params = slm.SlmParams(hbar=args.hbar, theta0=args.theta0, drift=dp,
                           fp_tol=args.fp_tol, fp_max_iter=args.fp_max_iter)
    q0 = _parse_pair(args.q, "--q")
    if args.v == "xh":
        v0 = xh_scalar(field, dp.mu_eff, q0[0], q0[1])
    else:
        v0 = _parse_pair(args.v, "--v")
    state = slm.GCState(q=q0, v=v0)
    log.info("gc: %s integrator=%s steps=%d hbar=%g", field, args.integrator,
             args.steps, args.hbar)
    series = experiments.run_gc(field, params, state, args.steps, args.integrator)
    return _emit_series(args, series)


def cmd_gravity(args):
    _validate(args.hbar > 0, "hbar must be > 0")
    _validate(args.eps > 0, "eps must be > 0")
    _validate(args.steps >= 0, "steps must be >= 0")
    params = fastslow.FsParams(hbar=args.hbar, theta0=args.theta0, eps=args.eps,
                               fp_tol=args.fp_tol, fp_max_iter=args.fp_max_iter)
    pot = fastslow.TwoBodyGravity() if args.potential == "gravity" \
        else fastslow.ZeroPotential()
    preset = experiments.fig1_initial_state()
    q0, p0 = _parse_pair(args.qp, "--qp")
    Q = _float_list(args.Q) if args.Q else preset.Q
    P = _float_list(args.P) if args.P else preset.P
    state = fastslow.FsState(q=q0, p=p0, Q=Q, P=P)
    log.info("gravity: integrator=%s steps=%d h=%g", args.integrator, args.steps,
             params.h)
    series = experiments.run_gravity(pot, params, state, args.steps, args.integrator)
    return _emit_series(args, series)


def cmd_scan(args):
    values = _float_list(args.values)
    _validate(len(values) >= 0, "values must parse")
    _validate(args.hbar > 0, "hbar must be > 0")
    from .diagnostics import BreakdownConfig

    base = slm.SlmParams(hbar=args.hbar, theta0=args.theta0,
                         drift=DriftParams(mu=args.mu, tau=args.tau),
                         fp_tol=args.fp_tol, fp_max_iter=args.fp_max_iter)
    spec = experiments.SweepSpec(
        param=args.param, values=values, base=base,
        breakdown=BreakdownConfig(window=args.window,
                                  amplitude_window=args.amp_window),
        step_budget=args.budget, chunk=args.chunk,
    )
    results = experiments.scan_breakdown(spec, jobs=args.jobs)
    rows = []
    for r in results:
        tb = math.nan if r.t_breakdown is None else r.t_breakdown
        rows.append([r.param, f"{r.value:.17g}", f"{tb:.17g}", r.status])
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(experiments.SCAN_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    return 0


def cmd_check(args):
    """Quick invariant suite: a cheap subset of the package's property checks."""
    import numpy.linalg as la

    from .core import rotation_matrix
    from .diagnostics import omega_star, symplecticity_defect
    from .fields import FigureEightField

    rng = np.random.default_rng(args.seed)
    failures = 0

    def report(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        if not ok:
            failures += 1

    r = rotation_matrix(rng.uniform(0, 2 * math.pi))
    report("rotation orthogonality", la.norm(r.T @ r - np.eye(2), np.inf) < 1e-14)

    field = make_field("quadratic", alpha=0.0)
    params = slm.SlmParams(hbar=0.1, theta0=2.0)
    s = slm.GCState(q=(0.5, -0.3), v=(1.0, 0.2))
    out = slm.slm_step(field, s, params)
    rot = rotation_matrix(2.0) @ np.array(s.v)
    report("constant-B exact rotation", np.abs(np.array(out.v) - rot).max() < 1e-12)

    f8 = FigureEightField()
    params = slm.SlmParams(hbar=0.1, theta0=2.0)
    s = slm.GCState(q=(2.0, 0.2), v=(0.1, 2.0))

    def step_vec(z):
        nxt = slm.slm_step(f8, slm.GCState(q=(z[0], z[1]), v=(z[2], z[3])), params)
        return np.array([*nxt.q, *nxt.v])

    defect = symplecticity_defect(
        step_vec,
        lambda z: omega_star(f8, slm.GCState(q=(z[0], z[1]), v=(z[2], z[3])),
                             params.hbar),
        np.array([*s.q, *s.v]),
    )
    report("symplecticity defect", defect < 1e-5, f"defect={defect:.2e}")

    rep = slm.solve_xi(f8, s, params)
    report("solver residual audit", rep.residual_norm <= params.fp_tol,
           f"residual={rep.residual_norm:.2e}")
    return 1 if failures else 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    level = {"quiet": logging.WARNING, "info": logging.INFO,
             "debug": logging.DEBUG}.get(os.environ.get("GEOINT_LOG", "quiet"),
                                         logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if getattr(args, "dump_config", None):
            _dump_config(args)
        handler = {"gc": cmd_gc, "gravity": cmd_gravity,
                   "scan": cmd_scan, "check": cmd_check}[args.command]
        return handler(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, argparse.ArgumentTypeError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GeointError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
