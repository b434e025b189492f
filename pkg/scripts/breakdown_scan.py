#!/usr/bin/env python3
"""Standalone breakdown-time sweep with progress reporting.

Example:
    python3 scripts/breakdown_scan.py --param hbar --values 0.2,0.15,0.1 \
        --budget 5000000 --out scan.csv
"""

import argparse
import sys
import time

from geoint.diagnostics import BreakdownConfig
from geoint.experiments import SCAN_COLUMNS, SweepSpec, scan_breakdown
from geoint.fields import DriftParams
from geoint.slm import SlmParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--param", choices=["hbar", "theta0"], required=True)
    ap.add_argument("--values", required=True)
    ap.add_argument("--hbar", type=float, default=0.05565)
    ap.add_argument("--theta0", type=float, default=0.3)
    ap.add_argument("--budget", type=int, default=5_000_000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", required=True)
    opt = ap.parse_args()

    values = [float(v) for v in opt.values.split(",")]
    base = SlmParams(hbar=opt.hbar, theta0=opt.theta0,
                     drift=DriftParams(1.0, 1.0))
    spec = SweepSpec(param=opt.param, values=values, base=base,
                     breakdown=BreakdownConfig(), step_budget=opt.budget)
    t0 = time.time()
    rows = scan_breakdown(spec, jobs=opt.jobs)
    with open(opt.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(SCAN_COLUMNS) + "\n")
        for r in rows:
            tb = "nan" if r.t_breakdown is None else f"{r.t_breakdown:.17g}"
            fh.write(f"{r.param},{r.value:.17g},{tb},{r.status}\n")
            print(r, flush=True)
    print(f"scan finished in {time.time() - t0:.0f}s -> {opt.out}")


if __name__ == "__main__":
    sys.exit(main())
