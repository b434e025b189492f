#!/usr/bin/env python3
"""Regenerate every figure from scratch via the geoint CLI and figures CLI.

Writes CSVs to out/data and PNGs to out/figures.  The full pipeline takes
tens of minutes (the breakdown sweep dominates); --quick scales every run
down to a smoke test that finishes in well under a minute.
"""

import argparse
import pathlib
import subprocess
import sys

XS = [1.0, -1.0, 1.4, -1.4, 1.6, -1.6, 1.2]


def run(args):
    print("+", " ".join(args), flush=True)
    subprocess.run(args, check=True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out", help="output directory root")
    ap.add_argument("--quick", action="store_true",
                    help="small step counts for a fast smoke run")
    ap.add_argument("--jobs", type=int, default=1,
                    help="parallel workers for the breakdown sweep")
    opt = ap.parse_args()

    data = pathlib.Path(opt.out) / "data"
    figs = pathlib.Path(opt.out) / "figures"
    data.mkdir(parents=True, exist_ok=True)
    figs.mkdir(parents=True, exist_ok=True)

    # hidden-variable gravity runs: reference, non-resonant, resonant
    ref_steps = "2000" if opt.quick else "100000"
    fs_steps = "50" if opt.quick else "100"
    run(["geoint", "gravity", "--integrator", "stiff_midpoint",
         "--hbar", "0.0001", "--steps", ref_steps,
         "--out", str(data / "gravity_reference.csv")])
    run(["geoint", "gravity", "--hbar", "0.1", "--theta0", "2.0",
         "--steps", fs_steps, "--out", str(data / "gravity_fastslow.csv")])
    run(["geoint", "gravity", "--hbar", "0.1",
         "--theta0", "3.141592653589793", "--steps", fs_steps,
         "--out", str(data / "gravity_resonant.csv")])

    # guiding-center comparison on the quadratic field
    gc_steps = "2000" if opt.quick else "60000"
    for integ in ("slm", "rk4"):
        run(["geoint", "gc", "--field", "quadratic", "--tau", "1000",
             "--steps", gc_steps, "--integrator", integ,
             "--out", str(data / f"quadratic_{integ}.csv")])

    # figure-eight trajectories
    f8_steps = "500" if opt.quick else "6000"
    traj_paths = []
    for i, x in enumerate(XS):
        p = data / f"figure_eight_{i}.csv"
        run(["geoint", "gc", "--field", "figure-eight", "--hbar", "0.05",
             f"--q={x},0", "--steps", f8_steps, "--out", str(p)])
        traj_paths.append(str(p))

    # breakdown sweep (the expensive part); quick mode shrinks the windows
    # so the estimator can run inside the tiny budget
    scan_args = ["geoint", "scan", "--param", "hbar",
                 "--values", "0.2,0.15,0.1,0.075",
                 "--jobs", str(opt.jobs),
                 "--out", str(data / "breakdown_hbar.csv")]
    if opt.quick:
        scan_args += ["--budget", "2000", "--window", "50",
                      "--amp-window", "400"]
    else:
        scan_args += ["--budget", "5000000"]
    run(scan_args)

    run(["figures", "fig1",
         "--in", str(data / "gravity_reference.csv"),
         str(data / "gravity_fastslow.csv"),
         str(data / "gravity_resonant.csv"),
         "--out", str(figs / "fig1.png")])
    run(["figures", "fig2",
         "--in", str(data / "quadratic_slm.csv"),
         str(data / "quadratic_rk4.csv"),
         "--out", str(figs / "fig2.png")])
    run(["figures", "fig3", "--in", *traj_paths,
         "--out", str(figs / "fig3.png")])
    run(["figures", "fig4", "--in", str(data / "breakdown_hbar.csv"),
         "--out", str(figs / "fig4.png")])
    print("wrote figures to", figs)


if __name__ == "__main__":
    sys.exit(main())
