"""The four figure styles, one renderer per kind."""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, read_table

# identical output bytes across runs: fixed geometry, no embedded metadata
_SAVE_KW = {"dpi": 150, "metadata": {"Software": None}}


def render(kind, inputs, out):
    """Render one figure of the given kind from the input CSVs to ``out``."""
    try:
        fn = _RENDERERS[kind]
    except KeyError:
        raise SchemaError(f"unknown figure kind {kind!r}")
    fn(inputs, out)


def _fig1(inputs, out):
    """Fast oscillation traces (top) and slow orbits (bottom), one column per run."""
    tables = [read_table(p, "gravity") for p in inputs]
    n = max(len(tables), 1)
    fig, axes = plt.subplots(2, n, figsize=(4.0 * n, 6.0), squeeze=False)
    for j, tab in enumerate(tables):
        top, bot = axes[0][j], axes[1][j]
        if len(tab):
            top.plot(tab.column("step"), tab.column("q"), lw=0.8, color="C0")
            bot.plot(tab.column("Q1x"), tab.column("Q1y"), lw=0.8, color="C1",
                     label="body 1")
            bot.plot(tab.column("Q2x"), tab.column("Q2y"), lw=0.8, color="C2",
                     label="body 2")
            bot.plot([0.0], [0.0], marker="+", color="k", ls="none")
            bot.legend(loc="upper right", fontsize=7)
            bot.set_aspect("equal", adjustable="datalim")
        top.set_xlabel("# steps")
        top.set_ylabel("q")
        bot.set_xlabel("x")
        bot.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(out, **_SAVE_KW)
    plt.close(fig)


def _fig2(inputs, out):
    """Orbit radius |q| versus step for each run on a single panel."""
    tables = [read_table(p, "gc") for p in inputs]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for j, (path, tab) in enumerate(zip(inputs, tables)):
        if len(tab):
            r = np.hypot(tab.column("x"), tab.column("y"))
            ax.plot(tab.column("step"), r, lw=0.8, color=f"C{j}", label=path)
    ax.set_xlabel("# steps")
    ax.set_ylabel("|q|")
    if any(len(t) for t in tables):
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out, **_SAVE_KW)
    plt.close(fig)


def _fig3(inputs, out):
    """Orbits (left) and invariant traces shifted by 0, 1, 2, ... (right)."""
    tables = [read_table(p, "gc") for p in inputs]
    fig, (left, right) = plt.subplots(1, 2, figsize=(10.0, 4.5))
    for j, tab in enumerate(tables):
        if len(tab):
            left.plot(tab.column("x"), tab.column("y"), lw=0.6, color=f"C{j}")
            right.plot(tab.column("step"), tab.column("mu") + j, lw=0.6,
                       color=f"C{j}")
    left.set_xlabel("x")
    left.set_ylabel("y")
    left.set_aspect("equal", adjustable="datalim")
    right.set_xlabel("# steps")
    right.set_ylabel("invariant (offset by trajectory index)")
    fig.tight_layout()
    fig.savefig(out, **_SAVE_KW)
    plt.close(fig)


def _fig4(inputs, out):
    """Breakdown-time scatter; hbar sweeps add the hbar^-3.5 reference slope."""
    tables = [read_table(p, "scan") for p in inputs]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    any_points = False
    param_name = None
    for j, tab in enumerate(tables):
        if not len(tab):
            continue
        ok = [i for i, st in enumerate(tab.text_column("status")) if st == "ok"]
        vals = tab.column("value")[ok]
        times = tab.column("t_breakdown")[ok]
        keep = np.isfinite(times)
        vals, times = vals[keep], times[keep]
        if vals.size == 0:
            continue
        names = tab.text_column("param")
        param_name = names[ok[0]] if ok else None
        if param_name == "theta0":
            ax.semilogy(vals / math.pi, times, "o", ms=4, color=f"C{j}")
        else:
            ax.loglog(vals, times, "o", ms=4, color=f"C{j}")
        any_points = True
        if param_name == "hbar":
            # reference slope anchored at the largest swept value
            ref_x = np.array([vals.min(), vals.max()])
            anchor = times[np.argmax(vals)]
            ref_y = anchor * (ref_x / vals.max()) ** -3.5
            ax.loglog(ref_x, ref_y, "-", lw=1.2, color="darkgreen",
                      label=r"reference slope $-3.5$")
            ax.legend(fontsize=8)
    if param_name == "theta0":
        ax.set_xlabel(r"$\theta_0/\pi$")
    else:
        ax.set_xlabel(r"$\hbar$")
    ax.set_ylabel(r"$T_{\mathrm{breakdown}}$")
    if not any_points:
        ax.set_yscale("linear")
        ax.set_xscale("linear")
    fig.tight_layout()
    fig.savefig(out, **_SAVE_KW)
    plt.close(fig)


_RENDERERS = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4}
