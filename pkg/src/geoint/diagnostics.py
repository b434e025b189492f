"""Conserved-quantity diagnostics, symplecticity defect, breakdown-time estimator."""

from dataclasses import dataclass

import numpy as np

from .errors import SeriesTooShort
from .fields import b_checked, xh_scalar


def mu_gc(field, dp, s):
    """Postulated adiabatic invariant B(q) |v - X_H(q)|^2 of the Lorentz map.

    This is the plotted quadratic form, without the 1/2 of the normalized
    leading-order invariant.
    """
    x, y = s.q
    b = b_checked(field, x, y)
    xhx, xhy = xh_scalar(field, dp.mu_eff, x, y)
    dx = s.v[0] - xhx
    dy = s.v[1] - xhy
    return b * (dx * dx + dy * dy)


def mu_fast(q, p):
    """Leading-order adiabatic invariant of the fast oscillator: (q^2 + p^2)/2."""
    return 0.5 * (q * q + p * p)


def omega_star(field, s, hbar):
    """Coordinate matrix of the magnetic symplectic form in (x, y, vx, vy).

    Omega* = pi* omega - hbar^2 d(g_q(v, dq)) with g_q(v, w) = B v . w; the
    nonzero independent entries are (x, y) and (x, vx) = (y, vy).
    """
    x, y = s.q
    vx, vy = s.v
    b = b_checked(field, x, y)
    gx, gy = field.grad(x, y)
    h2 = hbar * hbar
    m = np.zeros((4, 4))
    m[0, 1] = -b - h2 * (vy * gx - vx * gy)
    m[0, 2] = h2 * b
    m[1, 3] = h2 * b
    return m - m.T


def canonical_form(dim_pairs):
    """Constant canonical matrix for dq^i ^ dp_i ordered (q..., p...)."""
    m = np.zeros((2 * dim_pairs, 2 * dim_pairs))
    for i in range(dim_pairs):
        m[i, dim_pairs + i] = 1.0
    return m - m.T


def fd_jacobian(step, z, fd_eps=1e-5):
    """Central-difference Jacobian of a map R^n -> R^n, Richardson-refined once."""
    z = np.asarray(z, dtype=float)
    n = z.size

    def central(eps):
        cols = []
        for i in range(n):
            dz = np.zeros(n)
            dz[i] = eps
            cols.append((step(z + dz) - step(z - dz)) / (2.0 * eps))
        return np.column_stack(cols)

    d1 = central(fd_eps)
    d2 = central(0.5 * fd_eps)
    return (4.0 * d2 - d1) / 3.0


def symplecticity_defect(step, omega, z, fd_eps=1e-5):
    """Max-abs entry of D^T Omega(F(z)) D - Omega(z), D the FD Jacobian of step.

    ``step`` maps flat state vectors to flat state vectors; ``omega`` maps a
    flat state vector to the coordinate matrix of the symplectic form there.
    """
    z = np.asarray(z, dtype=float)
    d = fd_jacobian(step, z, fd_eps)
    defect = d.T @ omega(step(z)) @ d - omega(z)
    return np.abs(defect).max()


@dataclass
class MuSeries:
    """Per-step invariant values with the physical time increment per step."""

    values: np.ndarray
    step_time: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size == 0:
            raise ValueError("series must be non-empty")
        if not np.isfinite(self.values).all():
            raise ValueError("series entries must be finite")


@dataclass(frozen=True)
class BreakdownConfig:
    """Moving-average window and initial segment used for the amplitude estimate.

    Defaults were calibrated on the figure-eight separatrix scans: a short
    mean window keeps heating transitions visible, while a long amplitude
    window covers several circulation beats of the reference oscillation.
    """

    window: int = 50
    amplitude_window: int = 5000

    def __post_init__(self):
        if self.window < 2:
            raise ValueError("window must be >= 2")
        if self.amplitude_window < self.window:
            raise ValueError("amplitude_window must be >= window")


def breakdown_time(series, cfg):
    """First time the windowed mean of mu drifts beyond its oscillation amplitude.

    mu_bar is a centered moving average of width cfg.window; the amplitude
    mu_tilde is half the peak-to-peak range of mu over the first
    cfg.amplitude_window steps.  Returns n * step_time for the smallest n with
    mu_bar(n) - mu_bar(0) > mu_tilde, or None when no such n exists.  The
    test is one-sided: breakdown manifests as growth of the gyration energy,
    so only upward drift of the mean counts.
    """
    mu = series.values
    if mu.size <= cfg.amplitude_window:
        raise SeriesTooShort(
            f"series length {mu.size} <= amplitude_window {cfg.amplitude_window}"
        )
    kernel = np.full(cfg.window, 1.0 / cfg.window)
    mubar = np.convolve(mu, kernel, mode="valid")
    head = mu[: cfg.amplitude_window]
    mu_tilde = 0.5 * (head.max() - head.min())
    drift = mubar - mubar[0]
    idx = np.nonzero(drift > mu_tilde)[0]
    if idx.size == 0:
        return None
    # mubar[i] is centered at original index i + window//2
    return (idx[0] + cfg.window // 2) * series.step_time
