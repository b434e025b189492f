"""Fast-slow integrator for the hidden-variable gravity system.

The state couples a fast oscillator (q, p) to two planar bodies (Q, P) around
an infinitely massive center.  One step solves the slow pair implicitly by the
midpoint rule (with the *current* q in the force), then updates the fast pair
explicitly by a theta0-rotation corrected with the converged midpoint coupling.
The implicit midpoint scheme on the full stiff system serves as the baseline.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import NonConvergence, SingularConfiguration

_SEP_GUARD = 1e-9


@dataclass(frozen=True)
class FsState:
    """Fast oscillator (q, p) plus slow positions/momenta Q, P in R^4."""

    q: float
    p: float
    Q: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Q", np.asarray(self.Q, dtype=float).reshape(4))
        object.__setattr__(self, "P", np.asarray(self.P, dtype=float).reshape(4))
        vals = [self.q, self.p, *self.Q, *self.P]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("state components must be finite")

    def as_vector(self):
        return np.concatenate(([self.q, self.p], self.Q, self.P))

    @staticmethod
    def from_vector(z):
        return FsState(q=z[0], p=z[1], Q=z[2:6], P=z[6:10])


@dataclass(frozen=True)
class FsParams:
    """Scaled step hbar = eps * h, rotation angle theta0 and solver controls."""

    hbar: float
    theta0: float
    eps: float
    fp_tol: float = 1e-12
    fp_max_iter: int = 200

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    @property
    def h(self):
        """Physical step size h = hbar / eps."""
        return self.hbar / self.eps


class PotentialModel(ABC):
    """Central potential V and pair coupling W on the slow configuration R^4."""

    @abstractmethod
    def v(self, Q):
        """V(Q)."""

    @abstractmethod
    def grad_v(self, Q):
        """dV/dQ as a length-4 array."""

    @abstractmethod
    def w(self, Q):
        """W(Q)."""

    @abstractmethod
    def grad_w(self, Q):
        """dW/dQ as a length-4 array."""


class ZeroPotential(PotentialModel):
    def v(self, Q):
        return 0.0

    def grad_v(self, Q):
        return np.zeros(4)

    def w(self, Q):
        return 0.0

    def grad_w(self, Q):
        return np.zeros(4)

    def __repr__(self):
        return "ZeroPotential()"


class TwoBodyGravity(PotentialModel):
    """V = -1/|Q1| - 1/|Q2| around the central mass; W = -1/|Q1 - Q2|."""

    def v(self, Q):
        r1, r2, _ = _separations(Q)
        return -1.0 / r1 - 1.0 / r2

    def grad_v(self, Q):
        r1, r2, _ = _separations(Q)
        return np.concatenate((Q[:2] / r1 ** 3, Q[2:] / r2 ** 3))

    def w(self, Q):
        _, _, r12 = _separations(Q)
        return -1.0 / r12

    def grad_w(self, Q):
        _, _, r12 = _separations(Q)
        d = Q[:2] - Q[2:]
        g1 = d / r12 ** 3
        return np.concatenate((g1, -g1))

    def __repr__(self):
        return "TwoBodyGravity()"


def _separations(Q):
    r1 = math.hypot(Q[0], Q[1])
    r2 = math.hypot(Q[2], Q[3])
    r12 = math.hypot(Q[0] - Q[2], Q[1] - Q[3])
    if min(r1, r2, r12) < _SEP_GUARD:
        raise SingularConfiguration(
            f"separation below guard: |Q1|={r1:.3e} |Q2|={r2:.3e} |Q1-Q2|={r12:.3e}"
        )
    return r1, r2, r12


def gravity_potentials(Q):
    """(V, grad V, W, grad W) for the two-body configuration Q."""
    pot = TwoBodyGravity()
    Q = np.asarray(Q, dtype=float).reshape(4)
    return pot.v(Q), pot.grad_v(Q), pot.w(Q), pot.grad_w(Q)


def _theta_sincos(theta0):
    """sin/cos of theta0 with an exact snap at the resonant angle pi.

    Floating-point sin(pi) ~ 1.2e-16 would contaminate the exact sign
    flipping of q at resonance; snap within 1e-12 of pi.
    """
    if abs(theta0 - math.pi) < 1e-12:
        return 0.0, -1.0
    return math.sin(theta0), math.cos(theta0)


def fs_slow_solve(s, pot, p):
    """Midpoint solve of the slow pair with the current fast position q.

    Solves Pbar - P = -hbar grad V(m) - hbar q^2 grad W(m) and
    Qbar - Q = hbar (P + Pbar)/2 with m = (Q + Qbar)/2 by fixed-point
    iteration from the force-free predictor.  Returns (Qbar, Pbar, iterations).
    """
    hbar = p.hbar
    q2 = s.q * s.q
    Qbar = s.Q + hbar * s.P
    Pbar = s.P.copy()
    for it in range(1, p.fp_max_iter + 1):
        m = 0.5 * (s.Q + Qbar)
        force = -hbar * pot.grad_v(m) - hbar * q2 * pot.grad_w(m)
        res_p = np.abs(Pbar - s.P - force).max()
        res_q = np.abs(Qbar - s.Q - hbar * 0.5 * (s.P + Pbar)).max()
        if max(res_p, res_q) <= p.fp_tol:
            return Qbar, Pbar, it
        Pbar = s.P + force
        Qbar = s.Q + hbar * 0.5 * (s.P + Pbar)
    raise NonConvergence(p.fp_max_iter, max(res_p, res_q))


def fs_step(s, pot, p):
    """One step of the fast-slow generating-function map."""
    Qbar, Pbar, _ = fs_slow_solve(s, pot, p)
    w = pot.w(0.5 * (s.Q + Qbar))
    sn, cs = _theta_sincos(p.theta0)
    coupling = p.hbar * 2.0 * s.q * w
    pbar = cs * s.p - sn * s.q - cs * coupling
    qbar = cs * s.q + sn * s.p - sn * coupling
    return FsState(q=qbar, p=pbar, Q=Qbar, P=Pbar)


def stiff_midpoint_step(s, pot, h, eps, fp_tol=1e-12, fp_max_iter=200):
    """Implicit midpoint step of the full stiff flow at physical step h.

    The fast pair is linear in (qbar, pbar) for a frozen coupling value, so
    each sweep solves that 2x2 system exactly and fixed-point iterates on the
    slow variables and the coupling.  Pure fixed-point on all four unknowns
    would not contract for h > 2 (the fast oscillator), which the large-step
    baseline columns require.
    """
    he = h * eps
    Qbar = s.Q + he * s.P
    Pbar = s.P.copy()
    qbar, pbar = s.q, s.p
    res = math.inf
    for _ in range(fp_max_iter):
        m = 0.5 * (s.Q + Qbar)
        wm = pot.w(m)
        qm = 0.5 * (s.q + qbar)
        force = -he * pot.grad_v(m) - he * qm * qm * pot.grad_w(m)
        res = max(
            abs(qbar - s.q - 0.5 * h * (s.p + pbar)),
            abs(pbar - s.p + h * qm * (1.0 + 2.0 * eps * wm)),
            np.abs(Pbar - s.P - force).max(),
            np.abs(Qbar - s.Q - he * 0.5 * (s.P + Pbar)).max(),
        )
        if res <= fp_tol:
            return FsState(q=qbar, p=pbar, Q=Qbar, P=Pbar)
        # midpoint fast equations, linear given wm:
        #   qbar - (h/2) pbar = q + (h/2) p
        #   a qbar + pbar = p - a q,  a = (h/2)(1 + 2 eps wm)
        a = 0.5 * h * (1.0 + 2.0 * eps * wm)
        det = 1.0 + a * 0.5 * h
        b1 = s.q + 0.5 * h * s.p
        b2 = s.p - a * s.q
        qbar = (b1 + 0.5 * h * b2) / det
        pbar = (b2 - a * b1) / det
        qm = 0.5 * (s.q + qbar)
        force = -he * pot.grad_v(m) - he * qm * qm * pot.grad_w(m)
        Pbar = s.P + force
        Qbar = s.Q + he * 0.5 * (s.P + Pbar)
    raise NonConvergence(fp_max_iter, res)
