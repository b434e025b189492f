"""Symplectic Lorentz map stepper for the 2-D guiding-center system.

One step (q, v) -> (qbar, vbar) is generated implicitly by a Type I
generating function S(q, qbar) = int_q^qbar A . dl + Sigma(eta, xi) with
eta = (q + qbar)/2 and xi = qbar - q.  The chord xi is found by fixed-point
iteration on the rearranged implicit equation; vbar then follows from an
explicit evaluation.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .core import _gl_nodes_unit
from .errors import DomainError, NonConvergence, SingularOperator
from .fields import DriftParams, b_checked, dxh_scalar, xh_scalar

_CHORD_NODES, _CHORD_WEIGHTS = _gl_nodes_unit(5)


def _finite_pair(p, name):
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"{name} must have finite components, got ({x}, {y})")
    return x, y


@dataclass(frozen=True)
class GCState:
    """Guiding-center tangent-bundle point: position q and fiber velocity v."""

    q: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "q", _finite_pair(self.q, "q"))
        object.__setattr__(self, "v", _finite_pair(self.v, "v"))


@dataclass(frozen=True)
class SlmParams:
    """Step parameter hbar, rotation angle theta0 and solver controls.

    theta0 must avoid {0, pi} mod 2*pi: at those angles the limit rotation
    degenerates and the generating-function coefficient sin/(1 - cos) is
    undefined or loses the restoring term.
    """

    hbar: float
    theta0: float
    drift: DriftParams = dc_field(default_factory=DriftParams)
    fp_tol: float = 1e-12
    fp_max_iter: int = 200

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if abs(math.sin(self.theta0)) < 1e-12:
            raise ValueError("theta0 must avoid {0, pi} mod 2*pi")
        if not self.fp_tol > 0:
            raise ValueError("fp_tol must be positive")

    @property
    def k(self):
        """The coefficient sin(theta0) / (1 - cos(theta0))."""
        return math.sin(self.theta0) / (1.0 - math.cos(self.theta0))


@dataclass
class SlmSolveReport:
    """Converged chord solve: midpoint eta, chord xi and iteration record."""

    eta: tuple
    xi: tuple
    iterations: int
    residual_norm: float
    residual_history: list


def chord_integrals(field, q, xi):
    """Weighted field averages along the straight chord from q to q + xi.

    Returns (I0, I1) with I0 = int_0^1 (1-l) B(q + l xi) dl and
    I1 = int_0^1 l B(q + l xi) dl, by 5-point Gauss-Legendre (exact for the
    polynomial field models).
    """
    qx, qy = q[0], q[1]
    xix, xiy = xi[0], xi[1]
    i0 = 0.0
    i1 = 0.0
    for lam, w in zip(_CHORD_NODES, _CHORD_WEIGHTS):
        b = b_checked(field, qx + lam * xix, qy + lam * xiy)
        i0 += w * (1.0 - lam) * b
        i1 += w * lam * b
    return i0, i1


def _sigma_derivs(field, mu_eff, hbar, k, ex, ey, xix, xiy):
    """Analytic (dSigma/deta, dSigma/dxi) at midpoint (ex, ey), chord xi."""
    b = b_checked(field, ex, ey)
    gx, gy = field.grad(ex, ey)
    xhx, xhy = xh_scalar(field, mu_eff, ex, ey)
    j11, j12, j21, j22 = dxh_scalar(field, mu_eff, ex, ey)
    dx = xix - hbar * xhx
    dy = xiy - hbar * xhy
    xh_dot_xi = xhx * xix + xhy * xiy
    dd = dx * dx + dy * dy
    # J^T contractions: (J^T a)_i = J_ji a_j
    jt_xi_x = j11 * xix + j21 * xiy
    jt_xi_y = j12 * xix + j22 * xiy
    jt_d_x = j11 * dx + j21 * dy
    jt_d_y = j12 * dx + j22 * dy
    h2 = hbar * hbar
    c1 = -hbar * mu_eff + h2 * xh_dot_xi - 0.25 * k * dd
    deta_x = c1 * gx + h2 * b * jt_xi_x + 0.5 * k * b * hbar * jt_d_x
    deta_y = c1 * gy + h2 * b * jt_xi_y + 0.5 * k * b * hbar * jt_d_y
    dxi_x = h2 * b * xhx - 0.5 * k * b * dx
    dxi_y = h2 * b * xhy - 0.5 * k * b * dy
    return deta_x, deta_y, dxi_x, dxi_y


def sigma_value(field, eta, xi, p):
    """The generating-function core Sigma(eta, xi)."""
    ex, ey = eta[0], eta[1]
    xix, xiy = xi[0], xi[1]
    mu_eff = p.drift.mu_eff
    b = b_checked(field, ex, ey)
    xhx, xhy = xh_scalar(field, mu_eff, ex, ey)
    dx = xix - p.hbar * xhx
    dy = xiy - p.hbar * xhy
    return (
        -p.hbar * mu_eff * b
        + p.hbar * p.hbar * b * (xhx * xix + xhy * xiy)
        - 0.25 * p.k * b * (dx * dx + dy * dy)
    )


def sigma_derivatives(field, eta, xi, p):
    """Analytic gradients of Sigma with respect to eta and xi, as ndarrays."""
    dex, dey, dxx, dxy = _sigma_derivs(
        field, p.drift.mu_eff, p.hbar, p.k, eta[0], eta[1], xi[0], xi[1]
    )
    return np.array([dex, dey]), np.array([dxx, dxy])


def _residual_and_update(field, p, qx, qy, vx, vy, bq, xix, xiy):
    """One sweep of the rearranged chord equation.

    The equation has the form A(eta, xi) xi = rhs(eta, xi) with the 2x2
    operator A = k/2 B(eta) I - I0 R_{pi/2}.  Returns the residual of the
    current iterate and the next iterate from an exact 2x2 solve.
    """
    hbar, k, mu_eff = p.hbar, p.k, p.drift.mu_eff
    h2 = hbar * hbar
    ex = qx + 0.5 * xix
    ey = qy + 0.5 * xiy
    be = b_checked(field, ex, ey)
    xhx, xhy = xh_scalar(field, mu_eff, ex, ey)
    deta_x, deta_y, _, _ = _sigma_derivs(field, mu_eff, hbar, k, ex, ey, xix, xiy)
    i0, _ = chord_integrals(field, (qx, qy), (xix, xiy))
    c = (h2 + 0.5 * k * hbar) * be
    rhs_x = -h2 * bq * vx - 0.5 * deta_x + c * xhx
    rhs_y = -h2 * bq * vy - 0.5 * deta_y + c * xhy
    a = 0.5 * k * be
    # A = [[a, i0], [-i0, a]] since -I0 R_{pi/2} = [[0, i0], [-i0, 0]]
    res_x = a * xix + i0 * xiy - rhs_x
    res_y = -i0 * xix + a * xiy - rhs_y
    det = a * a + i0 * i0
    if abs(det) < 1e-14:
        raise SingularOperator(f"chord operator determinant {det:.3e} below guard")
    new_x = (a * rhs_x - i0 * rhs_y) / det
    new_y = (i0 * rhs_x + a * rhs_y) / det
    return max(abs(res_x), abs(res_y)), new_x, new_y


def solve_xi(field, s, p):
    """Solve the implicit chord equation for xi by fixed-point iteration.

    Initial guess xi = hbar X_H(q) makes the first residual O(hbar^2).  Each
    sweep re-assembles the 2x2 operator and right-hand side at the current
    (eta, xi) and solves exactly.  Raises NonConvergence when the residual
    stays above fp_tol after fp_max_iter sweeps.
    """
    qx, qy = s.q
    vx, vy = s.v
    bq = b_checked(field, qx, qy)
    xhx, xhy = xh_scalar(field, p.drift.mu_eff, qx, qy)
    xix = p.hbar * xhx
    xiy = p.hbar * xhy
    history = []
    for it in range(1, p.fp_max_iter + 1):
        rnorm, new_x, new_y = _residual_and_update(
            field, p, qx, qy, vx, vy, bq, xix, xiy
        )
        history.append(rnorm)
        if rnorm <= p.fp_tol:
            return SlmSolveReport(
                eta=(qx + 0.5 * xix, qy + 0.5 * xiy),
                xi=(xix, xiy),
                iterations=it,
                residual_norm=rnorm,
                residual_history=history,
            )
        if not (math.isfinite(new_x) and math.isfinite(new_y)):
            raise NonConvergence(it, rnorm)
        xix, xiy = new_x, new_y
    raise NonConvergence(p.fp_max_iter, history[-1])


def slm_step(field, s, p):
    """Advance one symplectic Lorentz step: (q, v) -> (qbar, vbar)."""
    report = solve_xi(field, s, p)
    qx, qy = s.q
    vx, vy = s.v
    xix, xiy = report.xi
    ex, ey = report.eta
    hbar, k, mu_eff = p.hbar, p.k, p.drift.mu_eff
    h2 = hbar * hbar
    qbx = qx + xix
    qby = qy + xiy
    bqbar = b_checked(field, qbx, qby)
    bq = b_checked(field, qx, qy)
    be = b_checked(field, ex, ey)
    xhx, xhy = xh_scalar(field, mu_eff, ex, ey)
    i0, i1 = chord_integrals(field, (qx, qy), (xix, xiy))
    dx = xix - hbar * xhx
    dy = xiy - hbar * xhy
    # (i0 - i1) R_{pi/2} xi with R_{pi/2} xi = (-xiy, xix)
    num_x = -h2 * bq * vx + (i0 - i1) * (-xiy) + 2.0 * h2 * be * xhx - k * be * dx
    num_y = -h2 * bq * vy + (i0 - i1) * xix + 2.0 * h2 * be * xhy - k * be * dy
    scale = h2 * bqbar
    return GCState(q=(qbx, qby), v=(num_x / scale, num_y / scale))
