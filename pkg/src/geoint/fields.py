"""Planar magnetic-field models and the induced drift dynamics.

The guiding-center Hamiltonian is H(q) = mu_eff * B(q) with the conformal
metric g_q(v, w) = B(q) v . w.  The drift velocity is the Hamiltonian vector
field X_H = mu_eff * R_{pi/2} grad(ln B).  All models are polynomials, so
gradients and Hessians are analytic.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


class FieldModel(ABC):
    """Positive scalar field B on R^2 with analytic first and second derivatives.

    Scalar-argument methods keep the implicit-solver inner loop free of array
    overhead; the module-level operations wrap them for array inputs.
    """

    @abstractmethod
    def b(self, x, y):
        """Field strength B(x, y)."""

    @abstractmethod
    def grad(self, x, y):
        """Gradient (dB/dx, dB/dy)."""

    @abstractmethod
    def hess(self, x, y):
        """Hessian entries (B_xx, B_xy, B_yy)."""


class QuadraticField(FieldModel):
    """B = B0 (1 + alpha |q|^2); produces circular drift orbits."""

    def __init__(self, b0=1.0, alpha=0.001):
        self.b0 = float(b0)
        self.alpha = float(alpha)

    def b(self, x, y):
        return self.b0 * (1.0 + self.alpha * (x * x + y * y))

    def grad(self, x, y):
        c = 2.0 * self.alpha * self.b0
        return c * x, c * y

    def hess(self, x, y):
        c = 2.0 * self.alpha * self.b0
        return c, 0.0, c

    def __repr__(self):
        return f"QuadraticField(b0={self.b0}, alpha={self.alpha})"


class FigureEightField(FieldModel):
    """B = 2 + y^2 - x^2 + x^4/4; level sets have a figure-eight structure.

    Note B = (x^2/2 - 1)^2 + 1 + y^2 >= 1, so the domain guard never triggers
    for this model.
    """

    def b(self, x, y):
        return 2.0 + y * y - x * x + 0.25 * x ** 4

    def grad(self, x, y):
        return -2.0 * x + x ** 3, 2.0 * y

    def hess(self, x, y):
        return -2.0 + 3.0 * x * x, 0.0, 2.0

    def __repr__(self):
        return "FigureEightField()"


@dataclass(frozen=True)
class DriftParams:
    """Magnetic moment mu and time-scaling factor tau.

    The effective moment mu_eff = mu * tau multiplies the drift field, the
    generating-function terms and the invariant diagnostics; tau rescales the
    embedded system's clock relative to physical time.
    """

    mu: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        if not (self.mu > 0 and self.tau > 0):
            raise ValueError("mu and tau must be positive")

    @property
    def mu_eff(self):
        return self.mu * self.tau


def b_checked(field, x, y):
    """B(x, y), raising DomainError where the field is not positive."""
    b = field.b(x, y)
    if not b > 0.0:
        raise DomainError(f"B({x}, {y}) = {b} <= 0: outside domain of validity")
    return b


def xh_scalar(field, mu_eff, x, y):
    """Drift velocity X_H = mu_eff R_{pi/2} grad(ln B) as a scalar pair."""
    b = b_checked(field, x, y)
    gx, gy = field.grad(x, y)
    return -mu_eff * gy / b, mu_eff * gx / b


def dxh_scalar(field, mu_eff, x, y):
    """Jacobian of the drift velocity, row-major (j11, j12, j21, j22).

    DX_H = mu_eff R_{pi/2} [Hess(B)/B - grad(B) grad(B)^T / B^2].
    """
    b = b_checked(field, x, y)
    gx, gy = field.grad(x, y)
    hxx, hxy, hyy = field.hess(x, y)
    m11 = hxx / b - gx * gx / (b * b)
    m12 = hxy / b - gx * gy / (b * b)
    m22 = hyy / b - gy * gy / (b * b)
    return -mu_eff * m12, -mu_eff * m22, mu_eff * m11, mu_eff * m12


def b_value(field, q):
    """B at q (array-like of length 2)."""
    return b_checked(field, q[0], q[1])


def b_grad(field, q):
    return np.array(field.grad(q[0], q[1]))


def b_hess(field, q):
    hxx, hxy, hyy = field.hess(q[0], q[1])
    return np.array([[hxx, hxy], [hxy, hyy]])


def drift_velocity(field, dp, q):
    """X_H(q) as an ndarray."""
    return np.array(xh_scalar(field, dp.mu_eff, q[0], q[1]))


def drift_jacobian(field, dp, q):
    """DX_H(q) as a 2x2 ndarray."""
    j11, j12, j21, j22 = dxh_scalar(field, dp.mu_eff, q[0], q[1])
    return np.array([[j11, j12], [j21, j22]])


def make_field(name, b0=1.0, alpha=0.001):
    """Field factory used by the CLI."""
    if name == "quadratic":
        return QuadraticField(b0=b0, alpha=alpha)
    if name in ("figure-eight", "figure8", "figure_eight"):
        return FigureEightField()
    raise ValueError(f"unknown field model: {name!r}")
