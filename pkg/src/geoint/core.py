"""Fixed-dimension linear algebra helpers and quadrature on the unit interval."""

import functools
import math

import numpy as np


def rotation_matrix(theta):
    """Return the 2x2 counter-clockwise rotation by ``theta`` radians.

    With the complex structure J = [[0, 1], [-1, 0]] one has J^2 = -I, so
    exp(-theta J) = cos(theta) I - sin(theta) J equals this matrix; the same
    routine therefore serves both the pi/2 rotation appearing in the drift
    velocity and the limit-map rotation by theta0.
    """
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@functools.lru_cache(maxsize=None)
def _gl_nodes_unit(n):
    """Gauss-Legendre nodes/weights mapped from [-1, 1] to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return tuple(0.5 * (x + 1.0)), tuple(0.5 * w)


def gauss_legendre_unit(f, n=5):
    """Approximate the integral of ``f`` over [0, 1] with n-point Gauss-Legendre.

    Exact for polynomials of degree <= 2n - 1. Both magnetic-field models are
    polynomials of degree <= 4, so n = 5 integrates the chord integrands
    lambda * B(q + lambda xi) without quadrature error.
    """
    if n < 1:
        raise ValueError("node count must be >= 1")
    nodes, weights = _gl_nodes_unit(n)
    return sum(w * f(x) for x, w in zip(nodes, weights))
