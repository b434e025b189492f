"""Reference integrators: classical RK4 on the reduced drift flow q' = X_H(q)."""

from .fields import xh_scalar


def rk4_step(field, dp, q, h):
    """One classical 4-stage Runge-Kutta step for the drift ODE.

    Raises DomainError if any stage point leaves the region B > 0.
    """
    mu_eff = dp.mu_eff
    x, y = q[0], q[1]
    k1x, k1y = xh_scalar(field, mu_eff, x, y)
    k2x, k2y = xh_scalar(field, mu_eff, x + 0.5 * h * k1x, y + 0.5 * h * k1y)
    k3x, k3y = xh_scalar(field, mu_eff, x + 0.5 * h * k2x, y + 0.5 * h * k2y)
    k4x, k4y = xh_scalar(field, mu_eff, x + h * k3x, y + h * k3y)
    return (
        x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )
