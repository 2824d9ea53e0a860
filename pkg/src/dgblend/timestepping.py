"""Five-stage, fourth-order low-storage Runge-Kutta (Carpenter & Kennedy, 2N form)."""

from __future__ import annotations

import numpy as np

from . import euler
from .euler import StateError

LSRK_A = (
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
)
LSRK_B = (
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
)
LSRK_C = (
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
)
RK_STAGES = len(LSRK_B)


def rk_step(u: np.ndarray, dt: float, rhs) -> np.ndarray:
    """Advance ``u`` by one step of size ``dt``; returns a new array.

    ``rhs`` maps a field to its time derivative and is called once per
    stage, so anything it derives from the field (the blending
    coefficients in particular) is refreshed every stage.
    """
    if not dt > 0.0:
        raise ValueError(f"time step must be positive, got {dt}")
    u = np.array(u, dtype=float, copy=True)
    k = np.zeros_like(u)
    for stage, (a, b) in enumerate(zip(LSRK_A, LSRK_B)):
        try:
            du = rhs(u)
        except StateError as err:
            raise StateError(f"RK stage {stage}: {err}", err.location, err.rho, err.p) from None
        k = a * k + dt * du
        u += b * k
    return u


def cfl_time_step(u: np.ndarray, gas_gamma: float, jacobian, degree: int, weights, nodes, cfl: float) -> float:
    """``dt = cfl / sum_d (lambda_d / dx_d)`` with ``dx_d`` the smallest LGL spacing.

    The spacing is the smaller of the closest node gap and the narrowest
    subcell, since the FV subcells are the tighter constraint.
    """
    w = euler.to_primitives(u, gas_gamma)
    gaps = np.diff(nodes) if degree > 0 else np.array([2.0])
    spacing = min(float(gaps.min()), float(np.min(weights)))
    rate = 0.0
    for axis, jac in enumerate(jacobian):
        lam = float(np.max(np.abs(w.vel[axis]) + w.c))
        rate += lam / (jac * spacing)
    return cfl / rate
