"""Algebraic wall models: Spalding's law of the wall with an optional
compressibility correction through the van Driest velocity transformation.

All quantities are dimensional except ``u_plus``/``y_plus``. The models are
standalone; they are not wired into the flow solver as boundary conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KAPPA = 0.4
SPALDING_E = 0.1108
# additive log-law constant implied by exp(-kappa B) = 0.1108
LOG_LAW_B = -math.log(SPALDING_E) / KAPPA
_EXP_LIMIT = math.log(np.finfo(float).max)
_SERIES_SWITCH = 2.0
_SERIES_TERMS = 30
SMALL_COEFFICIENT = 1.0e-6
MAX_ITERATIONS = 100


class WallModelError(ValueError):
    pass


class WallModelRangeError(WallModelError, OverflowError):
    pass


class WallModelDomainError(WallModelError):
    pass


class WallModelSolverError(RuntimeError):
    pass


def _exp_remainder(x):
    """``exp(x) - sum_{k<=4} x**k/k!`` without cancellation for small ``x``."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_SWITCH
    xs = np.where(small, x, 0.0)
    term = xs**5 / 120.0
    series = term.copy()
    for k in range(6, 6 + _SERIES_TERMS):
        term = term * xs / k
        series = series + term
    xl = np.where(small, 0.0, x)
    direct = np.expm1(xl) - xl - xl**2 / 2.0 - xl**3 / 6.0 - xl**4 / 24.0
    return np.where(small, series, direct)


def _check_range(u_plus):
    u = np.asarray(u_plus, dtype=float)
    if np.any(KAPPA * u > _EXP_LIMIT):
        bad = float(np.max(u))
        raise WallModelRangeError(f"u+ = {bad:g} overflows the exponential in Spalding's law")
    if np.any(u < 0.0):
        raise WallModelDomainError(f"u+ must be non-negative, got {float(np.min(u)):g}")
    return u


def spalding_y_plus(u_plus):
    """Spalding's law ``y+(u+)``; accepts scalars or arrays."""
    u = _check_range(u_plus)
    y = u + SPALDING_E * _exp_remainder(KAPPA * u)
    return float(y) if np.ndim(y) == 0 else y


def spalding_dy_plus(u_plus):
    """Derivative ``dy+/du+``."""
    u = _check_range(u_plus)
    x = KAPPA * u
    d = 1.0 + SPALDING_E * KAPPA * (_exp_remainder(x) + x**4 / 24.0)
    return float(d) if np.ndim(d) == 0 else d


def van_driest_coefficient(ma_inf: float, gamma: float = 1.4, prandtl: float = 0.72) -> float:
    """``b = sqrt(k / (1 + k))`` with ``k = (gamma-1)/2 Ma**2 Pr**(1/3)``."""
    if ma_inf < 0.0:
        raise WallModelDomainError(f"Mach number must be non-negative, got {ma_inf}")
    k = 0.5 * (gamma - 1.0) * ma_inf**2 * prandtl ** (1.0 / 3.0)
    return math.sqrt(k / (1.0 + k))


def _arcsin_ratio(coef, ratio):
    """``arcsin(coef * ratio) / coef`` including the ``coef -> 0`` limit."""
    z = coef * ratio
    if np.any(np.abs(z) > 1.0):
        raise WallModelDomainError(f"arcsin argument {float(np.max(np.abs(z))):.17g} exceeds 1")
    if coef < SMALL_COEFFICIENT:
        return ratio * (1.0 + z**2 / 6.0 + 3.0 * z**4 / 40.0)
    return np.arcsin(z) / coef


def van_driest_transform(u, u_inf: float, ma_inf: float, gamma: float = 1.4, prandtl: float = 0.72):
    """Equivalent incompressible velocity ``u_inf/b * arcsin(b u/u_inf)`` (freestream form)."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0):
        raise WallModelDomainError("velocity must be non-negative")
    if not u_inf > 0.0:
        raise WallModelDomainError(f"u_inf must be positive, got {u_inf}")
    b = van_driest_coefficient(ma_inf, gamma, prandtl)
    out = u_inf * _arcsin_ratio(b, u / u_inf)
    return float(out) if np.ndim(out) == 0 else out


def van_driest_edge_form(u, u_e: float, t_e: float, t_aw: float):
    """Edge form ``u_e/a * arcsin(a u/u_e)`` with ``a = sqrt(1 - T_e/T_aw)``."""
    if not (t_e > 0.0 and t_aw > 0.0):
        raise WallModelDomainError("temperatures must be positive")
    if t_e > t_aw:
        raise WallModelDomainError(f"T_e = {t_e:g} exceeds T_aw = {t_aw:g}")
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0):
        raise WallModelDomainError("velocity must be non-negative")
    a = math.sqrt(1.0 - t_e / t_aw)
    out = u_e * _arcsin_ratio(a, u / u_e)
    return float(out) if np.ndim(out) == 0 else out


def recovery_ratio(ma_e: float, gamma: float = 1.4, prandtl: float = 0.72) -> float:
    """``T_aw/T_e = (1 + (gamma-1)/gamma * Pr**(1/3)) * Ma_e**2``.

    Evaluated exactly as written. Note that it vanishes at ``Ma_e = 0`` and
    is below one for moderate Mach numbers, so it does not pair with
    :func:`van_driest_edge_form` there; :func:`matched_temperature_ratio`
    gives the ratio consistent with the freestream coefficient ``b``.
    """
    return (1.0 + (gamma - 1.0) / gamma * prandtl ** (1.0 / 3.0)) * ma_e**2


def matched_temperature_ratio(ma_inf: float, gamma: float = 1.4, prandtl: float = 0.72) -> float:
    """``1 + (gamma-1)/2 Ma**2 Pr**(1/3)``: the ratio for which the edge form equals the freestream form."""
    return 1.0 + 0.5 * (gamma - 1.0) * ma_inf**2 * prandtl ** (1.0 / 3.0)


@dataclass(frozen=True)
class WallModelQuery:
    u: float
    h_wm: float
    rho_w: float
    mu_w: float
    ma_inf: float = 0.0
    u_inf: float = 1.0
    gamma: float = 1.4
    prandtl: float = 0.72

    def validate(self, transform: bool = False):
        problems = []
        if not self.h_wm > 0.0:
            problems.append(f"h_wm must be positive, got {self.h_wm}")
        if not self.u >= 0.0:
            problems.append(f"u must be non-negative, got {self.u}")
        if not self.rho_w > 0.0:
            problems.append(f"rho_w must be positive, got {self.rho_w}")
        if not self.mu_w > 0.0:
            problems.append(f"mu_w must be positive, got {self.mu_w}")
        if not self.prandtl > 0.0:
            problems.append(f"Pr must be positive, got {self.prandtl}")
        if not self.gamma > 1.0:
            problems.append(f"gamma must exceed 1, got {self.gamma}")
        if transform:
            if not self.u_inf > 0.0:
                problems.append(f"u_inf must be positive, got {self.u_inf}")
            elif self.u > self.u_inf * (1.0 + 1e-6):
                problems.append(f"u = {self.u} exceeds u_inf = {self.u_inf}")
            if self.ma_inf < 0.0:
                problems.append(f"Ma_inf must be non-negative, got {self.ma_inf}")
        if problems:
            raise WallModelDomainError("; ".join(problems))


@dataclass(frozen=True)
class WallStress:
    tau_w: float
    u_tau: float
    y_plus: float
    u_plus: float
    iterations: int


def invert_spalding(product: float, tol: float = 4e-16) -> tuple[float, int]:
    """Solve ``u+ * y+(u+) = product`` for ``u+``.

    ``product`` is the exchange-location Reynolds number ``rho h u / mu``.
    Newton iteration on the logarithmic form, kept inside the bracket
    ``(0, sqrt(product)]`` and falling back to bisection when a step leaves
    it or fails to shrink the residual.
    """
    if product <= 0.0:
        return 0.0, 0
    target = math.log(product)
    lo, hi = 0.0, math.sqrt(product)
    # sublayer guess for small Reynolds numbers, log-law guess otherwise
    up = hi if product < 100.0 else min(hi, math.log(product) / KAPPA)
    for it in range(1, MAX_ITERATIONS + 1):
        y = spalding_y_plus(up)
        g = math.log(up) + math.log(y) - target
        if g > 0.0:
            hi = up
        else:
            lo = up
        dg = 1.0 / up + spalding_dy_plus(up) / y
        new = up - g / dg
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - up) <= tol * up:
            return new, it
        up = new
    raise WallModelSolverError(
        f"Spalding inversion did not converge for Re_h={product:g}; bracket=({lo:.17g}, {hi:.17g})"
    )


def solve_wall_stress(q: WallModelQuery, use_van_driest: bool = False) -> WallStress:
    """Wall shear stress from the velocity at the exchange location.

    With ``use_van_driest`` the velocity is first mapped to its equivalent
    incompressible value. ``u_tau`` then follows from inverting Spalding's
    law with ``y+ = rho_w h_wm u_tau / mu_w`` and ``u+ = u_eq / u_tau``.
    """
    q.validate(transform=use_van_driest)
    if q.u == 0.0:
        return WallStress(0.0, 0.0, 0.0, 0.0, 0)
    u_eq = q.u
    if use_van_driest:
        u_eq = van_driest_transform(min(q.u, q.u_inf), q.u_inf, q.ma_inf, q.gamma, q.prandtl)
    re_h = q.rho_w * q.h_wm * u_eq / q.mu_w
    u_plus, iterations = invert_spalding(re_h)
    u_tau = u_eq / u_plus
    y_plus = q.rho_w * q.h_wm * u_tau / q.mu_w
    residual = abs(y_plus - spalding_y_plus(u_plus))
    if residual >= 1e-10 * max(1.0, y_plus):
        raise WallModelSolverError(f"residual {residual:g} above tolerance at y+={y_plus:g}")
    return WallStress(q.rho_w * u_tau**2, u_tau, y_plus, u_plus, iterations)


def spalding_u_plus(y_plus):
    """Inverse of Spalding's law, ``u+(y+)``, element-wise."""
    y = np.atleast_1d(np.asarray(y_plus, dtype=float))
    out = np.empty_like(y)
    for i, yi in enumerate(y):
        if yi < 0.0:
            raise WallModelDomainError(f"y+ must be non-negative, got {yi}")
        out[i] = _invert_forward(yi)
    return float(out[0]) if np.ndim(y_plus) == 0 else out


def _invert_forward(y_plus: float) -> float:
    if y_plus == 0.0:
        return 0.0
    lo, hi = 0.0, y_plus  # y+(u+) >= u+
    up = min(y_plus, math.log1p(y_plus / SPALDING_E) / KAPPA)
    for _ in range(MAX_ITERATIONS):
        r = spalding_y_plus(up) - y_plus
        if r > 0.0:
            hi = up
        else:
            lo = up
        new = up - r / spalding_dy_plus(up)
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - up) <= 4e-16 * up:
            return new
        up = new
    raise WallModelSolverError(f"Spalding inversion did not converge at y+={y_plus:g}")


def sweep_curves(y_plus, ma_inf: float, gamma: float, prandtl: float, u_inf_plus: float,
                 edge_ratio: float | None = None):
    """Velocity profiles ``u+(y+)`` for the three model variants.

    The incompressible profile comes straight from Spalding's law. The
    compressible variants invert the van Driest maps so that their
    equivalent velocity follows Spalding; ``u_inf_plus`` sets the edge
    velocity in wall units. ``edge_ratio`` is ``T_aw/T_e`` for the edge
    form (defaults to :func:`matched_temperature_ratio`). Points where the
    inverse map is undefined are NaN.
    """
    y = np.asarray(y_plus, dtype=float)
    u_inc = spalding_u_plus(y)
    b = van_driest_coefficient(ma_inf, gamma, prandtl)
    ratio = matched_temperature_ratio(ma_inf, gamma, prandtl) if edge_ratio is None else edge_ratio
    if ratio < 1.0:
        raise WallModelDomainError(f"T_aw/T_e = {ratio:g} < 1 makes the edge form undefined")
    a = math.sqrt(1.0 - 1.0 / ratio)

    def inverse(coef):
        arg = coef * u_inc / u_inf_plus
        with np.errstate(invalid="ignore"):
            if coef < SMALL_COEFFICIENT:
                return u_inc.copy()
            vals = u_inf_plus / coef * np.sin(arg)
        return np.where(arg <= 0.5 * math.pi, vals, np.nan)

    return u_inc, inverse(b), inverse(a)
