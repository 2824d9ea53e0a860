"""Exact solution of the 1D Euler Riemann problem for an ideal gas.

Standard two-rarefaction/two-shock pressure function solved by Newton
iteration for the star pressure, then self-similar sampling.
"""

from __future__ import annotations

import math

import numpy as np


def _pressure_function(p, rho_k, p_k, c_k, gamma):
    if p > p_k:
        a = 2.0 / ((gamma + 1.0) * rho_k)
        b = (gamma - 1.0) / (gamma + 1.0) * p_k
        q = math.sqrt(a / (p + b))
        return (p - p_k) * q, q * (1.0 - 0.5 * (p - p_k) / (b + p))
    ratio = p / p_k
    f = 2.0 * c_k / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
    df = ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (rho_k * c_k)
    return f, df


def star_state(left, right, gamma=1.4, tol=1e-14, max_iter=100):
    """Star-region pressure and velocity for primitive states ``(rho, u, p)``."""
    rl, ul, pl = left
    rr, ur, pr = right
    cl = math.sqrt(gamma * pl / rl)
    cr = math.sqrt(gamma * pr / rr)
    if 2.0 * (cl + cr) / (gamma - 1.0) <= ur - ul:
        raise ValueError("initial data generate vacuum")
    p = max(0.5 * (pl + pr), 1e-12)
    for _ in range(max_iter):
        fl, dfl = _pressure_function(p, rl, pl, cl, gamma)
        fr, dfr = _pressure_function(p, rr, pr, cr, gamma)
        p_new = max(p - (fl + fr + ur - ul) / (dfl + dfr), 1e-14)
        if abs(p_new - p) <= tol * 0.5 * (p_new + p):
            p = p_new
            break
        p = p_new
    else:
        raise RuntimeError("star pressure iteration did not converge")
    fl, _ = _pressure_function(p, rl, pl, cl, gamma)
    fr, _ = _pressure_function(p, rr, pr, cr, gamma)
    return p, 0.5 * (ul + ur) + 0.5 * (fr - fl)


def sample(x, t, left, right, x0=0.0, gamma=1.4):
    """Primitive solution ``(rho, u, p)`` at positions ``x`` and time ``t > 0``."""
    rl, ul, pl = left
    rr, ur, pr = right
    p_star, u_star = star_state(left, right, gamma)
    cl = math.sqrt(gamma * pl / rl)
    cr = math.sqrt(gamma * pr / rr)
    g1 = (gamma - 1.0) / (gamma + 1.0)
    s = (np.asarray(x, dtype=float) - x0) / t
    rho = np.empty_like(s)
    u = np.empty_like(s)
    p = np.empty_like(s)

    for side in ("left", "right"):
        if side == "left":
            mask = s <= u_star
            rk, uk, pk, ck, sign = rl, ul, pl, cl, -1.0
        else:
            mask = s > u_star
            rk, uk, pk, ck, sign = rr, ur, pr, cr, 1.0
        ss = s[mask]
        r_out = np.empty_like(ss)
        u_out = np.empty_like(ss)
        p_out = np.empty_like(ss)
        if p_star > pk:  # shock
            r_star = rk * (p_star / pk + g1) / (g1 * p_star / pk + 1.0)
            speed = uk + sign * ck * math.sqrt(
                (gamma + 1.0) / (2.0 * gamma) * p_star / pk + (gamma - 1.0) / (2.0 * gamma)
            )
            outside = sign * (ss - speed) >= 0.0
            r_out[:] = np.where(outside, rk, r_star)
            u_out[:] = np.where(outside, uk, u_star)
            p_out[:] = np.where(outside, pk, p_star)
        else:  # rarefaction
            c_star = ck * (p_star / pk) ** ((gamma - 1.0) / (2.0 * gamma))
            r_star = rk * (p_star / pk) ** (1.0 / gamma)
            head = uk + sign * ck
            tail = u_star + sign * c_star
            outside = sign * (ss - head) >= 0.0
            inside = sign * (ss - tail) <= 0.0
            fan = ~(outside | inside)
            r_out[outside], u_out[outside], p_out[outside] = rk, uk, pk
            r_out[inside], u_out[inside], p_out[inside] = r_star, u_star, p_star
            sf = ss[fan]
            base = 2.0 / (gamma + 1.0) - sign * g1 / ck * (uk - sf)
            r_out[fan] = rk * base ** (2.0 / (gamma - 1.0))
            u_out[fan] = 2.0 / (gamma + 1.0) * (-sign * ck + (gamma - 1.0) / 2.0 * uk + sf)
            p_out[fan] = pk * base ** (2.0 * gamma / (gamma - 1.0))
        rho[mask], u[mask], p[mask] = r_out, u_out, p_out
    return rho, u, p


SOD_LEFT = (1.0, 0.0, 1.0)
SOD_RIGHT = (0.125, 0.0, 0.1)


def shock_position(left, right, t, x0=0.0, gamma=1.4) -> float:
    """Location of the right-moving shock (Sod-type data)."""
    rr, ur, pr = right
    p_star, _ = star_state(left, right, gamma)
    cr = math.sqrt(gamma * pr / rr)
    speed = ur + cr * math.sqrt((gamma + 1.0) / (2.0 * gamma) * p_star / pr + (gamma - 1.0) / (2.0 * gamma))
    return x0 + speed * t
