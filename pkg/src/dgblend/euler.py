"""Ideal-gas compressible Euler algebra.

States are stored variables-first: ``U[0]`` density, ``U[1:1+dims]``
momentum, ``U[-1]`` total energy; any trailing axes are batch axes. All
flux routines are pure and broadcast over the batch axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class Gas:
    gamma: float = 1.4
    prandtl: float = 0.72


class StateError(ArithmeticError):
    """Non-physical state (rho <= 0 or p <= 0).

    ``location`` indexes the batch axes of the offending state; solver
    layers may translate it into element/node coordinates and add context.
    """

    def __init__(self, message: str, location: tuple = (), rho=None, p=None):
        super().__init__(message)
        self.location = location
        self.rho = rho
        self.p = p


class Primitives(NamedTuple):
    rho: np.ndarray
    vel: np.ndarray  # (dims, ...)
    p: np.ndarray
    h: np.ndarray  # total specific enthalpy (E + p) / rho
    c: np.ndarray  # speed of sound


def n_dims(u: np.ndarray) -> int:
    return u.shape[0] - 2


def to_primitives(u: np.ndarray, gamma: float, check: bool = True) -> Primitives:
    u = np.asarray(u, dtype=float)
    rho = u[0]
    vel = u[1:-1] / rho
    p = (gamma - 1.0) * (u[-1] - 0.5 * np.sum(u[1:-1] * vel, axis=0))
    if check:
        bad = ~((rho > 0.0) & (p > 0.0))
        if np.any(bad):
            loc = np.unravel_index(int(np.argmax(bad)), np.shape(bad)) if np.ndim(bad) else ()
            loc = tuple(int(i) for i in loc)
            r, q = float(np.asarray(rho)[loc]), float(np.asarray(p)[loc])
            raise StateError(
                f"non-physical state at {loc}: rho={r:.6g}, p={q:.6g}", loc, r, q
            )
    h = (u[-1] + p) / rho
    c = np.sqrt(np.abs(gamma * p / rho))
    return Primitives(rho, vel, p, h, c)


def from_primitives(rho, vel, p, gamma: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    vel = np.asarray(vel, dtype=float)
    p = np.asarray(p, dtype=float)
    shape = np.broadcast_shapes(rho.shape, vel.shape[1:], p.shape)
    dims = vel.shape[0]
    u = np.empty((dims + 2,) + shape)
    u[0] = rho
    u[1:-1] = rho * vel
    u[-1] = p / (gamma - 1.0) + 0.5 * rho * np.sum(vel * vel, axis=0)
    return u


def flux_from_primitives(u: np.ndarray, w: Primitives, direction: int) -> np.ndarray:
    vd = w.vel[direction]
    f = np.empty_like(u)
    f[0] = u[1 + direction]
    f[1:-1] = u[1 + direction] * w.vel
    f[1 + direction] += w.p
    f[-1] = vd * (u[-1] + w.p)
    return f


def physical_flux(u: np.ndarray, direction: int, gamma: float = 1.4) -> np.ndarray:
    """Euler flux ``(rho u_d, rho u_d u + p e_d, u_d (E + p))``."""
    u = np.asarray(u, dtype=float)
    return flux_from_primitives(u, to_primitives(u, gamma), direction)


def kep_flux_from_primitives(wl: Primitives, wr: Primitives, direction: int) -> np.ndarray:
    """Kinetic-energy-preserving two-point flux built from arithmetic means.

    ``f = ({rho}{u_d}, {rho}{u_d}{u} + {p} e_d, {rho}{u_d}{h})``: symmetric in
    its arguments and consistent with the physical flux.
    """
    rho = 0.5 * (wl.rho + wr.rho)
    vel = 0.5 * (wl.vel + wr.vel)
    p = 0.5 * (wl.p + wr.p)
    h = 0.5 * (wl.h + wr.h)
    mass = rho * vel[direction]
    dims = vel.shape[0]
    f = np.empty((dims + 2,) + mass.shape)
    f[0] = mass
    f[1:-1] = mass * vel
    f[1 + direction] += p
    f[-1] = mass * h
    return f


def split_two_point_flux(ul, ur, direction: int, gamma: float = 1.4) -> np.ndarray:
    wl = to_primitives(ul, gamma)
    wr = to_primitives(ur, gamma)
    return kep_flux_from_primitives(wl, wr, direction)


def rusanov_from_primitives(ul, ur, wl: Primitives, wr: Primitives, direction: int) -> np.ndarray:
    fl = flux_from_primitives(ul, wl, direction)
    fr = flux_from_primitives(ur, wr, direction)
    lam = np.maximum(np.abs(wl.vel[direction]) + wl.c, np.abs(wr.vel[direction]) + wr.c)
    return 0.5 * (fl + fr) - 0.5 * lam * (ur - ul)


def rusanov_flux(ul, ur, direction: int, gamma: float = 1.4) -> np.ndarray:
    """Local Lax-Friedrichs flux with ``lambda = max(|u_d| + c)`` over both states."""
    ul = np.asarray(ul, dtype=float)
    ur = np.asarray(ur, dtype=float)
    return rusanov_from_primitives(ul, ur, to_primitives(ul, gamma), to_primitives(ur, gamma), direction)


def max_wave_speed(u: np.ndarray, gamma: float, direction: int) -> float:
    w = to_primitives(u, gamma)
    return float(np.max(np.abs(w.vel[direction]) + w.c))
