"""Initial conditions and reference solutions for the built-in cases."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import euler, riemann
from .basis import SpectralBasis
from .mesh import CartesianMesh

FREESTREAM_VELOCITY = (1.0, 0.5)
VORTEX_STRENGTH = 5.0
VORTEX_VELOCITY = (1.0, 1.0)


def freestream(mesh: CartesianMesh, basis: SpectralBasis, gamma: float, t: float = 0.0) -> np.ndarray:
    """Uniform state rho = 1, p = 1/gamma (unit sound speed)."""
    x = mesh.node_coordinates(basis)
    shape = x.shape[1:]
    vel = np.stack([np.full(shape, v) for v in FREESTREAM_VELOCITY[: mesh.dims]])
    return euler.from_primitives(np.ones(shape), vel, np.full(shape, 1.0 / gamma), gamma)


def sod_interface(mesh: CartesianMesh) -> float:
    return 0.5 * (mesh.lower[0] + mesh.upper[0])


def sod(mesh: CartesianMesh, basis: SpectralBasis, gamma: float, t: float = 0.0) -> np.ndarray:
    """Sod shock tube along x; the jump sits at the domain midpoint.

    For ``t > 0`` this returns the exact solution of the single-interface
    Riemann problem, which is the true solution only while no wave has
    reached the boundary (or a periodic partner).
    """
    x = mesh.node_coordinates(basis)
    x0 = sod_interface(mesh)
    if t > 0.0:
        rho, u, p = riemann.sample(x[0], t, riemann.SOD_LEFT, riemann.SOD_RIGHT, x0, gamma)
    else:
        left = x[0] < x0
        rho = np.where(left, riemann.SOD_LEFT[0], riemann.SOD_RIGHT[0])
        u = np.zeros_like(rho)
        p = np.where(left, riemann.SOD_LEFT[2], riemann.SOD_RIGHT[2])
    vel = np.stack([u] + [np.zeros_like(u)] * (mesh.dims - 1))
    return euler.from_primitives(rho, vel, p, gamma)


def isentropic_vortex(mesh: CartesianMesh, basis: SpectralBasis, gamma: float, t: float = 0.0) -> np.ndarray:
    """Isentropic vortex advected with velocity (1, 1) through a periodic box.

    Exact at any ``t``: the initial profile translated, using the nearest
    periodic image of the vortex center.
    """
    if mesh.dims != 2:
        raise ValueError("the isentropic vortex case needs a 2D mesh")
    x = mesh.node_coordinates(basis)
    beta = VORTEX_STRENGTH
    rel = []
    for axis in range(2):
        length = mesh.upper[axis] - mesh.lower[axis]
        center = 0.5 * (mesh.lower[axis] + mesh.upper[axis]) + VORTEX_VELOCITY[axis] * t
        d = x[axis] - center
        rel.append(d - length * np.round(d / length))
    dx, dy = rel
    r2 = dx**2 + dy**2
    bump = np.exp(0.5 * (1.0 - r2))
    du = -beta / (2.0 * math.pi) * bump * dy
    dv = beta / (2.0 * math.pi) * bump * dx
    temp = 1.0 - (gamma - 1.0) * beta**2 / (8.0 * gamma * math.pi**2) * bump**2
    rho = temp ** (1.0 / (gamma - 1.0))
    p = rho**gamma
    vel = np.stack([VORTEX_VELOCITY[0] + du, VORTEX_VELOCITY[1] + dv])
    return euler.from_primitives(rho, vel, p, gamma)


@dataclass(frozen=True)
class Case:
    name: str
    description: str
    initial: Callable | None
    dims: tuple[int, ...]
    exact: bool = False


CASES = {
    "freestream": Case("freestream", "uniform flow on a periodic Cartesian mesh (scaling protocol)", freestream, (1, 2), True),
    "sod": Case("sod", "Sod shock tube, exact Riemann reference", sod, (1, 2), True),
    "vortex": Case("vortex", "2D isentropic vortex, exact translated reference", isentropic_vortex, (2,), True),
    "wall-model-sweep": Case("wall-model-sweep", "u+/y+ curves for Spalding, van Driest and edge-form models", None, ()),
    "scaling-campaign": Case("scaling-campaign", "freestream strong-scaling matrix over meshes and thread counts", None, ()),
}

SOLVER_CASES = ("freestream", "sod", "vortex")
