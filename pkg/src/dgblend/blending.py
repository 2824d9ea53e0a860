"""Modal shock indicator and the FV/DG blending coefficient."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import SpectralBasis

DEFAULT_SHARPNESS = math.log(9999.0)
ALPHA_MIN = 0.01
ALPHA_MAX = 0.7


@dataclass
class BlendingState:
    alpha: np.ndarray  # per element, in [0, 1]
    energy: np.ndarray  # per element, in [0, 1]
    threshold: float
    sharpness: float

    @property
    def max_alpha(self) -> float:
        return float(self.alpha.max()) if self.alpha.size else 0.0

    @property
    def n_active(self) -> int:
        return int(np.count_nonzero(self.alpha))


def threshold(degree: int) -> float:
    """Indicator threshold ``0.5 * 10**(-1.8 * (N+1)**0.25)``."""
    return 0.5 * 10.0 ** (-1.8 * (degree + 1) ** 0.25)


def indicator_variable(u: np.ndarray, gamma: float) -> np.ndarray:
    """Density times pressure, evaluated nodewise."""
    rho = u[0]
    kinetic = 0.5 * np.sum(u[1:-1] ** 2, axis=0) / rho
    return rho * (gamma - 1.0) * (u[-1] - kinetic)


def _line_energy(basis: SpectralBasis, values: np.ndarray, axis: int) -> np.ndarray:
    v = np.moveaxis(values, axis, 0)
    m2 = np.tensordot(basis.inv_vandermonde, v, axes=(1, 0)) ** 2
    cum = np.cumsum(m2, axis=0)
    n = basis.degree
    energy = np.zeros(v.shape[1:])
    # j = 0 would always give 1, so the N=1 case only looks at the top mode
    for j in range(max(n - 1, 1), n + 1):
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(cum[j] > 0.0, m2[j] / cum[j], 0.0)
        energy = np.maximum(energy, ratio)
    flat = np.ptp(v, axis=0) == 0.0
    energy[flat] = 0.0
    return energy


def indicator_energy(basis: SpectralBasis, values: np.ndarray) -> np.ndarray:
    """Highest-mode energy fraction per element.

    ``values`` holds the indicator variable with shape ``(K, n)`` or
    ``(K, n, n)``. For each 1D line the Legendre coefficients ``m`` are
    formed and ``max_{j in {N-1, N}} m_j**2 / sum_{k<=j} m_k**2`` taken; in
    2D the maximum runs over all x- and y-lines of the element.
    """
    values = np.asarray(values, dtype=float)
    if basis.degree < 1:
        return np.zeros(values.shape[0])
    k = values.shape[0]
    energy = np.zeros(k)
    for axis in range(1, values.ndim):
        e = _line_energy(basis, values, axis)
        energy = np.maximum(energy, e.reshape(k, -1).max(axis=1))
    return np.clip(energy, 0.0, 1.0)


def blending_coefficient(energy, degree: int, sharpness: float = DEFAULT_SHARPNESS):
    """Raw blending coefficient ``1 / (1 + exp(-s/T (E - T)))``."""
    t = threshold(degree)
    return 1.0 / (1.0 + np.exp(-sharpness / t * (np.asarray(energy, dtype=float) - t)))


def clip_and_propagate(
    raw_alpha: np.ndarray,
    neighbors: np.ndarray,
    alpha_min: float = ALPHA_MIN,
    alpha_max: float = ALPHA_MAX,
    propagate: bool = True,
) -> np.ndarray:
    """Cap at ``alpha_max``, spread half the neighbor maximum, then zero values below ``alpha_min``.

    Propagation is one pass that reads only pre-propagation values.
    """
    alpha = np.minimum(np.asarray(raw_alpha, dtype=float), alpha_max)
    if propagate and neighbors.size:
        padded = np.append(alpha, 0.0)  # index -1 (no neighbor) reads 0
        nb_max = padded[neighbors].max(axis=1)
        alpha = np.maximum(alpha, 0.5 * nb_max)
    alpha[alpha < alpha_min] = 0.0
    return alpha
