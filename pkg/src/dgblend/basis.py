"""Legendre-Gauss-Lobatto collocation on the reference interval [-1, 1].

A :class:`SpectralBasis` bundles everything the solver needs for a fixed
polynomial degree: nodes, quadrature weights, the collocation
differentiation matrix and the Legendre Vandermonde matrix (with its
inverse) used to move between nodal values and modal coefficients.
Build it once with :func:`build_basis` and share it read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_NEWTON_STEPS = 100
NEWTON_TOL = 1.0e-14


class BasisConstructionError(RuntimeError):
    """Node iteration failed to converge (a defect, not a user error)."""


def legendre_table(n: int, x: np.ndarray) -> np.ndarray:
    """Return ``P[k, i] = P_k(x_i)`` for ``k = 0..n`` via the three-term recursion."""
    x = np.asarray(x, dtype=float)
    table = np.empty((n + 1,) + x.shape)
    table[0] = 1.0
    if n >= 1:
        table[1] = x
    for k in range(2, n + 1):
        table[k] = ((2 * k - 1) * x * table[k - 1] - (k - 1) * table[k - 2]) / k
    return table


def lgl_nodes_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the (n+1)-point Lobatto rule.

    The nodes are the zeros of ``(1 - x**2) P_n'(x)``. Newton's method on that
    function has the closed-form step ``(x P_n - P_{n-1}) / ((n + 1) P_n)``,
    started from the Chebyshev-Lobatto points.
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    if n == 0:
        # single-subcell FV element: midpoint rule
        return np.zeros(1), np.full(1, 2.0)

    x = -np.cos(np.pi * np.arange(n + 1) / n)
    for _ in range(MAX_NEWTON_STEPS):
        p = legendre_table(n, x)
        step = (x * p[n] - p[n - 1]) / ((n + 1) * p[n])
        x = x - step
        if np.max(np.abs(step)) < NEWTON_TOL:
            break
    else:
        raise BasisConstructionError(
            f"LGL node iteration for N={n} did not converge in {MAX_NEWTON_STEPS} steps"
        )

    # symmetrise to remove roundoff asymmetry; endpoints are exact
    x = 0.5 * (x - x[::-1])
    x[0], x[-1] = -1.0, 1.0
    if n % 2 == 0:
        x[n // 2] = 0.0
    p_n = legendre_table(n, x)[n]
    w = 2.0 / (n * (n + 1) * p_n**2)
    return x, w


def differentiation_matrix(x: np.ndarray) -> np.ndarray:
    """Lagrange collocation derivative matrix ``D[i, j] = l_j'(x_i)``.

    Off-diagonal entries use barycentric weights; diagonal entries use the
    negative-sum trick so that ``D @ ones == 0`` holds to roundoff.
    """
    n = len(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    bary = 1.0 / np.prod(diff, axis=1)
    d = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    d[np.arange(n), np.arange(n)] = -d.sum(axis=1)
    return d


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    diff_matrix: np.ndarray
    vandermonde: np.ndarray
    inv_vandermonde: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.degree + 1

    @property
    def sbp_q(self) -> np.ndarray:
        """``diag(weights) @ diff_matrix``."""
        return self.weights[:, None] * self.diff_matrix

    @property
    def boundary_matrix(self) -> np.ndarray:
        b = np.zeros((self.n_nodes, self.n_nodes))
        b[0, 0] = -1.0
        b[-1, -1] = 1.0
        return b

    @property
    def subcell_faces(self) -> np.ndarray:
        """Reference coordinates of the FV subcell interfaces (N+2 values)."""
        return np.concatenate(([-1.0], -1.0 + np.cumsum(self.weights)))


def build_basis(n: int) -> SpectralBasis:
    """Construct the LGL basis of polynomial degree ``n``.

    ``n = 0`` yields a single midpoint node of weight 2, which turns the
    solver into a plain first-order finite-volume scheme; use ``n >= 1``
    for DG.
    """
    x, w = lgl_nodes_weights(n)
    d = differentiation_matrix(x) if n > 0 else np.zeros((1, 1))
    v = legendre_table(n, x).T
    v_inv = np.linalg.inv(v)
    arrays = (x, w, d, v, v_inv)
    for a in arrays:
        a.setflags(write=False)
    return SpectralBasis(n, *arrays)


def nodal_to_modal(basis: SpectralBasis, u: np.ndarray) -> np.ndarray:
    """Legendre coefficients ``m`` with ``u_i = sum_j m_j P_j(x_i)``.

    Works on the first axis, so ``u`` may carry trailing batch axes.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[0] != basis.n_nodes:
        raise ValueError(f"expected {basis.n_nodes} nodal values, got {u.shape[0]}")
    return np.tensordot(basis.inv_vandermonde, u, axes=(1, 0))


def modal_to_nodal(basis: SpectralBasis, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape[0] != basis.n_nodes:
        raise ValueError(f"expected {basis.n_nodes} coefficients, got {m.shape[0]}")
    return np.tensordot(basis.vandermonde, m, axes=(1, 0))
