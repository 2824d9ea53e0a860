"""Structured Cartesian meshes in one or two dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import SpectralBasis


@dataclass(frozen=True)
class CartesianMesh:
    """Uniform tensor-product mesh with flattened (C-order) element numbering.

    ``neighbors[e]`` lists ``(left_0, right_0, left_1, right_1, ...)``; a
    missing neighbor on a non-periodic boundary is ``-1``.
    """

    elements_per_axis: tuple[int, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    periodic: tuple[bool, ...]
    neighbors: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = len(self.elements_per_axis)
        if d not in (1, 2):
            raise ValueError(f"only 1D and 2D meshes are supported, got {d} axes")
        for name in ("lower", "upper", "periodic"):
            if len(getattr(self, name)) != d:
                raise ValueError(f"{name} must have {d} entries")
        if any(n < 1 for n in self.elements_per_axis):
            raise ValueError("elements per axis must be positive")
        if any(hi <= lo for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("upper bounds must exceed lower bounds")
        object.__setattr__(self, "neighbors", self._build_neighbors())

    @classmethod
    def uniform(cls, elements, lower=None, upper=None, periodic=True) -> CartesianMesh:
        elements = tuple(int(n) for n in np.atleast_1d(elements))
        d = len(elements)
        lower = tuple(float(v) for v in (np.zeros(d) if lower is None else np.broadcast_to(lower, d)))
        upper = tuple(float(v) for v in (np.ones(d) if upper is None else np.broadcast_to(upper, d)))
        periodic = tuple(bool(v) for v in np.broadcast_to(periodic, d))
        return cls(elements, lower, upper, periodic)

    @property
    def dims(self) -> int:
        return len(self.elements_per_axis)

    @property
    def n_elements(self) -> int:
        return int(np.prod(self.elements_per_axis))

    @property
    def element_size(self) -> tuple[float, ...]:
        return tuple(
            (hi - lo) / n for lo, hi, n in zip(self.lower, self.upper, self.elements_per_axis)
        )

    @property
    def jacobian(self) -> tuple[float, ...]:
        """Per-axis map factor ``dx/dxi`` from the reference interval."""
        return tuple(0.5 * h for h in self.element_size)

    def _build_neighbors(self) -> np.ndarray:
        shape = self.elements_per_axis
        idx = np.arange(self.n_elements).reshape(shape)
        out = np.empty((self.n_elements, 2 * self.dims), dtype=np.int64)
        for axis, n in enumerate(shape):
            for col, shift in ((2 * axis, 1), (2 * axis + 1, -1)):
                nb = np.roll(idx, shift, axis=axis)
                if not self.periodic[axis]:
                    edge = [slice(None)] * self.dims
                    edge[axis] = 0 if shift == 1 else n - 1
                    nb[tuple(edge)] = -1
                out[:, col] = nb.ravel()
        return out

    def element_origin(self) -> np.ndarray:
        """Lower corner of every element, shape ``(dims, K)``."""
        grids = [
            lo + h * np.arange(n)
            for lo, h, n in zip(self.lower, self.element_size, self.elements_per_axis)
        ]
        mesh = np.meshgrid(*grids, indexing="ij")
        return np.stack([g.ravel() for g in mesh])

    def node_coordinates(self, basis: SpectralBasis) -> np.ndarray:
        """Physical coordinates of all collocation nodes.

        Shape ``(dims, K, n)`` in 1D and ``(dims, K, n, n)`` in 2D, matching
        the solver's field layout.
        """
        origin = self.element_origin()
        ref = 0.5 * (basis.nodes + 1.0)
        n = basis.n_nodes
        if self.dims == 1:
            return (origin[0][:, None] + self.element_size[0] * ref[None, :])[None]
        x = origin[0][:, None, None] + self.element_size[0] * ref[None, :, None]
        y = origin[1][:, None, None] + self.element_size[1] * ref[None, None, :]
        k = self.n_elements
        return np.stack([np.broadcast_to(x, (k, n, n)), np.broadcast_to(y, (k, n, n))])

    def quadrature_weights(self, basis: SpectralBasis) -> np.ndarray:
        """Physical quadrature weight of each node (node shape only)."""
        w = basis.weights
        jac = self.jacobian
        if self.dims == 1:
            return w * jac[0]
        return np.outer(w, w) * jac[0] * jac[1]


def dof_points(n_elements: int, degree: int, dims: int) -> int:
    """Solution points, ``K * (N+1)**dims`` (e.g. 512 per element at N=7 in 3D)."""
    return int(n_elements) * (int(degree) + 1) ** int(dims)
