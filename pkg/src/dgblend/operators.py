"""Split-form DGSEM, first-order FV subcell operator and their convex blend.

Fields are stored variables-first with flattened elements: ``(nvar, K, n)``
in 1D and ``(nvar, K, n, n)`` in 2D, where ``n = N + 1`` and node axes run
along x then y. Both operators share one Rusanov flux at element faces, so
only the volume contributions differ between them and the blend stays
conservative.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import euler
from .basis import SpectralBasis
from .blending import (
    ALPHA_MAX,
    ALPHA_MIN,
    DEFAULT_SHARPNESS,
    BlendingState,
    blending_coefficient,
    clip_and_propagate,
    indicator_energy,
    indicator_variable,
    threshold,
)
from .euler import Gas, Primitives, StateError
from .mesh import CartesianMesh


@dataclass(frozen=True)
class BlendingParams:
    enabled: bool = True
    sharpness: float = DEFAULT_SHARPNESS
    alpha_min: float = ALPHA_MIN
    alpha_max: float = ALPHA_MAX
    propagate: bool = True
    # bypasses indicator and clipping entirely when set (scalar or per element)
    force_alpha: float | np.ndarray | None = None


def _take(w: Primitives, index) -> Primitives:
    return Primitives(w.rho[index], w.vel[(slice(None),) + index], w.p[index], w.h[index], w.c[index])


def _elements_last(w: Primitives) -> Primitives:
    """Move the element axis innermost so pairwise broadcasts run over long contiguous loops."""
    return Primitives(
        np.ascontiguousarray(np.moveaxis(w.rho, 0, -1)),
        np.ascontiguousarray(np.moveaxis(w.vel, 1, -1)),
        np.ascontiguousarray(np.moveaxis(w.p, 0, -1)),
        np.ascontiguousarray(np.moveaxis(w.h, 0, -1)),
        np.ascontiguousarray(np.moveaxis(w.c, 0, -1)),
    )


def _expand(w: Primitives, axis: int) -> Primitives:
    return Primitives(
        np.expand_dims(w.rho, axis),
        np.expand_dims(w.vel, axis + 1),
        np.expand_dims(w.p, axis),
        np.expand_dims(w.h, axis),
        np.expand_dims(w.c, axis),
    )


def _node_slice(ndim: int, axis: int, index) -> tuple:
    """Index tuple selecting ``index`` on node axis ``axis`` of an (nvar, K, nodes...) array."""
    sl = [slice(None)] * ndim
    sl[2 + axis] = index
    return tuple(sl)


class HybridOperator:
    """Semi-discrete right-hand side ``U_t = alpha U_t^FV + (1 - alpha) U_t^DG``.

    Work is split into contiguous element chunks, one per worker thread. A
    call runs in two phases separated by a barrier: first every chunk
    validates its states, evaluates the indicator and computes the Rusanov
    flux on its elements' right faces; then every chunk assembles its own
    time derivative from a read-only snapshot of those face fluxes. Each
    element is always processed by the same code path, so the result does
    not depend on the thread count.
    """

    def __init__(
        self,
        basis: SpectralBasis,
        mesh: CartesianMesh,
        gas: Gas = Gas(),
        blending: BlendingParams | None = BlendingParams(),
        threads: int = 1,
    ):
        self.basis = basis
        self.mesh = mesh
        self.gas = gas
        self.blending = blending if blending is not None else BlendingParams(enabled=False)
        self.threads = max(1, int(threads))
        self.n_evaluations = 0
        self.last_blending: BlendingState | None = None

        dims = mesh.dims
        n = basis.n_nodes
        self.nvar = dims + 2
        self.field_shape = (self.nvar, mesh.n_elements) + (n,) * dims
        self.chunks = [
            (int(c[0]), int(c[-1]) + 1)
            for c in np.array_split(np.arange(mesh.n_elements), min(self.threads, mesh.n_elements))
        ]
        self._pool = ThreadPoolExecutor(self.threads) if self.threads > 1 else None

        # 2 D_ij contracted over the pair axes of a two-point flux array
        self._two_d = 2.0 * basis.diff_matrix
        letters = "abcdefgh"
        node_letters = letters[:dims]
        self._volume_subscripts = []
        for axis in range(dims):
            pair = node_letters[:axis] + "ij" + node_letters[axis + 1 :]
            out = node_letters[:axis] + "i" + node_letters[axis + 1 :]
            self._volume_subscripts.append(f"ij,v{pair}k->v{out}k")

        w = basis.weights
        self._inv_w = 1.0 / w
        self._jac = mesh.jacobian
        self._sharp = self.blending.sharpness
        self._threshold = threshold(basis.degree)

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _map(self, fn):
        if self._pool is None:
            return [fn(lo, hi) for lo, hi in self.chunks]
        return list(self._pool.map(lambda c: fn(*c), self.chunks))

    # ------------------------------------------------------------------ phase 1

    def _primitives(self, u, lo, hi) -> Primitives:
        try:
            return euler.to_primitives(u[:, lo:hi], self.gas.gamma)
        except StateError as err:
            elem = lo + err.location[0]
            node = err.location[1:]
            raise StateError(
                f"non-physical state in element {elem} at node {node}: rho={err.rho:.6g}, p={err.p:.6g}",
                (elem,) + node,
                err.rho,
                err.p,
            ) from None

    def _right_face_flux(self, u, axis, lo, hi):
        ndim = u.ndim
        gamma = self.gas.gamma
        ul = u[(slice(None), slice(lo, hi)) + _node_slice(ndim, axis, -1)[2:]]
        right = self.mesh.neighbors[lo:hi, 2 * axis + 1]
        ur = u[_node_slice(ndim, axis, 0)][:, np.maximum(right, 0)]
        boundary = right < 0
        if np.any(boundary):
            ur = ur.copy()
            ur[:, boundary] = ul[:, boundary]
        wl = euler.to_primitives(ul, gamma, check=False)
        wr = euler.to_primitives(ur, gamma, check=False)
        return euler.rusanov_from_primitives(ul, ur, wl, wr, axis)

    def _left_face_flux(self, u, faces, axis, lo, hi):
        left = self.mesh.neighbors[lo:hi, 2 * axis]
        flux = faces[axis][:, np.maximum(left, 0)]
        boundary = left < 0
        if np.any(boundary):
            ut = u[(slice(None), slice(lo, hi)) + _node_slice(u.ndim, axis, 0)[2:]]
            flux[:, boundary] = euler.physical_flux(ut[:, boundary], axis, self.gas.gamma)
        return flux

    # ------------------------------------------------------------------ volume terms

    def _dg_chunk(self, u_c, w_c, fl, fr):
        """DG time derivative for one element chunk, given its face fluxes per axis."""
        du = np.zeros_like(u_c)
        ndim = u_c.ndim
        w_t = _elements_last(w_c)
        for axis in range(self.mesh.dims):
            wi = _expand(w_t, axis + 1)
            wj = _expand(w_t, axis)
            pair = euler.kep_flux_from_primitives(wi, wj, axis)
            vol = np.moveaxis(np.einsum(self._volume_subscripts[axis], self._two_d, pair), -1, 1)
            f_node = euler.flux_from_primitives(u_c, w_c, axis)
            last = _node_slice(ndim, axis, -1)
            first = _node_slice(ndim, axis, 0)
            vol[last] += (fr[axis] - f_node[last]) * self._inv_w[-1]
            vol[first] -= (fl[axis] - f_node[first]) * self._inv_w[0]
            du -= vol / self._jac[axis]
        return du

    def _fv_chunk(self, u_c, w_c, fl, fr):
        """First-order FV subcell time derivative, subcell widths = LGL weights."""
        du = np.zeros_like(u_c)
        ndim = u_c.ndim
        w = self.basis.weights
        for axis in range(self.mesh.dims):
            lo_sl = _node_slice(ndim, axis, slice(None, -1))
            hi_sl = _node_slice(ndim, axis, slice(1, None))
            interior = euler.rusanov_from_primitives(
                u_c[lo_sl], u_c[hi_sl], _take(w_c, lo_sl[1:]), _take(w_c, hi_sl[1:]), axis
            )
            f = np.concatenate(
                [np.expand_dims(fl[axis], 2 + axis), interior, np.expand_dims(fr[axis], 2 + axis)],
                axis=2 + axis,
            )
            diff = np.diff(f, axis=2 + axis)
            shape = [1] * ndim
            shape[2 + axis] = -1
            du -= diff / (self._jac[axis] * w.reshape(shape))
        return du

    # ------------------------------------------------------------------ driver

    def _blending_from_energy(self, energy: np.ndarray) -> np.ndarray:
        p = self.blending
        if p.force_alpha is not None:
            return np.broadcast_to(np.asarray(p.force_alpha, dtype=float), energy.shape).copy()
        if not p.enabled:
            return np.zeros_like(energy)
        raw = blending_coefficient(energy, self.basis.degree, p.sharpness)
        return clip_and_propagate(raw, self.mesh.neighbors, p.alpha_min, p.alpha_max, p.propagate)

    def evaluate(self, u: np.ndarray, mode: str = "hybrid") -> np.ndarray:
        """Time derivative of ``u``; ``mode`` is ``"hybrid"``, ``"dg"`` or ``"fv"``."""
        u = np.asarray(u, dtype=float)
        if u.shape != self.field_shape:
            raise ValueError(f"field shape {u.shape} does not match operator {self.field_shape}")
        dims = self.mesh.dims
        need_indicator = (
            mode == "hybrid" and self.blending.enabled and self.blending.force_alpha is None
        )
        k = self.mesh.n_elements
        prims: dict[int, Primitives] = {}
        energy = np.zeros(k)
        faces = [np.empty((self.nvar, k) + (self.basis.n_nodes,) * (dims - 1)) for _ in range(dims)]

        def phase1(lo, hi):
            w_c = self._primitives(u, lo, hi)
            prims[lo] = w_c
            if need_indicator:
                u_c = u[:, lo:hi]
                energy[lo:hi] = indicator_energy(self.basis, indicator_variable(u_c, self.gas.gamma))
            for axis in range(dims):
                faces[axis][:, lo:hi] = self._right_face_flux(u, axis, lo, hi)

        self._map(phase1)

        if mode == "hybrid":
            alpha = self._blending_from_energy(energy)
        elif mode == "fv":
            alpha = np.ones(k)
        else:
            alpha = np.zeros(k)
        self.last_blending = BlendingState(alpha, energy, self._threshold, self._sharp)

        out = np.empty_like(u)

        def phase2(lo, hi):
            u_c = u[:, lo:hi]
            w_c = prims[lo]
            fl = [self._left_face_flux(u, faces, a, lo, hi) for a in range(dims)]
            fr = [faces[a][:, lo:hi] for a in range(dims)]
            a_c = alpha[lo:hi]
            if mode == "fv":
                out[:, lo:hi] = self._fv_chunk(u_c, w_c, fl, fr)
                return
            du = self._dg_chunk(u_c, w_c, fl, fr)
            sel = np.flatnonzero(a_c)
            if sel.size:
                idx = (sel,)
                du_fv = self._fv_chunk(
                    u_c[:, sel],
                    _take(w_c, idx),
                    [f[:, sel] for f in fl],
                    [f[:, sel] for f in fr],
                )
                a = a_c[sel].reshape((1, -1) + (1,) * dims)
                du[:, sel] = a * du_fv + (1.0 - a) * du[:, sel]
            out[:, lo:hi] = du

        self._map(phase2)
        self.n_evaluations += 1
        return out

    __call__ = evaluate


def dg_rhs(basis, mesh, field, gas: Gas = Gas()) -> np.ndarray:
    with HybridOperator(basis, mesh, gas, None) as op:
        return op.evaluate(field, "dg")


def fv_rhs(basis, mesh, field, gas: Gas = Gas()) -> np.ndarray:
    with HybridOperator(basis, mesh, gas, None) as op:
        return op.evaluate(field, "fv")


def hybrid_rhs(basis, mesh, field, blending: BlendingParams | BlendingState, gas: Gas = Gas()):
    """Blended time derivative; a :class:`BlendingState` pins the per-element alpha."""
    if isinstance(blending, BlendingState):
        blending = BlendingParams(force_alpha=np.asarray(blending.alpha, dtype=float))
    with HybridOperator(basis, mesh, gas, blending) as op:
        return op.evaluate(field, "hybrid")
