"""Case driver: builds the discretisation, runs the time loop, times it."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import cases
from .basis import SpectralBasis, build_basis
from .blending import BlendingState
from .config import RunConfig
from .euler import Gas, StateError
from .mesh import CartesianMesh, dof_points
from .operators import BlendingParams, HybridOperator
from .perf import PerfRecord
from .timestepping import RK_STAGES, cfl_time_step, rk_step

log = logging.getLogger(__name__)

DIAGNOSTICS_SCHEMA = "dgblend-diagnostics v1"
STATE_SCHEMA = "dgblend-state v1"


@dataclass
class RunResult:
    config: RunConfig
    basis: SpectralBasis
    mesh: CartesianMesh
    field: np.ndarray
    time: float
    steps: int
    blending: BlendingState
    perf: PerfRecord
    diagnostics: list[dict] = field(default_factory=list)
    max_alpha: float = 0.0
    max_alpha_step: int = 0
    rhs_evaluations: int = 0


def build_mesh(cfg: RunConfig) -> CartesianMesh:
    return CartesianMesh(tuple(cfg.elements), tuple(cfg.lower), tuple(cfg.upper), tuple(cfg.periodic))


def blending_params(cfg: RunConfig) -> BlendingParams:
    return BlendingParams(
        enabled=cfg.blending,
        sharpness=cfg.sharpness,
        alpha_min=cfg.alpha_min,
        alpha_max=cfg.alpha_max,
        propagate=cfg.propagate,
        force_alpha=cfg.force_alpha,
    )


def conserved_totals(u: np.ndarray, mesh: CartesianMesh, basis: SpectralBasis) -> np.ndarray:
    w = mesh.quadrature_weights(basis)
    return np.array([float(np.sum(u[v] * w)) for v in range(u.shape[0])])


def initial_field(cfg: RunConfig, mesh: CartesianMesh, basis: SpectralBasis) -> np.ndarray:
    return cases.CASES[cfg.case].initial(mesh, basis, cfg.gamma)


def exact_field(cfg: RunConfig, mesh: CartesianMesh, basis: SpectralBasis, t: float) -> np.ndarray:
    return cases.CASES[cfg.case].initial(mesh, basis, cfg.gamma, t)


class _Stepper:
    def __init__(self, cfg: RunConfig, op: HybridOperator):
        self.cfg = cfg
        self.op = op

    def dt(self, u, t):
        cfg = self.cfg
        if cfg.dt is not None:
            dt = cfg.dt
        else:
            b = self.op.basis
            dt = cfl_time_step(u, cfg.gamma, self.op.mesh.jacobian, b.degree, b.weights, b.nodes, cfg.cfl)
        if cfg.end_time is not None:
            dt = min(dt, cfg.end_time - t)
        return dt

    def done(self, step, t):
        cfg = self.cfg
        if cfg.steps is not None:
            return step >= cfg.steps
        return t >= cfg.end_time * (1.0 - 1e-14)


def _time_loop(cfg, op, u0, record: bool):
    stepper = _Stepper(cfg, op)
    u = u0
    t = 0.0
    step = 0
    elapsed = 0.0
    diagnostics = []
    peak = (0.0, 0)
    while not stepper.done(step, t):
        tic = time.perf_counter()
        dt = stepper.dt(u, t)
        try:
            u = rk_step(u, dt, op)
        except StateError as err:
            raise StateError(f"step {step + 1}: {err}", err.location, err.rho, err.p) from None
        elapsed += time.perf_counter() - tic
        step += 1
        t += dt
        if record:
            blend = op.last_blending
            if blend.max_alpha > peak[0]:
                peak = (blend.max_alpha, step)
            totals = conserved_totals(u, op.mesh, op.basis)
            diagnostics.append(
                {"step": step, "time": t, "dt": dt, "totals": totals,
                 "max_alpha": blend.max_alpha, "n_alpha_positive": blend.n_active}
            )
    return u, t, step, elapsed, diagnostics, peak


def run_case(cfg: RunConfig, *, threads: int | None = None, repeats: int | None = None,
             record: bool = True) -> RunResult:
    """Run one configuration and time its time loop.

    The timer covers only time-step selection and RK steps; setup, the
    untimed warm-up step, diagnostics and output are excluded. With
    several repeats the same initial data are advanced each time and the
    final field of the last repeat is returned.
    """
    threads = cfg.threads if threads is None else threads
    repeats = cfg.repeats if repeats is None else repeats
    basis = build_basis(cfg.degree)
    mesh = build_mesh(cfg)
    u0 = initial_field(cfg, mesh, basis)
    gas = Gas(cfg.gamma, cfg.prandtl)
    walls = []
    with HybridOperator(basis, mesh, gas, blending_params(cfg), threads) as op:
        # warm-up: one discarded step from the same initial data, so a
        # failure here is reported as a failure of step 1
        try:
            rk_step(u0, _Stepper(cfg, op).dt(u0, 0.0), op)
        except StateError as err:
            raise StateError(f"step 1: {err}", err.location, err.rho, err.p) from None
        op.n_evaluations = 0
        for rep in range(repeats):
            u, t, steps, elapsed, diags, peak = _time_loop(cfg, op, u0, record and rep == 0)
            walls.append(elapsed)
            log.info("repeat %d: %d steps to t=%.6g in %.4f s", rep, steps, t, elapsed)
            if rep == 0:
                diagnostics, first_peak, evaluations = diags, peak, op.n_evaluations
        final_blend = op.last_blending
    n_points = dof_points(mesh.n_elements, cfg.degree, mesh.dims)
    perf = PerfRecord(
        cores=threads, dof=n_points, steps=steps, rk_stages=RK_STAGES, repeats=walls,
        case=cfg.case, n_elements=mesh.n_elements, degree=cfg.degree,
        dof_vars=n_points * (mesh.dims + 2),
    )
    return RunResult(
        cfg, basis, mesh, u, t, steps, final_blend, perf, diagnostics,
        first_peak[0], first_peak[1], evaluations,
    )


def diagnostics_table(result: RunResult) -> tuple[list[str], list[list]]:
    dims = result.mesh.dims
    names = ["mass", "momentum_x", "momentum_y"][: 1 + dims] + ["energy"]
    header = ["step", "time", "dt"] + [f"total_{n}" for n in names] + ["max_alpha", "n_alpha_positive"]
    rows = [
        [d["step"], repr(d["time"]), repr(d["dt"])] + [repr(float(v)) for v in d["totals"]]
        + [repr(d["max_alpha"]), d["n_alpha_positive"]]
        for d in result.diagnostics
    ]
    return header, rows


def state_table(result: RunResult) -> tuple[list[str], list[list]]:
    """Node coordinates, conservative variables and element alpha, one row per node."""
    mesh, basis, u = result.mesh, result.basis, result.field
    dims = mesh.dims
    coords = mesh.node_coordinates(basis).reshape(dims, mesh.n_elements, -1)
    flat = u.reshape(u.shape[0], mesh.n_elements, -1)
    alpha = result.blending.alpha
    header = ["element"] + ["x", "y"][:dims] + ["rho", "rho_u", "rho_v"][: 1 + dims] + ["E", "alpha"]
    rows = []
    for e in range(mesh.n_elements):
        for i in range(flat.shape[2]):
            rows.append(
                [e] + [repr(float(c)) for c in coords[:, e, i]]
                + [repr(float(v)) for v in flat[:, e, i]] + [repr(float(alpha[e]))]
            )
    return header, rows
