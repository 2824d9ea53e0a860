"""Hybrid DGSEM / FV-subcell compressible flow solver kit."""

from .basis import SpectralBasis, build_basis, modal_to_nodal, nodal_to_modal
from .blending import BlendingState, blending_coefficient, clip_and_propagate, indicator_energy, threshold
from .config import ConfigError, RunConfig, load_config, parse_config, render_config
from .euler import Gas, StateError, physical_flux, rusanov_flux, split_two_point_flux
from .mesh import CartesianMesh, dof_points
from .operators import BlendingParams, HybridOperator, dg_rhs, fv_rhs, hybrid_rhs
from .perf import PerfRecord, compute_pid, speedup_table
from .runner import RunResult, run_case
from .timestepping import rk_step

__version__ = "0.1.0"
