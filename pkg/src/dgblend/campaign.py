"""Freestream strong-scaling campaign over meshes and thread counts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .config import RunConfig
from .io import write_csv_atomic
from .mesh import dof_points
from .perf import PERF_HEADER, PERF_SCHEMA_VERSION, PerfRecord, perf_rows, speedup_table
from .runner import run_case
from .timestepping import RK_STAGES

log = logging.getLogger(__name__)


@dataclass
class CampaignResult:
    records: list[PerfRecord]
    # max |u_parallel - u_serial| per (n_elements, cores) cell
    parity: dict[tuple[int, int], float] = field(default_factory=dict)

    def speedups(self):
        return speedup_table(self.records)


def scaling_campaign(cfg: RunConfig) -> CampaignResult:
    """Run every (mesh, cores) cell of the campaign matrix sequentially.

    Each mesh is first solved serially as the parity reference. Cells with
    more cores than elements are recorded as skipped, since an element is
    never split between workers.
    """
    meshes = cfg.campaign_meshes or (tuple(cfg.elements),)
    cores_list = cfg.campaign_cores or (cfg.threads,)
    records = []
    parity = {}
    for shape in meshes:
        mesh_cfg = replace(cfg, elements=tuple(shape))
        n_elem = int(np.prod(shape))
        reference = run_case(mesh_cfg, threads=1, repeats=1, record=False).field
        for cores in cores_list:
            points = dof_points(n_elem, cfg.degree, len(shape))
            if cores > n_elem:
                log.warning("skipping %d cores on %d elements", cores, n_elem)
                records.append(PerfRecord(
                    cores=cores, dof=points, steps=cfg.steps or 0, rk_stages=RK_STAGES,
                    case=cfg.case, n_elements=n_elem, degree=cfg.degree,
                    dof_vars=points * (len(shape) + 2), skipped=True,
                ))
                continue
            result = run_case(mesh_cfg, threads=cores, repeats=cfg.repeats, record=False)
            parity[(n_elem, cores)] = float(np.max(np.abs(result.field - reference)))
            records.append(result.perf)
            log.info("%d elements, %d cores: mean %.4f s, PID %.3e s",
                     n_elem, cores, result.perf.wall_clock, result.perf.pid)
    return CampaignResult(records, parity)


def write_perf_csv(path, records: list[PerfRecord]):
    return write_csv_atomic(path, PERF_HEADER.split(","), perf_rows(records), PERF_SCHEMA_VERSION)


SPEEDUP_SCHEMA = "dgblend-speedup v1"
SPEEDUP_HEADER = ("n_elements", "cores", "wall_clock_mean_s", "wall_clock_min_s", "wall_clock_max_s", "speedup", "ideal")


def write_speedup_csv(path, records: list[PerfRecord]):
    rows = [
        [r.n_elements, r.cores, repr(r.mean), repr(r.min), repr(r.max), repr(r.speedup), repr(r.ideal)]
        for r in speedup_table(records)
    ]
    return write_csv_atomic(path, SPEEDUP_HEADER, rows, SPEEDUP_SCHEMA)
