"""Performance index (PID) bookkeeping and strong-scaling speedup tables."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
import statistics

PERF_SCHEMA_VERSION = "dgblend-perf v1"
PERF_COLUMNS = (
    "case",
    "n_elements",
    "N",
    "dof_points",
    "cores",
    "steps",
    "rk_stages",
    "repeat_idx",
    "wall_clock_s",
    "pid_s",
    "speedup",
)
PERF_HEADER = ",".join(PERF_COLUMNS)


class PerfValidationError(ValueError):
    pass


@dataclass
class PerfRecord:
    """One timed configuration; ``repeats`` holds the wall clock of every repeat.

    ``dof`` counts solution points (``K (N+1)**dims``); ``dof_vars`` counts
    points times conserved variables.
    """

    cores: int
    dof: int
    steps: int
    rk_stages: int
    repeats: list[float] = field(default_factory=list)
    case: str = ""
    n_elements: int = 0
    degree: int = 0
    dof_vars: int = 0
    skipped: bool = False

    @property
    def wall_clock(self) -> float:
        return statistics.fmean(self.repeats)

    @property
    def wall_clock_min(self) -> float:
        return min(self.repeats)

    @property
    def wall_clock_max(self) -> float:
        return max(self.repeats)

    @property
    def pid(self) -> float:
        return compute_pid(self)


def pid_value(wall_clock: float, cores: int, dof: int, steps: int, rk_stages: int) -> float:
    """``wall_clock * cores / (dof * steps * rk_stages)``, correctly rounded."""
    for name, v in (("wall_clock", wall_clock), ("cores", cores), ("dof", dof), ("steps", steps), ("rk_stages", rk_stages)):
        if not v > 0:
            raise PerfValidationError(f"{name} must be positive, got {v}")
    return float(Fraction(wall_clock) * cores / (int(dof) * int(steps) * int(rk_stages)))


def compute_pid(record: PerfRecord) -> float:
    """Seconds per point-DOF per RK stage, from the mean wall clock; smaller is better."""
    if not record.repeats:
        raise PerfValidationError("record has no timed repeats")
    return pid_value(record.wall_clock, record.cores, record.dof, record.steps, record.rk_stages)


@dataclass(frozen=True)
class SpeedupRow:
    n_elements: int
    cores: int
    mean: float
    min: float
    max: float
    speedup: float
    ideal: float


def speedup_table(records: list[PerfRecord]) -> list[SpeedupRow]:
    """Speedup per mesh size relative to the smallest core count of that size.

    Records are grouped by element count; within a group dof, steps and
    RK stages must agree. Skipped records are ignored.
    """
    groups: dict[int, list[PerfRecord]] = defaultdict(list)
    for r in records:
        if not r.skipped:
            groups[r.n_elements].append(r)
    rows = []
    problems = []
    for n_elem in sorted(groups):
        group = sorted(groups[n_elem], key=lambda r: r.cores)
        ref = group[0]
        for r in group[1:]:
            for attr in ("dof", "steps", "rk_stages"):
                if getattr(r, attr) != getattr(ref, attr):
                    problems.append(
                        f"mesh with {n_elem} elements: {attr} differs "
                        f"({getattr(ref, attr)} at {ref.cores} cores vs {getattr(r, attr)} at {r.cores} cores)"
                    )
        base = ref.wall_clock
        for r in group:
            rows.append(
                SpeedupRow(
                    n_elem, r.cores, r.wall_clock, r.wall_clock_min, r.wall_clock_max,
                    base / r.wall_clock, r.cores / ref.cores,
                )
            )
    if problems:
        raise PerfValidationError("inconsistent scaling groups:\n  " + "\n  ".join(problems))
    return rows


def perf_rows(records: list[PerfRecord]) -> list[list]:
    """Long-format CSV rows (one per repeat) matching :data:`PERF_COLUMNS`.

    Skipped cells produce one row with ``repeat_idx = -1`` and empty timings.
    """
    speed = {(row.n_elements, row.cores): row.speedup for row in speedup_table(records)}
    out = []
    for r in records:
        head = [r.case, r.n_elements, r.degree, r.dof, r.cores, r.steps, r.rk_stages]
        if r.skipped:
            out.append(head + [-1, "", "", ""])
            continue
        s = speed[(r.n_elements, r.cores)]
        for i, wall in enumerate(r.repeats):
            pid = pid_value(wall, r.cores, r.dof, r.steps, r.rk_stages)
            out.append(head + [i, repr(wall), repr(pid), repr(s)])
    return out
