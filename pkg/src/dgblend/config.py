"""Run configuration: a small sectioned ``key = value`` format.

Example::

    [case]
    name = sod

    [mesh]
    elements = 64
    lower = 0.0
    upper = 1.0
    periodic = false

    [discretization]
    degree = 4

    [time]
    end_time = 0.2

Comments start with ``#`` or ``;``. Every problem found is reported, not
just the first; unknown sections or keys are errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any, Callable

from .cases import SOLVER_CASES


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


@dataclass(frozen=True)
class RunConfig:
    case: str
    elements: tuple[int, ...]
    degree: int
    lower: tuple[float, ...] = (0.0,)
    upper: tuple[float, ...] = (1.0,)
    periodic: tuple[bool, ...] = (True,)
    gamma: float = 1.4
    prandtl: float = 0.72
    cfl: float = 0.5
    dt: float | None = None
    steps: int | None = None
    end_time: float | None = None
    blending: bool = True
    sharpness: float = math.log(9999.0)
    alpha_min: float = 0.01
    alpha_max: float = 0.7
    propagate: bool = True
    force_alpha: float | None = None
    threads: int = 1
    repeats: int = 1
    output_dir: str = "."
    state_file: str = "state.csv"
    diagnostics_file: str = "diagnostics.csv"
    perf_file: str = "perf.csv"
    campaign_meshes: tuple[tuple[int, ...], ...] = ()
    campaign_cores: tuple[int, ...] = ()

    def __post_init__(self):
        # broadcast single-valued per-axis entries to the mesh dimension
        d = len(self.elements)
        for name in ("lower", "upper", "periodic"):
            value = getattr(self, name)
            if len(value) == 1 and d > 1:
                object.__setattr__(self, name, value * d)

    @property
    def dims(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------- value codecs


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _list(item: Callable) -> Callable:
    def parse(text: str):
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(not p for p in parts):
            raise ValueError(f"expected a comma-separated list, got {text!r}")
        return tuple(item(p) for p in parts)

    return parse


def _mesh_shape(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.lower().split("x"))


def _optional(item: Callable) -> Callable:
    def parse(text: str):
        return None if text.strip().lower() in ("", "none") else item(text)

    return parse


def _render(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ", ".join("x".join(str(n) for n in shape) for shape in value)
        return ", ".join(_render(v) for v in value)
    return str(value)


# (section, key) -> (field name, parser)
SCHEMA: dict[tuple[str, str], tuple[str, Callable]] = {
    ("case", "name"): ("case", str.strip),
    ("mesh", "elements"): ("elements", _list(int)),
    ("mesh", "lower"): ("lower", _list(float)),
    ("mesh", "upper"): ("upper", _list(float)),
    ("mesh", "periodic"): ("periodic", _list(_bool)),
    ("discretization", "degree"): ("degree", int),
    ("gas", "gamma"): ("gamma", float),
    ("gas", "prandtl"): ("prandtl", float),
    ("time", "cfl"): ("cfl", float),
    ("time", "dt"): ("dt", _optional(float)),
    ("time", "steps"): ("steps", _optional(int)),
    ("time", "end_time"): ("end_time", _optional(float)),
    ("blending", "enabled"): ("blending", _bool),
    ("blending", "sharpness"): ("sharpness", float),
    ("blending", "alpha_min"): ("alpha_min", float),
    ("blending", "alpha_max"): ("alpha_max", float),
    ("blending", "propagate"): ("propagate", _bool),
    ("blending", "force_alpha"): ("force_alpha", _optional(float)),
    ("run", "threads"): ("threads", int),
    ("run", "repeats"): ("repeats", int),
    ("output", "directory"): ("output_dir", str.strip),
    ("output", "state"): ("state_file", str.strip),
    ("output", "diagnostics"): ("diagnostics_file", str.strip),
    ("output", "perf"): ("perf_file", str.strip),
    ("campaign", "meshes"): ("campaign_meshes", _list(_mesh_shape)),
    ("campaign", "cores"): ("campaign_cores", _list(int)),
}
REQUIRED = (("case", "name"), ("mesh", "elements"), ("discretization", "degree"))


def validate(cfg: RunConfig) -> list[str]:
    """Semantic checks; returns every violation found."""
    errors = []
    if cfg.case not in SOLVER_CASES:
        errors.append(f"[case] name: unknown case {cfg.case!r} (expected one of {', '.join(SOLVER_CASES)})")
    if cfg.dims not in (1, 2):
        errors.append(f"[mesh] elements: 1 or 2 axes supported, got {cfg.dims}")
    if any(n < 1 for n in cfg.elements):
        errors.append("[mesh] elements: counts must be positive")
    for name in ("lower", "upper", "periodic"):
        if len(getattr(cfg, name)) != cfg.dims:
            errors.append(f"[mesh] {name}: expected {cfg.dims} entries")
    if len(cfg.lower) == len(cfg.upper) and any(hi <= lo for lo, hi in zip(cfg.lower, cfg.upper)):
        errors.append("[mesh] upper: must exceed lower on every axis")
    if cfg.case == "vortex" and cfg.dims != 2:
        errors.append("[mesh] elements: the vortex case needs two axes")
    if cfg.degree < 0:
        errors.append(f"[discretization] degree: must be >= 0, got {cfg.degree}")
    if cfg.degree == 0 and cfg.blending and cfg.force_alpha is None:
        errors.append("[discretization] degree: N = 0 cannot be combined with blending (the indicator needs N >= 1)")
    if not cfg.gamma > 1.0:
        errors.append(f"[gas] gamma: must be > 1, got {cfg.gamma}")
    if not cfg.prandtl > 0.0:
        errors.append(f"[gas] prandtl: must be > 0, got {cfg.prandtl}")
    if not cfg.cfl > 0.0:
        errors.append(f"[time] cfl: must be > 0, got {cfg.cfl}")
    if cfg.dt is not None and not cfg.dt > 0.0:
        errors.append(f"[time] dt: must be > 0, got {cfg.dt}")
    if (cfg.steps is None) == (cfg.end_time is None):
        errors.append("[time] exactly one of steps and end_time must be given")
    if cfg.steps is not None and cfg.steps < 1:
        errors.append(f"[time] steps: must be >= 1, got {cfg.steps}")
    if cfg.end_time is not None and not cfg.end_time > 0.0:
        errors.append(f"[time] end_time: must be > 0, got {cfg.end_time}")
    if not cfg.sharpness > 0.0:
        errors.append(f"[blending] sharpness: must be > 0, got {cfg.sharpness}")
    if not 0.0 <= cfg.alpha_min <= cfg.alpha_max <= 1.0:
        errors.append("[blending] need 0 <= alpha_min <= alpha_max <= 1")
    if cfg.force_alpha is not None and not 0.0 <= cfg.force_alpha <= 1.0:
        errors.append(f"[blending] force_alpha: must lie in [0, 1], got {cfg.force_alpha}")
    if cfg.threads < 1:
        errors.append(f"[run] threads: must be >= 1, got {cfg.threads}")
    if cfg.repeats < 1:
        errors.append(f"[run] repeats: must be >= 1, got {cfg.repeats}")
    for shape in cfg.campaign_meshes:
        if len(shape) != cfg.dims or any(n < 1 for n in shape):
            errors.append(f"[campaign] meshes: {'x'.join(map(str, shape))} does not match a {cfg.dims}D mesh")
    if any(c < 1 for c in cfg.campaign_cores):
        errors.append("[campaign] cores: counts must be positive")
    return errors


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; raises :class:`ConfigError` with all problems."""
    errors: list[str] = []
    seen: dict[tuple[str, str], int] = {}
    values: dict[str, Any] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if not any(s == section for s, _ in SCHEMA):
                errors.append(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if section is None:
            errors.append(f"line {lineno}: key {key!r} appears before any [section]")
            continue
        ident = (section, key)
        if ident not in SCHEMA:
            if any(s == section for s, _ in SCHEMA):
                errors.append(f"line {lineno}: unknown key {key!r} in [{section}]")
            continue
        if ident in seen:
            errors.append(
                f"line {lineno}: duplicate key {key!r} in [{section}] (first defined at line {seen[ident]})"
            )
            continue
        seen[ident] = lineno
        name, parse = SCHEMA[ident]
        try:
            values[name] = parse(value)
        except ValueError as exc:
            errors.append(f"line {lineno}: [{section}] {key}: {exc}")

    for ident in REQUIRED:
        if ident not in seen:
            errors.append(f"missing required key [{ident[0]}] {ident[1]}")
    if errors:
        raise ConfigError(errors)
    cfg = RunConfig(**values)
    problems = validate(cfg)
    if problems:
        raise ConfigError(problems)
    return cfg


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def render_config(cfg: RunConfig) -> str:
    """Serialise ``cfg`` so that ``parse_config(render_config(cfg)) == cfg``."""
    lines: list[str] = []
    current = None
    for (section, key), (name, _) in SCHEMA.items():
        value = getattr(cfg, name)
        if name.startswith("campaign_") and not value:
            continue
        if section != current:
            if lines:
                lines.append("")
            lines.append(f"[{section}]")
            current = section
        lines.append(f"{key} = {_render(value)}")
    return "\n".join(lines) + "\n"


def with_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """Apply non-``None`` overrides and re-validate."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    if "steps" in changes:
        changes.setdefault("end_time", None)
    if "end_time" in changes and changes["end_time"] is not None:
        changes["steps"] = None
    new = replace(cfg, **changes)
    problems = validate(new)
    if problems:
        raise ConfigError(problems)
    return new
