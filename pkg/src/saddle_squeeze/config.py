"""Run configuration: YAML document -> validated :class:`RunConfig`.

Document layout (``config_version: 1``)::

    config_version: 1
    model:
      lambda: 1.0        # reactive eigenvalue, > 0
      omega: [1.0]       # bath frequencies; omega[0] is the squeezed mode
      alpha: 0.05        # J_2^2 coefficient
      b2: 0.2            # I J_2 coefficient
      E0: 0.0
      hbar: 1.0
    e_axis: {values: [2.0]}               # or {min: .., max: .., count: ..}
    s_axis: {min: 0.0, max: 2.5, count: 251}
    tol: 1.0e-12
    seed: 12345
    mc_samples: 1000000
    outputs:
      - {diagnostic: table, format: csv, path: sweep.csv}
      - {diagnostic: fig1, format: curve, path: fig1_h_react.dat}

Every key is optional; missing keys take the values in :data:`DEFAULT_DOCUMENT`.
"""

from __future__ import annotations

import copy
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .errors import ValidationError
from .qnf_symbol import ModelParams

__all__ = [
    "CONFIG_VERSION",
    "DEFAULT_DOCUMENT",
    "OutputSpec",
    "RunConfig",
    "axis_values",
    "load_config",
    "parse_config",
    "DIAGNOSTICS",
    "FORMATS",
]

CONFIG_VERSION = 1

# diagnostic name -> record field plotted against s (None for the full table)
DIAGNOSTICS = {
    "table": None,
    "fig1": "h_react",
    "fig2": "S_qnf",
    "j2_mean": "j2_mean",
    "j2_sq_mean": "j2_sq_mean",
    "a_sq": "a_sq",
    "h_react": "h_react",
    "t_quad": "t_quad",
    "t_qnf": "t_qnf",
    "S_quad": "S_quad",
    "S_qnf": "S_qnf",
}
FORMATS = ("csv", "structured", "curve")

DEFAULT_DOCUMENT = {
    "config_version": CONFIG_VERSION,
    "model": {"lambda": 1.0, "omega": [1.0], "alpha": 0.05, "b2": 0.2, "E0": 0.0, "hbar": 1.0},
    "e_axis": {"values": [2.0]},
    "s_axis": {"min": 0.0, "max": 2.5, "count": 251},
    "tol": 1e-12,
    "seed": 12345,
    "mc_samples": 1_000_000,
    "outputs": [
        {"diagnostic": "table", "format": "csv", "path": "sweep.csv"},
        {"diagnostic": "fig1", "format": "curve", "path": "fig1_h_react.dat"},
        {"diagnostic": "fig2", "format": "curve", "path": "fig2_S_qnf.dat"},
    ],
}


@dataclass(frozen=True)
class OutputSpec:
    diagnostic: str
    format: str
    path: str


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    e_values: tuple[float, ...]
    s_values: tuple[float, ...]
    tol: float = 1e-12
    seed: int = 12345
    mc_samples: int = 1_000_000
    outputs: tuple[OutputSpec, ...] = field(default_factory=tuple)
    e_axis: Mapping = field(default_factory=dict, compare=False)
    s_axis: Mapping = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "config_version": CONFIG_VERSION,
            "model": self.model.to_dict(),
            "e_axis": dict(self.e_axis),
            "s_axis": dict(self.s_axis),
            "tol": self.tol,
            "seed": self.seed,
            "mc_samples": self.mc_samples,
            "outputs": [
                {"diagnostic": o.diagnostic, "format": o.format, "path": o.path} for o in self.outputs
            ],
        }

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def with_overrides(self, **changes) -> RunConfig:
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return parse_config(data)


def _number(value, path: str) -> float:
    # PyYAML reads "1e-12" (no dot) as a string
    if isinstance(value, bool):
        raise ValidationError(f"expected a number, got {value!r}", path)
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"expected a number, got {value!r}", path) from None
    if not math.isfinite(out):
        raise ValidationError(f"must be finite, got {value!r}", path)
    return out


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ValidationError(f"expected an integer, got {value!r}", path)
    try:
        out = float(value)
    except ValueError:
        raise ValidationError(f"expected an integer, got {value!r}", path) from None
    if not out.is_integer():
        raise ValidationError(f"expected an integer, got {value!r}", path)
    return int(out)


def axis_values(spec, path: str) -> tuple[float, ...]:
    """Resolve an axis given as a list, ``{values: [...]}`` or ``{min, max, count}``."""
    if isinstance(spec, (list, tuple)):
        spec = {"values": list(spec)}
    if not isinstance(spec, Mapping):
        raise ValidationError("axis must be a list or a mapping", path)
    if "values" in spec:
        extra = set(spec) - {"values"}
        if extra:
            raise ValidationError(f"unexpected keys {sorted(extra)} next to 'values'", path)
        values = spec["values"]
        if not isinstance(values, (list, tuple)) or not values:
            raise ValidationError("values must be a non-empty list", f"{path}.values")
        return tuple(_number(v, f"{path}.values[{i}]") for i, v in enumerate(values))
    for key in ("min", "max", "count"):
        if key not in spec:
            raise ValidationError("missing key", f"{path}.{key}")
    extra = set(spec) - {"min", "max", "count"}
    if extra:
        raise ValidationError(f"unknown keys {sorted(extra)}", path)
    lo = _number(spec["min"], f"{path}.min")
    hi = _number(spec["max"], f"{path}.max")
    count = _integer(spec["count"], f"{path}.count")
    if count < 1:
        raise ValidationError(f"must be >= 1, got {count}", f"{path}.count")
    if lo > hi:
        raise ValidationError(f"min {lo} exceeds max {hi}", path)
    if count == 1:
        if lo != hi:
            raise ValidationError("count 1 needs min == max", path)
        return (lo,)
    return tuple(float(v) for v in np.linspace(lo, hi, count))


def _outputs(raw, path: str = "outputs") -> tuple[OutputSpec, ...]:
    if not isinstance(raw, (list, tuple)):
        raise ValidationError("must be a list", path)
    out = []
    for i, item in enumerate(raw):
        p = f"{path}[{i}]"
        if not isinstance(item, Mapping):
            raise ValidationError("must be a mapping", p)
        diag = item.get("diagnostic")
        if diag not in DIAGNOSTICS:
            raise ValidationError(f"unknown diagnostic {diag!r}; choose from {sorted(DIAGNOSTICS)}", f"{p}.diagnostic")
        fmt = item.get("format", "csv" if diag == "table" else "curve")
        if fmt not in FORMATS:
            raise ValidationError(f"unknown format {fmt!r}; choose from {list(FORMATS)}", f"{p}.format")
        if (diag == "table") == (fmt == "curve"):
            raise ValidationError(f"format {fmt!r} does not fit diagnostic {diag!r}", f"{p}.format")
        target = item.get("path")
        if not isinstance(target, str) or not target:
            raise ValidationError("must be a non-empty string", f"{p}.path")
        out.append(OutputSpec(diag, fmt, target))
    return tuple(out)


def parse_config(document: Mapping | None) -> RunConfig:
    """Validate a parsed YAML document, filling gaps from the defaults."""
    if document is None:
        document = {}
    if not isinstance(document, Mapping):
        raise ValidationError("configuration must be a mapping")
    known = set(DEFAULT_DOCUMENT)
    unknown = set(document) - known
    if unknown:
        raise ValidationError(f"unknown top-level keys {sorted(unknown)}")
    data = copy.deepcopy(DEFAULT_DOCUMENT)
    data.update(document)
    version = _integer(data["config_version"], "config_version")
    if version != CONFIG_VERSION:
        raise ValidationError(f"unsupported version {version}, expected {CONFIG_VERSION}", "config_version")

    model = ModelParams.from_dict(data["model"], "model")
    e_values = axis_values(data["e_axis"], "e_axis")
    s_values = axis_values(data["s_axis"], "s_axis")
    tol = _number(data["tol"], "tol")
    if not 0.0 < tol <= 1e-2:
        raise ValidationError(f"must lie in (0, 1e-2], got {tol}", "tol")
    seed = _integer(data["seed"], "seed")
    if seed < 0:
        raise ValidationError(f"must be >= 0, got {seed}", "seed")
    mc_samples = _integer(data["mc_samples"], "mc_samples")
    if mc_samples < 1000:
        raise ValidationError(f"must be >= 1000, got {mc_samples}", "mc_samples")

    e_axis = data["e_axis"]
    s_axis = data["s_axis"]
    return RunConfig(
        model=model,
        e_values=e_values,
        s_values=s_values,
        tol=tol,
        seed=seed,
        mc_samples=mc_samples,
        outputs=_outputs(data["outputs"]),
        e_axis={"values": list(e_axis)} if isinstance(e_axis, (list, tuple)) else dict(e_axis),
        s_axis={"values": list(s_axis)} if isinstance(s_axis, (list, tuple)) else dict(s_axis),
    )


def load_config(path: str | Path | None) -> RunConfig:
    """Read and validate a YAML configuration file; ``None`` gives the defaults."""
    if path is None:
        return parse_config({})
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc.strerror}", str(path)) from None
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"invalid YAML: {exc}", str(path)) from None
    return parse_config(document)
