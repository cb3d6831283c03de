"""(E, s) parameter sweeps over the full diagnostic bundle, and their writers."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

from .config import DIAGNOSTICS, OutputSpec, RunConfig
from .errors import NoBottleneckError, SeriesLimitError, SingularDenominatorError
from .gaussian_moments import bath_action_power_moment
from .qnf_symbol import (
    ThresholdOutcome,
    bath_states,
    build_two_dof_symbol,
    candidate_width,
    depletion_threshold,
    geometric_threshold,
    reactive_energy,
)
from .squeezed_state import SqueezedState, action_area_scale, expected_bath_action
from .transmission import kemble, log_kemble, transmission_quadratic

__all__ = [
    "SweepRecord",
    "CSV_HEADER",
    "LOG_COLUMNS",
    "THREADS_ENV",
    "run_sweep",
    "worker_count",
    "format_float",
    "records_to_csv",
    "records_from_csv",
    "records_to_structured",
    "curve_text",
    "write_outputs",
]

THREADS_ENV = "SADDLE_SQUEEZE_THREADS"
CSV_HEADER = (
    "E", "s", "j2_mean", "j2_sq_mean", "a_sq", "c_cand", "h_react", "t_quad", "t_qnf",
    "S_quad", "S_qnf", "s_geom", "s_dep", "status",
)  # fmt: skip
LOG_COLUMNS = ("log_t_quad", "log_t_qnf")


@dataclass(frozen=True)
class SweepRecord:
    """All diagnostics at one grid point.

    Non-finite fields are explained by ``status``, a ``|``-joined list of
    flags (``ok`` when empty).
    """

    E: float
    s: float
    j2_mean: float
    j2_sq_mean: float
    a_sq: float
    c_cand: float
    h_react: float
    t_quad: float
    t_qnf: float
    S_quad: float
    S_qnf: float
    s_geom: float
    s_dep: float
    status: str
    log_t_quad: float = math.nan
    log_t_qnf: float = math.nan

    @property
    def flags(self) -> tuple[str, ...]:
        return () if self.status == "ok" else tuple(self.status.split("|"))


@dataclass(frozen=True)
class _EnergyContext:
    """Per-energy quantities shared by every s on the axis."""

    c_cand: float
    s_geom: float
    s_dep: float
    t_quad_ref: float
    t_qnf_ref: float
    flags: tuple[str, ...]


def worker_count(requested: int | None = None) -> int:
    """Thread count from the argument, else the environment, else the CPU count."""
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            requested = int(raw)
        except ValueError:
            requested = 0
    if requested <= 0:
        requested = os.cpu_count() or 1
    return max(1, requested)


def _t_quad(config: RunConfig, s: float, E: float) -> tuple[float, list[str]]:
    try:
        return transmission_quadratic(config.model, SqueezedState(s, config.model.hbar), E, config.tol).value, []
    except SeriesLimitError:
        return math.nan, ["series_limit"]


def _h_react(config: RunConfig, symbol, s: float, E: float) -> tuple[float, list[str]]:
    try:
        return reactive_energy(symbol, bath_states(config.model, s), E).h_react, []
    except SingularDenominatorError:
        return math.nan, ["singular"]


def _energy_context(config: RunConfig, symbol, E: float) -> _EnergyContext:
    params = config.model
    flags: list[str] = []
    try:
        c_cand = candidate_width(params, E)
        geom = geometric_threshold(params, E)
        s_geom = geom.value
        if geom.outcome is ThresholdOutcome.AT_FLOOR:
            flags.append("geom_at_floor")
    except NoBottleneckError:
        c_cand = s_geom = math.nan
        flags.append("no_bottleneck")

    try:
        dep = depletion_threshold(params, E)
        s_dep = dep.value
        if dep.outcome is ThresholdOutcome.AT_FLOOR:
            flags.append("dep_at_floor")
        elif dep.outcome is ThresholdOutcome.NO_ROOT:
            flags.append("dep_no_root")
    except SingularDenominatorError:
        s_dep = math.nan
        flags.append("dep_no_root")

    t_quad_ref, f1 = _t_quad(config, 0.0, E)
    h0, f2 = _h_react(config, symbol, 0.0, E)
    t_qnf_ref = kemble(h0, params.lam, params.hbar) if math.isfinite(h0) else math.nan
    for flag in f1 + f2:
        flags.append("ref_" + flag)
    return _EnergyContext(c_cand, s_geom, s_dep, t_quad_ref, t_qnf_ref, tuple(flags))


def _ratio(t: float, ref: float, flags: list[str]) -> float:
    if not (math.isfinite(t) and math.isfinite(ref)):
        return math.nan
    if not ref > 0.0:
        flags.append("undefined_reference")
        return math.nan
    return t / ref


def _evaluate(config: RunConfig, symbol, ctx: _EnergyContext, E: float, s: float) -> SweepRecord:
    params = config.model
    state = SqueezedState(s, params.hbar)
    flags = list(ctx.flags)
    h_react, f = _h_react(config, symbol, s, E)
    flags += f
    if s == 0.0:
        t_quad, t_qnf = ctx.t_quad_ref, ctx.t_qnf_ref
    else:
        t_quad, f = _t_quad(config, s, E)
        flags += f
        t_qnf = kemble(h_react, params.lam, params.hbar) if math.isfinite(h_react) else math.nan
    s_quad = _ratio(t_quad, ctx.t_quad_ref, flags)
    s_qnf = _ratio(t_qnf, ctx.t_qnf_ref, flags)
    log_t_quad = math.log(t_quad) if t_quad > 0.0 else (-math.inf if t_quad == 0.0 else math.nan)
    log_t_qnf = log_kemble(h_react, params.lam, params.hbar) if math.isfinite(h_react) else math.nan

    values = dict(
        E=E,
        s=s,
        j2_mean=expected_bath_action(state),
        j2_sq_mean=bath_action_power_moment(state, 2),
        a_sq=action_area_scale(state),
        c_cand=ctx.c_cand,
        h_react=h_react,
        t_quad=t_quad,
        t_qnf=t_qnf,
        S_quad=s_quad,
        S_qnf=s_qnf,
        s_geom=ctx.s_geom,
        s_dep=ctx.s_dep,
    )
    if not flags and not all(math.isfinite(v) for v in values.values()):
        flags.append("nonfinite")
    status = "|".join(dict.fromkeys(flags)) or "ok"
    return SweepRecord(**values, status=status, log_t_quad=log_t_quad, log_t_qnf=log_t_qnf)


def run_sweep(config: RunConfig, threads: int | None = None) -> list[SweepRecord]:
    """Evaluate every ``(E, s)`` grid point; rows sorted by ``(E, s)``.

    Grid points are independent, so they may be spread over ``threads``
    workers; the result is the same for any worker count.
    """
    symbol = build_two_dof_symbol(config.model)
    energies = sorted(set(config.e_values))
    squeezes = sorted(set(config.s_values))
    contexts = {E: _energy_context(config, symbol, E) for E in energies}
    grid = [(E, s) for E in energies for s in squeezes]
    n = min(worker_count(threads), len(grid))
    if n == 1:
        return [_evaluate(config, symbol, contexts[E], E, s) for E, s in grid]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda es: _evaluate(config, symbol, contexts[es[0]], *es), grid))


def format_float(x: float) -> str:
    """17 significant digits; ``nan``, ``inf`` and ``-inf`` spelled out."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def records_to_csv(records, log_columns: bool = False) -> str:
    header = CSV_HEADER + (LOG_COLUMNS if log_columns else ())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        row = []
        for name in header:
            v = getattr(rec, name)
            row.append(v if name == "status" else format_float(v))
        writer.writerow(row)
    return buf.getvalue()


def records_from_csv(text: str) -> list[SweepRecord]:
    """Parse :func:`records_to_csv` output back into records."""
    reader = csv.DictReader(io.StringIO(text))
    names = [f.name for f in fields(SweepRecord)]
    out = []
    for row in reader:
        kwargs = {}
        for name in names:
            if name not in row:
                continue
            kwargs[name] = row[name] if name == "status" else float(row[name])
        out.append(SweepRecord(**kwargs))
    return out


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return format_float(x)
    return x


def records_to_structured(records, log_columns: bool = False) -> str:
    """JSON array of objects; non-finite numbers become the strings ``nan``/``inf``/``-inf``."""
    names = CSV_HEADER + (LOG_COLUMNS if log_columns else ())
    rows = [{name: _jsonable(getattr(rec, name)) for name in names} for rec in records]
    return json.dumps(rows, indent=1) + "\n"


_CURVE_TITLES = {
    "fig1": "effective reactive energy vs bath squeeze parameter",
    "fig2": "relative squeeze suppression S_qnf vs bath squeeze parameter",
}


def curve_text(records, diagnostic: str) -> str:
    """Two-column ``s value`` text, one block per energy separated by blank lines."""
    column = DIAGNOSTICS[diagnostic]
    if column is None:
        raise ValueError("the table diagnostic has no curve form")
    lines = [
        f"# {diagnostic}: {_CURVE_TITLES.get(diagnostic, column + ' vs bath squeeze parameter')}",
        "# self-generated regression curve, not digitised from any publication",
        f"# columns: s {column}",
    ]
    by_energy: dict[float, list[SweepRecord]] = {}
    for rec in records:
        by_energy.setdefault(rec.E, []).append(rec)
    for i, (E, recs) in enumerate(by_energy.items()):
        if i:
            lines += ["", ""]
        lines.append(f"# E = {format_float(E)}")
        lines += [f"{format_float(r.s)} {format_float(getattr(r, column))}" for r in recs]
    return "\n".join(lines) + "\n"


def render(records, spec: OutputSpec, log_columns: bool = False) -> str:
    if spec.format == "csv":
        return records_to_csv(records, log_columns)
    if spec.format == "structured":
        return records_to_structured(records, log_columns)
    return curve_text(records, spec.diagnostic)


def write_outputs(records, outputs, out_dir: str | Path = ".", log_columns: bool = False) -> list[Path]:
    """Write each requested output under ``out_dir``; returns the paths written."""
    out_dir = Path(out_dir)
    written = []
    for spec in outputs:
        path = out_dir / spec.path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render(records, spec, log_columns))
        written.append(path)
    return written

