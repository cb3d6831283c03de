"""Cross-checks of every closed form against the independent oracles.

:func:`run_oracle_suite` evaluates each check at the parameters of a
:class:`RunConfig` and returns a deterministic :class:`OracleReport`.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import RunConfig
from .errors import NoBottleneckError
from .gaussian_moments import MomentOrder, bath_action_power_moment, wick_moment
from .oracle import mc_bath_moment, quad_bath_moment, quad_integrate, series_tquad_reference
from .qnf_symbol import (
    ModelParams,
    ThresholdOutcome,
    bath_states,
    build_two_dof_symbol,
    candidate_width,
    depletion_threshold,
    geometric_threshold,
    reactive_energy,
)
from .squeezed_state import (
    SqueezedState,
    action_area_scale,
    covariance,
    number_distribution_prefix,
)
from .transmission import kemble, log_kemble, transmission_quadratic

__all__ = ["CheckResult", "OracleReport", "run_oracle_suite", "check_squeezes"]

_BASE_SQUEEZES = (0.0, 0.5, 1.0, 2.0)
_MAX_CHECK_SQUEEZE = 3.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    discrepancy: float
    tolerance: float
    detail: str = ""


@dataclass(frozen=True)
class OracleReport:
    seed: int
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "seed": self.seed,
            "failures": self.failures,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self) -> str:
        def clean(x):
            if isinstance(x, float) and not math.isfinite(x):
                return repr(x)
            return x

        data = self.to_dict()
        data["checks"] = [{k: clean(v) for k, v in c.items()} for c in data["checks"]]
        return json.dumps(data, indent=1, sort_keys=True) + "\n"


def check_squeezes(config: RunConfig) -> tuple[float, ...]:
    """Fixed probe squeezes plus the ends of the configured s axis (capped at |s| <= 3)."""
    extra = (min(config.s_values), max(config.s_values))
    vals = {abs(s) for s in _BASE_SQUEEZES + extra if abs(s) <= _MAX_CHECK_SQUEEZE}
    return tuple(sorted(vals))


def _result(name: str, discrepancy: float, tol: float, detail: str = "") -> CheckResult:
    discrepancy = float(discrepancy)
    ok = math.isfinite(discrepancy) and discrepancy <= tol
    return CheckResult(name, ok, discrepancy, float(tol), detail)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _normalization(states) -> list[CheckResult]:
    worst_mass = 0.0
    worst_mean = 0.0
    terms = []
    for st in states:
        t2 = math.tanh(st.s) ** 2
        mean_occ = 0.0
        reached = None
        for m, prob, cum in number_distribution_prefix(st):
            term = 2 * m * prob
            mean_occ += term
            if reached is None and 1.0 - cum <= 1e-10:
                reached = m + 1
                mass = max(0.0, 1.0 - cum)
            if reached is not None and (t2 == 0.0 or m > 0):
                # term ratios t2 (2k+1)/(2k) decrease towards t2
                ratio = t2 * (2 * m + 1) / (2 * m) if m else 0.0
                if ratio < 1.0 and term * ratio / (1.0 - ratio) < 1e-13:
                    break
            if m > 10**7:
                mass = max(0.0, 1.0 - cum)
                break
        terms.append(reached)
        worst_mass = max(worst_mass, mass)
        worst_mean = max(worst_mean, abs(mean_occ - math.sinh(st.s) ** 2))
    detail = "terms " + ",".join(f"s={st.s:g}:{t}" for st, t in zip(states, terms))
    return [
        _result("number_normalization", worst_mass, 1e-10, detail),
        _result("mean_occupation_identity", worst_mean, 1e-9),
    ]


def _symplectic(hbar: float) -> CheckResult:
    worst = 0.0
    for s in np.linspace(-3.0, 3.0, 61):
        cov = covariance(SqueezedState(float(s), hbar))
        worst = max(worst, _rel(cov.var_q * cov.var_p, (0.5 * hbar) ** 2))
    return _result("symplectic_invariance", worst, 1e-12)


def _wick_vs_quadrature(states) -> CheckResult:
    worst = 0.0
    for st in states:
        for m in range(5):
            for l in range(5 - m):  # noqa: E741
                q = quad_bath_moment(st, (2 * m, 2 * l), order=m + l + 4)
                worst = max(worst, _rel(wick_moment(st, MomentOrder(m, l)), q.value))
    return _result("wick_vs_quadrature", worst, 1e-11)


def _action_moment(st: SqueezedState, n: int, perturb: float) -> float:
    value = bath_action_power_moment(st, n)
    return value * (1.0 + perturb) if n == 1 else value


def _actions_vs_quadrature(states, perturb: float) -> CheckResult:
    worst = 0.0
    for st in states:
        for n in (1, 2):
            ref = quad_integrate(st, lambda q, p, n=n: (0.5 * (q * q + p * p)) ** n, order=n + 4)
            worst = max(worst, _rel(_action_moment(st, n, perturb), ref))
    return _result("action_moments_vs_quadrature", worst, 1e-11)


def _actions_vs_mc(states, samples: int, seed: int, perturb: float) -> CheckResult:
    worst = 0.0
    for i, st in enumerate(states):
        for n in (1, 2):
            est = mc_bath_moment(st, n, samples, seed=seed + 7919 * i + n)
            worst = max(worst, abs(_action_moment(st, n, perturb) - est.mean) / est.std_error)
    return _result("action_moments_vs_monte_carlo", worst, 5.0, f"{samples} samples, in standard errors")


def _wigner_normalization(states) -> CheckResult:
    worst = max(abs(quad_integrate(st, None, 24) - 1.0) for st in states)
    return _result("wigner_normalization", worst, 1e-8)


def _quadratic_reduction(model: ModelParams, energies, states) -> CheckResult:
    quad = ModelParams(model.lam, model.omega[:1], 0.0, 0.0, model.E0, model.hbar)
    symbol = build_two_dof_symbol(quad)
    worst = 0.0
    for E in energies:
        for st in states:
            h = reactive_energy(symbol, [st], E).h_react
            closed = E - model.E0 - 0.5 * model.hbar * model.omega[0] * math.cosh(2.0 * st.s)
            worst = max(worst, abs(h - closed) / max(1.0, abs(closed)))
    return _result("quadratic_reduction", worst, 1e-13)


def _thresholds(model: ModelParams, energies) -> list[CheckResult]:
    symbol = build_two_dof_symbol(model)
    worst_dep = 0.0
    worst_geom = 0.0
    n_dep = n_geom = 0
    for E in energies:
        dep = depletion_threshold(model, E)
        if dep.outcome is ThresholdOutcome.THRESHOLD:
            h = reactive_energy(symbol, bath_states(model, dep.value), E).h_react
            worst_dep = max(worst_dep, abs(h))
            n_dep += 1
        try:
            geom = geometric_threshold(model, E)
        except NoBottleneckError:
            continue
        if geom.outcome is ThresholdOutcome.THRESHOLD:
            c = candidate_width(model, E)
            worst_geom = max(worst_geom, _rel(action_area_scale(SqueezedState(geom.value, model.hbar)), c))
            n_geom += 1
    return [
        _result("depletion_threshold_root", worst_dep, 1e-9, f"{n_dep} thresholds"),
        _result("geometric_threshold_match", worst_geom, 1e-10, f"{n_geom} thresholds"),
    ]


def _tquad_vs_reference(model: ModelParams, energies, states, tol: float) -> list[CheckResult]:
    worst = 0.0
    worst_tail = 0.0
    allowed = max(tol, 1e-13)
    for E in energies:
        for st in states:
            res = transmission_quadratic(model, st, E, tol)
            ref = series_tquad_reference(model, st, E)
            worst = max(worst, abs(res.value - ref) / allowed)
            fine = transmission_quadratic(model, st, E, tol / 100)
            slack = res.tail_bound + 4 * np.finfo(float).eps * abs(res.value)
            worst_tail = max(worst_tail, abs(fine.value - res.value) / slack)
    return [
        _result("tquad_vs_series_reference", worst, 1.0, f"in units of max(tol, 1e-13) = {allowed:g}"),
        _result("tquad_tail_bound_conservative", worst_tail, 1.0, "change at tol/100 over reported bound"),
    ]


def _kemble_checks() -> list[CheckResult]:
    worst = abs(kemble(0.0) - 0.5)
    for x in np.linspace(-50.0, 50.0, 1001):
        worst = max(worst, abs(kemble(float(x)) + kemble(float(-x)) - 1.0))
    # deep tail: linear value underflows to 0 in binary64; no overflow or NaN
    # allowed, and the log form must carry the exact exponent
    deep, log_deep = kemble(-1e4), log_kemble(-1e4)
    tail_err = abs(log_deep - (-2.0 * math.pi * 1e4)) / (2.0 * math.pi * 1e4)
    if not (math.isfinite(deep) and 0.0 <= deep < 1.0):
        tail_err = math.inf
    return [
        _result("kemble_symmetry", worst, 1e-15),
        _result("kemble_deep_tail_log", tail_err, 1e-15, f"kemble(-1e4) = {deep!r}, log = {log_deep!r}"),
    ]


def run_oracle_suite(config: RunConfig, perturb_j2: float = 0.0) -> OracleReport:
    """Run every cross-check at the configuration's parameters.

    ``perturb_j2`` multiplies the closed-form ``<J_2>`` used in the action
    checks by ``1 + perturb_j2``; it exists to confirm the suite can fail.
    """
    model = config.model
    states = [SqueezedState(s, model.hbar) for s in check_squeezes(config)]
    energies = sorted(set(config.e_values))
    checks: list[CheckResult] = []
    checks += _normalization(states)
    checks.append(_symplectic(model.hbar))
    checks.append(_wigner_normalization(states))
    checks.append(_wick_vs_quadrature(states))
    checks.append(_actions_vs_quadrature(states, perturb_j2))
    checks.append(_actions_vs_mc(states, config.mc_samples, config.seed, perturb_j2))
    checks.append(_quadratic_reduction(model, energies, states))
    checks += _thresholds(model, energies)
    checks += _tquad_vs_reference(model, energies, states, config.tol)
    checks += _kemble_checks()
    return OracleReport(config.seed, tuple(checks))
