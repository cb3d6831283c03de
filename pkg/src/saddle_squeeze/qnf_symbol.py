"""Truncated quantum normal-form Weyl symbols and their Gaussian expectations.

A symbol is a finite sum of monomials ``c * hbar^h * I^i * J_2^{j_2} ... J_n^{j_n}``
with ``i`` at most one.  Because the incoming state is a product of a
reactive factor and independent squeezed bath modes, the expectation of a
symbol is affine in ``<I>``::

    <H_W> = A + B <I>

which the fixed-energy constraint ``<H_W> = E`` turns into the effective
reactive energy ``lambda <I>``.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import yaml

from .errors import NoBottleneckError, SingularDenominatorError, ValidationError
from .gaussian_moments import bath_action_power_moment
from .squeezed_state import SqueezedState, action_area_scale

__all__ = [
    "QnfTerm",
    "QnfSymbol",
    "ModelParams",
    "ReactiveEnergyResult",
    "ThresholdOutcome",
    "ThresholdResult",
    "build_two_dof_symbol",
    "bath_states",
    "reactive_energy",
    "max_bath_actions",
    "candidate_width",
    "geometric_threshold",
    "depletion_threshold",
    "DEFAULT_S_BRACKET",
]

DEFAULT_S_BRACKET = (0.0, 20.0)
_SINGULAR_RTOL = 1e-12


def _as_int(value, path: str, lo: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ValidationError(f"expected an integer, got {value!r}", path)
    value = int(value)
    if value < lo:
        raise ValidationError(f"must be >= {lo}, got {value}", path)
    return value


def _as_float(value, path: str) -> float:
    if isinstance(value, bool):
        raise ValidationError(f"expected a number, got {value!r}", path)
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"expected a number, got {value!r}", path) from None
    if not math.isfinite(out):
        raise ValidationError(f"must be finite, got {value!r}", path)
    return out


@dataclass(frozen=True)
class QnfTerm:
    """One monomial ``coeff * hbar^hbar_power * I^i_power * prod_k J_k^j_k``."""

    coeff: float
    i_power: int
    j_powers: tuple[int, ...]
    hbar_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", _as_float(self.coeff, "coeff"))
        object.__setattr__(self, "j_powers", tuple(_as_int(j, "j_powers") for j in self.j_powers))
        object.__setattr__(self, "hbar_power", _as_int(self.hbar_power, "hbar_power"))
        i_power = _as_int(self.i_power, "i_power")
        if i_power > 1:
            raise ValidationError("degree in I is capped at 1", "i_power")
        object.__setattr__(self, "i_power", i_power)

    @property
    def is_constant(self) -> bool:
        return self.i_power == 0 and self.hbar_power == 0 and not any(self.j_powers)

    @property
    def is_reactive_linear(self) -> bool:
        return self.i_power == 1 and self.hbar_power == 0 and not any(self.j_powers)

    def bath_linear_mode(self) -> int | None:
        """Index ``k`` if this term is exactly ``c J_k``, else None."""
        if self.i_power or self.hbar_power or sum(self.j_powers) != 1:
            return None
        return self.j_powers.index(1)

    def to_dict(self) -> dict:
        return {
            "coeff": self.coeff,
            "i_power": self.i_power,
            "j_powers": list(self.j_powers),
            "hbar_power": self.hbar_power,
        }


@dataclass(frozen=True)
class QnfSymbol:
    """Truncated polynomial Weyl symbol in ``(I, J_2, ..., J_n, hbar)``."""

    terms: tuple[QnfTerm, ...]
    n_bath: int
    hbar: float

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        n_bath = _as_int(self.n_bath, "n_bath", lo=1)
        object.__setattr__(self, "n_bath", n_bath)
        hbar = _as_float(self.hbar, "hbar")
        if hbar <= 0.0:
            raise ValidationError(f"must be > 0, got {hbar}", "hbar")
        for idx, term in enumerate(self.terms):
            if len(term.j_powers) != n_bath:
                raise ValidationError(
                    f"has {len(term.j_powers)} bath exponents, symbol has {n_bath} modes",
                    f"terms[{idx}].j_powers",
                )
        reactive = [t for t in self.terms if t.is_reactive_linear]
        if len(reactive) != 1:
            raise ValidationError(f"need exactly one lambda*I term, found {len(reactive)}", "terms")
        if reactive[0].coeff <= 0.0:
            raise ValidationError(f"lambda must be > 0, got {reactive[0].coeff}", "terms")
        for k in range(n_bath):
            linear = [t for t in self.terms if t.bath_linear_mode() == k]
            if len(linear) != 1 or linear[0].coeff <= 0.0:
                raise ValidationError(f"bath mode {k} needs one linear term with omega > 0", "terms")

    @property
    def lam(self) -> float:
        return next(t.coeff for t in self.terms if t.is_reactive_linear)

    @property
    def omega(self) -> tuple[float, ...]:
        return tuple(
            next(t.coeff for t in self.terms if t.bath_linear_mode() == k) for k in range(self.n_bath)
        )

    def to_dict(self) -> dict:
        return {
            "hbar": self.hbar,
            "n_bath": self.n_bath,
            "terms": [t.to_dict() for t in self.terms],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> QnfSymbol:
        if not isinstance(data, Mapping):
            raise ValidationError("symbol document must be a mapping")
        for key in ("hbar", "n_bath", "terms"):
            if key not in data:
                raise ValidationError("missing key", key)
        terms = []
        for idx, raw in enumerate(data["terms"]):
            path = f"terms[{idx}]"
            if not isinstance(raw, Mapping):
                raise ValidationError("term must be a mapping", path)
            try:
                terms.append(
                    QnfTerm(
                        coeff=_as_float(raw["coeff"], f"{path}.coeff"),
                        i_power=raw.get("i_power", 0),
                        j_powers=tuple(raw["j_powers"]),
                        hbar_power=raw.get("hbar_power", 0),
                    )
                )
            except KeyError as exc:
                raise ValidationError("missing key", f"{path}.{exc.args[0]}") from None
            except ValidationError as exc:
                raise ValidationError(str(exc), path) from None
        return cls(tuple(terms), data["n_bath"], _as_float(data["hbar"], "hbar"))

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def loads(cls, text: str) -> QnfSymbol:
        return cls.from_dict(yaml.safe_load(text))


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of the saddle-centre model.

    ``omega[0]`` is the squeezed bath mode (``omega_2``); the anharmonic
    coefficients ``alpha`` (``J_2^2``) and ``b2`` (``I J_2``) act on it only.
    """

    lam: float
    omega: tuple[float, ...] = (1.0,)
    alpha: float = 0.0
    b2: float = 0.0
    E0: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if isinstance(self.omega, (int, float)):
            object.__setattr__(self, "omega", (self.omega,))
        omega = tuple(_as_float(w, f"omega[{k}]") for k, w in enumerate(self.omega))
        if not omega:
            raise ValidationError("need at least one bath frequency", "omega")
        for k, w in enumerate(omega):
            if w <= 0.0:
                raise ValidationError(f"must be > 0, got {w}", f"omega[{k}]")
        object.__setattr__(self, "omega", omega)
        for name in ("lam", "alpha", "b2", "E0", "hbar"):
            object.__setattr__(self, name, _as_float(getattr(self, name), _KEYS.get(name, name)))
        if self.lam <= 0.0:
            raise ValidationError(f"must be > 0, got {self.lam}", "lambda")
        if self.hbar <= 0.0:
            raise ValidationError(f"must be > 0, got {self.hbar}", "hbar")

    @property
    def n_bath(self) -> int:
        return len(self.omega)

    @property
    def is_quadratic(self) -> bool:
        return self.alpha == 0.0 and self.b2 == 0.0

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "omega": list(self.omega),
            "alpha": self.alpha,
            "b2": self.b2,
            "E0": self.E0,
            "hbar": self.hbar,
        }

    @classmethod
    def from_dict(cls, data: Mapping, path: str = "model") -> ModelParams:
        if not isinstance(data, Mapping):
            raise ValidationError("must be a mapping", path)
        unknown = set(data) - set(_KEYS.values())
        if unknown:
            raise ValidationError(f"unknown keys {sorted(unknown)}", path)
        if "lambda" not in data:
            raise ValidationError("missing key", f"{path}.lambda")
        omega = data.get("omega", [1.0])
        if not isinstance(omega, (list, tuple)):
            omega = [omega]
        kwargs = {attr: data[key] for attr, key in _KEYS.items() if key in data and attr != "omega"}
        try:
            return cls(omega=tuple(omega), **kwargs)
        except ValidationError as exc:
            raise ValidationError(str(exc), path) from None


_KEYS = {"lam": "lambda", "omega": "omega", "alpha": "alpha", "b2": "b2", "E0": "E0", "hbar": "hbar"}


@dataclass(frozen=True)
class ReactiveEnergyResult:
    """Solution of the fixed-energy constraint for the reactive channel.

    ``offset`` is the part of ``<H_W>`` independent of ``<I>`` and
    ``denominator`` the coefficient of ``<I>``; ``h_react = lam * i_expectation``.
    """

    h_react: float
    i_expectation: float
    denominator: float
    offset: float


class ThresholdOutcome(enum.Enum):
    THRESHOLD = "threshold"
    AT_FLOOR = "at_floor"
    NO_ROOT = "no_root"


@dataclass(frozen=True)
class ThresholdResult:
    """Three-way threshold outcome.

    ``value`` is the squeeze parameter for ``THRESHOLD``, ``0.0`` when the
    threshold is already passed by the unsqueezed state (``AT_FLOOR``), and
    NaN for ``NO_ROOT``.
    """

    outcome: ThresholdOutcome
    value: float = field(default=math.nan)

    @property
    def found(self) -> bool:
        return self.outcome is ThresholdOutcome.THRESHOLD


def build_two_dof_symbol(params: ModelParams) -> QnfSymbol:
    """Assemble ``E0 + lam I + sum_k omega_k J_k + alpha J_2^2 + b2 I J_2``.

    Zero coefficients for ``E0``, ``alpha`` and ``b2`` are left out.  With a
    single bath frequency this is the two-degree-of-freedom model; further
    frequencies add harmonic spectator modes.
    """
    n = params.n_bath

    def unit(k: int, power: int = 1) -> tuple[int, ...]:
        return tuple(power if j == k else 0 for j in range(n))

    zero = (0,) * n
    terms = []
    if params.E0 != 0.0:
        terms.append(QnfTerm(params.E0, 0, zero))
    terms.append(QnfTerm(params.lam, 1, zero))
    terms.extend(QnfTerm(w, 0, unit(k)) for k, w in enumerate(params.omega))
    if params.alpha != 0.0:
        terms.append(QnfTerm(params.alpha, 0, unit(0, 2)))
    if params.b2 != 0.0:
        terms.append(QnfTerm(params.b2, 1, unit(0)))
    return QnfSymbol(tuple(terms), n, params.hbar)


def bath_states(params: ModelParams, s: float) -> list[SqueezedState]:
    """Squeeze ``s`` on the first bath mode, vacuum on the others."""
    return [SqueezedState(s, params.hbar)] + [
        SqueezedState(0.0, params.hbar) for _ in range(params.n_bath - 1)
    ]


def reactive_energy(
    symbol: QnfSymbol, states: Sequence[SqueezedState], E: float
) -> ReactiveEnergyResult:
    """Effective reactive energy ``lam <I>`` at total expectation energy ``E``.

    Raises
    ------
    ValidationError
        If the number of states differs from ``symbol.n_bath`` or a state
        uses a different ``hbar``.
    SingularDenominatorError
        If the net coefficient of ``<I>`` is below ``1e-12 * lam`` in size.
    """
    if len(states) != symbol.n_bath:
        raise ValidationError(f"expected {symbol.n_bath} bath states, got {len(states)}", "states")
    for k, st in enumerate(states):
        if st.hbar != symbol.hbar:
            raise ValidationError(f"hbar {st.hbar} differs from symbol hbar {symbol.hbar}", f"states[{k}]")

    cache: dict[tuple[int, int], float] = {}

    def moment(k: int, n: int) -> float:
        key = (k, n)
        if key not in cache:
            cache[key] = bath_action_power_moment(states[k], n)
        return cache[key]

    offset = 0.0
    slope = 0.0
    for term in symbol.terms:
        value = term.coeff * symbol.hbar**term.hbar_power
        for k, n in enumerate(term.j_powers):
            if n:
                value *= moment(k, n)
        if term.i_power:
            slope += value
        else:
            offset += value

    lam = symbol.lam
    if abs(slope) < _SINGULAR_RTOL * lam:
        raise SingularDenominatorError(
            f"coefficient of <I> is {slope:.3e}, reactive channel decouples"
        )
    i_exp = (E - offset) / slope
    return ReactiveEnergyResult(lam * i_exp, i_exp, slope, offset)


def max_bath_actions(params: ModelParams, E: float) -> tuple[float, ...]:
    """Largest bath action per mode allowed on the NHIM (``I = 0``) at energy ``E``.

    Harmonic modes give ``(E - E0)/omega_k``.  The first mode with
    ``alpha != 0`` takes the positive root of ``omega J + alpha J^2 = E - E0``
    (the smaller one when ``alpha < 0``).
    """
    excess = E - params.E0
    if not excess > 0.0:
        raise NoBottleneckError(f"E={E} does not exceed E0={params.E0}")
    out = [excess / w for w in params.omega]
    if params.alpha != 0.0:
        w = params.omega[0]
        disc = w * w + 4.0 * params.alpha * excess
        if disc < 0.0:
            raise NoBottleneckError(
                f"E - E0 = {excess} exceeds the maximum {-w * w / (4 * params.alpha)} "
                "of the truncated bath energy"
            )
        # rationalised root; avoids cancellation for small alpha
        out[0] = 2.0 * excess / (w + math.sqrt(disc))
    return tuple(out)


def candidate_width(params: ModelParams, E: float) -> float:
    """Classical candidate bottleneck width ``2 pi min_k J_k^max(E)``."""
    return 2.0 * math.pi * min(max_bath_actions(params, E))


def geometric_threshold(params: ModelParams, E: float) -> ThresholdResult:
    """Squeeze at which the action-area scale reaches the candidate width."""
    ratio = candidate_width(params, E) / (math.pi * params.hbar)
    if ratio < 1.0:
        return ThresholdResult(ThresholdOutcome.AT_FLOOR, 0.0)
    return ThresholdResult(ThresholdOutcome.THRESHOLD, 0.5 * math.acosh(ratio))


def depletion_threshold(
    params: ModelParams,
    E: float,
    bracket: tuple[float, float] = DEFAULT_S_BRACKET,
    xtol: float = 1e-10,
) -> ThresholdResult:
    """Squeeze at which the effective reactive energy reaches zero.

    Harmonic models use the closed form
    ``0.5 * acosh(2 (E - E0 - Z) / (hbar omega_2))``, where ``Z`` is the
    zero-point energy of the unsqueezed spectator modes.  Otherwise the root
    of the reactive energy in ``s`` is bisected on ``bracket``.
    """
    if params.is_quadratic:
        spectators = 0.5 * params.hbar * sum(params.omega[1:])
        ratio = 2.0 * (E - params.E0 - spectators) / (params.hbar * params.omega[0])
        if ratio < 1.0:
            return ThresholdResult(ThresholdOutcome.AT_FLOOR, 0.0)
        return ThresholdResult(ThresholdOutcome.THRESHOLD, 0.5 * math.acosh(ratio))

    symbol = build_two_dof_symbol(params)

    def solve(s: float) -> ReactiveEnergyResult:
        return reactive_energy(symbol, bath_states(params, s), E)

    lo, hi = bracket
    r_lo, r_hi = solve(lo), solve(hi)
    if r_lo.h_react == 0.0:
        return ThresholdResult(ThresholdOutcome.THRESHOLD, lo)
    if r_lo.h_react < 0.0:
        return ThresholdResult(ThresholdOutcome.AT_FLOOR, lo)
    if r_hi.h_react > 0.0:
        return ThresholdResult(ThresholdOutcome.NO_ROOT)
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        r_mid = solve(mid)
        if r_mid.h_react > 0.0:
            lo, r_lo = mid, r_mid
        else:
            hi, r_hi = mid, r_mid
    if (r_lo.denominator > 0.0) != (r_hi.denominator > 0.0):
        # sign change came from a pole of 1/denominator, not a zero
        return ThresholdResult(ThresholdOutcome.NO_ROOT)
    return ThresholdResult(ThresholdOutcome.THRESHOLD, 0.5 * (lo + hi))
