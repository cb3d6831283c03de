"""Single-mode squeezed vacuum in normal-form bath coordinates.

The state is parametrised by a real squeeze parameter ``s`` and the action
unit ``hbar``.  Positive ``s`` narrows the distribution in ``q`` and widens
it in ``p``; negative ``s`` swaps the two.  Every quantity here is a pure
function of ``(s, hbar)``.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "SqueezedState",
    "BathCovariance",
    "covariance",
    "wigner_density",
    "expected_bath_action",
    "action_area_scale",
    "number_distribution",
    "occupation_probability",
    "number_distribution_prefix",
    "log_cosh",
]

# Below this P_0 the recurrence is carried in log space.
_LOG_SPACE_THRESHOLD = 1e-280


@dataclass(frozen=True)
class SqueezedState:
    """Squeezed vacuum ``|0, s>`` of one bath mode.

    Parameters
    ----------
    s : float
        Dimensionless squeeze parameter, any finite real.
    hbar : float
        Action unit, strictly positive.
    """

    s: float
    hbar: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise ValidationError(f"squeeze parameter must be finite, got {self.s!r}", "s")
        if not (math.isfinite(self.hbar) and self.hbar > 0.0):
            raise ValidationError(f"hbar must be finite and > 0, got {self.hbar!r}", "hbar")

    @classmethod
    def vacuum(cls, hbar: float = 1.0) -> SqueezedState:
        return cls(0.0, hbar)


@dataclass(frozen=True)
class BathCovariance:
    """Diagonal covariance of ``(q, p)`` for a squeezed vacuum."""

    var_q: float
    var_p: float

    def __post_init__(self):
        if not (self.var_q > 0.0 and self.var_p > 0.0):
            raise ValidationError("covariance entries must be positive")

    @property
    def determinant(self) -> float:
        return self.var_q * self.var_p

    @property
    def symplectic_eigenvalue(self) -> float:
        return math.sqrt(self.var_q * self.var_p)

    def as_matrix(self) -> np.ndarray:
        return np.diag([self.var_q, self.var_p])


def covariance(state: SqueezedState) -> BathCovariance:
    """Return ``(hbar/2) diag(exp(-2s), exp(2s))``."""
    half = 0.5 * state.hbar
    return BathCovariance(half * math.exp(-2.0 * state.s), half * math.exp(2.0 * state.s))


def wigner_density(state: SqueezedState, q, p):
    """Evaluate the Gaussian Wigner function of the squeezed vacuum.

    Accepts scalars or broadcastable arrays for ``q`` and ``p``; scalars in,
    float out.

    Examples
    --------
    >>> round(wigner_density(SqueezedState(0.7), 0.0, 0.0) * math.pi, 15)
    1.0
    """
    s, hbar = state.s, state.hbar
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    exponent = -(math.exp(2.0 * s) * q * q + math.exp(-2.0 * s) * p * p) / hbar
    out = np.exp(exponent) / (math.pi * hbar)
    return float(out) if out.ndim == 0 else out


def expected_bath_action(state: SqueezedState) -> float:
    """Mean oscillator action ``<J> = (hbar/2) cosh(2s)``."""
    return 0.5 * state.hbar * math.cosh(2.0 * state.s)


def action_area_scale(state: SqueezedState) -> float:
    """Bath-plane action-area diagnostic ``2 pi <J> = pi hbar cosh(2s)``.

    This is a covariance-based area in the fixed bath coordinates, not a
    symplectic capacity: the symplectic eigenvalue stays ``hbar/2``.
    """
    return math.pi * state.hbar * math.cosh(2.0 * state.s)


def log_cosh(x: float) -> float:
    """``log(cosh(x))`` without overflow."""
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def _check_index(m) -> int:
    if isinstance(m, bool) or int(m) != m:
        raise DomainError(f"occupation index must be an integer, got {m!r}")
    m = int(m)
    if m < 0:
        raise DomainError(f"occupation index must be >= 0, got {m}")
    return m


def number_distribution(state: SqueezedState, m: int) -> float:
    """Probability ``P_{2m}(s)`` of finding ``2m`` quanta in the bath mode.

    Evaluated by the ratio recurrence
    ``P_{2(m+1)} = P_{2m} tanh(s)^2 (2m+1)/(2m+2)`` from ``P_0 = 1/cosh(s)``,
    so no factorials are formed.
    """
    m = _check_index(m)
    for k, prob, _ in number_distribution_prefix(state):
        if k == m:
            return prob
    raise AssertionError("unreachable")  # pragma: no cover


def occupation_probability(state: SqueezedState, n: int) -> float:
    """Probability of ``n`` quanta; zero for every odd ``n``."""
    n = _check_index(n)
    if n % 2:
        return 0.0
    return number_distribution(state, n // 2)


class _Neumaier:
    """Compensated running sum."""

    __slots__ = ("total", "comp")

    def __init__(self):
        self.total = 0.0
        self.comp = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.comp


def number_distribution_prefix(state: SqueezedState) -> Iterator[tuple[int, float, float]]:
    """Yield ``(m, P_{2m}, sum_{k<=m} P_{2k})`` for ``m = 0, 1, 2, ...``.

    The generator is infinite; callers stop it once the cumulative mass is
    close enough to one.  When ``P_0`` is tiny the recurrence runs on
    logarithms so that later terms do not flush to zero prematurely.
    """
    s = state.s
    acc = _Neumaier()
    if s == 0.0:
        acc.add(1.0)
        yield 0, 1.0, acc.value
        m = 1
        while True:
            yield m, 0.0, acc.value
            m += 1

    t2 = math.tanh(s) ** 2
    p0 = 1.0 / math.cosh(s) if abs(s) < 700.0 else 0.0
    if p0 > _LOG_SPACE_THRESHOLD:
        prob = p0
        m = 0
        while True:
            acc.add(prob)
            yield m, prob, acc.value
            prob *= t2 * (2 * m + 1) / (2 * m + 2)
            m += 1
    else:
        log_t2 = 2.0 * math.log(abs(math.tanh(s)))
        log_prob = -log_cosh(s)
        m = 0
        while True:
            prob = math.exp(log_prob)
            acc.add(prob)
            yield m, prob, acc.value
            log_prob += log_t2 + math.log((2 * m + 1) / (2 * m + 2))
            m += 1
