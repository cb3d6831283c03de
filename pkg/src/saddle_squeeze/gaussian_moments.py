"""Exact Gaussian moments of the bath coordinates under a squeezed vacuum.

``q`` and ``p`` are independent zero-mean normals with variances
``(hbar/2) e^{-2s}`` and ``(hbar/2) e^{2s}``, so every mixed moment is a
product of one-dimensional Isserlis moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .squeezed_state import SqueezedState

__all__ = [
    "MomentOrder",
    "double_factorial",
    "wick_moment",
    "gaussian_moment",
    "bath_action_power_moment",
    "MAX_ACTION_POWER",
]

MAX_ACTION_POWER = 30


@dataclass(frozen=True)
class MomentOrder:
    """Half-orders of the monomial ``q^{2m} p^{2l}``."""

    m: int
    l: int  # noqa: E741

    def __post_init__(self):
        for name in ("m", "l"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise DomainError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def degree(self) -> int:
        return 2 * (self.m + self.l)


def double_factorial(k: int) -> float:
    """``k!!`` as a float, with ``(-1)!! = 0!! = 1``.

    Products beyond ``k = 150`` are accumulated as a sum of logarithms and
    overflow gracefully to ``inf``.

    >>> double_factorial(9)
    945.0
    """
    if isinstance(k, bool) or int(k) != k:
        raise DomainError(f"double factorial needs an integer, got {k!r}")
    k = int(k)
    if k < -1:
        raise DomainError(f"double factorial undefined for k={k}")
    if k <= 150:
        out = 1
        for j in range(k, 0, -2):
            out *= j
        return float(out)
    log_out = math.fsum(math.log(j) for j in range(k, 0, -2))
    try:
        return math.exp(log_out)
    except OverflowError:
        return math.inf


def wick_moment(state: SqueezedState, order: MomentOrder) -> float:
    """``<q^{2m} p^{2l}> = (2m-1)!! (2l-1)!! (hbar/2)^{m+l} exp(2s(l-m))``."""
    m, l = order.m, order.l  # noqa: E741
    return (
        double_factorial(2 * m - 1)
        * double_factorial(2 * l - 1)
        * (0.5 * state.hbar) ** (m + l)
        * math.exp(2.0 * state.s * (l - m))
    )


def gaussian_moment(state: SqueezedState, q_power: int, p_power: int) -> float:
    """``<q^a p^b>`` for arbitrary non-negative integer exponents.

    Odd exponents vanish by symmetry and short-circuit to exactly zero.
    """
    for name, v in (("q_power", q_power), ("p_power", p_power)):
        if isinstance(v, bool) or int(v) != v or v < 0:
            raise DomainError(f"{name} must be a non-negative integer, got {v!r}")
    if q_power % 2 or p_power % 2:
        return 0.0
    return wick_moment(state, MomentOrder(int(q_power) // 2, int(p_power) // 2))


def bath_action_power_moment(state: SqueezedState, n: int) -> float:
    """``<J^n>`` with ``J = (q^2 + p^2)/2``.

    Expands ``(q^2 + p^2)^n`` binomially and applies :func:`wick_moment`
    termwise.
    """
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"action power must be a non-negative integer, got {n!r}")
    n = int(n)
    if n > MAX_ACTION_POWER:
        raise DomainError(f"action power {n} exceeds supported maximum {MAX_ACTION_POWER}")
    if n == 0:
        return 1.0
    total = 0.0
    binom = 1.0
    for k in range(n + 1):
        total += binom * wick_moment(state, MomentOrder(k, n - k))
        binom = binom * (n - k) / (k + 1)
    return total / 2.0**n
