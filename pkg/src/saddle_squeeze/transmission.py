"""Kemble transmission, the exact quadratic baseline and suppression ratios."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SeriesLimitError, UndefinedReferenceError
from .qnf_symbol import ModelParams, bath_states, build_two_dof_symbol, reactive_energy
from .squeezed_state import SqueezedState, number_distribution_prefix

__all__ = [
    "TransmissionResult",
    "kemble",
    "log_kemble",
    "bath_level_energy",
    "transmission_quadratic",
    "transmission_qnf",
    "suppression_metric",
    "DEFAULT_TOL",
    "MAX_SERIES_TERMS",
]

DEFAULT_TOL = 1e-12
MAX_SERIES_TERMS = 10**6


def _kemble_argument(delta_e: float, lam: float, hbar: float) -> float:
    if not lam > 0.0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    if not hbar > 0.0:
        raise DomainError(f"hbar must be > 0, got {hbar}")
    return 2.0 * math.pi * delta_e / (hbar * lam)


def kemble(delta_e: float, lam: float = 1.0, hbar: float = 1.0) -> float:
    """Parabolic-barrier transmission ``1 / (1 + exp(-2 pi delta_e / (hbar lam)))``.

    ``delta_e`` is the energy above the barrier top.  Written as a logistic
    that only ever exponentiates a non-positive number.

    >>> kemble(0.0)
    0.5
    """
    x = _kemble_argument(delta_e, lam, hbar)
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    ex = math.exp(x)
    return ex / (1.0 + ex)


def log_kemble(delta_e: float, lam: float = 1.0, hbar: float = 1.0) -> float:
    """Natural log of :func:`kemble`, accurate deep in the tunnelling regime."""
    x = _kemble_argument(delta_e, lam, hbar)
    if x >= 0.0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


def bath_level_energy(params: ModelParams, n: int) -> float:
    """Energy locked in the bath when the squeezed mode holds ``n`` quanta.

    Includes ``E0`` and the zero-point energy of any unsqueezed spectator
    modes, so the reactive coordinate sees ``E - bath_level_energy``.
    """
    spectators = 0.5 * params.hbar * sum(params.omega[1:])
    return params.E0 + spectators + params.hbar * params.omega[0] * (n + 0.5)


@dataclass(frozen=True)
class TransmissionResult:
    """Truncated-series transmission.

    ``tail_bound`` bounds the contribution of the omitted terms;
    ``tail_mass`` is the omitted probability ``1 - sum P_2m``.
    """

    value: float
    terms_used: int
    tail_bound: float
    tail_mass: float


def transmission_quadratic(
    params: ModelParams,
    state: SqueezedState,
    E: float,
    tol: float = DEFAULT_TOL,
    max_terms: int = MAX_SERIES_TERMS,
) -> TransmissionResult:
    """Exact squeezed-state transmission of the separable quadratic model.

    Sums ``P_2m(s) * kemble(E - E_2m)`` over even bath occupations.  After
    ``M`` terms the omitted part is at most ``R_M * kemble(E - E_{2M})``,
    where ``R_M = 1 - sum_{m<M} P_2m`` is the missing probability mass:
    the Kemble factor decreases with the level.  Summation stops once that
    bound is below ``tol``.

    Only ``lam``, ``omega`` and ``hbar`` (plus ``E0``) enter; anharmonic
    coefficients are ignored.

    Raises
    ------
    SeriesLimitError
        If ``max_terms`` terms do not bring the bound below ``tol``.
    """
    if not 0.0 < tol <= 1e-2:
        raise DomainError(f"tol must lie in (0, 1e-2], got {tol}")
    if state.hbar != params.hbar:
        raise DomainError(f"state hbar {state.hbar} differs from model hbar {params.hbar}")
    lam, hbar = params.lam, params.hbar
    value = 0.0
    comp = 0.0
    for m, prob, cumulative in number_distribution_prefix(state):
        term = prob * kemble(E - bath_level_energy(params, 2 * m), lam, hbar)
        t = value + term
        comp += (value - t) + term if abs(value) >= abs(term) else (term - t) + value
        value = t
        mass = max(1.0 - cumulative, 0.0)
        bound = mass * kemble(E - bath_level_energy(params, 2 * m + 2), lam, hbar)
        if bound < tol:
            return TransmissionResult(value + comp, m + 1, bound, mass)
        if m + 1 >= max_terms:
            raise SeriesLimitError(
                f"T_quad tail bound {bound:.3e} still above tol={tol:g} after {max_terms} terms "
                f"(s={state.s}, E={E})"
            )
    raise AssertionError("unreachable")  # pragma: no cover


def transmission_qnf(params: ModelParams, state: SqueezedState, E: float) -> float:
    """Kemble factor evaluated at the mean effective reactive energy.

    ``state`` squeezes the first bath mode; any other modes are vacuum.
    """
    if state.hbar != params.hbar:
        raise DomainError(f"state hbar {state.hbar} differs from model hbar {params.hbar}")
    symbol = build_two_dof_symbol(params)
    result = reactive_energy(symbol, bath_states(params, state.s), E)
    return kemble(result.h_react, params.lam, params.hbar)


def suppression_metric(t_s: float, t_0: float) -> float:
    """Transmission relative to the unsqueezed reference, ``t_s / t_0``."""
    if not t_0 > 0.0:
        raise UndefinedReferenceError(f"reference transmission is {t_0!r}")
    return t_s / t_0
