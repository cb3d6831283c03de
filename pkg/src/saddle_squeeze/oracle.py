"""Independent reference computations used to cross-check the closed forms.

Three engines, deliberately sharing no code path with the quantities they
check:

* Monte Carlo sampling of the squeezed Wigner density.  Random numbers come
  from NumPy's ``PCG64`` bit generator (permuted congruential generator,
  64-bit output, 128-bit state) seeded through ``SeedSequence``, which is
  platform independent.
* Tensor-product Gauss-Hermite quadrature against :func:`wigner_density`,
  with nodes found by Newton iteration on orthonormal Hermite polynomials.
* A log-space summation of the quadratic transmission series built from the
  factorial closed form of the number distribution.
"""

from __future__ import annotations

import functools
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .qnf_symbol import ModelParams
from .squeezed_state import SqueezedState, covariance, log_cosh, wigner_density
from .transmission import bath_level_energy, kemble

__all__ = [
    "McEstimate",
    "QuadratureEstimate",
    "gauss_hermite",
    "mc_bath_moment",
    "quad_integrate",
    "quad_bath_moment",
    "series_tquad_reference",
    "log_number_distribution",
    "MIN_MC_SAMPLES",
]

MIN_MC_SAMPLES = 1000
_NEWTON_TOL = 1e-14
_NEWTON_MAXIT = 100
_MC_CHUNK = 1 << 18


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int


@dataclass(frozen=True)
class QuadratureEstimate:
    """Quadrature value plus whether the rule is exact for the integrand."""

    value: float
    order: int
    exact: bool
    warning: str | None = None


@functools.lru_cache(maxsize=64)
def _gauss_hermite_cached(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    # Newton iteration on the orthonormal recursion
    #   p_j = x sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2},  p_0 = pi^{-1/4}
    # with the asymptotic initial guesses of Numerical Recipes' gauher.
    n = order
    pim4 = math.pi**-0.25
    nodes = [0.0] * n
    weights = [0.0] * n
    z = 0.0
    for i in range((n + 1) // 2):
        if i == 0:
            z = math.sqrt(2 * n + 1) - 1.85575 * (2 * n + 1) ** (-1.0 / 6.0)
        elif i == 1:
            z -= 1.14 * n**0.426 / z
        elif i == 2:
            z = 1.86 * z - 0.86 * nodes[0]
        elif i == 3:
            z = 1.91 * z - 0.91 * nodes[1]
        else:
            z = 2.0 * z - nodes[i - 2]
        pp = 0.0
        for _ in range(_NEWTON_MAXIT):
            p1, p2 = pim4, 0.0
            for j in range(1, n + 1):
                p3 = p2
                p2 = p1
                p1 = z * math.sqrt(2.0 / j) * p2 - math.sqrt((j - 1) / j) * p3
            pp = math.sqrt(2.0 * n) * p2
            z1 = z
            z = z1 - p1 / pp
            if abs(z - z1) <= _NEWTON_TOL * max(1.0, abs(z)):
                break
        else:
            raise ArithmeticError(f"Gauss-Hermite Newton iteration stalled (order {n}, root {i})")
        nodes[i] = z
        nodes[n - 1 - i] = -z
        weights[i] = weights[n - 1 - i] = 2.0 / (pp * pp)
    order_idx = sorted(range(n), key=nodes.__getitem__)
    return tuple(nodes[k] for k in order_idx), tuple(weights[k] for k in order_idx)


def gauss_hermite(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int f(x) exp(-x^2) dx``.

    Exact for polynomials of degree ``2 * order - 1``.
    """
    if isinstance(order, bool) or int(order) != order or order < 1:
        raise DomainError(f"quadrature order must be a positive integer, got {order!r}")
    x, w = _gauss_hermite_cached(int(order))
    return np.array(x), np.array(w)


def quad_integrate(state: SqueezedState, f: Callable | None, order: int) -> float:
    """``int int f(q, p) W_s(q, p) dq dp`` by Gauss-Hermite quadrature.

    The axes are rescaled by ``sqrt(hbar) e^{-s}`` and ``sqrt(hbar) e^{s}``
    so that the Wigner density, evaluated directly at the nodes, cancels
    the Hermite weight up to a constant.  ``f=None`` integrates the density
    alone.
    """
    x, w = gauss_hermite(order)
    a = math.sqrt(state.hbar) * math.exp(-state.s)
    b = math.sqrt(state.hbar) * math.exp(state.s)
    X, Y = np.meshgrid(x, x, indexing="ij")
    q, p = a * X, b * Y
    density = wigner_density(state, q, p) * np.exp(X * X + Y * Y)
    integrand = density if f is None else density * f(q, p)
    return float(a * b * (w @ integrand @ w))


def quad_bath_moment(
    state: SqueezedState, exps: tuple[int, int], order: int
) -> QuadratureEstimate:
    """Quadrature value of ``<q^{2m} p^{2l}>`` for ``exps = (2m, 2l)``.

    Exactness needs ``order >= m + l + 1``; lower orders still return a
    value but carry a warning.
    """
    qe, pe = exps
    if qe < 0 or pe < 0 or qe % 2 or pe % 2:
        raise DomainError(f"exponents must be even and non-negative, got {exps}")
    m, l = qe // 2, pe // 2  # noqa: E741
    value = quad_integrate(state, lambda q, p: q**qe * p**pe, order)
    exact = order >= m + l + 1
    warning = None if exact else f"order {order} < {m + l + 1}: result not exact"
    return QuadratureEstimate(value, order, exact, warning)


def mc_bath_moment(
    state: SqueezedState, n: int, n_samples: int = 10**6, seed: int = 0
) -> McEstimate:
    """Monte Carlo estimate of ``<J^n>`` with ``J = (q^2 + p^2)/2``.

    Samples are drawn in fixed-size chunks from one ``PCG64`` stream, so
    the estimate depends only on ``(state, n, n_samples, seed)``.
    """
    if n_samples < 1:
        raise DomainError("Monte Carlo needs at least one sample")
    if n_samples < MIN_MC_SAMPLES:
        raise DomainError(f"n_samples must be >= {MIN_MC_SAMPLES}, got {n_samples}")
    cov = covariance(state)
    sd_q, sd_p = math.sqrt(cov.var_q), math.sqrt(cov.var_p)
    rng = np.random.Generator(np.random.PCG64(seed))
    total = 0.0
    total_sq = 0.0
    remaining = n_samples
    # first pass: shift by a pilot mean to keep the variance sum well conditioned
    shift = None
    while remaining:
        size = min(remaining, _MC_CHUNK)
        q = rng.standard_normal(size) * sd_q
        p = rng.standard_normal(size) * sd_p
        vals = (0.5 * (q * q + p * p)) ** n
        if shift is None:
            shift = float(vals.mean())
        d = vals - shift
        total += float(d.sum())
        total_sq += float((d * d).sum())
        remaining -= size
    mean_d = total / n_samples
    var = (total_sq - n_samples * mean_d * mean_d) / (n_samples - 1)
    return McEstimate(shift + mean_d, math.sqrt(max(var, 0.0) / n_samples), n_samples)


def log_number_distribution(s: float, m: int) -> float:
    """``log P_2m(s)`` from the factorial closed form via ``lgamma``."""
    if m == 0:
        return -log_cosh(s)
    if s == 0.0:
        return -math.inf
    return (
        2 * m * math.log(abs(math.tanh(s)))
        - log_cosh(s)
        + math.lgamma(2 * m + 1)
        - 2 * m * math.log(2.0)
        - 2 * math.lgamma(m + 1)
    )


def series_tquad_reference(
    params: ModelParams, state: SqueezedState, E: float, m_max: int = 5000
) -> float:
    """Quadratic transmission summed over the first ``m_max`` even levels.

    Independent of :func:`saddle_squeeze.transmission.transmission_quadratic`:
    no recurrence, no adaptive stopping, exact ``math.fsum`` accumulation.
    """
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    terms = []
    for m in range(m_max):
        log_p = log_number_distribution(state.s, m)
        if log_p == -math.inf:
            break
        terms.append(math.exp(log_p) * kemble(E - bath_level_energy(params, 2 * m), params.lam, params.hbar))
    return math.fsum(terms)
