import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from saddle_squeeze import (
    DomainError,
    SqueezedState,
    ValidationError,
    action_area_scale,
    covariance,
    expected_bath_action,
    number_distribution,
    number_distribution_prefix,
    occupation_probability,
    wigner_density,
)
from saddle_squeeze.oracle import quad_integrate

squeezes = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
hbars = st.floats(min_value=0.05, max_value=20.0, allow_nan=False)


def closed_form_p2m(s, m):
    # exact central binomial ratio, no recurrence
    ratio = Fraction(math.comb(2 * m, m), 4**m)
    return math.tanh(s) ** (2 * m) / math.cosh(s) * float(ratio)


@pytest.mark.parametrize("hbar", [0.0, -1.0, math.inf, math.nan])
def test_rejects_bad_hbar(hbar):
    with pytest.raises(ValidationError):
        SqueezedState(0.3, hbar)


def test_rejects_nonfinite_squeeze():
    with pytest.raises(ValidationError):
        SqueezedState(math.inf)


def test_covariance_examples():
    cov = covariance(SqueezedState(0.0))
    assert (cov.var_q, cov.var_p) == (0.5, 0.5)

    cov = covariance(SqueezedState(1.0))
    assert cov.var_q == pytest.approx(0.0676676416183063459, rel=1e-15)
    assert cov.var_p == pytest.approx(3.69452804946532511, rel=1e-15)
    assert cov.determinant == pytest.approx(0.25, rel=1e-15)

    flipped = covariance(SqueezedState(-1.0))
    assert (flipped.var_q, flipped.var_p) == (cov.var_p, cov.var_q)


@given(s=squeezes, hbar=hbars)
def test_symplectic_eigenvalue_fixed(s, hbar):
    cov = covariance(SqueezedState(s, hbar))
    assert cov.determinant == pytest.approx((hbar / 2) ** 2, rel=1e-12)
    assert cov.symplectic_eigenvalue == pytest.approx(hbar / 2, rel=1e-12)


@given(s=squeezes)
def test_wigner_peak_height_independent_of_squeeze(s):
    assert wigner_density(SqueezedState(s), 0.0, 0.0) == pytest.approx(1 / math.pi, rel=1e-15)


def test_wigner_vacuum_peak():
    assert wigner_density(SqueezedState(0.0), 0.0, 0.0) == pytest.approx(0.318309886183790671, rel=1e-15)


def test_wigner_is_vectorised_and_positive():
    import numpy as np

    q = np.linspace(-2, 2, 5)
    w = wigner_density(SqueezedState(0.4, 2.0), q, q[::-1])
    assert w.shape == (5,)
    assert (w > 0).all()


@pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 2.0, -1.5])
@pytest.mark.parametrize("hbar", [0.5, 1.0, 2.0])
def test_wigner_integrates_to_one(s, hbar):
    assert quad_integrate(SqueezedState(s, hbar), None, 30) == pytest.approx(1.0, abs=1e-8)


def test_expected_bath_action_examples():
    assert expected_bath_action(SqueezedState(0.0)) == 0.5
    assert expected_bath_action(SqueezedState(1.0)) == pytest.approx(1.88109784554181573, rel=1e-15)
    assert expected_bath_action(SqueezedState(1.0, 2.0)) == pytest.approx(3.76219569108363146, rel=1e-15)


@given(s=squeezes, hbar=hbars)
def test_expected_bath_action_even_and_floored(s, hbar):
    j = expected_bath_action(SqueezedState(s, hbar))
    assert j == expected_bath_action(SqueezedState(-s, hbar))
    assert j >= hbar / 2


def test_action_area_examples():
    assert action_area_scale(SqueezedState(0.0)) == pytest.approx(math.pi, rel=1e-15)
    assert action_area_scale(SqueezedState(1.0)) == pytest.approx(11.8192863444755118, rel=1e-15)


@given(s=squeezes, hbar=hbars)
def test_action_area_is_two_pi_mean_action(s, hbar):
    state = SqueezedState(s, hbar)
    assert action_area_scale(state) == pytest.approx(2 * math.pi * expected_bath_action(state), rel=1e-14)


def test_number_distribution_examples():
    vac = SqueezedState(0.0)
    assert number_distribution(vac, 0) == 1.0
    assert all(number_distribution(vac, m) == 0.0 for m in range(1, 6))
    assert number_distribution(SqueezedState(1.0), 0) == pytest.approx(0.648054273663885400, rel=1e-15)
    assert number_distribution(SqueezedState(1.0), 1) == pytest.approx(0.187944053375869627, rel=1e-14)


def test_odd_occupations_vanish():
    state = SqueezedState(0.8)
    assert [occupation_probability(state, n) for n in (1, 3, 7)] == [0.0, 0.0, 0.0]
    assert occupation_probability(state, 4) == number_distribution(state, 2)


@pytest.mark.parametrize("bad", [-1, 1.5, True])
def test_number_distribution_rejects_bad_index(bad):
    with pytest.raises(DomainError):
        number_distribution(SqueezedState(1.0), bad)


@pytest.mark.parametrize("s", [0.1, 0.5, 1.0, 2.0, 3.0, -2.0])
def test_recurrence_matches_closed_form(s):
    state = SqueezedState(s)
    for m, prob, _ in number_distribution_prefix(state):
        if m > 50:
            break
        assert prob == pytest.approx(closed_form_p2m(s, m), rel=1e-13, abs=1e-300)


def test_prefix_cumulative_is_running_sum():
    total = 0.0
    for m, prob, cum in number_distribution_prefix(SqueezedState(1.3)):
        total += prob
        assert cum == pytest.approx(total, rel=1e-15)
        if m == 40:
            break


def test_log_space_branch_for_huge_squeeze():
    # P_0 = 1/cosh(800) underflows; the log-space recurrence must not raise
    gen = number_distribution_prefix(SqueezedState(800.0))
    probs = [next(gen)[1] for _ in range(5)]
    assert probs == [0.0] * 5
    # on either side of the linear/log switch P_0 = 2 e^{-s}
    for s in (640.0, 680.0):
        gen = number_distribution_prefix(SqueezedState(s))
        _, p0, _ = next(gen)
        _, p2, _ = next(gen)
        assert p0 == pytest.approx(math.exp(-s + math.log(2.0)), rel=1e-12)
        assert p2 == pytest.approx(0.5 * p0, rel=1e-12)
