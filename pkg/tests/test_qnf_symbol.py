import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saddle_squeeze import (
    ModelParams,
    NoBottleneckError,
    QnfSymbol,
    QnfTerm,
    SingularDenominatorError,
    SqueezedState,
    ThresholdOutcome,
    ValidationError,
    action_area_scale,
    bath_action_power_moment,
    build_two_dof_symbol,
    candidate_width,
    depletion_threshold,
    geometric_threshold,
    max_bath_actions,
    reactive_energy,
)
from saddle_squeeze.qnf_symbol import bath_states


def h_react(params, s, E):
    return reactive_energy(build_two_dof_symbol(params), bath_states(params, s), E).h_react


def literal_two_dof(params, s, E):
    state = SqueezedState(s, params.hbar)
    j1 = bath_action_power_moment(state, 1)
    j2 = bath_action_power_moment(state, 2)
    lam = params.lam
    return lam * (E - params.E0 - params.omega[0] * j1 - params.alpha * j2) / (lam + params.b2 * j1)


class TestSymbolModel:
    def test_quadratic_symbol_has_two_terms(self, quadratic):
        sym = build_two_dof_symbol(quadratic)
        assert sym.terms == (QnfTerm(1.0, 1, (0,)), QnfTerm(1.0, 0, (1,)))
        assert sym.lam == 1.0 and sym.omega == (1.0,)

    def test_alpha_adds_one_term(self):
        sym = build_two_dof_symbol(ModelParams(1.0, (1.0,), alpha=0.1))
        assert len(sym.terms) == 3
        assert QnfTerm(0.1, 0, (2,)) in sym.terms

    def test_full_symbol(self):
        sym = build_two_dof_symbol(ModelParams(2.0, (1.5, 3.0), alpha=0.1, b2=-0.2, E0=0.7, hbar=0.5))
        assert len(sym.terms) == 6
        assert sym.n_bath == 2 and sym.hbar == 0.5
        assert QnfTerm(-0.2, 1, (1, 0)) in sym.terms

    def test_round_trip(self, anharmonic):
        sym = build_two_dof_symbol(anharmonic)
        assert QnfSymbol.loads(sym.dumps()) == sym

    @given(coeffs=st.lists(st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False), min_size=1, max_size=5))
    def test_round_trip_bit_exact(self, coeffs):
        extra = tuple(QnfTerm(c, 0, (k + 2,), hbar_power=k % 3) for k, c in enumerate(coeffs))
        sym = QnfSymbol((QnfTerm(math.pi, 1, (0,)), QnfTerm(1 / 3, 0, (1,))) + extra, 1, 1.05)
        back = QnfSymbol.loads(sym.dumps())
        assert [t.coeff for t in back.terms] == [t.coeff for t in sym.terms]
        assert back == sym

    @pytest.mark.parametrize(
        "kwargs, path",
        [({"lam": 0.0}, "lambda"), ({"lam": 1.0, "omega": (-1.0,)}, "omega[0]"), ({"lam": 1.0, "hbar": 0.0}, "hbar")],
    )
    def test_params_validation(self, kwargs, path):
        with pytest.raises(ValidationError) as err:
            ModelParams(**kwargs)
        assert err.value.path == path

    def test_rejects_quadratic_in_reactive_action(self):
        with pytest.raises(ValidationError):
            QnfTerm(1.0, 2, (0,))

    def test_rejects_missing_reactive_term(self):
        with pytest.raises(ValidationError):
            QnfSymbol((QnfTerm(1.0, 0, (1,)),), 1, 1.0)

    def test_rejects_missing_bath_frequency(self):
        with pytest.raises(ValidationError):
            QnfSymbol((QnfTerm(1.0, 1, (0, 0)), QnfTerm(1.0, 0, (1, 0))), 2, 1.0)

    def test_rejects_wrong_exponent_length(self):
        with pytest.raises(ValidationError):
            QnfSymbol((QnfTerm(1.0, 1, (0,)), QnfTerm(1.0, 0, (1, 0))), 1, 1.0)

    def test_loads_reports_path(self):
        with pytest.raises(ValidationError, match=r"terms\[1\]"):
            QnfSymbol.from_dict({"hbar": 1.0, "n_bath": 1, "terms": [
                {"coeff": 1.0, "i_power": 1, "j_powers": [0]},
                {"coeff": "x", "i_power": 0, "j_powers": [1]},
            ]})


class TestReactiveEnergy:
    def test_quadratic_vacuum(self, quadratic):
        assert h_react(quadratic, 0.0, 2.0) == pytest.approx(1.5, rel=1e-15)

    def test_quadratic_squeezed(self, quadratic):
        assert h_react(quadratic, 1.0, 2.0) == pytest.approx(0.118902154458184270, rel=1e-13)

    def test_anharmonic_hand_value(self, anharmonic):
        res = reactive_energy(build_two_dof_symbol(anharmonic), bath_states(anharmonic, 0.0), 2.0)
        assert res.offset == pytest.approx(0.525, rel=1e-15)
        assert res.denominator == pytest.approx(1.1, rel=1e-15)
        assert res.h_react == pytest.approx(1.475 / 1.1, rel=1e-15)
        assert res.h_react == anharmonic.lam * res.i_expectation

    @pytest.mark.parametrize("s", [0.0, 0.6])
    def test_anharmonic_energy_reassembled_by_monte_carlo(self, anharmonic, s):
        E = 2.0
        i_exp = reactive_energy(build_two_dof_symbol(anharmonic), bath_states(anharmonic, s), E).i_expectation
        rng = np.random.Generator(np.random.PCG64(2024))
        n = 10**6
        q = rng.standard_normal(n) * math.sqrt(0.5 * math.exp(-2 * s))
        p = rng.standard_normal(n) * math.sqrt(0.5 * math.exp(2 * s))
        j = 0.5 * (q * q + p * p)
        # product state: I is independent of the bath, so use <I> per sample
        h = anharmonic.lam * i_exp + anharmonic.omega[0] * j + anharmonic.alpha * j * j + anharmonic.b2 * i_exp * j
        se = h.std(ddof=1) / math.sqrt(n)
        assert abs(h.mean() - E) < 5 * se

    @settings(max_examples=50)
    @given(s=st.floats(0, 3), E=st.floats(0.5, 10))
    def test_quadratic_reduction(self, s, E):
        params = ModelParams(1.3, (0.7,), hbar=0.9)
        closed = E - 0.5 * 0.9 * 0.7 * math.cosh(2 * s)
        assert h_react(params, s, E) == pytest.approx(closed, rel=1e-13, abs=1e-13)

    @settings(max_examples=50)
    @given(s=st.floats(0, 3), E=st.floats(0.5, 10))
    def test_matches_literal_two_dof_expression(self, s, E):
        params = ModelParams(1.2, (0.9,), alpha=0.07, b2=0.3, E0=0.2, hbar=1.1)
        lit = literal_two_dof(params, s, E)
        assert h_react(params, s, E) == pytest.approx(lit, rel=1e-13, abs=1e-13)

    def test_depletion_monotone(self):
        params = ModelParams(1.0, (1.0,), alpha=0.05, b2=0.2)
        values = [h_react(params, s, 3.0) for s in np.arange(0, 3.0001, 0.1)]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_spectator_modes_add_zero_point(self):
        params = ModelParams(1.0, (1.0, 2.0))
        assert h_react(params, 1.0, 5.0) == pytest.approx(5.0 - 0.5 * math.cosh(2.0) - 1.0, rel=1e-14)

    def test_hbar_power_terms(self):
        terms = (QnfTerm(1.0, 1, (0,)), QnfTerm(1.0, 0, (1,)), QnfTerm(0.3, 0, (1,), hbar_power=2))
        sym = QnfSymbol(terms, 1, 2.0)
        state = SqueezedState(0.5, 2.0)
        j = bath_action_power_moment(state, 1)
        res = reactive_energy(sym, [state], 7.0)
        assert res.h_react == pytest.approx(7.0 - j - 0.3 * 4.0 * j, rel=1e-14)

    def test_singular_denominator(self):
        params = ModelParams(1.0, (1.0,), b2=-2.0)
        with pytest.raises(SingularDenominatorError):
            h_react(params, 0.0, 2.0)

    def test_state_count_mismatch(self, quadratic):
        with pytest.raises(ValidationError):
            reactive_energy(build_two_dof_symbol(quadratic), [], 2.0)

    def test_hbar_mismatch(self, quadratic):
        with pytest.raises(ValidationError):
            reactive_energy(build_two_dof_symbol(quadratic), [SqueezedState(0.0, 2.0)], 2.0)


class TestCandidateWidth:
    def test_two_dof(self, quadratic):
        assert candidate_width(quadratic, 2.0) == pytest.approx(4 * math.pi, rel=1e-15)

    def test_min_over_modes(self):
        assert candidate_width(ModelParams(1.0, (1.0, 2.0)), 2.0) == pytest.approx(2 * math.pi, rel=1e-15)

    @pytest.mark.parametrize("E", [0.0, -1.0])
    def test_closed_bottleneck(self, quadratic, E):
        with pytest.raises(NoBottleneckError):
            candidate_width(quadratic, E)

    @pytest.mark.parametrize("alpha", [0.05, -0.05, 1e-9])
    def test_anharmonic_root(self, alpha):
        params = ModelParams(1.0, (1.3,), alpha=alpha, E0=0.4)
        (j,) = max_bath_actions(params, 2.0)
        assert j > 0
        assert 1.3 * j + alpha * j * j == pytest.approx(1.6, rel=1e-14)
        if alpha < 0:
            # smaller of the two positive roots
            assert j < -1.3 / (2 * alpha)

    def test_anharmonic_beyond_truncation(self):
        with pytest.raises(NoBottleneckError):
            max_bath_actions(ModelParams(1.0, (1.0,), alpha=-0.5), 1.0)


class TestThresholds:
    def test_geometric_at_unit_ratio(self):
        # c_cand = pi hbar when E - E0 = omega hbar / 2
        res = geometric_threshold(ModelParams(1.0, (1.0,)), 0.5)
        assert res.outcome is ThresholdOutcome.THRESHOLD and res.value == 0.0

    def test_geometric_example(self, quadratic):
        res = geometric_threshold(quadratic, 2.0)
        assert res.value == pytest.approx(1.03171853444778027, rel=1e-14)
        assert action_area_scale(SqueezedState(res.value)) == pytest.approx(4 * math.pi, rel=1e-10)

    def test_geometric_below_floor(self, quadratic):
        res = geometric_threshold(quadratic, 0.25)
        assert res.outcome is ThresholdOutcome.AT_FLOOR and res.value == 0.0

    def test_depletion_at_zero_point(self, quadratic):
        res = depletion_threshold(quadratic, 0.5)
        assert res.outcome is ThresholdOutcome.THRESHOLD and res.value == 0.0

    def test_depletion_example(self, quadratic):
        res = depletion_threshold(quadratic, 2.0)
        assert res.value == pytest.approx(1.03171853444778027, rel=1e-14)
        assert abs(h_react(quadratic, res.value, 2.0)) < 1e-10

    def test_depletion_below_floor(self, quadratic):
        assert depletion_threshold(quadratic, 0.3).outcome is ThresholdOutcome.AT_FLOOR

    @pytest.mark.parametrize("b2", [0.0, 0.2])
    def test_anharmonic_bisection(self, b2):
        params = ModelParams(1.0, (1.0,), alpha=0.05, b2=b2)
        res = depletion_threshold(params, 2.0)
        assert res.found
        assert res.value == pytest.approx(0.921749998738919576, abs=1e-10)
        assert abs(h_react(params, res.value, 2.0)) < 1e-9

    def test_anharmonic_outcomes(self, anharmonic):
        assert depletion_threshold(anharmonic, 0.3).outcome is ThresholdOutcome.AT_FLOOR
        no_root = depletion_threshold(anharmonic, 2.0, bracket=(0.0, 0.1))
        assert no_root.outcome is ThresholdOutcome.NO_ROOT and math.isnan(no_root.value)

    def test_pole_is_not_a_root(self):
        # 1 - 0.5 <J> vanishes near s = 1.03 while the numerator stays positive
        params = ModelParams(1.0, (1.0,), b2=-0.5)
        res = depletion_threshold(params, 10.0, bracket=(0.0, 1.5))
        assert res.outcome is ThresholdOutcome.NO_ROOT
