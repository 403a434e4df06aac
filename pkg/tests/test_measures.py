"""Discrete measures: worked values and error semantics.

Expected values marked "oracle" were computed independently with mpmath at
40 digits from the defining sums and frozen here.
"""
import math

import numpy as np
import pytest

from beliefinfo import measures as m
from beliefinfo.errors import (
    ConflictingDivergence,
    InputError,
    InvalidOrder,
    NonFiniteInfo,
    SupportMismatch,
    UndefinedRatio,
    ZeroDenominator,
)

LN2 = math.log(2)
P_WIN = 2.0**-20
LOTTERY = [P_WIN, 1 - P_WIN]

VIEW = [0.5, 0.5]
Q1 = [0.8, 0.2]
Q0 = [0.25, 0.75]


class TestTypes:
    def test_categorical_normalization_tolerance(self):
        m.Categorical([0.5, 0.5 + 5e-13])
        with pytest.raises(InputError):
            m.Categorical([0.5, 0.5 + 1e-11])

    def test_categorical_clamps_tiny_negatives(self):
        c = m.Categorical([1.0 + 5e-13, -5e-13])
        assert c.probs[1] == 0.0
        with pytest.raises(InputError):
            m.Categorical([1.1, -0.1])

    def test_categorical_is_immutable(self):
        c = m.Categorical([0.5, 0.5])
        with pytest.raises(ValueError):
            c.probs[0] = 1.0

    def test_belief_weights_improper(self):
        w = m.BeliefWeights([3.0, 0.0, 7.0])
        assert w.support_size == 3
        np.testing.assert_allclose(w.normalized().probs, [0.3, 0.0, 0.7])
        with pytest.raises(InputError):
            m.BeliefWeights([0.0, 0.0])
        with pytest.raises(InputError):
            m.BeliefWeights([1.0, -1.0])

    def test_joint_marginals(self):
        j = m.JointCategorical([[0.1, 0.2], [0.3, 0.4]])
        np.testing.assert_allclose(j.row_marginal().probs, [0.3, 0.7])
        np.testing.assert_allclose(j.col_marginal().probs, [0.4, 0.6])

    def test_json_roundtrip(self):
        c = m.Categorical.from_json({"probs": [0.25, 0.75]})
        assert m.Categorical.from_json(c.to_json()).probs.tolist() == [0.25, 0.75]
        w = m.BeliefWeights.from_json({"weights": [2, 3]})
        assert w.to_json() == {"weights": [2.0, 3.0]}
        j = m.JointCategorical.from_json({"probs": [[0.5, 0], [0, 0.5]]})
        assert j.to_json()["probs"] == [[0.5, 0.0], [0.0, 0.5]]

    def test_info_value_units(self):
        v = m.InfoValue(math.log(8))
        assert v.nats == math.log(8)
        assert v.bits == pytest.approx(3.0, abs=1e-15)
        assert v.to("bits") == v.bits
        with pytest.raises(InputError):
            v.to("hartleys")
        assert m.InfoValue(math.inf).bits == math.inf


class TestInfo:
    def test_no_change_is_zero(self):
        assert m.info(Q1, Q1, Q1) == 0.0

    def test_winning_ticket_is_20_bits(self):
        assert m.info([1, 0], [1, 0], LOTTERY).bits == pytest.approx(20.0, abs=1e-12)

    def test_two_outcome_oracle(self):
        assert m.info(VIEW, Q1, Q0) == pytest.approx(-0.07930251508831929, rel=1e-13)

    def test_zero_view_terms_are_skipped(self):
        # q1 = q0 = 0 is harmless where the view has no mass.
        assert m.info([1, 0], [0.5, 0], [0.25, 0]) == pytest.approx(math.log(2))

    def test_signed_divergences(self):
        assert m.info([0.5, 0.5], [1, 0], [0.5, 0.5]) == -math.inf
        assert m.info([0.5, 0.5], [0.5, 0.5], [1, 0]) == math.inf

    def test_errors(self):
        with pytest.raises(SupportMismatch):
            m.info([1.0], [0.5, 0.5], [0.5, 0.5])
        with pytest.raises(UndefinedRatio):
            m.info([0.5, 0.5], [1, 0], [1, 0])
        with pytest.raises(ConflictingDivergence):
            m.info([0.5, 0.5], [1, 0], [0, 1])

    def test_improper_reference(self):
        # Against unit weights, info recovers negative entropy of the view.
        p = np.array([0.2, 0.3, 0.5])
        assert m.info(p, p, np.ones(3)) == pytest.approx(-m.entropy(p), rel=1e-15)


class TestDensity:
    def test_values(self):
        assert m.info_density(Q1, Q1, 1) == 0.0
        assert m.info_density([1.0] * 10, [0.1] * 10, 4).bits == pytest.approx(math.log2(10), abs=1e-14)
        assert m.info_density(Q1, Q0, 0) == pytest.approx(1.1631508098056809, rel=1e-14)

    def test_signed_infinities_and_errors(self):
        assert m.info_density([0, 1], [0.5, 0.5], 0) == -math.inf
        assert m.info_density([0.5, 0.5], [0, 1], 0) == math.inf
        with pytest.raises(UndefinedRatio):
            m.info_density([0, 1], [0, 1], 0)
        with pytest.raises(InputError):
            m.info_density(Q1, Q0, 2)


class TestPseudometric:
    def test_oracle_values(self):
        assert m.pseudometric_lp(VIEW, Q1, Q1, 1) == 0.0
        assert m.pseudometric_lp(VIEW, Q1, Q0, 1) == pytest.approx(1.2424533248940002, rel=1e-13)
        assert m.pseudometric_lp(VIEW, Q1, Q0, 2) == pytest.approx(1.244981587590551, rel=1e-13)

    def test_symmetric(self):
        assert m.pseudometric_lp(VIEW, Q1, Q0, 3) == pytest.approx(m.pseudometric_lp(VIEW, Q0, Q1, 3), rel=1e-15)

    def test_infinite_density(self):
        assert m.pseudometric_lp(VIEW, [1, 0], Q0, 2) == math.inf

    def test_order(self):
        with pytest.raises(InvalidOrder):
            m.pseudometric_lp(VIEW, Q1, Q0, 0.5)


class TestVariance:
    def test_values(self):
        assert m.info_variance(VIEW, Q1, Q1) == 0.0
        assert m.info_variance([0, 1], Q1, Q0) == 0.0
        assert m.info_variance(VIEW, Q1, Q0) == pytest.approx(1.5436902645401559, rel=1e-13)

    def test_requires_finite(self):
        with pytest.raises(NonFiniteInfo):
            m.info_variance(VIEW, [1, 0], Q0)


class TestEntropyFamily:
    def test_entropy(self):
        assert m.entropy(m.Categorical.uniform(10)).bits == pytest.approx(math.log2(10), abs=1e-14)
        assert m.entropy(m.Categorical.delta(4, 2)) == 0.0
        assert m.entropy(LOTTERY).bits == pytest.approx(2.0449346878965513e-05, rel=1e-12)
        assert m.entropy(LOTTERY).bits == pytest.approx(2.04e-5, rel=0.01)

    def test_cross_entropy(self):
        q = [0.2, 0.3, 0.5]
        assert m.cross_entropy(q, q) == pytest.approx(m.entropy(q), rel=1e-15)
        assert m.cross_entropy([0, 1, 0], q) == pytest.approx(math.log(1 / 0.3), rel=1e-15)
        assert m.cross_entropy([0.5, 0.5], [0.9, 0.1]) == pytest.approx(1.203972804325936, rel=1e-14)
        assert m.cross_entropy([0.5, 0.5], [1.0, 0.0]) == math.inf

    def test_realization_info(self):
        assert m.realization_info(LOTTERY, 1).bits == pytest.approx(1.3758618629646342e-06, rel=1e-9)
        assert m.realization_info(LOTTERY, 1).bits == pytest.approx(1.38e-6, rel=0.01)
        assert m.realization_info(LOTTERY, 0).bits == pytest.approx(20.0, abs=1e-12)
        assert m.realization_info([0, 1, 0], 1) == 0.0
        assert m.realization_info([0.5, 0.0, 0.5], 1) == math.inf
        with pytest.raises(InputError):
            m.realization_info([0.5, 0.5], 5)

    def test_kl(self):
        assert m.kl(Q1, Q1) == 0.0
        assert m.kl(Q1, [0.5, 0.5]) == pytest.approx(0.19274475702175743, rel=1e-14)
        assert m.kl(m.Categorical.delta(7, 3), m.Categorical.uniform(7)) == pytest.approx(math.log(7), rel=1e-15)

    def test_lindley(self):
        assert m.lindley(Q1, Q1) == 0.0
        assert m.lindley([1, 0], LOTTERY).bits == pytest.approx(-2.04e-5, rel=0.01)
        assert m.lindley([0, 1], LOTTERY).bits == pytest.approx(-2.04e-5, rel=0.01)
        assert m.lindley(m.Categorical.uniform(2), m.Categorical.uniform(4)).bits == pytest.approx(-1.0, abs=1e-15)

    def test_mutual_information(self):
        assert m.mutual_information(np.outer([0.3, 0.7], [0.6, 0.4])) == pytest.approx(0.0, abs=1e-16)
        assert m.mutual_information([[0.5, 0], [0, 0.5]]).bits == pytest.approx(1.0, abs=1e-15)
        assert m.mutual_information([[0.4, 0.1], [0.1, 0.4]]).bits == pytest.approx(0.27807190511263765, rel=1e-13)


class TestPerturbation:
    def test_direction_signs(self):
        view, q1 = np.array([0.7, 0.3]), np.array([0.5, 0.5])
        assert m.perturbation_derivative(view, q1, q1, view - q1) > 0
        assert m.perturbation_derivative(view, q1, q1, q1 - view) < 0

    def test_closed_form(self):
        d = m.perturbation_derivative([0.7, 0.3], [0.5, 0.5], [0.5, 0.5], [0.1, -0.1])
        assert d == pytest.approx(0.08, abs=1e-15)

    def test_matches_finite_difference(self):
        view, q1, q0 = np.array([0.2, 0.5, 0.3]), np.array([0.3, 0.3, 0.4]), np.array([0.1, 0.6, 0.3])
        eta = np.array([0.05, -0.02, -0.03])
        h = 1e-6
        fd = (m.info(view, q1 + h * eta, q0) - m.info(view, q1 - h * eta, q0)) / (2 * h)
        assert m.perturbation_derivative(view, q1, q0, eta) == pytest.approx(fd, rel=1e-7)

    def test_errors(self):
        with pytest.raises(ZeroDenominator):
            m.perturbation_derivative([0.5, 0.5, 0], [0.5, 0.5, 0], [1, 1, 1], [0.1, 0, -0.1])
        with pytest.raises(InputError):
            m.perturbation_derivative([0.5, 0.5], [0.5, 0.5], [0.5, 0.5], [0.1, 0.1])
