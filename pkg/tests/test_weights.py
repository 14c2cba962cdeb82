import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from periodic_psido.weights import (
    ModerateWeight,
    PolynomialWeight,
    default_moderation_samples,
    eval_weight,
    moderation_check,
    parse_weight,
)

vec2 = st.lists(st.floats(-30, 30, allow_nan=False), min_size=2, max_size=2)


class TestPolynomialWeight:
    def test_s0_is_one(self):
        assert eval_weight(PolynomialWeight(0), np.array([3.0, -7.0])) == 1.0

    def test_s2_value(self):
        assert eval_weight(PolynomialWeight(2), np.array([1.0, 1.0])) == pytest.approx(3.0, abs=0)

    def test_s1_value(self):
        assert eval_weight(PolynomialWeight(1), np.array([3.0, 4.0])) == pytest.approx(np.sqrt(26), rel=1e-15)

    def test_origin_is_exactly_one(self):
        for s in (0, 0.5, 2, 7):
            assert eval_weight(PolynomialWeight(s), np.zeros(4)) == 1.0

    def test_vectorised_shape(self):
        z = np.zeros((3, 5, 2))
        assert PolynomialWeight(2)(z).shape == (3, 5)

    @pytest.mark.parametrize("bad", [-1.0, float("nan"), float("inf")])
    def test_bad_exponent(self, bad):
        with pytest.raises(ValueError):
            PolynomialWeight(bad)

    def test_non_finite_argument(self):
        with pytest.raises(ValueError):
            PolynomialWeight(2)(np.array([np.nan, 0.0]))

    @given(vec2, st.floats(0, 6))
    def test_radial_and_at_least_one(self, z, s):
        v = PolynomialWeight(s)
        z = np.asarray(z)
        assert v(z) == v(-z)
        assert v(z) >= 1.0

    @given(vec2, vec2, st.sampled_from([0.0, 1.0, 2.0, 3.5]))
    def test_submultiplicative(self, z1, z2, s):
        v = PolynomialWeight(s)
        z1, z2 = np.asarray(z1), np.asarray(z2)
        assert v(z1 + z2) <= v.submultiplicative_constant * v(z1) * v(z2) * (1 + 1e-12)


class TestModeration:
    def test_polynomial_s2_brute_force(self):
        # every pair from a 41 x 41 grid on [-5, 5]^2
        axis = np.linspace(-5, 5, 41)
        pts = np.array(list(itertools.product(axis, axis)))
        rep = moderation_check(ModerateWeight.from_polynomial(PolynomialWeight(2), 2), pts)
        assert rep.passed and rep.constant == 2.0
        assert rep.max_ratio <= 4 / 3 + 1e-12

    def test_constant_weight(self):
        rep = moderation_check(ModerateWeight.constant_one(2))
        assert rep.passed and rep.max_ratio == 1.0 and rep.constant == 1.0

    def test_exponential_fails(self):
        rep = moderation_check(parse_weight("exponential", 2))
        assert not rep.passed and rep.max_ratio > 100

    def test_explicit_pairs(self):
        m = ModerateWeight.from_polynomial(PolynomialWeight(2), 1)
        pairs = np.array([[[1.0], [1.0]], [[0.5], [0.5]]])
        rep = moderation_check(m, pairs)
        # (1 + 1) / (1.25 * 1.25) at the second pair
        assert rep.max_ratio == pytest.approx(max(5 / 4, 2 / 1.5625))
        assert rep.worst_pair == ((0.5,), (0.5,))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            moderation_check(ModerateWeight.constant_one(1), np.zeros((0, 1)))

    def test_nonpositive_weight_rejected(self):
        m = ModerateWeight(lambda z: z[..., 0], PolynomialWeight(0), 1.0, 1)
        with pytest.raises(ValueError):
            moderation_check(m)

    def test_default_samples(self):
        pts = default_moderation_samples(2)
        assert pts.shape == (17 * 17, 2) and pts.min() == -8 and pts.max() == 8

    def test_bad_constant(self):
        with pytest.raises(ValueError):
            ModerateWeight(lambda z: np.ones(z.shape[:-1]), PolynomialWeight(0), 0.0, 1)


class TestParse:
    @pytest.mark.parametrize(
        "text, s, C", [("polynomial(2)", 2.0, 2.0), ("polynomial( 1.5 )", 1.5, 2**0.75), ("peetre", 2.0, 2.0)]
    )
    def test_polynomial(self, text, s, C):
        m = parse_weight(text, 2)
        assert m.reference.s == s and m.constant == pytest.approx(C)

    def test_constant(self):
        m = parse_weight("constant", 3)
        assert m(np.ones((4, 3))).tolist() == [1.0] * 4

    def test_unknown(self):
        with pytest.raises(ValueError):
            parse_weight("gaussian", 2)
