import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holointerp import (
    ThetaNorm,
    WeightedCouple,
    couple_from_json,
    couple_to_json,
    interpolation_inequality_check,
    make_weights,
    normalize_couple,
    theta_norm,
    theta_weights,
)
from conftest import random_couple, random_vector


def test_theta_norm_simple_geometric_mean():
    couple = WeightedCouple(2, [1, 1], [4, 4])
    assert theta_norm(couple, 0.5, [1, 0]) == pytest.approx(2.0, abs=1e-15)


def test_theta_norm_endpoints_are_endpoint_norms(rng):
    for _ in range(50):
        couple = random_couple(rng)
        x = random_vector(rng, couple.dim)
        assert theta_norm(couple, 0.0, x) == couple.norm0(x)
        assert theta_norm(couple, 1.0, x) == couple.norm1(x)


def test_theta_norm_frozen_oracle():
    # mpmath 40-digit oracle: sqrt(2^(2/3) + 2^(10/3) + 3^(8/3))
    couple = WeightedCouple(3, [1, 2, 3], [2, 8, 9])
    value = theta_norm(couple, 1.0 / 3.0, [1, 1, 1])
    assert value == pytest.approx(5.5124879916961562324, rel=1e-15)


def test_theta_norm_rejects_bad_inputs():
    couple = WeightedCouple(2, [1, 1], [2, 2])
    with pytest.raises(ValueError, match="theta"):
        theta_norm(couple, 1.5, [1, 0])
    with pytest.raises(ValueError, match="theta"):
        theta_norm(couple, -0.1, [1, 0])
    with pytest.raises(ValueError, match="shape"):
        theta_norm(couple, 0.5, [1, 0, 0])


def test_weights_must_be_strictly_positive():
    with pytest.raises(ValueError, match="w0"):
        WeightedCouple(2, [1, 0], [1, 1])
    with pytest.raises(ValueError, match="w1"):
        WeightedCouple(2, [1, 1], [1, -3])
    with pytest.raises(ValueError, match="w1"):
        WeightedCouple(2, [1, 1], [1, np.inf])


def test_embed_const_recomputable(rng):
    for _ in range(20):
        couple = random_couple(rng)
        assert couple.embed_const == pytest.approx(
            max(a / b for a, b in zip(couple.w0, couple.w1)), rel=1e-15
        )


def test_zero_vector_has_zero_norm():
    couple = WeightedCouple(3, [1, 2, 3], [4, 5, 6])
    assert theta_norm(couple, 0.4, np.zeros(3)) == 0.0


def test_theta_weights_log_affine():
    couple = WeightedCouple(3, [1.0, 2.0, 5.0], [3.0, 0.5, 7.0])
    w_low = theta_weights(couple, 0.2)
    w_mid = theta_weights(couple, 0.5)
    w_high = theta_weights(couple, 0.8)
    np.testing.assert_allclose(w_low * w_high, w_mid**2, rtol=1e-14)


def test_theta_norm_object_matches_function(rng):
    couple = random_couple(rng)
    x = random_vector(rng, couple.dim)
    norm = ThetaNorm.from_couple(couple, 0.37)
    assert norm(x) == theta_norm(couple, 0.37, x)
    assert norm.weights.flags.writeable is False


@settings(max_examples=300, deadline=None)
@given(
    data=st.data(),
    theta=st.floats(min_value=0.0, max_value=1.0),
    dim=st.integers(min_value=1, max_value=12),
)
def test_log_convexity_property(data, theta, dim):
    draw = data.draw
    w0 = np.array([draw(st.floats(1e-3, 1e3)) for _ in range(dim)])
    w1 = np.array([draw(st.floats(1e-3, 1e3)) for _ in range(dim)])
    re = np.array([draw(st.floats(-10, 10)) for _ in range(dim)])
    im = np.array([draw(st.floats(-10, 10)) for _ in range(dim)])
    x = re + 1j * im
    couple = WeightedCouple(dim, w0, w1)
    n0, n1 = couple.norm0(x), couple.norm1(x)
    if n0 == 0.0:
        return
    assert theta_norm(couple, theta, x) <= n0 ** (1 - theta) * n1**theta * (1 + 1e-12)


def test_monotone_in_theta_when_normalized(rng):
    for _ in range(20):
        couple, _ = normalize_couple(random_couple(rng))
        x = random_vector(rng, couple.dim)
        grid = np.linspace(0, 1, 21)
        norms = [theta_norm(couple, t, x) for t in grid]
        assert all(b >= a * (1 - 1e-13) for a, b in zip(norms, norms[1:]))


class TestNormalizeCouple:
    def test_already_normalized_unchanged(self):
        couple = WeightedCouple(2, [1, 1], [1, 1])
        result, factor = normalize_couple(couple)
        assert result is couple
        assert factor == 1.0

    def test_scaling_factor_two(self):
        result, factor = normalize_couple(WeightedCouple(2, [2, 2], [1, 1]))
        assert factor == 2.0
        np.testing.assert_allclose(result.w1, [2.0, 2.0])
        assert abs(result.embed_const - 1.0) <= 1e-14

    def test_asymmetric_weights(self):
        # embed const = max(1/2, 3/2) = 1.5
        result, factor = normalize_couple(WeightedCouple(2, [1, 3], [2, 2]))
        assert factor == pytest.approx(1.5, abs=0)
        np.testing.assert_allclose(result.w1, [3.0, 3.0])

    def test_idempotent(self, rng):
        for _ in range(20):
            first, _ = normalize_couple(random_couple(rng))
            second, factor = normalize_couple(first)
            assert second is first
            assert factor == 1.0
            assert abs(first.embed_const - 1.0) <= 1e-14


class TestInterpolationInequality:
    def test_basis_vector_gives_equality(self):
        couple = WeightedCouple(3, [1, 2, 3], [5, 1, 9])
        e1 = np.array([0, 1.0, 0])
        for theta, ratio in interpolation_inequality_check(couple, e1, np.linspace(0, 1, 9)):
            assert ratio == pytest.approx(1.0, abs=1e-14)

    def test_frozen_oracle_ratio(self):
        # direct arithmetic: sqrt(5) / 34^(1/4)
        couple = WeightedCouple(2, [1, 1], [1, 4])
        rows = interpolation_inequality_check(couple, [1, 1], [0.5])
        assert rows[0][1] == pytest.approx(0.92600913910854259284, rel=1e-14)

    def test_endpoint_ratio_is_one(self):
        couple = WeightedCouple(2, [1, 2], [3, 1])
        rows = interpolation_inequality_check(couple, [1, 1j], [0.0, 1.0])
        for _, ratio in rows:
            assert ratio == pytest.approx(1.0, abs=1e-15)

    def test_zero_vector_rejected(self):
        couple = WeightedCouple(2, [1, 1], [1, 1])
        with pytest.raises(ValueError, match="zero"):
            interpolation_inequality_check(couple, [0, 0], [0.5])


class TestWeightGenerators:
    def test_constant(self):
        np.testing.assert_allclose(make_weights("constant", 4, value=2.5), [2.5] * 4)

    def test_geometric(self):
        np.testing.assert_allclose(make_weights("geometric", 4, ratio=3.0), [1, 3, 9, 27])

    def test_sobolev(self):
        w = make_weights("sobolev", 3, s=2.0)
        np.testing.assert_allclose(w, [1.0, 2.0, 5.0])

    def test_unknown_generator(self):
        with pytest.raises(ValueError, match="generator"):
            make_weights("fourier", 4)

    def test_bad_parameter(self):
        with pytest.raises(ValueError, match="ratio"):
            make_weights("geometric", 4, ratio=-1.0)


def test_json_round_trip(rng):
    couple = random_couple(rng)
    doc = json.loads(json.dumps(couple_to_json(couple)))
    back = couple_from_json(doc)
    assert back.dim == couple.dim
    np.testing.assert_array_equal(back.w0, couple.w0)
    np.testing.assert_array_equal(back.w1, couple.w1)


def test_json_missing_key():
    with pytest.raises(ValueError, match="w1"):
        couple_from_json({"dim": 2, "w0": [1, 2]})


def test_couple_arrays_immutable():
    couple = WeightedCouple(2, [1, 2], [3, 4])
    with pytest.raises(ValueError):
        couple.w0[0] = 5.0
