import numpy as np
import pytest

from holointerp import (
    AnalyticMap,
    DiagonalLinear,
    DiagonalMonomial,
    ComponentwiseGeometric,
    HomogeneousComponent,
    MapContractError,
    WeightedCouple,
    aliasing_tail,
    component_norm_bound,
    extract_component,
    oracle_constants,
    rho_independence_check,
    to_analytic,
    truncated_series,
)
from conftest import random_vector


def unit_couple(dim):
    return WeightedCouple(dim, np.ones(dim), np.ones(dim))


def e_(k, dim):
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


@pytest.fixture
def quad_map():
    # componentwise x + x^2, entire; c0 valid on the unit ball: |x+x^2| <= 2|x|
    return AnalyticMap(
        evaluate=lambda x: x + x**2, radius=1.0, c0=2.0, c1=2.0, dim=2
    )


class TestAnalyticMapConstruction:
    def test_rejects_bad_radius(self):
        with pytest.raises(ValueError, match="radius"):
            AnalyticMap(evaluate=lambda x: x, radius=0.0, c0=1, c1=1, dim=2)

    def test_zero_spot_check(self):
        with pytest.raises(MapContractError, match="maps_zero_to_zero"):
            AnalyticMap(
                evaluate=lambda x: x + 1.0, radius=1.0, c0=1, c1=1, dim=2
            )

    def test_affine_map_allowed_when_flag_cleared(self):
        m = AnalyticMap(
            evaluate=lambda x: x + 1.0, radius=1.0, c0=1, c1=1, dim=2,
            maps_zero_to_zero=False,
        )
        assert m.maps_zero_to_zero is False


class TestExtractComponent:
    def test_polynomial_coefficients_read_off(self, quad_map):
        couple = unit_couple(2)
        got = extract_component(quad_map, couple, e_(0, 2), 2, rho=0.25, nodes=8)
        np.testing.assert_allclose(got.value, e_(0, 2), atol=1e-12)
        got1 = extract_component(quad_map, couple, e_(0, 2), 1, rho=0.25, nodes=8)
        np.testing.assert_allclose(got1.value, e_(0, 2), atol=1e-12)

    def test_degree_zero_is_alias_corrected_zero(self, quad_map):
        couple = unit_couple(2)
        got = extract_component(quad_map, couple, e_(0, 2), 0, rho=0.25, nodes=8)
        assert np.linalg.norm(got.value) <= got.alias_bound + 1e-12

    def test_geometric_series_coefficients(self):
        # componentwise x/(1-x): every component at e_0 is e_0 itself
        couple = unit_couple(2)
        m = AnalyticMap(
            evaluate=lambda x: x / (1.0 - x), radius=1.0, c0=1e3, c1=1e3, dim=2
        )
        low = extract_component(m, couple, e_(0, 2), 3)
        high = extract_component(m, couple, e_(0, 2), 3, nodes=64)
        np.testing.assert_allclose(low.value, e_(0, 2), atol=1e-12)
        np.testing.assert_allclose(high.value, e_(0, 2), atol=1e-12)
        np.testing.assert_allclose(low.value, high.value, atol=1e-12)

    def test_default_contour_is_half_reach(self, quad_map):
        couple = unit_couple(2)
        h = 0.25 * e_(1, 2)
        got = extract_component(quad_map, couple, h, 1)
        assert got.rho == pytest.approx(quad_map.radius / (2 * 0.25), rel=1e-15)
        assert got.nodes >= 16

    def test_contour_must_stay_inside_ball(self, quad_map):
        couple = unit_couple(2)
        with pytest.raises(ValueError, match="contour exits"):
            extract_component(quad_map, couple, e_(0, 2), 1, rho=1.5, nodes=8)

    def test_nodes_must_exceed_degree(self, quad_map):
        couple = unit_couple(2)
        with pytest.raises(ValueError, match="nodes"):
            extract_component(quad_map, couple, e_(0, 2), 8, rho=0.25, nodes=8)

    def test_zero_vector_rejected(self, quad_map):
        with pytest.raises(ValueError, match="zero"):
            extract_component(quad_map, unit_couple(2), np.zeros(2), 1)

    def test_nonanalytic_map_trips_degree_zero_diagnostic(self):
        # |x|^2 vanishes at zero yet has a fat "constant" contour average
        m = AnalyticMap(
            evaluate=lambda x: np.abs(x) ** 2 + 0j, radius=1.0, c0=1.0, c1=1.0, dim=2
        )
        with pytest.raises(MapContractError, match="degree-0"):
            extract_component(m, unit_couple(2), 0.5 * e_(0, 2), 0)

    def test_value_array_is_immutable(self, quad_map):
        got = extract_component(quad_map, unit_couple(2), e_(0, 2), 1, rho=0.25, nodes=8)
        with pytest.raises(ValueError):
            got.value[0] = 0.0


def test_aliasing_identity_polynomials(rng):
    """nodes = d+1 and nodes = 4(d+1) agree to 1e-11 for polynomial maps."""
    dim = 3
    couple = unit_couple(dim)
    for d in range(1, 7):
        coeffs = rng.standard_normal(d + 1)
        coeffs[0] = 0.0

        def poly(x, c=coeffs):
            return sum(ck * x**k for k, ck in enumerate(c))

        m = AnalyticMap(
            evaluate=poly, radius=1.0, c0=float(np.sum(np.abs(coeffs))) * dim,
            c1=float(np.sum(np.abs(coeffs))) * dim, dim=dim,
        )
        h = random_vector(rng, dim)
        h = 0.4 * h / couple.norm0(h)
        for n in range(d + 1):
            lean = extract_component(m, couple, h, n, rho=1.0, nodes=d + 1)
            rich = extract_component(m, couple, h, n, rho=1.0, nodes=4 * (d + 1))
            assert np.linalg.norm(lean.value - rich.value) <= 1e-11
            expected = coeffs[n] * h**n
            assert np.linalg.norm(lean.value - expected) <= 1e-11


def test_alias_bound_is_sound_for_geometric_map():
    """Observed aliasing of a short contour stays below the certified bound."""
    dim = 2
    couple = unit_couple(dim)
    m = ComponentwiseGeometric(pole=2.0, dim=dim)
    amap = to_analytic(m, couple, couple, radius=1.0)
    h = 0.5 * e_(0, dim)
    exact = (0.5**2 / 2.0) * e_(0, dim)  # P_2(h) = h^2 / pole
    got = extract_component(amap, couple, h, 2, rho=1.0, nodes=6)
    dev = couple.norm0(got.value - exact)
    assert dev > 1e-9  # aliasing genuinely present at 6 nodes
    assert dev <= got.alias_bound
    assert got.alias_bound == pytest.approx(
        aliasing_tail(amap.c0, 1.0, 0.5, 2, 1.0, 6), rel=1e-15
    )


def test_extraction_linear_in_the_map(rng):
    dim = 2
    couple = unit_couple(dim)

    def phi(x):
        return x + x**2

    def psi(x):
        return x**3 - 2.0 * x

    alpha, beta = 1.5 - 0.5j, -0.25 + 2.0j
    maps = [phi, psi, lambda x: alpha * phi(x) + beta * psi(x)]
    built = [
        AnalyticMap(evaluate=f, radius=1.0, c0=10.0, c1=10.0, dim=dim) for f in maps
    ]
    h = random_vector(rng, dim)
    h = 0.3 * h / couple.norm0(h)
    for n in range(4):
        parts = [
            extract_component(b, couple, h, n, rho=1.0, nodes=8).value for b in built
        ]
        np.testing.assert_allclose(
            parts[2], alpha * parts[0] + beta * parts[1], atol=1e-13
        )


class TestHomogeneousComponent:
    def test_relative_contour_homogeneity(self, rng):
        dim = 3
        couple = WeightedCouple(dim, np.ones(dim), 1.0 + np.arange(dim))
        m = ComponentwiseGeometric(pole=2.0, dim=dim)
        amap = to_analytic(m, couple, couple, radius=1.0)
        comp = HomogeneousComponent.build(amap, couple, 2)
        h = random_vector(rng, dim)
        h = 0.7 * h / couple.norm0(h)
        base = comp.evaluate(h)
        for lam in (0.7, -0.5, 0.3 - 0.4j, 1j):
            scaled = comp.evaluate(lam * h)
            assert np.linalg.norm(scaled - lam**2 * base) <= 1e-9 * (
                1 + np.linalg.norm(base)
            )

    def test_fixed_contour_checks_ball_each_call(self):
        couple = unit_couple(2)
        m = AnalyticMap(evaluate=lambda x: x**2, radius=1.0, c0=1, c1=1, dim=2)
        comp = HomogeneousComponent.build(m, couple, 2, nodes=8, rho=0.5)
        comp.evaluate(e_(0, 2))  # rho*||h|| = 0.5 < 1, fine
        with pytest.raises(ValueError, match="contour exits"):
            comp.evaluate(3.0 * e_(0, 2))

    def test_two_sided_alias_bound_finite_on_both_norms(self):
        dim = 2
        couple = WeightedCouple(dim, [1.0, 1.0], [4.0, 4.0])
        m = ComponentwiseGeometric(pole=8.0, dim=dim)
        amap = to_analytic(m, couple, couple, radius=1.0)
        h = 0.1 * e_(0, dim)
        one_sided = HomogeneousComponent.build(amap, couple, 2)
        two_sided = HomogeneousComponent.build(amap, couple, 2, two_sided=True)
        # E0-anchored contour exceeds the E1 reach: the H1-side bound blows up
        assert one_sided.alias_bound(h, side=1) == np.inf
        assert two_sided.alias_bound(h, side=1) < np.inf
        assert two_sided.alias_bound(h, side=0) < np.inf

    def test_build_with_fixed_rho_requires_nodes(self):
        m = AnalyticMap(evaluate=lambda x: x, radius=1.0, c0=1, c1=1, dim=2)
        with pytest.raises(ValueError, match="nodes"):
            HomogeneousComponent.build(m, unit_couple(2), 1, rho=0.5)


class TestRhoIndependence:
    def test_polynomial_deviation_tiny(self, quad_map):
        couple = unit_couple(2)
        h = 0.5 * e_(0, 2)
        result = rho_independence_check(
            quad_map, couple, couple, h, 2, [0.2, 0.7, 1.4], nodes=8
        )
        assert result.deviation <= 1e-11
        assert result.worst_ratio <= 1.0

    def test_geometric_within_combined_alias(self):
        dim = 2
        couple = unit_couple(dim)
        m = ComponentwiseGeometric(pole=2.0, dim=dim)
        amap = to_analytic(m, couple, couple, radius=1.0)
        h = e_(0, dim) * 0.9
        rho_list = [f * amap.radius / couple.norm0(h) for f in (0.1, 0.3, 0.5)]
        result = rho_independence_check(amap, couple, couple, h, 2, rho_list, nodes=32)
        assert result.worst_ratio <= 1.0

    def test_single_rho_vacuous(self, quad_map):
        couple = unit_couple(2)
        result = rho_independence_check(
            quad_map, couple, couple, e_(0, 2), 1, [0.5], nodes=8
        )
        assert result.deviation == 0.0
        assert result.worst_ratio == 0.0

    def test_empty_rho_list_rejected(self, quad_map):
        with pytest.raises(ValueError, match="rho_list"):
            rho_independence_check(
                quad_map, unit_couple(2), unit_couple(2), e_(0, 2), 1, [], nodes=8
            )


class TestComponentNormBound:
    def test_monomial_component_within_bound(self, rng):
        dim = 4
        e = WeightedCouple(dim, np.ones(dim), 1.0 + 0.5 * np.arange(dim))
        h = WeightedCouple(dim, 0.5 + np.arange(dim) % 2, 1.0 + np.arange(dim) % 3)
        m = DiagonalMonomial(power=2, scale=np.linspace(0.5, 2.0, dim), dim=dim)
        amap = to_analytic(m, e, h, radius=1.0)
        comp = HomogeneousComponent.build(amap, e, 2, two_sided=True)
        samples = []
        for _ in range(100):
            z = random_vector(rng, dim)
            samples.append(z * (rng.uniform(0.05, 0.95) / e.norm1(z)))
        samples.append(m.maximizer(e, h, 0) * 0.9 / e.norm1(m.maximizer(e, h, 0)))
        worst = component_norm_bound(comp, h, samples)
        assert worst <= 1.0 + 1e-9

    def test_linear_component_matches_svd_oracle(self):
        dim = 3
        w = np.array([1.0, 2.0, 0.5])
        v = np.array([2.0, 1.0, 1.5])
        e = WeightedCouple(dim, w, w)
        h = WeightedCouple(dim, v, v)
        a = np.array([0.5, -3.0, 1.25])
        m = DiagonalLinear(scale=a, dim=dim)
        svd_norm = float(np.linalg.svd(np.diag(v * a / w), compute_uv=False)[0])
        c0, c1 = oracle_constants(m, e, h)
        assert c0 == pytest.approx(svd_norm, rel=1e-13)
        amap = to_analytic(m, e, h, radius=1.0)
        comp = HomogeneousComponent.build(amap, e, 1, two_sided=True)
        star = m.maximizer(e, h, 0)
        samples = [0.5 * star / e.norm1(star)]
        worst = component_norm_bound(comp, h, samples)
        assert worst == pytest.approx(1.0, rel=1e-9)

    def test_sample_outside_ball_rejected(self):
        dim = 2
        e = unit_couple(dim)
        m = DiagonalMonomial(power=2, scale=1.0, dim=dim)
        amap = to_analytic(m, e, e, radius=1.0)
        comp = HomogeneousComponent.build(amap, e, 2)
        with pytest.raises(ValueError, match="outside"):
            component_norm_bound(comp, e, [2.0 * e_(0, dim)])


class TestTruncatedSeries:
    def test_polynomial_recovered_exactly(self, quad_map):
        couple = unit_couple(2)
        h = np.array([0.3, -0.2j])
        result = truncated_series(quad_map, couple, h, degree_cap=2)
        direct = quad_map.evaluate(h)
        assert np.linalg.norm(result.value - direct) <= 1e-11
        h0 = couple.norm0(h)
        expected_tail = 2.0 * 1.0 * (h0 / 1.0) ** 3 / (1.0 - h0)
        assert result.tail_bound == pytest.approx(expected_tail, rel=1e-13)

    def test_geometric_observed_error_below_tail(self):
        dim = 2
        couple = unit_couple(dim)
        m = ComponentwiseGeometric(pole=2.0, dim=dim)
        amap = to_analytic(m, couple, couple, radius=1.0)
        h = 0.5 * e_(0, dim)
        direct = np.asarray(amap.evaluate(h))
        for cap in (2, 4, 7):
            result = truncated_series(amap, couple, h, cap)
            err = couple.norm0(direct - result.value)
            assert err <= result.tail_bound + result.alias_total
            assert err > 0.0  # genuinely truncated

    def test_zero_point_is_trivial(self, quad_map):
        result = truncated_series(quad_map, unit_couple(2), np.zeros(2), 5)
        np.testing.assert_array_equal(result.value, np.zeros(2))
        assert result.tail_bound == 0.0
        assert result.alias_total == 0.0

    def test_outside_ball_rejected(self, quad_map):
        with pytest.raises(ValueError, match="inside"):
            truncated_series(quad_map, unit_couple(2), np.array([1.5, 0]), 3)
