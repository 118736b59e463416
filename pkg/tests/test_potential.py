import math

import numpy as np
import pytest

from casimir_polder.atoms import AtomModel, Transition, alpha_imag, alpha_real, static_polarizability
from casimir_polder.potential import (
    AsymptoticReport,
    Method,
    PotentialCurve,
    PotentialValue,
    RouteIntegrand,
    ZoneError,
    asymptotic_fit,
    check_zone,
    compute_curve,
    cp_correlation_route,
    cp_imagfreq_oracle,
    cp_modesum,
    cp_thermal,
    far_zone_coefficient,
    kernel_bracket,
    kernel_bracket_pre_identity,
    london_c6,
    pv_identity_lhs,
    pv_identity_rhs,
)
from casimir_polder.quadrature import QuadratureError, decay_integrate


def test_value_invariants():
    with pytest.raises(ValueError):
        PotentialValue(1.0, -1.0, Method.THERMAL, 0.0, conjectural=False)
    with pytest.raises(ValueError):
        PotentialValue(1.0, -1.0, Method.IMAGFREQ, 0.0, conjectural=True)
    with pytest.raises(ValueError):
        PotentialValue(1.0, -1.0, Method.IMAGFREQ, -1e-3)
    with pytest.raises(ValueError):
        AsymptoticReport("near", -1.0, 7, 0.0)


def test_closed_form_coefficients(two_level):
    assert london_c6(two_level, two_level) == pytest.approx(1 / 3)
    assert far_zone_coefficient(two_level, two_level) == pytest.approx(-23 * (2 / 3) ** 2 / (4 * math.pi))


def test_london_c6_is_the_frequency_integral(three_level, other_two_level):
    # C6 = (3/pi) int du alpha_A(iu) alpha_B(iu)
    integral = decay_integrate(lambda u: alpha_imag(three_level, u) * alpha_imag(other_two_level, u), 1e-13).value
    assert london_c6(three_level, other_two_level) == pytest.approx(3 / math.pi * integral, rel=1e-11)


def test_oracle_near_and_far_limits(two_level):
    near = cp_imagfreq_oracle(two_level, two_level, 1e-3).energy * 1e-18
    assert near == pytest.approx(-1 / 3, rel=1e-5)
    far = cp_imagfreq_oracle(two_level, two_level, 1e3).energy * 1e21
    # -23 (2/3)^2 / (4 pi) = -0.8134586; the residual is the O(1/R^2) correction
    assert far == pytest.approx(-23 * (2 / 3) ** 2 / (4 * math.pi), rel=2e-5)


def test_oracle_negative_and_increasing(two_level):
    E = np.array([cp_imagfreq_oracle(two_level, two_level, R).energy for R in np.geomspace(0.01, 1e3, 25)])
    assert np.all(E < 0)
    assert np.all(np.diff(E) > 0)


def test_route_example_at_R_20(two_level):
    route = cp_correlation_route(two_level, two_level, 20.0)
    oracle = cp_imagfreq_oracle(two_level, two_level, 20.0)
    assert route.energy == pytest.approx(oracle.energy, rel=1e-3)
    assert route.method is Method.CORRELATION and not route.conjectural


@pytest.mark.parametrize("R", [0.3, 2.0, 15.0])
def test_route_matches_oracle_tightly(R, three_level, other_two_level):
    route = cp_correlation_route(three_level, other_two_level, R).energy
    oracle = cp_imagfreq_oracle(three_level, other_two_level, R).energy
    assert route == pytest.approx(oracle, rel=1e-8)


def test_regulator_tail_cross_check(two_level):
    wynn = cp_correlation_route(two_level, two_level, 1.5).energy
    reg = cp_correlation_route(two_level, two_level, 1.5, tail="regulator").energy
    assert reg == pytest.approx(wynn, rel=1e-5)


def test_symmetry_under_exchange(three_level, other_two_level):
    for fn in (cp_imagfreq_oracle, cp_correlation_route):
        ab = fn(three_level, other_two_level, 1.7).energy
        ba = fn(other_two_level, three_level, 1.7).energy
        assert ab == pytest.approx(ba, rel=1e-12)


@pytest.mark.parametrize("fn", [cp_imagfreq_oracle, cp_correlation_route])
def test_scaling_covariance(fn, three_level, other_two_level):
    # alpha(k) -> alpha(k/lam)/lam^3 and R -> R/lam multiply the energy by lam
    lam, R = 2.5, 1.3
    base = fn(three_level, other_two_level, R).energy
    scaled = fn(three_level.scaled(lam), other_two_level.scaled(lam), R / lam).energy
    assert scaled == pytest.approx(lam * base, rel=1e-10)


def test_route_integrand_is_real_part_of_contraction(two_level, other_two_level):
    from casimir_polder.correlation import integrated_correlation
    from casimir_polder.dipole import v_tensor

    R = 1.4
    integrand = RouteIntegrand(two_level, other_two_level, R)
    for k in (0.3, 1.7, 4.2):
        T = integrated_correlation(k, [0, 0, R]).components
        V = v_tensor(k, [0, 0, R]).components
        expected = alpha_real(two_level, k) * alpha_real(other_two_level, k) * np.sum(T * V)
        assert float(integrand(np.array([k]))[0]) == pytest.approx(expected, rel=1e-12)


def test_kernel_bracket_is_scaled_dipole_tensor(two_level, other_two_level):
    from casimir_polder.dipole import RadialKernel, apply_F

    k, R = 0.37, np.array([0.0, 0.0, 3.0])
    K = kernel_bracket(two_level, other_two_level, k, R)
    pref = alpha_real(two_level, k) * alpha_real(other_two_level, k) / (2 * math.pi)
    assert np.allclose(K, pref * apply_F(RadialKernel("cos", k), R), rtol=1e-14)


@pytest.mark.parametrize("pair", [False, True])
def test_pv_identities_example(pair, two_level, other_two_level):
    lhs = pv_identity_lhs(two_level, other_two_level, 0.37, 3.0, pair).value
    assert float(lhs) == pytest.approx(pv_identity_rhs(two_level, other_two_level, 0.37, 3.0, pair), rel=1e-6)


def test_pre_identity_bracket_example(two_level):
    K = kernel_bracket(two_level, two_level, 0.37, 3.0)
    P = kernel_bracket_pre_identity(two_level, two_level, 0.37, 3.0)
    assert np.allclose(P, K, rtol=1e-6, atol=1e-12 * np.abs(K).max())


def test_thermal_zero_temperature_and_flag(two_level):
    vac = cp_correlation_route(two_level, two_level, 3.0).energy
    th = cp_thermal(two_level, two_level, 3.0, 0.0)
    assert th.conjectural and th.method is Method.THERMAL
    assert th.energy == pytest.approx(vac, rel=1e-12)


def test_thermal_classical_limit(two_level):
    # R T >> 1: E R^6 -> -3 T alpha_A(0) alpha_B(0)
    E = cp_thermal(two_level, two_level, 50.0, 1.0).energy
    assert E * 50.0**6 == pytest.approx(-3 * 1.0 * (2 / 3) ** 2, rel=1e-6)


def test_thermal_deepens_with_temperature(two_level):
    E = [cp_thermal(two_level, two_level, 20.0, T).energy for T in (0.0, 0.02, 0.05, 0.1)]
    assert all(e < 0 for e in E)
    assert all(b < a for a, b in zip(E, E[1:]))
    with pytest.raises(ValueError):
        cp_thermal(two_level, two_level, 20.0, -1.0)


def test_modesum_value_close_to_oracle(two_level):
    v = cp_modesum(two_level, two_level, 2.0, box_factor=10.0)
    oracle = cp_imagfreq_oracle(two_level, two_level, 2.0).energy
    assert v.energy == pytest.approx(oracle, rel=1e-3)
    assert abs(v.energy - oracle) < 10 * v.error_estimate


def test_invalid_separation(two_level):
    with pytest.raises(ValueError):
        cp_imagfreq_oracle(two_level, two_level, 0.0)
    with pytest.raises(ValueError):
        cp_correlation_route(two_level, two_level, -1.0)


def test_zone_checks():
    check_zone([1e-3, 5e-3], (1.0, 2.0), "near")
    with pytest.raises(ZoneError, match="k_max\\*R <= 0.01"):
        check_zone([1e-3, 1e-2], (1.0, 2.0), "near")
    with pytest.raises(ZoneError, match="k_min\\*R >= 100"):
        check_zone([50.0, 500.0], (1.0, 2.0), "far")


def test_asymptotic_fits(two_level):
    far = compute_curve(two_level, two_level, np.geomspace(100, 1000, 8), "imagfreq")
    rep = asymptotic_fit(far, "far")
    assert rep.exponent == 7
    assert rep.coefficient == pytest.approx(far_zone_coefficient(two_level, two_level), rel=1e-2)
    assert rep.free_exponent == pytest.approx(7.0, abs=0.05)
    near = compute_curve(two_level, two_level, np.geomspace(1e-4, 1e-2, 8), "imagfreq")
    rep = asymptotic_fit(near, "near")
    assert rep.exponent == 6
    assert rep.coefficient == pytest.approx(-london_c6(two_level, two_level), rel=1e-2)
    with pytest.raises(ZoneError):
        asymptotic_fit(near, "far")


def test_compute_curve_order_and_workers(two_level, other_two_level):
    R = [3.0, 0.5, 1.0]
    serial = compute_curve(two_level, other_two_level, R, "correlation")
    pooled = compute_curve(two_level, other_two_level, R, "correlation", workers=2)
    assert list(serial.R) == R
    assert np.array_equal(serial.energy, pooled.energy)
    assert serial.k_range == (1.0, 1.3)


def test_route_far_zone_limit(two_level):
    # at R = 300 the cancelling pieces still fit in extended precision
    E = cp_correlation_route(two_level, two_level, 300.0).energy
    assert E * 300.0**7 == pytest.approx(far_zone_coefficient(two_level, two_level), rel=1e-3)
    # at R = 1000 they do not, and the route says so rather than returning noise
    with pytest.raises(QuadratureError, match="lost precision"):
        cp_correlation_route(two_level, two_level, 1000.0)
