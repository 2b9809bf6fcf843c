import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import (
    DISJOINT_BOUNDS,
    H,
    PROFILE_A,
    PROFILE_B,
    PROFILE_BANDS,
    U_MERCATOR,
    disjoint_pair,
    random_contained_curve,
    random_profiles,
    three_point_curvature,
)
from hypcurve.curves import CurvatureInterval, IntrinsicCurve, SampledFunction, constant_curve, integrate, mercator_graph, total_turning
from hypcurve.homotopy import (
    SteeringError,
    MercatorProfile,
    area,
    contract_contained,
    contract_disjoint,
    curve_to_profile,
    default_grid,
    find_lambda_mu,
    kappa_band,
    loop_concat,
    median5,
    median_profile,
    osculating_circle_H,
    pad_bands,
    profile_family_curves,
    reparam_by_argument,
    solve_g,
    solve_h,
    steer,
)
from hypcurve.models import isometry_from_unit_tangent, unit_vector

coth = lambda x: 1.0 / math.tanh(x)  # noqa: E731


@pytest.fixture(scope="module")
def profile():
    return random_profiles(1)[0]


def test_circle_reparametrized_by_argument():
    r = math.atanh(1 / 2.0)
    c = constant_curve(U_MERCATOR, 2.0, 2 * math.pi * math.sinh(r))
    g = reparam_by_argument(c, samples=257)
    assert g.tau == pytest.approx(2 * math.pi, abs=1e-8)
    assert np.allclose(g.curvatures(), 2.0, atol=1e-8)
    # hyperbolic circles are Euclidean circles in the half-plane
    assert np.ptp(g.radius) < 1e-8
    assert abs(g.points[-1] - g.points[0]) < 1e-8


def test_reparam_rejects_small_curvature():
    with pytest.raises(ValueError):
        reparam_by_argument(constant_curve(U_MERCATOR, 0.5, 1.0))


def test_osculating_circle_examples():
    centre, r = osculating_circle_H(1j, 1.0, coth(1.0))
    yc = centre.imag
    assert math.log((yc + r) / (yc - r)) == pytest.approx(2.0, abs=1e-13)
    assert centre.real == pytest.approx(0.0)
    centre, r = osculating_circle_H(1j, 1.0, 1e3)
    assert math.log((centre.imag + r) / (centre.imag - r)) == pytest.approx(2 * math.atanh(1e-3), rel=1e-10)
    for k in (1.0, 0.5, -2.0):
        with pytest.raises(ValueError):
            osculating_circle_H(1j, 1.0, k)


def test_disjoint_contraction_of_a_curve_with_itself_is_constant():
    c = constant_curve(U_MERCATOR, 1.5, 2.0, DISJOINT_BOUNDS)
    g = reparam_by_argument(c, samples=129)
    fam = contract_disjoint(g, g, np.linspace(0, 1, 5), DISJOINT_BOUNDS)
    for gs in fam.curves:
        assert np.array_equal(gs.points, g.points)


def test_disjoint_contraction_is_a_convex_combination():
    _, _, g0, g1 = disjoint_pair(0)
    fam = contract_disjoint(g0, g1, np.linspace(0, 1, 11), DISJOINT_BOUNDS)
    mid = fam.curves[5]
    assert np.allclose(mid.points, 0.5 * (g0.points + g1.points))
    assert np.allclose(mid.radius, 0.5 * (g0.radius + g1.radius))
    for gs in fam.curves:
        assert DISJOINT_BOUNDS.contains(gs.curvatures())
        assert gs.points[0] == pytest.approx(g0.points[0], abs=1e-9)
        assert gs.points[-1] == pytest.approx(g0.points[-1], abs=1e-8)
    assert fam.residuals["diameter_margin_low"] > 0 and fam.residuals["diameter_margin_high"] > 0


def test_disjoint_contraction_checks_inputs():
    _, _, g0, g1 = disjoint_pair(0)
    with pytest.raises(ValueError):
        contract_disjoint(g0, g1, [0, 1], CurvatureInterval(0.5, 3.0))
    short = reparam_by_argument(constant_curve(U_MERCATOR, 1.5, 1.0, DISJOINT_BOUNDS), samples=g0.theta.size)
    with pytest.raises(ValueError):
        contract_disjoint(g0, short, [0, 1], DISJOINT_BOUNDS)


def test_zero_curvature_slope_from_zero_is_zero():
    g = solve_g(0.0, math.pi / 2, 2.5, 0.0)
    assert np.abs(g.y).max() < 1e-12


def test_constant_slopes_are_ordered():
    x = default_grid(PROFILE_A, PROFILE_B, 65)
    g = [solve_g(k, PROFILE_A, PROFILE_B, 0.0, x).y for k in (-0.5, 0.0, 0.5)]
    assert np.all(g[0][1:] < g[1][1:]) and np.all(g[1][1:] < g[2][1:])
    h = [solve_h(k, PROFILE_A, PROFILE_B, 0.3, x).y for k in (-0.5, 0.0, 0.5)]
    assert np.all(h[0][:-1] > h[1][:-1]) and np.all(h[1][:-1] > h[2][:-1])
    assert h[1][-1] == pytest.approx(0.3, abs=1e-12)


@pytest.mark.parametrize("kappa", [-0.7, 0.0, 0.4])
def test_constant_slope_graph_has_constant_curvature(kappa):
    # heights come from trapezoid sums, so the grid must be fine for 1e-8
    x = default_grid(PROFILE_A, PROFILE_B, 2049)
    f = solve_g(kappa, PROFILE_A, PROFILE_B, 0.2, x)
    sc = mercator_graph(PROFILE_A, PROFILE_B, 0.0, f)
    # strip orientation is opposite to the hyperboloid orientation
    assert three_point_curvature(*sc.points[[0, 1024, 2048]]) == pytest.approx(-kappa, abs=1e-8)
    assert np.allclose(sc.curvatures, -kappa, atol=1e-6)


def test_median5_examples():
    assert median5(1, 5, 3, 2, 4) == 3
    assert median5(-np.inf, np.inf, 0, np.inf, -1) == 0
    out = median5(np.array([1, 9]), 2, 3, np.array([4, 0]), 5)
    assert out.tolist() == [3, 3]


@given(st.lists(st.floats(-1e6, 1e6), min_size=5, max_size=5), st.permutations(range(5)))
def test_median5_is_symmetric(vals, perm):
    assert median5(*vals) == median5(*[vals[i] for i in perm]) == sorted(vals)[2]


def test_kappa_band_of_constant_slope():
    x = default_grid(PROFILE_A, PROFILE_B, 129)
    f = solve_g(0.25, PROFILE_A, PROFILE_B, 0.0, x)
    p = MercatorProfile.from_function(f, PROFILE_BANDS)
    km, kp = kappa_band(p)
    assert km == pytest.approx(0.25, abs=1e-7) and kp == pytest.approx(0.25, abs=1e-7)


def test_kappa_band_sandwiches_profile(profile):
    km, kp = kappa_band(profile)
    assert PROFILE_BANDS[0] <= km < kp <= PROFILE_BANDS[1]
    f = profile.f.y
    assert np.all(profile.g(km) <= f + 1e-9) and np.all(f <= profile.g(kp) + 1e-9)


def test_area_bounds(profile):
    km, kp = kappa_band(profile)
    assert area(profile, km, km) <= profile.A0 + 1e-10 <= area(profile, kp, kp) + 2e-10
    assert area(profile, km, kp) == pytest.approx(profile.A0, abs=1e-10)


def test_lambda_mu_ends(profile):
    km, kp = kappa_band(profile)
    lam, mu = find_lambda_mu(profile, 1.0)
    assert (lam, mu) == (pytest.approx(km), pytest.approx(kp))
    assert np.allclose(median_profile(profile, lam, mu), profile.f.y, atol=1e-9)
    lam0, mu0 = find_lambda_mu(profile, 0.0)
    assert lam0 == mu0
    assert area(profile, lam0, mu0) == pytest.approx(profile.A0, abs=1e-9)
    with pytest.raises(ValueError):
        find_lambda_mu(profile, 1.5)


def test_lambda_mu_is_continuous(profile):
    s = np.linspace(0, 1, 41)
    lm = np.array([find_lambda_mu(profile, t) for t in s])
    assert np.abs(np.diff(lm, axis=0)).max() < 0.05


def test_contained_contraction(profile):
    fam = contract_contained(profile, np.linspace(0, 1, 21))
    assert np.allclose(fam.curves[-1].y, profile.f.y, atol=1e-9)
    ys = np.array([c.y for c in fam.curves])
    steps = np.abs(np.diff(ys, axis=0)).max(axis=1)
    # deformation moves a bounded amount per step of s
    assert steps.max() < 0.25 * np.ptp(ys)
    assert fam.residuals["area"] < 1e-8 and fam.residuals["endpoints"] < 1e-9
    assert fam.residuals["inequality"] < 1e-6


def test_canonical_profile_contracts_to_itself(profile):
    f0 = contract_contained(profile, [0.0]).curves[0]
    p0 = MercatorProfile.from_function(f0, PROFILE_BANDS)
    fam = contract_contained(p0, np.linspace(0, 1, 5))
    for c in fam.curves:
        assert np.allclose(c.y, f0.y, atol=1e-6)


def test_pad_bands():
    assert pad_bands((-0.6, 0.6), (-0.2, 0.3)) == pytest.approx((-0.4, 0.45))
    with pytest.raises(ValueError):
        pad_bands((-0.6, 0.6), (-0.59999, 0.3), delta=1e-3)


def test_steer_trivial_and_known_targets():
    b = CurvatureInterval(-3.0, 3.0)
    assert steer(U_MERCATOR, U_MERCATOR, b) is None
    target = integrate(constant_curve(U_MERCATOR, 2.0, 1.0), params=[1.0]).unit_tangent(0, H)
    c = steer(U_MERCATOR, target, b)
    end = integrate(c, params=[1.0]).frames[0]
    assert np.abs(end - isometry_from_unit_tangent(target).m).max() < 1e-6
    assert b.contains(c.kappa)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_steer_reaches_ends_of_admissible_curves(seed):
    rng = np.random.default_rng(seed)
    b = CurvatureInterval(1.2, 4.0)
    c0 = IntrinsicCurve.from_values(
        isometry_from_unit_tangent(U_MERCATOR), np.linspace(0, 1, 4), rng.uniform(1, 4), rng.uniform(1.3, 3.9, 4), b
    )
    v = integrate(c0, params=[1.0]).unit_tangent(0, H)
    c = None
    for s in range(4):
        try:
            c = steer(U_MERCATOR, v, b, seed=s)
            break
        except SteeringError:
            continue
    assert c is not None
    assert b.contains(c.kappa)
    end = integrate(c, params=[1.0]).frames[0]
    assert np.abs(end - isometry_from_unit_tangent(v).m).max() < 1e-6


def test_steer_requires_large_curvature():
    with pytest.raises(ValueError):
        steer(U_MERCATOR, unit_vector(H, 2j, 1.0), CurvatureInterval(-0.5, 0.5))


@pytest.mark.parametrize("n, kappa, shift", [(0, 1.5, 0.0), (1, 1.5, 2 * math.pi), (-2, -coth(1), -4 * math.pi)])
def test_loop_concat_shifts_turning(n, kappa, shift):
    c = constant_curve(U_MERCATOR, 0.3, 1.0)
    out = loop_concat(c, n, kappa)
    if n == 0:
        assert out is c
    before = total_turning(integrate(c, samples=200))
    after = total_turning(integrate(out, samples=800))
    assert after - before == pytest.approx(shift, abs=1e-7)
    e0 = integrate(c, params=[1.0]).frames[0]
    e1 = integrate(out, params=[1.0]).frames[0]
    assert np.abs(e0 - e1).max() < 1e-8


def test_loop_concat_rejects_bad_levels():
    c = constant_curve(U_MERCATOR, 0.3, 1.0, CurvatureInterval(-2.0, 2.0))
    with pytest.raises(ValueError):
        loop_concat(c, 1, 0.5)
    with pytest.raises(ValueError):
        loop_concat(c, 1, 3.0)


def test_curve_to_profile_reproduces_the_curve():
    b = CurvatureInterval(-0.4, 0.7)
    c = random_contained_curve(np.random.default_rng(8), b, u=unit_vector(H, 0.5 + 2j, np.exp(0.7j)))
    prof, g = curve_to_profile(c, samples=513)
    assert prof.alpha == pytest.approx(0.0, abs=1e-12)
    assert prof.a == pytest.approx(math.pi / 2)
    chk = prof.check()
    assert chk["ok"] and chk["inequality"] < 1e-6
    sc = profile_family_curves(contract_contained(prof, [1.0]), g)[0]
    ref = integrate(c, params=[0.0, 1.0])
    assert np.allclose(sc.points[0], ref.points[0], atol=1e-9)
    assert np.allclose(sc.points[-1], ref.points[1], atol=1e-7)


def test_curve_to_profile_needs_contained_bounds():
    with pytest.raises(ValueError):
        curve_to_profile(constant_curve(U_MERCATOR, 0.3, 1.0))


def test_sampled_function_basics():
    f = SampledFunction(np.array([0.0, 1.0, 3.0]), np.array([1.0, 3.0, -1.0]))
    assert f.integral() == pytest.approx(2.0 + 2.0)
    assert f(2.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        SampledFunction(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
