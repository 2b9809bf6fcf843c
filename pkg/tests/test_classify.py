import math

import numpy as np
import pytest

from helpers import H, U_MERCATOR, random_contained_curve
from hypcurve.classify import (
    Verdict,
    contained_envelope,
    grafting_check,
    grafting_matrix,
    is_graph_in_M,
    region_contains,
    region_R,
    turning_bounds,
    valid_turnings,
    voidness_report,
)
from hypcurve.curves import CurvatureInterval, constant_curve, integrate, total_turning
from hypcurve.models import ModelId, convert_vector, to_hyperboloid, unit_vector
from hypcurve.transform import IntervalClass

M = ModelId.MERCATOR
coth = lambda x: 1.0 / math.tanh(x)  # noqa: E731
V_TARGET = unit_vector(H, 0.8 + 1.5j, np.exp(-0.4j))


def end_vector(c):
    return integrate(c, params=[0.0, 1.0]).unit_tangent(1, H)


def test_turning_class_of_identical_vectors_is_zero():
    tc = valid_turnings(U_MERCATOR, U_MERCATOR)
    assert tc.base == 0.0
    assert tc.index_of(4 * math.pi) == 2
    with pytest.raises(ValueError):
        tc.index_of(1.0)


def test_turning_class_of_rotated_vector():
    v = unit_vector(H, 1j, -1j)  # U_MERCATOR rotated by a quarter turn
    assert valid_turnings(U_MERCATOR, v).base == pytest.approx(math.pi / 2)
    assert valid_turnings(U_MERCATOR, v).with_index(-1).turning == pytest.approx(-1.5 * math.pi)


def test_turning_class_contains_curve_turning():
    c = constant_curve(U_MERCATOR, 2.0, 5.0)
    sc = integrate(c, samples=400)
    tc = valid_turnings(U_MERCATOR, sc.unit_tangent(len(sc) - 1, H))
    tc.index_of(total_turning(sc), tol=1e-6)


def test_region_contains_short_interior_step():
    R = region_R(0.0, math.tanh(1), U_MERCATOR)
    p = integrate(constant_curve(U_MERCATOR, 0.4, 0.1), params=[1.0]).points[0]
    assert region_contains(R, p)
    # the base point itself sits on the boundary
    x0 = to_hyperboloid(U_MERCATOR.base)
    assert not region_contains(R, x0)
    assert region_contains(R, x0, closed=True)


@pytest.mark.parametrize("kappa", [0.0, math.tanh(1)])
def test_extreme_hypercircles_bound_the_region(kappa):
    R = region_R(0.0, math.tanh(1), U_MERCATOR)
    p = integrate(constant_curve(U_MERCATOR, kappa, 1.5), params=[1.0]).points[0]
    assert not region_contains(R, p)
    assert region_contains(R, p, closed=True, tol=1e-9)


def test_constant_curves_inside_the_band_stay_in_region():
    R = region_R(-0.3, 0.6, U_MERCATOR)
    for k in np.linspace(-0.25, 0.55, 5):
        sc = integrate(constant_curve(U_MERCATOR, k, 3.0), params=np.linspace(0.1, 1, 6))
        assert R.contains(sc.points).all()


def test_points_behind_the_start_are_outside():
    R = region_R(-0.3, 0.6, U_MERCATOR)
    assert not region_contains(R, to_hyperboloid(convert_vector(unit_vector(H, 1 + 1j, 1.0), H).base), closed=True)


def test_region_requires_band_inside_unit_interval():
    with pytest.raises(ValueError):
        region_R(0.5, 2.0, U_MERCATOR)


def test_geodesic_is_a_graph_and_circle_is_not():
    assert is_graph_in_M(integrate(constant_curve(U_MERCATOR, 0.0, 4.0), samples=200))
    assert is_graph_in_M(integrate(constant_curve(V_TARGET, 0.6, 4.0), samples=200))
    assert not is_graph_in_M(integrate(constant_curve(U_MERCATOR, 2.0, 6.0), samples=200))


def test_voidness_containing_example():
    tau = valid_turnings(U_MERCATOR, V_TARGET).base
    rep = voidness_report(CurvatureInterval(-2.0, 2.0), U_MERCATOR, V_TARGET, tau)
    assert rep.verdict is Verdict.NONEMPTY
    assert rep.relation is IntervalClass.CONTAINING
    w = integrate(rep.witness, samples=600)
    end = w.unit_tangent(len(w) - 1, H)
    assert np.allclose(end.base.coords, V_TARGET.base.coords, atol=1e-7)
    assert total_turning(w) == pytest.approx(tau, abs=1e-5)
    assert CurvatureInterval(-2.0, 2.0).contains(rep.witness.kappa)


@pytest.mark.parametrize("index", [-2, 1])
def test_containing_class_is_never_empty(index):
    v = unit_vector(H, -1.3 + 0.4j, np.exp(2.5j))
    tau = valid_turnings(U_MERCATOR, v).with_index(index).turning
    rep = voidness_report(CurvatureInterval(-1.5, 1.5), U_MERCATOR, v, tau)
    assert rep.verdict is not Verdict.EMPTY


def test_voidness_contained_endpoint_outside_region():
    v = unit_vector(H, 1.5 + 1j, 1.0)
    tau = valid_turnings(U_MERCATOR, v).base
    rep = voidness_report(CurvatureInterval(0.0, math.tanh(1)), U_MERCATOR, v, tau)
    assert rep.verdict is Verdict.EMPTY
    assert "region" in rep.reason
    assert min(rep.certificate["margins"]) < 0


def test_voidness_disjoint_turning_bounds():
    b = CurvatureInterval(coth(1), math.inf)
    base = valid_turnings(U_MERCATOR, V_TARGET).base
    lo, hi = turning_bounds(b, U_MERCATOR, V_TARGET)
    assert hi == math.inf and math.isfinite(lo)
    low = voidness_report(b, U_MERCATOR, V_TARGET, base - 20 * math.pi)
    assert low.verdict is Verdict.EMPTY
    high = voidness_report(b, U_MERCATOR, V_TARGET, base + 20 * math.pi)
    assert high.verdict is Verdict.NONEMPTY
    assert total_turning(integrate(high.witness, samples=4000)) == pytest.approx(base + 20 * math.pi, abs=1e-5)


def test_identical_vectors_get_loop_witnesses():
    b = CurvatureInterval(-3.0, 3.0)
    rep = voidness_report(b, U_MERCATOR, U_MERCATOR, 0.0)
    assert rep.verdict is Verdict.NONEMPTY
    rep = voidness_report(CurvatureInterval(1.5, 3.0), U_MERCATOR, U_MERCATOR, -2 * math.pi)
    assert rep.verdict is Verdict.EMPTY


def test_contained_turning_is_unique():
    b = CurvatureInterval(-0.4, 0.7)
    c = random_contained_curve(np.random.default_rng(11), b)
    v = end_vector(c)
    tau = total_turning(integrate(c, samples=400))
    rep = voidness_report(b, U_MERCATOR, v, tau)
    assert rep.verdict is Verdict.NONEMPTY
    assert is_graph_in_M(rep.witness)
    other = voidness_report(b, U_MERCATOR, v, tau + 2 * math.pi)
    assert other.verdict is Verdict.EMPTY


def test_rejects_turning_outside_class():
    with pytest.raises(ValueError):
        voidness_report(CurvatureInterval(-2.0, 2.0), U_MERCATOR, V_TARGET, 0.123)


# ---------------------------------------------------------------------------
# Brute-force feasibility oracle for the contained class


def slope_derivative(kappa, x, z):
    # y'' of a strip graph with strip curvature kappa, from the graph curvature formula
    q = 1.0 + z * z
    return q / np.sin(x) * (kappa * np.sqrt(q) + z * np.cos(x))


def _heun(kappa, x, dx, z):
    k1 = slope_derivative(kappa, x, z)
    k2 = slope_derivative(kappa, x + dx, z + dx * k1)
    return z + 0.5 * dx * (k1 + k2)


def _range_min(starts, ends, vals, n):
    """out[j] = min of vals[i] over all i with starts[i] <= j <= ends[i] (a range-update sparse table)."""
    levels = max(1, int(np.ceil(np.log2(n))) + 1)
    table = np.full((levels, n), np.inf)
    ok = ends >= starts
    starts, ends, vals = starts[ok], ends[ok], vals[ok]
    length = ends - starts + 1
    k = np.floor(np.log2(length)).astype(int)
    np.minimum.at(table, (k, starts), vals)
    np.minimum.at(table, (k, ends - (1 << k) + 1), vals)
    for lev in range(levels - 1, 0, -1):
        half = 1 << (lev - 1)
        np.minimum(table[lev - 1], table[lev], out=table[lev - 1])
        np.minimum(table[lev - 1][half:], table[lev][:-half], out=table[lev - 1][half:])
    return table[0]


def dp_area_range(m1, m2, bx, beta, steps=128, zmax=4.0, nz=40001):
    """Min/max of the integral of the slope over discretized admissible slope paths ending near ``beta``.

    A slope node at the next station is reachable from ``z`` when it lies
    between the Heun steps of the two extreme curvatures, up to half a grid
    spacing of rounding.
    """
    xs = np.linspace(math.pi / 2, bx, steps + 1)
    dx = xs[1] - xs[0]
    z = np.linspace(-zmax, zmax, nz)
    dz = z[1] - z[0]
    lo = np.full(nz, np.inf)
    hi = np.full(nz, np.inf)  # stores minus the maximum
    start = np.argmin(np.abs(z))
    lo[start] = hi[start] = 0.0
    for k in range(steps):
        a = _heun(m1, xs[k], dx, z)
        b = _heun(m2, xs[k], dx, z)
        first = np.searchsorted(z, np.minimum(a, b) - 0.5 * dz, "left")
        last = np.searchsorted(z, np.maximum(a, b) + 0.5 * dz, "right") - 1
        first, last = np.clip(first, 0, nz - 1), np.clip(last, 0, nz - 1)
        live = np.isfinite(lo)
        f, l_, zi = first[live], last[live], z[live]
        lo = _range_min(f, l_, lo[live] + 0.5 * dx * zi, nz) + 0.5 * dx * z
        hi = _range_min(f, l_, hi[live] - 0.5 * dx * zi, nz) - 0.5 * dx * z
    near = np.abs(z - beta) <= dz
    return lo[near].min(), -hi[near].min()


def envelope_cases():
    rng = np.random.default_rng(21)
    b = CurvatureInterval(-0.3, 0.6)
    for _ in range(4):
        c = random_contained_curve(rng, b)
        vm = convert_vector(end_vector(c), M)
        for shift in (0.0, 0.4, -0.4, 1.0, -1.0):
            bx, a0 = vm.base.coords
            yield b, unit_vector(M, (bx, a0 + shift), vm.dir)


def test_contained_envelope_agrees_with_brute_force():
    decided = {True: 0, False: 0}
    for b, v in envelope_cases():
        env = contained_envelope(b, v)
        if env["beta"] is None or abs(env["beta"]) > 4:
            continue
        lo, hi = dp_area_range(-b.hi, -b.lo, env["b"], env["beta"])
        if not math.isfinite(lo):
            continue
        if env["gap"] >= 0:
            assert env["area_lower"] == pytest.approx(lo, abs=0.01)
            assert env["area_upper"] == pytest.approx(hi, abs=0.01)
        margin = 0.05 * (hi - lo) + 0.02
        a0 = env["A0"]
        if lo + margin < a0 < hi - margin:
            assert env["feasible"], (env["reason"], lo, hi, a0)
            decided[True] += 1
        elif a0 < lo - margin or a0 > hi + margin:
            assert not env["feasible"], (lo, hi, a0)
            decided[False] += 1
    assert decided[True] >= 3 and decided[False] >= 3, decided


def test_envelope_rejects_backward_targets():
    env = contained_envelope(CurvatureInterval(-0.3, 0.6), unit_vector(M, (1.0, 0.0), (1.0, 0.0)))
    assert not env["feasible"] and env["beta"] is None


# ---------------------------------------------------------------------------
# Grafting


def test_grafting_recovers_parameters():
    rng = np.random.default_rng(4)
    phi0 = rng.normal(size=(2, 2))
    phi1 = 3.7 * grafting_matrix(2.0, math.pi / 6) @ phi0
    r, theta = grafting_check(phi0, phi1)
    assert r == pytest.approx(2.0, rel=1e-10)
    assert theta == pytest.approx(math.pi / 6, abs=1e-10)


def test_grafting_rejects_non_grafting_maps():
    phi0 = np.array([[1.0, 0.3], [0.0, 1.0]])
    assert grafting_check(phi0, phi0) is None
    for t in (0.4, 1.3, 2.5):
        rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        assert grafting_check(phi0, rot @ phi0) is None
