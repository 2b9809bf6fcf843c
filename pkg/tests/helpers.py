"""Generators and independent oracles shared by the test modules."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import fsolve

from hypcurve.curves import CurvatureInterval, IntrinsicCurve, integrate, total_turning
from hypcurve.homotopy import (
    MercatorProfile,
    SteeringError,
    default_grid,
    loop_concat,
    profile_from_curvature,
    reparam_by_argument,
    steer,
)
from hypcurve.models import ModelId, isometry_from_unit_tangent, unit_vector

H = ModelId.HALF_PLANE
# unit tangent at i pointing in the direction of increasing Mercator x
U_MERCATOR = unit_vector(H, 1j, -1.0)
U_UP = unit_vector(H, 1j, 1j)


def lorentz(a, b):
    return -a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def halfplane_to_hyperboloid(z: complex) -> np.ndarray:
    """Independent Cayley plus inverse stereographic map, written out by hand."""
    w = (z - 1j) / (z + 1j)
    r2 = abs(w) ** 2
    return np.array([1 + r2, 2 * w.real, 2 * w.imag]) / (1 - r2)


def three_point_curvature(p1, p2, p3) -> float:
    """Signed curvature of the constant-curvature curve through three ordered hyperboloid points.

    The curve lies on the plane ``<x, n> = c``; its curvature magnitude is
    ``|c| / sqrt(c^2 + <n, n>)``, and the sign follows ``det(p1, p2, p3)``.
    """
    n = np.cross(p2 - p1, p3 - p1)
    n = n * np.array([-1.0, 1.0, 1.0])  # Euclidean normal -> Lorentz normal
    c = float(lorentz(p1, n))
    mag = abs(c) / math.sqrt(c * c + float(lorentz(n, n)))
    return math.copysign(mag, np.linalg.det(np.column_stack([p1, p2, p3])))


def branch_translated_curvature(kappa: float, rho: float) -> float:
    """Normal translation of curvature, one explicit formula per regime."""
    if abs(kappa) > 1:
        return 1.0 / math.tanh(math.atanh(1.0 / kappa) - rho)
    if abs(kappa) < 1:
        return math.tanh(math.atanh(kappa) - rho)
    return kappa


def random_contained_curve(rng, b: CurvatureInterval, u=U_MERCATOR, nodes: int = 5) -> IntrinsicCurve:
    return IntrinsicCurve.from_values(
        isometry_from_unit_tangent(u),
        np.linspace(0, 1, nodes),
        rng.uniform(0.5, 3),
        rng.uniform(b.lo, b.hi, nodes),
        b,
    )


DISJOINT_BOUNDS = CurvatureInterval(1 / math.tanh(2), 1 / math.tanh(0.5))


def disjoint_pair(trial: int, b: CurvatureInterval = DISJOINT_BOUNDS, u=U_MERCATOR):
    """Two curves from ``u`` to a random ``v`` with equal total turning, reparametrized by argument."""
    rng = np.random.default_rng(1000 + trial)
    F0 = isometry_from_unit_tangent(u)
    k = rng.uniform(b.lo + 0.05, b.hi - 0.05, 4)
    c0 = IntrinsicCurve.from_values(F0, np.linspace(0, 1, 4), rng.uniform(2, 5), k, b)
    v = integrate(c0, params=[1.0]).unit_tangent(-1, H)
    c1 = None
    for seed in range(trial, trial + 4):
        try:
            c1 = steer(u, v, b, seed=seed)
            break
        except SteeringError:
            continue
    if c1 is None:
        raise RuntimeError("no steering witness")
    t0, t1 = total_turning(integrate(c0)), total_turning(integrate(c1))
    n = round((t0 - t1) / (2 * math.pi))
    if n > 0:
        c1 = loop_concat(c1, n, 1.5)
    elif n < 0:
        c0 = loop_concat(c0, -n, 1.5)
    return c0, c1, reparam_by_argument(c0), reparam_by_argument(c1)


PROFILE_A, PROFILE_B = math.pi / 2, 2.3
PROFILE_BANDS = (-0.6, 0.6)


def _reference_data():
    x = default_grid(PROFILE_A, PROFILE_B)
    ref = profile_from_curvature(PROFILE_A, 0.0, lambda t: 0.1 + 0 * t, x)
    return x, ref.y[-1], ref.integral()


def random_profile(seed: int) -> MercatorProfile | None:
    """Random Mercator profile from alpha = 0 with the shared end value and area.

    Curvature is a squashed random trigonometric sum; two affine parameters are
    fitted so the profile ends at the reference value and encloses the
    reference area. Returns ``None`` when the fit does not converge.
    """
    a, b = PROFILE_A, PROFILE_B
    x, beta, A0 = _reference_data()
    rng = np.random.default_rng(seed)
    amp, freq, phase = rng.normal(size=3), rng.uniform(1, 6, 3), rng.uniform(0, 6, 3)

    def raw(t):
        return sum(A * np.sin(F * (t - a) + P) for A, F, P in zip(amp, freq, phase))

    def prof(c):
        return profile_from_curvature(a, 0.0, lambda t: 0.5 * np.tanh(raw(t) + c[0] + c[1] * (t - a) / (b - a)), x)

    def res(c):
        f = prof(c)
        return [f.y[-1] - beta, f.integral() - A0]

    c, _, status, _ = fsolve(res, [0.2, 0.0], xtol=1e-13, full_output=True)
    if status != 1 or max(abs(r) for r in res(c)) > 1e-11:
        return None
    return MercatorProfile.from_function(prof(c), PROFILE_BANDS)


def random_profiles(n: int, start: int = 0) -> list[MercatorProfile]:
    out, seed = [], start
    while len(out) < n:
        p = random_profile(seed)
        seed += 1
        if p is not None:
            out.append(p)
    return out


def extrapolated_curvature(c: IntrinsicCurve, t, rho: float = 0.0, h: float = 1e-3) -> np.ndarray:
    """Curvature of the trace (translated by ``rho``) from central differences at ``h`` and ``2h``.

    Richardson extrapolation removes the leading ``h^2`` error term, which
    lets the step stay large enough for rounding to be negligible. The sign
    is taken along the direction of motion.
    """
    from hypcurve.curves import curvature_from_samples, local_frames
    from hypcurve.transform import translate_frames

    est = []
    for step in (h, 2 * h):
        pts = translate_frames(local_frames(c, t, step, relative=True), rho)[:, :, :, 0]
        est.append(np.array([curvature_from_samples(p[0], p[1], p[2], step) for p in pts]))
    return (4 * est[0] - est[1]) / 3
