"""Normal translation of curves and reduction of curve spaces to normal forms.

Translating a curve by ``rho`` moves every point a signed distance ``rho``
along its left normal geodesic::

    gamma_rho = cosh(rho) gamma + sinh(rho) nu

The unit tangent, viewed as a vector of E^{2,1}, is unchanged. Where the
translated curve runs against that tangent (past a centre of curvature) the
recorded speed is negative; curvatures and radii always refer to the
orientation given by the tangent field.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .curves import CurvatureInterval, IntrinsicCurve, SampledCurve, h_decode, unit_tangent_path
from .models import (
    Isometry,
    ModelId,
    ModelVector,
    chart_arrays,
    Reflection,
    frame_matrix,
    hyperboloid_vector,
    isometry_from_unit_tangent,
    reflect_in_geodesic,
    to_hyperboloid,
)

SINGULAR_GUARD = 1e-6


class RegularityError(ValueError):
    """A normal translation would create a cusp."""

    def __init__(self, message: str, t: float | None = None, kappa: float | None = None):
        super().__init__(message)
        self.t = t
        self.kappa = kappa


class IntervalClass(enum.Enum):
    CONTAINED = "contained"
    DISJOINT = "disjoint"
    OVERLAPPING = "overlapping"
    CONTAINING = "containing"
    MINUS_ONE_ONE = "minus_one_one"


def classify_interval(b: CurvatureInterval) -> IntervalClass:
    """Position of ``(lo, hi)`` relative to ``[-1, 1]``."""
    lo, hi = b.lo, b.hi
    if lo == -1.0 and hi == 1.0:
        return IntervalClass.MINUS_ONE_ONE
    if lo >= -1.0 and hi <= 1.0:
        return IntervalClass.CONTAINED
    if lo >= 1.0 or hi <= -1.0:
        return IntervalClass.DISJOINT
    if lo < -1.0 and hi > 1.0:
        return IntervalClass.CONTAINING
    return IntervalClass.OVERLAPPING


def _coth(x: float) -> float:
    if x == 0:
        return math.copysign(math.inf, x)
    return 1.0 / math.tanh(x) if math.isfinite(x) else math.copysign(1.0, x)


def _arccoth(k: float) -> float:
    if math.isinf(k):
        return 0.0
    if abs(k) == 1.0:
        return math.copysign(math.inf, k)
    return math.atanh(1.0 / k)


def radius_of_curvature(kappa):
    """Signed radius: ``arccoth`` for circles, ``arctanh`` for hypercircles, ``+-inf`` for horocycles."""
    k = np.asarray(kappa, dtype=float)
    a = np.abs(k)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(a > 1.0, np.arctanh(1.0 / k), np.arctanh(np.where(a < 1.0, k, 0.0)))
    out = np.where(a == 1.0, np.copysign(np.inf, k), out)
    return float(out) if out.ndim == 0 else out


def curvature_of_radius(r, regime: str):
    """Curvature of a constant-curvature curve of signed radius ``r``."""
    r = np.asarray(r, dtype=float)
    if regime == "circle":
        with np.errstate(divide="ignore"):
            out = 1.0 / np.tanh(r)
    elif regime == "hypercircle":
        out = np.tanh(r)
    elif regime == "horocycle":
        out = np.sign(r)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return float(out) if out.ndim == 0 else out


def translated_curvature(kappa, rho: float):
    """Curvature after normal translation by ``rho``.

    For ``|kappa| > 1`` this is ``(1 - k coth rho) / (k - coth rho)``, for
    ``|kappa| < 1`` it is ``(k - tanh rho) / (1 - k tanh rho)`` and horocycles
    keep their curvature. All three cases are the same Mobius map of ``k``,
    evaluated here in the form that stays finite at ``rho = 0``.
    """
    k = np.asarray(kappa, dtype=float)
    th = math.tanh(rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(np.isinf(k), -1.0 / th if th else k, (k - th) / (1.0 - k * th))
    return float(out) if out.ndim == 0 else out


def translate_bounds(b: CurvatureInterval, rho: float) -> CurvatureInterval:
    """Image of open curvature bounds; requires translation to preserve orientation."""
    if rho == 0:
        return b
    th = math.tanh(rho)
    if th > 0 and b.hi > 1.0 / th or th < 0 and b.lo < 1.0 / th:
        raise RegularityError(f"translation by {rho} reverses part of the curvature band {b.as_tuple()}")

    def image(k: float, upper: bool) -> float:
        den = 1.0 - k * th if math.isfinite(k) else None
        if den is None:
            return -1.0 / th
        if den == 0.0:
            return math.inf if upper else -math.inf
        return (k - th) / den

    return CurvatureInterval(image(b.lo, False), image(b.hi, True))


def _check_regular(kappa: np.ndarray, params: np.ndarray, rho: float, guard: float) -> None:
    if rho == 0:
        return
    c = _coth(rho)
    lo, hi = float(kappa.min()), float(kappa.max())
    if lo - guard <= c <= hi + guard:
        i = int(np.argmin(np.abs(kappa - c)))
        raise RegularityError(
            f"coth({rho:.6g}) = {c:.6g} meets the curvature range [{lo:.6g}, {hi:.6g}] "
            f"(closest at t={params[i]:.6g}, kappa={kappa[i]:.6g})",
            t=float(params[i]),
            kappa=float(kappa[i]),
        )


def translate_frames(frames: np.ndarray, rho: float) -> np.ndarray:
    """Apply ``(g, t, n) -> (ch g + sh n, t, ch n + sh g)`` to an array of frames."""
    F = np.asarray(frames, dtype=float)
    ch, sh = math.cosh(rho), math.sinh(rho)
    out = F.copy()
    out[..., :, 0] = ch * F[..., :, 0] + sh * F[..., :, 2]
    out[..., :, 2] = ch * F[..., :, 2] + sh * F[..., :, 0]
    return out


def normal_translate(sc: SampledCurve, rho: float, guard: float = SINGULAR_GUARD) -> SampledCurve:
    """Normal translation of a sampled curve by ``rho``."""
    if not math.isfinite(rho):
        raise ValueError("rho must be finite")
    if rho == 0:
        return sc
    k = np.asarray(sc.curvatures)
    _check_regular(k, sc.params, rho, guard)
    factor = math.cosh(rho) - k * math.sinh(rho)
    return SampledCurve(sc.params, translate_frames(sc.frames, rho), translated_curvature(k, rho), sc.speed * factor)


def normal_translate_curve(
    c: IntrinsicCurve,
    rho: float,
    guard: float = SINGULAR_GUARD,
    max_error: float | None = None,
    max_parts: int = 4096,
) -> IntrinsicCurve:
    """Normal translation acting on intrinsic data.

    Node values are transformed exactly. Between nodes the result is
    re-interpolated, which is exact only for piecewise-constant data; with
    ``max_error`` the grid is refined until the interpolated curvature and
    relative speed deviate from the exact transform by at most that much at
    cell midpoints.
    """
    return translate_refined(c, rho, guard, max_error, max_parts)[1]


def translate_refined(
    c: IntrinsicCurve,
    rho: float,
    guard: float = SINGULAR_GUARD,
    max_error: float | None = None,
    max_parts: int = 4096,
) -> tuple[IntrinsicCurve, IntrinsicCurve]:
    """As :func:`normal_translate_curve`, also returning the source on the refined grid."""
    if rho == 0:
        return c, c
    _check_regular(c.kappa, c.grid, rho, guard)
    bounds = translate_bounds(c.bounds, rho)
    frame0 = Isometry(translate_frames(c.frame0.m, rho))
    parts = 1
    while True:
        src = c.refined(parts)
        k = src.kappa
        factor = math.cosh(rho) - k * math.sinh(rho)
        if np.any(factor <= 0):
            raise RegularityError("translation reverses the curve; intrinsic data need positive speed")
        kappa = np.clip(translated_curvature(k, rho), np.nextafter(bounds.lo, math.inf), np.nextafter(bounds.hi, -math.inf))
        out = IntrinsicCurve.from_values(frame0, src.grid, src.sigma * factor, kappa, bounds)
        if max_error is None or parts >= max_parts or _interpolation_error(src, out, rho) <= max_error:
            return src, out
        parts *= 2


def _interpolation_error(src: IntrinsicCurve, out: IntrinsicCurve, rho: float) -> float:
    # both curves share a grid; cell midpoints are averages of encoded end values
    live = np.diff(src.grid) > 0

    def mids(c: IntrinsicCurve):
        s = 0.5 * (c.sigma_hat[:-1] + c.sigma_hat[1:])[live]
        k = 0.5 * (c.kappa_hat[:-1] + c.kappa_hat[1:])[live]
        return h_decode(s), c.bounds.decode(k)

    s, k = mids(src)
    s_out, k_out = mids(out)
    exact_s = s * (math.cosh(rho) - k * math.sinh(rho))
    err_k = np.abs(k_out - translated_curvature(k, rho))
    err_s = np.abs(s_out - exact_s) / exact_s
    return float(max(err_k.max(), err_s.max()))


def translate_unit_tangent(u: ModelVector, rho: float) -> ModelVector:
    """Parallel transport of ``u`` a distance ``rho`` along the geodesic leaving along ``Ju``."""
    p, w = to_hyperboloid(u)
    F = translate_frames(frame_matrix(p, w), rho)
    return hyperboloid_vector(F[:, 0], F[:, 1], u.model)


def reflect_curve(c: IntrinsicCurve, r: Reflection) -> IntrinsicCurve:
    """Image under a reflection; signed curvature changes sign."""
    frame0 = Isometry(r.reflect_frame(c.frame0.m))
    bounds = c.bounds.negated()
    return IntrinsicCurve(frame0, c.grid, c.sigma_hat, bounds.encode(-c.kappa), bounds)


def reflect_sampled(sc: SampledCurve, r: Reflection) -> SampledCurve:
    frames = np.einsum("ij,njk->nik", r.matrix, sc.frames)
    frames[:, :, 2] = -frames[:, :, 2]
    return SampledCurve(sc.params, frames, -sc.curvatures, sc.speed)


def move_curve(c: IntrinsicCurve, g: Isometry) -> IntrinsicCurve:
    return c.with_frame(g @ c.frame0)


def move_sampled(sc: SampledCurve, g: Isometry) -> SampledCurve:
    return SampledCurve(sc.params, np.einsum("ij,njk->nik", g.m, sc.frames), sc.curvatures, sc.speed)


@dataclass(frozen=True, eq=False)
class ReductionRecipe:
    """Reflection (optional), normal translation and isometry reducing a curve space.

    ``negated`` records whether a reflection flipped curvature signs, so the
    inverse restores them exactly.
    """

    pre_reflection: Reflection | None
    rho: float
    post_isometry: Isometry
    relation: IntervalClass
    kappa0: float
    vbar: ModelVector
    source_bounds: CurvatureInterval
    reduced_bounds: CurvatureInterval
    inverse: bool = False
    u: ModelVector | None = field(default=None)
    v: ModelVector | None = field(default=None)
    ubar: ModelVector | None = field(default=None)

    @property
    def negated(self) -> bool:
        return self.pre_reflection is not None

    def to_dict(self) -> dict:
        def vec(x: ModelVector | None):
            if x is None:
                return None
            return {"model": x.model.value, "point": list(x.base.coords), "dir": list(x.dir)}

        return {
            "relation": self.relation.value,
            "kappa0": self.kappa0,
            "rho": self.rho,
            "reflected": self.negated,
            "reflection_axis_normal": None if self.pre_reflection is None else self.pre_reflection.axis_normal.tolist(),
            "post_isometry": self.post_isometry.m.tolist(),
            "source_bounds": list(self.source_bounds.as_tuple()),
            "reduced_bounds": list(self.reduced_bounds.as_tuple()),
            "u": vec(self.u),
            "v": vec(self.v),
            "ubar": vec(self.ubar),
            "vbar": vec(self.vbar),
            "inverse": self.inverse,
        }


def reduce(b: CurvatureInterval, u: ModelVector, v: ModelVector, ubar: ModelVector) -> ReductionRecipe:
    """Normal form of the curve space with bounds ``b`` from ``u`` to ``v``, started at ``ubar``."""
    relation = classify_interval(b)
    if relation is IntervalClass.MINUS_ONE_ONE:
        raise ValueError("the interval (-1, 1) admits no reduction")
    k1, k2 = b.lo, b.hi
    if relation is IntervalClass.OVERLAPPING:
        negate = not (-1.0 <= k1 < 1.0 < k2)
    elif relation is IntervalClass.CONTAINED:
        negate = k1 == -1.0
    elif relation is IntervalClass.DISJOINT:
        negate = k2 <= -1.0
    else:
        negate = False
    if negate:
        k1, k2 = -k2, -k1

    if relation is IntervalClass.OVERLAPPING:
        rho2 = _arccoth(k2)
        rho1 = math.atanh(k1) if k1 > -1.0 else -math.inf
        rho = rho2
        kappa0 = math.tanh(rho1 - rho2)
        reduced = CurvatureInterval(kappa0, math.inf)
    elif relation is IntervalClass.CONTAINED:
        rho1 = math.atanh(k1)
        rho2 = math.atanh(k2) if k2 < 1.0 else math.inf
        rho = rho1
        kappa0 = math.tanh(rho2 - rho1)
        reduced = CurvatureInterval(0.0, kappa0)
    elif relation is IntervalClass.DISJOINT:
        rho1, rho2 = _arccoth(k1), _arccoth(k2)
        rho = rho2
        kappa0 = _coth(rho1 - rho2) if math.isfinite(rho1) else 1.0
        reduced = CurvatureInterval(kappa0, math.inf)
    else:
        rho1, rho2 = _arccoth(k1), _arccoth(k2)
        rho = 0.5 * (rho1 + rho2)
        kappa0 = _coth(0.5 * (rho2 - rho1)) if rho2 != rho1 else math.inf
        reduced = CurvatureInterval(-kappa0, kappa0)

    reflection = reflect_in_geodesic(u) if negate else None
    v_src = reflection(v) if reflection is not None else v
    u_t = translate_unit_tangent(u, rho)
    v_t = translate_unit_tangent(v_src, rho)
    g = isometry_from_unit_tangent(ubar) @ isometry_from_unit_tangent(u_t).inverse()
    vbar = g(v_t)
    return ReductionRecipe(reflection, rho, g, relation, kappa0, vbar, b, reduced, False, u, v, ubar)


def invert_recipe(r: ReductionRecipe) -> ReductionRecipe:
    return replace(r, inverse=not r.inverse)


def apply_recipe(r: ReductionRecipe, c):
    """Apply a recipe (or its inverse) to an :class:`IntrinsicCurve` or :class:`SampledCurve`."""
    sampled = isinstance(c, SampledCurve)
    translate = normal_translate if sampled else normal_translate_curve
    move = move_sampled if sampled else move_curve
    reflect = reflect_sampled if sampled else reflect_curve
    if not r.inverse:
        if r.pre_reflection is not None:
            c = reflect(c, r.pre_reflection)
        c = translate(c, r.rho)
        out = move(c, r.post_isometry)
        target = r.reduced_bounds
    else:
        c = move(c, r.post_isometry.inverse())
        c = translate(c, -r.rho)
        if r.pre_reflection is not None:
            c = reflect(c, r.pre_reflection)
        out = c
        target = r.source_bounds
    k = out.curvatures if sampled else out.kappa
    if not target.contains(k, tol=1e-9):
        raise ValueError("curvature leaves the admissible band: curve does not belong to the recipe's space")
    return out


def map_turning(r: ReductionRecipe, tau: float, samples: int = 400) -> float:
    """Total turning, in the half-plane chart, of the image of a curve from ``r.u`` to ``r.v`` with turning ``tau``.

    The chart turning is not isometry invariant, but the difference between
    the tangent argument of a vector and that of its image lifts to a function
    on the unit tangent bundle, so its change can be measured along any path
    from ``u`` to ``v``.
    """
    src = (r.ubar, r.vbar) if r.inverse else (r.u, r.v)
    if src[0] is None:
        raise ValueError("recipe does not record its end vectors")
    F = unit_tangent_path(*src, samples=samples)
    G = _apply_recipe_frames(r, F)
    sign = -1.0 if r.negated else 1.0
    _, dz = chart_arrays(F[:, :, 0], F[:, :, 1], ModelId.HALF_PLANE)
    _, dw = chart_arrays(G[:, :, 0], G[:, :, 1], ModelId.HALF_PLANE)
    diff = np.unwrap(np.angle(dw)) - sign * np.unwrap(np.angle(dz))
    return sign * tau + float(diff[-1] - diff[0])


def _apply_recipe_frames(r: ReductionRecipe, F: np.ndarray) -> np.ndarray:
    F = np.array(F, dtype=float)
    if not r.inverse:
        if r.pre_reflection is not None:
            F = np.einsum("ij,njk->nik", r.pre_reflection.matrix, F)
            F[:, :, 2] *= -1
        F = translate_frames(F, r.rho)
        return np.einsum("ij,njk->nik", r.post_isometry.m, F)
    F = np.einsum("ij,njk->nik", r.post_isometry.inverse().m, F)
    F = translate_frames(F, -r.rho)
    if r.pre_reflection is not None:
        F = np.einsum("ij,njk->nik", r.pre_reflection.matrix, F)
        F[:, :, 2] *= -1
    return F
