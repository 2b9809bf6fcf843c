"""Explicit contractions of curve spaces and witness constructors.

Two deformations are provided. For curvature bounds above 1, locally convex
curves in the half-plane are reparametrized by the argument of their tangent
and combined linearly. For bounds inside ``[-1, 1]``, curves are graphs in the
Mercator strip and are deformed through medians of hypercircle profiles.

Mercator profiles carry curvature bands in the strip's own ``(x, y)``
orientation, which is opposite to the half-plane orientation used everywhere
else: a half-plane band ``(k1, k2)`` corresponds to the profile band
``(-k2, -k1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.linalg import expm
from scipy.optimize import brentq, least_squares

from .curves import (
    CurvatureInterval,
    IntrinsicCurve,
    SampledCurve,
    SampledFunction,
    concat,
    constant_curve,
    integrate,
    logarithmic_derivative,
    mercator_graph,
)
from .models import (
    LORENTZ,
    Isometry,
    ModelId,
    ModelVector,
    chart_arrays_to_hyperboloid,
    frame_matrix,
    isometry_from_unit_tangent,
    unit_vector,
)

BISECT_XTOL = 1e-12
BISECT_MAXITER = 80
BLOWUP = 1e8
BAND_PAD = 1e-4
PROFILE_SAMPLES = 1025


# u normalized in the Mercator strip: horizontal unit vector at (pi/2, 0)
MERCATOR_BASE = unit_vector(ModelId.MERCATOR, (math.pi / 2, 0.0), (1.0, 0.0))


def normalizing_isometry(u: ModelVector) -> Isometry:
    """Isometry taking ``u`` to the horizontal unit vector at ``(pi/2, 0)`` in the Mercator strip."""
    return isometry_from_unit_tangent(MERCATOR_BASE) @ isometry_from_unit_tangent(u).inverse()


class HomotopyError(RuntimeError):
    """A deformation left its constraints (an internal consistency failure)."""


class SteeringError(RuntimeError):
    """No bang-bang solution was found within the search budget."""


@dataclass(frozen=True, eq=False)
class HomotopyFamily:
    """Curves indexed by ``s`` in ``[0, 1]`` sharing end data and turning."""

    s_grid: np.ndarray
    curves: list
    kind: str
    bounds: CurvatureInterval
    metadata: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.curves)


# ---------------------------------------------------------------------------
# Curves parametrized by tangent argument (curvature above 1)


@dataclass(frozen=True, eq=False)
class ArgumentCurve:
    """A locally convex half-plane curve sampled on a uniform grid of tangent argument.

    ``theta`` runs over ``[0, tau]``; the tangent at ``points[i]`` has argument
    ``theta0 + theta[i]``. ``radius`` holds the Euclidean radius of curvature,
    i.e. ``|d points / d theta|``.
    """

    tau: float
    theta0: float
    theta: np.ndarray
    points: np.ndarray
    radius: np.ndarray

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("total turning must be positive")
        if np.any(self.points.imag <= 0):
            raise ValueError("points must lie in the upper half-plane")
        if np.any(self.radius <= 0):
            raise ValueError("radius of curvature must be positive")

    @property
    def directions(self) -> np.ndarray:
        return np.exp(1j * (self.theta0 + self.theta))

    def centers(self) -> np.ndarray:
        return self.points + self.radius * 1j * self.directions

    def curvatures(self) -> np.ndarray:
        """Hyperbolic curvature of each osculating circle."""
        return self.centers().imag / self.radius

    def diameters(self) -> np.ndarray:
        """Hyperbolic diameter of each osculating circle."""
        yc = self.centers().imag
        return np.log((yc + self.radius) / (yc - self.radius))

    def to_sampled(self) -> SampledCurve:
        d = self.directions
        P, W = chart_arrays_to_hyperboloid(self.points, d, ModelId.HALF_PLANE)
        W = W / np.sqrt(np.einsum("ni,ij,nj->n", W, LORENTZ, W))[:, None]
        frames = np.array([frame_matrix(p, w) for p, w in zip(P, W)])
        return SampledCurve(self.theta, frames, self.curvatures(), self.radius / self.points.imag)


def osculating_circle_H(p: complex, tangent_dir: complex, kappa_h: float) -> tuple[complex, float]:
    """Euclidean centre and radius of the circle of hyperbolic curvature ``kappa_h`` tangent at ``p``."""
    if not kappa_h > 1:
        raise ValueError("osculating circles need curvature above 1")
    if not p.imag > 0:
        raise ValueError("point must lie in the upper half-plane")
    e = tangent_dir / abs(tangent_dir)
    # the left normal i*e has vertical component e.real
    kappa_e = (kappa_h - e.real) / p.imag
    r = 1.0 / kappa_e
    return p + r * 1j * e, r


def _euclidean_radius(z: np.ndarray, dz: np.ndarray, kappa_h: np.ndarray) -> np.ndarray:
    e = dz / np.abs(dz)
    return z.imag / (kappa_h - e.real)


def reparam_by_argument(c: IntrinsicCurve | SampledCurve, samples: int = 1025) -> ArgumentCurve:
    """Resample a locally convex curve on a uniform grid of tangent argument.

    For an :class:`IntrinsicCurve` the parameter is found by monotone
    interpolation of its inverse argument function and the points are then
    computed exactly on the curve; a :class:`SampledCurve` is interpolated
    directly.
    """
    if isinstance(c, IntrinsicCurve):
        params = np.unique(np.concatenate([c.grid, np.linspace(0.0, 1.0, 4 * samples + 1)]))
        sc = integrate(c, params=params)
    else:
        sc = c
    if np.any(sc.curvatures <= 1.0):
        i = int(np.argmin(sc.curvatures))
        raise ValueError(f"curvature {sc.curvatures[i]:.6g} <= 1 at t={sc.params[i]:.6g}")
    z, dz = sc.chart(ModelId.HALF_PLANE)
    arg = np.unwrap(np.angle(dz))
    step = np.diff(arg)
    if np.any(step <= 0):
        i = int(np.argmax(step <= 0))
        raise ValueError(f"tangent argument is not increasing near t={sc.params[i]:.6g}")
    tau = float(arg[-1] - arg[0])
    theta = np.linspace(0.0, tau, samples)
    rel = arg - arg[0]
    if isinstance(c, IntrinsicCurve):
        t_of = PchipInterpolator(rel, sc.params)
        t = np.clip(t_of(theta), 0.0, 1.0)
        t[0], t[-1] = 0.0, 1.0
        exact = integrate(c, params=t)
        zz, dd = exact.chart(ModelId.HALF_PLANE)
        radius = _euclidean_radius(zz, dd, exact.curvatures)
        # the interpolated parameters miss the target argument slightly; move
        # each point along its osculating circle by the residual angle
        got = np.unwrap(np.angle(dd)) - arg[0]
        got += 2 * np.pi * np.round((theta - got) / (2 * np.pi))
        zz = zz + (theta - got) * radius * np.exp(1j * (arg[0] + got))
        return ArgumentCurve(tau, float(arg[0]), theta, zz, radius)
    radius = _euclidean_radius(z, dz, sc.curvatures)
    zi = PchipInterpolator(rel, z.real)(theta) + 1j * PchipInterpolator(rel, z.imag)(theta)
    ri = PchipInterpolator(rel, radius)(theta)
    return ArgumentCurve(tau, float(arg[0]), theta, zi, ri)


def _same_end_data(g0: ArgumentCurve, g1: ArgumentCurve, tol: float) -> None:
    if abs(g0.tau - g1.tau) > tol:
        raise ValueError(f"total turnings differ: {g0.tau} vs {g1.tau}")
    if g0.theta.shape != g1.theta.shape:
        raise ValueError("argument grids differ")
    d0 = (g0.theta0 - g1.theta0 + math.pi) % (2 * math.pi) - math.pi
    if abs(d0) > tol:
        raise ValueError("initial tangents differ")
    if abs(g0.points[0] - g1.points[0]) > tol * max(1.0, abs(g0.points[0])):
        raise ValueError("initial points differ")
    if abs(g0.points[-1] - g1.points[-1]) > tol * max(1.0, abs(g0.points[-1])):
        raise ValueError("final points differ")


def contract_disjoint(
    g0: ArgumentCurve,
    g1: ArgumentCurve,
    s_grid: Sequence[float],
    bounds: CurvatureInterval,
    tol: float = 1e-8,
) -> HomotopyFamily:
    """Linear homotopy ``(1 - s) g0 + s g1`` at equal tangent argument."""
    if bounds.lo < 1.0:
        raise ValueError("the argument homotopy needs curvature bounds above 1")
    _same_end_data(g0, g1, tol)
    s_grid = np.asarray(s_grid, dtype=float)
    d_min = 2 * math.atanh(1.0 / bounds.hi) if math.isfinite(bounds.hi) else 0.0
    d_max = 2 * math.atanh(1.0 / bounds.lo) if bounds.lo > 1.0 else math.inf
    curves = []
    worst_lo = worst_hi = math.inf
    for s in s_grid:
        pts = (1 - s) * g0.points + s * g1.points
        rad = (1 - s) * g0.radius + s * g1.radius
        gs = ArgumentCurve(g0.tau, g0.theta0, g0.theta, pts, rad)
        d = gs.diameters()
        worst_lo = min(worst_lo, float(np.min(d - d_min)))
        worst_hi = min(worst_hi, float(np.min(d_max - d)))
        if not (np.all(d > d_min) and np.all(d < d_max)):
            raise HomotopyError(f"curvature leaves the band at s={s}")
        curves.append(gs)
    return HomotopyFamily(
        s_grid,
        curves,
        "disjoint",
        bounds,
        {"tau": g0.tau},
        {"diameter_margin_low": worst_lo, "diameter_margin_high": worst_hi},
    )


# ---------------------------------------------------------------------------
# Mercator profiles (curvature inside [-1, 1])


def psi(kappa: float, x, z):
    """Slope derivative of a Mercator graph with strip curvature ``kappa``."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    q = 1.0 + z * z
    return q / np.sin(x) * (z * np.cos(x) + kappa * np.sqrt(q))


def _solve_psi(kappa: float, x0: float, z0: float, xs: np.ndarray) -> np.ndarray:
    """Solve ``z' = psi(kappa, x, z)`` from ``(x0, z0)`` and sample it at ``xs``.

    The graph is followed by Euclidean arclength with slope angle ``phi`` so a
    vertical tangent (slope blow-up) is an ordinary event. Beyond it the
    solution is extended by its signed infinite limit.
    """
    xs = np.asarray(xs, dtype=float)
    out = np.full(xs.shape, np.nan)
    at0 = np.abs(xs - x0) == 0
    out[at0] = z0
    forward = xs > x0
    backward = xs < x0
    for mask, direction in ((forward, 1.0), (backward, -1.0)):
        if not mask.any():
            continue
        target = xs[mask].max() if direction > 0 else xs[mask].min()

        def rhs(s, y):
            x, phi = y
            return [math.cos(phi), (math.sin(phi) * math.cos(x) + kappa) / math.sin(x)]

        def reach(s, y):
            return y[0] - target

        def vertical(s, y):
            return math.cos(y[1]) - 1.0 / BLOWUP

        def edge(s, y):
            return min(y[0], math.pi - y[0]) - 1e-9

        for ev in (reach, vertical, edge):
            ev.terminal = True
        span = 8.0 * math.pi * (1.0 + abs(target - x0))
        sol = solve_ivp(
            rhs,
            (0.0, direction * span),
            [x0, math.atan(z0)],
            method="DOP853",
            rtol=1e-12,
            atol=1e-13,
            dense_output=True,
            events=(reach, vertical, edge),
        )
        x_end = sol.y[0, -1]
        phi_end = sol.y[1, -1]
        xm = xs[mask]
        inside = (xm <= x_end + 1e-14) if direction > 0 else (xm >= x_end - 1e-14)
        vals = np.full(xm.shape, math.copysign(math.inf, math.sin(phi_end)))
        if inside.any():
            xt = xm[inside]
            s_tab = sol.t
            x_tab = sol.y[0]
            order = np.argsort(x_tab)
            s = np.interp(xt, x_tab[order], s_tab[order])
            for _ in range(6):
                y = sol.sol(s)
                dx = direction * np.cos(y[1])
                step = (y[0] - xt) / np.where(np.abs(dx) > 1e-300, dx, 1e-300) * direction
                s = s - step
                s = np.clip(s, min(0.0, sol.t[-1]), max(0.0, sol.t[-1]))
            vals[inside] = np.tan(sol.sol(s)[1])
        out[mask] = vals
    return out


def default_grid(a: float, b: float, samples: int = PROFILE_SAMPLES) -> np.ndarray:
    return np.linspace(a, b, samples)


@lru_cache(maxsize=4096)
def _cached(kappa: float, x0: float, z0: float, grid_key: tuple) -> np.ndarray:
    xs = np.frombuffer(grid_key[0], dtype=float)
    out = _solve_psi(kappa, x0, z0, xs)
    out.setflags(write=False)
    return out


def _solve_on(kappa: float, x0: float, z0: float, xs: np.ndarray) -> np.ndarray:
    xs = np.ascontiguousarray(xs, dtype=float)
    return _cached(float(kappa), float(x0), float(z0), (xs.tobytes(),))


def solve_g(kappa: float, a: float, b: float, alpha: float, x: np.ndarray | None = None) -> SampledFunction:
    """Slope of the constant-curvature graph leaving ``(a, alpha)``."""
    xs = default_grid(a, b) if x is None else np.asarray(x, dtype=float)
    return SampledFunction(xs, _solve_on(kappa, a, alpha, xs))


def solve_h(kappa: float, a: float, b: float, beta: float, x: np.ndarray | None = None) -> SampledFunction:
    """Slope of the constant-curvature graph arriving at ``(b, beta)``; infinite left of a blow-up."""
    xs = default_grid(a, b) if x is None else np.asarray(x, dtype=float)
    return SampledFunction(xs, _solve_on(kappa, b, beta, xs))


def median5(v1, v2, v3, v4, v5):
    """Pointwise median of five values (infinities allowed)."""
    stacked = np.stack(np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (v1, v2, v3, v4, v5))))
    out = np.sort(stacked, axis=0)[2]
    return float(out) if out.ndim == 0 else out


def profile_from_curvature(a: float, alpha: float, kappa_of_x, x: np.ndarray) -> SampledFunction:
    """Slope profile whose graph has prescribed strip curvature ``kappa_of_x``."""
    x = np.asarray(x, dtype=float)
    sol = solve_ivp(
        lambda t, z: psi(kappa_of_x(t), t, z),
        (x[0], x[-1]),
        [alpha],
        method="DOP853",
        rtol=1e-12,
        atol=1e-13,
        t_eval=x,
    )
    if not sol.success or sol.y.shape[1] != x.size:
        raise HomotopyError("profile integration failed")
    return SampledFunction(x, sol.y[0])


@dataclass(frozen=True, eq=False)
class MercatorProfile:
    """Slope profile ``f`` of a Mercator graph over ``[a, b]`` with boundary data.

    ``bands`` are the inner curvature bounds in strip orientation; ``y0`` is
    the height of the initial point.
    """

    a: float
    b: float
    alpha: float
    beta: float
    A0: float
    f: SampledFunction
    bands: tuple[float, float]
    y0: float = 0.0

    def __post_init__(self):
        if not 0 < self.a < self.b < math.pi:
            raise ValueError("need 0 < a < b < pi")
        k1, k2 = self.bands
        if not -1.0 <= k1 < k2 <= 1.0:
            raise ValueError("bands must satisfy -1 <= k1 < k2 <= 1")

    @property
    def x(self) -> np.ndarray:
        return self.f.x

    @classmethod
    def from_function(cls, f: SampledFunction, bands: tuple[float, float], y0: float = 0.0) -> "MercatorProfile":
        return cls(f.a, f.b, float(f.y[0]), float(f.y[-1]), f.integral(), f, tuple(bands), y0)

    def g(self, kappa: float) -> np.ndarray:
        return _solve_on(kappa, self.a, self.alpha, self.x)

    def h(self, kappa: float) -> np.ndarray:
        return _solve_on(kappa, self.b, self.beta, self.x)

    def inequality_residual(self, values: np.ndarray | None = None) -> float:
        """Largest violation of the slope inequalities by one-sided difference quotients.

        Each quotient is compared with the range of the bounding slope
        derivatives over its cell, widened by their second differences (the
        interpolation error of that range).
        """
        y = self.f.y if values is None else np.asarray(values, dtype=float)
        x = self.x
        q = np.diff(y) / np.diff(x)
        k1, k2 = self.bands
        lo = psi(k1, x, y)
        hi = psi(k2, x, y)

        def slack(p):
            d2 = np.zeros_like(p)
            d2[1:-1] = np.abs(p[2:] - 2 * p[1:-1] + p[:-2])
            return np.maximum(d2[1:], d2[:-1])

        lo_cell = np.minimum(lo[1:], lo[:-1]) - slack(lo)
        hi_cell = np.maximum(hi[1:], hi[:-1]) + slack(hi)
        return float(max(0.0, np.max(lo_cell - q), np.max(q - hi_cell)))

    def check(self, values: np.ndarray | None = None, area_tol: float = 1e-8, end_tol: float = 1e-9) -> dict:
        y = self.f.y if values is None else np.asarray(values, dtype=float)
        if not np.all(np.isfinite(y)):
            raise HomotopyError("profile is not finite")
        area = float(np.trapezoid(y, self.x))
        res = {
            "start": abs(y[0] - self.alpha),
            "end": abs(y[-1] - self.beta),
            "area": abs(area - self.A0),
            "inequality": self.inequality_residual(y),
        }
        res["ok"] = res["start"] <= end_tol and res["end"] <= end_tol and res["area"] <= area_tol * (1 + abs(self.A0))
        return res

    def graph(self, values: np.ndarray | None = None) -> SampledCurve:
        y = self.f.y if values is None else values
        return mercator_graph(self.a, self.b, self.y0, SampledFunction(self.x, y))


def pad_bands(bounds: tuple[float, float], kappa_range: tuple[float, float], delta: float = BAND_PAD) -> tuple[float, float]:
    """Inner bands strictly inside ``bounds`` that still contain ``kappa_range``."""
    k1, k2 = bounds
    lo, hi = kappa_range
    b1 = k1 + max(delta, (lo - k1) / 2)
    b2 = k2 - max(delta, (k2 - hi) / 2)
    if not b1 <= lo or not hi <= b2:
        raise ValueError("curvature range too close to the bounds for the requested padding")
    return b1, b2


def _bisect_predicate(pred, lo: float, hi: float) -> float:
    """Smallest ``k`` in ``[lo, hi]`` with ``pred(k)`` true (``pred`` monotone)."""
    if pred(lo):
        return lo
    if not pred(hi):
        raise HomotopyError("predicate never holds on the band")
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= BISECT_XTOL:
            break
    return hi


def kappa_band(p: MercatorProfile, tol: float = 1e-10) -> tuple[float, float]:
    """Extreme constant-curvature slopes from ``alpha`` that sandwich the profile."""
    k1, k2 = p.bands
    f = p.f.y
    k_plus = _bisect_predicate(lambda k: bool(np.all(f <= p.g(k) + tol)), k1, k2)
    k_minus = -_bisect_predicate(lambda k: bool(np.all(p.g(-k) <= f + tol)), -k2, -k1)
    if k_minus > k_plus:
        k_minus = k_plus = 0.5 * (k_minus + k_plus)
    return k_minus, k_plus


def median_profile(p: MercatorProfile, lam: float, mu: float) -> np.ndarray:
    k1, k2 = p.bands
    return median5(p.h(k1), p.g(lam), p.f.y, p.g(mu), p.h(k2))


def area(p: MercatorProfile, lam: float, mu: float) -> float:
    return float(np.trapezoid(median_profile(p, lam, mu), p.x))


def find_lambda_mu(p: MercatorProfile, s: float, band: tuple[float, float] | None = None) -> tuple[float, float]:
    """The point on ``mu - lam = s (k+ - k-)`` where the median profile has area ``A0``."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    km, kp = kappa_band(p) if band is None else band
    gap = s * (kp - km)
    lo, hi = km, kp - gap
    tol = 1e-10 * (1 + abs(p.A0))
    if hi - lo <= BISECT_XTOL:
        return lo, lo + gap

    def F(lam):
        return area(p, lam, lam + gap) - p.A0

    f_lo, f_hi = F(lo), F(hi)
    if abs(f_lo) <= tol:
        return lo, lo + gap
    if abs(f_hi) <= tol:
        return hi, hi + gap
    if f_lo > 0 or f_hi < 0:
        raise HomotopyError(f"area root not bracketed at s={s}: {f_lo:.3g}, {f_hi:.3g}")
    lam = brentq(F, lo, hi, xtol=BISECT_XTOL, maxiter=BISECT_MAXITER)
    return lam, lam + gap


def contract_contained(p: MercatorProfile, s_grid: Sequence[float]) -> HomotopyFamily:
    """Median deformation of ``p`` to the canonical profile at ``s = 0``."""
    band = kappa_band(p)
    s_grid = np.asarray(s_grid, dtype=float)
    curves, params, checks = [], [], []
    for s in s_grid:
        lam, mu = find_lambda_mu(p, float(s), band)
        vals = median_profile(p, lam, mu)
        chk = p.check(vals)
        if not chk["ok"]:
            raise HomotopyError(f"median profile violates boundary or area conditions at s={s}: {chk}")
        params.append((lam, mu))
        checks.append(chk)
        curves.append(SampledFunction(p.x, vals))
    return HomotopyFamily(
        s_grid,
        curves,
        "contained",
        CurvatureInterval(*p.bands) if p.bands[0] < p.bands[1] else CurvatureInterval(),
        {"band": band, "lambda_mu": params, "profile": p},
        {
            "area": max(c["area"] for c in checks),
            "inequality": max(c["inequality"] for c in checks),
            "endpoints": max(max(c["start"], c["end"]) for c in checks),
        },
    )


# ---------------------------------------------------------------------------
# Witnesses: bang-bang steering and loops


def _arc(kappa: float, length: float) -> np.ndarray:
    return expm(length * logarithmic_derivative(1.0, kappa))


def _interior_levels(b: CurvatureInterval) -> list[float]:
    lo, hi = b.lo, b.hi
    if math.isfinite(lo) and math.isfinite(hi):
        return [lo + (hi - lo) * q for q in (0.1, 0.3, 0.5, 0.7, 0.9)]
    if math.isfinite(lo):
        return [lo + (1 + abs(lo)) * q for q in (0.1, 0.5, 1.0, 2.0, 4.0)]
    if math.isfinite(hi):
        return [hi - (1 + abs(hi)) * q for q in (4.0, 2.0, 1.0, 0.5, 0.1)]
    return [-3.0, -1.5, 0.0, 1.5, 3.0]


def _level_pairs(b: CurvatureInterval) -> list[tuple[float, float]]:
    lv = _interior_levels(b)
    pairs = [(lv[0], lv[-1]), (lv[1], lv[-2]), (lv[0], lv[2]), (lv[2], lv[-1]), (lv[-1], lv[0])]
    return [p for p in pairs if max(abs(p[0]), abs(p[1])) > 1.0 and p[0] != p[1]]


def _arc_scale(k: float) -> float:
    a = abs(k)
    return 2 * math.pi * math.sinh(math.atanh(1.0 / a)) if a > 1 else 2 * math.pi


def bang_bang_curve(frame0: Isometry, kappas: Sequence[float], lengths: Sequence[float], bounds: CurvatureInterval) -> IntrinsicCurve:
    """Concatenation of constant-curvature arcs, parametrized proportionally to arclength."""
    pairs = [(k, L) for k, L in zip(kappas, lengths) if L > 1e-12]
    if not pairs:
        raise ValueError("all arcs have zero length")
    total = sum(L for _, L in pairs)
    grid, kap = [0.0], [pairs[0][0]]
    acc = 0.0
    for i, (k, L) in enumerate(pairs):
        acc += L
        t = 1.0 if i == len(pairs) - 1 else acc / total
        grid.append(t)
        kap.append(k)
        if i < len(pairs) - 1:
            grid.append(t)
            kap.append(pairs[i + 1][0])
    return IntrinsicCurve.from_values(frame0, grid, total, kap, bounds)


def steer(
    u: ModelVector,
    v: ModelVector,
    b: CurvatureInterval,
    *,
    budget: int = 48,
    seed: int = 0,
    tol: float = 1e-6,
) -> IntrinsicCurve | None:
    """Bang-bang curve from ``u`` to ``v`` with curvature inside ``b``.

    Arcs alternate between two admissible curvature levels; their lengths are
    found by bounded least squares from deterministic seeds. Returns ``None``
    when ``v`` equals ``u`` (the empty curve). ``budget`` caps the number of
    solver starts.
    """
    if not (abs(b.lo) > 1 or abs(b.hi) > 1):
        raise ValueError("steering needs a curvature bound of modulus above 1")
    F0 = isometry_from_unit_tangent(u)
    F1 = isometry_from_unit_tangent(v)
    if np.abs(F0.m - F1.m).max() < 1e-12:
        return None
    target_inv = F1.inverse().m @ F0.m
    rng = np.random.default_rng(seed)
    starts = 0
    for ka, kb in _level_pairs(b):
        la, lb = _arc_scale(ka), _arc_scale(kb)
        for n_arcs in (3, 4, 5):
            ks = [ka if i % 2 == 0 else kb for i in range(n_arcs)]
            scales = np.array([la if i % 2 == 0 else lb for i in range(n_arcs)])

            def residual(L):
                M = target_inv
                for k, l in zip(ks, L):
                    M = M @ _arc(k, l)
                return (M - np.eye(3)).ravel()

            for _ in range(4):
                if starts >= budget:
                    raise SteeringError(f"no bang-bang solution within {budget} starts")
                starts += 1
                x0 = rng.uniform(0.05, 1.0, n_arcs) * scales
                sol = least_squares(residual, x0, bounds=(0.0, np.inf), xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
                if np.abs(sol.fun).max() > 1e-10 or sol.x.sum() <= 1e-9:
                    continue
                c = bang_bang_curve(F0, ks, sol.x, b)
                end = integrate(c, params=[1.0]).frames[-1]
                if np.abs(end - F1.m).max() <= tol:
                    return c
    raise SteeringError("no bang-bang solution found")


def loop_concat(c: IntrinsicCurve, n: int, kappa_loop: float) -> IntrinsicCurve:
    """Prepend ``|n|`` full circles of curvature ``kappa_loop``; turning shifts by ``2 pi |n| sign(kappa_loop)``."""
    if not abs(kappa_loop) > 1:
        raise ValueError("loops need |kappa| > 1")
    if not c.bounds.contains(kappa_loop):
        raise ValueError("loop curvature outside the curve's bounds")
    if n == 0:
        return c
    r = math.atanh(1.0 / abs(kappa_loop))
    loop = constant_curve(c.frame0, kappa_loop, 2 * math.pi * math.sinh(r) * abs(n), c.bounds)
    return concat(loop, c)


def curve_to_profile(c: IntrinsicCurve, samples: int = PROFILE_SAMPLES) -> tuple[MercatorProfile, Isometry]:
    """Slope profile of a curve with curvature inside ``[-1, 1]``, after normalizing its initial tangent.

    Nodes are placed at nearly uniform ``x`` by monotone interpolation of the
    inverse of ``x(t)`` and then evaluated exactly on the curve. Returns the
    profile and the normalizing isometry.
    """
    if not (c.bounds.lo >= -1.0 and c.bounds.hi <= 1.0):
        raise ValueError("profiles need curvature bounds inside [-1, 1]")
    g = normalizing_isometry(c.initial_tangent())
    moved = c.with_frame(g @ c.frame0)
    dense = integrate(moved, params=np.linspace(0.0, 1.0, 8 * samples + 1))
    m, _ = dense.chart(ModelId.MERCATOR)
    if np.any(np.diff(m.real) <= 0):
        raise ValueError("curve is not a graph over x in the normalized Mercator chart")
    x_target = np.linspace(m.real[0], m.real[-1], samples)
    t = np.clip(PchipInterpolator(m.real, dense.params)(x_target), 0.0, 1.0)
    t[0], t[-1] = 0.0, 1.0
    exact = integrate(moved, params=t)
    z, dz = exact.chart(ModelId.MERCATOR)
    f = SampledFunction(z.real, dz.imag / dz.real)
    kappa_m = -exact.curvatures
    m1, m2 = -c.bounds.hi, -c.bounds.lo
    bands = pad_bands((m1, m2), (float(kappa_m.min()), float(kappa_m.max())))
    prof = MercatorProfile(f.a, f.b, float(f.y[0]), float(f.y[-1]), f.integral(), f, bands, float(z.imag[0]))
    return prof, g


def profile_family_curves(family: HomotopyFamily, g: Isometry | None = None) -> list[SampledCurve]:
    """Mercator graphs of a contained-class family, moved back by ``g^-1``."""
    p: MercatorProfile = family.metadata["profile"]
    out = []
    for f in family.curves:
        sc = p.graph(f.y)
        if g is not None:
            sc = SampledCurve(sc.params, np.einsum("ij,njk->nik", g.inverse().m, sc.frames), sc.curvatures, sc.speed)
        out.append(sc)
    return out
