"""Turning classes, confinement regions and emptiness tests for curve spaces."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .curves import (
    CurvatureInterval,
    IntrinsicCurve,
    SampledCurve,
    SampledFunction,
    concat,
    constant_curve,
    integrate,
    total_turning,
    unit_tangent_path,
)
from .homotopy import (
    BAND_PAD,
    MercatorProfile,
    SteeringError,
    default_grid,
    normalizing_isometry,
    loop_concat,
    solve_g,
    solve_h,
    steer,
)
from .models import (
    LORENTZ,
    Isometry,
    ModelId,
    ModelPoint,
    ModelVector,
    chart_arrays,
    convert_vector,
    isometry_from_unit_tangent,
    to_hyperboloid,
)
from .transform import IntervalClass, classify_interval, move_sampled

REGION_TOL = 1e-10
TURNING_TOL = 1e-6
TWO_PI = 2 * math.pi

@dataclass(frozen=True)
class TurningClass:
    """Admissible total turnings ``base + 2 pi n`` from ``u`` to ``v`` in the half-plane chart."""

    base: float
    index: int = 0

    @property
    def turning(self) -> float:
        return self.base + TWO_PI * self.index

    def index_of(self, tau: float, tol: float = TURNING_TOL) -> int:
        n = round((tau - self.base) / TWO_PI)
        if abs(tau - self.base - TWO_PI * n) > tol:
            raise ValueError(f"turning {tau} is not congruent to {self.base} mod 2 pi")
        return int(n)

    def with_index(self, n: int) -> "TurningClass":
        return TurningClass(self.base, n)


def _halfplane_arg(u: ModelVector) -> float:
    return math.atan2(*reversed(convert_vector(u, ModelId.HALF_PLANE).dir))


def valid_turnings(u: ModelVector, v: ModelVector) -> TurningClass:
    base = (_halfplane_arg(v) - _halfplane_arg(u)) % TWO_PI
    if TWO_PI - base < 1e-12:
        base = 0.0
    return TurningClass(base)


# ---------------------------------------------------------------------------
# Region bounded by the extreme hypercircles


@dataclass(frozen=True, eq=False)
class RegionR:
    """Open region between the hypercircles of curvature ``kappa1`` and ``kappa2`` tangent to ``u``, ahead of ``u``.

    A constant-curvature curve tangent to ``u`` satisfies ``<x, w> = -kappa``
    with ``w = kappa p + n``, so the side of ``x`` relative to it is the sign of
    ``<x, w> + kappa``.
    """

    kappa1: float
    kappa2: float
    point: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray

    def side(self, kappa: float, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        w = kappa * self.point + self.normal
        return x @ LORENTZ @ w + kappa

    def margins(self, x) -> np.ndarray:
        """Signed distances-like margins; all positive exactly inside."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.column_stack([self.side(self.kappa1, x), -self.side(self.kappa2, x), x @ LORENTZ @ self.tangent])

    def contains(self, x, tol: float = REGION_TOL, closed: bool = False) -> np.ndarray:
        m = self.margins(x)
        ok = np.all(m >= -tol, axis=1) if closed else np.all(m > tol, axis=1)
        return ok


def region_R(kappa1: float, kappa2: float, u: ModelVector) -> RegionR:
    if not -1.0 <= kappa1 < kappa2 <= 1.0:
        raise ValueError("region R needs -1 <= kappa1 < kappa2 <= 1")
    F = isometry_from_unit_tangent(u).m
    return RegionR(float(kappa1), float(kappa2), F[:, 0].copy(), F[:, 1].copy(), F[:, 2].copy())


def region_contains(R: RegionR, p, tol: float = REGION_TOL, closed: bool = False) -> bool:
    x = to_hyperboloid(p) if isinstance(p, ModelPoint) else np.asarray(p, dtype=float)
    return bool(R.contains(x, tol, closed)[0])


def is_graph_in_M(sc: SampledCurve, normalize: bool = True) -> bool:
    """Whether the trace is a graph over ``x`` in the Mercator strip, traversed left to right.

    With ``normalize`` the curve is first moved so that its initial tangent is
    the normalized Mercator vector.
    """
    if normalize:
        sc = move_sampled(sc, normalizing_isometry(sc.unit_tangent(0)))
    m, _ = chart_arrays(sc.points, None, ModelId.MERCATOR)
    return bool(np.all(np.diff(m.real) > 0))


# ---------------------------------------------------------------------------
# Obstruction from monotone boundary angles


def angle_offset_change(u: ModelVector, v: ModelVector, sign: int) -> float:
    """Change of (tangent argument minus boundary angle of the ``sign`` normal ray) from ``u`` to ``v``.

    This difference has no winding around the fibres, so its change is the
    same along every path; it is computed along :func:`unit_tangent_path`.
    """
    F = unit_tangent_path(u, v)
    _, dz = chart_arrays(F[:, :, 0], F[:, :, 1], ModelId.HALF_PLANE)
    theta = np.unwrap(np.angle(dz))
    light = F[:, :, 0] + sign * F[:, :, 2]
    alpha = np.unwrap(np.arctan2(light[:, 2], light[:, 1]))
    diff = theta - alpha
    return float(diff[-1] - diff[0])


def turning_bounds(b: CurvatureInterval, u: ModelVector, v: ModelVector) -> tuple[float, float]:
    """Bounds on the total turning implied by monotone boundary angles.

    Curvature above -1 makes the backward normal ray sweep the boundary
    counterclockwise, so turning is at least the offset change; curvature
    below 1 gives the symmetric upper bound.
    """
    lo = angle_offset_change(u, v, -1) if b.lo >= -1.0 else -math.inf
    hi = angle_offset_change(u, v, 1) if b.hi <= 1.0 else math.inf
    return lo, hi


# ---------------------------------------------------------------------------
# Voidness


class Verdict(enum.Enum):
    NONEMPTY = "NonEmpty"
    EMPTY = "Empty"
    UNKNOWN = "UnknownWithinBudget"


@dataclass(frozen=True, eq=False)
class VoidnessReport:
    verdict: Verdict
    relation: IntervalClass
    tau: float
    reason: str
    witness: IntrinsicCurve | SampledCurve | None = None
    certificate: dict = field(default_factory=dict)


def _loop_level(b: CurvatureInterval, sign: int) -> float | None:
    """An admissible curvature of modulus above 1 and the given sign, if any."""
    if sign > 0:
        lo, hi = max(b.lo, 1.0), b.hi
    else:
        lo, hi = -min(b.hi, -1.0), -b.lo
    if not lo < hi:
        return None
    k = lo + 1.0 if math.isinf(hi) else 0.5 * (lo + hi)
    return sign * k


def _curve_turning(c: IntrinsicCurve) -> float:
    tau = total_turning(integrate(c, samples=257))
    samples = int(64 * (abs(tau) / TWO_PI + 2))
    return total_turning(integrate(c, samples=max(samples, 257)))


def _loops(frame: Isometry, n: int, k: float, b: CurvatureInterval) -> IntrinsicCurve:
    r = math.atanh(1.0 / abs(k))
    return constant_curve(frame, k, TWO_PI * math.sinh(r) * n, b)


def _match_turning(c: IntrinsicCurve | None, frame: Isometry, tau: float, b: CurvatureInterval):
    """Add loops so the witness has turning ``tau``; ``None`` if no loop of the needed sign is admissible.

    ``c = None`` stands for the empty curve from a vector to itself.
    """
    tau_c = 0.0 if c is None else _curve_turning(c)
    n = round((tau - tau_c) / TWO_PI)
    if n == 0 and c is not None:
        return c
    if n == 0:
        kp, km = _loop_level(b, 1), _loop_level(b, -1)
        if kp is None or km is None:
            return None
        return concat(_loops(frame, 1, kp, b), _loops(frame, 1, km, b))
    k = _loop_level(b, 1 if n > 0 else -1)
    if k is None:
        return None
    return _loops(frame, abs(n), k, b) if c is None else loop_concat(c, abs(n), k)


def _steered_witness(b, u, v, tau, budget):
    frame = isometry_from_unit_tangent(u)
    for seed in range(max(1, budget // 16)):
        try:
            c = steer(u, v, b, budget=16, seed=seed)
        except SteeringError:
            continue
        w = _match_turning(c, frame, tau, b)
        if w is not None:
            return w
    return None


def _profile_envelopes(m1, m2, a, bx, beta, x):
    g1, g2 = solve_g(m1, a, bx, 0.0, x).y, solve_g(m2, a, bx, 0.0, x).y
    h1, h2 = solve_h(m1, a, bx, beta, x).y, solve_h(m2, a, bx, beta, x).y
    return np.maximum(g1, h2), np.minimum(g2, h1), (h1, h2)


def contained_envelope(b: CurvatureInterval, v_normalized: ModelVector, samples: int = 1025) -> dict:
    """Feasibility data for a Contained-class problem whose ``u`` is normalized.

    Slopes of admissible graphs lie between the lower envelope
    ``max(g_{m1}, h_{m2})`` and the upper envelope ``min(g_{m2}, h_{m1})``,
    where ``g``/``h`` are the constant-curvature slopes through the initial and
    final data and ``(m1, m2)`` is the band in strip orientation.
    """
    vm = convert_vector(v_normalized, ModelId.MERCATOR)
    bx, A0 = vm.base.coords
    dx, dy = vm.dir
    out = {"b": bx, "A0": A0, "beta": None, "feasible": False}
    if bx <= math.pi / 2 + 1e-12 or dx <= 0:
        out["reason"] = "endpoint not reachable by a left-to-right graph"
        return out
    beta = dy / dx
    out["beta"] = beta
    m1, m2 = -b.hi, -b.lo
    x = default_grid(math.pi / 2, bx, samples)
    lo, up, _ = _profile_envelopes(m1, m2, math.pi / 2, bx, beta, x)
    gap = float(np.min(up - lo))
    area_lo, area_up = float(np.trapezoid(lo, x)), float(np.trapezoid(up, x))
    out.update(x=x, lower=lo, upper=up, gap=gap, area_lower=area_lo, area_upper=area_up)
    if gap < -1e-9:
        out["reason"] = "slope envelopes cross"
    elif not area_lo - 1e-9 < A0 < area_up + 1e-9:
        out["reason"] = "target height outside the envelope areas"
    else:
        out["feasible"] = True
        out["reason"] = "envelopes admit the target"
    return out


def canonical_profile(bands: tuple[float, float], bx: float, beta: float, A0: float, samples: int = 1025):
    """Median of the final hypercircle slopes with the initial one whose area is ``A0``; ``None`` if unbracketed."""
    m1, m2 = bands
    a = math.pi / 2
    x = default_grid(a, bx, samples)
    h1, h2 = solve_h(m1, a, bx, beta, x).y, solve_h(m2, a, bx, beta, x).y

    lower, upper = np.minimum(h1, h2), np.maximum(h1, h2)

    def profile(k):
        # median of (h1, g_k, h2)
        return np.clip(solve_g(k, a, bx, 0.0, x).y, lower, upper)

    def area_of(k):
        return float(np.trapezoid(profile(k), x)) - A0

    lo, hi = area_of(m1), area_of(m2)
    if not (lo <= 0 <= hi) or not (np.isfinite(lo) and np.isfinite(hi)):
        return None
    k0 = m1 if lo == 0 else m2 if hi == 0 else brentq(area_of, m1, m2, xtol=1e-13, maxiter=200)
    f = profile(k0)
    if not np.all(np.isfinite(f)):
        return None
    return MercatorProfile(a, bx, 0.0, beta, A0, SampledFunction(x, f), (m1, m2))


def _contained_report(b, u, v, tau, budget) -> VoidnessReport:
    rel = IntervalClass.CONTAINED
    R = region_R(b.lo, b.hi, u)
    pv = to_hyperboloid(v.base)
    if not region_contains(R, pv, closed=True):
        return VoidnessReport(Verdict.EMPTY, rel, tau, "endpoint outside the closure of region R", certificate={"margins": R.margins(pv)[0].tolist()})
    g = normalizing_isometry(u)
    env = contained_envelope(b, g(v))
    if not env["feasible"]:
        cert = {k: env.get(k) for k in ("gap", "area_lower", "area_upper", "A0", "b", "beta")}
        return VoidnessReport(Verdict.EMPTY, rel, tau, env["reason"], certificate=cert)
    m1, m2 = -b.hi, -b.lo
    width = m2 - m1
    for pad in (1e-2, 1e-3, BAND_PAD):
        delta = pad * width
        prof = canonical_profile((m1 + delta, m2 - delta), env["b"], env["beta"], env["A0"])
        if prof is None:
            continue
        chk = prof.check()
        if not chk["ok"]:
            continue
        witness = move_sampled(prof.graph(), g.inverse())
        tau_w = total_turning(witness)
        n = round((tau - tau_w) / TWO_PI)
        cert = {"witness_turning": tau_w, "padding": delta}
        if n != 0:
            return VoidnessReport(Verdict.EMPTY, rel, tau, "only the witness turning class is attainable", certificate=cert)
        return VoidnessReport(Verdict.NONEMPTY, rel, tau, "canonical median profile", witness, cert)
    return VoidnessReport(Verdict.UNKNOWN, rel, tau, "no interior profile found")


def voidness_report(b: CurvatureInterval, u: ModelVector, v: ModelVector, tau: float, budget: int = 48) -> VoidnessReport:
    """Decide whether curves from ``u`` to ``v`` with curvature in ``b`` and total turning ``tau`` exist."""
    valid_turnings(u, v).index_of(tau)
    rel = classify_interval(b)
    if rel is IntervalClass.CONTAINED or rel is IntervalClass.MINUS_ONE_ONE:
        return _contained_report(b, u, v, tau, budget)
    if rel is not IntervalClass.CONTAINING:
        lo, hi = turning_bounds(b, u, v)
        cert = {"lower_bound": lo, "upper_bound": hi}
        if tau < lo - TURNING_TOL:
            return VoidnessReport(Verdict.EMPTY, rel, tau, "turning below the boundary-angle bound", certificate=cert)
        if tau > hi + TURNING_TOL:
            return VoidnessReport(Verdict.EMPTY, rel, tau, "turning above the boundary-angle bound", certificate=cert)
    frame = isometry_from_unit_tangent(u)
    if np.abs(frame.m - isometry_from_unit_tangent(v).m).max() < 1e-12:
        w = _match_turning(None, frame, tau, b)
    else:
        w = _steered_witness(b, u, v, tau, budget)
    if w is None:
        return VoidnessReport(Verdict.UNKNOWN, rel, tau, "no witness within budget")
    return VoidnessReport(Verdict.NONEMPTY, rel, tau, "bang-bang witness", w, {"witness_turning": _curve_turning(w)})


# ---------------------------------------------------------------------------
# Grafting


def grafting_matrix(r: float, theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[r * (c - s), -r * (c + s)], [c + s, s - c]])


def grafting_check(phi0, phi1, tol: float = 1e-8) -> tuple[float, float] | None:
    """``(r, theta)`` when ``phi1 phi0^-1`` is projectively a grafting matrix, else ``None``."""
    X = np.asarray(phi1, dtype=float) @ np.linalg.inv(np.asarray(phi0, dtype=float))
    if abs(X[1, 0]) < tol * np.abs(X).max() or abs(X[1, 1]) == 0:
        return None
    ratio = X[1, 1] / X[1, 0]
    if not abs(ratio) < 1:
        return None
    theta = math.pi / 4 + math.atan(ratio)
    r = -X[0, 0] / X[1, 1]
    if not r > 0 or not 0 < theta < math.pi / 2:
        return None
    G = grafting_matrix(r, theta)
    lam = np.sum(X * G) / np.sum(G * G)
    if np.abs(X - lam * G).max() > tol * np.abs(X).max():
        return None
    return r, theta
