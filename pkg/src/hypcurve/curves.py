"""Curves reconstructed from speed and curvature data.

A curve is stored intrinsically by its initial frame and by speed and
curvature samples written in unconstrained coordinates (see
:func:`h_encode` and :func:`hk_encode`). :func:`integrate` solves the frame
equation ``dPhi/dt = Phi Lambda`` on SO+(2,1) and returns a
:class:`SampledCurve` whose frames have columns ``(gamma, tau, nu)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import RK45, solve_ivp
from scipy.linalg import expm

from .models import (
    LORENTZ,
    Isometry,
    ModelId,
    ModelPoint,
    ModelVector,
    chart_arrays,
    chart_arrays_to_hyperboloid,
    disk_frame,
    frame_matrix,
    halfplane_frame,
    hyperboloid_distance,
    hyperboloid_point,
    hyperboloid_vector,
    isometry_from_unit_tangent,
    lorentz_product,
    reorthonormalize,
)

RTOL = 1e-10
ATOL = 1e-10
FD_STEP = 1e-4
DEFAULT_SAMPLES = 129


class IntegrationError(RuntimeError):
    """The frame equation could not be integrated."""


class TangentMismatchError(ValueError):
    """Two curves cannot be concatenated because their end data differ."""


# ---------------------------------------------------------------------------
# Unconstrained coordinates


def h_encode(t):
    """Speed coordinate ``t - 1/t`` (defined for ``t > 0``)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("speed must be positive")
    out = t - 1.0 / t
    return float(out) if out.ndim == 0 else out


def h_decode(s):
    """Positive root of ``t^2 - s t - 1 = 0``."""
    s = np.asarray(s, dtype=float)
    r = np.sqrt(s * s + 4.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s >= 0, (s + r) / 2.0, 2.0 / (r - s))
    return float(out) if out.ndim == 0 else out


def _shape(k1: float, k2: float) -> str:
    lo, hi = math.isfinite(k1), math.isfinite(k2)
    if lo and hi:
        return "bounded"
    if hi:
        return "upper"
    if lo:
        return "lower"
    return "free"


def hk_encode(t, k1: float, k2: float):
    """Map curvature values in ``(k1, k2)`` bijectively onto the real line."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= k1) or np.any(t >= k2):
        raise ValueError(f"curvature outside the open interval ({k1}, {k2})")
    kind = _shape(k1, k2)
    if kind == "bounded":
        m, h = 0.5 * (k1 + k2), 0.5 * (k2 - k1)
        x = t - m
        out = 2.0 * x / ((h - x) * (h + x))
    elif kind == "upper":
        out = t + 1.0 / (k2 - t)
    elif kind == "lower":
        out = t + 1.0 / (k1 - t)
    else:
        out = t + 0.0
    return float(out) if out.ndim == 0 else out


def hk_decode(s, k1: float, k2: float):
    """Inverse of :func:`hk_encode`; always lands strictly inside ``(k1, k2)``."""
    s = np.asarray(s, dtype=float)
    kind = _shape(k1, k2)
    if kind == "bounded":
        m, h = 0.5 * (k1 + k2), 0.5 * (k2 - k1)
        x = s * h * h / (1.0 + np.sqrt(1.0 + (s * h) ** 2))
        out = m + x
    elif kind == "upper":
        c = s - k2
        r = np.sqrt(c * c + 4.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(c > 0, 2.0 / (c + r), (r - c) / 2.0)
        out = k2 - w
    elif kind == "lower":
        c = s - k1
        r = np.sqrt(c * c + 4.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(c < 0, 2.0 / (r - c), (c + r) / 2.0)
        out = k1 + w
    else:
        out = s + 0.0
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Data types


@dataclass(frozen=True)
class CurvatureInterval:
    """Open curvature bounds ``lo < kappa < hi``; infinite ends allowed."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValueError(f"invalid curvature interval ({lo}, {hi})")
        if lo == math.inf or hi == -math.inf:
            raise ValueError("interval endpoints must be lo < +inf and hi > -inf")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, k, tol: float = 0.0) -> bool:
        k = np.asarray(k, dtype=float)
        return bool(np.all((k > self.lo - tol) & (k < self.hi + tol)))

    def negated(self) -> "CurvatureInterval":
        return CurvatureInterval(-self.hi, -self.lo)

    def encode(self, k):
        return hk_encode(k, self.lo, self.hi)

    def decode(self, s):
        return hk_decode(s, self.lo, self.hi)

    def as_tuple(self) -> tuple[float, float]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the circle at infinity, as an angle in the disk chart."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % (2.0 * math.pi))

    @property
    def z(self) -> complex:
        return complex(math.cos(self.angle), math.sin(self.angle))


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class IntrinsicCurve:
    """Initial frame plus speed/curvature samples on a parameter grid in ``[0, 1]``.

    ``sigma_hat`` and ``kappa_hat`` are the encoded speed and curvature; both
    are interpolated linearly between grid nodes. A node may appear twice in a
    row to mark a jump of the data (used by :func:`concat`).
    """

    frame0: Isometry
    grid: np.ndarray
    sigma_hat: np.ndarray
    kappa_hat: np.ndarray
    bounds: CurvatureInterval = field(default_factory=CurvatureInterval)

    def __post_init__(self):
        grid = _frozen(self.grid)
        sh = _frozen(self.sigma_hat)
        kh = _frozen(self.kappa_hat)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "sigma_hat", sh)
        object.__setattr__(self, "kappa_hat", kh)
        if isinstance(self.frame0, ModelVector):
            object.__setattr__(self, "frame0", isometry_from_unit_tangent(self.frame0))
        elif not isinstance(self.frame0, Isometry):
            object.__setattr__(self, "frame0", Isometry(self.frame0))
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid needs at least two nodes")
        if sh.shape != grid.shape or kh.shape != grid.shape:
            raise ValueError("sample arrays must match the grid")
        if grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        steps = np.diff(grid)
        if np.any(steps < 0):
            raise ValueError("grid must be non-decreasing")
        repeated = steps == 0
        if np.any(repeated[1:] & repeated[:-1]) or repeated[0] or repeated[-1]:
            raise ValueError("a grid node may repeat at most once, and not at the ends")
        if not (np.all(np.isfinite(sh)) and np.all(np.isfinite(kh))):
            raise ValueError("non-finite speed or curvature samples")
        k = self.bounds.decode(kh)
        if not self.bounds.contains(k):
            raise ValueError("decoded curvature leaves the bounds")

    @classmethod
    def from_values(
        cls,
        frame0: Isometry,
        grid: Sequence[float],
        sigma: Sequence[float] | float,
        kappa: Sequence[float] | float,
        bounds: CurvatureInterval | None = None,
    ) -> "IntrinsicCurve":
        """Build a curve from decoded speeds and curvatures."""
        grid = np.asarray(grid, dtype=float)
        bounds = bounds or CurvatureInterval()
        sigma = np.broadcast_to(np.asarray(sigma, dtype=float), grid.shape)
        kappa = np.broadcast_to(np.asarray(kappa, dtype=float), grid.shape)
        return cls(frame0, grid, np.atleast_1d(h_encode(sigma)), np.atleast_1d(bounds.encode(kappa)), bounds)

    @property
    def sigma(self) -> np.ndarray:
        return np.atleast_1d(h_decode(self.sigma_hat))

    @property
    def kappa(self) -> np.ndarray:
        return np.atleast_1d(self.bounds.decode(self.kappa_hat))

    def cells(self):
        """Yield ``(t0, t1, s0, s1, k0, k1)`` in encoded coordinates for nonempty cells."""
        g, s, k = self.grid, self.sigma_hat, self.kappa_hat
        for i in range(g.size - 1):
            if g[i + 1] > g[i]:
                yield g[i], g[i + 1], s[i], s[i + 1], k[i], k[i + 1]

    def _locate(self, t: float) -> tuple:
        for cell in self.cells():
            if cell[0] <= t <= cell[1]:
                last = cell
                if t < cell[1]:
                    return cell
        return last

    def sigma_at(self, t: float) -> float:
        t0, t1, s0, s1, _, _ = self._locate(t)
        return h_decode(s0 + (s1 - s0) * (t - t0) / (t1 - t0))

    def kappa_at(self, t: float) -> float:
        t0, t1, _, _, k0, k1 = self._locate(t)
        return self.bounds.decode(k0 + (k1 - k0) * (t - t0) / (t1 - t0))

    def length(self) -> float:
        """Hyperbolic length, by Gauss-Legendre quadrature on each cell."""
        x, w = np.polynomial.legendre.leggauss(12)
        total = 0.0
        for t0, t1, s0, s1, _, _ in self.cells():
            u = 0.5 * (x + 1.0)
            total += 0.5 * (t1 - t0) * float(np.sum(w * h_decode(s0 + (s1 - s0) * u)))
        return total

    def refined(self, parts: int) -> "IntrinsicCurve":
        """Same curve with every cell split into ``parts`` equal cells (exact: data stay linear)."""
        if parts <= 1:
            return self
        u = np.arange(parts) / parts
        g, sh, kh = [], [], []
        prev_end = None
        for t0, t1, s0, s1, k0, k1 in self.cells():
            if prev_end is not None and prev_end[0] == t0 and (prev_end[1] != s0 or prev_end[2] != k0):
                g.append(t0)
                sh.append(prev_end[1])
                kh.append(prev_end[2])
            g.extend(t0 + (t1 - t0) * u)
            sh.extend(s0 + (s1 - s0) * u)
            kh.extend(k0 + (k1 - k0) * u)
            prev_end = (t1, s1, k1)
        g.append(prev_end[0])
        sh.append(prev_end[1])
        kh.append(prev_end[2])
        return IntrinsicCurve(self.frame0, g, sh, kh, self.bounds)

    def initial_tangent(self, model=ModelId.HYPERBOLOID) -> ModelVector:
        return self.frame0.unit_tangent(model)

    def with_frame(self, frame0: Isometry) -> "IntrinsicCurve":
        return IntrinsicCurve(frame0, self.grid, self.sigma_hat, self.kappa_hat, self.bounds)


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Evaluated trace: frames ``(gamma, tau, nu)``, curvature and speed per node."""

    params: np.ndarray
    frames: np.ndarray
    curvatures: np.ndarray
    speed: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "params", _frozen(self.params))
        object.__setattr__(self, "frames", _frozen(self.frames))
        object.__setattr__(self, "curvatures", _frozen(self.curvatures))
        object.__setattr__(self, "speed", _frozen(self.speed))
        n = self.params.size
        if self.frames.shape != (n, 3, 3) or self.curvatures.shape != (n,) or self.speed.shape != (n,):
            raise ValueError("inconsistent sampled curve arrays")

    def __len__(self) -> int:
        return self.params.size

    @property
    def points(self) -> np.ndarray:
        return self.frames[:, :, 0]

    @property
    def tangents(self) -> np.ndarray:
        return self.frames[:, :, 1]

    @property
    def normals(self) -> np.ndarray:
        return self.frames[:, :, 2]

    def point(self, i: int, model=ModelId.HYPERBOLOID) -> ModelPoint:
        return hyperboloid_point(self.points[i], model)

    def unit_tangent(self, i: int, model=ModelId.HYPERBOLOID) -> ModelVector:
        return hyperboloid_vector(self.points[i], self.tangents[i], model)

    def frame(self, i: int) -> Isometry:
        return Isometry(self.frames[i], check=False)

    def chart(self, model=ModelId.HALF_PLANE):
        """Points and tangents in a 2D chart as complex arrays."""
        return chart_arrays(self.points, self.tangents, model)

    def frame_drift(self) -> float:
        """Largest deviation of ``Phi^T S Phi`` from ``S`` over all nodes."""
        F = self.frames
        G = np.einsum("nji,jk,nkl->nil", F, LORENTZ, F)
        return float(np.abs(G - LORENTZ).max())

    def index_of(self, t: float) -> int:
        return int(np.argmin(np.abs(self.params - t)))


# ---------------------------------------------------------------------------
# Integration


def logarithmic_derivative(sigma: float, kappa: float) -> np.ndarray:
    """Matrix ``Lambda`` with ``dPhi/dt = Phi Lambda`` on the hyperboloid."""
    return sigma * np.array([[0.0, 1.0, 0.0], [1.0, 0.0, -kappa], [0.0, kappa, 0.0]])


def lambda_halfplane(sigma: float, kappa: float) -> np.ndarray:
    """Logarithmic derivative for frames in SL2(R) acting on the half-plane."""
    if sigma <= 0:
        raise ValueError("speed must be positive")
    return 0.5 * sigma * np.array([[0.0, 1.0 + kappa], [1.0 - kappa, 0.0]])


def lambda_disk(sigma: float, kappa: float) -> np.ndarray:
    """Logarithmic derivative for frames in SU(1,1) acting on the disk."""
    if sigma <= 0:
        raise ValueError("speed must be positive")
    return 0.5 * sigma * np.array([[1j * kappa, 1.0], [1.0, -1j * kappa]])


def _scalar_decoders(bounds: CurvatureInterval):
    kind = _shape(bounds.lo, bounds.hi)
    k1, k2 = bounds.lo, bounds.hi

    def sigma(s: float) -> float:
        r = math.sqrt(s * s + 4.0)
        return (s + r) / 2.0 if s >= 0 else 2.0 / (r - s)

    if kind == "bounded":
        m, h = 0.5 * (k1 + k2), 0.5 * (k2 - k1)

        def kappa(s: float) -> float:
            return m + s * h * h / (1.0 + math.sqrt(1.0 + (s * h) ** 2))

    elif kind == "upper":

        def kappa(s: float) -> float:
            c = s - k2
            r = math.sqrt(c * c + 4.0)
            return k2 - (2.0 / (c + r) if c > 0 else (r - c) / 2.0)

    elif kind == "lower":

        def kappa(s: float) -> float:
            c = s - k1
            r = math.sqrt(c * c + 4.0)
            return k1 + (2.0 / (r - c) if c < 0 else (c + r) / 2.0)

    else:

        def kappa(s: float) -> float:
            return s

    return sigma, kappa


def _march(
    c: IntrinsicCurve,
    params: np.ndarray,
    y0: np.ndarray,
    generator: Callable[[float, float], np.ndarray],
    shape: tuple,
    project: Callable[[np.ndarray], np.ndarray],
    rtol: float,
    atol: float,
):
    """Integrate ``Y' = Y G(t)`` cell by cell; returns states and (sigma, kappa) at ``params``."""
    dec_sigma, dec_kappa = _scalar_decoders(c.bounds)
    n = params.size
    states = [None] * n
    sk = np.zeros((n, 2))
    y = project(np.asarray(y0).reshape(shape))
    is_complex = np.iscomplexobj(y)

    def pack(Y):
        Y = np.asarray(Y).ravel()
        return np.concatenate([Y.real, Y.imag]) if is_complex else Y

    def unpack(v):
        if is_complex:
            half = v.size // 2
            return (v[:half] + 1j * v[half:]).reshape(shape)
        return v.reshape(shape)

    order = np.argsort(params, kind="stable")
    cursor = 0
    for t0, t1, s0, s1, k0, k1 in c.cells():
        span = t1 - t0

        def data(t, t0=t0, s0=s0, s1=s1, k0=k0, k1=k1, span=span):
            u = (t - t0) / span
            return dec_sigma(s0 + (s1 - s0) * u), dec_kappa(k0 + (k1 - k0) * u)

        def rhs(t, v, data=data):
            sg, kp = data(t)
            return pack(unpack(v) @ generator(sg, kp))

        # Targets inside this cell; a node shared with the next cell is
        # re-evaluated there so jump nodes report right limits.
        idx = []
        j = cursor
        while j < n and params[order[j]] <= t1:
            idx.append(order[j])
            j += 1
        for i in idx:
            if params[i] == t0:
                states[i] = y.copy()
                sk[i] = data(t0)
        pending = [i for i in idx if params[i] > t0]
        solver = RK45(rhs, t0, pack(y), t1, rtol=rtol, atol=atol)
        while solver.status == "running":
            t_old = solver.t
            solver.step()
            if solver.status == "failed":
                raise IntegrationError(f"frame integration failed near t={solver.t:.6g}: step size underflow")
            dense = solver.dense_output()
            while pending and params[pending[0]] <= solver.t:
                i = pending.pop(0)
                states[i] = project(unpack(dense(params[i])))
                sk[i] = data(params[i])
            fixed = project(unpack(solver.y))
            solver.y = pack(fixed)
            solver.f = rhs(solver.t, solver.y)
            if not np.all(np.isfinite(solver.y)):
                raise IntegrationError(f"non-finite state near t={t_old:.6g}")
        y = unpack(solver.y)
        for i in pending:
            states[i] = y.copy()
            sk[i] = data(params[i])
        # Only indices strictly below t1 are final; keep t1 for the next cell.
        while cursor < n and params[order[cursor]] < t1:
            cursor += 1
    return states, sk


def _output_params(c: IntrinsicCurve, params, samples) -> np.ndarray:
    if params is not None:
        out = np.asarray(params, dtype=float).ravel()
        if np.any(out < 0) or np.any(out > 1):
            raise ValueError("parameters must lie in [0, 1]")
        return out
    samples = DEFAULT_SAMPLES if samples is None else int(samples)
    return np.union1d(np.unique(c.grid), np.linspace(0.0, 1.0, max(samples, 2)))


def integrate(
    c: IntrinsicCurve,
    params: Sequence[float] | None = None,
    samples: int | None = None,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> SampledCurve:
    """Solve the frame equation on the hyperboloid.

    Output nodes are ``params`` when given, otherwise the grid together with
    ``samples`` equally spaced parameters.
    """
    t = _output_params(c, params, samples)
    states, sk = _march(c, t, c.frame0.m, logarithmic_derivative, (3, 3), reorthonormalize, rtol, atol)
    return SampledCurve(t, np.array(states), sk[:, 1], sk[:, 0])


def _unimodular(m: np.ndarray) -> np.ndarray:
    return m / np.sqrt(np.linalg.det(m) + 0j) if np.iscomplexobj(m) else m / math.sqrt(np.linalg.det(m))


def integrate_mobius(
    c: IntrinsicCurve,
    model=ModelId.HALF_PLANE,
    params: Sequence[float] | None = None,
    samples: int | None = None,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Alternative backend: integrate 2x2 Mobius frames in the disk or half-plane."""
    model = ModelId.parse(model)
    t = _output_params(c, params, samples)
    if model is ModelId.HALF_PLANE:
        y0, gen = halfplane_frame(c.frame0), lambda_halfplane
    elif model is ModelId.DISK:
        y0, gen = disk_frame(c.frame0).astype(complex), lambda_disk
    else:
        raise ValueError("Mobius backends exist for the disk and half-plane only")
    states, _ = _march(c, t, y0, gen, (2, 2), _unimodular, rtol, atol)
    return t, states


def constant_curve(
    u: ModelVector,
    kappa: float,
    arclength: float,
    bounds: CurvatureInterval | None = None,
) -> IntrinsicCurve:
    """Arc of constant curvature ``kappa`` and given length starting at ``u``."""
    if arclength <= 0:
        raise ValueError("arclength must be positive")
    frame = u if isinstance(u, Isometry) else isometry_from_unit_tangent(u)
    return IntrinsicCurve.from_values(frame, [0.0, 1.0], arclength, kappa, bounds)


def curvature_det(g, dg, ddg) -> float:
    """Geodesic curvature ``det(gamma, gamma', gamma'') / |gamma'|^3``."""
    q = lorentz_product(dg, dg)
    if q <= 0:
        raise ValueError("velocity vanishes")
    return float(np.linalg.det(np.column_stack([g, dg, ddg]))) / q**1.5


def local_frames(c: IntrinsicCurve, t: Sequence[float], h: float = FD_STEP, relative: bool = False) -> np.ndarray:
    """Frames at ``t - h``, ``t`` and ``t + h`` for each requested ``t``.

    The neighbours are obtained by propagating the identity over the short
    interval with a tight tolerance, so the three samples are consistent to
    rounding and can be differenced twice without amplifying global
    integration error. With ``relative`` the triple is expressed in the frame
    at ``t`` (the middle entry is the identity), which keeps differences well
    conditioned far from the apex. Returns ``(n, 3, 3, 3)``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))

    def rhs(s, v):
        return (v.reshape(3, 3) @ logarithmic_derivative(c.sigma_at(s), c.kappa_at(s))).ravel()

    out = np.empty((t.size, 3, 3, 3))
    eye = np.eye(3).ravel()
    for i, ti in enumerate(t):
        out[i, 1] = np.eye(3)
        for j, step in ((0, -h), (2, h)):
            sol = solve_ivp(rhs, (ti, ti + step), eye, method="DOP853", rtol=1e-13, atol=1e-15)
            out[i, j] = sol.y[:, -1].reshape(3, 3)
    if relative:
        return out
    centre = integrate(c, params=t).frames
    return np.einsum("nij,nkjl->nkil", centre, out)


def curvature_from_samples(prev, mid, nxt, h: float) -> float:
    """Central-difference curvature from three points spaced ``h`` in parameter."""
    prev, mid, nxt = (np.asarray(v, dtype=float) for v in (prev, mid, nxt))
    return curvature_det(mid, (nxt - prev) / (2 * h), (nxt - 2 * mid + prev) / h**2)


def trace_curvature(c: IntrinsicCurve, t: Sequence[float], h: float = FD_STEP) -> np.ndarray:
    """Curvature recomputed from the trace by second-order central differences."""
    frames = local_frames(c, t, h, relative=True)
    return np.array([curvature_from_samples(f[0][:, 0], f[1][:, 0], f[2][:, 0], h) for f in frames])


def total_turning(sc: SampledCurve) -> float:
    """Increment of the continuous argument of the half-plane tangent."""
    _, dz = sc.chart(ModelId.HALF_PLANE)
    if np.any(np.abs(dz) == 0):
        raise ValueError("tangent vanishes")
    theta = np.unwrap(np.angle(dz))
    return float(theta[-1] - theta[0])


def turning_function(sc: SampledCurve) -> np.ndarray:
    """Continuous argument of the half-plane tangent, starting in ``(-pi, pi]``."""
    _, dz = sc.chart(ModelId.HALF_PLANE)
    return np.unwrap(np.angle(dz))


def _boundary_angles(sc: SampledCurve, sign: int) -> np.ndarray:
    light = sc.points + sign * sc.normals
    return np.arctan2(light[:, 2], light[:, 1])


def alpha_pm(sc: SampledCurve, t: float, sign: int) -> BoundaryPoint:
    """Endpoint at infinity of the geodesic ray leaving ``gamma(t)`` along ``sign * nu(t)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    i = sc.index_of(t)
    light = sc.points[i] + sign * sc.normals[i]
    return BoundaryPoint(math.atan2(light[2], light[1]))


def alpha_path(sc: SampledCurve, sign: int) -> np.ndarray:
    """Continuous lift of ``alpha_{+}`` or ``alpha_{-}`` along the samples."""
    return np.unwrap(_boundary_angles(sc, sign))


def frame_endpoint_error(a: Isometry | np.ndarray, b: Isometry | np.ndarray) -> tuple[float, float]:
    """(position distance, tangent difference) between the unit tangents of two frames."""
    A = a.m if isinstance(a, Isometry) else np.asarray(a)
    B = b.m if isinstance(b, Isometry) else np.asarray(b)
    pos = hyperboloid_distance(A[:, 0], B[:, 0])
    # Compare tangents after transporting B's point onto A's; for nearby
    # points the raw Lorentz difference is an adequate proxy.
    d = A[:, 1] - B[:, 1]
    return pos, math.sqrt(abs(lorentz_product(d, d)))


# ---------------------------------------------------------------------------
# Mercator graphs


def mercator_curvature(x, dy, ddy):
    """Curvature of the graph ``y(x)`` measured in the strip's own orientation.

    The strip carries the orientation of ``(x, y)``; the map to the half-plane
    reverses it, so the hyperbolic (half-plane oriented) curvature of the same
    graph is the negative of this value.
    """
    x = np.asarray(x, dtype=float)
    dy = np.asarray(dy, dtype=float)
    ddy = np.asarray(ddy, dtype=float)
    q = 1.0 + dy * dy
    out = (ddy * np.sin(x) / q - dy * np.cos(x)) / np.sqrt(q)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Real function sampled on an increasing grid; values may be infinite."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _frozen(self.x))
        object.__setattr__(self, "y", _frozen(self.y))
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("x and y must be 1D arrays of equal length")
        if np.any(np.diff(self.x) <= 0):
            raise ValueError("x must be strictly increasing")

    def __call__(self, t):
        return np.interp(t, self.x, self.y)

    @property
    def a(self) -> float:
        return float(self.x[0])

    @property
    def b(self) -> float:
        return float(self.x[-1])

    def integral(self) -> float:
        return float(np.trapezoid(self.y, self.x))

    def derivative(self) -> np.ndarray:
        return np.gradient(self.y, self.x, edge_order=2)


def mercator_graph(a: float, b: float, y0: float, f: SampledFunction) -> SampledCurve:
    """Trace of the graph ``x -> (x, y0 + int_a^x f)`` in the Mercator strip.

    The returned curve is parametrized by ``x``. Its curvatures are hyperbolic
    curvatures in the canonical orientation, i.e. ``-mercator_curvature``.
    """
    if not 0 < a < b < math.pi:
        raise ValueError("need 0 < a < b < pi")
    if abs(f.a - a) > 1e-12 or abs(f.b - b) > 1e-12:
        raise ValueError("profile grid must span [a, b]")
    x, fy = f.x, f.y
    if not np.all(np.isfinite(fy)):
        raise ValueError("profile must be finite")
    y = y0 + np.concatenate([[0.0], np.cumsum(0.5 * (fy[1:] + fy[:-1]) * np.diff(x))])
    P, W = chart_arrays_to_hyperboloid(x + 1j * y, np.ones_like(x) + 1j * fy, ModelId.MERCATOR)
    W = W / np.sqrt(np.einsum("ni,ni->n", W @ LORENTZ, W))[:, None]
    frames = np.array([frame_matrix(p, w) for p, w in zip(P, W)])
    kappa_m = mercator_curvature(x, fy, f.derivative())
    speed = np.sqrt(1.0 + fy * fy) / np.sin(x)
    return SampledCurve(x, frames, -np.atleast_1d(kappa_m), speed)


# ---------------------------------------------------------------------------
# Concatenation


def _end_frame(c: IntrinsicCurve) -> np.ndarray:
    return integrate(c, params=[1.0]).frames[0]


def concat(c1: IntrinsicCurve, c2: IntrinsicCurve, tol: float = 1e-8, split: float | None = None) -> IntrinsicCurve:
    """Join two curves; the parameter interval is split in proportion to length.

    Curvature may jump at the junction. Exact for piecewise-constant speed
    data; otherwise the rescaled speed is re-interpolated at the nodes.
    """
    end = _end_frame(c1)
    if np.abs(end - c2.frame0.m).max() > tol * max(1.0, float(np.abs(end).max())):
        raise TangentMismatchError("terminal frame of the first curve differs from the initial frame of the second")
    lo = max(c1.bounds.lo, c2.bounds.lo)
    hi = min(c1.bounds.hi, c2.bounds.hi)
    if not lo < hi:
        raise ValueError("curvature bounds are incompatible")
    bounds = CurvatureInterval(lo, hi)
    if split is None:
        l1, l2 = c1.length(), c2.length()
        split = l1 / (l1 + l2)
    w = float(split)
    if not 0.0 < w < 1.0:
        raise ValueError("split must lie in (0, 1)")
    grid = np.concatenate([c1.grid * w, w + c2.grid * (1.0 - w)])
    sigma = np.concatenate([c1.sigma / w, c2.sigma / (1.0 - w)])
    kappa = np.concatenate([c1.kappa, c2.kappa])
    if not bounds.contains(kappa):
        raise ValueError("curvature leaves the combined bounds")
    return IntrinsicCurve.from_values(c1.frame0, grid, sigma, kappa, bounds)


def boundary_direction(p: np.ndarray, w: np.ndarray) -> BoundaryPoint:
    """Endpoint at infinity of the geodesic ray from ``p`` in direction ``w``."""
    light = np.asarray(p) + np.asarray(w)
    return BoundaryPoint(math.atan2(light[2], light[1]))


def _rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def unit_tangent_path(u: ModelVector, v: ModelVector, samples: int = 400) -> np.ndarray:
    """Frames along a path in the unit tangent bundle from ``u`` to ``v``.

    Rotate at the base of ``u`` towards the base of ``v``, slide along the
    geodesic, then rotate into ``v``.
    """
    Fu = isometry_from_unit_tangent(u).m
    Fv = isometry_from_unit_tangent(v).m
    local = LORENTZ @ Fu.T @ LORENTZ @ Fv[:, 0]
    d = hyperboloid_distance(np.array([1.0, 0.0, 0.0]), local)
    phi = math.atan2(local[2], local[1]) if d > 1e-14 else 0.0
    frames = [Fu @ _rotation(phi * s) for s in np.linspace(0.0, 1.0, samples)]
    mid = Fu @ _rotation(phi)
    gen = logarithmic_derivative(1.0, 0.0)
    frames += [mid @ expm(d * s * gen) for s in np.linspace(0.0, 1.0, samples)[1:]]
    end = frames[-1]
    rel = LORENTZ @ end.T @ LORENTZ @ Fv
    psi = math.atan2(rel[2, 1], rel[1, 1])
    frames += [end @ _rotation(psi * s) for s in np.linspace(0.0, 1.0, samples)[1:]]
    return np.array(frames)
