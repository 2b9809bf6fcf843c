"""Points, unit tangents and isometries of the hyperbolic plane.

Four charts are supported: the Poincare disk, the upper half-plane, the
hyperboloid sheet in Minkowski space E^{2,1} and the Mercator strip
``(0, pi) x R``. The hyperboloid is the canonical representation; every other
chart is reached from it through a fixed chain of exact maps::

    Mercator <-> HalfPlane <-> Disk <-> Hyperboloid

Mercator -> HalfPlane is ``(x, y) -> exp(y + i x)``, HalfPlane -> Disk is the
Cayley map ``z -> (z - i) / (z + i)`` and Hyperboloid -> Disk is stereographic
projection from ``(-1, 0, 0)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

LORENTZ = np.diag([-1.0, 1.0, 1.0])
CONSTRUCTION_TOL = 1e-12
ARITHMETIC_TOL = 1e-10
UNIT_TOL = 1e-8


class ModelDomainError(ValueError):
    """Raised when coordinates fall outside the domain of their model."""


class ModelId(enum.Enum):
    DISK = "disk"
    HALF_PLANE = "halfplane"
    HYPERBOLOID = "hyperboloid"
    MERCATOR = "mercator"

    @classmethod
    def parse(cls, name: Union[str, "ModelId"]) -> "ModelId":
        if isinstance(name, ModelId):
            return name
        key = str(name).strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "disk": cls.DISK,
            "d": cls.DISK,
            "halfplane": cls.HALF_PLANE,
            "h": cls.HALF_PLANE,
            "hyperboloid": cls.HYPERBOLOID,
            "l": cls.HYPERBOLOID,
            "mercator": cls.MERCATOR,
            "m": cls.MERCATOR,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ModelDomainError(f"unknown model {name!r}") from None

    @property
    def dim(self) -> int:
        return 3 if self is ModelId.HYPERBOLOID else 2


# Charts ordered so that neighbours are joined by a direct map.
_CHAIN = (ModelId.MERCATOR, ModelId.HALF_PLANE, ModelId.DISK, ModelId.HYPERBOLOID)


def lorentz_product(x, y) -> float:
    """Minkowski product ``-x0 y0 + x1 y1 + x2 y2``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(-x[0] * y[0] + x[1] * y[1] + x[2] * y[2])


def lorentz_cross(x, y) -> np.ndarray:
    """Lorentz cross product ``S (x cross y)``, orthogonal to both factors."""
    c = np.cross(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    c[0] = -c[0]
    return c


def lorentz_norm(x) -> float:
    """Norm of a spacelike vector."""
    q = lorentz_product(x, x)
    if q < -ARITHMETIC_TOL:
        raise ValueError("vector is timelike")
    return math.sqrt(max(q, 0.0))


def project_to_hyperboloid(x) -> np.ndarray:
    """Rescale a future timelike vector onto the upper sheet."""
    x = np.asarray(x, dtype=float)
    q = -lorentz_product(x, x)
    if q <= 0 or x[0] <= 0:
        raise ModelDomainError("vector is not future timelike")
    return x / math.sqrt(q)


@dataclass(frozen=True)
class ModelPoint:
    """A point of the hyperbolic plane in one of the four charts.

    For the disk and half-plane, ``coords`` are ``(Re z, Im z)``; for the
    Mercator strip they are ``(x, y)``; for the hyperboloid they are
    ``(x0, x1, x2)``.
    """

    model: ModelId
    coords: tuple

    def __post_init__(self):
        model = ModelId.parse(self.model)
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "coords", coords)
        if len(coords) != model.dim:
            raise ModelDomainError(f"{model.value} points need {model.dim} coordinates")
        if not all(math.isfinite(c) for c in coords):
            raise ModelDomainError("non-finite coordinate")
        if model is ModelId.DISK:
            if coords[0] ** 2 + coords[1] ** 2 >= 1.0:
                raise ModelDomainError("disk point must satisfy |z| < 1")
        elif model is ModelId.HALF_PLANE:
            if coords[1] <= 0.0:
                raise ModelDomainError("half-plane point must satisfy Im z > 0")
        elif model is ModelId.MERCATOR:
            if not 0.0 < coords[0] < math.pi:
                raise ModelDomainError("Mercator point must satisfy 0 < x < pi")
        else:
            x0, x1, x2 = coords
            if x0 <= 0.0:
                raise ModelDomainError("hyperboloid point must lie on the upper sheet")
            if abs(-x0 * x0 + x1 * x1 + x2 * x2 + 1.0) > CONSTRUCTION_TOL * max(1.0, x0 * x0):
                raise ModelDomainError("hyperboloid point off the sheet")

    @classmethod
    def from_complex(cls, model, z: complex) -> "ModelPoint":
        return cls(model, (z.real, z.imag))

    @property
    def z(self) -> complex:
        """Chart coordinates as a complex number (two-dimensional charts only)."""
        if self.model is ModelId.HYPERBOLOID:
            raise TypeError("hyperboloid points have no complex coordinate")
        return complex(self.coords[0], self.coords[1])

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)


@dataclass(frozen=True)
class ModelVector:
    """A tangent vector ``dir`` based at ``base``, in the chart of ``base``."""

    base: ModelPoint
    dir: tuple

    def __post_init__(self):
        d = tuple(float(c) for c in self.dir)
        object.__setattr__(self, "dir", d)
        if len(d) != self.base.model.dim:
            raise ModelDomainError("direction has the wrong number of components")
        if not all(math.isfinite(c) for c in d):
            raise ModelDomainError("non-finite direction")
        if self.base.model is ModelId.HYPERBOLOID:
            p = self.base.array()
            if abs(lorentz_product(p, d)) > ARITHMETIC_TOL * max(1.0, float(np.abs(d).max()) * p[0]):
                raise ModelDomainError("hyperboloid tangent must be Lorentz-orthogonal to its base")

    @property
    def model(self) -> ModelId:
        return self.base.model

    @property
    def w(self) -> complex:
        return complex(self.dir[0], self.dir[1])

    def array(self) -> np.ndarray:
        return np.array(self.dir, dtype=float)

    def norm(self) -> float:
        return hyperbolic_norm(self)

    def normalized(self) -> "ModelVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("zero vector")
        return ModelVector(self.base, tuple(c / n for c in self.dir))

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol


ModelObject = Union[ModelPoint, ModelVector]


def hyperbolic_norm(v: ModelVector) -> float:
    """Length of a tangent vector in the hyperbolic metric of its chart."""
    model = v.model
    if model is ModelId.HYPERBOLOID:
        return lorentz_norm(v.dir)
    z = v.base.z
    e = abs(v.w)
    if model is ModelId.DISK:
        return 2.0 * e / (1.0 - abs(z) ** 2)
    if model is ModelId.HALF_PLANE:
        return e / z.imag
    return e / math.sin(z.real)


# Direct chart maps. Each takes and returns (point, optional tangent) where
# 2D charts use complex numbers and the hyperboloid uses numpy arrays.


def _mercator_to_halfplane(z, dz):
    w = complex(math.exp(z.imag) * math.cos(z.real), math.exp(z.imag) * math.sin(z.real))
    dw = None if dz is None else w * complex(dz.imag, dz.real)
    return w, dw


def _halfplane_to_mercator(w, dw):
    z = complex(math.atan2(w.imag, w.real), math.log(abs(w)))
    if dw is None:
        return z, None
    q = dw / w
    return z, complex(q.imag, q.real)


def _halfplane_to_disk(z, dz):
    w = (z - 1j) / (z + 1j)
    return w, None if dz is None else dz * 2j / (z + 1j) ** 2


def _disk_to_halfplane(w, dw):
    z = 1j * (1 + w) / (1 - w)
    return z, None if dw is None else dw * 2j / (1 - w) ** 2


def _disk_to_hyperboloid(w, dw):
    x, y = w.real, w.imag
    r2 = x * x + y * y
    d = 1.0 - r2
    p = np.array([1.0 + r2, 2.0 * x, 2.0 * y]) / d
    if dw is None:
        return p, None
    dr2 = 2.0 * (x * dw.real + y * dw.imag)
    dp = np.array(
        [
            2.0 * dr2 / d**2,
            2.0 * dw.real / d + 2.0 * x * dr2 / d**2,
            2.0 * dw.imag / d + 2.0 * y * dr2 / d**2,
        ]
    )
    return p, dp


def _hyperboloid_to_disk(p, dp):
    s = 1.0 + p[0]
    w = complex(p[1], p[2]) / s
    if dp is None:
        return w, None
    return w, complex(dp[1], dp[2]) / s - complex(p[1], p[2]) * dp[0] / s**2


_STEP = {
    (ModelId.MERCATOR, ModelId.HALF_PLANE): _mercator_to_halfplane,
    (ModelId.HALF_PLANE, ModelId.MERCATOR): _halfplane_to_mercator,
    (ModelId.HALF_PLANE, ModelId.DISK): _halfplane_to_disk,
    (ModelId.DISK, ModelId.HALF_PLANE): _disk_to_halfplane,
    (ModelId.DISK, ModelId.HYPERBOLOID): _disk_to_hyperboloid,
    (ModelId.HYPERBOLOID, ModelId.DISK): _hyperboloid_to_disk,
}


def _raw(obj: ModelObject):
    """Chart-native (point, tangent) for a point or vector."""
    if isinstance(obj, ModelVector):
        p, d = obj.base, obj
    else:
        p, d = obj, None
    if p.model is ModelId.HYPERBOLOID:
        return p.array(), None if d is None else d.array()
    return p.z, None if d is None else d.w


def _route(src: ModelId, dst: ModelId, x, dx):
    i, j = _CHAIN.index(src), _CHAIN.index(dst)
    step = 1 if j > i else -1
    for k in range(i, j, step):
        x, dx = _STEP[(_CHAIN[k], _CHAIN[k + step])](x, dx)
    return x, dx


def _make_point(model: ModelId, x) -> ModelPoint:
    if model is ModelId.HYPERBOLOID:
        return ModelPoint(model, tuple(project_to_hyperboloid(x)))
    return ModelPoint(model, (x.real, x.imag))


def convert_point(p: ModelPoint, to) -> ModelPoint:
    """Express ``p`` in the chart ``to``."""
    to = ModelId.parse(to)
    if p.model is to:
        return p
    x, _ = _route(p.model, to, *_raw(p))
    return _make_point(to, x)


def convert_vector(v: ModelVector, to) -> ModelVector:
    """Push a tangent vector through the differential of the chart change."""
    to = ModelId.parse(to)
    if v.model is to:
        return v
    x, dx = _route(v.model, to, *_raw(v))
    base = _make_point(to, x)
    if to is ModelId.HYPERBOLOID:
        p = base.array()
        dx = dx + lorentz_product(p, dx) * p
        return ModelVector(base, tuple(dx))
    return ModelVector(base, (dx.real, dx.imag))


def to_hyperboloid(obj: ModelObject):
    """Hyperboloid coordinates: an array for a point, ``(point, tangent)`` for a vector."""
    if isinstance(obj, ModelVector):
        h = convert_vector(obj, ModelId.HYPERBOLOID)
        return h.base.array(), h.array()
    return convert_point(obj, ModelId.HYPERBOLOID).array()


def hyperboloid_point(x, model=ModelId.HYPERBOLOID) -> ModelPoint:
    """Wrap a hyperboloid array as a point in ``model``."""
    return convert_point(ModelPoint(ModelId.HYPERBOLOID, tuple(project_to_hyperboloid(x))), model)


def hyperboloid_vector(p, w, model=ModelId.HYPERBOLOID) -> ModelVector:
    """Wrap a hyperboloid (point, tangent) pair as a vector in ``model``."""
    p = project_to_hyperboloid(p)
    w = np.asarray(w, dtype=float)
    w = w + lorentz_product(p, w) * p
    return convert_vector(ModelVector(ModelPoint(ModelId.HYPERBOLOID, tuple(p)), tuple(w)), model)


def hyperboloid_distance(p, q) -> float:
    # 2 asinh(|p - q| / 2) equals arccosh(-<p, q>) but keeps precision for
    # nearby points.
    d = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
    chord2 = max(lorentz_product(d, d), 0.0)
    return 2.0 * math.asinh(math.sqrt(chord2) / 2.0)


def distance(p: ModelPoint, q: ModelPoint) -> float:
    """Hyperbolic distance between two points given in any charts."""
    return hyperboloid_distance(to_hyperboloid(p), to_hyperboloid(q))


def angle_between(v1: ModelVector, v2: ModelVector) -> float:
    """Unsigned angle between two tangent vectors at the same point."""
    a = convert_vector(v1, ModelId.HYPERBOLOID)
    b = convert_vector(v2, ModelId.HYPERBOLOID)
    x, y = a.array(), b.array()
    c = lorentz_product(x, y) / (lorentz_norm(x) * lorentz_norm(y))
    return math.acos(min(1.0, max(-1.0, c)))


class Isometry:
    """Orientation-preserving isometry, stored as a matrix in SO+(2,1)."""

    __slots__ = ("_m",)

    def __init__(self, m, *, check: bool = True, tol: float = ARITHMETIC_TOL):
        arr = np.array(m, dtype=float).reshape(3, 3)
        arr.setflags(write=False)
        self._m = arr
        if check:
            self.validate(tol)

    @property
    def m(self) -> np.ndarray:
        return self._m

    def validate(self, tol: float = ARITHMETIC_TOL) -> None:
        m = self._m
        if not np.all(np.isfinite(m)):
            raise ValueError("non-finite isometry")
        scale = max(1.0, float(np.abs(m).max()) ** 2)
        if np.abs(m.T @ LORENTZ @ m - LORENTZ).max() > tol * scale:
            raise ValueError("matrix does not preserve the Lorentz form")
        if m[0, 0] <= 0:
            raise ValueError("matrix swaps the sheets of the hyperboloid")
        if np.linalg.det(m) <= 0:
            raise ValueError("matrix reverses orientation")

    def drift(self) -> float:
        """Largest entry of ``m^T S m - S``."""
        return float(np.abs(self._m.T @ LORENTZ @ self._m - LORENTZ).max())

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(np.eye(3), check=False)

    def inverse(self) -> "Isometry":
        return Isometry(LORENTZ @ self._m.T @ LORENTZ, check=False)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self._m @ other._m, check=False)

    def __call__(self, obj):
        return apply(self, obj)

    @property
    def point(self) -> np.ndarray:
        return self._m[:, 0].copy()

    @property
    def tangent(self) -> np.ndarray:
        return self._m[:, 1].copy()

    @property
    def normal(self) -> np.ndarray:
        return self._m[:, 2].copy()

    def unit_tangent(self, model=ModelId.HYPERBOLOID) -> ModelVector:
        return hyperboloid_vector(self._m[:, 0], self._m[:, 1], model)

    def __repr__(self) -> str:
        return f"Isometry({self._m.tolist()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Isometry) and np.array_equal(self._m, other._m)

    def __hash__(self) -> int:
        return hash(self._m.tobytes())


def frame_matrix(p, w) -> np.ndarray:
    """Columns ``(p, w, p x_L w)``: point, unit tangent and left normal."""
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    return np.column_stack([p, w, lorentz_cross(p, w)])


def isometry_from_unit_tangent(u: ModelVector) -> Isometry:
    """The unique isometry sending ``e1`` at ``e0`` to the unit vector ``u``."""
    if not u.is_unit():
        raise ValueError(f"tangent vector is not unit (norm {u.norm():.3g})")
    p, w = to_hyperboloid(u)
    w = w / lorentz_norm(w)
    return Isometry(frame_matrix(p, w))


def reorthonormalize(m) -> np.ndarray:
    """Lorentz Gram-Schmidt on the columns (point, tangent); normal rebuilt."""
    m = np.asarray(m, dtype=float)
    p = project_to_hyperboloid(m[:, 0])
    w = m[:, 1] + lorentz_product(m[:, 1], p) * p
    w = w / lorentz_norm(w)
    return frame_matrix(p, w)


def apply(g, obj):
    """Act by an isometry (or reflection) on a point or tangent vector."""
    m = g.m if isinstance(g, (Isometry, Reflection)) else np.asarray(g, dtype=float)
    if isinstance(obj, ModelVector):
        p, w = to_hyperboloid(obj)
        return hyperboloid_vector(m @ p, m @ w, obj.model)
    if isinstance(obj, ModelPoint):
        return hyperboloid_point(m @ to_hyperboloid(obj), obj.model)
    raise TypeError(f"cannot apply an isometry to {type(obj).__name__}")


@dataclass(frozen=True, eq=False)
class Reflection:
    """Reflection in a geodesic; an orientation-reversing Lorentz isometry."""

    matrix: np.ndarray
    axis_normal: np.ndarray

    @property
    def m(self) -> np.ndarray:
        return self.matrix

    def __call__(self, obj):
        return apply(self, obj)

    def reflect_frame(self, frame) -> np.ndarray:
        """Image of a frame, with the normal recomputed so the result is in SO+(2,1)."""
        f = self.matrix @ np.asarray(frame, dtype=float)
        f[:, 2] = -f[:, 2]
        return f


def reflect_in_geodesic(point: ModelPoint, direction: ModelVector | None = None) -> Reflection:
    """Reflection in the geodesic through ``point`` with tangent ``direction``.

    ``point`` may itself be a :class:`ModelVector`, in which case its base and
    direction define the geodesic.
    """
    if isinstance(point, ModelVector) and direction is None:
        direction = point
        point = point.base
    p = to_hyperboloid(point)
    _, w = to_hyperboloid(direction)
    w = w + lorentz_product(w, p) * p
    n = lorentz_cross(p, w / lorentz_norm(w))
    n = n / lorentz_norm(n)
    m = np.eye(3) - 2.0 * np.outer(n, n) @ LORENTZ
    m.setflags(write=False)
    return Reflection(m, n)


def _rotation_about_i(phi: float) -> np.ndarray:
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return np.array([[c, s], [-s, c]])


def halfplane_frame(g: Isometry) -> np.ndarray:
    """SL2(R) frame ``M`` whose differential at ``i`` sends ``1`` to the tangent of ``g``."""
    v = g.unit_tangent(ModelId.HALF_PLANE)
    x, y = v.base.coords
    sy = math.sqrt(y)
    m0 = np.array([[sy, x / sy], [0.0, 1.0 / sy]])
    return m0 @ _rotation_about_i(math.atan2(v.dir[1], v.dir[0]))


def disk_frame(g: Isometry) -> np.ndarray:
    """SU(1,1) frame ``M`` whose differential at ``0`` sends ``1/2`` to the tangent of ``g``."""
    v = g.unit_tangent(ModelId.DISK)
    w = v.base.z
    phi = math.atan2(v.dir[1], v.dir[0])
    a = complex(math.cos(phi / 2), math.sin(phi / 2)) / math.sqrt(1.0 - abs(w) ** 2)
    b = w * a.conjugate()
    return np.array([[a, b], [b.conjugate(), a.conjugate()]])


def mobius(m, z: complex) -> complex:
    return (m[0][0] * z + m[0][1]) / (m[1][0] * z + m[1][1])


def mobius_derivative(m, z: complex) -> complex:
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return det / (m[1][0] * z + m[1][1]) ** 2


def isometry_from_mobius_frame(m, model) -> Isometry:
    """Inverse of :func:`halfplane_frame` / :func:`disk_frame`."""
    model = ModelId.parse(model)
    if model is ModelId.HALF_PLANE:
        z0, w0 = 1j, 1.0
    elif model is ModelId.DISK:
        z0, w0 = 0j, 0.5
    else:
        raise ValueError("Mobius frames exist only for the disk and half-plane")
    z = mobius(m, z0)
    dz = mobius_derivative(m, z0) * w0
    v = ModelVector(ModelPoint.from_complex(model, z), (dz.real, dz.imag))
    return isometry_from_unit_tangent(v.normalized())


def isometry_to_mobius(g: Isometry) -> np.ndarray:
    """SL2(R) matrix of the Mobius map that ``g`` induces on the half-plane."""
    return halfplane_frame(g) @ _rotation_about_i(-math.pi / 2)


def unit_vector(model, point, direction) -> ModelVector:
    """Convenience constructor returning the normalized vector."""
    model = ModelId.parse(model)
    if isinstance(point, (complex, float, int)) and model is not ModelId.HYPERBOLOID:
        point = complex(point)
        point = (point.real, point.imag)
    if isinstance(direction, (complex, float, int)):
        direction = complex(direction)
        direction = (direction.real, direction.imag)
    base = ModelPoint(model, tuple(point))
    if model is ModelId.HYPERBOLOID:
        p = base.array()
        d = np.asarray(direction, dtype=float)
        d = d + lorentz_product(d, p) * p
        direction = tuple(d)
    return ModelVector(base, tuple(direction)).normalized()


BASE_TANGENT = ModelVector(ModelPoint(ModelId.HYPERBOLOID, (1.0, 0.0, 0.0)), (0.0, 1.0, 0.0))


def chart_arrays(points, tangents=None, model=ModelId.HALF_PLANE):
    """Vectorized hyperboloid -> 2D chart conversion.

    ``points`` and ``tangents`` are ``(n, 3)`` arrays. Returns complex arrays
    ``(z, dz)`` (``dz`` is ``None`` without tangents). Mercator results encode
    ``(x, y)`` as ``x + i y``.
    """
    model = ModelId.parse(model)
    P = np.atleast_2d(np.asarray(points, dtype=float))
    s = 1.0 + P[:, 0]
    q = P[:, 1] + 1j * P[:, 2]
    w = q / s
    dw = None
    if tangents is not None:
        W = np.atleast_2d(np.asarray(tangents, dtype=float))
        dw = (W[:, 1] + 1j * W[:, 2]) / s - q * W[:, 0] / s**2
    if model is ModelId.DISK:
        return w, dw
    if model is ModelId.HYPERBOLOID:
        raise ValueError("chart_arrays targets two-dimensional charts")
    z = 1j * (1 + w) / (1 - w)
    dz = None if dw is None else dw * 2j / (1 - w) ** 2
    if model is ModelId.HALF_PLANE:
        return z, dz
    m = np.angle(z) + 1j * np.log(np.abs(z))
    if dz is None:
        return m, None
    r = dz / z
    return m, r.imag + 1j * r.real


def chart_arrays_to_hyperboloid(z, dz=None, model=ModelId.HALF_PLANE):
    """Vectorized inverse of :func:`chart_arrays`; returns ``(points, tangents)``."""
    model = ModelId.parse(model)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if dz is not None:
        dz = np.atleast_1d(np.asarray(dz, dtype=complex))
    if model is ModelId.MERCATOR:
        h = np.exp(z.imag + 1j * z.real)
        dh = None if dz is None else h * (dz.imag + 1j * dz.real)
        z, dz, model = h, dh, ModelId.HALF_PLANE
    if model is ModelId.HALF_PLANE:
        w = (z - 1j) / (z + 1j)
        dw = None if dz is None else dz * 2j / (z + 1j) ** 2
    elif model is ModelId.DISK:
        w, dw = z, dz
    else:
        raise ValueError("unsupported chart")
    x, y = w.real, w.imag
    r2 = x * x + y * y
    d = 1.0 - r2
    P = np.column_stack([(1.0 + r2) / d, 2.0 * x / d, 2.0 * y / d])
    if dw is None:
        return P, None
    dr2 = 2.0 * (x * dw.real + y * dw.imag)
    W = np.column_stack(
        [2.0 * dr2 / d**2, 2.0 * dw.real / d + 2.0 * x * dr2 / d**2, 2.0 * dw.imag / d + 2.0 * y * dr2 / d**2]
    )
    return P, W
