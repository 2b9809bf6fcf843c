"""Curves of bounded geodesic curvature in the hyperbolic plane."""

__version__ = "0.1.0"

from .models import (  # noqa: E402
    Isometry,
    ModelDomainError,
    ModelId,
    ModelPoint,
    ModelVector,
    convert_point,
    convert_vector,
    distance,
)
from .curves import CurvatureInterval, IntrinsicCurve, SampledCurve, constant_curve, integrate, total_turning  # noqa: E402
from .transform import classify_interval, normal_translate, normal_translate_curve, reduce  # noqa: E402
from .classify import Verdict, voidness_report  # noqa: E402

__all__ = [
    "CurvatureInterval",
    "Isometry",
    "IntrinsicCurve",
    "ModelDomainError",
    "ModelId",
    "ModelPoint",
    "ModelVector",
    "SampledCurve",
    "Verdict",
    "classify_interval",
    "constant_curve",
    "convert_point",
    "convert_vector",
    "distance",
    "integrate",
    "normal_translate",
    "normal_translate_curve",
    "reduce",
    "total_turning",
    "voidness_report",
]
