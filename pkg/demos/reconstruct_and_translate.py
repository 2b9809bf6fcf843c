"""Rebuild curves from curvature data, then push them along their normals.

Run: python3 demos/reconstruct_and_translate.py [outdir]
"""

import math
import sys
from pathlib import Path

import numpy as np

from hypcurve import CurvatureInterval, IntrinsicCurve, ModelId, constant_curve, integrate, normal_translate, total_turning
from hypcurve.cli import atomic_write, render_svg
from hypcurve.models import isometry_from_unit_tangent, unit_vector
from hypcurve.transform import radius_of_curvature, translated_curvature

H = ModelId.HALF_PLANE


def main(outdir: Path) -> None:
    start = unit_vector(H, 1j, -1.0)

    # a circle of radius 1 closes up after one full turn
    r = 1.0
    circle = integrate(constant_curve(start, 1 / math.tanh(r), 2 * math.pi * math.sinh(r)), samples=400)
    gap = np.abs(circle.frames[-1] - circle.frames[0]).max()
    print(f"circle: closing error {gap:.2e}, total turning {total_turning(circle):.6f} (2 pi = {2 * math.pi:.6f})")

    # a wiggly curve with curvature inside (-0.9, 0.9)
    bounds = CurvatureInterval(-0.9, 0.9)
    wiggle = IntrinsicCurve.from_values(isometry_from_unit_tangent(start), np.linspace(0, 1, 7), 3.0, [0.6, -0.5, 0.8, 0.1, -0.7, 0.4, 0.0], bounds)
    trace = integrate(wiggle, samples=400)

    # parallel copies at several distances; curvature follows the Mobius law
    copies = [trace]
    for rho in (-0.6, -0.3, 0.3, 0.6):
        moved = normal_translate(trace, rho)
        copies.append(moved)
        err = np.abs(moved.curvatures - translated_curvature(trace.curvatures, rho)).max()
        print(f"rho={rho:+.1f}: curvature range [{moved.curvatures.min():+.3f}, {moved.curvatures.max():+.3f}], law residual {err:.1e}")

    print(f"a geodesic moved by 1 becomes a hypercircle of curvature {translated_curvature(0.0, 1.0):.6f} = -tanh(1)")
    print(f"radius of curvature of coth(2): {radius_of_curvature(1 / math.tanh(2)):.12f}")

    for model in (ModelId.DISK, ModelId.HALF_PLANE, ModelId.MERCATOR):
        path = outdir / f"parallel_{model.value}.svg"
        atomic_write(path, render_svg(copies, model))
        print("wrote", path)


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out"))
