"""Deform one admissible curve into another without leaving the curvature band.

Two cases are shown: curvature above 1 (a straight-line homotopy in the
tangent-argument parametrization) and curvature inside [-1, 1] (a median
deformation of Mercator slope profiles).

Run: python3 demos/contract_curves.py [outdir]
"""

import math
import sys
from pathlib import Path

import numpy as np

from hypcurve import CurvatureInterval, IntrinsicCurve, ModelId, integrate, total_turning
from hypcurve.cli import atomic_write, render_svg
from hypcurve.homotopy import (
    SteeringError,
    contract_contained,
    contract_disjoint,
    curve_to_profile,
    loop_concat,
    profile_family_curves,
    reparam_by_argument,
    steer,
)
from hypcurve.models import isometry_from_unit_tangent, unit_vector

H = ModelId.HALF_PLANE


def disjoint(outdir: Path) -> None:
    b = CurvatureInterval(1 / math.tanh(2), 1 / math.tanh(0.5))
    u = unit_vector(H, 1j, -1.0)
    rng = np.random.default_rng(1000)
    c0 = IntrinsicCurve.from_values(isometry_from_unit_tangent(u), np.linspace(0, 1, 4), rng.uniform(2, 5), rng.uniform(b.lo + 0.05, b.hi - 0.05, 4), b)
    v = integrate(c0, params=[1.0]).unit_tangent(0, H)
    for seed in range(4):
        try:
            c1 = steer(u, v, b, seed=seed)
            break
        except SteeringError:
            continue
    else:
        raise SystemExit("steering failed")
    # equalize total turning with full loops
    n = round((total_turning(integrate(c0)) - total_turning(integrate(c1))) / (2 * math.pi))
    c0, c1 = (c0, loop_concat(c1, n, 1.5)) if n > 0 else (loop_concat(c0, -n, 1.5), c1)
    g0, g1 = reparam_by_argument(c0), reparam_by_argument(c1)
    fam = contract_disjoint(g0, g1, np.linspace(0, 1, 9), b)
    print(f"disjoint: total turning {g0.tau:.4f}, diameter margins {fam.residuals}")
    atomic_write(outdir / "disjoint_family.svg", render_svg([g.to_sampled() for g in fam.curves], ModelId.DISK))


def contained(outdir: Path) -> None:
    b = CurvatureInterval(-0.2, 0.8)
    u = unit_vector(H, 1j, -1.0)
    c = IntrinsicCurve.from_values(isometry_from_unit_tangent(u), [0, 0.3, 0.6, 1], 1.5, [0.6, -0.1, 0.5, 0.2], b)
    prof, g = curve_to_profile(c)
    fam = contract_contained(prof, np.linspace(0, 1, 9))
    lam_mu = fam.metadata["lambda_mu"]
    print(f"contained: kappa band {fam.metadata['band']}, (lambda, mu) at s=0: {lam_mu[0]}, residuals {fam.residuals}")
    curves = profile_family_curves(fam, g)
    atomic_write(outdir / "contained_family.svg", render_svg(curves, ModelId.MERCATOR, rays=False))


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
    disjoint(out)
    contained(out)
    print("wrote SVG families to", out)
