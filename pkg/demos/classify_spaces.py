"""Sort curve spaces by their curvature interval, reduce them, and decide emptiness.

Run: python3 demos/classify_spaces.py
"""

import math

from hypcurve import CurvatureInterval, ModelId, Verdict, classify_interval, reduce, voidness_report
from hypcurve.classify import valid_turnings
from hypcurve.models import unit_vector

H = ModelId.HALF_PLANE
coth = lambda x: 1 / math.tanh(x)  # noqa: E731


def main() -> None:
    u = unit_vector(H, 1j, -1.0)
    v = unit_vector(H, 0.5 + 1.5j, 1j)
    base = valid_turnings(u, v).base
    print(f"turnings from u to v are {base:.4f} + 2 pi n")

    cases = [
        ("contained", CurvatureInterval(-math.tanh(1), math.tanh(1))),
        ("disjoint", CurvatureInterval(coth(2), coth(0.5))),
        ("overlapping", CurvatureInterval(0.5, math.inf)),
        ("containing", CurvatureInterval(-2.0, 2.0)),
    ]
    print(f"\n{'bounds':>18}  {'class':<12} {'kappa0':>9}  reduced bounds")
    for _, b in cases:
        r = reduce(b, u, v, u)
        lo, hi = r.reduced_bounds.as_tuple()
        print(f"({b.lo:+.4f}, {b.hi:+.4f})  {classify_interval(b).value:<12} {r.kappa0:>+9.4f}  ({lo:+.4f}, {hi:+.4f})")

    print("\nemptiness by turning index (disjoint interval: low turnings are obstructed)")
    b = cases[1][1]
    for n in (-3, -1, 0, 1, 2):
        tau = base + 2 * math.pi * n
        rep = voidness_report(b, u, v, tau)
        print(f"  n={n:+d}  tau={tau:+8.3f}  {rep.verdict.value:<20} {rep.reason}")

    print("\ncontained interval: only one turning class can be attained")
    b = CurvatureInterval(-0.2, 0.8)
    target = unit_vector(H, -0.79 + 0.376j, -0.152 - 0.344j)
    tau0 = valid_turnings(u, target).base
    tau0 = tau0 - 2 * math.pi if tau0 > math.pi else tau0
    for n in (-1, 0, 1):
        rep = voidness_report(b, u, target, tau0 + 2 * math.pi * n)
        mark = "*" if rep.verdict is Verdict.NONEMPTY else " "
        print(f"  {mark} n={n:+d}  {rep.verdict.value:<10} {rep.reason}")


if __name__ == "__main__":
    main()
