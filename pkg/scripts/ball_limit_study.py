#!/usr/bin/env python3
"""Shrink the inner radius and watch the annulus Green function converge to
the reflection (unit-ball) closed form; report the fitted a^(n-2) constant.

Example:
    python scripts/ball_limit_study.py --x 0.5,0,0 --y 0.3,0.2,0
"""

import argparse
import sys

import numpy as np

from annulus_green import (
    AnnulusGeometry,
    TruncationPolicy,
    ball_green_closed_form,
    green_eval,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", default="0.5,0,0")
    ap.add_argument("--y", default="0.3,0.2,0")
    ap.add_argument("--radii", default="0.2,0.1,0.05,0.03,0.01")
    args = ap.parse_args()

    x = np.array([float(v) for v in args.x.split(",")])
    y = np.array([float(v) for v in args.y.split(",")])
    n = len(x)
    radii = [float(v) for v in args.radii.split(",")]
    policy = TruncationPolicy(abs_tol=1e-13, max_terms=300_000)

    ref = ball_green_closed_form(n, x, y)
    print(f"ball Green value: {ref:.12f}")
    print(f"{'a':>8} {'annulus value':>18} {'error':>12} {'error/a^(n-2)':>14}")
    errs = []
    for a in radii:
        val = green_eval(AnnulusGeometry(n, a), x, y, policy).value
        err = abs(val - ref)
        errs.append(err)
        print(f"{a:8.3f} {val:18.12f} {err:12.3e} {err / a ** (n - 2):14.4f}")

    scaled = [a ** (n - 2) for a in radii]
    c_fit = sum(e * s for e, s in zip(errs, scaled)) / sum(s * s for s in scaled)
    print(f"fitted constant C = {c_fit:.6f} (error ~ C a^{n - 2})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
