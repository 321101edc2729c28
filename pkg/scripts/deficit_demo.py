#!/usr/bin/env python3
"""Demonstrate the sharpness structure of the three gap ranges.

Upper range: linear functions have deficit 0 (they are the extremals).
Mid range:   centered quadratics have deficit 0; linear ones do not.
Lower range: every nonconstant test function has strictly negative deficit
             (there is no extremal), and the corollary's time-resolved
             integrand shows where the inequality loses mass.
"""

import argparse

import numpy as np

from cauchygap.functions import (
    make_linear,
    make_power_family,
    make_quadratic_centered,
    make_random_test,
)
from cauchygap.measures import MeasureParams
from cauchygap.semigroup import deficit, deficit_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=3,
                    help="number of random lower-range test functions")
    ap.add_argument("--trace", action="store_true",
                    help="also print the time-resolved integrand for a "
                         "linear function in the mid range")
    args = ap.parse_args()

    p_up = MeasureParams(3, 4.5)
    e1 = np.array([1.0, 0.0, 0.0])
    print("upper range, n=3 beta=4.5")
    print(f"  linear     deficit = {deficit(make_linear(e1), p_up, 'upper'):+.3e}")

    p_mid = MeasureParams(3, 3.8)
    print("mid range, n=3 beta=3.8")
    q = make_quadratic_centered(p_mid)
    print(f"  quadratic  deficit = {deficit(q, p_mid, 'mid'):+.3e}")
    print(f"  linear     deficit = {deficit(make_linear(e1), p_mid, 'mid'):+.3e}"
          "   (not extremal here)")

    p_low = MeasureParams(2, 1.5)
    print("lower range, n=2 beta=1.5  (no extremal exists)")
    for seed in range(args.seeds):
        d = deficit(make_random_test(seed, 2), p_low, "lower")
        print(f"  bump seed={seed}  deficit = {d:+.4e}")
    d = deficit(make_power_family(0.15), p_low, "lower")
    print(f"  (1+|x|^2)^0.15 deficit = {d:+.4e}")

    if args.trace:
        times = np.linspace(0.0, 2.0, 9)
        rows = deficit_trace(make_linear(e1), p_mid, "mid", times)
        print("\nmid-range integrand along the heat flow (linear input):")
        for t, v in rows:
            print(f"  t={t:4.2f}  integrand = {v:.6e}")


if __name__ == "__main__":
    main()
