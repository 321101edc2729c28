#!/usr/bin/env python3
"""Run the integral-identity verifier over the built-in (n, beta) grid.

Prints one line per (grid point, identity tag) with the worst relative
error over the random test functions, plus a final verdict.  Use
--corrupt-ipp1 to confirm the harness actually detects a broken identity.
"""

import argparse

from cauchygap.measures import MeasureParams
from cauchygap.quadrature import VERIFY_GRID, QuadratureSpec, verify_all


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nodes", type=int, default=128)
    ap.add_argument("--angular-nodes", type=int, default=40)
    ap.add_argument("--tol", type=float, default=1e-5)
    ap.add_argument("--corrupt-ipp1", action="store_true",
                    help="negative control: flip one identity's rhs")
    args = ap.parse_args()

    worst = 0.0
    all_ok = True
    for n, beta in VERIFY_GRID:
        scheme = "polar_2d" if n == 2 else "product_spherical"
        spec = QuadratureSpec(scheme=scheme, nodes=args.nodes,
                              angular_nodes=args.angular_nodes)
        reports = verify_all(MeasureParams(n, beta), spec=spec,
                             trials=args.trials, seed=args.seed,
                             corrupt_ipp1=args.corrupt_ipp1)
        for rep in reports:
            if rep.status == "skipped":
                print(f"n={n} beta={beta:<4g} {rep.tag:10s} skipped "
                      f"({rep.detail})")
                continue
            flag = "" if rep.rel_err <= args.tol else "  <-- FAIL"
            if rep.rel_err > args.tol:
                all_ok = False
            worst = max(worst, rep.rel_err)
            print(f"n={n} beta={beta:<4g} {rep.tag:10s} "
                  f"rel_err={rep.rel_err:.3e}{flag}")
    print(f"\nworst rel_err = {worst:.3e}; "
          + ("all identities hold" if all_ok else "FAILURES present"))
    return 0 if all_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
