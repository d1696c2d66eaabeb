"""Step-halving study for the free-motion flow and the geodesic flow.

Prints, per step count, the max conservation drift along evolve and the
endpoint error against the closed form ``u0 exp(t F(gamma0)) gamma0``;
then the same endpoint study for the geodesic flow against a fine run.
"""

import argparse

import numpy as np

from grouplegendre.dynamics_sun import F_map, FlowConfig, evolve
from grouplegendre.legendre_sb import MetricData, geodesic_flow
from grouplegendre.matgroup import decompose_left, matrix_exp, random_sl, random_su_algebra


def closed_form(g0, eps, t):
    u0, gamma0 = decompose_left(g0)
    return u0 @ matrix_exp(t * F_map(gamma0, eps)) @ gamma0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--steps", type=int, nargs="+", default=[125, 250, 500, 1000])
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    g0 = random_sl(args.n, rng)
    exact = closed_form(g0, 1.0, 1.0)
    print("evolve: steps  max_drift  endpoint_err  drift_ratio  err_ratio")
    prev = None
    for s in args.steps:
        rec = evolve(g0, FlowConfig(1.0, 1.0, s))
        drift = max(rec.max_drift().values())
        err = np.linalg.norm(rec.final - exact)
        ratios = ("", "") if prev is None else (f"{prev[0] / drift:8.2f}", f"{prev[1] / err:8.2f}")
        print(f"  {s:6d}  {drift:.3e}  {err:.3e}  {ratios[0]:>10}  {ratios[1]:>10}")
        prev = (drift, err)

    eta0 = random_su_algebra(args.n, rng, norm=1.0)
    metric = MetricData(1.0, args.n)
    ref = geodesic_flow(eta0, metric, 1.0, 8 * max(args.steps)).gamma
    print("geodesic: steps  endpoint_err  err_ratio")
    prev = None
    for s in args.steps:
        err = np.linalg.norm(geodesic_flow(eta0, metric, 1.0, s).gamma - ref)
        ratio = "" if prev is None else f"{prev / err:8.2f}"
        print(f"  {s:6d}  {err:.3e}  {ratio:>10}")
        prev = err


if __name__ == "__main__":
    main()
