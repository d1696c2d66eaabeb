"""Compare both momentum-equation signs of the geodesic flow with the coordinate oracle."""

import argparse

import numpy as np

from grouplegendre.legendre_sb import MetricData, geodesic_flow, oracle_flow
from grouplegendre.matgroup import random_su_algebra


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    metric = MetricData(1.0, args.n)
    worst = {+1: 0.0, -1: 0.0}
    for _ in range(args.count):
        eta0 = random_su_algebra(args.n, rng, norm=rng.uniform(0.2, 1.5))
        ref = oracle_flow(eta0, metric, 1.0, 400)
        for sign in worst:
            end = geodesic_flow(eta0, metric, 1.0, 1000, sign=sign).gamma
            worst[sign] = max(worst[sign], float(np.linalg.norm(end - ref)))
    for sign, err in worst.items():
        print(f"sign {sign:+d}: max endpoint mismatch {err:.3e}")
    print(f"selected sign: {min(worst, key=worst.get):+d}")


if __name__ == "__main__":
    main()
