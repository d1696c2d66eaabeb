"""Pilot run for the compatibility threshold; writes tests/fixtures/compat_pilot.json.

N = 2, eps = 1, c = 1.  Records every variant residual on the seeded sample
set and the minimum-over-variants at unit norm, which fixes the 1e-3
threshold used by the tests.
"""

import argparse
import json
from pathlib import Path

import numpy as np

from grouplegendre.compat import VARIANTS, compat_residual, sample_directions
from grouplegendre.legendre_sb import MetricData

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "compat_pilot.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=FIXTURE)
    args = ap.parse_args()

    metric = MetricData(1.0, 2)
    rows = []
    for k, v in enumerate(sample_directions(2, args.seed)):
        rep = compat_residual(v, 1.0, metric, args.steps)
        rows.append({"v_id": k, "v_norm": float(np.linalg.norm(v)),
                     "residuals": dict(zip(VARIANTS, rep.residuals)), "best": rep.best})
    diag = []
    for t in (0.1, 0.5, 1.0):
        rep = compat_residual(np.diag([1j * t, -1j * t]), 1.0, metric, args.steps)
        diag.append({"t": t, "residuals": dict(zip(VARIANTS, rep.residuals))})
    unit_best = [r["best"] for r in rows if abs(r["v_norm"] - 1.0) < 1e-12]
    doc = {
        "n": 2, "epsilon": 1.0, "c": 1.0, "steps": args.steps, "seed": args.seed,
        "threshold": 1e-3,
        "unit_norm_max_best": max(unit_best),
        "unit_norm_min_best": min(unit_best),
        "samples": rows,
        "diagonal": diag,
    }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"unit-norm best residual range [{min(unit_best):.4f}, {max(unit_best):.4f}] -> {args.out}")


if __name__ == "__main__":
    main()
