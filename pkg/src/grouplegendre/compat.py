"""Compatibility of the free Hamiltonian and the free Lagrangian.

Both generate a Lagrangian submanifold of T*SL(N,C).  Over a unitary
velocity ``v = u' u^{-1}`` they agree exactly when ``-E^{-1}(v)`` equals
``Phi(v)``.  The leading minus sign can be placed in more than one way, so
every reading is evaluated and reported side by side:

    "E^-1(-v)"      invert_E(-v, eps)
    "E^-1(v)"       invert_E(v, eps)
    "E^-1(v;-eps)"  invert_E(v, -eps)

(the first and third coincide identically; both are kept so the table lists
each reading explicitly).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .dynamics_sun import invert_E
from .legendre_sb import DEFAULT_STEPS, MetricData, phi
from .matgroup import check_su, dual_identify, random_su_algebra

VARIANTS = ("E^-1(-v)", "E^-1(v)", "E^-1(v;-eps)")
SAMPLE_NORMS = (0.1, 0.5, 1.0, 2.0)


@dataclass
class CompatReport:
    v: np.ndarray
    lhs_variants: list[np.ndarray]
    rhs: np.ndarray
    residuals: list[float]
    epsilon: float
    c: float

    @property
    def best(self) -> float:
        return min(self.residuals)

    @property
    def best_variant(self) -> str:
        return VARIANTS[int(np.argmin(self.residuals))]


def variant_lhs(v: np.ndarray, epsilon: float) -> list[np.ndarray]:
    return [invert_E(-v, epsilon), invert_E(v, epsilon), invert_E(v, -epsilon)]


def compat_residual(v, epsilon: float = 1.0, metric: MetricData | None = None,
                    steps: int = DEFAULT_STEPS) -> CompatReport:
    v = check_su(v, tol=1e-8)
    metric = metric or MetricData(1.0, v.shape[0])
    rhs = phi(dual_identify(v), metric, steps)
    lhs = variant_lhs(v, epsilon)
    res = [float(np.linalg.norm(a - rhs)) for a in lhs]
    return CompatReport(v, lhs, rhs, res, float(epsilon), float(metric.c))


def sample_directions(n: int, seed: int = 0, per_norm: int = 3,
                      norms=SAMPLE_NORMS) -> list[np.ndarray]:
    """Seeded su(n) samples: ``per_norm`` random directions at each norm.

    The first direction is always ``i diag(1, -1, 0, ...)`` so the diagonal
    SU(2) case is part of every sample set.
    """
    rng = np.random.default_rng(seed)
    dirs = [np.diag([1j, -1j] + [0] * (n - 2))]
    while len(dirs) < per_norm:
        dirs.append(random_su_algebra(n, rng))
    dirs = [d / np.linalg.norm(d) for d in dirs]
    return [r * d for r in norms for d in dirs]


@dataclass
class ScanRow:
    epsilon: float
    c: float
    max_best: float
    mean_best: float
    reports: list[CompatReport]


def compat_scan(epsilons, cs, samples, steps: int = DEFAULT_STEPS) -> list[ScanRow]:
    """Evaluate every ``(eps, c)`` grid point on the sample set.

    Rows come back in grid order (``eps`` outer, ``c`` inner); use
    :func:`rank` for the ordering by mean best-variant residual.  ``Phi``
    does not depend on ``eps``, so it is computed once per ``(c, v)``.
    """
    samples = [check_su(v, tol=1e-8) for v in samples]
    n = samples[0].shape[0]
    rhs_cache: dict[tuple[float, int], np.ndarray] = {}
    rows = []
    for eps, c in itertools.product(epsilons, cs):
        metric = MetricData(float(c), n)
        reports = []
        for k, v in enumerate(samples):
            key = (float(c), k)
            if key not in rhs_cache:
                rhs_cache[key] = phi(dual_identify(v), metric, steps)
            rhs = rhs_cache[key]
            lhs = variant_lhs(v, eps)
            res = [float(np.linalg.norm(a - rhs)) for a in lhs]
            reports.append(CompatReport(v, lhs, rhs, res, float(eps), float(c)))
        best = np.array([r.best for r in reports])
        rows.append(ScanRow(float(eps), float(c), float(best.max()), float(best.mean()), reports))
    return rows


def rank(rows: list[ScanRow]) -> list[ScanRow]:
    return sorted(rows, key=lambda r: (r.mean_best, r.max_best))


def parse_range(spec: str) -> np.ndarray:
    """``"lo:hi:count"`` -> ``count`` log-spaced values (linear if lo <= 0)."""
    lo, hi, count = spec.split(":")
    lo, hi, count = float(lo), float(hi), int(count)
    if count < 1:
        raise ValueError("grid count must be >= 1")
    if count == 1:
        return np.array([lo])
    if lo > 0 and hi > 0:
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)
