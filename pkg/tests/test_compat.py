import json
from pathlib import Path

import numpy as np
import pytest

from grouplegendre.compat import (
    VARIANTS,
    compat_residual,
    compat_scan,
    parse_range,
    rank,
    sample_directions,
)
from grouplegendre.legendre_sb import MetricData

FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "compat_pilot.json").read_text())


def test_zero_velocity_agrees():
    rep = compat_residual(np.zeros((2, 2)), 1.0, MetricData(1.0, 2), 100)
    assert max(rep.residuals) < 1e-10


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
def test_diagonal_su2_residuals_positive(t):
    rep = compat_residual(np.diag([1j * t, -1j * t]), 1.0, MetricData(1.0, 2), 1000)
    assert len(rep.residuals) == len(VARIANTS)
    assert min(rep.residuals) > 1e-3
    # E^-1(-v) and E^-1(v; -eps) are the same map
    assert rep.residuals[0] == rep.residuals[2]
    pinned = next(d for d in FIXTURE["diagonal"] if d["t"] == t)["residuals"]
    np.testing.assert_allclose(rep.residuals, [pinned[v] for v in VARIANTS], rtol=1e-9)


def test_residuals_shrink_towards_origin():
    metric = MetricData(1.0, 2)
    v = np.diag([1j, -1j])
    big = compat_residual(v, 1.0, metric, 400).best
    small = compat_residual(0.1 * v, 1.0, metric, 400).best
    tiny = compat_residual(1e-4 * v, 1.0, metric, 400).best
    assert tiny < small < big


def test_unit_norm_sample_exceeds_threshold():
    metric = MetricData(1.0, 2)
    samples = [v for v in sample_directions(2, FIXTURE["seed"]) if abs(np.linalg.norm(v) - 1) < 1e-12]
    best = [compat_residual(v, 1.0, metric, FIXTURE["steps"]).best for v in samples]
    assert max(best) > FIXTURE["threshold"]
    assert abs(max(best) - FIXTURE["unit_norm_max_best"]) < 1e-9


def test_sample_directions_deterministic():
    a = sample_directions(3, seed=4)
    b = sample_directions(3, seed=4)
    assert len(a) == 12
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)
    np.testing.assert_allclose(a[0] * np.sqrt(2) / 0.1, np.diag([1j, -1j, 0]), atol=1e-15)


def test_degenerate_scan_matches_single_evaluation():
    samples = sample_directions(2, per_norm=1, norms=(0.5,))
    rows = compat_scan([1.0], [1.0], samples, 200)
    assert len(rows) == 1
    single = compat_residual(samples[0], 1.0, MetricData(1.0, 2), 200)
    assert rows[0].reports[0].residuals == single.residuals


def test_scan_row_count_and_rank():
    samples = sample_directions(2, per_norm=1, norms=(0.5,))
    rows = compat_scan([0.5, 1.0, 2.0], [0.5, 1.0], samples, 100)
    assert len(rows) == 6
    assert [(r.epsilon, r.c) for r in rows][:2] == [(0.5, 0.5), (0.5, 1.0)]
    ranked = rank(rows)
    assert [r.mean_best for r in ranked] == sorted(r.mean_best for r in rows)


def test_parse_range():
    np.testing.assert_allclose(parse_range("0.25:4:5"), [0.25, 0.5, 1, 2, 4])
    np.testing.assert_allclose(parse_range("-1:1:3"), [-1, 0, 1])
    assert parse_range("2:3:1").tolist() == [2.0]
    with pytest.raises(ValueError):
        parse_range("1:2")
