import numpy as np
import pytest

from grouplegendre.groupoids import pair
from grouplegendre.groupoids.functions import from_callable, linear, quadratic

OSC = pair.harmonic_oscillator()


def test_zero_function_keeps_diagonal(rng):
    x0 = rng.standard_normal((10, 2))
    s = pair.pair_generate(linear([0.0, 0.0]), x0)
    np.testing.assert_array_equal(s.points, np.hstack([x0, x0]))


def test_oscillator_rotates_counterclockwise(rng):
    x0 = rng.uniform(-1, 1, (50, 2))
    s = pair.pair_generate(OSC, x0)
    assert np.max(np.abs(s.points[:, :2] - x0 @ pair.oscillator_rotation(1.0).T)) < 1e-8
    np.testing.assert_array_equal(s.points[:, 2:], x0)
    # (1, 0) goes to (cos 1, sin 1)
    np.testing.assert_allclose(pair.pair_generate(OSC, [[1.0, 0.0]]).points[0, :2], [np.cos(1), np.sin(1)], atol=1e-9)


def test_rotation_direction_matches_direct_integration():
    x0 = np.array([0.3, -0.8])
    np.testing.assert_allclose(pair.reference_flow(OSC, x0), pair.oscillator_rotation(1.0) @ x0, atol=1e-10)


def test_nonlinear_against_reference(rng):
    f = from_callable(lambda v: 0.5 * v[1] ** 2 - np.cos(v[0]))
    for x in rng.uniform(-1, 1, (3, 2)):
        end = pair.pair_generate(f, x[None], steps=200).points[0, :2]
        assert np.linalg.norm(end - pair.reference_flow(f, x)) < 1e-7


def test_right_flow_uses_inverse_map(rng):
    x0 = rng.uniform(-1, 1, (20, 2))
    s = pair.pair_generate(OSC, x0, side="right")
    np.testing.assert_array_equal(s.points[:, :2], x0)
    assert np.max(np.abs(s.points[:, 2:] - x0 @ pair.oscillator_rotation(-1.0).T)) < 1e-8


def test_left_and_right_clouds_coincide(rng):
    x0 = rng.uniform(-1, 1, (20, 2))
    left = pair.pair_generate(OSC, x0).points
    right = pair.pair_generate(OSC, left[:, :2], side="right").points
    assert np.max(np.abs(left - right)) < 1e-8


def test_symplecticity_four_dimensional(rng):
    f = quadratic(np.array([[1.0, 0.2, 0, 0], [0.2, 2.0, 0.1, 0], [0, 0.1, 1.5, 0], [0, 0, 0, 0.5]]))
    for z in rng.uniform(-1, 1, (3, 8)):
        assert pair.symplecticity(f, z) < 1e-5
        assert pair.symplecticity(f, z, side="right") < 1e-5


def test_point_validation():
    pt = pair.PairGroupoidPoint.unit([1.0, 2.0])
    np.testing.assert_array_equal(pt.vector, [1, 2, 1, 2])
    with pytest.raises(ValueError):
        pair.PairGroupoidPoint([1.0], [1.0])
    with pytest.raises(ValueError):
        pair.pair_generate(OSC, [[1.0, 2.0, 3.0]])
