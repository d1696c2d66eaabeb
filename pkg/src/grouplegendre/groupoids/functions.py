"""Smooth generating functions with gradients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .checks import FD_STEP


@dataclass(frozen=True)
class SmoothFunction:
    """``f`` and its gradient, both acting on the last axis (batched)."""

    value: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray]
    kind: str = "general"

    def __call__(self, x):
        return self.value(np.asarray(x, dtype=float))


def linear(a) -> SmoothFunction:
    a = np.asarray(a, dtype=float)
    return SmoothFunction(lambda x: x @ a, lambda x: np.broadcast_to(a, np.shape(x)).copy(), "linear")


def quadratic(s, b=None) -> SmoothFunction:
    """``f(x) = 1/2 x^T S x + b.x`` with ``S`` symmetrized."""
    s = np.asarray(s, dtype=float)
    s = 0.5 * (s + s.T)
    b = np.zeros(len(s)) if b is None else np.asarray(b, dtype=float)
    return SmoothFunction(lambda x: 0.5 * np.einsum("...i,ij,...j->...", x, s, x) + x @ b,
                          lambda x: x @ s + b, "quadratic" if not b.any() else "affine-quadratic")


def from_callable(f: Callable[[np.ndarray], float], h: float = FD_STEP) -> SmoothFunction:
    """Wrap a scalar function of one point; the gradient is a central difference."""

    def value(x):
        x = np.asarray(x, dtype=float)
        return np.apply_along_axis(f, -1, x) if x.ndim > 1 else np.asarray(f(x))

    def grad1(x):
        steps = h * np.maximum(1.0, np.abs(x))
        g = np.empty_like(x)
        for j in range(x.size):
            e = np.zeros_like(x)
            e[j] = steps[j]
            g[j] = (f(x + e) - f(x - e)) / (2 * steps[j])
        return g

    def grad(x):
        x = np.asarray(x, dtype=float)
        return np.apply_along_axis(grad1, -1, x) if x.ndim > 1 else grad1(x)

    return SmoothFunction(value, grad, "general")
