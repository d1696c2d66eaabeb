"""Classical fourth-order Runge-Kutta on arbitrary numpy states."""

from __future__ import annotations

from typing import Callable

import numpy as np


class FlowAbort(ArithmeticError):
    """Raised when an integrated state becomes non-finite or leaves its window."""


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4(f, y0, t: float, steps: int, *, radius: float | None = None, callback=None) -> np.ndarray:
    """Integrate the autonomous field ``f`` from ``y0`` over time ``t``.

    ``callback(k, y)`` is called after every step.  With ``radius`` set the
    flow aborts as soon as ``max|y|`` exceeds it, which is how completeness is
    enforced on a finite window.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    y = np.array(y0, copy=True)
    h = t / steps
    for k in range(steps):
        y = rk4_step(f, y, h)
        if not np.all(np.isfinite(y)):
            raise FlowAbort(f"non-finite state after step {k + 1}")
        if radius is not None and np.max(np.abs(y)) > radius:
            raise FlowAbort(f"state left the radius-{radius:g} window after step {k + 1}")
        if callback is not None:
            callback(k + 1, y)
    return y
