"""The pair groupoid ``S x S-bar`` of a symplectic vector space ``S``.

``S = R^{2m}`` with coordinates ``(q, p)`` and the same bracket convention
as the other engines (``q' = -dF/dp``, ``p' = dF/dq``).  A point is
``(x, y)``; the left projection is ``x``, the right projection ``y``, and
the units are the diagonal ``(x, x)``.  The Poisson tensor is
``Pi (+) -Pi``, so ``f^left = f(x)`` moves only the first leg by ``X_f`` and
``f^right = f(y)`` moves only the second leg by ``-X_f``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

from ..integrate import rk4
from ..sample import LagrangianSample
from .checks import fd_jacobian, omega_matrix, poisson_matrix, symplectic_defect
from .functions import SmoothFunction, quadratic


@dataclass
class PairGroupoidPoint:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.shape != self.y.shape or self.x.ndim != 1 or self.x.size % 2:
            raise ValueError("x and y must be vectors of the same even length")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y))):
            raise ValueError("pair groupoid point must be finite")

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    @classmethod
    def unit(cls, x) -> "PairGroupoidPoint":
        return cls(x, np.array(x, dtype=float))


def harmonic_oscillator(m: int = 1) -> SmoothFunction:
    """``f = 1/2 |x|^2`` on ``R^{2m}``."""
    return quadratic(np.eye(2 * m))


def hamiltonian_vector(f: SmoothFunction, x: np.ndarray) -> np.ndarray:
    """``X_f`` on stacked rows of ``S``."""
    m = x.shape[-1] // 2
    return f.grad(x) @ poisson_matrix(m).T


def pair_field(f: SmoothFunction, side: str = "left"):
    """Field of ``f^side`` on stacked ``(x, y)`` rows: ``(X_f(x), 0)`` or ``(0, -X_f(y))``."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")

    def field(z):
        d = z.shape[-1] // 2
        out = np.zeros_like(z)
        if side == "left":
            out[..., :d] = hamiltonian_vector(f, z[..., :d])
        else:
            out[..., d:] = -hamiltonian_vector(f, z[..., d:])
        return out

    return field


def pair_flow(f: SmoothFunction, z0, t: float = 1.0, steps: int = 100, side: str = "left",
              radius: float | None = None) -> np.ndarray:
    return rk4(pair_field(f, side), np.asarray(z0, dtype=float), t, steps, radius=radius)


def pair_generate(f: SmoothFunction, x0_grid, steps: int = 100, side: str = "left",
                  radius: float | None = None) -> LagrangianSample:
    """Flow the diagonal points ``(x0, x0)`` by ``X_{f^side}`` for unit time."""
    x0 = np.atleast_2d(np.asarray(x0_grid, dtype=float))
    d = x0.shape[1]
    if d % 2:
        raise ValueError("points of S must have even dimension")
    z0 = np.hstack([x0, x0])
    z1 = pair_flow(f, z0, 1.0, steps, side, radius)
    leg = slice(0, d) if side == "left" else slice(d, 2 * d)
    half = d // 2
    coords = [f"q{j}" for j in range(half)] + [f"p{j}" for j in range(half)]
    return LagrangianSample(
        params=x0,
        points=z1,
        param_names=[f"x0_{c}" for c in coords],
        point_names=[f"x_{c}" for c in coords] + [f"y_{c}" for c in coords],
        residuals={"energy_drift": np.abs(f(z1[:, leg]) - f(x0))},
    )


def oscillator_rotation(t: float = 1.0) -> np.ndarray:
    """Time-``t`` map of ``X_f`` for ``f = 1/2 (q^2 + p^2)`` on ``R^2``.

    ``q' = -p``, ``p' = q``: counterclockwise rotation in the ``(q, p)`` plane.
    """
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


def reference_flow(f: SmoothFunction, x0, t: float = 1.0, rtol: float = 1e-12,
                   atol: float = 1e-12) -> np.ndarray:
    """Adaptive-step solution of ``x' = X_f(x)`` for one point, used as an oracle."""
    sol = scipy.integrate.solve_ivp(lambda _, x: hamiltonian_vector(f, x), (0.0, t),
                                    np.asarray(x0, dtype=float), method="DOP853",
                                    rtol=rtol, atol=atol)
    if not sol.success:
        raise ArithmeticError(sol.message)
    return sol.y[:, -1]


def pair_omega(m: int) -> np.ndarray:
    """``Omega (+) -Omega`` on ``S x S-bar``."""
    om = omega_matrix(m)
    z = np.zeros_like(om)
    return np.block([[om, z], [z, -om]])


def symplecticity(f: SmoothFunction, z, steps: int = 100, side: str = "left") -> float:
    z = np.asarray(z, dtype=float)
    jac = fd_jacobian(lambda w: pair_flow(f, w[None], 1.0, steps, side)[0], z)
    return symplectic_defect(jac, pair_omega(z.size // 4))
