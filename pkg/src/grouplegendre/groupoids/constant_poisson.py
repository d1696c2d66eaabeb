"""Vector space with a constant Poisson structure, realized in T*V.

Phase-space points are ``(q, p)`` with ``{q^j, p_k} = delta^j_k``; the left
and right projections to ``V`` are

    x_L = q + 1/2 r(p),    x_R = q - 1/2 r(p),    [r(p)]^j = p_k r^{kj},

so that ``{x_L^j, x_L^k} = r^{jk}`` and the two projections Poisson-commute.
The unit set is the zero section ``{(x, 0)}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..integrate import rk4
from ..sample import LagrangianSample
from .checks import fd_jacobian, isotropy_defect, omega_matrix, symplectic_defect
from .functions import SmoothFunction


@dataclass(frozen=True)
class ConstantPoissonSpace:
    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError("r must be a square matrix")
        if np.any(r + r.T != 0):
            raise ValueError("r must be exactly antisymmetric")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @classmethod
    def standard(cls, n: int = 2, r12: float = 1.0) -> "ConstantPoissonSpace":
        r = np.zeros((n, n))
        r[0, 1], r[1, 0] = r12, -r12
        return cls(r)


@dataclass
class TwistedCotangentPoint:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        if self.q.shape != self.p.shape or not np.all(np.isfinite(self.q)) or not np.all(np.isfinite(self.p)):
            raise ValueError("q and p must be finite vectors of the same length")

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])


def _split(y: np.ndarray, n: int):
    return y[..., :n], y[..., n:]


def _r_of_p(p: np.ndarray, r: np.ndarray) -> np.ndarray:
    return p @ r


def cp_left_projection(pt: TwistedCotangentPoint, space: ConstantPoissonSpace) -> np.ndarray:
    if pt.q.shape != (space.n,):
        raise ValueError(f"point dimension {pt.q.shape} does not match space dimension {space.n}")
    return pt.q + 0.5 * _r_of_p(pt.p, space.r)


def cp_right_projection(pt: TwistedCotangentPoint, space: ConstantPoissonSpace) -> np.ndarray:
    if pt.q.shape != (space.n,):
        raise ValueError(f"point dimension {pt.q.shape} does not match space dimension {space.n}")
    return pt.q - 0.5 * _r_of_p(pt.p, space.r)


def projection(y: np.ndarray, space: ConstantPoissonSpace, side: str = "left") -> np.ndarray:
    """Batched left/right projection of stacked ``(q, p)`` rows."""
    q, p = _split(np.asarray(y, dtype=float), space.n)
    sgn = 0.5 if side == "left" else -0.5
    return q + sgn * _r_of_p(p, space.r)


def pulled_back(f: SmoothFunction, space: ConstantPoissonSpace, side: str = "left"):
    """``f^left`` or ``f^right`` on stacked ``(q, p)`` rows."""
    return lambda y: f(projection(y, space, side))


def hamiltonian_field(f: SmoothFunction, space: ConstantPoissonSpace, side: str = "left"):
    """Vector field of ``f^side``: ``q' = -dF/dp``, ``p' = dF/dq``.

    With ``g = grad f(x)``: ``dF/dq = g`` and ``dF/dp = +-1/2 r g``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    sgn = 0.5 if side == "left" else -0.5
    r = space.r

    def field(y):
        g = f.grad(projection(y, space, side))
        return np.concatenate([-sgn * (g @ r.T), g], axis=-1)

    return field


def cp_flow(f: SmoothFunction, space: ConstantPoissonSpace, y0, t: float = 1.0,
            steps: int = 100, side: str = "left", radius: float | None = None) -> np.ndarray:
    """Time-``t`` flow of ``X_{f^side}`` applied to stacked ``(q, p)`` rows."""
    return rk4(hamiltonian_field(f, space, side), np.asarray(y0, dtype=float), t, steps, radius=radius)


def unit_points(x0_grid, space: ConstantPoissonSpace) -> np.ndarray:
    x0 = np.atleast_2d(np.asarray(x0_grid, dtype=float))
    if x0.shape[1] != space.n:
        raise ValueError(f"grid points must have dimension {space.n}")
    return np.hstack([x0, np.zeros_like(x0)])


def cp_generate(f: SmoothFunction, space: ConstantPoissonSpace, x0_grid, steps: int = 100,
                *, side: str = "left", radius: float | None = None) -> LagrangianSample:
    """Flow the zero section points ``(x0, 0)`` by ``X_{f^side}`` for unit time."""
    y0 = unit_points(x0_grid, space)
    y1 = cp_flow(f, space, y0, 1.0, steps, side, radius)
    fb = pulled_back(f, space, side)
    n = space.n
    return LagrangianSample(
        params=y0[:, :n],
        points=y1,
        param_names=[f"x0_{j}" for j in range(n)],
        point_names=[f"q{j}" for j in range(n)] + [f"p{j}" for j in range(n)],
        residuals={"energy_drift": np.abs(fb(y1) - fb(y0))},
    )


def phase_lift_graph(f: SmoothFunction, space: ConstantPoissonSpace, x0_grid, t_grid,
                     steps_per_unit: int = 100) -> LagrangianSample:
    """Characteristics ``{(exp(t X_{f^left}) x0 ; f(x0), t)}`` of the phase lift.

    The extended field ``X_{f^left} + d/dt`` is integrated on
    ``(q, p, e, t)`` from ``(x0, 0; f(x0), 0)``.  Each requested ``t`` uses
    ``round(steps_per_unit * |t|)`` steps (at least one), so the ``t = 1``
    slice uses the same step size as :func:`cp_generate` with
    ``steps = steps_per_unit``.
    """
    n = space.n
    y0 = unit_points(x0_grid, space)
    base = hamiltonian_field(f, space, "left")

    def extended(z):
        out = np.zeros_like(z)
        out[:, : 2 * n] = base(z[:, : 2 * n])
        out[:, 2 * n + 1] = 1.0
        return out

    z0 = np.hstack([y0, f(y0[:, :n])[:, None], np.zeros((len(y0), 1))])
    params, points = [], []
    for t in np.atleast_1d(np.asarray(t_grid, dtype=float)):
        steps = max(1, int(round(steps_per_unit * abs(t))))
        z = rk4(extended, z0, t, steps)
        params.append(np.hstack([y0[:, :n], np.full((len(y0), 1), t)]))
        points.append(z)
    names = [f"q{j}" for j in range(n)] + [f"p{j}" for j in range(n)] + ["e", "t"]
    return LagrangianSample(np.vstack(params), np.vstack(points),
                            [f"x0_{j}" for j in range(n)] + ["t_param"], names)


# --------------------------------------------------------------------------
# verification helpers

def membership_residual(f: SmoothFunction, space: ConstantPoissonSpace, points,
                        steps: int = 100) -> np.ndarray:
    """Distance of each ``(q, p)`` from ``L_f = exp(X_{f^left})(zero section)``.

    Flows back by ``X_{f^left}`` for unit time, reads off the unit ``y0``
    (the ``q`` part) and flows forward again; the residual is the larger of
    the leftover momentum and the round-trip mismatch.
    """
    y = np.atleast_2d(np.asarray(points, dtype=float))
    back = cp_flow(f, space, y, -1.0, steps, "left")
    n = space.n
    p_left = np.linalg.norm(back[:, n:], axis=1)
    fwd = cp_flow(f, space, unit_points(back[:, :n], space), 1.0, steps, "left")
    return np.maximum(p_left, np.linalg.norm(fwd - y, axis=1))


def time_one_jacobian(f: SmoothFunction, space: ConstantPoissonSpace, y, steps: int = 100,
                      side: str = "left") -> np.ndarray:
    return fd_jacobian(lambda z: cp_flow(f, space, z[None], 1.0, steps, side)[0], y)


def symplecticity(f: SmoothFunction, space: ConstantPoissonSpace, y, steps: int = 100) -> float:
    return symplectic_defect(time_one_jacobian(f, space, y, steps), omega_matrix(space.n))


def generated_tangent(f: SmoothFunction, space: ConstantPoissonSpace, x0, steps: int = 100) -> np.ndarray:
    """Tangent space of the generated cloud at the image of ``x0`` (columns)."""
    return fd_jacobian(lambda x: cp_generate(f, space, x[None], steps).points[0], x0)


def lagrangian_defect(f: SmoothFunction, space: ConstantPoissonSpace, x0, steps: int = 100):
    """``(||T^T Omega T||, rank T)`` for the generated tangent space at ``x0``."""
    t = generated_tangent(f, space, np.asarray(x0, dtype=float), steps)
    sv = np.linalg.svd(t, compute_uv=False)
    rank = int(np.sum(sv > 1e-8 * sv[0]))
    return isotropy_defect(t, omega_matrix(space.n)), rank


def left_right_mismatch(f: SmoothFunction, space: ConstantPoissonSpace, x0_grid,
                        steps: int = 100) -> np.ndarray:
    """Per-point distance between the ``f^left`` and ``f^right`` generated clouds.

    The ``f^left`` flow fixes the right projection and the ``f^right`` flow
    fixes the left one, so the endpoint from ``(x0, 0)`` under ``f^left`` is
    compared with the ``f^right`` endpoint started from the unit over its
    left projection.
    """
    left = cp_generate(f, space, x0_grid, steps).points
    partner = projection(left, space, "left")
    right = cp_generate(f, space, partner, steps, side="right").points
    return np.linalg.norm(left - right, axis=1)
