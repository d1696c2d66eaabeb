"""Free motion on the standard Poisson SU(N), realized on SL(N,C).

The Hamiltonian ``H(g) = 1/2 tr(g^dagger g)`` drives

    g' = i eps [g g^dagger g - (1/N) tr(g^dagger g) g].

Writing ``g = u gamma`` (or ``g = gamma u``) the triangular factor is
conserved and the unitary factor rotates with a constant generator,
``F(gamma)`` on the left and ``E(gamma)`` on the right.  Both maps are
bijections SB(N) -> su(N); their inverses give the two sections of the
groupoid projections that reproduce the dynamics from ``(u, u')``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .integrate import FlowAbort, rk4
from .matgroup import (
    MEMBERSHIP_TOL,
    as_matrix,
    check_special_linear,
    check_su,
    dagger,
    decompose_left,
    decompose_right,
    project_special_linear,
)


@dataclass(frozen=True)
class FlowConfig:
    epsilon: float = 1.0
    t_final: float = 1.0
    steps: int = 1000
    renormalize: bool = False

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")
        if not np.isfinite(self.t_final) or not np.isfinite(self.epsilon):
            raise ValueError("t_final and epsilon must be finite")


@dataclass
class TrajectoryRecord:
    times: np.ndarray
    points: list[np.ndarray]
    energy: np.ndarray
    det_drift: np.ndarray
    gammaL_drift: np.ndarray
    gammaR_drift: np.ndarray
    config: FlowConfig = field(default_factory=FlowConfig)

    @property
    def final(self) -> np.ndarray:
        return self.points[-1]

    def max_drift(self) -> dict[str, float]:
        return {
            "H": float(np.max(np.abs(self.energy - self.energy[0]))),
            "det": float(np.max(self.det_drift)),
            "gammaL": float(np.max(self.gammaL_drift)),
            "gammaR": float(np.max(self.gammaR_drift)),
        }


def free_hamiltonian(g) -> float:
    g = as_matrix(g)
    return 0.5 * float(np.sum(np.abs(g) ** 2))


def eqmot_rhs(g, epsilon: float = 1.0) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    n = g.shape[-1]
    gg = g @ dagger(g)
    tr = np.real(np.trace(gg))
    return 1j * epsilon * (gg @ g - (tr / n) * g)


def _traceless_shift(p: np.ndarray, epsilon: float) -> np.ndarray:
    n = p.shape[0]
    return 1j * epsilon * (p - (np.real(np.trace(p)) / n) * np.eye(n))


def F_map(gamma, epsilon: float = 1.0) -> np.ndarray:
    """``i eps [gamma gamma^dagger - (1/N) tr(gamma gamma^dagger) I]``."""
    gamma = as_matrix(gamma)
    return _traceless_shift(gamma @ dagger(gamma), epsilon)


def E_map(gamma, epsilon: float = 1.0) -> np.ndarray:
    """``i eps [gamma^dagger gamma - (1/N) tr(gamma^dagger gamma) I]``."""
    gamma = as_matrix(gamma)
    return _traceless_shift(dagger(gamma) @ gamma, epsilon)


# --------------------------------------------------------------------------
# inverses

class InversionError(ArithmeticError):
    pass


def unit_det_shift(eigenvalues: np.ndarray, *, maxiter: int = 200) -> float:
    """The unique ``c > -min(lam)`` with ``prod(lam + c) = 1``.

    ``phi(c) = sum log(lam + c)`` is increasing and concave on that ray.  A
    short bisection finds a point left of the root; Newton iterates started
    there increase monotonically to the root (concavity keeps them on the
    left), so no further safeguarding is needed.
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    lo = -lam[0]
    hi = lo + 1.0 + float(np.max(np.abs(lam)))

    def phi(c):
        return float(np.sum(np.log(lam + c)))

    # bisect until a strictly feasible point with phi < 0 is known
    a, b = lo, hi
    c = None
    for _ in range(200):
        mid = 0.5 * (a + b)
        val = phi(mid)
        if val < 0:
            c = mid
            break
        b = mid
    if c is None:
        raise InversionError("bisection did not locate the determinant root")

    for _ in range(maxiter):
        val = phi(c)
        step = -val / float(np.sum(1.0 / (lam + c)))
        c_new = c + step
        if not np.isfinite(c_new):
            raise InversionError("Newton iteration for the determinant root diverged")
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(c_new)):
            return c_new
        if c_new <= c:
            # rounding floor reached
            return c_new
        c = c_new
    raise InversionError(f"determinant root not converged after {maxiter} Newton steps")


def _hermitian_part(x, epsilon: float) -> np.ndarray:
    if epsilon == 0:
        raise ValueError("epsilon = 0 makes F and E identically zero")
    x = check_su(x)
    h = x / (1j * epsilon)
    return 0.5 * (h + dagger(h))


def upper_cholesky_gg(m: np.ndarray) -> np.ndarray:
    """Upper-triangular ``gamma`` with positive diagonal and ``gamma gamma^dagger = m``."""
    flip = m[::-1, ::-1]
    low = np.linalg.cholesky(flip)
    return np.triu(low[::-1, ::-1])


def upper_cholesky_rr(m: np.ndarray) -> np.ndarray:
    """Upper-triangular ``gamma`` with positive diagonal and ``gamma^dagger gamma = m``."""
    return np.triu(scipy.linalg.cholesky(m, lower=False))


def _unit_det_factor(h: np.ndarray, factor, polish: int = 4) -> np.ndarray:
    """Factor ``h + c I`` with ``det = 1`` and return the triangular factor.

    ``c`` from the eigenvalues is only accurate to a few ulps of ``|c|``;
    when ``h + c I`` is nearly singular that error is amplified in the
    factor.  A few Newton steps on ``log det`` read off the factor itself
    (``d/dc log det = ||gamma^{-1}||_F^2``) remove it.
    """
    eye = np.eye(h.shape[0])
    c = unit_det_shift(np.linalg.eigvalsh(h))
    gamma = factor(h + c * eye)
    best = (np.inf, gamma)
    for _ in range(polish):
        logdet = 2.0 * float(np.sum(np.log(gamma.diagonal().real)))
        if abs(logdet) >= best[0]:
            break
        best = (abs(logdet), gamma)
        if logdet == 0.0:
            break
        ginv = scipy.linalg.solve_triangular(gamma, eye)
        c -= logdet / float(np.sum(np.abs(ginv) ** 2))
        try:
            gamma = factor(h + c * eye)
        except np.linalg.LinAlgError:
            break
    return best[1]


def invert_F(x, epsilon: float = 1.0) -> np.ndarray:
    return _unit_det_factor(_hermitian_part(x, epsilon), upper_cholesky_gg)


def invert_E(x, epsilon: float = 1.0) -> np.ndarray:
    return _unit_det_factor(_hermitian_part(x, epsilon), upper_cholesky_rr)


# --------------------------------------------------------------------------
# sections of the two projections

def _tangent_generator(u, udot, left: bool, tol: float):
    u = as_matrix(u)
    udot = as_matrix(udot)
    x = dagger(u) @ udot if left else udot @ dagger(u)
    return u, udot, check_su(x, tol=max(tol, 1e-8))


def section_left(u, udot, epsilon: float = 1.0, tol: float = MEMBERSHIP_TOL):
    """``(u, u') -> (g, g')`` with ``g = u F^{-1}(u^{-1} u')``, ``g' = u' F^{-1}(...)``."""
    u, udot, x = _tangent_generator(u, udot, True, tol)
    gamma = invert_F(x, epsilon)
    return u @ gamma, udot @ gamma


def section_right(u, udot, epsilon: float = 1.0, tol: float = MEMBERSHIP_TOL):
    """``(u, u') -> (g, g')`` with ``g = E^{-1}(u' u^{-1}) u``, ``g' = E^{-1}(...) u'``."""
    u, udot, x = _tangent_generator(u, udot, False, tol)
    gamma = invert_E(x, epsilon)
    return gamma @ u, gamma @ udot


# --------------------------------------------------------------------------
# trajectories

def evolve(g0, cfg: FlowConfig = FlowConfig()) -> TrajectoryRecord:
    """Integrate the equations of motion with classical RK4.

    Every step records the energy, ``|det g - 1|`` and the Frobenius drift of
    both conserved triangular factors.
    """
    g0 = check_special_linear(g0)
    n = g0.shape[0]
    eps = cfg.epsilon
    h = cfg.t_final / cfg.steps

    _, gl0 = decompose_left(g0)
    gr0, _ = decompose_right(g0)

    times = [0.0]
    points = [g0.copy()]
    energy = [free_hamiltonian(g0)]
    det_drift = [abs(np.linalg.det(g0) - 1.0)]
    gl_drift = [0.0]
    gr_drift = [0.0]

    def record(k, g):
        if cfg.renormalize:
            # in place: the integrator continues from the projected state
            g[...] = project_special_linear(g)
        # factor drift is measured without the SL check so large drift is
        # reported rather than raised
        _, gl = decompose_left(g, tol=np.inf)
        gr, _ = decompose_right(g, tol=np.inf)
        times.append(k * h)
        points.append(g.copy())
        energy.append(free_hamiltonian(g))
        det_drift.append(abs(np.linalg.det(g) - 1.0))
        gl_drift.append(float(np.linalg.norm(gl - gl0)))
        gr_drift.append(float(np.linalg.norm(gr - gr0)))

    try:
        rk4(lambda g: eqmot_rhs(g, eps), g0, cfg.t_final, cfg.steps, callback=record)
    except np.linalg.LinAlgError as exc:
        raise FlowAbort(f"trajectory left SL({n},C): {exc}") from exc

    return TrajectoryRecord(
        times=np.array(times),
        points=points,
        energy=np.array(energy),
        det_drift=np.array(det_drift),
        gammaL_drift=np.array(gl_drift),
        gammaR_drift=np.array(gr_drift),
        config=cfg,
    )


def factor_velocities(record: TrajectoryRecord, side: str = "left"):
    """Unitary factor and its central-difference velocity at interior samples.

    Returns ``(idx, u, udot)`` where ``idx`` indexes ``record.points``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if side == "left":
        us = [decompose_left(g, tol=np.inf)[0] for g in record.points]
    else:
        us = [decompose_right(g, tol=np.inf)[1] for g in record.points]
    us = np.array(us)
    t = record.times
    idx = np.arange(1, len(us) - 1)
    udot = (us[2:] - us[:-2]) / (t[2:] - t[:-2])[:, None, None]
    return idx, us[1:-1], udot
