"""The one-fiber Legendre map on SB(N).

A bi-invariant form on su(N), ``l(W1, W2) = -c tr(W1 W2)``, read as a
contravariant metric on SB(N) (su(N) is the dual of sb(N) under
``Im tr``) and right-translated, gives a kinetic Hamiltonian on T*SB(N).
``phi(eta0)`` is the time-1 point of its geodesic through the identity with
initial momentum ``eta0``.

Two independent integrators are provided:

* :func:`geodesic_flow` -- reduced (Euler-Arnold) form in the right
  trivialization.  Momentum ``M`` (su representative), velocity
  ``V = metric_sharp(M)`` in sb, and

      gamma' = V gamma,     M' = sign * su_part([V, M]).

* :func:`oracle_flow` -- canonical equations ``q' = dK/dp``,
  ``p' = -dK/dq`` in explicit real coordinates on SB(N), with finite
  difference ``q``-gradients.  It knows nothing about ``ad*`` or its sign.

``GEODESIC_SIGN`` is the sign in the momentum equation that makes the two
agree; ``tests/test_legendre_sb.py`` keeps the check that selects it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .integrate import FlowAbort, rk4, rk4_step
from .matgroup import (
    as_matrix,
    check_su,
    from_sb_coords,
    pairing_matrix,
    sb_coords,
    su_basis,
    su_coords,
    su_part,
)
from .sample import LagrangianSample

GEODESIC_SIGN = +1
DEFAULT_STEPS = 1000


@dataclass(frozen=True)
class MetricData:
    c: float = 1.0
    n: int = 2

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"metric scale must be positive, got {self.c}")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def __call__(self, w1: np.ndarray, w2: np.ndarray) -> float:
        return -self.c * float(np.real(np.trace(w1 @ w2)))


@dataclass
class GeodesicState:
    gamma: np.ndarray
    mu: np.ndarray
    metric: MetricData

    @property
    def energy(self) -> float:
        return 0.5 * self.metric(self.mu, self.mu)


@lru_cache(maxsize=None)
def _gram(n: int) -> np.ndarray:
    su = su_basis(n)
    return np.array([[-float(np.real(np.trace(a @ b))) for b in su] for a in su])


@lru_cache(maxsize=None)
def _sharp_matrix(n: int) -> np.ndarray:
    # V coords v solve  P v = G m ; P[a, k] = Im tr(S_a W_k), G = gram of l
    return np.linalg.solve(pairing_matrix(n), _gram(n))


def metric_sharp(mu, metric: MetricData) -> np.ndarray:
    """Raise a momentum in su(N) to the velocity ``V`` in sb(N).

    ``V`` is the unique sb element with ``Im tr(W V) = l(mu, W)`` for every
    ``W`` in su(N), found by solving the real ``(N^2-1)``-dimensional system
    in the fixed bases of :mod:`grouplegendre.matgroup`.
    """
    mu = np.asarray(mu, dtype=complex)
    n = mu.shape[-1]
    m = su_coords(mu)
    v = metric.c * (m @ _sharp_matrix(n).T)
    return from_sb_coords(v, n)


def _euler_arnold_field(metric: MetricData, sign: int):
    def field(y):
        gamma, mu = y[0], y[1]
        v = metric_sharp(mu, metric)
        out = np.empty_like(y)
        out[0] = v @ gamma
        out[1] = sign * su_part(v @ mu - mu @ v)
        return out

    return field


def geodesic_flow(eta0, metric: MetricData, T: float = 1.0, steps: int = DEFAULT_STEPS,
                  *, sign: int = GEODESIC_SIGN, trajectory: bool = False):
    """Integrate the reduced geodesic equations from ``(I, eta0)`` to time ``T``.

    With ``trajectory=True`` a list of :class:`GeodesicState` at every step
    (including ``t = 0``) is returned instead of the endpoint.
    """
    eta0 = check_su(eta0, tol=1e-8)
    n = eta0.shape[0]
    if metric.n != n:
        metric = MetricData(metric.c, n)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    y0 = np.stack([np.eye(n, dtype=complex), eta0])
    field = _euler_arnold_field(metric, sign)
    states = [GeodesicState(y0[0].copy(), y0[1].copy(), metric)] if trajectory else None

    def keep(_k, y):
        # re-zero what rounding may leave below the diagonal
        y[0] = np.triu(y[0])
        y[0][np.diag_indices(n)] = y[0].diagonal().real
        if states is not None:
            states.append(GeodesicState(y[0].copy(), y[1].copy(), metric))

    y = rk4(field, y0, T, steps, callback=keep)
    if np.any(y[0].diagonal().real <= 0):
        raise FlowAbort("geodesic left SB(N): non-positive diagonal")
    if trajectory:
        return states
    return GeodesicState(y[0], y[1], metric)


def phi(eta0, metric: MetricData | None = None, steps: int = DEFAULT_STEPS, *,
        oracle: bool = False) -> np.ndarray:
    """``Phi(eta0) = gamma(1)``, the time-1 point of the geodesic."""
    eta0 = as_matrix(eta0)
    metric = metric or MetricData(1.0, eta0.shape[0])
    if oracle:
        return oracle_flow(eta0, metric, 1.0, steps)
    return geodesic_flow(eta0, metric, 1.0, steps).gamma


# --------------------------------------------------------------------------
# coordinate oracle

def sb_from_coords(q: np.ndarray, n: int) -> np.ndarray:
    """SB(n) element from ``q = (log d_1..log d_{n-1}, Re/Im of strict upper)``.

    Works on a leading batch axis.
    """
    q = np.asarray(q, dtype=float)
    batch = q.shape[:-1]
    s = q[..., : n - 1]
    up = q[..., n - 1:].reshape(batch + (-1, 2))
    g = np.zeros(batch + (n, n), complex)
    logd = np.concatenate([s, -np.sum(s, axis=-1, keepdims=True)], axis=-1)
    g[..., np.arange(n), np.arange(n)] = np.exp(logd)
    iu = np.triu_indices(n, 1)
    g[..., iu[0], iu[1]] = up[..., 0] + 1j * up[..., 1]
    return g


def coords_from_sb(gamma: np.ndarray) -> np.ndarray:
    n = gamma.shape[-1]
    d = np.log(np.diagonal(gamma, axis1=-2, axis2=-1).real[..., : n - 1])
    iu = np.triu_indices(n, 1)
    up = gamma[..., iu[0], iu[1]]
    off = np.stack([up.real, up.imag], axis=-1).reshape(up.shape[:-1] + (-1,))
    return np.concatenate([d, off], axis=-1)


def _coord_jacobian(q: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(d gamma / d q_j, gamma)``; the first has shape ``batch + (dim, n, n)``."""
    q = np.asarray(q, dtype=float)
    batch = q.shape[:-1]
    dim = n * n - 1
    g = sb_from_coords(q, n)
    jac = np.zeros(batch + (dim, n, n), complex)
    d = np.diagonal(g, axis1=-2, axis2=-1)
    for k in range(n - 1):
        jac[..., k, k, k] = d[..., k]
        jac[..., k, n - 1, n - 1] = -d[..., n - 1]
    iu = np.triu_indices(n, 1)
    for idx, (a, b) in enumerate(zip(*iu)):
        jac[..., n - 1 + 2 * idx, a, b] = 1.0
        jac[..., n - 1 + 2 * idx + 1, a, b] = 1j
    return jac, g


def _kinetic(q: np.ndarray, p: np.ndarray, metric: MetricData) -> np.ndarray:
    """Right-invariant kinetic energy ``K(q, p) = 1/2 l(M, M)`` in coordinates.

    ``A[k, j]`` are the sb-coordinates of ``(d gamma/d q_j) gamma^{-1}``; the
    right-trivialized covector is ``mu = A^{-T} p`` and its su representative
    ``m`` solves ``P^T m = mu``.
    """
    n = metric.n
    jac, g = _coord_jacobian(q, n)
    ginv = np.linalg.inv(g)
    right = jac @ ginv[..., None, :, :]
    a = np.swapaxes(sb_coords(right), -1, -2)
    mu = np.linalg.solve(np.swapaxes(a, -1, -2), p[..., None])[..., 0]
    m = np.linalg.solve(pairing_matrix(n).T, mu[..., None])[..., 0]
    return 0.5 * metric.c * np.einsum("...a,ab,...b->...", m, _gram(n), m)


def oracle_hamiltonian(q, p, metric: MetricData) -> float:
    return float(_kinetic(np.asarray(q, float), np.asarray(p, float), metric))


def initial_momentum(eta0: np.ndarray, n: int) -> np.ndarray:
    """Canonical momentum at ``q = 0`` for the covector ``Im tr(eta0 .)``."""
    jac, _ = _coord_jacobian(np.zeros(n * n - 1), n)
    return np.array([float(np.sum(eta0 * j.T).imag) for j in jac])


def _oracle_field(metric: MetricData, fd_step: float):
    n = metric.n
    dim = n * n - 1
    eye = np.eye(dim)

    def field(y):
        q, p = y[:dim], y[dim:]
        hq = fd_step * np.maximum(1.0, np.abs(q))
        hp = fd_step * np.maximum(1.0, np.abs(p))
        # all central-difference probes in one batch
        qs = np.concatenate([q + hq[:, None] * eye, q - hq[:, None] * eye,
                             np.repeat(q[None], 2 * dim, axis=0)])
        ps = np.concatenate([np.repeat(p[None], 2 * dim, axis=0),
                             p + hp[:, None] * eye, p - hp[:, None] * eye])
        k = _kinetic(qs, ps, metric)
        dkdq = (k[:dim] - k[dim:2 * dim]) / (2 * hq)
        dkdp = (k[2 * dim:3 * dim] - k[3 * dim:]) / (2 * hp)
        return np.concatenate([dkdp, -dkdq])

    return field


def oracle_flow(eta0, metric: MetricData, T: float = 1.0, steps: int = 200,
                fd_step: float = 1e-5, *, return_state: bool = False):
    """Geodesic endpoint from the canonical equations in SB(N) coordinates.

    Slow and convention-free: the only inputs are the coordinate chart, the
    right trivialization of covectors and the ``Im tr`` identification of
    (sb)* with su.  ``K`` is quadratic in ``p`` but both gradients are taken
    by central differences so no closed-form derivative enters.
    """
    eta0 = check_su(eta0, tol=1e-8)
    n = eta0.shape[0]
    if metric.n != n:
        metric = MetricData(metric.c, n)
    dim = n * n - 1
    y0 = np.concatenate([np.zeros(dim), initial_momentum(eta0, n)])
    y = rk4(_oracle_field(metric, fd_step), y0, T, steps)
    gamma = sb_from_coords(y[:dim], n)
    if return_state:
        return gamma, y[:dim], y[dim:]
    return gamma


def oracle_energy_drift(eta0, metric: MetricData, T: float, steps: int,
                        fd_step: float = 1e-5) -> float:
    eta0 = check_su(eta0, tol=1e-8)
    n = eta0.shape[0]
    metric = MetricData(metric.c, n)
    dim = n * n - 1
    y = np.concatenate([np.zeros(dim), initial_momentum(eta0, n)])
    field = _oracle_field(metric, fd_step)
    e0 = oracle_hamiltonian(y[:dim], y[dim:], metric)
    worst = 0.0
    h = T / steps
    for _ in range(steps):
        y = rk4_step(field, y, h)
        worst = max(worst, abs(oracle_hamiltonian(y[:dim], y[dim:], metric) - e0))
    return worst


# --------------------------------------------------------------------------
# Lagrangian submanifold generated by the free Lagrangian

def lagrangian_sample(eta0_grid, u_grid, metric: MetricData,
                      steps: int = DEFAULT_STEPS) -> LagrangianSample:
    """Sample ``xi = Phi(eta0) eta0 u`` on the product of the two grids.

    Each point stores the base ``g = Phi(eta0) u`` and the covector matrix
    ``K`` with ``xi(Y) = Im tr(K Y)`` for ``Y`` tangent at ``g``; for the
    product ``gamma eta0 u`` that is ``u^{-1} eta0 gamma^{-1}``.  ``Phi`` is
    evaluated once per ``eta0``; the ``u`` dependence is a right translation.
    Parameters are the su coordinates of ``eta0`` and the index into
    ``u_grid``.
    """
    u_grid = [as_matrix(u) for u in u_grid]
    n = metric.n
    params, points = [], []
    for eta0 in eta0_grid:
        eta0 = as_matrix(eta0)
        gamma = phi(eta0, metric, steps)
        ginv = np.linalg.inv(gamma)
        for j, u in enumerate(u_grid):
            params.append(np.concatenate([su_coords(eta0), [j]]))
            points.append([gamma @ u, np.conj(u.T) @ eta0 @ ginv])
    names = [f"eta{k}" for k in range(n * n - 1)] + ["u_index"]
    entries = [f"{m}{a}{b}" for m in ("g", "K") for a in range(n) for b in range(n)]
    return LagrangianSample(np.array(params), np.array(points), names, entries)
