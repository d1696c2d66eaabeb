"""T*G for G = SU(N) (SU(2) by default), right trivialized.

A point is ``(g, m)``: ``g`` in SU(N) and ``m`` in su(N) the covector
translated to the unit on the right, ``p(Y g) = <m, Y>``, with the real
Frobenius pairing ``<m, Y> = Re tr(m^dagger Y)``.  The left projection to
g* is ``m`` itself, the right projection is ``g^{-1} m g``; units are
``(e, x)``.

For ``f`` on g*:

* ``f^left(g, m) = f(m)`` generates ``g' = V g``, ``m' = [V, m]`` with
  ``V = grad f(m)``, so ``g^{-1} m g`` is conserved;
* ``f^right(g, m) = f(g^{-1} m g)`` generates ``g' = g W``, ``m' = 0`` with
  ``W = grad f(g^{-1} m g)``.

Linear ``f = <., X>`` therefore moves the base by left translation,
``g(t) = exp(tX) g(0)``.  The trivialized equations are checked for
symplecticity in canonical coordinates by :func:`symplecticity`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from ..integrate import rk4
from ..matgroup import (
    check_special_unitary,
    check_su,
    dagger,
    from_su_coords,
    matrix_exp,
    su_basis,
    su_coords,
)
from ..sample import LagrangianSample
from .checks import fd_jacobian, omega_matrix, symplectic_defect


def frob(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.sum(np.conj(a) * b)))


@dataclass
class CotangentGroupPoint:
    g: np.ndarray
    m: np.ndarray

    def __post_init__(self):
        self.g = check_special_unitary(self.g, tol=1e-8)
        self.m = check_su(self.m, tol=1e-8)

    @classmethod
    def raw(cls, g, m) -> "CotangentGroupPoint":
        """Construct without membership checks (intermediate flow states)."""
        pt = cls.__new__(cls)
        pt.g, pt.m = g, m
        return pt

    @classmethod
    def unit(cls, m) -> "CotangentGroupPoint":
        m = np.asarray(m, dtype=complex)
        return cls(np.eye(m.shape[0], dtype=complex), m)

    @property
    def left(self) -> np.ndarray:
        return self.m

    @property
    def right(self) -> np.ndarray:
        return dagger(self.g) @ self.m @ self.g


# --------------------------------------------------------------------------
# generating functions on g*

@dataclass(frozen=True)
class Linear:
    """``f(m) = <m, X>``."""

    x: np.ndarray

    def value(self, m):
        return frob(m, self.x)

    def grad(self, m):
        return np.asarray(self.x, dtype=complex)


@dataclass(frozen=True)
class Casimir:
    """``f(m) = phi(1/2 ||m||^2)``, given ``phi`` and its derivative."""

    phi: Callable[[float], float]
    dphi: Callable[[float], float]

    def value(self, m):
        return float(self.phi(0.5 * frob(m, m)))

    def grad(self, m):
        return self.dphi(0.5 * frob(m, m)) * m

    @classmethod
    def half_norm_squared(cls) -> "Casimir":
        return cls(lambda s: s, lambda s: 1.0)

    @classmethod
    def matched(cls, s0: float) -> "Casimir":
        """``phi(s) = s0 sin((s - s0)/s0)``: ``phi'(s0) = 1`` but nonlinear."""
        return cls(lambda s: s0 * np.sin((s - s0) / s0), lambda s: np.cos((s - s0) / s0))


def zero_function(n: int = 2) -> Linear:
    return Linear(np.zeros((n, n), complex))


# --------------------------------------------------------------------------
# flows

def _field(f_spec, side: str):
    if side == "left":
        def field(y):
            g, m = y[0], y[1]
            v = f_spec.grad(m)
            out = np.empty_like(y)
            out[0] = v @ g
            out[1] = v @ m - m @ v
            return out
    elif side == "right":
        def field(y):
            g, m = y[0], y[1]
            w = f_spec.grad(dagger(g) @ m @ g)
            out = np.zeros_like(y)
            out[0] = g @ w
            return out
    else:
        raise ValueError("side must be 'left' or 'right'")
    return field


def ctg_flow(f_spec, start: CotangentGroupPoint, t: float = 1.0, steps: int = 200,
             side: str = "left", *, validate: bool = True) -> CotangentGroupPoint:
    y0 = np.stack([start.g, start.m])
    y = rk4(_field(f_spec, side), y0, t, steps)
    if not validate:
        return CotangentGroupPoint.raw(y[0], y[1])
    return CotangentGroupPoint(y[0], y[1])


def ctg_generate(f_spec, fiber_grid, t: float = 1.0, steps: int = 200) -> LagrangianSample:
    """Flow the unit fiber ``{(e, m)}`` by ``X_{f^left}``."""
    fiber = [check_su(m, tol=1e-8) for m in fiber_grid]
    n = fiber[0].shape[0]
    ends = [ctg_flow(f_spec, CotangentGroupPoint.unit(m), t, steps) for m in fiber]
    res = {"energy_drift": np.array([abs(f_spec.value(e.m) - f_spec.value(m)) for e, m in zip(ends, fiber)])}
    if isinstance(f_spec, Linear):
        target = matrix_exp(t * f_spec.x)
        res["base_vs_expX"] = np.array([np.linalg.norm(e.g - target) for e in ends])
    names = [f"{k}{a}{b}" for k in ("g", "m") for a in range(n) for b in range(n)]
    return LagrangianSample(
        params=np.array([su_coords(m) for m in fiber]),
        points=np.array([[e.g, e.m] for e in ends]),
        param_names=[f"m0_{k}" for k in range(n * n - 1)],
        point_names=names,
        residuals=res,
    )


def fiber_grid(n: int = 2, count: int = 50, radius: float = 1.0, seed: int = 0) -> list[np.ndarray]:
    """Seeded points of su(n) = T*_e G, radii spread over ``(0, radius]``."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        m = from_su_coords(rng.standard_normal(n * n - 1), n)
        out.append(m * (radius * (k + 1) / count) / np.linalg.norm(m))
    return out


# --------------------------------------------------------------------------
# Casimir suite

def _regular(x: np.ndarray, tol: float = 1e-8):
    ev = np.sort(np.linalg.eigvalsh(-1j * x))
    if ev.size > 1 and np.min(np.diff(ev)) <= tol * max(1.0, np.abs(ev).max()):
        raise ValueError("sample lies outside the maximal-rank locus (e.g. the origin)")


@dataclass
class CasimirReport:
    commutation: float
    isotropy: float
    matched_differential: float
    exponential_formula: float

    def as_dict(self) -> dict[str, float]:
        return dict(vars(self))


def _dist(a: CotangentGroupPoint, b: CotangentGroupPoint) -> float:
    return float(max(np.linalg.norm(a.g - b.g), np.linalg.norm(a.m - b.m)))


def casimir_checks(f: Casimir, h: Casimir, units, starts, t: float = 1.0,
                   steps: int = 200) -> CasimirReport:
    """Numerical witnesses for the Casimir statements on T*G.

    * commutation: ``exp(t X_{f^left}) exp(t X_{h^right})`` against the
      opposite order, at the general points ``starts``;
    * isotropy: from each unit ``(e, x)`` the ``f``-flow endpoint has both
      projections equal to ``x``;
    * matched differential: ``f`` and the Casimir with ``phi'`` matched to
      ``f`` at ``x`` give the same endpoint from ``(e, x)``;
    * exponential formula: that endpoint equals ``(exp(grad f(x)), x)``.
    """
    comm = 0.0
    for s in starts:
        _regular(s.m)
        ab = ctg_flow(f, ctg_flow(h, s, t, steps, "right"), t, steps, "left")
        ba = ctg_flow(h, ctg_flow(f, s, t, steps, "left"), t, steps, "right")
        comm = max(comm, _dist(ab, ba))

    iso = matched = expo = 0.0
    for x in units:
        x = check_su(x, tol=1e-8)
        _regular(x)
        start = CotangentGroupPoint.unit(x)
        end = ctg_flow(f, start, t, steps)
        iso = max(iso, np.linalg.norm(end.left - x), np.linalg.norm(end.right - x))
        s0 = 0.5 * frob(x, x)
        fprime = f.dphi(s0)
        twin = Casimir(lambda s, s0=s0, a=fprime: a * s0 * np.sin((s - s0) / s0),
                       lambda s, s0=s0, a=fprime: a * np.cos((s - s0) / s0))
        matched = max(matched, _dist(end, ctg_flow(twin, start, t, steps)))
        closed = CotangentGroupPoint(matrix_exp(t * f.grad(x)), x)
        expo = max(expo, _dist(end, closed))
    return CasimirReport(float(comm), float(iso), float(matched), float(expo))


# --------------------------------------------------------------------------
# symplecticity in canonical coordinates

def _chart_frames(theta: np.ndarray, n: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """``exp(Theta)`` and the right-trivialized partials ``d exp / d theta_a exp(-Theta)``."""
    big = from_su_coords(theta, n)
    basis = su_basis(n)
    e, frames = None, []
    for s in basis:
        e, d = scipy.linalg.expm_frechet(big, s)
        frames.append(d @ dagger(e))
    if e is None:
        e = np.eye(n, dtype=complex)
    return e, frames


def to_canonical(pt: CotangentGroupPoint, g_ref: np.ndarray) -> np.ndarray:
    """``(theta, p)`` with ``g = exp(Theta) g_ref`` and ``p_a = <m, D_a>``.

    Only valid near ``g_ref``; ``theta`` comes from the principal log.
    """
    n = pt.g.shape[0]
    rel = pt.g @ dagger(g_ref)
    theta = su_coords(0.5 * (scipy.linalg.logm(rel) - dagger(scipy.linalg.logm(rel))))
    _, frames = _chart_frames(theta, n)
    p = np.array([frob(pt.m, d) for d in frames])
    return np.concatenate([theta, p])


def from_canonical(z: np.ndarray, g_ref: np.ndarray) -> CotangentGroupPoint:
    n = g_ref.shape[0]
    dim = n * n - 1
    theta, p = z[:dim], z[dim:]
    e, frames = _chart_frames(theta, n)
    basis = su_basis(n)
    a = np.array([[frob(s, d) for s in basis] for d in frames])
    coeff = np.linalg.solve(a, p)
    return CotangentGroupPoint.raw(e @ g_ref, from_su_coords(coeff, n))


def symplecticity(f_spec, start: CotangentGroupPoint, t: float = 1.0, steps: int = 200,
                  side: str = "left") -> float:
    """``||J^T Omega J - Omega||`` of the time-``t`` map in canonical charts."""
    n = start.g.shape[0]
    end = ctg_flow(f_spec, start, t, steps, side)
    g_in, g_out = start.g, end.g

    def mapped(z):
        pt = from_canonical(z, g_in)
        y = rk4(_field(f_spec, side), np.stack([pt.g, pt.m]), t, steps)
        return to_canonical(CotangentGroupPoint.raw(y[0], y[1]), g_out)

    z0 = to_canonical(start, g_in)
    jac = fd_jacobian(mapped, z0)
    return symplectic_defect(jac, omega_matrix(n * n - 1))
