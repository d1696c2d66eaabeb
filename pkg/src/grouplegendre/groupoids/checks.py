"""Finite-difference Jacobians and symplectic/isotropy defects."""

from __future__ import annotations

import numpy as np

FD_STEP = 1e-5


def poisson_matrix(n: int) -> np.ndarray:
    """``Pi`` with ``y' = Pi grad F`` for ``{q^j, p_k} = delta^j_k``.

    Coordinates ``y = (q, p)``; gives ``q' = -dF/dp`` and ``p' = dF/dq``,
    i.e. ``X_F psi = {F, psi}``.
    """
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def omega_matrix(n: int) -> np.ndarray:
    """Symplectic matrix ``Pi^{-1}``: the form ``sum dq^j ^ dp_j``."""
    return np.linalg.inv(poisson_matrix(n))


def fd_jacobian(fun, y, h: float = FD_STEP) -> np.ndarray:
    """Central-difference Jacobian of a map ``R^k -> R^m`` with relative steps."""
    y = np.asarray(y, dtype=float)
    steps = h * np.maximum(1.0, np.abs(y))
    cols = []
    for j in range(y.size):
        e = np.zeros_like(y)
        e[j] = steps[j]
        cols.append((np.asarray(fun(y + e)) - np.asarray(fun(y - e))) / (2 * steps[j]))
    return np.stack(cols, axis=-1)


def symplectic_defect(jac: np.ndarray, omega: np.ndarray) -> float:
    return float(np.linalg.norm(jac.T @ omega @ jac - omega))


def isotropy_defect(tangent: np.ndarray, omega: np.ndarray) -> float:
    """``||T^T Omega T||`` for tangent vectors in the columns of ``T``."""
    return float(np.linalg.norm(tangent.T @ omega @ tangent))
