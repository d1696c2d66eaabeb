"""Dense complex matrix-group kernel for SL(N,C) = SU(N) . SB(N).

Matrices are plain ``numpy`` complex arrays.  Membership of SU(N), SB(N)
and SL(N,C) is certified by the ``check_*`` helpers, which raise
:class:`MembershipError`; the ``*_residual`` helpers return the raw numbers.

Covectors are represented by matrices through the imaginary-trace form
``<W, Z> = Im tr(W Z)``.  Under this form su(N) and sb(N) are isotropic and
dual to each other, which is the Manin-triple structure of sl(N,C).
"""

from __future__ import annotations

import json
from functools import lru_cache

import numpy as np
import scipy.linalg

MEMBERSHIP_TOL = 1e-10


class MembershipError(ValueError):
    """A matrix failed a group or algebra membership test."""


class DecompositionError(ArithmeticError):
    """The input is numerically singular, hence outside SL(N,C)."""


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _rel(x: float, scale: float) -> float:
    return x / max(1.0, scale)


# --------------------------------------------------------------------------
# membership

def sl_residual(m: np.ndarray) -> float:
    return float(abs(np.linalg.det(m) - 1.0))


def su_group_residual(m: np.ndarray) -> float:
    n = m.shape[0]
    unitarity = np.linalg.norm(dagger(m) @ m - np.eye(n))
    return float(max(unitarity, sl_residual(m)))


def sb_group_residual(m: np.ndarray) -> float:
    """Largest violation of the SB(N) invariants.

    Strictly-lower entries must be *exactly* zero, so any nonzero entry there
    is reported as ``inf``.  A non-positive diagonal entry is reported the
    same way.
    """
    if np.any(np.tril(m, -1) != 0):
        return float("inf")
    d = np.diag(m)
    if np.any(d.imag != 0) or np.any(d.real <= 0):
        return float("inf")
    return sl_residual(m)


def su_algebra_residual(m: np.ndarray) -> float:
    scale = float(np.linalg.norm(m))
    return _rel(float(max(np.linalg.norm(m + dagger(m)), abs(np.trace(m)))), scale)


def sb_algebra_residual(m: np.ndarray) -> float:
    scale = float(np.linalg.norm(m))
    lower = float(np.linalg.norm(np.tril(m, -1)))
    diag_im = float(np.linalg.norm(np.diag(m).imag))
    return _rel(max(lower, diag_im, abs(np.trace(m))), scale)


def _check(name: str, residual: float, tol: float):
    if not residual <= tol:
        raise MembershipError(f"{name} membership residual {residual:.3e} exceeds {tol:.1e}")


def check_special_linear(m, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    m = as_matrix(m)
    _check("SL(N,C)", sl_residual(m), tol)
    return m


def check_special_unitary(m, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    m = as_matrix(m)
    _check("SU(N)", su_group_residual(m), tol)
    return m


def check_triangular_positive(m, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    m = as_matrix(m)
    _check("SB(N)", sb_group_residual(m), tol)
    return m


def check_su(m, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    m = as_matrix(m)
    _check("su(N)", su_algebra_residual(m), tol)
    return m


def check_sb(m, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    m = as_matrix(m)
    _check("sb(N)", sb_algebra_residual(m), tol)
    return m


def is_special_unitary(m, tol: float = MEMBERSHIP_TOL) -> bool:
    return su_group_residual(as_matrix(m)) <= tol


def is_triangular_positive(m, tol: float = MEMBERSHIP_TOL) -> bool:
    return sb_group_residual(as_matrix(m)) <= tol


# --------------------------------------------------------------------------
# decompositions

def _condition_guard(g: np.ndarray):
    cond = np.linalg.cond(g)
    if not np.isfinite(cond) or cond > 1e14:
        raise DecompositionError(f"matrix is numerically singular (cond = {cond:.3e})")


def decompose_left(g, tol: float = MEMBERSHIP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Factor ``g = u @ gamma`` with ``u`` in SU(N) and ``gamma`` in SB(N).

    Column-wise orthonormalization (QR) followed by a diagonal phase
    correction that makes the diagonal of ``gamma`` real and positive; with
    that normalization the pair is unique.
    """
    g = check_special_linear(g, tol)
    _condition_guard(g)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    phase = d / np.abs(d)
    u = q * phase
    gamma = np.triu(np.conj(phase)[:, None] * r)
    gamma[np.diag_indices_from(gamma)] = np.abs(d)
    return u, gamma


def decompose_right(g, tol: float = MEMBERSHIP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Factor ``g = gamma @ u`` with ``gamma`` in SB(N) and ``u`` in SU(N).

    Row-wise orthonormalization (RQ) with the same phase normalization as
    :func:`decompose_left`.
    """
    g = check_special_linear(g, tol)
    _condition_guard(g)
    r, q = scipy.linalg.rq(g)
    d = np.diag(r)
    phase = d / np.abs(d)
    u = phase[:, None] * q
    gamma = np.triu(r * np.conj(phase)[None, :])
    gamma[np.diag_indices_from(gamma)] = np.abs(d)
    return gamma, u


# --------------------------------------------------------------------------
# Lie algebra splitting and duality

def iwasawa_split(z, tol: float = MEMBERSHIP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Split a traceless ``z`` as ``X + A`` with ``X`` in su(N), ``A`` in sb(N)."""
    z = as_matrix(z)
    if abs(np.trace(z)) > tol * max(1.0, float(np.linalg.norm(z))):
        raise MembershipError(f"iwasawa_split needs a traceless matrix, tr = {np.trace(z):.3e}")
    low = np.tril(z, -1)
    x = low - dagger(low) + np.diag(1j * np.diag(z).imag)
    return x, z - x


def su_part(z: np.ndarray) -> np.ndarray:
    """su(N) component of the splitting, without the trace check."""
    n = z.shape[-1]
    lo, di = _lower_mask(n), np.eye(n, dtype=bool)
    low = np.where(lo, z, 0)
    return low - dagger(low) + np.where(di, 1j * z.imag, 0)


def sb_part(z: np.ndarray) -> np.ndarray:
    return z - su_part(z)


def pairing(w, z) -> float:
    """The invariant form ``Im tr(W Z)`` on sl(N,C)."""
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if w.shape != z.shape:
        raise ValueError(f"size mismatch: {w.shape} vs {z.shape}")
    # tr(W Z) without forming the product
    return float(np.sum(w * z.T).imag)


def dual_identify(w) -> np.ndarray:
    """Identify a covector on su(N) with its su(N) representative.

    With covectors written through the imaginary-trace form this is the
    identity on matrices; it is kept as a named step so the convention is
    visible at every call site that relies on it.
    """
    return np.array(as_matrix(w), copy=True)


@lru_cache(maxsize=None)
def _lower_mask(n: int) -> np.ndarray:
    m = np.tril(np.ones((n, n), dtype=bool), -1)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def _upper_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


@lru_cache(maxsize=None)
def su_basis(n: int) -> tuple[np.ndarray, ...]:
    """Real basis of su(n): ``i(E_kk - E_nn)``, ``E_jk - E_kj``, ``i(E_jk + E_kj)``."""
    out = []
    for k in range(n - 1):
        m = np.zeros((n, n), complex)
        m[k, k], m[n - 1, n - 1] = 1j, -1j
        out.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), complex)
            a[j, k], a[k, j] = 1, -1
            s = np.zeros((n, n), complex)
            s[j, k] = s[k, j] = 1j
            out += [a, s]
    for m in out:
        m.setflags(write=False)
    return tuple(out)


@lru_cache(maxsize=None)
def sb_basis(n: int) -> tuple[np.ndarray, ...]:
    """Real basis of sb(n): ``E_kk - E_nn``, ``E_jk``, ``i E_jk`` (j < k)."""
    out = []
    for k in range(n - 1):
        m = np.zeros((n, n), complex)
        m[k, k], m[n - 1, n - 1] = 1, -1
        out.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), complex)
            a[j, k] = 1
            out += [a, 1j * a]
    for m in out:
        m.setflags(write=False)
    return tuple(out)


def sb_coords(a: np.ndarray) -> np.ndarray:
    """Coordinates of an sb(n) element in :func:`sb_basis` order."""
    n = a.shape[-1]
    d = np.diagonal(a, axis1=-2, axis2=-1).real[..., : n - 1]
    iu = _upper_index(n)
    up = a[..., iu[0], iu[1]]
    off = np.empty(up.shape[:-1] + (2 * up.shape[-1],))
    off[..., 0::2], off[..., 1::2] = up.real, up.imag
    return np.concatenate([d, off], axis=-1)


def su_coords(x: np.ndarray) -> np.ndarray:
    """Coordinates of an su(n) element in :func:`su_basis` order."""
    n = x.shape[-1]
    d = np.diagonal(x, axis1=-2, axis2=-1).imag[..., : n - 1]
    iu = _upper_index(n)
    up = x[..., iu[0], iu[1]]
    off = np.empty(up.shape[:-1] + (2 * up.shape[-1],))
    off[..., 0::2], off[..., 1::2] = up.real, up.imag
    return np.concatenate([d, off], axis=-1)


@lru_cache(maxsize=None)
def _stacked(kind: str, n: int) -> np.ndarray:
    b = np.array(su_basis(n) if kind == "su" else sb_basis(n))
    b.setflags(write=False)
    return b


def from_su_coords(c: np.ndarray, n: int) -> np.ndarray:
    return np.tensordot(np.asarray(c, float), _stacked("su", n), axes=(-1, 0))


def from_sb_coords(c: np.ndarray, n: int) -> np.ndarray:
    return np.tensordot(np.asarray(c, float), _stacked("sb", n), axes=(-1, 0))


@lru_cache(maxsize=None)
def pairing_matrix(n: int) -> np.ndarray:
    """``P[a, b] = Im tr(S_a W_b)`` for the su basis ``S`` and sb basis ``W``."""
    su, sb = su_basis(n), sb_basis(n)
    p = np.array([[pairing(s, w) for w in sb] for s in su])
    p.setflags(write=False)
    return p


# --------------------------------------------------------------------------
# exponential and re-projection

def matrix_exp(z) -> np.ndarray:
    return scipy.linalg.expm(as_matrix(z))


def project_special_linear(g: np.ndarray) -> np.ndarray:
    """Rescale ``g`` so that ``det g = 1`` (principal N-th root)."""
    n = g.shape[0]
    return g / np.linalg.det(g) ** (1.0 / n)


def project_special_unitary(u: np.ndarray) -> np.ndarray:
    """Nearest unitary (polar factor), then fix the determinant phase."""
    w, _ = scipy.linalg.polar(u)
    return project_special_linear(w)


def project_triangular_positive(gamma: np.ndarray) -> np.ndarray:
    """Drop the lower part, take the real diagonal and rescale it to det 1."""
    n = gamma.shape[0]
    out = np.triu(gamma).astype(complex)
    d = np.abs(np.diag(out).real)
    out[np.diag_indices(n)] = d / np.prod(d) ** (1.0 / n)
    return out


# --------------------------------------------------------------------------
# random sampling

def random_sl(n: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Ginibre matrix rescaled onto det = 1."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return project_special_linear(z)


def random_su(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = decompose_left(project_special_linear(z))
    return q


def random_su_algebra(n: int, rng: np.random.Generator, norm: float | None = None) -> np.ndarray:
    x = from_su_coords(rng.standard_normal(n * n - 1), n)
    if norm is not None:
        x *= norm / np.linalg.norm(x)
    return x


def random_sb_algebra(n: int, rng: np.random.Generator) -> np.ndarray:
    return from_sb_coords(rng.standard_normal(n * n - 1), n)


def random_sb(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random SB(N) element ``exp(scale * A)`` with standard-normal sb coordinates."""
    a = random_sb_algebra(n, rng)
    return project_triangular_positive(np.triu(matrix_exp(scale * a)))


# --------------------------------------------------------------------------
# JSON wire format: {"n": int, "re": [[...]], "im": [[...]]}

def matrix_to_dict(m) -> dict:
    m = as_matrix(m)
    return {"n": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_dict(d: dict) -> np.ndarray:
    try:
        n = int(d["n"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros((n, n))), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise ValueError(f"matrix object shape does not match n = {n}")
    return as_matrix(re + 1j * im)


def matrix_to_json(m) -> str:
    return json.dumps(matrix_to_dict(m))


def matrix_from_json(s: str) -> np.ndarray:
    return matrix_from_dict(json.loads(s))
