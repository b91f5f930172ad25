"""Haar-random unitaries, submatrix extraction, and contraction embedding."""

from typing import Iterable

import numpy as np
from scipy.linalg import qr

from .errors import DimensionError, SingularInputError

UNITARITY_TOL = 1e-12


def _rng(seed) -> np.random.Generator:
    # Philox is counter-based and splittable; fixed seed -> fixed stream on
    # every platform. Any integer seed is folded into 64 bits.
    return np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF))


def ginibre(m: int, n: int, seed) -> np.ndarray:
    """m x n matrix of i.i.d. standard complex normal entries (E|z|^2 = 1)."""
    rng = _rng(seed)
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2.0)


def haar_unitary(m: int, seed) -> np.ndarray:
    """Haar-distributed m x m unitary, deterministic for a fixed seed.

    A complex Ginibre matrix is QR-factorised and the residual phase freedom
    is fixed by making the triangular factor's diagonal real positive; the
    resulting Q is exactly Haar-distributed.
    """
    if m < 1:
        raise DimensionError(f"unitary size must be >= 1, got {m}")
    z = ginibre(m, m, seed)
    q, r = qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return q


def unitarity_defect(u: np.ndarray) -> float:
    """Max entry-wise deviation of U†U from the identity."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1]))))


def _check_index_set(ports: Iterable[int], bound: int, label: str) -> tuple:
    idx = tuple(int(p) for p in ports)
    if len(set(idx)) != len(idx):
        raise IndexError(f"duplicate {label} index in {idx}")
    for p in idx:
        if p < 0 or p >= bound:
            raise IndexError(f"{label} index {p} out of range [0, {bound})")
    return tuple(sorted(idx))


def submatrix(u: np.ndarray, rows: Iterable[int], cols: Iterable[int]) -> np.ndarray:
    """Square submatrix [U_{d,s}] with rows/cols ordered by ascending index."""
    u = np.asarray(u)
    d = _check_index_set(rows, u.shape[0], "row")
    s = _check_index_set(cols, u.shape[1], "column")
    if len(d) != len(s):
        raise DimensionError(
            f"row and column sets must have equal size, got {len(d)} and {len(s)}"
        )
    return u[np.ix_(d, s)]


def spectral_norm(x: np.ndarray, rel_tol: float = 1e-10, max_iter: int = 50000) -> float:
    """Largest singular value of x, by power iteration on x†x.

    Iterates until the eigen-residual ||Hv - lam v|| drops below
    rel_tol * lam, which bounds the distance from lam to a true eigenvalue
    of H = x†x by the same amount. Raises SingularInputError for the zero
    matrix.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2:
        raise DimensionError("spectral_norm expects a matrix")
    if not np.any(x):
        raise SingularInputError("spectral norm of the zero matrix")
    h = x.conj().T @ x
    n = h.shape[0]
    # Deterministic start with all components populated; a random direction
    # avoids accidental orthogonality to the top eigenvector.
    v = _rng(0x5EED).standard_normal(n) + 1j * _rng(0x5EED + 1).standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = h @ v
        lam = float(np.real(v.conj() @ w))
        if np.linalg.norm(w - lam * v) <= rel_tol * abs(lam):
            break
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v landed in the kernel; restart from a shifted direction
            v = np.ones(n, dtype=np.complex128) / np.sqrt(n)
            continue
        v = w / nw
    return float(np.sqrt(max(lam, 0.0)))


def embed_scaled(x: np.ndarray, m: int, seed) -> tuple[np.ndarray, float]:
    """Embed a scaled copy of x as the top-left block of an m x m unitary.

    Returns (U, gamma) with gamma = 1/||x|| (spectral norm) and
    U[:N, :N] == gamma * x. The contraction gamma*x is completed to a 2N x 2N
    unitary with defect blocks sqrt(I - B†B), sqrt(I - BB†), padded to size m,
    and the rows/columns outside the protected block are mixed by seeded Haar
    unitaries so the completion is randomized but reproducible.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionError(f"embed_scaled expects a square matrix, got {x.shape}")
    n = x.shape[0]
    if m < 2 * n:
        raise DimensionError(f"embedding size must satisfy m >= 2N = {2 * n}, got {m}")
    gamma = 1.0 / spectral_norm(x, rel_tol=1e-13)
    b = gamma * x
    # Both defect blocks come from the one SVD of b, so the off-diagonal
    # cancellation in V†V is exact for any singular values in [0, 1]; two
    # independent matrix square roots would leave O(sqrt(eps)) residue in the
    # direction of the unit singular value.
    left, sv, right_h = np.linalg.svd(b)
    defect_diag = np.sqrt(1.0 - np.clip(sv, 0.0, 1.0) ** 2)
    defect_c = (right_h.conj().T * defect_diag) @ right_h
    defect_r = (left * defect_diag) @ left.conj().T
    v = np.block([[b, defect_r], [defect_c, -b.conj().T]])
    u = np.eye(m, dtype=np.complex128)
    u[: 2 * n, : 2 * n] = v
    # Mix everything outside the first N rows/columns; the protected block is
    # untouched by construction.
    k = m - n
    left = haar_unitary(k, seed)
    right = haar_unitary(k, (int(seed) ^ 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)
    u[n:, :] = left @ u[n:, :]
    u[:, n:] = u[:, n:] @ right
    return u, float(gamma)
