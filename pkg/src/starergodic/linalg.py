"""Dense complex linear algebra kernel.

Everything here works on plain ``numpy.complex128`` arrays.  Eigenpairs of
Hermitian matrices come from a cyclic two-sided Jacobi method, singular values
and null spaces from a one-sided (Hestenes) Jacobi method.  Both use a fixed
row-by-row sweep order, so identical input gives bit-identical output.

Kernel tolerances are always relative to the largest singular value.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import PreconditionError

_EPS = np.finfo(np.float64).eps
MAX_SWEEPS = 60


def as_complex_matrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-d complex128 array (a copy when converted)."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2:
        raise PreconditionError(f"{name} must be 2-dimensional, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise PreconditionError(f"{name} has non-finite entries")
    return M


def dagger(M: np.ndarray) -> np.ndarray:
    return np.conj(M).T


@njit(cache=True)
def _jacobi_hermitian(A, V, max_sweeps):
    n = A.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += abs(A[i, j]) ** 2
    scale = np.sqrt(scale)
    eps = 2.220446049250313e-16
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += abs(A[i, j]) ** 2
        off = np.sqrt(off)
        if off <= eps * scale or off == 0.0:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r == 0.0 or r <= 1e-3 * eps * scale:
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    continue
                e = apq / r
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ce = np.conj(e)
                # columns: A <- A W
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * ce * akq
                    A[k, q] = s * akp + c * ce * akq
                # rows: A <- W^H A
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * e * aqk
                    A[q, k] = s * apk + c * e * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * ce * vkq
                    V[k, q] = s * vkp + c * ce * vkq
    return -1


@njit(cache=True)
def _jacobi_one_sided(A, V, max_sweeps):
    m = A.shape[0]
    n = A.shape[1]
    eps = 2.220446049250313e-16
    fro2 = 0.0
    for i in range(m):
        for j in range(n):
            fro2 += A[i, j].real ** 2 + A[i, j].imag ** 2
    # columns below eps * ||M||_F are numerically zero; rotating them only churns round-off.
    # Pairs count as orthogonal at m * eps since inner-product round-off grows with m.
    tiny = eps * eps * fro2
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0 + 0.0j
                for k in range(m):
                    alpha += A[k, p].real ** 2 + A[k, p].imag ** 2
                    beta += A[k, q].real ** 2 + A[k, q].imag ** 2
                    gamma += np.conj(A[k, p]) * A[k, q]
                r = abs(gamma)
                if r == 0.0 or r <= m * eps * np.sqrt(alpha * beta):
                    continue
                if alpha <= tiny or beta <= tiny:
                    continue
                rotated = True
                e = gamma / r
                theta = (beta - alpha) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ce = np.conj(e)
                for k in range(m):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * ce * akq
                    A[k, q] = s * akp + c * ce * akq
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * ce * vkq
                    V[k, q] = s * vkp + c * ce * vkq
        if not rotated:
            return sweep
    return -1


def hermitian_eigen(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix with cyclic Jacobi rotations.

    Returns ``(w, V)`` with ``w`` real and ascending and the columns of ``V``
    orthonormal eigenvectors, ``M @ V[:, i] == w[i] * V[:, i]``.
    """
    M = as_complex_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise PreconditionError(f"hermitian_eigen needs a square matrix, got {M.shape}")
    scale = np.max(np.abs(M)) if M.size else 0.0
    if M.size and np.max(np.abs(M - dagger(M))) > 1e-12 * (1.0 + scale):
        raise PreconditionError("hermitian_eigen needs a Hermitian matrix")
    n = M.shape[0]
    A = 0.5 * (M + dagger(M))
    V = np.eye(n, dtype=np.complex128)
    if n > 1 and _jacobi_hermitian(A, V, MAX_SWEEPS) < 0:
        raise ArithmeticError("Jacobi eigensolver did not converge")
    w = np.real(np.diag(A)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def jacobi_svd(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One-sided Jacobi SVD.

    Returns ``(B, s, V)`` where the columns of ``B = M @ V`` are mutually
    orthogonal with norms ``s`` (unsorted, one per column of ``M``) and ``V``
    is unitary.  Zero singular values come out at the level ``eps * ||M||``,
    which forming ``M^H M`` would square away.
    """
    M = as_complex_matrix(M)
    n = M.shape[1]
    A = M.copy()
    V = np.eye(n, dtype=np.complex128)
    if n > 1 and _jacobi_one_sided(A, V, MAX_SWEEPS) < 0:
        raise ArithmeticError("one-sided Jacobi SVD did not converge")
    s = np.linalg.norm(A, axis=0)
    return A, s, V


def singular_values(M) -> np.ndarray:
    """Singular values of ``M``, descending, one per column."""
    _, s, _ = jacobi_svd(M)
    return np.sort(s)[::-1]


def operator_norm(M) -> float:
    """Largest singular value (spectral norm)."""
    M = as_complex_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.max(jacobi_svd(M)[1]))


def _kernel_cut(s, tol, floor):
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol}")
    smax = s.max() if s.size else 0.0
    return tol * max(smax, floor)


def numerical_kernel(M, tol: float, floor: float = 0.0) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical null space of ``M``.

    A right singular direction belongs to the kernel when its singular value is
    at most ``tol * max(sigma_max, floor)``; for ``M == 0`` every direction
    does.  ``floor`` gives a scale for matrices that are zero up to round-off,
    such as ``U - I`` for ``U`` close to the identity.
    """
    _, s, V = jacobi_svd(M)
    cut = _kernel_cut(s, tol, floor)
    if cut == 0.0:
        return np.eye(V.shape[0], dtype=np.complex128)
    return V[:, s <= cut]


def kernel_margin(M, tol: float, floor: float = 0.0) -> float:
    """Smallest singular value of ``M`` left out of ``numerical_kernel(M, tol, floor)``.

    ``inf`` when every direction is in the kernel.
    """
    _, s, _ = jacobi_svd(M)
    outside = s[s > _kernel_cut(s, tol, floor)]
    return float(outside.min()) if outside.size else float("inf")


def orthogonal_projector(K: np.ndarray) -> np.ndarray:
    """``K K^H`` for a matrix ``K`` with orthonormal columns."""
    return K @ dagger(K)
