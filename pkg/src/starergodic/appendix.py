"""Truncated shift with a fixed vector that the dense subspace cannot see.

The Hilbert space has orthonormal basis ``{omega, y} U {u_k : k in Z}`` and
``U omega = omega``, ``U y = y``, ``U u_k = u_{k+1}``.  The dense subspace
``G`` is spanned by ``omega`` and the vectors ``y + u_k``.  In the whole
space the fixed vectors are ``span{omega, y}``; inside ``G`` only multiples
of ``omega`` are fixed.

The shift is truncated to ``|k| <= m`` as a map from ``V`` (labels
``omega, y, u_-m..u_m``) into the one-larger space ``W`` (which adds
``u_{m+1}``), so no wrap-around introduces a spurious fixed vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import PreconditionError

KERNEL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TruncatedShift:
    m: int
    V_labels: tuple
    W_labels: tuple
    U_mat: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    G_basis: np.ndarray = field(repr=False)

    def u(self, k: int) -> int:
        """Index of ``u_k`` in the ``V`` (and ``W``) coordinates."""
        if not -self.m <= k <= self.m + 1:
            raise PreconditionError(f"u_{k} is outside the truncation |k| <= {self.m}")
        return 2 + k + self.m


def appendix_operator(m: int) -> TruncatedShift:
    if m < 1:
        raise PreconditionError(f"truncation radius must be >= 1, got {m}")
    V_labels = ("omega", "y", *(f"u{k}" for k in range(-m, m + 1)))
    W_labels = (*V_labels, f"u{m + 1}")
    nv, nw = len(V_labels), len(W_labels)
    U = np.zeros((nw, nv))
    U[0, 0] = 1.0
    U[1, 1] = 1.0
    for j in range(2, nv):
        U[j + 1, j] = 1.0
    J = np.eye(nw, nv)
    G = np.zeros((nv, 1 + 2 * m + 1))
    G[0, 0] = 1.0
    for c, j in enumerate(range(2, nv), start=1):
        G[1, c] = 1.0
        G[j, c] = 1.0
    return TruncatedShift(m, V_labels, W_labels, U, J, G)


def appendix_fixed_dims(shift: TruncatedShift) -> tuple:
    """``(dim of fixed space in H, dim of fixed space in G)``; expected ``(2, 1)``."""
    D = shift.U_mat - shift.J
    dim_h = linalg.numerical_kernel(D, KERNEL_TOL).shape[1]
    dim_g = linalg.numerical_kernel(D @ shift.G_basis, KERNEL_TOL).shape[1]
    return dim_h, dim_g


def appendix_g_fixed_vectors(shift: TruncatedShift) -> np.ndarray:
    """``V``-coordinates of a basis of the fixed vectors lying in ``G`` (columns)."""
    D = shift.U_mat - shift.J
    C = linalg.numerical_kernel(D @ shift.G_basis, KERNEL_TOL)
    return shift.G_basis @ C


def appendix_density(n: int, shift: TruncatedShift = None) -> float:
    """``||y - (1/n) sum_{k=1..n} (y + u_k)||``, which equals ``1/sqrt(n)``."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if shift is None:
        shift = appendix_operator(n)
    if n > shift.m:
        raise PreconditionError(f"n = {n} needs u_1..u_n but the truncation stops at u_{shift.m}")
    x = np.zeros(len(shift.V_labels))
    x[1] = 1.0
    for k in range(1, n + 1):
        x[1] -= 1.0 / n
        x[shift.u(k)] -= 1.0 / n
    return float(np.linalg.norm(x))
