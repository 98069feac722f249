"""The GNS construction of a finite-dimensional *-dynamical system.

The quotient of the algebra by the null space of ``A -> sqrt(phi(A^* A))`` is
realised in coordinates where the induced inner product is the standard one.
At finite dimension the pre-Hilbert space is already complete, so the
quotient is the Hilbert space on which the contraction ``U`` and the
fixed-point projector ``P`` live.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import AlgebraElement, StarDynamicalSystem, validate_system
from .errors import ConsistencyError, InvalidSystemError, KindMismatchError, PreconditionError

GRAM_TOL = 1e-10
FIX_TOL = 1e-8
NORM_SLACK = 1e-10
PROJECTOR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GnsRepresentation:
    """Quotient data: ``iota`` (d x m), ``omega = iota(1)``, ``U``, ``P``.

    ``U`` satisfies ``iota T = U iota``; ``P`` is the orthogonal projector
    onto ``{x : U x = x}``.  ``diagnostics`` records the residuals measured
    while building it.
    """

    d: int
    iota: np.ndarray = field(repr=False)
    omega: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    P: np.ndarray = field(repr=False)
    gram_tol: float = GRAM_TOL
    fix_tol: float = FIX_TOL
    fixed_basis: np.ndarray = field(default=None, repr=False)
    diagnostics: dict = field(default_factory=dict, repr=False)

    @property
    def fixed_dimension(self) -> int:
        return int(self.fixed_basis.shape[1])


def fixed_point_projector(U, fix_tol: float = FIX_TOL) -> np.ndarray:
    """Orthogonal projector onto the fixed space of a contraction ``U``."""
    return linalg.orthogonal_projector(_fixed_basis(U, fix_tol))


def _fixed_basis(U, fix_tol):
    U = linalg.as_complex_matrix(U, "U")
    if U.shape[0] != U.shape[1]:
        raise PreconditionError(f"U must be square, got {U.shape}")
    norm = linalg.operator_norm(U)
    if norm > 1.0 + NORM_SLACK:
        raise PreconditionError(f"mean ergodic averaging needs ||U|| <= 1, got {norm:.12g}")
    # ||U|| >= 1 whenever U fixes a unit vector, so the identity sets the scale of U - I
    return linalg.numerical_kernel(U - np.eye(U.shape[0]), fix_tol, floor=1.0)


def gns_construct(
    system: StarDynamicalSystem,
    gram_tol: float = GRAM_TOL,
    fix_tol: float = FIX_TOL,
    validate: bool = True,
) -> GnsRepresentation:
    """Build the GNS quotient, the induced contraction and its fixed-point projector.

    Raises :class:`InvalidSystemError` if the system fails validation and
    :class:`ConsistencyError` when the quotient is too ill-conditioned for
    ``iota T = U iota`` or for the projector identities to hold.
    """
    if validate:
        report = validate_system(system)
        if not report.passed:
            names = ", ".join(c.name for c in report.failures())
            raise InvalidSystemError(f"system fails validation: {names}", report)

    G = system.state.gram()
    G = 0.5 * (G + np.conj(G).T)
    lam, V = linalg.hermitian_eigen(G)
    lam_max = lam[-1]
    keep = lam > gram_tol * lam_max
    lam_k, V_k = lam[keep], V[:, keep]
    d = int(keep.sum())
    iota = np.sqrt(lam_k)[:, None] * np.conj(V_k).T
    iota_pinv = V_k / np.sqrt(lam_k)[None, :]

    T = system.tau.T
    U = (iota @ T) @ iota_pinv
    one = system.kind.unit().vec()
    omega = iota @ one

    cons = float(np.linalg.norm(iota @ T - U @ iota))
    cons_bound = 1e-8 * (1.0 + float(np.linalg.norm(T)))
    if cons > cons_bound:
        raise ConsistencyError(
            f"iota T != U iota (residual {cons:.3e} > {cons_bound:.3e}); quotient is ill-conditioned"
        )

    K = _fixed_basis(U, fix_tol)
    P = linalg.orthogonal_projector(K)
    I = np.eye(d)
    diagnostics = {
        "consistency_residual": cons,
        "consistency_bound": cons_bound,
        "omega_norm": float(np.linalg.norm(omega)),
        "U_norm": linalg.operator_norm(U),
        "U_omega_residual": float(np.linalg.norm(U @ omega - omega)),
        "P_idempotent": float(np.linalg.norm(P @ P - P)),
        "P_hermitian": float(np.linalg.norm(P - np.conj(P).T)),
        "UP_residual": float(np.linalg.norm(U @ P - P)),
        "PU_residual": float(np.linalg.norm(P @ U - P)),
        "fixed_margin": linalg.kernel_margin(U - I, fix_tol, floor=1.0),
        "gram_eigenvalues": lam.tolist(),
    }
    # vectors accepted as fixed may move by up to the kernel cut, so UP = P only holds to that scale
    cut = fix_tol * max(linalg.operator_norm(U - I), 1.0)
    bounds = {
        "P_idempotent": PROJECTOR_TOL,
        "P_hermitian": PROJECTOR_TOL,
        "UP_residual": max(PROJECTOR_TOL, 2.0 * cut * np.sqrt(K.shape[1])),
        "PU_residual": max(PROJECTOR_TOL, 2.0 * cut * np.sqrt(K.shape[1])),
    }
    bad = {k: diagnostics[k] for k, b in bounds.items() if diagnostics[k] > b}
    if bad:
        raise ConsistencyError(f"fixed-point projector identities fail ({bad}); ill-conditioned")
    return GnsRepresentation(
        d=d,
        iota=iota,
        omega=omega,
        U=U,
        P=P,
        gram_tol=gram_tol,
        fix_tol=fix_tol,
        fixed_basis=K,
        diagnostics=diagnostics,
    )


def iota_of(rep: GnsRepresentation, A) -> np.ndarray:
    """Quotient coordinates of ``A`` (an element or a raw ``vec`` array)."""
    v = A.vec() if isinstance(A, AlgebraElement) else np.asarray(A, dtype=np.complex128).reshape(-1)
    if v.size != rep.iota.shape[1]:
        raise KindMismatchError(f"element of dimension {v.size} vs GNS map on {rep.iota.shape[1]}")
    return rep.iota @ v


def iota_matrix(rep: GnsRepresentation, elements) -> np.ndarray:
    """Stack ``iota_of`` over ``elements`` as columns (d x len(elements))."""
    if not elements:
        return np.zeros((rep.d, 0), dtype=np.complex128)
    return np.stack([iota_of(rep, A) for A in elements], axis=1)


def spans_quotient(rep: GnsRepresentation, elements, tol: float = 1e-10) -> bool:
    """True when the images of ``elements`` span the GNS space (phi-totality)."""
    M = iota_matrix(rep, elements)
    if M.shape[1] == 0:
        return rep.d == 0
    s = linalg.singular_values(M)
    return int(np.sum(s > tol * s[0])) == rep.d if s[0] > 0 else rep.d == 0
