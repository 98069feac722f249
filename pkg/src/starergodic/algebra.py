"""Finite-dimensional unital *-algebras, states and dynamics maps.

Two algebras are supported: the full matrix algebra ``M_n`` (involution is the
conjugate transpose) and the commutative algebra of functions on ``N`` points
(involution is pointwise conjugation).

Vectorisation convention, used by every superoperator, Gram matrix and GNS
map in the package: matrices are stacked row-major, so the matrix unit
``E_ij`` of ``M_n`` has index ``a = i * n + j``.  A function on ``N`` points
is already a vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Callable, Iterable

import numpy as np

from . import linalg
from .errors import KindMismatchError, PreconditionError

MATRIX = "matrix"
FUNCTION = "function"

STATE_EIG_TOL = 1e-12
STATE_TRACE_TOL = 1e-12
WEIGHT_TOL = 1e-15
UNIT_TOL = 1e-12
CONTRACTION_TOL = 1e-10


@dataclass(frozen=True)
class AlgebraKind:
    """Which algebra: ``M_n`` (``family="matrix"``) or functions on ``N`` points."""

    family: str
    size: int

    def __post_init__(self):
        if self.family not in (MATRIX, FUNCTION):
            raise PreconditionError(f"unknown algebra family {self.family!r}")
        if int(self.size) != self.size or self.size < 1:
            raise PreconditionError(f"algebra size must be a positive integer, got {self.size}")

    @classmethod
    def matrix(cls, n: int) -> "AlgebraKind":
        return cls(MATRIX, n)

    @classmethod
    def function(cls, N: int) -> "AlgebraKind":
        return cls(FUNCTION, N)

    @property
    def is_matrix(self) -> bool:
        return self.family == MATRIX

    @property
    def dim(self) -> int:
        """Linear dimension of the algebra (length of ``vec``)."""
        return self.size * self.size if self.is_matrix else self.size

    @property
    def shape(self) -> tuple:
        return (self.size, self.size) if self.is_matrix else (self.size,)

    def element(self, data) -> "AlgebraElement":
        return AlgebraElement(self, data)

    def from_vec(self, v) -> "AlgebraElement":
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        if v.size != self.dim:
            raise PreconditionError(f"vector of length {v.size} does not fit {self}")
        return AlgebraElement(self, v.reshape(self.shape))

    def unit(self) -> "AlgebraElement":
        if self.is_matrix:
            return AlgebraElement(self, np.eye(self.size))
        return AlgebraElement(self, np.ones(self.size))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.shape))

    def basis(self) -> list["AlgebraElement"]:
        """Standard basis in ``vec`` order: matrix units or point indicators."""
        return [self.from_vec(e) for e in np.eye(self.dim)]

    def matrix_unit(self, i: int, j: int) -> "AlgebraElement":
        if not self.is_matrix:
            raise KindMismatchError("matrix units exist only in a matrix algebra")
        data = np.zeros(self.shape)
        data[i, j] = 1.0
        return AlgebraElement(self, data)

    def indicator(self, points: Iterable[int]) -> "AlgebraElement":
        if self.is_matrix:
            raise KindMismatchError("indicators exist only in a function algebra")
        data = np.zeros(self.size)
        pts = list(points)
        if any(p < 0 or p >= self.size for p in pts):
            raise PreconditionError(f"points {pts} outside [0, {self.size})")
        data[pts] = 1.0
        return AlgebraElement(self, data)

    def __str__(self):
        return f"M_{self.size}" if self.is_matrix else f"C^{self.size}"


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of a finite-dimensional unital *-algebra.

    ``data`` is an ``n x n`` complex matrix for ``M_n`` or a length-``N``
    complex vector for the function algebra.  Products are matrix products
    resp. pointwise products; ``A.star`` is the involution.
    """

    kind: AlgebraKind
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = _frozen(self.data)
        if data.shape != self.kind.shape:
            raise PreconditionError(f"data of shape {data.shape} does not fit {self.kind}")
        if not np.all(np.isfinite(data)):
            raise PreconditionError("algebra element has non-finite entries")
        object.__setattr__(self, "data", data)

    def vec(self) -> np.ndarray:
        return self.data.reshape(-1)

    @property
    def star(self) -> "AlgebraElement":
        if self.kind.is_matrix:
            return AlgebraElement(self.kind, np.conj(self.data).T)
        return AlgebraElement(self.kind, np.conj(self.data))

    def _check(self, other: "AlgebraElement"):
        if other.kind != self.kind:
            raise KindMismatchError(f"cannot combine elements of {self.kind} and {other.kind}")

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            if self.kind.is_matrix:
                return AlgebraElement(self.kind, self.data @ other.data)
            return AlgebraElement(self.kind, self.data * other.data)
        if isinstance(other, Number):
            return AlgebraElement(self.kind, self.data * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return AlgebraElement(self.kind, other * self.data)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.kind, self.data + other.data)
        if isinstance(other, Number):
            return self + other * self.kind.unit()
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __rsub__(self, other):
        return (-1) * self + other

    def __neg__(self):
        return (-1) * self

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.data, other.data, rtol=0.0, atol=atol))

    def __repr__(self):
        return f"AlgebraElement({self.kind}, {np.array2string(self.data, precision=4)})"


@dataclass(frozen=True, eq=False)
class State:
    """A state, stored as a density matrix (``M_n``) or a weight vector (functions).

    On ``M_n`` the state is ``A -> Tr(rho A)``; on functions it is
    ``f -> sum_x w(x) f(x)``.  Nothing is checked here beyond shape;
    positivity and normalisation are reported by :func:`validate_system`.
    """

    kind: AlgebraKind
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = _frozen(self.rho)
        if rho.shape != self.kind.shape:
            raise PreconditionError(f"state of shape {rho.shape} does not fit {self.kind}")
        if not np.all(np.isfinite(rho)):
            raise PreconditionError("state has non-finite entries")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def normalized_trace(cls, n: int) -> "State":
        return cls(AlgebraKind.matrix(n), np.eye(n) / n)

    @classmethod
    def uniform(cls, N: int) -> "State":
        return cls(AlgebraKind.function(N), np.full(N, 1.0 / N))

    @property
    def functional(self) -> np.ndarray:
        """Row vector ``f`` with ``phi(A) = f @ vec(A)``."""
        if self.kind.is_matrix:
            return self.rho.T.reshape(-1)
        return self.rho

    def gram(self) -> np.ndarray:
        """``G[a, b] = phi(E_a^* E_b)`` over the standard basis."""
        if self.kind.is_matrix:
            # phi(E_ij^* E_kl) = delta_ik rho_lj
            return np.kron(np.eye(self.kind.size), self.rho.T)
        return np.diag(self.rho)

    def __call__(self, A: AlgebraElement) -> complex:
        if A.kind != self.kind:
            raise KindMismatchError(f"state on {self.kind} applied to element of {A.kind}")
        return complex(self.functional @ A.vec())


@dataclass(frozen=True, eq=False)
class Superoperator:
    """A linear map on the algebra, as a matrix acting on ``vec(A)``."""

    kind: AlgebraKind
    T: np.ndarray = field(repr=False)

    def __post_init__(self):
        T = _frozen(self.T)
        if T.shape != (self.kind.dim, self.kind.dim):
            raise PreconditionError(
                f"superoperator of shape {T.shape} does not act on {self.kind} (dim {self.kind.dim})"
            )
        if not np.all(np.isfinite(T)):
            raise PreconditionError("superoperator has non-finite entries")
        object.__setattr__(self, "T", T)

    @classmethod
    def from_map(cls, kind: AlgebraKind, fn: Callable[[AlgebraElement], AlgebraElement]) -> "Superoperator":
        """Tabulate a linear map column by column on the standard basis."""
        cols = [fn(E).vec() for E in kind.basis()]
        return cls(kind, np.stack(cols, axis=1))

    @classmethod
    def identity(cls, kind: AlgebraKind) -> "Superoperator":
        return cls(kind, np.eye(kind.dim))

    def __call__(self, A: AlgebraElement) -> AlgebraElement:
        if A.kind != self.kind:
            raise KindMismatchError(f"map on {self.kind} applied to element of {A.kind}")
        return self.kind.from_vec(self.T @ A.vec())


@dataclass(frozen=True, eq=False)
class StarDynamicalSystem:
    """A triple (algebra, state, dynamics)."""

    kind: AlgebraKind
    state: State
    tau: Superoperator

    def __post_init__(self):
        if self.state.kind != self.kind or self.tau.kind != self.kind:
            raise KindMismatchError("state, dynamics and algebra must share one kind")


def _state_of(system) -> State:
    return system.state if isinstance(system, StarDynamicalSystem) else system


def state_apply(system, A: AlgebraElement) -> complex:
    """``phi(A)``; ``system`` may be a :class:`StarDynamicalSystem` or a :class:`State`."""
    return _state_of(system)(A)


def seminorm_phi(system, A: AlgebraElement) -> float:
    """``sqrt(phi(A^* A))``, with round-off below zero clamped."""
    val = state_apply(system, A.star * A).real
    return float(np.sqrt(max(val, 0.0)))


def tau_apply(system: StarDynamicalSystem, A: AlgebraElement, k: int = 1) -> AlgebraElement:
    """``tau^k(A)`` by ``k`` repeated applications of the superoperator."""
    if k < 0 or int(k) != k:
        raise PreconditionError(f"power k must be a nonnegative integer, got {k}")
    if A.kind != system.kind:
        raise KindMismatchError(f"dynamics on {system.kind} applied to element of {A.kind}")
    v = A.vec()
    T = system.tau.T
    for _ in range(int(k)):
        v = T @ v
    return system.kind.from_vec(v)


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def __post_init__(self):
        # numpy scalars would leak into JSON reports
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "residual", float(self.residual))


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "residual": c.residual, "detail": c.detail}
                for c in self.checks
            ],
        }


def _state_checks(state: State) -> list:
    checks = []
    rho = state.rho
    if state.kind.is_matrix:
        herm = float(np.max(np.abs(rho - np.conj(rho).T)))
        checks.append(AxiomCheck("state_hermitian", herm <= STATE_EIG_TOL, herm))
        w, _ = linalg.hermitian_eigen(0.5 * (rho + np.conj(rho).T))
        checks.append(
            AxiomCheck("state_positive", w[0] >= -STATE_EIG_TOL, float(min(w[0], 0.0)), f"min eigenvalue {w[0]:.3e}")
        )
        tr = complex(np.trace(rho))
    else:
        imag = float(np.max(np.abs(rho.imag)))
        checks.append(AxiomCheck("state_real", imag <= WEIGHT_TOL, imag))
        wmin = float(np.min(rho.real))
        checks.append(AxiomCheck("state_positive", wmin >= -WEIGHT_TOL, min(wmin, 0.0), f"min weight {wmin:.3e}"))
        tr = complex(np.sum(rho))
    err = abs(tr - 1.0)
    checks.append(AxiomCheck("state_normalized", err <= STATE_TRACE_TOL, err, f"phi(1) = {tr.real:.15g}"))
    return checks


def validate_system(system: StarDynamicalSystem, tol: float = CONTRACTION_TOL) -> ValidationReport:
    """Check the axioms of a *-dynamical system; failures are reported, never raised.

    The contraction axiom ``phi(tau(A)^* tau(A)) <= phi(A^* A)`` for all ``A``
    reads ``T^H G T <= G`` for the Gram matrix ``G`` of the state, and is
    checked as ``min eig(G - T^H G T) >= -tol * max eig(G)``.
    """
    checks = _state_checks(system.state)
    T = system.tau.T
    one = system.kind.unit().vec()
    unit_res = float(np.max(np.abs(T @ one - one)))
    unit_tol = UNIT_TOL * max(1.0, float(np.max(np.abs(T))))
    checks.append(AxiomCheck("unit_preserved", unit_res <= unit_tol, unit_res))

    G = system.state.gram()
    G = 0.5 * (G + np.conj(G).T)
    D = G - np.conj(T).T @ G @ T
    D = 0.5 * (D + np.conj(D).T)
    lam_G = linalg.hermitian_eigen(G)[0][-1]
    lam_D = linalg.hermitian_eigen(D)[0][0]
    bound = -tol * max(lam_G, 0.0)
    checks.append(
        AxiomCheck(
            "contraction",
            lam_D >= bound,
            float(min(lam_D, 0.0)),
            f"min eig(G - T^H G T) = {lam_D:.3e}, bound {bound:.3e}",
        )
    )
    return ValidationReport(tuple(checks))


def diagonal_swap_superoperator(c1: complex, c2: complex) -> Superoperator:
    """``[[a11, a12], [a21, a22]] -> [[a22, c1 a12], [c2 a21, a11]]`` on ``M_2``."""
    T = np.zeros((4, 4), dtype=np.complex128)
    T[0, 3] = 1.0
    T[1, 1] = c1
    T[2, 2] = c2
    T[3, 0] = 1.0
    return Superoperator(AlgebraKind.matrix(2), T)


def build_diagonal_swap(c1: complex, c2: complex) -> StarDynamicalSystem:
    """The non-commutative ``M_2`` system with the normalised trace state.

    No check on ``|c1|, |c2| <= 1`` is made here; :func:`validate_system`
    reports whether the contraction axiom holds.
    """
    kind = AlgebraKind.matrix(2)
    return StarDynamicalSystem(kind, State.normalized_trace(2), diagonal_swap_superoperator(c1, c2))
