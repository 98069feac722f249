"""Mean ergodic averaging and the three ergodicity tests.

* projector test: the fixed space of ``U`` is one-dimensional;
* time-mean test: ``(1/n) sum tau^k(A)`` approaches ``phi(A)`` in the
  ``phi``-seminorm for every ``A`` of a ``phi``-total set;
* mixing test: ``(1/n) sum phi(A tau^k(B))`` approaches ``phi(A) phi(B)``
  for ``A`` in ``S^*`` and ``B`` in ``T`` with ``S``, ``T`` ``phi``-total.

The two averaging tests only observe finitely many Cesaro means, so they
need a stopping rule: residuals are inspected at ``n = 1, 2, 4, ...``; the
test succeeds as soon as the residual drops to ``tol``, and fails when it
stalls (two successive doublings each improving by less than 10%, once
``n >= plateau_from``) or when ``n_budget`` is exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import linalg
from .algebra import AlgebraElement, StarDynamicalSystem, state_apply
from .errors import ConsistencyError, ConvergenceError, PreconditionError
from .gns import GnsRepresentation, iota_matrix, iota_of, spans_quotient

LIMIT_BUDGET = 2**20
AVERAGING_TOL = 1e-3
AVERAGING_BUDGET = 2**16
PLATEAU_FROM = 1024
PLATEAU_GAIN = 0.10
ERGODIC_P_TOL = 1e-8
MIXING_CROSS_TOL = 1e-9


def _as_vectors(U, y):
    U = linalg.as_complex_matrix(U, "U")
    y = np.asarray(y, dtype=np.complex128)
    if U.shape[0] != U.shape[1] or y.shape[0] != U.shape[1]:
        raise PreconditionError(f"dimension mismatch: U {U.shape}, y {y.shape}")
    return U, y


def cesaro_average(U, y, n: int) -> np.ndarray:
    """``(1/n) sum_{k<n} U^k y`` by running accumulation; ``y`` may be a block of columns."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    U, y = _as_vectors(U, y)
    acc = np.zeros_like(y)
    v = y
    for _ in range(n):
        acc += v
        v = U @ v
    return acc / n


def cesaro_checkpoints(U, y, checkpoints):
    """Yield ``(n, average)`` for each ``n`` in ascending ``checkpoints`` in one pass."""
    U, y = _as_vectors(U, y)
    acc = np.zeros_like(y)
    v = y
    k = 0
    for n in checkpoints:
        if n < 1 or n < k:
            raise PreconditionError("checkpoints must be positive and ascending")
        while k < n:
            acc += v
            v = U @ v
            k += 1
        yield n, acc / n


def _doublings(budget):
    n = 1
    while n <= budget:
        yield n
        n *= 2


def mean_ergodic_limit(rep: GnsRepresentation, y, target: float, budget: int = LIMIT_BUDGET):
    """Double ``n`` until the Cesaro average is within ``target`` of ``P y``.

    Returns ``(average, n)``.  Raises :class:`ConvergenceError` carrying the
    best residual when ``budget`` is reached first.
    """
    if not target > 0:
        raise PreconditionError(f"target must be positive, got {target}")
    y = np.asarray(y, dtype=np.complex128)
    Py = rep.P @ y
    best = np.inf
    for n, avg in cesaro_checkpoints(rep.U, y, _doublings(budget)):
        r = float(np.linalg.norm(avg - Py))
        best = min(best, r)
        if r <= target:
            return avg, n
    raise ConvergenceError(f"no n <= {budget} reaches residual {target:g}", best_residual=best, n_tried=budget)


class ErgodicityVerdict(NamedTuple):
    ergodic: bool
    fixed_dimension: int
    margin: float


def is_ergodic(rep: GnsRepresentation) -> ErgodicityVerdict:
    """Ergodic iff the fixed space of ``U`` is one-dimensional (then ``P = omega omega^H``).

    ``margin`` is the smallest singular value of ``U - I`` that was not
    counted as zero; a small margin flags a borderline decision.
    """
    dim = rep.fixed_dimension
    margin = rep.diagnostics.get("fixed_margin")
    if margin is None:
        margin = linalg.kernel_margin(rep.U - np.eye(rep.d), rep.fix_tol, floor=1.0)
    ergodic = dim == 1
    if ergodic:
        dev = float(np.linalg.norm(rep.P - np.outer(rep.omega, np.conj(rep.omega))))
        if dev > ERGODIC_P_TOL:
            raise ConsistencyError(f"one-dimensional fixed space but ||P - omega omega^H|| = {dev:.3e}")
    return ErgodicityVerdict(ergodic, dim, float(margin))


def time_mean_residuals(system: StarDynamicalSystem, rep: GnsRepresentation, A: AlgebraElement, n_list) -> list:
    """``||(1/n) sum_{k<n} tau^k(A) - phi(A)||_phi`` for each ``n`` in ``n_list``.

    Evaluated in the quotient, where ``iota(phi(A) 1) = omega <omega, iota(A)>``.
    """
    n_list = list(n_list)
    if not n_list:
        raise PreconditionError("n_list must be nonempty")
    if any(b < a for a, b in zip(n_list, n_list[1:])):
        raise PreconditionError("n_list must be ascending")
    x = iota_of(rep, A)
    target = rep.omega * state_apply(system, A)
    return [float(np.linalg.norm(avg - target)) for _, avg in cesaro_checkpoints(rep.U, x, n_list)]


def mixing_mean(system: StarDynamicalSystem, rep: GnsRepresentation, A: AlgebraElement, B: AlgebraElement, n: int) -> complex:
    """``(1/n) sum_{k<n} phi(A tau^k(B))`` via ``<iota(A^*), U^k iota(B)>``.

    The same mean is recomputed directly in the algebra; a disagreement
    beyond ``1e-9`` raises :class:`ConsistencyError`.
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    x = iota_of(rep, A.star)
    hilbert = complex(np.vdot(x, cesaro_average(rep.U, iota_of(rep, B), n)))

    T = system.tau.T
    total = 0.0 + 0.0j
    vb = B.vec()
    for _ in range(n):
        total += state_apply(system, A * system.kind.from_vec(vb))
        vb = T @ vb
    direct = total / n
    scale = max(1.0, float(np.max(np.abs(A.data))) * float(np.max(np.abs(B.data))))
    if abs(hilbert - direct) > MIXING_CROSS_TOL * scale:
        raise ConsistencyError(f"mixing mean disagrees: Hilbert {hilbert} vs algebra {direct}")
    return hilbert


@dataclass
class AveragingOutcome:
    """How a family of Cesaro residuals behaved at doubling checkpoints."""

    converged: bool
    reason: str
    n: int
    residual: float
    history: list = field(default_factory=list)


def watch_averages(U, Y, metric, tol, n_budget=AVERAGING_BUDGET, plateau_from=PLATEAU_FROM) -> AveragingOutcome:
    """Track ``metric(average)`` at ``n = 1, 2, 4, ...`` and apply the stopping rule."""
    history = []
    stalls = 0
    for n, avg in cesaro_checkpoints(U, Y, _doublings(n_budget)):
        r = float(metric(avg))
        if history:
            prev = history[-1][1]
            stalls = stalls + 1 if r > (1.0 - PLATEAU_GAIN) * prev else 0
        history.append((n, r))
        if r <= tol:
            return AveragingOutcome(True, "converged", n, r, history)
        if n >= plateau_from and stalls >= 2:
            return AveragingOutcome(False, "plateau", n, r, history)
    n, r = history[-1]
    return AveragingOutcome(False, "budget", n, r, history)


def _require_total(rep, elements, label):
    if not spans_quotient(rep, list(elements)):
        raise PreconditionError(f"{label} is not phi-total: its image does not span the GNS space")


def time_mean_test(
    system: StarDynamicalSystem,
    rep: GnsRepresentation,
    elements=None,
    tol: float = AVERAGING_TOL,
    n_budget: int = AVERAGING_BUDGET,
) -> AveragingOutcome:
    """Time mean = system mean over a ``phi``-total set (default: the standard basis)."""
    elements = system.kind.basis() if elements is None else list(elements)
    _require_total(rep, elements, "element set")
    Y = iota_matrix(rep, elements)
    targets = np.outer(rep.omega, [state_apply(system, A) for A in elements])
    return watch_averages(rep.U, Y, lambda avg: np.max(np.linalg.norm(avg - targets, axis=0)), tol, n_budget)


def mixing_test(
    system: StarDynamicalSystem,
    rep: GnsRepresentation,
    S_set,
    T_set,
    tol: float = AVERAGING_TOL,
    n_budget: int = AVERAGING_BUDGET,
) -> AveragingOutcome:
    """Mixing means over ``A in S^*`` and ``B in T``; both sets must be ``phi``-total."""
    S_set, T_set = list(S_set), list(T_set)
    _require_total(rep, S_set, "S_set")
    _require_total(rep, T_set, "T_set")
    # A = S^* gives iota(A^*) = iota(S)
    X = iota_matrix(rep, S_set)
    Y = iota_matrix(rep, T_set)
    phi_A = np.array([state_apply(system, S.star) for S in S_set])
    phi_B = np.array([state_apply(system, B) for B in T_set])
    targets = np.outer(phi_A, phi_B)
    Xh = np.conj(X).T
    return watch_averages(rep.U, Y, lambda avg: np.max(np.abs(Xh @ avg - targets)), tol, n_budget)


def ergodic_via_mixing(
    system: StarDynamicalSystem,
    rep: GnsRepresentation,
    S_set,
    T_set,
    tol: float = AVERAGING_TOL,
    n_budget: int = AVERAGING_BUDGET,
) -> bool:
    """True when every mixing mean settles at ``phi(A) phi(B)`` within ``tol``."""
    return mixing_test(system, rep, S_set, T_set, tol, n_budget).converged


def ergodic_via_time_mean(
    system: StarDynamicalSystem,
    rep: GnsRepresentation,
    elements=None,
    tol: float = AVERAGING_TOL,
    n_budget: int = AVERAGING_BUDGET,
) -> bool:
    return time_mean_test(system, rep, elements, tol, n_budget).converged


METHODS = ("projector", "time-mean", "mixing")


def ergodicity_verdicts(
    system: StarDynamicalSystem,
    rep: GnsRepresentation,
    methods=METHODS,
    tol: float = AVERAGING_TOL,
    n_budget: int = AVERAGING_BUDGET,
) -> dict:
    """Run the requested tests over the standard basis; returns one entry per method."""
    out = {}
    basis = system.kind.basis()
    for method in methods:
        if method == "projector":
            v = is_ergodic(rep)
            out[method] = {"ergodic": v.ergodic, "fixed_dimension": v.fixed_dimension, "margin": v.margin}
        elif method == "time-mean":
            o = time_mean_test(system, rep, basis, tol, n_budget)
            out[method] = {"ergodic": o.converged, "reason": o.reason, "n": o.n, "residual": o.residual}
        elif method == "mixing":
            o = mixing_test(system, rep, basis, basis, tol, n_budget)
            out[method] = {"ergodic": o.converged, "reason": o.reason, "n": o.n, "residual": o.residual}
        else:
            raise PreconditionError(f"unknown method {method!r}; choose from {METHODS}")
    return out
