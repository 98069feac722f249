"""Finite measure-theoretic dynamical systems and set-enumeration oracles.

A system is a probability vector ``mu`` on points ``0..N-1`` and a map ``T``
given as an index array.  The oracles in this module (preimages,
intersection measures, cycle counts) use plain Python sets and never touch
the linear-algebra pipeline, so they can cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraKind, State, StarDynamicalSystem, Superoperator
from .ergodic import is_ergodic
from .errors import ConsistencyError, HypothesisError, InvalidSystemError, PreconditionError
from .gns import gns_construct
from .recurrence import RecurrenceReport, recurrence_set_khintchine, recurrence_set_pair

MASS_TOL = 1e-12
ORACLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteMeasureSystem:
    mu: tuple
    T: tuple

    def __post_init__(self):
        mu = tuple(float(m) for m in self.mu)
        T = tuple(int(t) for t in self.T)
        if len(mu) != len(T) or not mu:
            raise PreconditionError(f"mu (length {len(mu)}) and T (length {len(T)}) must have equal positive length")
        if any(t < 0 or t >= len(T) for t in T):
            raise PreconditionError(f"T maps outside [0, {len(T)})")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "T", T)

    @property
    def N(self) -> int:
        return len(self.mu)

    def measure(self, S) -> float:
        return float(sum(self.mu[x] for x in set(S)))

    def preimage(self, S) -> set:
        S = set(S)
        return {x for x in range(self.N) if self.T[x] in S}

    def problems(self) -> list:
        """Violated invariants, as human-readable strings (empty when valid).

        ``mu(T^-1 S) <= mu(S)`` for every ``S`` is checked on singletons only:
        both sides are sums over the points of ``S`` of the singleton terms.
        """
        out = []
        if min(self.mu) < 0:
            out.append(f"negative weight {min(self.mu)}")
        total = sum(self.mu)
        if abs(total - 1.0) > MASS_TOL:
            out.append(f"weights sum to {total!r}, not 1")
        for x in range(self.N):
            pre = self.measure(self.preimage({x}))
            if pre > self.mu[x] + MASS_TOL:
                out.append(f"mu(T^-1{{{x}}}) = {pre:g} exceeds mu({{{x}}}) = {self.mu[x]:g}")
        return out

    def cycles(self) -> list:
        """Cycle decomposition; only meaningful when ``T`` is a permutation."""
        seen = [False] * self.N
        out = []
        for start in range(self.N):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.T[x]
            out.append(cyc)
        return out

    @property
    def is_permutation(self) -> bool:
        return sorted(self.T) == list(range(self.N))


def rotation_system(N: int, r: int) -> FiniteMeasureSystem:
    """Uniform measure on ``Z_N`` with ``T(x) = x + r mod N``."""
    if N < 1:
        raise PreconditionError(f"N must be >= 1, got {N}")
    return FiniteMeasureSystem([1.0 / N] * N, [(x + r) % N for x in range(N)])


def identity_system(N: int) -> FiniteMeasureSystem:
    return FiniteMeasureSystem([1.0 / N] * N, list(range(N)))


def embed_commutative(fms: FiniteMeasureSystem) -> StarDynamicalSystem:
    """Functions on the points, integration against ``mu``, and ``f -> f o T``."""
    bad = fms.problems()
    if bad:
        raise InvalidSystemError("invalid measure system: " + "; ".join(bad))
    kind = AlgebraKind.function(fms.N)
    T = np.zeros((fms.N, fms.N))
    T[np.arange(fms.N), list(fms.T)] = 1.0
    return StarDynamicalSystem(kind, State(kind, np.array(fms.mu)), Superoperator(kind, T))


def _check_points(fms, S, label):
    S = sorted(set(int(p) for p in S))
    if any(p < 0 or p >= fms.N for p in S):
        raise PreconditionError(f"{label} has points outside [0, {fms.N})")
    return S


def intersection_measure(fms: FiniteMeasureSystem, A, B, k: int) -> float:
    """``mu(A & T^-k(B))`` by ``k``-fold preimage enumeration."""
    A = set(_check_points(fms, A, "A"))
    S = set(_check_points(fms, B, "B"))
    for _ in range(k):
        S = fms.preimage(S)
    return fms.measure(A & S)


def intersection_measures(fms: FiniteMeasureSystem, A, B, K: int) -> list:
    """``[mu(A & T^-k(B)) for k in 1..K]``, reusing each preimage for the next."""
    A = set(_check_points(fms, A, "A"))
    S = set(_check_points(fms, B, "B"))
    out = []
    for _ in range(K):
        S = fms.preimage(S)
        out.append(fms.measure(A & S))
    return out


def _attach_oracle(report: RecurrenceReport, oracle: list) -> RecurrenceReport:
    err = max((abs(a - b) for a, b in zip(report.values, oracle)), default=0.0)
    report.oracle_values = [float(v) for v in oracle]
    report.oracle_max_error = float(err)
    if err > ORACLE_TOL:
        raise ConsistencyError(f"operator values disagree with set enumeration by {err:.3e}")
    return report


def khintchine_report(fms: FiniteMeasureSystem, A, epsilon: float, K: int = None) -> RecurrenceReport:
    """``{k : mu(A & T^-k A) > mu(A)^2 - eps}``, computed both ways."""
    A = _check_points(fms, A, "A")
    system = embed_commutative(fms)
    rep = gns_construct(system)
    report = recurrence_set_khintchine(system, rep, system.kind.indicator(A), epsilon, K)
    return _attach_oracle(report, intersection_measures(fms, A, A, report.horizon))


def pair_recurrence_report(fms: FiniteMeasureSystem, A, B, epsilon: float, K: int = None, force: bool = False) -> RecurrenceReport:
    """``{k : mu(A & T^-k B) > mu(A) mu(B) - eps}`` for an ergodic system, computed both ways."""
    A = _check_points(fms, A, "A")
    B = _check_points(fms, B, "B")
    system = embed_commutative(fms)
    rep = gns_construct(system)
    verdict = is_ergodic(rep)
    if not force and not verdict.ergodic:
        raise HypothesisError(
            f"the measure system is not ergodic (fixed space of dimension {verdict.fixed_dimension}); "
            "pair recurrence needs ergodicity, use force to compute the set anyway"
        )
    report = recurrence_set_pair(
        system, rep, system.kind.indicator(A), system.kind.indicator(B), epsilon, K, force=force
    )
    return _attach_oracle(report, intersection_measures(fms, A, B, report.horizon))


def is_ergodic_measure(fms: FiniteMeasureSystem) -> bool:
    """Ergodicity via the fixed space of ``f -> f o T`` on ``L^2(mu)``.

    For a permutation with all weights positive the answer is compared with
    the cycle count (ergodic iff exactly one cycle).
    """
    system = embed_commutative(fms)
    verdict = is_ergodic(gns_construct(system)).ergodic
    if fms.is_permutation and min(fms.mu) > 0:
        by_cycles = len(fms.cycles()) == 1
        if by_cycles != verdict:
            raise ConsistencyError(f"fixed-space test says {verdict}, cycle count says {by_cycles}")
    return verdict
