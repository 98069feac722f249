"""Khintchine-type recurrence sets with certified relative-denseness windows.

For a contraction ``U`` with fixed-point projector ``P`` the set

    E = {k >= 1 : |<x, U^k y>| > |<x, P y>| - eps}

meets every block of ``n`` consecutive integers as soon as the Cesaro average
of ``y`` over ``n`` steps is within ``eps / (||x|| + 1)`` of ``P y``.  That
``n`` is the certified window reported here.  ``E`` itself is only computed
on a finite horizon ``1..K``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import AlgebraElement, StarDynamicalSystem, state_apply
from .ergodic import LIMIT_BUDGET, is_ergodic
from .errors import ConvergenceError, HypothesisError, PreconditionError
from .gns import GnsRepresentation, iota_of

BORDERLINE_TOL = 1e-12
HORIZON_FACTOR = 10


@dataclass
class RecurrenceReport:
    """A recurrence set on the horizon ``1..K`` together with its window certificate.

    ``threshold`` is the bound used to build ``E``; ``hilbert_threshold`` is
    ``|<x, P y>| - eps``, the bound the window certificate refers to.  The
    certificate covers ``E`` whenever ``threshold <= hilbert_threshold``,
    which ``certified`` records.
    """

    kind: str
    epsilon: float
    threshold: float
    hilbert_threshold: float
    horizon: int
    E: list
    window: int
    max_gap: int
    certified: bool
    values: list = field(default_factory=list)
    borderline: list = field(default_factory=list)
    forced: bool = False
    oracle_values: list = None
    oracle_max_error: float = None
    settings: dict = field(default_factory=dict)

    @property
    def relatively_dense(self) -> bool:
        return verify_relative_dense(self.E, self.window, self.horizon)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RecurrenceReport":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RecurrenceReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        members = set(self.E)
        w.writerow(["k", "value", "in_E"])
        for k, v in enumerate(self.values, start=1):
            w.writerow([k, repr(float(v)), int(k in members)])
        return buf.getvalue()


def max_gap(E, K: int) -> int:
    """Largest step between consecutive members of ``{0} U E``; ``K + 1`` if ``E`` is empty."""
    if not E:
        return K + 1
    pts = [0, *sorted(E)]
    return max(b - a for a, b in zip(pts, pts[1:]))


def verify_relative_dense(E, n: int, K: int) -> bool:
    """True iff every block ``{j, ..., j+n-1}`` with ``1 <= j <= K-n+1`` meets ``E``."""
    if n < 1:
        raise PreconditionError(f"window n must be >= 1, got {n}")
    hits = np.zeros(K + 1, dtype=np.int64)
    for k in E:
        if not 1 <= k <= K:
            raise PreconditionError(f"{k} lies outside [1, {K}]")
        hits[k] = 1
    counts = np.cumsum(hits)
    for j in range(1, K - n + 2):
        if counts[j + n - 1] - counts[j - 1] == 0:
            return False
    return True


def certified_window(rep: GnsRepresentation, x, y, epsilon: float, budget: int = LIMIT_BUDGET) -> int:
    """Smallest ``n`` with ``||(1/n) sum_{k<n} U^k y - P y|| < eps / (||x|| + 1)``.

    Every ``n`` is visited by the running sum, so the minimum is exact rather
    than the result of a bisection over a residual that need not be monotone.
    """
    if not epsilon > 0:
        raise PreconditionError(f"epsilon must be positive, got {epsilon}")
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    bound = epsilon / (np.linalg.norm(x) + 1.0)
    Py = rep.P @ y
    U = rep.U
    acc = np.zeros_like(y)
    v = y
    best = np.inf
    for n in range(1, budget + 1):
        acc += v
        v = U @ v
        r = np.linalg.norm(acc / n - Py)
        if r < bound:
            return n
        best = min(best, r)
    raise ConvergenceError(
        f"no window n <= {budget} certifies eps = {epsilon:g}", best_residual=float(best), n_tried=budget
    )


def _orbit_values(rep, x, y, K):
    out = np.empty(K, dtype=np.complex128)
    v = np.asarray(y, dtype=np.complex128)
    for k in range(K):
        v = rep.U @ v
        out[k] = np.vdot(x, v)
    return out


def _report(rep, x, y, epsilon, K, threshold, kind, certified, forced=False, settings=None):
    if not epsilon > 0:
        raise PreconditionError(f"epsilon must be positive, got {epsilon}")
    hilbert_threshold = float(abs(np.vdot(x, rep.P @ y)) - epsilon)
    window = certified_window(rep, x, y, epsilon)
    if K is None:
        K = HORIZON_FACTOR * window
    if K < 1:
        raise PreconditionError(f"horizon K must be >= 1, got {K}")
    values = np.abs(_orbit_values(rep, x, y, K))
    E = [k for k in range(1, K + 1) if values[k - 1] > threshold]
    borderline = [k for k in range(1, K + 1) if abs(values[k - 1] - threshold) <= BORDERLINE_TOL]
    merged = {"borderline_tol": BORDERLINE_TOL, "horizon_factor": HORIZON_FACTOR, "fix_tol": rep.fix_tol,
              "gram_tol": rep.gram_tol}
    merged.update(settings or {})
    return RecurrenceReport(
        kind=kind,
        epsilon=float(epsilon),
        threshold=float(threshold),
        hilbert_threshold=hilbert_threshold,
        horizon=int(K),
        E=E,
        window=int(window),
        max_gap=max_gap(E, K),
        certified=bool(certified),
        values=[float(v) for v in values],
        borderline=borderline,
        forced=forced,
        settings=merged,
    )


def recurrence_set_hilbert(rep: GnsRepresentation, x, y, epsilon: float, K: int = None) -> RecurrenceReport:
    """``E = {k : |<x, U^k y>| > |<x, P y>| - eps}`` on ``1..K`` (default ``K = 10 * window``)."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    threshold = float(abs(np.vdot(x, rep.P @ y)) - epsilon)
    return _report(rep, x, y, epsilon, K, threshold, "hilbert", certified=True)


def recurrence_set_khintchine(
    system: StarDynamicalSystem, rep: GnsRepresentation, A: AlgebraElement, epsilon: float, K: int = None
) -> RecurrenceReport:
    """``E = {k : |phi(A^* tau^k(A))| > |phi(A)|^2 - eps}``.

    Since ``|phi(A)| <= ||P iota(A)||`` this threshold never exceeds the
    Hilbert one, so the window certificate carries over.
    """
    x = iota_of(rep, A)
    threshold = float(abs(state_apply(system, A)) ** 2 - epsilon)
    return _report(rep, x, x, epsilon, K, threshold, "khintchine", certified=True)


def recurrence_set_pair(
    system: StarDynamicalSystem,
    rep: GnsRepresentation,
    A: AlgebraElement,
    B: AlgebraElement,
    epsilon: float,
    K: int = None,
    force: bool = False,
) -> RecurrenceReport:
    """``E = {k : |phi(A tau^k(B))| > |phi(A) phi(B)| - eps}`` for an ergodic system.

    Raises :class:`HypothesisError` on a non-ergodic system unless ``force``
    is set; a forced report is marked uncertified because the window then
    refers to ``hilbert_threshold`` only.
    """
    verdict = is_ergodic(rep)
    if not verdict.ergodic and not force:
        raise HypothesisError(
            f"pair recurrence needs an ergodic system; fixed space has dimension {verdict.fixed_dimension}. "
            "Without ergodicity the set can be empty (e.g. the identity map with disjoint sets)."
        )
    x = iota_of(rep, A.star)
    y = iota_of(rep, B)
    threshold = float(abs(state_apply(system, A) * state_apply(system, B)) - epsilon)
    return _report(
        rep, x, y, epsilon, K, threshold, "pair", certified=verdict.ergodic, forced=not verdict.ergodic,
        settings={"fixed_dimension": verdict.fixed_dimension},
    )
