import json

import numpy as np
import pytest

from starergodic.algebra import AlgebraKind, build_diagonal_swap
from starergodic.errors import HypothesisError, PreconditionError
from starergodic.gns import GnsRepresentation, gns_construct
from starergodic.measure import embed_commutative, rotation_system
from starergodic.recurrence import (
    RecurrenceReport,
    certified_window,
    max_gap,
    recurrence_set_hilbert,
    recurrence_set_khintchine,
    recurrence_set_pair,
    verify_relative_dense,
)

M2 = AlgebraKind.matrix(2)
E11, E12 = M2.matrix_unit(0, 0), M2.matrix_unit(0, 1)


@pytest.fixture
def flip_rep():
    """Hand-built quotient with U = diag(1, -1)."""
    return GnsRepresentation(
        d=2,
        iota=np.eye(2, dtype=complex),
        omega=np.array([1, 0], dtype=complex),
        U=np.diag([1.0, -1.0]).astype(complex),
        P=np.diag([1.0, 0.0]).astype(complex),
        fixed_basis=np.array([[1.0], [0.0]], dtype=complex),
    )


def test_certified_window_examples(flip_rep):
    assert certified_window(flip_rep, [1, 0], flip_rep.omega, 0.3) == 1
    assert certified_window(flip_rep, [1, 0], [0, 1], 0.6) == 2
    with pytest.raises(PreconditionError):
        certified_window(flip_rep, [1, 0], [0, 1], 0.0)


def test_certified_window_on_four_point_rotation():
    system = embed_commutative(rotation_system(4, 1))
    rep = gns_construct(system)
    x = rep.iota @ system.kind.indicator([0, 1]).vec()
    assert certified_window(rep, x, x, 0.05) <= 8


def test_hilbert_sets(flip_rep):
    r = recurrence_set_hilbert(flip_rep, flip_rep.omega, flip_rep.omega, 0.1, K=20)
    assert r.E == list(range(1, 21))
    r = recurrence_set_hilbert(flip_rep, [0, 1], [0, 1], 0.5, K=20)
    assert r.threshold == -0.5 and r.E == list(range(1, 21))


def test_khintchine_trivial_cases():
    sys = build_diagonal_swap(0.5, 0.5)
    rep = gns_construct(sys)
    r = recurrence_set_khintchine(sys, rep, M2.unit(), 0.1)
    assert r.E == list(range(1, r.horizon + 1)) and r.horizon == 10 * r.window
    r = recurrence_set_khintchine(sys, rep, E12, 0.1)
    assert r.threshold < 0 and len(r.E) == r.horizon


def test_khintchine_on_four_point_rotation():
    system = embed_commutative(rotation_system(4, 1))
    rep = gns_construct(system)
    r = recurrence_set_khintchine(system, rep, system.kind.indicator([0, 1]), 0.01, K=40)
    assert r.E == [k for k in range(1, 41) if k % 4 != 2]
    assert r.max_gap == 2 and verify_relative_dense(r.E, 2, 40)


def test_pair_sets():
    sys = build_diagonal_swap(0.5, 0.5)
    rep = gns_construct(sys)
    r = recurrence_set_pair(sys, rep, M2.unit(), M2.unit(), 0.05)
    assert len(r.E) == r.horizon
    r = recurrence_set_pair(sys, rep, E11, E11, 0.05)
    assert r.threshold == pytest.approx(0.2)
    assert r.E == [k for k in range(1, r.horizon + 1) if k % 2 == 0]
    assert r.max_gap <= r.window and r.relatively_dense and r.certified


def test_pair_needs_ergodicity():
    sys = build_diagonal_swap(1, 0.5)
    rep = gns_construct(sys)
    with pytest.raises(HypothesisError):
        recurrence_set_pair(sys, rep, E11, E11, 0.05)
    r = recurrence_set_pair(sys, rep, E11, E11, 0.05, force=True)
    assert r.forced and not r.certified


def test_larger_epsilon_gives_larger_set():
    system = embed_commutative(rotation_system(9, 2))
    rep = gns_construct(system)
    A = system.kind.indicator([0, 1, 5])
    sets = [set(recurrence_set_khintchine(system, rep, A, eps, K=200).E) for eps in (0.01, 0.05, 0.1, 0.3)]
    assert all(a <= b for a, b in zip(sets, sets[1:]))


@pytest.mark.parametrize(
    "E, n, expected",
    [
        (list(range(1, 21)), 1, True),
        (list(range(2, 21, 2)), 2, True),
        (list(range(2, 21, 2)), 1, False),
        ([k for k in range(1, 21) if k % 4 != 2], 2, True),
        ([], 3, False),
    ],
)
def test_verify_relative_dense(E, n, expected):
    assert verify_relative_dense(E, n, 20) is expected


def test_verify_relative_dense_rejects_bad_input():
    with pytest.raises(PreconditionError):
        verify_relative_dense([1], 0, 10)
    with pytest.raises(PreconditionError):
        verify_relative_dense([11], 2, 10)


def test_max_gap():
    assert max_gap([], 10) == 11
    assert max_gap([3, 4, 9], 10) == 5
    assert max_gap([1, 2, 3], 3) == 1


def test_report_round_trip():
    sys = build_diagonal_swap(0.5, 0.25)
    r = recurrence_set_pair(sys, gns_construct(sys), E11, E11 + 0.3j * E12, 0.05)
    again = RecurrenceReport.from_json(r.to_json())
    assert again == r
    assert again.to_json() == r.to_json()
    assert json.loads(r.to_json())["settings"]["fix_tol"] == 1e-8
    lines = r.to_csv().splitlines()
    assert lines[0] == "k,value,in_E"
    assert len(lines) == r.horizon + 1
    k, value, in_e = lines[2].split(",")
    assert float(value) == r.values[1] and (int(in_e) == 1) == (2 in r.E)
