import numpy as np
import pytest

from starergodic.ergodic import time_mean_residuals
from starergodic.errors import HypothesisError, InvalidSystemError, PreconditionError
from starergodic.gns import gns_construct
from starergodic.measure import (
    FiniteMeasureSystem,
    embed_commutative,
    identity_system,
    intersection_measure,
    intersection_measures,
    is_ergodic_measure,
    khintchine_report,
    pair_recurrence_report,
    rotation_system,
)


def test_rotation_cycles():
    assert rotation_system(1, 0).cycles() == [[0]]
    assert rotation_system(5, 1).cycles() == [[0, 1, 2, 3, 4]]
    assert sorted(map(sorted, rotation_system(4, 2).cycles())) == [[0, 2], [1, 3]]
    assert sorted(map(sorted, rotation_system(6, 2).cycles())) == [[0, 2, 4], [1, 3, 5]]


def test_one_point_system():
    system = embed_commutative(rotation_system(1, 0))
    assert system.kind.dim == 1
    assert system.state(system.kind.unit()) == pytest.approx(1.0)


def test_non_preserving_measure_is_rejected():
    # on a probability space, mu(T^-1 S) <= mu(S) for all S forces equality, so this map is invalid
    fms = FiniteMeasureSystem([0.75, 0.25], [0, 0])
    assert fms.problems()
    with pytest.raises(InvalidSystemError):
        embed_commutative(fms)


def test_degenerate_but_valid_measure():
    fms = FiniteMeasureSystem([1.0, 0.0], [0, 0])
    assert not fms.problems()
    rep = gns_construct(embed_commutative(fms))
    assert rep.d == 1
    assert is_ergodic_measure(fms)


@pytest.mark.parametrize("mu, T", [([0.5, 0.6], [1, 0]), ([0.5, 0.5], [1, 2]), ([-0.5, 1.5], [0, 1])])
def test_bad_measure_documents(mu, T):
    with pytest.raises((InvalidSystemError, PreconditionError)):
        embed_commutative(FiniteMeasureSystem(mu, T))


def test_intersection_measure_table():
    fms = rotation_system(4, 1)
    A = [0, 1]
    assert intersection_measure(fms, A, A, 0) == pytest.approx(0.5)
    assert intersection_measure(fms, A, A, 1) == pytest.approx(0.25)
    assert intersection_measure(fms, A, A, 2) == 0.0
    assert intersection_measures(fms, A, A, 4) == pytest.approx([0.25, 0.0, 0.25, 0.5])
    with pytest.raises(PreconditionError):
        intersection_measure(fms, [7], A, 1)


def test_khintchine_reports():
    fms = rotation_system(4, 1)
    r = khintchine_report(fms, [0, 1], 0.01, K=40)
    assert r.E == [k for k in range(1, 41) if k % 4 != 2]
    assert r.max_gap == 2 and r.oracle_max_error <= 1e-12
    whole = khintchine_report(fms, [0, 1, 2, 3], 0.01, K=12)
    assert whole.E == list(range(1, 13))
    empty = khintchine_report(fms, [], 0.01, K=12)
    assert empty.E == list(range(1, 13))


def test_pair_report_positive():
    r = pair_recurrence_report(rotation_system(5, 1), [0, 1], [2, 3], 0.01)
    assert r.E and r.relatively_dense
    assert r.values[:5] == pytest.approx(r.values[5:10])
    assert r.oracle_max_error <= 1e-12


def test_pair_report_matches_set_enumeration():
    fms = rotation_system(6, 1)
    A, B = [0, 1], [3, 4]
    r = pair_recurrence_report(fms, A, B, 0.01, K=30)
    mu_a, mu_b = fms.measure(A), fms.measure(B)
    expected = [k for k in range(1, 31) if intersection_measure(fms, A, B, k) > mu_a * mu_b - 0.01]
    assert r.E == expected


def test_pair_report_needs_ergodicity():
    with pytest.raises(HypothesisError):
        pair_recurrence_report(rotation_system(4, 2), [0], [1], 0.01)
    fms = identity_system(4)
    assert fms.measure([0]) * fms.measure([1]) > 0.01
    with pytest.raises(HypothesisError):
        pair_recurrence_report(fms, [0], [1], 0.01)
    r = pair_recurrence_report(fms, [0], [1], 0.01, K=1000, force=True)
    assert r.E == [] and r.forced and not r.certified


@pytest.mark.parametrize(
    "fms, expected",
    [(rotation_system(n, 1), True) for n in (1, 2, 5, 9)]
    + [(rotation_system(4, 2), False), (rotation_system(6, 2), False), (rotation_system(6, 5), True), (identity_system(3), False)],
)
def test_ergodicity_by_cycles(fms, expected):
    assert is_ergodic_measure(fms) is expected


def test_ergodic_indicator_time_means_vanish():
    fms = rotation_system(7, 3)
    system = embed_commutative(fms)
    rep = gns_construct(system)
    for x in range(7):
        r = time_mean_residuals(system, rep, system.kind.indicator([x]), [7, 70, 700])
        assert r[0] < 1e-12 and r[-1] < 1e-12


def test_embedding_is_composition():
    fms = rotation_system(5, 2)
    system = embed_commutative(fms)
    f = system.kind.element(np.arange(5.0))
    np.testing.assert_allclose(system.tau(f).data, [(x + 2) % 5 for x in range(5)])
