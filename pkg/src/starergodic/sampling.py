"""Random valid *-dynamical systems for property tests and the acceptance corpus.

Every dynamics map drawn here is unital and a contraction for the drawn state
by construction: it is a convex combination of compositions of maps that are
individually unital contractions (conjugation by a unitary commuting with the
density matrix, Schur multipliers in its eigenbasis, permutations of
equal-weight points, conditional expectations, and ``A -> phi(A) 1``).
Degenerate states are drawn on purpose so the GNS quotient is exercised.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, AlgebraKind, State, StarDynamicalSystem, Superoperator


def _random_unitary(rng, n):
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _disk(rng, radius=0.9):
    r = radius * np.sqrt(rng.uniform())
    return r * np.exp(2j * np.pi * rng.uniform())


def _weights(rng, N, allow_zero=True, allow_ties=True):
    """Probability weights, sometimes with zeros and sometimes with repeated values."""
    style = rng.integers(3)
    if style == 0 and allow_ties:
        w = np.ones(N)
    elif style == 1 and allow_ties:
        w = rng.integers(1, 3, size=N).astype(float)
    else:
        w = rng.uniform(0.2, 1.0, size=N)
    if allow_zero and N > 1 and rng.uniform() < 0.4:
        w[rng.integers(N)] = 0.0
    return w / w.sum()


def _tie_permutation(rng, w):
    """A permutation that only swaps points of equal weight."""
    perm = np.arange(len(w))
    for val in np.unique(w):
        idx = np.flatnonzero(w == val)
        perm[idx] = rng.permutation(idx)
    return perm


def random_element(rng, kind: AlgebraKind) -> AlgebraElement:
    data = rng.normal(size=kind.shape) + 1j * rng.normal(size=kind.shape)
    return AlgebraElement(kind, data)


def _matrix_components(rng, n, W, p):
    """Unital contractions on M_n for the state ``W diag(p) W^H``, as superoperators."""
    kind = AlgebraKind.matrix(n)
    Wh = np.conj(W).T

    def conj_by_commuting_unitary():
        # unitary diagonal in the eigenbasis, plus a permutation of equal eigenvalues
        perm = _tie_permutation(rng, p)
        Pi = np.eye(n)[:, perm]
        V = W @ Pi @ np.diag(np.exp(2j * np.pi * rng.uniform(size=n))) @ Wh
        return lambda A: AlgebraElement(kind, V @ A.data @ np.conj(V).T)

    def schur():
        S = np.array([[1.0 if i == j else _disk(rng, 1.0) for j in range(n)] for i in range(n)])
        return lambda A: AlgebraElement(kind, W @ (S * (Wh @ A.data @ W)) @ Wh)

    def expectation():
        rho = W @ np.diag(p) @ Wh
        return lambda A: AlgebraElement(kind, np.trace(rho @ A.data) * np.eye(n))

    def identity():
        return lambda A: A

    return [conj_by_commuting_unitary, schur, expectation, identity]


def random_matrix_system(rng, n: int) -> StarDynamicalSystem:
    kind = AlgebraKind.matrix(n)
    W = _random_unitary(rng, n)
    p = _weights(rng, n)
    rho = W @ np.diag(p) @ np.conj(W).T
    rho = 0.5 * (rho + np.conj(rho).T)
    factories = _matrix_components(rng, n, W, p)
    T = _convex_mixture(rng, kind, factories)
    return StarDynamicalSystem(kind, State(kind, rho), Superoperator(kind, T))


def _function_components(rng, N, w):
    kind = AlgebraKind.function(N)

    def permute():
        perm = _tie_permutation(rng, w)
        return lambda f: AlgebraElement(kind, f.data[perm])

    def conditional_expectation():
        blocks = rng.integers(0, max(1, N // 2), size=N)
        M = np.zeros((N, N))
        for b in np.unique(blocks):
            idx = np.flatnonzero(blocks == b)
            mass = w[idx].sum()
            if mass > 0:
                M[np.ix_(idx, idx)] = w[idx] / mass
            else:
                M[np.ix_(idx, idx)] = 1.0 / len(idx)
        return lambda f: AlgebraElement(kind, M @ f.data)

    def expectation():
        return lambda f: AlgebraElement(kind, np.full(N, w @ f.data))

    def identity():
        return lambda f: f

    return [permute, conditional_expectation, expectation, identity]


def random_function_system(rng, N: int) -> StarDynamicalSystem:
    kind = AlgebraKind.function(N)
    w = _weights(rng, N)
    T = _convex_mixture(rng, kind, _function_components(rng, N, w))
    # rows at null points are invisible to the state; fill them with arbitrary stochastic rows
    for x in np.flatnonzero(w == 0):
        row = rng.uniform(size=N)
        T[x] = row / row.sum()
    return StarDynamicalSystem(kind, State(kind, w), Superoperator(kind, T))


def _convex_mixture(rng, kind, factories):
    terms = int(rng.integers(1, 4))
    coeffs = rng.dirichlet(np.ones(terms))
    T = np.zeros((kind.dim, kind.dim), dtype=np.complex128)
    for c in coeffs:
        depth = int(rng.integers(1, 3))
        fns = [factories[rng.integers(len(factories))]() for _ in range(depth)]

        def composed(A, fns=fns):
            for fn in fns:
                A = fn(A)
            return A

        T += c * Superoperator.from_map(kind, composed).T
    return T


def random_system(rng, matrix_sizes=(2, 3, 4), function_sizes=tuple(range(2, 9))) -> StarDynamicalSystem:
    if rng.uniform() < 0.5:
        return random_matrix_system(rng, int(rng.choice(matrix_sizes)))
    return random_function_system(rng, int(rng.choice(function_sizes)))


def corpus(seed: int = 0, count: int = 200) -> list:
    """``count`` reproducible random systems, alternating matrix and function algebras."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(random_matrix_system(rng, int(rng.choice((2, 3, 4)))))
        else:
            out.append(random_function_system(rng, int(rng.integers(2, 9))))
    return out
