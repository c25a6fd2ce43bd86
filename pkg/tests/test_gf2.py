import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isoprod.gf2 import (
    BitMatrix,
    BitVector,
    DimensionError,
    add,
    count_independent_tuples,
    in_span,
    nullspace,
    rank,
    rank_rows,
    reduce,
    subspace_canonical,
)


def V(*e):
    return BitVector.from_entries(e)


def brute_span(rows):
    span = {0}
    for r in rows:
        span |= {x ^ r for x in span}
    return span


def test_add_examples():
    assert add(V(0, 0), V(0, 0)) == V(0, 0)
    assert add(V(1, 0, 1), V(1, 1, 0)) == V(0, 1, 1)
    assert V(1, 0, 1) + V(1, 0, 1) == BitVector.zero(3)


def test_add_length_mismatch():
    with pytest.raises(DimensionError):
        add(V(1, 0), V(1, 0, 1))


vectors5 = st.integers(0, 31).map(lambda b: BitVector(5, b))


@given(vectors5, vectors5, vectors5)
def test_add_group_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x + x).bits == 0


def test_rank_examples():
    assert rank(BitMatrix.from_lists([[0] * 3] * 3)) == 0
    assert rank(BitMatrix.identity(4)) == 4
    assert rank(BitMatrix.from_lists([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2


def test_rank_transpose_random():
    rng = np.random.default_rng(0)
    for _ in range(200):
        m, n = rng.integers(1, 13, size=2)
        A = BitMatrix.from_lists(rng.integers(0, 2, size=(m, n)).tolist())
        assert rank(A) == rank(A.transpose())
        # oracle: |span| = 2^rank
        assert len(brute_span(A.rows)) == 1 << rank(A)


def test_in_span_examples():
    assert in_span(V(0, 0, 0), [V(1, 0, 1)])
    assert not in_span(V(1, 1), [V(1, 0)])
    assert in_span(V(0, 1, 1), [V(1, 1, 0), V(1, 0, 1)])
    with pytest.raises(DimensionError):
        in_span(V(1, 1), [V(1, 0, 0)])


@given(st.lists(st.integers(0, 63), max_size=6), st.integers(0, 63))
def test_in_span_matches_rank(rows, v):
    basis = [BitVector(6, r) for r in rows]
    assert in_span(BitVector(6, v), basis) == (rank_rows(rows) == rank_rows(rows + [v]))
    assert in_span(BitVector(6, v), basis) == (v in brute_span(rows))


def test_subspace_canonical_examples():
    assert subspace_canonical([]).rows == ()
    assert subspace_canonical([V(1, 1), V(0, 1)]) == subspace_canonical([V(1, 0), V(0, 1)])
    assert subspace_canonical([V(1, 1, 0), V(1, 1, 0)]).rows == (V(1, 1, 0).bits,)


@given(st.lists(st.integers(0, 255), min_size=1, max_size=5), st.randoms(use_true_random=False))
def test_subspace_canonical_invariant_under_row_ops(rows, rnd):
    base = subspace_canonical([BitVector(8, r) for r in rows])
    mixed = list(rows)
    for _ in range(10):
        i, j = rnd.randrange(len(mixed)), rnd.randrange(len(mixed))
        if i != j:
            mixed[i] ^= mixed[j]
    rnd.shuffle(mixed)
    assert subspace_canonical([BitVector(8, r) for r in mixed]) == base
    assert brute_span(base.rows) == brute_span(rows)


def test_reduce_and_nullspace():
    rows = [0b0111, 0b1100]
    for x in nullspace(rows, 4):
        for r in rows:
            assert bin(x & r).count("1") % 2 == 0
    assert len(nullspace(rows, 4)) == 2
    assert reduce(0b1011, [0b0011]) in (0b1000, 0b1011 ^ 0b0011)


@pytest.mark.parametrize("dim,k", [(1, 1), (3, 2), (4, 3), (6, 2)])
def test_count_independent_tuples_brute(dim, k):
    n = sum(1 for tup in itertools.product(range(1 << dim), repeat=k) if rank_rows(tup) == k)
    assert n == count_independent_tuples(dim, k)
