from math import comb

import pytest
from hypothesis import given, strategies as st

from jetweil.combinatorics import (exponents_to_subscripts, integer_partitions,
                                   set_partitions, subscripts_to_exponents,
                                   symmetric_multi_indices)
from jetweil.errors import SizeLimitError


def bell_number(n):
    # Bell triangle, independent of the enumerator
    row = [1]
    for _ in range(n - 1):
        new = [row[-1]]
        for v in row:
            new.append(new[-1] + v)
        row = new
    return row[-1]


def partition_count(n):
    # classic bounded-part counting recurrence
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for maxpart in range(n + 1):
        table[maxpart][0] = 1
    for maxpart in range(1, n + 1):
        for k in range(1, n + 1):
            table[maxpart][k] = table[maxpart - 1][k]
            if k >= maxpart:
                table[maxpart][k] += table[maxpart][k - maxpart]
    return table[n][n]


def test_multi_indices_examples():
    assert symmetric_multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert symmetric_multi_indices(1, 4) == [(4,)]
    assert len(symmetric_multi_indices(3, 2)) == 6


def test_multi_indices_subscript_round_trip():
    for p in range(1, 4):
        for n in range(0, 4):
            for m in symmetric_multi_indices(p, n):
                assert subscripts_to_exponents(exponents_to_subscripts(m), p) == m


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=6))
def test_multi_index_count(p, n):
    out = symmetric_multi_indices(p, n)
    assert len(out) == comb(p + n - 1, n)
    assert len(set(out)) == len(out)
    assert all(sum(m) == n and len(m) == p for m in out)


def test_set_partitions_examples():
    assert set_partitions([1, 2]) == [((1, 2),), ((1,), (2,))]
    assert len(set_partitions([1, 2, 3])) == 5
    assert set_partitions([1]) == [((1,),)]


@given(st.integers(min_value=1, max_value=8))
def test_set_partition_counts_are_bell(n):
    parts = set_partitions(range(n))
    assert len(parts) == bell_number(n)
    assert len(set(parts)) == len(parts)
    for partition in parts:
        seen = [x for block in partition for x in block]
        assert sorted(seen) == list(range(n))
        assert all(block == tuple(sorted(block)) for block in partition)
        assert [b[0] for b in partition] == sorted(b[0] for b in partition)


def test_set_partitions_guard():
    with pytest.raises(SizeLimitError):
        set_partitions(range(13))
    with pytest.raises(SizeLimitError):
        set_partitions([])


def test_integer_partitions_examples():
    assert integer_partitions(3) == [(3,), (1, 2), (1, 1, 1)]
    assert integer_partitions(1) == [(1,)]
    assert len(integer_partitions(5)) == 7


@given(st.integers(min_value=1, max_value=20))
def test_integer_partition_counts(k):
    parts = integer_partitions(k)
    assert len(parts) == partition_count(k)
    assert len(set(parts)) == len(parts)
    for part in parts:
        assert sum(part) == k
        assert all(a <= b for a, b in zip(part, part[1:]))


def test_integer_partitions_guard():
    with pytest.raises(SizeLimitError):
        integer_partitions(31)
    with pytest.raises(SizeLimitError):
        integer_partitions(0)
