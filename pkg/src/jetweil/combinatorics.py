"""Enumeration of symmetric multi-indices, set partitions, and integer partitions.

A multi-index is an exponent vector over a fixed variable count.  The same
data in "subscript form" is the sorted tuple of 1-based variable positions
(i_1 <= ... <= i_k), which is how symmetric coefficient blocks are usually
written down.  Everything here is a pure function of its arguments.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement

from .errors import SizeLimitError

MultiIndex = tuple
SetPartition = tuple  # tuple of blocks; each block a sorted tuple of labels
IntPartition = tuple  # non-decreasing tuple of positive parts

SET_PARTITION_LIMIT = 12
INTEGER_PARTITION_LIMIT = 30


def subscripts_to_exponents(subs, p: int) -> MultiIndex:
    """Sorted subscript tuple (1-based) -> exponent vector of length p."""
    m = [0] * p
    for i in subs:
        if not 1 <= i <= p:
            raise ValueError(f"subscript {i} out of range 1..{p}")
        m[i - 1] += 1
    return tuple(m)


def exponents_to_subscripts(m: MultiIndex) -> tuple:
    """Exponent vector -> sorted subscript tuple (1-based)."""
    subs = []
    for pos, e in enumerate(m, start=1):
        subs.extend([pos] * e)
    return tuple(subs)


def symmetric_multi_indices(p: int, n: int) -> list[MultiIndex]:
    """All exponent vectors of total degree exactly n over p variables.

    Ordered lexicographically in subscript form, so the count is C(p+n-1, n)
    and the degree-n block of a symmetric coefficient tuple can be read off
    positionally.
    """
    if p < 1:
        raise ValueError(f"need at least one variable, got p={p}")
    if n < 0:
        raise ValueError(f"degree must be non-negative, got n={n}")
    return [subscripts_to_exponents(subs, p)
            for subs in combinations_with_replacement(range(1, p + 1), n)]


def set_partitions(labels) -> list[SetPartition]:
    """Every partition of ``labels`` into non-empty blocks, exactly once.

    Blocks are sorted tuples, listed by least element; the first block always
    contains the least label.  Count is the Bell number of ``len(labels)``.
    """
    items = sorted(labels)
    if len(set(items)) != len(items):
        raise ValueError("labels must be distinct")
    if not 1 <= len(items) <= SET_PARTITION_LIMIT:
        raise SizeLimitError(
            f"set_partitions supports 1..{SET_PARTITION_LIMIT} labels, got {len(items)}")
    return list(_set_partitions(items))


def _set_partitions(items):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for r in range(len(rest), -1, -1):
        for chosen in combinations(rest, r):
            block = (first,) + chosen
            remaining = [x for x in rest if x not in chosen]
            for tail in _set_partitions(remaining):
                yield (block,) + tail


def integer_partitions(k: int) -> list[IntPartition]:
    """Every partition of k into non-decreasing positive parts, exactly once.

    Listed by decreasing largest part: 3 -> (3,), (1, 2), (1, 1, 1).
    """
    if not 1 <= k <= INTEGER_PARTITION_LIMIT:
        raise SizeLimitError(
            f"integer_partitions supports 1..{INTEGER_PARTITION_LIMIT}, got {k}")
    out = []

    def rec(rest, max_part, acc):
        if rest == 0:
            out.append(tuple(reversed(acc)))
            return
        for m in range(min(rest, max_part), 0, -1):
            acc.append(m)
            rec(rest - m, m, acc)
            acc.pop()

    rec(k, k, [])
    return out
