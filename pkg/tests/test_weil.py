from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jetweil.errors import SchemaError
from jetweil.weil import (D, DHole, Dmany, Dn, Dpow, Dsym, ObjectMap, Poly, Product,
                          Wedge, compose, format_object, identity_map,
                          induced_coeff_map, monomial_basis, parse_object,
                          reduce_monomial, wedge, zero_ideal_generators)

SIMPLE_OBJECTS = [D(), Dn(2), Dn(3), Dpow(1), Dpow(2), Dpow(3), Dsym(2, 2),
                  Dsym(3, 2), DHole(2), DHole(3), Dmany(3),
                  Wedge(Dpow(2), D()), Product(Dpow(2), Dn(2))]


def test_basis_examples():
    assert monomial_basis(Dpow(2)) == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert monomial_basis(Dn(2)) == ((0,), (1,), (2,))
    # the wedge kills every monomial mixing the two sides
    w = wedge(Dpow(2), D())
    assert set(monomial_basis(w)) == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                                      (1, 1, 0)}
    assert all(reduce_monomial(m, w) is None
               for m in [(1, 0, 1), (0, 1, 1), (1, 1, 1)])


def test_reduce_examples():
    assert reduce_monomial((3,), Dn(2)) is None
    assert reduce_monomial((2, 1, 0), Dpow(3)) is None
    assert reduce_monomial((1, 1, 1), DHole(3)) is None
    assert reduce_monomial((1, 1, 0), DHole(3)) == (1, 1, 0)
    assert reduce_monomial((1, 1), Dmany(2)) is None


def test_dsym_basis_size_is_sum_of_blocks():
    from math import comb
    for p in range(1, 4):
        for n in range(0, 5):
            want = 1 + sum(comb(p + k - 1, k) for k in range(1, n + 1))
            assert len(monomial_basis(Dsym(p, n))) == want


@given(st.sampled_from(SIMPLE_OBJECTS))
def test_reduce_is_idempotent_and_absorbing(obj):
    basis = monomial_basis(obj)
    for m in basis:
        assert reduce_monomial(m, obj) == m
    for g in zero_ideal_generators(obj):
        assert reduce_monomial(g, obj) is None
        bumped = tuple(e + 1 if i == 0 else e for i, e in enumerate(g))
        assert reduce_monomial(bumped, obj) is None


def test_identity_matrix():
    for obj in (Dpow(2), Dn(3), Dsym(2, 2)):
        mat = induced_coeff_map(identity_map(obj))
        size = len(monomial_basis(obj))
        assert mat == tuple(tuple(Fraction(1 if i == j else 0) for j in range(size))
                            for i in range(size))


def test_variable_addition_matrix():
    # d -> d1 + d2 sends the square to twice the cross product
    phi = ObjectMap.make(Dpow(2), Dn(2),
                         [Poly.variable(0, obj=Dpow(2)) + Poly.variable(1, obj=Dpow(2))])
    mat = induced_coeff_map(phi)
    basis_src = monomial_basis(Dpow(2))
    basis_tgt = monomial_basis(Dn(2))
    col = {m: i for i, m in enumerate(basis_tgt)}
    row = {m: i for i, m in enumerate(basis_src)}
    assert mat[row[(0, 0)]][col[(0,)]] == 1
    assert mat[row[(1, 0)]][col[(1,)]] == 1
    assert mat[row[(0, 1)]][col[(1,)]] == 1
    assert mat[row[(1, 1)]][col[(2,)]] == 2


def test_tangent_insertion_matrix():
    # d -> (0, ..., 0, d): reads off the glued coordinate
    w = Wedge(Dpow(2), D())
    xi = ObjectMap.make(D(), w, [Poly.zero(obj=D()), Poly.zero(obj=D()),
                                 Poly.variable(0, obj=D())])
    mat = induced_coeff_map(xi)
    basis_src = monomial_basis(D())
    basis_tgt = monomial_basis(w)
    col = {m: i for i, m in enumerate(basis_tgt)}
    assert mat[1][col[(0, 0, 1)]] == 1
    assert sum(mat[1]) == 1


def test_ideal_preservation_rejected():
    # d -> d cannot map a shorter line into a longer one
    with pytest.raises(ValueError):
        ObjectMap.make(Dn(3), Dn(2), [Poly.variable(0, obj=Dn(3))])
    # the glued-product insertion needs the full product to vanish at the source
    with pytest.raises(ValueError):
        ObjectMap.make(Dpow(2), Wedge(Dpow(2), D()),
                       [Poly.variable(0, obj=Dpow(2)),
                        Poly.variable(1, obj=Dpow(2)),
                        Poly.variable(0, obj=Dpow(2))])


def test_glued_insertions_are_valid():
    # (d_1, ..., d_n) -> (d_1, ..., d_n, d_1...d_n) respects the wedge ideal
    for n in (1, 2, 3):
        w = Wedge(Dpow(n), D())
        comps = [Poly.variable(i, obj=Dpow(n)) for i in range(n)]
        comps.append(Poly.monomial((1,) * n, obj=Dpow(n)))
        ObjectMap.make(Dpow(n), w, comps)
    # d -> (d, d^(n+1)) respects the wedge ideal on the truncated line
    for order in (1, 2, 3):
        w = Wedge(Dn(order + 1), D())
        ObjectMap.make(Dn(order + 1), w,
                       [Poly.variable(0, obj=Dn(order + 1)),
                        Poly.monomial((order + 1,), obj=Dn(order + 1))])


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 30))
def test_substitution_is_contravariantly_functorial(seed):
    import random

    rng = random.Random(seed)
    objs = [D(), Dn(2), Dn(3), Dpow(2), Dpow(3), Dsym(2, 2)]
    a, b, c = (rng.choice(objs) for _ in range(3))

    def rand_map(src, tgt):
        for _ in range(60):
            comps = []
            for _ in range(tgt.var_count):
                terms = {}
                for m in monomial_basis(src):
                    if sum(m) == 0 or sum(m) > 4:
                        continue
                    if rng.random() < 0.5:
                        terms[m] = Fraction(rng.randint(-2, 2))
                comps.append(Poly(src.var_count, terms, src))
            try:
                return ObjectMap.make(src, tgt, comps)
            except ValueError:
                continue
        return None

    inner = rand_map(a, b)
    outer = rand_map(b, c)
    if inner is None or outer is None:
        return
    lhs = induced_coeff_map(compose(outer, inner))
    m_inner = induced_coeff_map(inner)   # rows a, cols b
    m_outer = induced_coeff_map(outer)   # rows b, cols c
    rows_a, cols_c = len(lhs), len(lhs[0])
    product = tuple(
        tuple(sum(m_inner[i][k] * m_outer[k][j] for k in range(len(m_outer)))
              for j in range(cols_c))
        for i in range(rows_a))
    assert lhs == product


def test_object_expressions_round_trip():
    for obj in SIMPLE_OBJECTS:
        assert parse_object(format_object(obj)) == obj
    assert parse_object("Wedge( Dpow(2) , D )") == Wedge(Dpow(2), D())
    with pytest.raises(SchemaError):
        parse_object("Dz(2)")
    with pytest.raises(SchemaError):
        parse_object("Dn(2) extra")
