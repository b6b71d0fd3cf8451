"""Deterministic random generators for jets, curves, and polynomial maps.

Every suite derives one child generator per trial index from its seed, so
individual trials are re-runnable in isolation.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb

from .combinatorics import symmetric_multi_indices
from .jets import JetCoord, SymFormCoord
from .taylor import PolyMap, TaylorElement
from .weil import SmallObject, monomial_basis


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


def rand_fraction(rng, span: int = 6, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def rand_vector(rng, n: int) -> tuple:
    return tuple(rand_fraction(rng) for _ in range(n))


def rand_element(obj: SmallObject, dim: int, rng, base=None) -> TaylorElement:
    """A dense random element; ``base`` pins the unit coefficient when given."""
    mapping = {}
    for m in monomial_basis(obj):
        if sum(m) == 0 and base is not None:
            mapping[m] = tuple(base)
        else:
            mapping[m] = rand_vector(rng, dim)
    return TaylorElement.build(obj, dim, mapping)


def rand_jet(p: int, q: int, order: int, rng, x=None, u=None) -> JetCoord:
    x = tuple(x) if x is not None else rand_vector(rng, p)
    u = tuple(u) if u is not None else rand_vector(rng, q)
    blocks = [[rand_vector(rng, q) for _ in range(comb(p + k - 1, k))]
              for k in range(1, order + 1)]
    return JetCoord.make(p, q, order, x, u, blocks)


def rand_sform(p: int, q: int, degree: int, rng, x=None, u=None) -> SymFormCoord:
    x = tuple(x) if x is not None else rand_vector(rng, p)
    u = tuple(u) if u is not None else rand_vector(rng, q)
    block = [rand_vector(rng, q) for _ in range(comb(p + degree - 1, degree))]
    return SymFormCoord.make(p, q, degree, x, u, block)


def rand_polymap(in_dim: int, out_dim: int, max_degree: int, rng) -> PolyMap:
    comps = []
    for _ in range(out_dim):
        terms = {}
        for deg in range(0, max_degree + 1):
            for m in symmetric_multi_indices(in_dim, deg):
                if rng.random() < 0.7:
                    terms[m] = rand_fraction(rng, span=3)
        comps.append(terms)
    return PolyMap.make(in_dim, out_dim, comps)


def rand_bundle_map(p: int, q: int, max_degree: int, rng) -> PolyMap:
    """A map of the trivial bundle: base components depend on the base only."""
    base = rand_polymap(p, p, max_degree, rng)
    full = rand_polymap(p + q, q, max_degree, rng)
    comps = []
    for terms in base.components:
        comps.append({m + (0,) * q: c for m, c in terms})
    comps.extend(dict(terms) for terms in full.components)
    return PolyMap.make(p + q, p + q, comps)


def rand_permutation(n: int, rng) -> tuple:
    perm = list(range(n))
    rng.shuffle(perm)
    return tuple(perm)


def rand_compatible_pair(spec, dim: int, rng):
    """Two random carrier elements agreeing below the glued degree."""
    gamma_minus = rand_element(spec.carrier, dim, rng)
    top = [m for m in monomial_basis(spec.carrier) if spec.lower.kills(m)]
    mapping = gamma_minus.coeff_map()
    for m in top:
        mapping[m] = rand_vector(rng, dim)
    gamma_plus = TaylorElement.build(spec.carrier, dim, mapping)
    return gamma_plus, gamma_minus


def rand_tangent(spec, gamma: TaylorElement, rng) -> TaylorElement:
    """A random tangent-object element sharing the base point of ``gamma``."""
    return rand_element(spec.tangent, gamma.dim, rng, base=gamma.base_point)
