"""Coordinate jets of the trivial bundle R^{p+q} -> R^p and their affine operations.

A jet of order n is the tuple (x, u, and one symmetric q-vector block per
degree 1..n); a symmetric form carries only a top-degree block.  Blocks are
stored without multiplicity weighting; all multinomial factors live in the
evaluation formulas.  Serialization mirrors the tuple order: degree-major,
subscript-lexicographic within a degree, coordinate index innermost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .combinatorics import MultiIndex, symmetric_multi_indices
from .errors import PreconditionError, SchemaError
from .taylor import (TaylorElement, fraction_to_str, str_to_fraction, vadd, vsub)
from .weil import Dmany, Dsym


def _block_index(p: int, k: int) -> dict:
    return {m: i for i, m in enumerate(symmetric_multi_indices(p, k))}


@dataclass(frozen=True)
class JetCoord:
    p: int
    q: int
    order: int
    x: tuple
    u: tuple
    blocks: tuple  # blocks[k-1][i] = q-vector for the i-th degree-k multi-index

    @staticmethod
    def make(p, q, order, x, u, blocks) -> "JetCoord":
        x = tuple(Fraction(v) for v in x)
        u = tuple(Fraction(v) for v in u)
        if len(x) != p or len(u) != q:
            raise PreconditionError("base point has wrong dimensions")
        if order < 0 or len(blocks) != order:
            raise PreconditionError(f"expected {order} blocks, got {len(blocks)}")
        packed = []
        for k, block in enumerate(blocks, start=1):
            want = comb(p + k - 1, k)
            block = tuple(tuple(Fraction(v) for v in vec) for vec in block)
            if len(block) != want or any(len(vec) != q for vec in block):
                raise PreconditionError(f"degree-{k} block has wrong shape")
            packed.append(block)
        return JetCoord(p, q, order, x, u, tuple(packed))

    @staticmethod
    def zero(p, q, order, x=None, u=None) -> "JetCoord":
        x = tuple(x) if x is not None else (Fraction(0),) * p
        u = tuple(u) if u is not None else (Fraction(0),) * q
        blocks = [[(Fraction(0),) * q] * comb(p + k - 1, k) for k in range(1, order + 1)]
        return JetCoord.make(p, q, order, x, u, blocks)

    def block_entry(self, m: MultiIndex) -> tuple:
        k = sum(m)
        if not 1 <= k <= self.order:
            raise PreconditionError(f"no degree-{k} block in an order-{self.order} jet")
        return self.blocks[k - 1][_block_index(self.p, k)[tuple(m)]]

    def with_top(self, top) -> "JetCoord":
        return JetCoord.make(self.p, self.q, self.order, self.x, self.u,
                             self.blocks[:-1] + (tuple(top),))


@dataclass(frozen=True)
class SymFormCoord:
    p: int
    q: int
    degree: int
    x: tuple
    u: tuple
    block: tuple  # one q-vector per degree-``degree`` multi-index

    @staticmethod
    def make(p, q, degree, x, u, block) -> "SymFormCoord":
        x = tuple(Fraction(v) for v in x)
        u = tuple(Fraction(v) for v in u)
        if len(x) != p or len(u) != q:
            raise PreconditionError("base point has wrong dimensions")
        if degree < 1:
            raise PreconditionError("form degree must be at least 1")
        want = comb(p + degree - 1, degree)
        block = tuple(tuple(Fraction(v) for v in vec) for vec in block)
        if len(block) != want or any(len(vec) != q for vec in block):
            raise PreconditionError("form block has wrong shape")
        return SymFormCoord(p, q, degree, x, u, block)

    def entry(self, m: MultiIndex) -> tuple:
        return self.block[_block_index(self.p, self.degree)[tuple(m)]]


# ---------------------------------------------------------------------------
# lengths (the dimension formulas behind the tuple encodings)


def jet_tuple_length(p: int, q: int, order: int) -> int:
    return p + q + q * sum(comb(p + k - 1, k) for k in range(1, order + 1))


def microshape_tuple_length(p: int, q: int, order: int) -> int:
    return (p + q) * sum(comb(p + k - 1, k) for k in range(0, order + 1))


def sform_tuple_length(p: int, q: int, degree: int) -> int:
    return p + q + q * comb(p + degree - 1, degree)


def top_microshape_tuple_length(p: int, q: int, degree: int) -> int:
    return p + q + (p + q) * comb(p + degree - 1, degree)


# ---------------------------------------------------------------------------
# projections and the affine operations


def project(j: JetCoord) -> JetCoord:
    """Drop the top block."""
    if j.order < 1:
        raise PreconditionError("order-0 jets have no projection")
    return JetCoord.make(j.p, j.q, j.order - 1, j.x, j.u, j.blocks[:-1])


def project_to(j: JetCoord, order: int) -> JetCoord:
    if not 0 <= order <= j.order:
        raise PreconditionError(f"cannot project an order-{j.order} jet to {order}")
    return JetCoord.make(j.p, j.q, order, j.x, j.u, j.blocks[:order])


def jet_minus(j_plus: JetCoord, j_minus: JetCoord) -> SymFormCoord:
    """Top-block subtraction of two jets agreeing below the top."""
    if (j_plus.p, j_plus.q, j_plus.order) != (j_minus.p, j_minus.q, j_minus.order):
        raise PreconditionError("jets have different shapes")
    if j_plus.order < 1:
        raise PreconditionError("order-0 jets have no difference form")
    if project(j_plus) != project(j_minus):
        raise PreconditionError("jets do not share a projection")
    top = [vsub(a, b) for a, b in zip(j_plus.blocks[-1], j_minus.blocks[-1])]
    return SymFormCoord.make(j_plus.p, j_plus.q, j_plus.order, j_plus.x, j_plus.u, top)


def jet_plus(s: SymFormCoord, j: JetCoord) -> JetCoord:
    """Translate the top block of a jet by a symmetric form at the same point."""
    if (s.p, s.q) != (j.p, j.q) or s.degree != j.order:
        raise PreconditionError("form does not match the jet shape")
    if (s.x, s.u) != (j.x, j.u):
        raise PreconditionError("base points disagree")
    top = [vadd(a, b) for a, b in zip(j.blocks[-1], s.block)]
    return j.with_top(top)


# ---------------------------------------------------------------------------
# embeddings into coefficient-vector elements


def embed(j: JetCoord) -> TaylorElement:
    """The jet as an element over Dsym(p, order) with a constant x-part."""
    obj = Dsym(j.p, j.order)
    zero_x = (Fraction(0),) * j.p
    mapping = {(0,) * j.p: j.x + j.u}
    for k in range(1, j.order + 1):
        for m in symmetric_multi_indices(j.p, k):
            mapping[m] = zero_x + j.block_entry(m)
    return TaylorElement.build(obj, j.p + j.q, mapping)


def is_coordinate_jet(gamma: TaylorElement, p: int, q: int) -> bool:
    """Membership test: the first p coordinates carry no non-unit coefficients."""
    if not isinstance(gamma.obj, Dsym) or gamma.obj.p != p or gamma.dim != p + q:
        return False
    from .taylor import is_degenerate_on
    return is_degenerate_on(gamma, range(p))


def extract(gamma: TaylorElement, p: int, q: int) -> JetCoord:
    if not is_coordinate_jet(gamma, p, q):
        raise PreconditionError("element is not a coordinate jet")
    order = gamma.obj.n
    base = gamma.base_point
    blocks = []
    for k in range(1, order + 1):
        blocks.append([gamma.coeff(m)[p:] for m in symmetric_multi_indices(p, k)])
    return JetCoord.make(p, q, order, base[:p], base[p:], blocks)


def embed_sform(s: SymFormCoord) -> TaylorElement:
    """The form as an element over the all-products-zero object of its block."""
    size = comb(s.p + s.degree - 1, s.degree)
    obj = Dmany(size)
    zero_x = (Fraction(0),) * s.p
    mapping = {(0,) * size: s.x + s.u}
    for i in range(size):
        m = [0] * size
        m[i] = 1
        mapping[tuple(m)] = zero_x + s.block[i]
    return TaylorElement.build(obj, s.p + s.q, mapping)


def extract_sform(gamma: TaylorElement, p: int, q: int, degree: int) -> SymFormCoord:
    size = comb(p + degree - 1, degree)
    if not isinstance(gamma.obj, Dmany) or gamma.obj.k != size or gamma.dim != p + q:
        raise PreconditionError("element does not have the shape of a symmetric form")
    from .taylor import is_degenerate_on
    if not is_degenerate_on(gamma, range(p)):
        raise PreconditionError("element is not degenerate in the base coordinates")
    base = gamma.base_point
    block = []
    for i in range(size):
        m = [0] * size
        m[i] = 1
        block.append(gamma.coeff(tuple(m))[p:])
    return SymFormCoord.make(p, q, degree, base[:p], base[p:], block)


# ---------------------------------------------------------------------------
# canonical linearization and JSON


def jet_to_vector(j: JetCoord) -> tuple:
    out = list(j.x) + list(j.u)
    for block in j.blocks:
        for vec in block:
            out.extend(vec)
    return tuple(out)


def vector_to_jet(values, p: int, q: int, order: int) -> JetCoord:
    values = list(values)
    if len(values) != jet_tuple_length(p, q, order):
        raise PreconditionError(
            f"expected {jet_tuple_length(p, q, order)} values, got {len(values)}")
    x, u = values[:p], values[p:p + q]
    pos = p + q
    blocks = []
    for k in range(1, order + 1):
        block = []
        for _ in range(comb(p + k - 1, k)):
            block.append(tuple(values[pos:pos + q]))
            pos += q
        blocks.append(block)
    return JetCoord.make(p, q, order, x, u, blocks)


def jet_to_dict(j: JetCoord) -> dict:
    return {"p": j.p, "q": j.q, "order": j.order,
            "values": [fraction_to_str(v) for v in jet_to_vector(j)]}


def jet_from_dict(data) -> JetCoord:
    _require_keys(data, ("p", "q", "order", "values"))
    p, q, order = data["p"], data["q"], data["order"]
    if not all(isinstance(v, int) for v in (p, q, order)) or p < 1 or q < 1 or order < 0:
        raise SchemaError("p, q must be positive integers and order non-negative")
    values = [str_to_fraction(v) for v in data["values"]]
    try:
        return vector_to_jet(values, p, q, order)
    except PreconditionError as exc:
        raise SchemaError(str(exc)) from exc


def sform_to_dict(s: SymFormCoord) -> dict:
    values = list(s.x) + list(s.u)
    for vec in s.block:
        values.extend(vec)
    return {"p": s.p, "q": s.q, "degree": s.degree,
            "values": [fraction_to_str(v) for v in values]}


def sform_from_dict(data) -> SymFormCoord:
    _require_keys(data, ("p", "q", "degree", "values"))
    p, q, degree = data["p"], data["q"], data["degree"]
    if not all(isinstance(v, int) for v in (p, q, degree)) or p < 1 or q < 1 or degree < 1:
        raise SchemaError("p, q, degree must be positive integers")
    values = [str_to_fraction(v) for v in data["values"]]
    if len(values) != sform_tuple_length(p, q, degree):
        raise SchemaError(
            f"expected {sform_tuple_length(p, q, degree)} values, got {len(values)}")
    x, u = values[:p], values[p:p + q]
    pos = p + q
    block = []
    for _ in range(comb(p + degree - 1, degree)):
        block.append(tuple(values[pos:pos + q]))
        pos += q
    return SymFormCoord.make(p, q, degree, x, u, block)


def _require_keys(data, keys):
    if not isinstance(data, dict):
        raise SchemaError("payload must be an object")
    for key in keys:
        if key not in data:
            raise SchemaError(f"payload missing {key!r}")
