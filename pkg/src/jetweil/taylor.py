"""Coefficient-vector microshapes and the operations that act on them.

An element of R^m tensored with the coefficient algebra of a small object is
stored as one vector per basis monomial; the unit monomial's vector is the
base point.  Coefficients there are uniquely determined (truncated Taylor
expansion), so equality of elements is equality of coefficient tables.

All values are immutable and all operations pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import MultiIndex
from .errors import PreconditionError, SchemaError
from .weil import (Dpow, ObjectMap, Poly, SmallObject, basis_index, format_object,
                   induced_coeff_map, monomial_basis, parse_object, poly_substitute,
                   zero_like)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(s, v):
    return tuple(s * x for x in v)


@dataclass(frozen=True)
class TaylorElement:
    """Base point plus one coefficient vector per basis monomial of ``obj``."""

    obj: SmallObject
    dim: int
    coeffs: tuple  # aligned with monomial_basis(obj); each entry a tuple of length dim

    @staticmethod
    def build(obj: SmallObject, dim: int, mapping, zero=Fraction(0)) -> "TaylorElement":
        """Assemble from a monomial -> vector mapping; missing monomials are zero."""
        index = basis_index(obj)
        rows = [None] * len(index)
        for m, vec in mapping.items():
            m = tuple(m)
            if m not in index:
                raise PreconditionError(
                    f"monomial {m} is not in the basis of {format_object(obj)}")
            vec = tuple(vec)
            if len(vec) != dim:
                raise PreconditionError(f"coefficient vector {vec} has wrong length")
            rows[index[m]] = vec
        filler = (zero,) * dim
        return TaylorElement(obj, dim, tuple(r if r is not None else filler for r in rows))

    @staticmethod
    def constant(obj: SmallObject, point, zero=Fraction(0)) -> "TaylorElement":
        point = tuple(point)
        return TaylorElement.build(obj, len(point), {(0,) * obj.var_count: point}, zero)

    def coeff(self, m: MultiIndex) -> tuple:
        return self.coeffs[basis_index(self.obj)[tuple(m)]]

    @property
    def base_point(self) -> tuple:
        return self.coeffs[0]  # the unit monomial sorts first

    def coeff_map(self) -> dict:
        return dict(zip(monomial_basis(self.obj), self.coeffs))

    def component(self, i: int) -> Poly:
        """Coordinate i as a reduced polynomial in the object's variables."""
        terms = {m: vec[i] for m, vec in self.coeff_map().items() if vec[i]}
        return Poly(self.obj.var_count, terms, self.obj)


# ---------------------------------------------------------------------------
# polynomial maps between coordinate spaces


@dataclass(frozen=True)
class PolyMap:
    """A polynomial map R^in_dim -> R^out_dim with exact rational coefficients."""

    in_dim: int
    out_dim: int
    components: tuple  # per output: tuple of (exponent MultiIndex, Fraction)

    @classmethod
    def make(cls, in_dim: int, out_dim: int, comps) -> "PolyMap":
        canon = []
        for comp in comps:
            poly = comp if isinstance(comp, Poly) else Poly(in_dim, dict(comp))
            if poly.nvars != in_dim or poly.obj is not None:
                raise ValueError("components must be plain polynomials over the inputs")
            canon.append(tuple(sorted(poly.terms.items())))
        if len(canon) != out_dim:
            raise ValueError("wrong number of components")
        return cls(in_dim, out_dim, tuple(canon))

    @classmethod
    def identity(cls, dim: int) -> "PolyMap":
        return cls.make(dim, dim, [Poly.variable(i, dim) for i in range(dim)])

    def component_polys(self) -> list:
        return [Poly(self.in_dim, dict(t)) for t in self.components]

    def evaluate(self, point) -> tuple:
        point = tuple(point)
        if len(point) != self.in_dim:
            raise PreconditionError("point has wrong dimension")
        out = []
        for poly in self.component_polys():
            total = Fraction(0)
            for m, c in poly.terms.items():
                term = c
                for x, e in zip(point, m):
                    term *= x ** e
                total += term
            out.append(total)
        return tuple(out)


def compose_polymaps(outer: PolyMap, inner: PolyMap) -> PolyMap:
    if inner.out_dim != outer.in_dim:
        raise PreconditionError("polynomial maps do not compose")
    values = inner.component_polys()
    zero = Poly.zero(inner.in_dim)
    comps = [poly_substitute(p, values, zero) for p in outer.component_polys()]
    return PolyMap.make(inner.in_dim, outer.out_dim, comps)


# ---------------------------------------------------------------------------
# the operations


def pushforward(fmap: PolyMap, gamma: TaylorElement) -> TaylorElement:
    """Compose a polynomial map with the element and truncate."""
    if fmap.in_dim != gamma.dim:
        raise PreconditionError(
            f"map expects dimension {fmap.in_dim}, element has {gamma.dim}")
    coords = [gamma.component(i) for i in range(gamma.dim)]
    zero = Poly.zero(obj=gamma.obj)
    images = [poly_substitute(p, coords, zero) for p in fmap.component_polys()]
    mapping = {m: tuple(img.coeff(m) for img in images) for m in monomial_basis(gamma.obj)}
    return TaylorElement.build(gamma.obj, fmap.out_dim, mapping)


def reparam(gamma: TaylorElement, phi: ObjectMap) -> TaylorElement:
    """Substitute ``phi`` into the element: the contravariant coefficient action."""
    if phi.target != gamma.obj:
        raise PreconditionError(
            f"map targets {format_object(phi.target)}, element lives over "
            f"{format_object(gamma.obj)}")
    matrix = induced_coeff_map(phi)
    zero = zero_like(gamma.coeffs[0][0])
    rows = []
    for row in matrix:
        vec = [zero] * gamma.dim
        for t, c in enumerate(row):
            if c:
                coeff = gamma.coeffs[t]
                vec = [v + c * g for v, g in zip(vec, coeff)]
        rows.append(tuple(vec))
    return TaylorElement(phi.source, gamma.dim, tuple(rows))


def _require_dpow(gamma: TaylorElement) -> int:
    if not isinstance(gamma.obj, Dpow):
        raise PreconditionError("operation needs an element over square-zero axes")
    return gamma.obj.n


def scalar_action(alpha, axis: int, gamma: TaylorElement) -> TaylorElement:
    """Scale axis ``axis`` (1-based): each coefficient picks up alpha^exponent."""
    n = _require_dpow(gamma)
    if not 1 <= axis <= n:
        raise PreconditionError(f"axis {axis} out of range 1..{n}")
    alpha = Fraction(alpha)
    mapping = {}
    for m, vec in gamma.coeff_map().items():
        e = m[axis - 1]
        mapping[m] = vec if e == 0 else vscale(alpha ** e, vec)
    return TaylorElement.build(gamma.obj, gamma.dim, mapping,
                               zero=zero_like(gamma.coeffs[0][0]))


def permute(gamma: TaylorElement, sigma) -> TaylorElement:
    """Relabel the axes: axis k becomes axis sigma[k] (0-based permutation)."""
    n = _require_dpow(gamma)
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(n)):
        raise PreconditionError(f"{sigma} is not a permutation of 0..{n - 1}")
    mapping = {}
    for m, vec in gamma.coeff_map().items():
        out = [0] * n
        for k, e in enumerate(m):
            out[sigma[k]] = e
        mapping[tuple(out)] = vec
    return TaylorElement.build(gamma.obj, gamma.dim, mapping,
                               zero=zero_like(gamma.coeffs[0][0]))


def degeneracy(axis: int, gamma: TaylorElement) -> TaylorElement:
    """Insert a fresh axis at position ``axis`` on which nothing depends."""
    n = _require_dpow(gamma)
    if not 1 <= axis <= n + 1:
        raise PreconditionError(f"axis {axis} out of range 1..{n + 1}")
    mapping = {}
    for m, vec in gamma.coeff_map().items():
        mapping[m[:axis - 1] + (0,) + m[axis - 1:]] = vec
    return TaylorElement.build(Dpow(n + 1), gamma.dim, mapping,
                               zero=zero_like(gamma.coeffs[0][0]))


def face(axis: int, gamma: TaylorElement) -> TaylorElement:
    """Set axis ``axis`` to zero and drop it."""
    n = _require_dpow(gamma)
    if not 1 <= axis <= n:
        raise PreconditionError(f"axis {axis} out of range 1..{n}")
    mapping = {}
    for m, vec in gamma.coeff_map().items():
        if m[axis - 1] == 0:
            mapping[m[:axis - 1] + m[axis:]] = vec
    return TaylorElement.build(Dpow(n - 1), gamma.dim, mapping,
                               zero=zero_like(gamma.coeffs[0][0]))


def directional_minus(axis: int, gamma_plus: TaylorElement,
                      gamma_minus: TaylorElement) -> TaylorElement:
    """Subtract along one axis: monomials containing it subtract, the rest

    come from the first argument.  Requires both faces along the axis to agree.
    """
    n = _require_dpow(gamma_plus)
    if gamma_plus.obj != gamma_minus.obj or gamma_plus.dim != gamma_minus.dim:
        raise PreconditionError("elements live in different spaces")
    if face(axis, gamma_plus) != face(axis, gamma_minus):
        raise PreconditionError(f"faces along axis {axis} disagree")
    mapping = {}
    for m, vec in gamma_plus.coeff_map().items():
        if m[axis - 1] >= 1:
            mapping[m] = vsub(vec, gamma_minus.coeff(m))
        else:
            mapping[m] = vec
    return TaylorElement.build(gamma_plus.obj, gamma_plus.dim, mapping,
                               zero=zero_like(gamma_plus.coeffs[0][0]))


def is_degenerate_on(gamma: TaylorElement, coords) -> bool:
    """True when the selected coordinates carry no non-unit coefficients."""
    basis = monomial_basis(gamma.obj)
    for m, vec in zip(basis, gamma.coeffs):
        if sum(m) == 0:
            continue
        if any(vec[i] != 0 for i in coords):
            return False
    return True


def tangent_add(s: TaylorElement, t: TaylorElement) -> TaylorElement:
    """Add two tangent-shaped elements sharing a base point."""
    if s.obj != t.obj or s.dim != t.dim:
        raise PreconditionError("tangents live in different spaces")
    if s.base_point != t.base_point:
        raise PreconditionError("tangents have different base points")
    mapping = {m: (vec if sum(m) == 0 else vadd(vec, t.coeff(m)))
               for m, vec in s.coeff_map().items()}
    return TaylorElement.build(s.obj, s.dim, mapping)


def tangent_scale(alpha, t: TaylorElement) -> TaylorElement:
    """Scale the non-unit coefficients, fixing the base point."""
    alpha = Fraction(alpha)
    mapping = {m: (vec if sum(m) == 0 else vscale(alpha, vec))
               for m, vec in t.coeff_map().items()}
    return TaylorElement.build(t.obj, t.dim, mapping)


# ---------------------------------------------------------------------------
# serialization: rationals travel as exact "p/q" strings, never floats


def fraction_to_str(x: Fraction) -> str:
    return str(Fraction(x))


def str_to_fraction(s) -> Fraction:
    if not isinstance(s, str):
        raise SchemaError(f"rational values must be strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}") from exc


def taylor_to_dict(gamma: TaylorElement) -> dict:
    return {
        "object": format_object(gamma.obj),
        "target_dim": gamma.dim,
        "coeffs": [[list(m), [fraction_to_str(x) for x in vec]]
                   for m, vec in zip(monomial_basis(gamma.obj), gamma.coeffs)],
    }


def taylor_from_dict(data) -> TaylorElement:
    if not isinstance(data, dict):
        raise SchemaError("element payload must be an object")
    for key in ("object", "target_dim", "coeffs"):
        if key not in data:
            raise SchemaError(f"element payload missing {key!r}")
    obj = parse_object(data["object"])
    dim = data["target_dim"]
    if not isinstance(dim, int) or dim < 1:
        raise SchemaError("target_dim must be a positive integer")
    index = basis_index(obj)
    mapping = {}
    for entry in data["coeffs"]:
        if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
            raise SchemaError("coeffs entries must be [multi-index, vector] pairs")
        m, vec = entry
        m = tuple(m)
        if m not in index:
            raise SchemaError(
                f"monomial {list(m)} is not in the basis of {data['object']}")
        if m in mapping:
            raise SchemaError(f"duplicate monomial {list(m)}")
        if len(vec) != dim:
            raise SchemaError(f"vector for {list(m)} has wrong length")
        mapping[m] = tuple(str_to_fraction(x) for x in vec)
    return TaylorElement.build(obj, dim, mapping)
