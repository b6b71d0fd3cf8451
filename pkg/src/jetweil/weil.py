"""Finite nilpotent coefficient algebras and the maps between them.

A small object fixes finitely many formal variables together with a monomial
ideal saying which power products vanish.  Its coefficient algebra has the
surviving monomials as a basis.  A map of small objects is a tuple of
constant-free polynomials, one per target variable; it acts contravariantly
on coefficient vectors by substitution, and that action is realized here as
an exact rational matrix.

Everything is an immutable value; induced matrices are memoized behind a
read-only cache, so concurrent readers are safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import comb

from .combinatorics import MultiIndex, exponents_to_subscripts
from .errors import SchemaError


# ---------------------------------------------------------------------------
# small objects


@dataclass(frozen=True)
class SmallObject:
    @property
    def var_count(self) -> int:
        raise NotImplementedError

    def degree_caps(self) -> tuple:
        """Per-variable exponent bounds; only used to bound basis enumeration."""
        raise NotImplementedError

    def kills(self, m: MultiIndex) -> bool:
        """True when the monomial lies in the nilpotency ideal."""
        raise NotImplementedError


@dataclass(frozen=True)
class D(SmallObject):
    """One variable squaring to zero."""

    @property
    def var_count(self):
        return 1

    def degree_caps(self):
        return (1,)

    def kills(self, m):
        return m[0] > 1


@dataclass(frozen=True)
class Dn(SmallObject):
    """One variable, powers above n vanish."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Dn needs n >= 0")

    @property
    def var_count(self):
        return 1

    def degree_caps(self):
        return (self.n,)

    def kills(self, m):
        return m[0] > self.n


@dataclass(frozen=True)
class Dpow(SmallObject):
    """n variables, each squaring to zero."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Dpow needs n >= 0")

    @property
    def var_count(self):
        return self.n

    def degree_caps(self):
        return (1,) * self.n

    def kills(self, m):
        return any(e > 1 for e in m)


@dataclass(frozen=True)
class Dsym(SmallObject):
    """p variables, total degree above n vanishes."""

    p: int
    n: int

    def __post_init__(self):
        if self.p < 1 or self.n < 0:
            raise ValueError("Dsym needs p >= 1 and n >= 0")

    @property
    def var_count(self):
        return self.p

    def degree_caps(self):
        return (self.n,) * self.p

    def kills(self, m):
        return sum(m) > self.n


@dataclass(frozen=True)
class DHole(SmallObject):
    """n square-zero variables with the full product also killed."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("DHole needs n >= 1")

    @property
    def var_count(self):
        return self.n

    def degree_caps(self):
        return (1,) * self.n

    def kills(self, m):
        return any(e > 1 for e in m) or all(e == 1 for e in m)


@dataclass(frozen=True)
class Dmany(SmallObject):
    """k variables, all products of two (squares included) vanish."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("Dmany needs k >= 0")

    @property
    def var_count(self):
        return self.k

    def degree_caps(self):
        return (1,) * self.k

    def kills(self, m):
        return sum(m) > 1


@dataclass(frozen=True)
class Product(SmallObject):
    """Cartesian product: relations of both sides, no interaction."""

    left: SmallObject
    right: SmallObject

    @property
    def var_count(self):
        return self.left.var_count + self.right.var_count

    def degree_caps(self):
        return self.left.degree_caps() + self.right.degree_caps()

    def kills(self, m):
        nl = self.left.var_count
        return self.left.kills(m[:nl]) or self.right.kills(m[nl:])


@dataclass(frozen=True)
class Wedge(SmallObject):
    """Sum: as the product, but every mixed monomial vanishes."""

    left: SmallObject
    right: SmallObject

    @property
    def var_count(self):
        return self.left.var_count + self.right.var_count

    def degree_caps(self):
        return self.left.degree_caps() + self.right.degree_caps()

    def kills(self, m):
        nl = self.left.var_count
        ml, mr = m[:nl], m[nl:]
        if any(ml) and any(mr):
            return True
        return self.left.kills(ml) or self.right.kills(mr)


def unit_object() -> SmallObject:
    return Dmany(0)


def wedge(a: SmallObject, b: SmallObject) -> Wedge:
    return Wedge(a, b)


def product(a: SmallObject, b: SmallObject) -> Product:
    return Product(a, b)


# ---------------------------------------------------------------------------
# bases and reduction


def _basis_sort_key(m: MultiIndex):
    return (sum(m), exponents_to_subscripts(m))


@lru_cache(maxsize=None)
def monomial_basis(obj: SmallObject) -> tuple:
    """All surviving monomials, unit first, then by degree and subscript order."""
    caps = obj.degree_caps()
    monos = [m for m in cartesian(*(range(c + 1) for c in caps)) if not obj.kills(m)]
    monos.sort(key=_basis_sort_key)
    return tuple(monos)


@lru_cache(maxsize=None)
def basis_index(obj: SmallObject) -> dict:
    return {m: i for i, m in enumerate(monomial_basis(obj))}


def reduce_monomial(m: MultiIndex, obj: SmallObject):
    """The monomial itself if it survives obj's relations, None otherwise."""
    if len(m) != obj.var_count:
        raise ValueError(f"monomial {m} has wrong arity for {format_object(obj)}")
    return None if obj.kills(m) else m


@lru_cache(maxsize=None)
def zero_ideal_generators(obj: SmallObject) -> tuple:
    """A finite monomial generating set of the nilpotency ideal."""
    nv = obj.var_count

    def unit_vec(i, e=1):
        v = [0] * nv
        v[i] = e
        return tuple(v)

    if isinstance(obj, D):
        return ((2,),)
    if isinstance(obj, Dn):
        return ((obj.n + 1,),)
    if isinstance(obj, Dpow):
        return tuple(unit_vec(i, 2) for i in range(nv))
    if isinstance(obj, Dsym):
        from .combinatorics import symmetric_multi_indices
        return tuple(symmetric_multi_indices(obj.p, obj.n + 1))
    if isinstance(obj, DHole):
        return tuple(unit_vec(i, 2) for i in range(nv)) + ((1,) * nv,)
    if isinstance(obj, Dmany):
        gens = []
        for i in range(nv):
            for j in range(i, nv):
                v = [0] * nv
                v[i] += 1
                v[j] += 1
                gens.append(tuple(v))
        return tuple(gens)
    if isinstance(obj, (Product, Wedge)):
        nl = obj.left.var_count
        pad_l = lambda g: g + (0,) * (nv - nl)
        pad_r = lambda g: (0,) * nl + g
        gens = [pad_l(g) for g in zero_ideal_generators(obj.left)]
        gens += [pad_r(g) for g in zero_ideal_generators(obj.right)]
        if isinstance(obj, Wedge):
            for i in range(nl):
                for j in range(nl, nv):
                    v = [0] * nv
                    v[i] = 1
                    v[j] = 1
                    gens.append(tuple(v))
        return tuple(gens)
    raise TypeError(f"unknown object {obj!r}")


# ---------------------------------------------------------------------------
# polynomials, optionally reduced modulo an object's ideal


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


class Poly:
    """Multivariate polynomial over Q; with ``obj`` set, reduced modulo its ideal.

    Supports mixed arithmetic with ints and Fractions, which makes it usable
    as a drop-in scalar ring inside the coefficient formulas.
    """

    __slots__ = ("nvars", "obj", "terms")

    def __init__(self, nvars: int, terms: dict, obj: SmallObject | None = None):
        if obj is not None and obj.var_count != nvars:
            raise ValueError("nvars does not match obj")
        self.nvars = nvars
        self.obj = obj
        self.terms = {}
        for m, c in terms.items():
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong arity {nvars}")
            if obj is not None and obj.kills(m):
                continue
            c = _as_fraction(c)
            if c:
                self.terms[m] = self.terms.get(m, Fraction(0)) + c
        for m in [m for m, c in self.terms.items() if not c]:
            del self.terms[m]

    # -- constructors

    @classmethod
    def zero(cls, nvars: int | None = None, obj: SmallObject | None = None):
        if obj is not None:
            nvars = obj.var_count
        return cls(nvars, {}, obj)

    @classmethod
    def const(cls, value, nvars: int | None = None, obj: SmallObject | None = None):
        if obj is not None:
            nvars = obj.var_count
        return cls(nvars, {(0,) * nvars: value}, obj)

    @classmethod
    def variable(cls, i: int, nvars: int | None = None, obj: SmallObject | None = None):
        if obj is not None:
            nvars = obj.var_count
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, {tuple(m): Fraction(1)}, obj)

    @classmethod
    def monomial(cls, m: MultiIndex, coeff=Fraction(1), obj: SmallObject | None = None,
                 nvars: int | None = None):
        if obj is not None:
            nvars = obj.var_count
        return cls(nvars, {tuple(m): coeff}, obj)

    # -- helpers

    def _compat(self, other):
        if self.nvars != other.nvars or self.obj != other.obj:
            raise ValueError("polynomials live in different rings")

    def zero_like(self):
        return Poly(self.nvars, {}, self.obj)

    def coeff(self, m: MultiIndex) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_part(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    # -- arithmetic

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.nvars, self.obj)
        if not isinstance(other, Poly):
            return NotImplemented
        self._compat(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Poly(self.nvars, terms, self.obj)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()}, self.obj)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.nvars, self.obj)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.nvars, {m: c * other for m, c in self.terms.items()}, self.obj)
        if not isinstance(other, Poly):
            return NotImplemented
        self._compat(other)
        terms = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(a + b for a, b in zip(ma, mb))
                if self.obj is not None and self.obj.kills(m):
                    continue
                terms[m] = terms.get(m, Fraction(0)) + ca * cb
        return Poly(self.nvars, terms, self.obj)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.nvars, self.obj)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.nvars, self.obj)
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.nvars, self.obj, self.terms) == (other.nvars, other.obj, other.terms)

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = [f"{c}*x^{m}" for m, c in sorted(self.terms.items())]
        return "Poly(" + " + ".join(bits) + ")"


def poly_substitute(poly: Poly, values: list, zero: Poly) -> Poly:
    """Evaluate ``poly`` with ``values[i]`` in place of variable i.

    ``values`` live in the ring of ``zero``; constants of ``poly`` map to
    constants there.
    """
    out = zero
    for m, c in poly.terms.items():
        term = Poly.const(c, zero.nvars, zero.obj)
        for i, e in enumerate(m):
            if e:
                term = term * values[i] ** e
        out = out + term
    return out


def zero_like(scalar):
    """Additive zero in the ring of ``scalar`` (Fraction, int, or Poly)."""
    if isinstance(scalar, Poly):
        return scalar.zero_like()
    return Fraction(0)


# ---------------------------------------------------------------------------
# maps of small objects


def _canonical_terms(poly: Poly) -> tuple:
    return tuple(sorted(poly.terms.items(), key=lambda mc: _basis_sort_key(mc[0])))


@dataclass(frozen=True)
class ObjectMap:
    """A base-point-preserving polynomial map between small objects.

    ``components`` holds one constant-free polynomial per target variable,
    written in the source variables and reduced.  Construction verifies that
    substitution sends the target's nilpotency ideal into the source's, so
    the contravariant coefficient action below is well defined.
    """

    source: SmallObject
    target: SmallObject
    components: tuple  # per target variable: tuple of (monomial, Fraction)

    @classmethod
    def make(cls, source: SmallObject, target: SmallObject, comps) -> "ObjectMap":
        polys = []
        for comp in comps:
            if isinstance(comp, Poly):
                if comp.nvars != source.var_count:
                    raise ValueError("component has wrong variable count")
                poly = Poly(source.var_count, comp.terms, source)
            else:
                poly = Poly(source.var_count, dict(comp), source)
            if poly.constant_part():
                raise ValueError("components must have no constant term")
            polys.append(poly)
        if len(polys) != target.var_count:
            raise ValueError(
                f"expected {target.var_count} components, got {len(polys)}")
        for gen in zero_ideal_generators(target):
            img = Poly.const(1, obj=source)
            for i, e in enumerate(gen):
                if e:
                    img = img * polys[i] ** e
            if not img.is_zero:
                raise ValueError(
                    f"map does not preserve the nilpotency ideal at {gen}")
        return cls(source, target, tuple(_canonical_terms(p) for p in polys))

    def component_polys(self) -> list:
        return [Poly(self.source.var_count, dict(t), self.source) for t in self.components]


def identity_map(obj: SmallObject) -> ObjectMap:
    return ObjectMap.make(obj, obj,
                          [Poly.variable(i, obj=obj) for i in range(obj.var_count)])


def identity_components_map(source: SmallObject, target: SmallObject) -> ObjectMap:
    """Identity on variables between objects sharing a variable count."""
    if source.var_count != target.var_count:
        raise ValueError("objects do not share a variable count")
    return ObjectMap.make(source, target,
                          [Poly.variable(i, obj=source) for i in range(source.var_count)])


def left_injection(w: Wedge | Product) -> ObjectMap:
    """left -> left (+) right, zero on the right-hand variables."""
    nl = w.left.var_count
    comps = [Poly.variable(i, obj=w.left) for i in range(nl)]
    comps += [Poly.zero(obj=w.left)] * w.right.var_count
    return ObjectMap.make(w.left, w, comps)


def right_injection(w: Wedge | Product) -> ObjectMap:
    """right -> left (+) right, zero on the left-hand variables."""
    nr = w.right.var_count
    comps = [Poly.zero(obj=w.right)] * w.left.var_count
    comps += [Poly.variable(i, obj=w.right) for i in range(nr)]
    return ObjectMap.make(w.right, w, comps)


def compose(outer: ObjectMap, inner: ObjectMap) -> ObjectMap:
    """outer after inner: inner.source -> outer.target."""
    if inner.target != outer.source:
        raise ValueError("maps do not compose")
    zero = Poly.zero(obj=inner.source)
    values = inner.component_polys()
    comps = [poly_substitute(p, values, zero) for p in outer.component_polys()]
    return ObjectMap.make(inner.source, outer.target, comps)


@lru_cache(maxsize=None)
def induced_coeff_map(phi: ObjectMap) -> tuple:
    """The substitution matrix of ``phi`` on coefficient vectors.

    Rows run over the basis of ``phi.source``, columns over the basis of
    ``phi.target``: applying the matrix to the coefficients of an element over
    the target yields the coefficients of the substituted element over the
    source.
    """
    src_basis = monomial_basis(phi.source)
    tgt_basis = monomial_basis(phi.target)
    comps = phi.component_polys()
    columns = []
    for t in tgt_basis:
        img = Poly.const(1, obj=phi.source)
        for i, e in enumerate(t):
            if e:
                img = img * comps[i] ** e
        columns.append(img)
    return tuple(
        tuple(col.coeff(s) for col in columns) for s in src_basis)


# ---------------------------------------------------------------------------
# object expressions (used by the CLI and the JSON schemas)


def format_object(obj: SmallObject) -> str:
    if isinstance(obj, D):
        return "D"
    if isinstance(obj, Dn):
        return f"Dn({obj.n})"
    if isinstance(obj, Dpow):
        return f"Dpow({obj.n})"
    if isinstance(obj, Dsym):
        return f"Dsym({obj.p},{obj.n})"
    if isinstance(obj, DHole):
        return f"DHole({obj.n})"
    if isinstance(obj, Dmany):
        return f"Dmany({obj.k})"
    if isinstance(obj, Product):
        return f"Product({format_object(obj.left)},{format_object(obj.right)})"
    if isinstance(obj, Wedge):
        return f"Wedge({format_object(obj.left)},{format_object(obj.right)})"
    raise TypeError(f"unknown object {obj!r}")


_TOKEN = re.compile(r"\s*([A-Za-z]+|\d+|[(),])")


def _tokenize(text: str) -> list:
    tokens, pos = [], 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise SchemaError(f"bad object expression near {text[pos:]!r}")
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


def parse_object(text: str) -> SmallObject:
    """Parse an object expression such as ``Wedge(Dpow(2),D)``."""
    tokens = _tokenize(text)

    def expect(tok):
        if not tokens or tokens[0] != tok:
            raise SchemaError(f"expected {tok!r} in object expression {text!r}")
        tokens.pop(0)

    def parse_int():
        if not tokens or not tokens[0].isdigit():
            raise SchemaError(f"expected integer in object expression {text!r}")
        return int(tokens.pop(0))

    def parse():
        if not tokens:
            raise SchemaError(f"truncated object expression {text!r}")
        head = tokens.pop(0)
        if head == "D":
            return D()
        if head in ("Dn", "Dpow", "DHole", "Dmany"):
            expect("(")
            arg = parse_int()
            expect(")")
            return {"Dn": Dn, "Dpow": Dpow, "DHole": DHole, "Dmany": Dmany}[head](arg)
        if head == "Dsym":
            expect("(")
            p = parse_int()
            expect(",")
            n = parse_int()
            expect(")")
            return Dsym(p, n)
        if head in ("Product", "Wedge"):
            expect("(")
            a = parse()
            expect(",")
            b = parse()
            expect(")")
            return (Product if head == "Product" else Wedge)(a, b)
        raise SchemaError(f"unknown object constructor {head!r}")

    try:
        obj = parse()
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    if tokens:
        raise SchemaError(f"trailing tokens in object expression {text!r}")
    return obj


def basis_summary(obj: SmallObject) -> dict:
    basis = monomial_basis(obj)
    by_degree: dict = {}
    for m in basis:
        by_degree[sum(m)] = by_degree.get(sum(m), 0) + 1
    return {
        "object": format_object(obj),
        "variables": obj.var_count,
        "monomials": [list(m) for m in basis],
        "count": len(basis),
        "count_nonunit": len(basis) - 1,
        "count_by_degree": {str(k): v for k, v in sorted(by_degree.items())},
    }
