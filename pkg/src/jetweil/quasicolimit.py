"""Gluing squares for the three object families and the exact solver behind them.

Each family comes with a square

    lower --inj--> carrier          carrier --psi--> apex
      |inj                  and        tangent --xi--> apex
    carrier --phi--> apex

whose gluing property is *not* assumed: ``solve_pair`` and ``strong_plus``
assemble the corresponding linear system on coefficient vectors from the
induced matrices and insist on unique solvability at runtime, so the gluing
lemmas are executable checks.  Solving is exact over the rationals; there is
no pivot tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .combinatorics import symmetric_multi_indices
from .errors import PreconditionError, SingularSystemError
from .taylor import TaylorElement, reparam
from .weil import (D, DHole, Dmany, Dn, Dpow, Dsym, ObjectMap, Poly, Product,
                   SmallObject, Wedge, compose, identity_components_map,
                   induced_coeff_map, left_injection, right_injection)


# ---------------------------------------------------------------------------
# exact linear solving


def solve_exact(rows, rhs_rows):
    """Solve the stacked system A x = b for every right-hand-side column.

    ``rows`` is a list of coefficient rows (possibly more rows than columns);
    ``rhs_rows`` the matching right-hand sides, one vector per row.  Raises
    SingularSystemError unless the solution exists and is unique.
    """
    m = len(rows)
    if m == 0:
        raise SingularSystemError("empty system")
    n = len(rows[0])
    width = len(rhs_rows[0]) if rhs_rows else 0
    a = [[Fraction(x) for x in row] for row in rows]
    b = [[Fraction(x) for x in row] for row in rhs_rows]
    piv_rows = []
    row_at = 0
    for col in range(n):
        pivot = next((r for r in range(row_at, m) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularSystemError(f"no pivot for unknown {col}: solution not unique")
        a[row_at], a[pivot] = a[pivot], a[row_at]
        b[row_at], b[pivot] = b[pivot], b[row_at]
        inv = 1 / a[row_at][col]
        a[row_at] = [x * inv for x in a[row_at]]
        b[row_at] = [x * inv for x in b[row_at]]
        for r in range(m):
            if r != row_at and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row_at])]
                b[r] = [x - f * y for x, y in zip(b[r], b[row_at])]
        piv_rows.append(row_at)
        row_at += 1
    for r in range(row_at, m):
        if any(x != 0 for x in b[r]):
            raise SingularSystemError("inconsistent system: no solution")
    return [tuple(b[r]) for r in piv_rows], width


# ---------------------------------------------------------------------------
# the squares


@dataclass(frozen=True)
class PushoutSpec:
    """The maps of one gluing family, with the square checked at construction."""

    family: str
    lower: SmallObject
    carrier: SmallObject
    tangent: SmallObject
    apex: SmallObject
    inj: ObjectMap   # lower -> carrier
    phi: ObjectMap   # carrier -> apex
    psi: ObjectMap   # carrier -> apex
    xi: ObjectMap    # tangent -> apex

    def __post_init__(self):
        if compose(self.psi, self.inj) != compose(self.phi, self.inj):
            raise ValueError("gluing square does not commute")


def dpow_spec(n: int) -> PushoutSpec:
    """Square-zero-axes family at order n."""
    if n < 1:
        raise ValueError("need n >= 1")
    carrier = Dpow(n)
    tangent = D()
    apex = Wedge(carrier, tangent)
    psi_comps = [Poly.variable(i, obj=carrier) for i in range(n)]
    psi_comps.append(Poly.monomial((1,) * n, obj=carrier))
    return PushoutSpec(
        family="dpow", lower=DHole(n), carrier=carrier, tangent=tangent, apex=apex,
        inj=identity_components_map(DHole(n), carrier),
        phi=left_injection(apex),
        psi=ObjectMap.make(carrier, apex, psi_comps),
        xi=right_injection(apex))


def dn_spec(order: int) -> PushoutSpec:
    """Truncated-line family at order ``order``.

    The glued line coordinate carries a 1/order! weight so that this family's
    difference and translation match the square-zero family's along the
    variable-addition map; the torsor laws are insensitive to the weight.
    """
    if order < 1:
        raise ValueError("need order >= 1")
    carrier = Dn(order)
    tangent = D()
    apex = Wedge(carrier, tangent)
    psi_comps = [Poly.variable(0, obj=carrier),
                 Poly.monomial((order,), Fraction(1, factorial(order)), obj=carrier)]
    return PushoutSpec(
        family="dn", lower=Dn(order - 1), carrier=carrier, tangent=tangent, apex=apex,
        inj=identity_components_map(Dn(order - 1), carrier),
        phi=left_injection(apex),
        psi=ObjectMap.make(carrier, apex, psi_comps),
        xi=right_injection(apex))


def dsym_spec(p: int, order: int) -> PushoutSpec:
    """Graded family: p variables truncated at total degree ``order``."""
    if p < 1 or order < 1:
        raise ValueError("need p >= 1 and order >= 1")
    carrier = Dsym(p, order)
    top = symmetric_multi_indices(p, order)
    tangent = Dmany(len(top))
    apex = Wedge(carrier, tangent)
    psi_comps = [Poly.variable(i, obj=carrier) for i in range(p)]
    psi_comps += [Poly.monomial(m, obj=carrier) for m in top]
    return PushoutSpec(
        family="dsym", lower=Dsym(p, order - 1), carrier=carrier, tangent=tangent,
        apex=apex,
        inj=identity_components_map(Dsym(p, order - 1), carrier),
        phi=left_injection(apex),
        psi=ObjectMap.make(carrier, apex, psi_comps),
        xi=right_injection(apex))


def spec_for_carrier(obj: SmallObject) -> PushoutSpec:
    """The family spec whose carrier is ``obj``."""
    if isinstance(obj, Dpow):
        return dpow_spec(obj.n)
    if isinstance(obj, Dn):
        return dn_spec(obj.n)
    if isinstance(obj, Dsym):
        return dsym_spec(obj.p, obj.n)
    raise PreconditionError(f"no gluing family carries {obj!r}")


def tensor_with_line(spec: PushoutSpec, m: int) -> PushoutSpec:
    """The same square with every object multiplied by a truncated line.

    Used to check that the difference and translation commute with
    line-parametrized reparametrization.
    """
    line = Dn(m)

    def prod(obj):
        return Product(obj, line)

    def extend(phi: ObjectMap) -> ObjectMap:
        src = prod(phi.source)
        comps = []
        for terms in phi.components:
            comps.append(Poly(src.var_count,
                              {mono + (0,): c for mono, c in terms}, src))
        comps.append(Poly.variable(src.var_count - 1, obj=src))
        return ObjectMap.make(src, prod(phi.target), comps)

    return PushoutSpec(
        family=spec.family + "*line", lower=prod(spec.lower), carrier=prod(spec.carrier),
        tangent=prod(spec.tangent), apex=prod(spec.apex),
        inj=extend(spec.inj), phi=extend(spec.phi), psi=extend(spec.psi),
        xi=extend(spec.xi))


# ---------------------------------------------------------------------------
# solving


def _stack_solve(spec, maps, elements):
    rows = []
    rhs = []
    for phi, elem in zip(maps, elements):
        rows.extend(induced_coeff_map(phi))
        rhs.extend(elem.coeffs)
    solution, _ = solve_exact(rows, rhs)
    return TaylorElement(spec.apex, elements[0].dim, tuple(solution))


def solve_pair(spec: PushoutSpec, gamma_plus: TaylorElement,
               gamma_minus: TaylorElement) -> TaylorElement:
    """The unique apex element restricting to the pair along psi and phi."""
    for g in (gamma_plus, gamma_minus):
        if g.obj != spec.carrier:
            raise PreconditionError("elements must live over the family carrier")
    if gamma_plus.dim != gamma_minus.dim:
        raise PreconditionError("elements have different dimensions")
    if reparam(gamma_plus, spec.inj) != reparam(gamma_minus, spec.inj):
        raise PreconditionError("pair does not agree below the glued degree")
    return _stack_solve(spec, (spec.psi, spec.phi), (gamma_plus, gamma_minus))


def strong_minus(spec: PushoutSpec, gamma_plus: TaylorElement,
                 gamma_minus: TaylorElement) -> TaylorElement:
    """The top-order discrepancy of the pair, as an element over the tangent object."""
    return reparam(solve_pair(spec, gamma_plus, gamma_minus), spec.xi)


def strong_plus(spec: PushoutSpec, t: TaylorElement,
                gamma: TaylorElement) -> TaylorElement:
    """Translate ``gamma`` by the tangent-object element ``t``."""
    if t.obj != spec.tangent:
        raise PreconditionError("translation term must live over the tangent object")
    if gamma.obj != spec.carrier:
        raise PreconditionError("element must live over the family carrier")
    if t.dim != gamma.dim:
        raise PreconditionError("elements have different dimensions")
    if t.base_point != gamma.base_point:
        raise PreconditionError("base points disagree")
    glued = _stack_solve(spec, (spec.xi, spec.phi), (t, gamma))
    return reparam(glued, spec.psi)
