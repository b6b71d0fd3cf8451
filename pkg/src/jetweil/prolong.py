"""Jets as executable lifting operators, in three interchangeable representations.

A coordinate jet determines, for each of three input shapes, an operator
lifting base-space microshapes to bundle-space microshapes:

* ``first``: iterated tangents; the operator eats a single tangent and
  returns a tangent valued in the next-lower jet space.
* ``dpow``: inputs over n square-zero axes; the lifted coefficient of a
  monomial block is a sum over set partitions of its axes.
* ``dn``: inputs over one truncated line; the lifted degree-k coefficient is
  a sum over integer partitions of k, weighted by how many ways each shape
  arises, which is the derivative rule for a truncated composition.

The ``dn`` evaluator is cross-checked against the ``dpow`` one along the
variable-addition reparametrization; that identity is what ties the two
families' affine structures together.

Evaluation cores are written against a plain scalar ring so the same code
can run with polynomial-valued scalars; that is how the line-parametrized
compatibility squares are checked without re-deriving tensored formulas.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from math import comb, factorial

from .combinatorics import (integer_partitions, set_partitions,
                            subscripts_to_exponents, symmetric_multi_indices)
from .errors import InvariantError, PreconditionError, SingularSystemError
from .jets import (JetCoord, SymFormCoord, jet_to_vector, project, project_to,
                   vector_to_jet)
from .quasicolimit import solve_exact
from .randgen import rand_element, rand_fraction, rand_permutation, trial_rng
from .report import Report
from .taylor import (TaylorElement, reparam, scalar_action, permute, degeneracy,
                     taylor_to_dict, tangent_scale)
from .weil import (D, Dn, Dpow, ObjectMap, Poly, Product, SmallObject,
                   identity_components_map, monomial_basis)


# ---------------------------------------------------------------------------
# reparametrization maps used by the operators and their laws


def plus_map(n: int) -> ObjectMap:
    """Variable addition: n square-zero axes into one truncated line of order n."""
    src = Dpow(n)
    total = Poly.zero(obj=src)
    for i in range(n):
        total = total + Poly.variable(i, obj=src)
    return ObjectMap.make(src, Dn(n), [total])


def contract_last_map(n: int) -> ObjectMap:
    """(n+1) axes onto n: the last two multiply into the last slot."""
    src = Dpow(n + 1)
    comps = [Poly.variable(i, obj=src) for i in range(n - 1)]
    m = [0] * (n + 1)
    m[n - 1] = 1
    m[n] = 1
    comps.append(Poly.monomial(tuple(m), obj=src))
    return ObjectMap.make(src, Dpow(n), comps)


def merge_map(n: int, sizes, sigma) -> ObjectMap:
    """Group the n axes into consecutive products after permuting by sigma."""
    if sum(sizes) != n or any(s < 1 for s in sizes):
        raise PreconditionError(f"{sizes} is not a splitting of {n}")
    src = Dpow(n)
    comps = []
    pos = 0
    for size in sizes:
        m = [0] * n
        for a in range(pos, pos + size):
            m[sigma[a]] += 1
        comps.append(Poly.monomial(tuple(m), obj=src))
        pos += size
    return ObjectMap.make(src, Dpow(len(sizes)), comps)


def full_product_map(n: int) -> ObjectMap:
    """All n axes multiplied into a single tangent coordinate."""
    src = Dpow(n)
    return ObjectMap.make(src, D(), [Poly.monomial((1,) * n, obj=src)])


def line_inclusion(low: int, high: int) -> ObjectMap:
    """Truncated line of order ``low`` into the one of order ``high``."""
    if low > high:
        raise PreconditionError("inclusion goes from lower order to higher")
    return identity_components_map(Dn(low), Dn(high))


def scale_line_map(alpha, order: int) -> ObjectMap:
    src = Dn(order)
    return ObjectMap.make(src, src, [Fraction(alpha) * Poly.variable(0, obj=src)])


def line_monomial_map(n: int, low: int, k: int) -> ObjectMap:
    """d -> d^k from the order-n line onto the order-``low`` line."""
    return ObjectMap.make(Dn(n), Dn(low), [Poly.monomial((k,), obj=Dn(n))])


def axis_param_map(n: int, axis: int, m: int) -> ObjectMap:
    """(axes, e) -> axes with axis ``axis`` multiplied by the line parameter e."""
    src = Product(Dpow(n), Dn(m))
    comps = []
    for i in range(n):
        mono = [0] * (n + 1)
        mono[i] = 1
        if i == axis - 1:
            mono[n] = 1
        comps.append(Poly.monomial(tuple(mono), obj=src))
    return ObjectMap.make(src, Dpow(n), comps)


def line_param_map(m: int, power: int = 1) -> ObjectMap:
    """(d, e) -> d * e^power from the tangent line times a parameter line."""
    src = Product(D(), Dn(m))
    return ObjectMap.make(src, D(), [Poly.monomial((1, power), obj=src)])


def dline_param_map(order: int, m: int) -> ObjectMap:
    """(d, e) -> d*e from a truncated line times a parameter line."""
    src = Product(Dn(order), Dn(m))
    return ObjectMap.make(src, Dn(order), [Poly.monomial((1, 1), obj=src)])


def zeropad_line(gamma: TaylorElement, order: int) -> TaylorElement:
    """Extend a truncated-line element by zero top coefficients."""
    if not isinstance(gamma.obj, Dn) or gamma.obj.n > order:
        raise PreconditionError("element does not extend to the requested order")
    mapping = {m: vec for m, vec in gamma.coeff_map().items()}
    return TaylorElement.build(Dn(order), gamma.dim, mapping)


# ---------------------------------------------------------------------------
# the three evaluators


def _require_base(j: JetCoord, gamma: TaylorElement):
    if gamma.dim != j.p:
        raise PreconditionError("input lives in the wrong dimension")
    if gamma.base_point != j.x:
        raise PreconditionError("input base point differs from the jet's")


def _axes_monomial(axes, n: int):
    m = [0] * n
    for a in axes:
        m[a - 1] = 1
    return tuple(m)


def _dpow_core(j: JetCoord, coeffs: dict, zero) -> dict:
    n, p, q = j.order, j.p, j.q
    out = {}
    for m in monomial_basis(Dpow(n)):
        xpart = tuple(coeffs[m])
        if sum(m) == 0:
            out[m] = xpart + tuple(j.u)
            continue
        axes = [i + 1 for i, e in enumerate(m) if e]
        uvec = [zero] * q
        for blocks in set_partitions(axes):
            ys = [coeffs[_axes_monomial(block, n)] for block in blocks]
            for tup in cartesian(range(p), repeat=len(blocks)):
                w = ys[0][tup[0]]
                for t in range(1, len(tup)):
                    w = w * ys[t][tup[t]]
                entry = j.block_entry(subscripts_to_exponents(sorted(i + 1 for i in tup), p))
                uvec = [acc + e * w for acc, e in zip(uvec, entry)]
        out[m] = xpart + tuple(uvec)
    return out


def apply_dpow(j: JetCoord, gamma: TaylorElement) -> TaylorElement:
    """Lift an element over n square-zero axes through an order-n jet."""
    if not isinstance(gamma.obj, Dpow) or gamma.obj.n != j.order:
        raise PreconditionError("input must live over as many square-zero axes as the jet order")
    _require_base(j, gamma)
    out = _dpow_core(j, gamma.coeff_map(), Fraction(0))
    return TaylorElement.build(gamma.obj, j.p + j.q, out)


def _shape_weight(parts) -> Fraction:
    w = Fraction(1)
    for count in Counter(parts).values():
        w /= factorial(count)
    return w


def _dn_core(j: JetCoord, coeffs: dict, zero) -> dict:
    n, p, q = j.order, j.p, j.q
    c = {k: coeffs[(k,)] for k in range(1, n + 1)}
    out = {(0,): tuple(coeffs[(0,)]) + tuple(j.u)}
    for k in range(1, n + 1):
        uvec = [zero] * q
        for parts in integer_partitions(k):
            weight = _shape_weight(parts)
            for tup in cartesian(range(p), repeat=len(parts)):
                w = c[parts[0]][tup[0]]
                for t in range(1, len(tup)):
                    w = w * c[parts[t]][tup[t]]
                entry = j.block_entry(subscripts_to_exponents(sorted(i + 1 for i in tup), p))
                uvec = [acc + (weight * e) * w for acc, e in zip(uvec, entry)]
        out[(k,)] = tuple(c[k]) + tuple(uvec)
    return out


def apply_dn(j: JetCoord, gamma: TaylorElement) -> TaylorElement:
    """Lift a truncated-line element through a jet of the same order."""
    if not isinstance(gamma.obj, Dn) or gamma.obj.n != j.order:
        raise PreconditionError("input must live over the truncated line of the jet order")
    _require_base(j, gamma)
    out = _dn_core(j, gamma.coeff_map(), Fraction(0))
    return TaylorElement.build(gamma.obj, j.p + j.q, out)


def apply_dn_checked(j: JetCoord, gamma: TaylorElement) -> TaylorElement:
    """apply_dn, with its defining compatibility along variable addition asserted.

    The lift of the added-variables input must equal the added-variables image
    of the lift; a failure here falsifies the closed form and is fatal.
    """
    out = apply_dn(j, gamma)
    pm = plus_map(j.order)
    lhs = apply_dpow(j, reparam(gamma, pm))
    rhs = reparam(out, pm)
    if lhs != rhs:
        raise InvariantError(
            "line-representation lift is incompatible with the axes representation",
            payload={"jet": jet_to_vector(j), "input": taylor_to_dict(gamma)})
    return out


def shift_vector(j: JetCoord, y) -> tuple:
    """Contract every block with a direction; the derivative of the jet tuple."""
    p, q = j.p, j.q
    out = list(y)
    for k in range(0, j.order):
        for m in ([(0,) * p] if k == 0 else symmetric_multi_indices(p, k)):
            vec = [Fraction(0)] * q
            for i in range(p):
                entry = j.block_entry(tuple(a + b for a, b in
                                            zip(m, subscripts_to_exponents((i + 1,), p))))
                vec = [acc + e * y[i] for acc, e in zip(vec, entry)]
            out.extend(vec)
    return tuple(out)


def apply_first(j: JetCoord, t: TaylorElement) -> TaylorElement:
    """Lift a single tangent to a tangent valued in the next-lower jet space."""
    if j.order < 1:
        raise PreconditionError("need a jet of order at least 1")
    if not isinstance(t.obj, D):
        raise PreconditionError("input must be a tangent over D")
    _require_base(j, t)
    y = t.coeff((1,))
    base = jet_to_vector(project(j))
    return TaylorElement.build(D(), len(base), {(0,): base, (1,): shift_vector(j, y)})


def first_order_lift(j: JetCoord, t: TaylorElement) -> TaylorElement:
    """The bundle-valued tangent lift through the order-1 truncation of a jet.

    The order-0 value space is the bundle itself, so no repackaging is needed.
    """
    return apply_first(project_to(j, 1), t)


def apply_rep(rep: str, j: JetCoord, gamma: TaylorElement) -> TaylorElement:
    if rep == "first":
        return apply_first(j, gamma)
    if rep == "dpow":
        return apply_dpow(j, gamma)
    if rep == "dn":
        return apply_dn(j, gamma)
    raise PreconditionError(f"unknown representation {rep!r}")


# ---------------------------------------------------------------------------
# symmetric forms as operators


def _sform_dpow_core(s: SymFormCoord, coeffs: dict, zero) -> list:
    p, q, n = s.p, s.q, s.degree
    ys = [coeffs[_axes_monomial((k,), n)] for k in range(1, n + 1)]
    value = [zero] * q
    for tup in cartesian(range(p), repeat=n):
        w = ys[0][tup[0]]
        for t in range(1, n):
            w = w * ys[t][tup[t]]
        entry = s.entry(subscripts_to_exponents(sorted(i + 1 for i in tup), p))
        value = [acc + e * w for acc, e in zip(value, entry)]
    return value


def _sform_dn_core(s: SymFormCoord, coeffs: dict, zero) -> list:
    p, q, n = s.p, s.q, s.degree
    c1 = coeffs[(1,)]
    value = [zero] * q
    for tup in cartesian(range(p), repeat=n):
        w = c1[tup[0]]
        for t in range(1, n):
            w = w * c1[tup[t]]
        entry = s.entry(subscripts_to_exponents(sorted(i + 1 for i in tup), p))
        value = [acc + e * w for acc, e in zip(value, entry)]
    return value


@dataclass(frozen=True)
class SymFormOp:
    """A coordinate symmetric form, evaluated as a vertical-tangent operator."""

    tag: str  # "dpow" | "dn"
    form: SymFormCoord

    @property
    def p(self):
        return self.form.p

    @property
    def q(self):
        return self.form.q

    @property
    def degree(self):
        return self.form.degree

    @property
    def base_x(self):
        return self.form.x

    def apply(self, gamma: TaylorElement) -> TaylorElement:
        s = self.form
        if self.tag == "dpow":
            if not isinstance(gamma.obj, Dpow) or gamma.obj.n != s.degree:
                raise PreconditionError("input shape does not match the form degree")
        elif self.tag == "dn":
            if not isinstance(gamma.obj, Dn) or gamma.obj.n != s.degree:
                raise PreconditionError("input shape does not match the form degree")
        else:
            raise PreconditionError(f"unknown form representation {self.tag!r}")
        if gamma.dim != s.p or gamma.base_point != s.x:
            raise PreconditionError("input base point differs from the form's")
        core = _sform_dpow_core if self.tag == "dpow" else _sform_dn_core
        value = core(s, gamma.coeff_map(), Fraction(0))
        return TaylorElement.build(
            D(), s.p + s.q,
            {(0,): s.x + s.u, (1,): (Fraction(0),) * s.p + tuple(value)})

    def apply_tensored(self, gamma: TaylorElement) -> TaylorElement:
        base_obj, param_obj, split, _ = _split_product(gamma)
        want = Dpow(self.degree) if self.tag == "dpow" else Dn(self.degree)
        if base_obj != want:
            raise PreconditionError("product base does not match the form degree")
        core = _sform_dpow_core if self.tag == "dpow" else _sform_dn_core
        value = core(self.form, split, Poly.zero(obj=param_obj))
        s = self.form
        out = {(0,): s.x + s.u, (1,): (Fraction(0),) * s.p + tuple(value)}
        return _join_product(D(), param_obj, out, s.p + s.q)


def apply_sform(s: SymFormCoord, tag: str, gamma: TaylorElement) -> TaylorElement:
    return SymFormOp(tag, s).apply(gamma)


# ---------------------------------------------------------------------------
# running the evaluators with line-valued scalars


def _split_product(gamma: TaylorElement):
    obj = gamma.obj
    if not isinstance(obj, Product):
        raise PreconditionError("expected an element over a product object")
    base_obj, param_obj = obj.left, obj.right
    nb = base_obj.var_count
    zero = Poly.zero(obj=param_obj)
    split = {m: [zero] * gamma.dim for m in monomial_basis(base_obj)}
    for mono, vec in gamma.coeff_map().items():
        a, e = mono[:nb], mono[nb:]
        row = split[a]
        for i, val in enumerate(vec):
            if val:
                row[i] = row[i] + Poly.monomial(e, val, obj=param_obj)
    return base_obj, param_obj, {m: tuple(v) for m, v in split.items()}, gamma.dim


def _join_product(base_obj: SmallObject, param_obj: SmallObject, out: dict,
                  dim: int) -> TaylorElement:
    def coeff_of(value, e):
        if isinstance(value, Poly):
            return value.coeff(e)
        return value if sum(e) == 0 else Fraction(0)

    mapping = {}
    for a, vec in out.items():
        for e in monomial_basis(param_obj):
            mapping[a + e] = tuple(coeff_of(v, e) for v in vec)
    return TaylorElement.build(Product(base_obj, param_obj), dim, mapping)


def tensored_apply(j: JetCoord, rep: str, gamma: TaylorElement) -> TaylorElement:
    """Apply the jet operator with scalars in the parameter line of a product."""
    base_obj, param_obj, split, dim = _split_product(gamma)
    if rep == "dpow":
        if not isinstance(base_obj, Dpow) or base_obj.n != j.order:
            raise PreconditionError("product base does not match the jet order")
        out = _dpow_core(j, split, Poly.zero(obj=param_obj))
    elif rep == "dn":
        if not isinstance(base_obj, Dn) or base_obj.n != j.order:
            raise PreconditionError("product base does not match the jet order")
        out = _dn_core(j, split, Poly.zero(obj=param_obj))
    else:
        raise PreconditionError(f"unknown representation {rep!r}")
    return _join_product(base_obj, param_obj, out, j.p + j.q)


# ---------------------------------------------------------------------------
# jets as operator objects


@dataclass(frozen=True)
class TangentialOp:
    """A lifting operator presented by its jet data and a representation tag."""

    rep: str
    jet: JetCoord

    @property
    def p(self):
        return self.jet.p

    @property
    def q(self):
        return self.jet.q

    @property
    def order(self):
        return self.jet.order

    @property
    def base_x(self):
        return self.jet.x

    def apply(self, gamma: TaylorElement) -> TaylorElement:
        return apply_rep(self.rep, self.jet, gamma)

    def apply_tensored(self, gamma: TaylorElement) -> TaylorElement:
        return tensored_apply(self.jet, self.rep, gamma)

    def project(self) -> "TangentialOp":
        return TangentialOp(self.rep, project(self.jet))


# ---------------------------------------------------------------------------
# reconstruction: invert the jet -> operator assignments by probing


def _indicator_tangent(x, i):
    p = len(x)
    e = [Fraction(0)] * p
    e[i] = Fraction(1)
    return TaylorElement.build(D(), p, {(0,): tuple(x), (1,): tuple(e)})


def _reconstruct_first(apply_fn, p, q, order, x):
    lower = None
    top: dict = {}
    collected: dict = {}
    for i in range(p):
        out = apply_fn(_indicator_tangent(x, i))
        base_jet = vector_to_jet(out.base_point, p, q, order - 1)
        if lower is None:
            lower = base_jet
        elif lower != base_jet:
            raise PreconditionError("operator is not a consistent tangent lift")
        deriv = out.coeff((1,))
        if tuple(deriv[:p]) != tuple(_indicator_tangent(x, i).coeff((1,))):
            raise PreconditionError("operator does not project to the identity")
        pos = p
        for k in range(0, order):
            monos = [(0,) * p] if k == 0 else symmetric_multi_indices(p, k)
            for m in monos:
                target = tuple(a + b for a, b in
                               zip(m, subscripts_to_exponents((i + 1,), p)))
                vec = tuple(deriv[pos:pos + q])
                pos += q
                key = target
                if key in collected and collected[key] != vec:
                    raise PreconditionError("operator contractions are inconsistent")
                collected[key] = vec
    blocks = list(lower.blocks)
    top_block = [collected[m] for m in symmetric_multi_indices(p, order)]
    for k in range(1, order):
        for idx, m in enumerate(symmetric_multi_indices(p, k)):
            if collected[m] != blocks[k - 1][idx]:
                raise PreconditionError("operator contractions disagree with its base")
    return JetCoord.make(p, q, order, lower.x, lower.u, blocks + [top_block])


def _reconstruct_dpow(apply_fn, p, q, order, x):
    obj = Dpow(order)
    base = None
    entries: dict = {}
    for subs in cartesian(*(range(1, p + 1) for _ in range(order))):
        if list(subs) != sorted(subs):
            continue
        mapping = {(0,) * order: tuple(x)}
        for axis in range(order):
            e = [Fraction(0)] * p
            e[subs[axis] - 1] = Fraction(1)
            mapping[_axes_monomial((axis + 1,), order)] = tuple(e)
        out = apply_fn(TaylorElement.build(obj, p, mapping))
        if base is None:
            base = out.base_point
        elif base != out.base_point:
            raise PreconditionError("operator base point is inconsistent")
        for m in monomial_basis(obj):
            if sum(m) == 0:
                continue
            axes = [i for i, e in enumerate(m) if e]
            target = subscripts_to_exponents(sorted(subs[a] for a in axes), p)
            vec = tuple(out.coeff(m)[p:])
            if target in entries and entries[target] != vec:
                raise PreconditionError("operator coefficients are inconsistent")
            entries[target] = vec
    blocks = [[entries[m] for m in symmetric_multi_indices(p, k)]
              for k in range(1, order + 1)]
    return JetCoord.make(p, q, order, base[:p], base[p:], blocks)


def _reconstruct_dn(apply_fn, p, q, order, x, rng):
    obj = Dn(order)
    unknown_index = []
    for k in range(1, order + 1):
        for m in symmetric_multi_indices(p, k):
            unknown_index.append(m)
    shadow = {}
    for m in unknown_index:
        blocks = [[(Fraction(1),) if mm == m else (Fraction(0),)
                   for mm in symmetric_multi_indices(p, k)]
                  for k in range(1, order + 1)]
        shadow[m] = JetCoord.make(p, 1, order, x, (Fraction(0),), blocks)

    probes = []
    for k in range(1, order + 1):
        for i in range(p):
            e = [Fraction(0)] * p
            e[i] = Fraction(1)
            probes.append(TaylorElement.build(obj, p, {(0,): tuple(x), (k,): tuple(e)}))
    probes.extend(rand_element(obj, p, rng, base=x) for _ in range(p * order))

    rows = []
    rhs = []
    base = None
    solution = None
    for probe in probes:
        out = apply_fn(probe)
        if base is None:
            base = out.base_point
        elif base != out.base_point:
            raise PreconditionError("operator base point is inconsistent")
        outs = {m: _dn_core(shadow[m], probe.coeff_map(), Fraction(0))
                for m in unknown_index}
        for k in range(1, order + 1):
            rows.append([outs[m][(k,)][p] for m in unknown_index])
            rhs.append(tuple(out.coeff((k,))[p:]))
    for _ in range(10):
        try:
            solution, _ = solve_exact(rows, rhs)
            break
        except SingularSystemError as exc:
            if "inconsistent" in str(exc):
                raise PreconditionError(
                    f"operator is not a line-representation lift: {exc}")
            probe = rand_element(obj, p, rng, base=x)
            out = apply_fn(probe)
            outs = {m: _dn_core(shadow[m], probe.coeff_map(), Fraction(0))
                    for m in unknown_index}
            for k in range(1, order + 1):
                rows.append([outs[m][(k,)][p] for m in unknown_index])
                rhs.append(tuple(out.coeff((k,))[p:]))
    if solution is None:
        raise PreconditionError("probing did not determine the operator")
    blocks = []
    pos = 0
    for k in range(1, order + 1):
        block = [tuple(solution[pos + idx])
                 for idx in range(comb(p + k - 1, k))]
        pos += comb(p + k - 1, k)
        blocks.append(block)
    return JetCoord.make(p, q, order, base[:p], base[p:], blocks)


def reconstruct_jet(rep: str, apply_fn, p: int, q: int, order: int, x,
                    rng=None) -> JetCoord:
    """Recover the jet behind a black-box lifting operator.

    The operator is probed on finitely many inputs; the candidate jet is then
    re-applied to a fresh input and must reproduce the operator exactly.
    """
    rng = rng if rng is not None else trial_rng(0, 0)
    if rep == "first":
        candidate = _reconstruct_first(apply_fn, p, q, order, x)
    elif rep == "dpow":
        candidate = _reconstruct_dpow(apply_fn, p, q, order, x)
    elif rep == "dn":
        candidate = _reconstruct_dn(apply_fn, p, q, order, x, rng)
    else:
        raise PreconditionError(f"unknown representation {rep!r}")
    check_obj = {"first": D(), "dpow": Dpow(order), "dn": Dn(order)}[rep]
    for _ in range(3):
        probe = rand_element(check_obj, p, rng, base=x)
        if apply_fn(probe) != apply_rep(rep, candidate, probe):
            raise PreconditionError(
                "operator is not in the image of the jet realization")
    return candidate


# ---------------------------------------------------------------------------
# randomized validators for operator laws


def _project_chain(op, order: int):
    cur = op
    while cur.order > order:
        cur = cur.project()
    return cur


def _counter(**kwargs) -> dict:
    out = {}
    for key, value in kwargs.items():
        if isinstance(value, TaylorElement):
            out[key] = taylor_to_dict(value)
        else:
            out[key] = value
    return out


def _run_property(report: Report, name: str, law: str, trial_fn, trials: int, seed: int):
    for index in range(trials):
        rng = trial_rng(seed, index)
        counter = trial_fn(rng)
        if counter is not None:
            counter["trial"] = index
            report.add(name, law, False, counter)
            return
    report.add(name, law, True)


def validate_pseudotangential(op, trials: int = 40, seed: int = 0) -> Report:
    """Randomized exact checks of the lifting-operator laws.

    ``op`` must expose ``p``, ``q``, ``order``, ``base_x``, ``apply`` and,
    for the parametrized-square check, ``apply_tensored``; ``project`` feeds
    the checks that compare an operator against its own truncation.  Failures
    are reported with the offending inputs, never raised.
    """
    rep = getattr(op, "rep", "dpow")
    report = Report("pseudotangential", trials, seed)
    p, q, n = op.p, op.q, op.order
    x = op.base_x
    obj = {"dpow": Dpow(n), "dn": Dn(n), "first": D()}[rep]

    def rand_input(rng, over=None):
        return rand_element(over if over is not None else obj, p, rng, base=x)

    def projection(rng):
        gamma = rand_input(rng)
        out = op.apply(gamma)
        for m in monomial_basis(obj):
            if tuple(out.coeff(m)[:p]) != tuple(gamma.coeff(m)):
                return _counter(input=gamma, output=out)
        return None

    _run_property(report, "projection", "the lift sits over its input", projection,
                  trials, seed)

    if rep == "dpow":
        def axis_scaling(rng):
            gamma = rand_input(rng)
            alpha = rand_fraction(rng)
            axis = rng.randint(1, n)
            lhs = op.apply(scalar_action(alpha, axis, gamma))
            rhs = scalar_action(alpha, axis, op.apply(gamma))
            if lhs != rhs:
                return _counter(input=gamma, alpha=str(alpha), axis=axis, lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "axis-scaling",
                      "the lift commutes with scaling one axis", axis_scaling,
                      trials, seed + 1)

        def param_square(rng):
            gamma = rand_input(rng)
            m = rng.randint(1, 2)
            axis = rng.randint(1, n)
            pmap = axis_param_map(n, axis, m)
            lhs = op.apply_tensored(reparam(gamma, pmap))
            rhs = reparam(op.apply(gamma), pmap)
            if lhs != rhs:
                return _counter(input=gamma, m=m, axis=axis, lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "line-parameter-square",
                      "the lift commutes with line-parametrized axis scaling",
                      param_square, trials, seed + 2)

        def permutation(rng):
            gamma = rand_input(rng)
            sigma = rand_permutation(n, rng)
            lhs = op.apply(permute(gamma, sigma))
            rhs = permute(op.apply(gamma), sigma)
            if lhs != rhs:
                return _counter(input=gamma, sigma=list(sigma), lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "permutation",
                      "the lift commutes with relabeling the axes", permutation,
                      trials, seed + 3)

        if n >= 2 and getattr(op, "project", None) is not None:
            def contraction(rng):
                gamma = rand_input(rng, Dpow(n - 1))
                cmap = contract_last_map(n - 1)
                lhs = op.apply(reparam(gamma, cmap))
                rhs = reparam(op.project().apply(gamma), cmap)
                if lhs != rhs:
                    return _counter(input=gamma, lhs=lhs, rhs=rhs)
                return None

            _run_property(report, "contraction-projection",
                          "on merged-axes inputs the lift agrees with its truncation",
                          contraction, trials, seed + 4)

            def merge(rng):
                m = rng.randint(1, n - 1)
                cuts = sorted(rng.sample(range(1, n), m - 1)) + [n]
                sizes = []
                prev = 0
                for cut in cuts:
                    sizes.append(cut - prev)
                    prev = cut
                sigma = rand_permutation(n, rng)
                mmap = merge_map(n, sizes, sigma)
                gamma = rand_input(rng, Dpow(m))
                lhs = op.apply(reparam(gamma, mmap))
                rhs = reparam(_project_chain(op, m).apply(gamma), mmap)
                if lhs != rhs:
                    return _counter(input=gamma, sizes=sizes, sigma=list(sigma),
                                    lhs=lhs, rhs=rhs)
                return None

            _run_property(report, "merge-projection",
                          "grouped-axes inputs factor through the lower-order lift",
                          merge, trials, seed + 5)

        if getattr(op, "jet", None) is not None and n >= 2:
            def line_square(rng):
                gamma = rand_input(rng, Dn(n - 1))
                lhs = reparam(apply_dn(op.jet, zeropad_line(gamma, n)),
                              line_inclusion(n - 1, n))
                rhs = apply_dn(project(op.jet), gamma)
                if lhs != rhs:
                    return _counter(input=gamma, lhs=lhs, rhs=rhs)
                return None

            _run_property(report, "line-rep-projection-square",
                          "truncating commutes with the line representation",
                          line_square, trials, seed + 6)

    if rep == "dn" and n >= 2 and getattr(op, "project", None) is not None:
        def restriction(rng):
            gamma = rand_input(rng, Dn(n - 1))
            incl = line_inclusion(n - 1, n)
            lhs = reparam(op.apply(zeropad_line(gamma, n)), incl)
            rhs = op.project().apply(gamma)
            if lhs != rhs:
                return _counter(input=gamma, lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "restriction-consistency",
                      "restricting the lift recovers the truncated operator",
                      restriction, trials, seed + 7)

        def extension_free(rng):
            gamma = rand_input(rng, Dn(n - 1))
            incl = line_inclusion(n - 1, n)
            ext1 = zeropad_line(gamma, n)
            mapping = ext1.coeff_map()
            mapping[(n,)] = tuple(rand_fraction(rng) for _ in range(p))
            ext2 = TaylorElement.build(Dn(n), p, mapping)
            if reparam(op.apply(ext1), incl) != reparam(op.apply(ext2), incl):
                return _counter(input=gamma)
            return None

        _run_property(report, "extension-independence",
                      "the restricted lift ignores the top extension",
                      extension_free, trials, seed + 8)

    return report


def _is_zero_tangent(t: TaylorElement) -> bool:
    return all(v == 0 for v in t.coeff((1,)))


def validate_symmetric_form(form, trials: int = 40, seed: int = 0) -> Report:
    """Randomized exact checks of the vertical top-degree form laws."""
    report = Report("symmetric-form", trials, seed)
    p, q, n = form.p, form.q, form.degree
    x = form.base_x
    tag = form.tag
    obj = Dpow(n) if tag == "dpow" else Dn(n)

    def rand_input(rng, over=None):
        return rand_element(over if over is not None else obj, p, rng, base=x)

    def verticality(rng):
        out = form.apply(rand_input(rng))
        if any(v != 0 for v in out.coeff((1,))[:p]):
            return _counter(output=out)
        return None

    _run_property(report, "verticality", "values are vertical tangents",
                  verticality, trials, seed)

    if tag == "dpow":
        def axis_linear(rng):
            gamma = rand_input(rng)
            alpha = rand_fraction(rng)
            axis = rng.randint(1, n)
            lhs = form.apply(scalar_action(alpha, axis, gamma))
            rhs = tangent_scale(alpha, form.apply(gamma))
            if lhs != rhs:
                return _counter(input=gamma, alpha=str(alpha), axis=axis,
                                lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "axis-linearity",
                      "scaling one axis scales the value once", axis_linear,
                      trials, seed + 1)

        def full_scaling(rng):
            gamma = rand_input(rng)
            alpha = rand_fraction(rng)
            scaled = gamma
            for axis in range(1, n + 1):
                scaled = scalar_action(alpha, axis, scaled)
            lhs = form.apply(scaled)
            rhs = tangent_scale(alpha ** n, form.apply(gamma))
            if lhs != rhs:
                return _counter(input=gamma, alpha=str(alpha), lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "degree-homogeneity",
                      "scaling every axis scales the value by the degree power",
                      full_scaling, trials, seed + 2)

        def perm_invariance(rng):
            gamma = rand_input(rng)
            sigma = rand_permutation(n, rng)
            if form.apply(permute(gamma, sigma)) != form.apply(gamma):
                return _counter(input=gamma, sigma=list(sigma))
            return None

        _run_property(report, "permutation-invariance",
                      "the value ignores axis relabeling", perm_invariance,
                      trials, seed + 3)

        def param_square(rng):
            gamma = rand_input(rng)
            m = rng.randint(1, 2)
            axis = rng.randint(1, n)
            lhs = form.apply_tensored(reparam(gamma, axis_param_map(n, axis, m)))
            rhs = reparam(form.apply(gamma), line_param_map(m, 1))
            if lhs != rhs:
                return _counter(input=gamma, m=m, axis=axis, lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "line-parameter-square",
                      "line-parametrized scaling passes through the value once",
                      param_square, trials, seed + 4)

        if n >= 2:
            def contraction_vanishing(rng):
                gamma = rand_input(rng, Dpow(n - 1))
                out = form.apply(reparam(gamma, contract_last_map(n - 1)))
                if not _is_zero_tangent(out):
                    return _counter(input=gamma, output=out)
                return None

            _run_property(report, "contraction-vanishing",
                          "merged-axes inputs are annihilated",
                          contraction_vanishing, trials, seed + 5)

            def degeneracy_vanishing(rng):
                gamma = rand_input(rng, Dpow(n - 1))
                axis = rng.randint(1, n)
                out = form.apply(degeneracy(axis, gamma))
                if not _is_zero_tangent(out):
                    return _counter(input=gamma, axis=axis, output=out)
                return None

            _run_property(report, "degeneracy-vanishing",
                          "inputs independent of one axis are annihilated",
                          degeneracy_vanishing, trials, seed + 6)
    else:
        def power_scaling(rng):
            gamma = rand_input(rng)
            alpha = rand_fraction(rng)
            lhs = form.apply(reparam(gamma, scale_line_map(alpha, n)))
            rhs = tangent_scale(alpha ** n, form.apply(gamma))
            if lhs != rhs:
                return _counter(input=gamma, alpha=str(alpha), lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "degree-homogeneity",
                      "rescaling the line scales the value by the degree power",
                      power_scaling, trials, seed + 1)

        def param_square(rng):
            gamma = rand_input(rng)
            m = rng.randint(1, 2)
            lhs = form.apply_tensored(reparam(gamma, dline_param_map(n, m)))
            rhs = reparam(form.apply(gamma), line_param_map(m, n))
            if lhs != rhs:
                return _counter(input=gamma, m=m, lhs=lhs, rhs=rhs)
            return None

        _run_property(report, "line-parameter-square",
                      "line-parametrized rescaling passes through at the degree power",
                      param_square, trials, seed + 2)

        def monomial_vanishing(rng):
            for low in range(1, n):
                for k in range(2, n + 1):
                    if k * (low + 1) < n + 1:
                        continue
                    try:
                        rho = line_monomial_map(n, low, k)
                    except ValueError:
                        continue
                    gamma = rand_input(rng, Dn(low))
                    out = form.apply(reparam(gamma, rho))
                    if not _is_zero_tangent(out):
                        return _counter(input=gamma, low=low, k=k, output=out)
            return None

        _run_property(report, "monomial-vanishing",
                      "inputs factoring through a lower line via a power vanish",
                      monomial_vanishing, trials, seed + 3)

    return report


# ---------------------------------------------------------------------------
# holonomy for the iterated-tangent picture at order 2


@dataclass(frozen=True)
class SecondOrderData:
    """Order-2 iterated-tangent coordinates with separate transport blocks.

    ``u1`` lifts values, ``u1_outer`` lifts the value row of the outer
    operator, and ``u11[j][a][b]`` transports the a-th first-order entry in
    direction b.
    """

    p: int
    q: int
    x: tuple
    u: tuple
    u1: tuple        # q rows of length p
    u1_outer: tuple  # q rows of length p
    u11: tuple       # q rows of p x p

    @staticmethod
    def make(p, q, x, u, u1, u1_outer, u11) -> "SecondOrderData":
        conv = lambda rows: tuple(tuple(Fraction(v) for v in row) for row in rows)
        u11 = tuple(conv(mat) for mat in u11)
        return SecondOrderData(p, q, tuple(Fraction(v) for v in x),
                               tuple(Fraction(v) for v in u), conv(u1), conv(u1_outer), u11)


def semiholonomic_check(data: SecondOrderData) -> bool:
    """The two first-order blocks agree; equivalently the outer lift of values

    matches the inner one on every tangent."""
    return data.u1_outer == data.u1


def holonomic_check(data: SecondOrderData) -> bool:
    """The transport block is symmetric in its two directions."""
    return all(data.u11[j][a][b] == data.u11[j][b][a]
               for j in range(data.q) for a in range(data.p) for b in range(data.p))


def first_lift_values_agree(data: SecondOrderData, y) -> bool:
    """Whether the outer and inner lifts move the values identically along y."""
    for j in range(data.q):
        inner = sum((data.u1[j][i] * y[i] for i in range(data.p)), Fraction(0))
        outer = sum((data.u1_outer[j][i] * y[i] for i in range(data.p)), Fraction(0))
        if inner != outer:
            return False
    return True


def iterate_second_order(data: SecondOrderData, gamma: TaylorElement,
                         first_axis: int) -> TaylorElement:
    """Lift along one axis, transport the coefficients, then lift the other.

    Exchanging ``first_axis`` probes the symmetry of the transport block.
    """
    if not isinstance(gamma.obj, Dpow) or gamma.obj.n != 2 or gamma.dim != data.p:
        raise PreconditionError("input must be a two-axis element over the base")
    if gamma.base_point != data.x:
        raise PreconditionError("input base point differs from the data's")
    if first_axis not in (1, 2):
        raise PreconditionError("first_axis must be 1 or 2")
    second_axis = 3 - first_axis
    ring = Dpow(2)
    da = Poly.variable(first_axis - 1, obj=ring)
    db = Poly.variable(second_axis - 1, obj=ring)
    y_a = gamma.coeff(_axes_monomial((first_axis,), 2))
    y_b = gamma.coeff(_axes_monomial((second_axis,), 2))
    y_ab = gamma.coeff((1, 1))
    p, q = data.p, data.q

    x_out = [Poly.const(data.x[i], obj=ring) + da * y_a[i] + db * y_b[i]
             + (da * db) * y_ab[i] for i in range(p)]
    u_lifted = []
    for j in range(q):
        shift = sum((data.u1[j][i] * y_a[i] for i in range(p)), Fraction(0))
        u_lifted.append(Poly.const(data.u[j], obj=ring) + da * shift)
    w_lifted = []
    for j in range(q):
        row = []
        for a in range(p):
            shift = sum((data.u11[j][a][b] * y_a[b] for b in range(p)), Fraction(0))
            row.append(Poly.const(data.u1[j][a], obj=ring) + da * shift)
        w_lifted.append(row)
    dir_b = [Poly.const(y_b[i], obj=ring) + da * y_ab[i] for i in range(p)]
    u_out = []
    for j in range(q):
        inc = Poly.zero(obj=ring)
        for a in range(p):
            inc = inc + dir_b[a] * w_lifted[j][a]
        u_out.append(u_lifted[j] + db * inc)

    mapping = {}
    for m in monomial_basis(ring):
        mapping[m] = tuple([poly.coeff(m) for poly in x_out]
                           + [poly.coeff(m) for poly in u_out])
    return TaylorElement.build(ring, p + q, mapping)
