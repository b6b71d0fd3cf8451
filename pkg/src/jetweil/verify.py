"""Named randomized suites turning the toolkit's laws into machine checks.

Each suite draws its trial inputs from a counter-derived child generator, so
a run is reproducible from (suite, trials, seed) alone and any single trial
can be replayed.  All comparisons are exact; a failure carries the offending
inputs in the report.

Two independent oracles live here:

* ``series_composition_oracle`` builds the jet's coordinate Taylor polynomial
  as a plain polynomial map and pushes the input through it, so it exercises
  none of the partition-indexed closed forms;
* ``recursive_prolongation_oracle`` peels one axis at a time, transporting
  jet entries with line-valued scalars, which is the iterated-tangent route.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .combinatorics import subscripts_to_exponents, symmetric_multi_indices
from .errors import InvariantError, PreconditionError
from .jets import (JetCoord, embed, embed_sform, jet_minus, jet_plus,
                   jet_to_vector, jet_tuple_length, jet_to_dict,
                   microshape_tuple_length, project, sform_tuple_length,
                   top_microshape_tuple_length)
from .prolong import (SecondOrderData, SymFormOp, TangentialOp, apply_dn,
                      apply_dn_checked, apply_dpow, apply_rep, first_order_lift,
                      holonomic_check, first_lift_values_agree, iterate_second_order,
                      line_inclusion, plus_map, reconstruct_jet, scale_line_map,
                      semiholonomic_check, tensored_apply, validate_pseudotangential,
                      validate_symmetric_form, zeropad_line, _axes_monomial)
from .quasicolimit import (dn_spec, dpow_spec, dsym_spec, solve_pair,
                           strong_minus, strong_plus, tensor_with_line)
from .randgen import (rand_compatible_pair, rand_element, rand_fraction, rand_jet,
                      rand_permutation, rand_polymap, rand_sform, rand_tangent,
                      rand_vector, trial_rng)
from .report import Report
from .taylor import (PolyMap, TaylorElement, permute, pushforward, reparam,
                     scalar_action, tangent_add, tangent_scale, taylor_to_dict)
from .weil import (D, Dmany, Dn, Dpow, Dsym, Poly, monomial_basis)


# ---------------------------------------------------------------------------
# oracles


def jet_displacement_map(j: JetCoord) -> PolyMap:
    """The jet's coordinate Taylor polynomial as a map of the displacement.

    Components are written in the displacement h from the jet's base point;
    block entries carry the inverse factorial of each exponent, which is the
    weight making repeated partial derivatives into polynomial coefficients.
    """
    p, q = j.p, j.q
    comps = []
    for i in range(p):
        comps.append(Poly.variable(i, p) + Poly.const(j.x[i], p))
    for jj in range(q):
        terms = {(0,) * p: j.u[jj]}
        for k in range(1, j.order + 1):
            for m in symmetric_multi_indices(p, k):
                weight = Fraction(1)
                for e in m:
                    weight /= factorial(e)
                terms[m] = j.block_entry(m)[jj] * weight
        comps.append(Poly(p, terms))
    return PolyMap.make(p, p + q, comps)


def series_composition_oracle(j: JetCoord, gamma: TaylorElement) -> TaylorElement:
    """Truncated power-series composition of the jet polynomial with the input."""
    if gamma.base_point != j.x:
        raise PreconditionError("input base point differs from the jet's")
    zero = (Fraction(0),) * gamma.dim
    shifted = TaylorElement.build(
        gamma.obj, gamma.dim,
        {m: (zero if sum(m) == 0 else vec) for m, vec in gamma.coeff_map().items()})
    return pushforward(jet_displacement_map(j), shifted)


def recursive_prolongation_oracle(j: JetCoord, gamma: TaylorElement) -> TaylorElement:
    """Peel the last axis, transport the jet entries along it, and recurse."""
    n, p, q = j.order, j.p, j.q
    obj = gamma.obj
    if not isinstance(obj, Dpow) or obj.n != n:
        raise PreconditionError("input must live over as many axes as the jet order")

    const = lambda v: Poly.const(v, obj=obj)
    xs = [const(v) for v in j.x]
    us = [const(v) for v in j.u]
    blocks = [[[const(c) for c in vec] for vec in block] for block in j.blocks]
    curve = {m: [const(c) for c in vec] for m, vec in gamma.coeff_map().items()}

    def block_lookup(blocks_now, m):
        k = sum(m)
        idx = symmetric_multi_indices(p, k).index(m)
        return blocks_now[k - 1][idx]

    for depth in range(n, 0, -1):
        delta = Poly.variable(depth - 1, obj=obj)
        y_last = curve[_axes_monomial((depth,), n)]

        def contracted(m):
            vec = [Poly.zero(obj=obj)] * q
            for i in range(p):
                entry = block_lookup(blocks, tuple(a + b for a, b in zip(
                    m, subscripts_to_exponents((i + 1,), p))))
                vec = [acc + e * y_last[i] for acc, e in zip(vec, entry)]
            return vec

        new_xs = [xs[i] + delta * y_last[i] for i in range(p)]
        new_us = [us[jj] + delta * c for jj, c in enumerate(contracted((0,) * p))]
        new_blocks = []
        for k in range(1, depth):
            new_block = []
            for idx, m in enumerate(symmetric_multi_indices(p, k)):
                shift = contracted(m)
                new_block.append([blocks[k - 1][idx][jj] + delta * shift[jj]
                                  for jj in range(q)])
            new_blocks.append(new_block)

        new_curve = {}
        for m, vec in curve.items():
            if m[depth - 1] != 0:
                continue
            partner = curve[tuple(e + 1 if i == depth - 1 else e
                                  for i, e in enumerate(m))]
            new_curve[m] = [vec[i] + delta * partner[i] for i in range(p)]
        xs, us, blocks, curve = new_xs, new_us, new_blocks, new_curve

    mapping = {m: tuple([poly.coeff(m) for poly in xs] + [poly.coeff(m) for poly in us])
               for m in monomial_basis(obj)}
    return TaylorElement.build(obj, p + q, mapping)


# ---------------------------------------------------------------------------
# small helpers shared by the suites


def _counter(**kwargs) -> dict:
    out = {}
    for key, value in kwargs.items():
        if isinstance(value, TaylorElement):
            out[key] = taylor_to_dict(value)
        elif isinstance(value, JetCoord):
            out[key] = jet_to_dict(value)
        else:
            out[key] = value
    return out


def _run(report: Report, name: str, law: str, trial_fn, trials: int, seed: int):
    for index in range(trials):
        rng = trial_rng(seed, index)
        try:
            counter = trial_fn(rng)
        except (InvariantError, PreconditionError) as exc:
            counter = {"error": str(exc)}
        if counter is not None:
            counter["trial"] = index
            report.add(name, law, False, counter)
            return
    report.add(name, law, True)


def _family_specs(max_order=3, max_p=2):
    specs = []
    for order in range(1, max_order + 1):
        specs.append(dpow_spec(order))
        specs.append(dn_spec(order))
    for p in range(1, max_p + 1):
        for order in range(1, max_order + 1):
            specs.append(dsym_spec(p, order))
    return specs


def _shape_params(rng, max_pq=2, max_order=3):
    return rng.randint(1, max_pq), rng.randint(1, max_pq), rng.randint(1, max_order)


# ---------------------------------------------------------------------------
# suites


def suite_dimensions(trials: int, seed: int) -> Report:
    """Basis sizes against the closed-form tuple lengths, exhaustively."""
    report = Report("dimensions", trials, seed)
    ok, bad = True, None
    for p in range(1, 4):
        for q in range(1, 4):
            for n in range(0, 5):
                full = (p + q) * len(monomial_basis(Dsym(p, n)))
                if full != microshape_tuple_length(p, q, n):
                    ok, bad = False, {"p": p, "q": q, "n": n, "kind": "microshape"}
                jet_len = len(jet_to_vector(JetCoord.zero(p, q, n)))
                if jet_len != jet_tuple_length(p, q, n):
                    ok, bad = False, {"p": p, "q": q, "n": n, "kind": "jet"}
                if n >= 1:
                    size = comb(p + n - 1, n)
                    top = (p + q) * len(monomial_basis(Dmany(size)))
                    if top != top_microshape_tuple_length(p, q, n):
                        ok, bad = False, {"p": p, "q": q, "n": n, "kind": "top-microshape"}
                    want = p + q + q * size
                    if sform_tuple_length(p, q, n) != want:
                        ok, bad = False, {"p": p, "q": q, "n": n, "kind": "form"}
    report.add("tuple-lengths",
               "basis sizes match the four coordinate tuple length formulas",
               ok, bad)
    expected = {n: 1 + sum(comb(3 + k - 1, k) for k in range(1, n + 1))
                for n in range(0, 5)}
    sizes_ok = all(len(monomial_basis(Dsym(3, n))) == expected[n] for n in expected)
    report.add("graded-basis-blocks",
               "graded bases decompose into per-degree blocks of the right size",
               sizes_ok)
    return report


def suite_faa_di_bruno(trials: int, seed: int) -> Report:
    """Line-representation lifts against plain truncated composition."""
    report = Report("faa-di-bruno", trials, seed)
    for n in range(1, 5):
        def trial(rng, n=n):
            j = rand_jet(1, 1, n, rng)
            gamma = rand_element(Dn(n), 1, rng, base=j.x)
            lhs = apply_dn(j, gamma)
            rhs = series_composition_oracle(j, gamma)
            if lhs != rhs:
                return _counter(jet=j, input=gamma, lhs=lhs, rhs=rhs)
            return None

        _run(report, f"composition-order-{n}",
             "the partition closed form equals truncated series composition",
             trial, trials, seed + n)
    return report


def suite_set_partition(trials: int, seed: int) -> Report:
    """Axes-representation closed form against the axis-peeling recursion."""
    report = Report("set-partition", trials, seed)
    for p in (1, 2):
        for q in (1, 2):
            for n in (2, 3):
                def trial(rng, p=p, q=q, n=n):
                    j = rand_jet(p, q, n, rng)
                    gamma = rand_element(Dpow(n), p, rng, base=j.x)
                    lhs = apply_dpow(j, gamma)
                    rhs = recursive_prolongation_oracle(j, gamma)
                    if lhs != rhs:
                        return _counter(jet=j, input=gamma, lhs=lhs, rhs=rhs)
                    return None

                _run(report, f"recursion-p{p}-q{q}-n{n}",
                     "the partition closed form equals the axis-peeling recursion",
                     trial, trials, seed + 10 * p + 5 * q + n)

    report.add("order-2-symbolic",
               "the order-2 closed form matches its displayed coefficient symbolically",
               _order2_symbolic_ok())
    return report


def _order2_symbolic_ok() -> bool:
    from .prolong import _dpow_core

    rng = trial_rng(97, 0)
    for p in (1, 2):
        j = rand_jet(p, 1, 2, rng)
        nvars = 3 * p  # indeterminates: y1, y2, y12 per base coordinate
        var = lambda i: Poly.variable(i, nvars)
        coeffs = {
            (0, 0): tuple(Poly.const(v, nvars) for v in j.x),
            (1, 0): tuple(var(i) for i in range(p)),
            (0, 1): tuple(var(p + i) for i in range(p)),
            (1, 1): tuple(var(2 * p + i) for i in range(p)),
        }
        out = _dpow_core(j, coeffs, Poly.zero(nvars))
        top = out[(1, 1)][p]
        expected = Poly.zero(nvars)
        for i1 in range(p):
            entry = j.block_entry(subscripts_to_exponents((i1 + 1,), p))[0]
            expected = expected + entry * var(2 * p + i1)
        for i1 in range(p):
            for i2 in range(p):
                entry = j.block_entry(
                    subscripts_to_exponents(tuple(sorted((i1 + 1, i2 + 1))), p))[0]
                expected = expected + entry * (var(i1) * var(p + i2))
        if top != expected:
            return False
    return True


def suite_affine(trials: int, seed: int) -> Report:
    """Torsor laws for the three families, plus the coordinate-level pair."""
    report = Report("affine", trials, seed)
    for spec in _family_specs():
        label = f"{spec.family}-order{spec.carrier.n}" + (
            f"-p{spec.carrier.p}" if isinstance(spec.carrier, Dsym) else "")

        def cancel(rng, spec=spec):
            dim = rng.randint(1, 2)
            gp, gm = rand_compatible_pair(spec, dim, rng)
            if strong_plus(spec, strong_minus(spec, gp, gm), gm) != gp:
                return _counter(plus=gp, minus=gm)
            return None

        def recover(rng, spec=spec):
            dim = rng.randint(1, 2)
            gamma = rand_element(spec.carrier, dim, rng)
            t = rand_tangent(spec, gamma, rng)
            if strong_minus(spec, strong_plus(spec, t, gamma), gamma) != t:
                return _counter(t=t, gamma=gamma)
            return None

        def additive(rng, spec=spec):
            dim = rng.randint(1, 2)
            gamma = rand_element(spec.carrier, dim, rng)
            s = rand_tangent(spec, gamma, rng)
            t = rand_tangent(spec, gamma, rng)
            lhs = strong_plus(spec, s, strong_plus(spec, t, gamma))
            rhs = strong_plus(spec, tangent_add(s, t), gamma)
            if lhs != rhs:
                return _counter(s=s, t=t, gamma=gamma, lhs=lhs, rhs=rhs)
            return None

        _run(report, f"{label}-difference-then-translate",
             "translating back by the difference recovers the first element",
             cancel, trials, seed)
        _run(report, f"{label}-translate-then-difference",
             "differencing a translation recovers the translation term",
             recover, trials, seed + 1)
        _run(report, f"{label}-translation-additivity",
             "successive translations add", additive, trials, seed + 2)

    def coord_torsor(rng):
        p, q, order = _shape_params(rng)
        order = max(order, 1)
        jm = rand_jet(p, q, order, rng)
        jp = rand_jet(p, q, order, rng, x=jm.x, u=jm.u)
        jp = JetCoord.make(p, q, order, jm.x, jm.u, jm.blocks[:-1] + (jp.blocks[-1],))
        s = jet_minus(jp, jm)
        if jet_plus(s, jm) != jp:
            return {"jet_plus": jet_to_dict(jp), "jet_minus": jet_to_dict(jm)}
        s2 = rand_sform(p, q, order, rng, x=jm.x, u=jm.u)
        if jet_minus(jet_plus(s2, jm), jm) != s2:
            return {"jet": jet_to_dict(jm)}
        return None

    _run(report, "coordinate-torsor",
         "top-block subtraction and addition are inverse on coordinate jets",
         coord_torsor, trials, seed + 3)
    return report


def suite_solver(trials: int, seed: int) -> Report:
    """Unique solvability of the gluing squares and coordinate agreement."""
    report = Report("solver", trials, seed)
    for spec in _family_specs():
        label = f"{spec.family}-order{spec.carrier.n}" + (
            f"-p{spec.carrier.p}" if isinstance(spec.carrier, Dsym) else "")

        def solvable(rng, spec=spec):
            dim = rng.randint(1, 2)
            gp, gm = rand_compatible_pair(spec, dim, rng)
            glued = solve_pair(spec, gp, gm)
            if reparam(glued, spec.psi) != gp or reparam(glued, spec.phi) != gm:
                return _counter(plus=gp, minus=gm, glued=glued)
            gamma = rand_element(spec.carrier, dim, rng)
            t = rand_tangent(spec, gamma, rng)
            strong_plus(spec, t, gamma)
            return None

        _run(report, f"{label}-unique-solvability",
             "both gluing systems are uniquely solvable and restrict correctly",
             solvable, trials, seed)

    def embed_agree(rng):
        p = rng.randint(1, 2)
        q = rng.randint(1, 2)
        order = rng.randint(1, 3)
        spec = dsym_spec(p, order)
        jm = rand_jet(p, q, order, rng)
        top = [rand_vector(rng, q) for _ in jm.blocks[-1]]
        jp = jm.with_top(top)
        lhs = strong_minus(spec, embed(jp), embed(jm))
        if lhs != embed_sform(jet_minus(jp, jm)):
            return {"jet_plus": jet_to_dict(jp), "jet_minus": jet_to_dict(jm)}
        s = rand_sform(p, q, order, rng, x=jm.x, u=jm.u)
        if strong_plus(spec, embed_sform(s), embed(jm)) != embed(jet_plus(s, jm)):
            return {"jet": jet_to_dict(jm)}
        return None

    _run(report, "coordinate-vs-solver",
         "coordinate top-block operations agree with the glued ones under embedding",
         embed_agree, trials, seed + 1)
    return report


def suite_naturality(trials: int, seed: int) -> Report:
    """Pushforward, scaling, and permutation equivariance of the affine operations."""
    report = Report("naturality", trials, seed)
    for spec in _family_specs():
        label = f"{spec.family}-order{spec.carrier.n}" + (
            f"-p{spec.carrier.p}" if isinstance(spec.carrier, Dsym) else "")

        def natural_minus(rng, spec=spec):
            dim = rng.randint(1, 2)
            gp, gm = rand_compatible_pair(spec, dim, rng)
            fmap = rand_polymap(dim, rng.randint(1, 2), 3, rng)
            fp, fm = pushforward(fmap, gp), pushforward(fmap, gm)
            if reparam(fp, spec.inj) != reparam(fm, spec.inj):
                return _counter(plus=gp, minus=gm)
            lhs = pushforward(fmap, strong_minus(spec, gp, gm))
            rhs = strong_minus(spec, fp, fm)
            if lhs != rhs:
                return _counter(plus=gp, minus=gm, lhs=lhs, rhs=rhs)
            return None

        def natural_plus(rng, spec=spec):
            dim = rng.randint(1, 2)
            gamma = rand_element(spec.carrier, dim, rng)
            t = rand_tangent(spec, gamma, rng)
            fmap = rand_polymap(dim, rng.randint(1, 2), 3, rng)
            lhs = pushforward(fmap, strong_plus(spec, t, gamma))
            rhs = strong_plus(spec, pushforward(fmap, t), pushforward(fmap, gamma))
            if lhs != rhs:
                return _counter(t=t, gamma=gamma, lhs=lhs, rhs=rhs)
            return None

        _run(report, f"{label}-difference-naturality",
             "maps of the target commute with the difference", natural_minus,
             trials, seed)
        _run(report, f"{label}-translation-naturality",
             "maps of the target commute with the translation", natural_plus,
             trials, seed + 1)

    def axes_scaling(rng):
        n = rng.randint(1, 3)
        spec = dpow_spec(n)
        dim = rng.randint(1, 2)
        alpha = rand_fraction(rng)
        axis = rng.randint(1, n)
        gp, gm = rand_compatible_pair(spec, dim, rng)
        lhs = tangent_scale(alpha, strong_minus(spec, gp, gm))
        rhs = strong_minus(spec, scalar_action(alpha, axis, gp),
                           scalar_action(alpha, axis, gm))
        if lhs != rhs:
            return _counter(plus=gp, minus=gm, alpha=str(alpha), axis=axis)
        gamma = rand_element(spec.carrier, dim, rng)
        t = rand_tangent(spec, gamma, rng)
        lhs2 = scalar_action(alpha, axis, strong_plus(spec, t, gamma))
        rhs2 = strong_plus(spec, tangent_scale(alpha, t),
                           scalar_action(alpha, axis, gamma))
        if lhs2 != rhs2:
            return _counter(t=t, gamma=gamma, alpha=str(alpha), axis=axis)
        return None

    _run(report, "axes-scaling",
         "scaling one axis scales the difference once and threads through translation",
         axes_scaling, trials, seed + 2)

    def axes_permutation(rng):
        n = rng.randint(2, 3)
        spec = dpow_spec(n)
        dim = rng.randint(1, 2)
        sigma = rand_permutation(n, rng)
        gp, gm = rand_compatible_pair(spec, dim, rng)
        if strong_minus(spec, permute(gp, sigma), permute(gm, sigma)) != \
                strong_minus(spec, gp, gm):
            return _counter(plus=gp, minus=gm, sigma=list(sigma))
        gamma = rand_element(spec.carrier, dim, rng)
        t = rand_tangent(spec, gamma, rng)
        if permute(strong_plus(spec, t, gamma), sigma) != \
                strong_plus(spec, t, permute(gamma, sigma)):
            return _counter(t=t, gamma=gamma, sigma=list(sigma))
        return None

    _run(report, "axes-permutation",
         "the difference ignores axis relabeling and translation commutes with it",
         axes_permutation, trials, seed + 3)

    def line_homogeneity(rng):
        order = rng.randint(1, 3)
        spec = dn_spec(order)
        dim = rng.randint(1, 2)
        alpha = rand_fraction(rng)
        smap = scale_line_map(alpha, order)
        gp, gm = rand_compatible_pair(spec, dim, rng)
        lhs = strong_minus(spec, reparam(gp, smap), reparam(gm, smap))
        rhs = tangent_scale(alpha ** order, strong_minus(spec, gp, gm))
        if lhs != rhs:
            return _counter(plus=gp, minus=gm, alpha=str(alpha))
        return None

    _run(report, "line-homogeneity",
         "rescaling the line scales the difference by the order-th power",
         line_homogeneity, trials, seed + 4)

    def line_param_squares(rng):
        from .prolong import axis_param_map, line_param_map, dline_param_map
        m = rng.randint(1, 2)
        dim = rng.randint(1, 2)
        n = rng.randint(1, 3)
        spec = dpow_spec(n)
        tspec = tensor_with_line(spec, m)
        axis = rng.randint(1, n)
        pmap = axis_param_map(n, axis, m)
        gp, gm = rand_compatible_pair(spec, dim, rng)
        lhs = strong_minus(tspec, reparam(gp, pmap), reparam(gm, pmap))
        rhs = reparam(strong_minus(spec, gp, gm), line_param_map(m, 1))
        if lhs != rhs:
            return _counter(plus=gp, minus=gm, m=m, axis=axis, lhs=lhs, rhs=rhs)
        gamma = rand_element(spec.carrier, dim, rng)
        t = rand_tangent(spec, gamma, rng)
        lhs2 = strong_plus(tspec, reparam(t, line_param_map(m, 1)), reparam(gamma, pmap))
        rhs2 = reparam(strong_plus(spec, t, gamma), pmap)
        if lhs2 != rhs2:
            return _counter(t=t, gamma=gamma, m=m, axis=axis)
        order = rng.randint(1, 3)
        lspec = dn_spec(order)
        ltspec = tensor_with_line(lspec, m)
        lmap = dline_param_map(order, m)
        gp, gm = rand_compatible_pair(lspec, dim, rng)
        lhs3 = strong_minus(ltspec, reparam(gp, lmap), reparam(gm, lmap))
        rhs3 = reparam(strong_minus(lspec, gp, gm), line_param_map(m, order))
        if lhs3 != rhs3:
            return _counter(plus=gp, minus=gm, m=m, lhs=lhs3, rhs=rhs3)
        return None

    _run(report, "line-parameter-squares",
         "difference and translation commute with line-parametrized reparametrization",
         line_param_squares, trials, seed + 5)

    def product_map_identity(rng):
        from .prolong import full_product_map
        from .taylor import directional_minus, face, degeneracy
        n = rng.randint(2, 3)
        spec = dpow_spec(n)
        dim = rng.randint(1, 2)
        gp, gm = rand_compatible_pair(spec, dim, rng)
        lhs = reparam(strong_minus(spec, gp, gm), full_product_map(n))
        acc = directional_minus(1, gp, gm)
        for axis in range(2, n + 1):
            degenerate = gp
            for _ in range(axis - 1):
                degenerate = face(1, degenerate)
            for _ in range(axis - 1):
                degenerate = degeneracy(1, degenerate)
            acc = directional_minus(axis, acc, degenerate)
        if lhs != acc:
            return _counter(plus=gp, minus=gm, lhs=lhs, rhs=acc)
        return None

    _run(report, "product-map-identity",
         "the full-product reparametrized difference equals the per-axis chain",
         product_map_identity, trials, seed + 6)
    return report


def suite_conversion(trials: int, seed: int) -> Report:
    """Compatibility of the axes and line representations and their affine data."""
    report = Report("conversion", trials, seed)

    def raw_minus_compat(rng):
        order = rng.randint(1, 3)
        dim = rng.randint(1, 3)
        pm = plus_map(order)
        gp, gm = rand_compatible_pair(dn_spec(order), dim, rng)
        rp, rm = reparam(gp, pm), reparam(gm, pm)
        spec = dpow_spec(order)
        if reparam(rp, spec.inj) != reparam(rm, spec.inj):
            return _counter(plus=gp, minus=gm)
        if strong_minus(dn_spec(order), gp, gm) != strong_minus(spec, rp, rm):
            return _counter(plus=gp, minus=gm)
        return None

    _run(report, "difference-compatibility",
         "the line difference equals the axes difference after variable addition",
         raw_minus_compat, trials, seed)

    def raw_plus_compat(rng):
        order = rng.randint(1, 3)
        dim = rng.randint(1, 3)
        pm = plus_map(order)
        gamma = rand_element(Dn(order), dim, rng)
        t = rand_tangent(dn_spec(order), gamma, rng)
        lhs = reparam(strong_plus(dn_spec(order), t, gamma), pm)
        rhs = strong_plus(dpow_spec(order), t, reparam(gamma, pm))
        if lhs != rhs:
            return _counter(t=t, gamma=gamma, lhs=lhs, rhs=rhs)
        return None

    _run(report, "translation-compatibility",
         "the line translation equals the axes translation after variable addition",
         raw_plus_compat, trials, seed + 1)

    def operator_minus(rng):
        p, q, order = _shape_params(rng)
        jm = rand_jet(p, q, order, rng)
        jp = jm.with_top([rand_vector(rng, q) for _ in jm.blocks[-1]])
        gamma = rand_element(Dn(order), p, rng, base=jm.x)
        lhs = strong_minus(dn_spec(order), apply_dn(jp, gamma), apply_dn(jm, gamma))
        plus = plus_map(order)
        g2 = reparam(gamma, plus)
        rhs = strong_minus(dpow_spec(order), apply_dpow(jp, g2), apply_dpow(jm, g2))
        if lhs != rhs:
            return _counter(jet_plus=jp, jet_minus=jm, input=gamma, lhs=lhs, rhs=rhs)
        return None

    _run(report, "operator-difference-compatibility",
         "differences of line lifts match differences of axes lifts",
         operator_minus, trials, seed + 2)

    def operator_plus(rng):
        p, q, order = _shape_params(rng)
        j = rand_jet(p, q, order, rng)
        gamma = rand_element(Dn(order), p, rng, base=j.x)
        t = rand_element(D(), p, rng, base=j.x)
        w = first_order_lift(j, t)
        plus = plus_map(order)
        lhs = reparam(strong_plus(dn_spec(order), w, apply_dn(j, gamma)), plus)
        rhs = strong_plus(dpow_spec(order), w, apply_dpow(j, reparam(gamma, plus)))
        if lhs != rhs:
            return _counter(jet=j, input=gamma, tangent=t, lhs=lhs, rhs=rhs)
        return None

    _run(report, "operator-translation-compatibility",
         "the translated line lift matches the translated axes lift",
         operator_plus, trials, seed + 3)

    def projection_square(rng):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        order = rng.randint(2, 3)
        j = rand_jet(p, q, order, rng)
        gamma = rand_element(Dn(order - 1), p, rng, base=j.x)
        incl = line_inclusion(order - 1, order)
        lhs = reparam(apply_dn(j, zeropad_line(gamma, order)), incl)
        if lhs != apply_dn(project(j), gamma):
            return _counter(jet=j, input=gamma)
        mapping = zeropad_line(gamma, order).coeff_map()
        mapping[(order,)] = rand_vector(rng, p)
        ext = TaylorElement.build(Dn(order), p, mapping)
        if reparam(apply_dn(j, ext), incl) != lhs:
            return _counter(jet=j, input=gamma)
        return None

    _run(report, "line-projection-square",
         "truncating the jet commutes with the line representation",
         projection_square, trials, seed + 4)

    def line_identity(rng):
        p, q, order = _shape_params(rng)
        j = rand_jet(p, q, order, rng)
        gamma = rand_element(Dn(order), p, rng, base=j.x)
        apply_dn_checked(j, gamma)
        return None

    _run(report, "line-representation-identity",
         "the line lift satisfies its defining identity along variable addition",
         line_identity, trials, seed + 5)

    def recursion_triangle(rng):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        j = rand_jet(p, q, 2, rng)
        gamma = rand_element(Dpow(2), p, rng, base=j.x)
        if apply_dpow(j, gamma) != recursive_prolongation_oracle(j, gamma):
            return _counter(jet=j, input=gamma)
        return None

    _run(report, "iterated-tangent-triangle",
         "the axes lift factors through the iterated-tangent recursion",
         recursion_triangle, trials, seed + 6)
    return report


def suite_holonomy(trials: int, seed: int) -> Report:
    """Order-2 exchange tests and the first-order matching predicate."""
    report = Report("holonomy", trials, seed)

    def rand_data(rng, p, q, symmetric, matched=True):
        x, u = rand_vector(rng, p), rand_vector(rng, q)
        u1 = [rand_vector(rng, p) for _ in range(q)]
        u1_outer = [row for row in u1] if matched else \
            [rand_vector(rng, p) for _ in range(q)]
        u11 = []
        for _ in range(q):
            mat = [[rand_fraction(rng) for _ in range(p)] for _ in range(p)]
            if symmetric:
                for a in range(p):
                    for b in range(a):
                        mat[a][b] = mat[b][a]
            u11.append(mat)
        return SecondOrderData.make(p, q, x, u, u1, u1_outer, u11)

    def exchange_pass(rng):
        p, q = rng.randint(1, 3), rng.randint(1, 2)
        data = rand_data(rng, p, q, symmetric=True)
        gamma = rand_element(Dpow(2), p, rng, base=data.x)
        if iterate_second_order(data, gamma, 1) != iterate_second_order(data, gamma, 2):
            return _counter(input=gamma)
        return None

    _run(report, "symmetric-exchange",
         "symmetric transport gives order-independent double lifts",
         exchange_pass, trials, seed)

    def exchange_fail(rng):
        p, q = rng.randint(2, 3), rng.randint(1, 2)
        data = rand_data(rng, p, q, symmetric=True)
        a, b = rng.sample(range(p), 2)
        jj = rng.randrange(q)
        mat = [list(row) for row in data.u11[jj]]
        mat[a][b] = mat[a][b] + 1
        u11 = list(data.u11)
        u11[jj] = tuple(tuple(row) for row in mat)
        broken = SecondOrderData.make(p, q, data.x, data.u, data.u1,
                                      data.u1_outer, u11)
        if holonomic_check(broken):
            return {"reason": "perturbed data passed the symmetry predicate"}
        for ia, ib in ((a, b), (b, a)):
            gamma = TaylorElement.build(
                Dpow(2), p,
                {(0, 0): broken.x,
                 (1, 0): tuple(Fraction(1 if i == ia else 0) for i in range(p)),
                 (0, 1): tuple(Fraction(1 if i == ib else 0) for i in range(p))})
            if iterate_second_order(broken, gamma, 1) != \
                    iterate_second_order(broken, gamma, 2):
                return None
        return {"reason": "asymmetric transport was not detected by exchange"}

    _run(report, "asymmetric-exchange-detected",
         "asymmetric transport is caught by exchanging the two lift orders",
         exchange_fail, trials, seed + 1)

    def predicate_matches(rng):
        p, q = rng.randint(1, 3), rng.randint(1, 2)
        data = rand_data(rng, p, q, symmetric=rng.random() < 0.5)
        agree = all(
            iterate_second_order(data, _basis_pair(data, ia, ib), 1) ==
            iterate_second_order(data, _basis_pair(data, ia, ib), 2)
            for ia in range(p) for ib in range(p))
        if holonomic_check(data) != agree:
            return {"holonomic_check": holonomic_check(data), "exchange": agree}
        return None

    def _basis_pair(data, ia, ib):
        p = data.p
        return TaylorElement.build(
            Dpow(2), p,
            {(0, 0): data.x,
             (1, 0): tuple(Fraction(1 if i == ia else 0) for i in range(p)),
             (0, 1): tuple(Fraction(1 if i == ib else 0) for i in range(p))})

    _run(report, "symmetry-predicate",
         "the block-symmetry predicate equals the exhaustive exchange test",
         predicate_matches, trials, seed + 2)

    def matching_predicate(rng):
        p, q = rng.randint(1, 3), rng.randint(1, 2)
        matched = rng.random() < 0.5
        data = rand_data(rng, p, q, symmetric=True, matched=matched)
        basis_agree = all(
            first_lift_values_agree(
                data, tuple(Fraction(1 if i == k else 0) for i in range(p)))
            for k in range(p))
        if semiholonomic_check(data) != basis_agree:
            return {"semiholonomic_check": semiholonomic_check(data),
                    "lift-values-agree": basis_agree}
        return None

    _run(report, "first-order-matching",
         "the matching predicate equals value-lift agreement on all directions",
         matching_predicate, trials, seed + 3)
    return report


def suite_bijectivity(trials: int, seed: int) -> Report:
    """Probing reconstruction inverts the jet-to-operator assignments."""
    report = Report("bijectivity", trials, seed)
    for offset, rep in enumerate(("first", "dpow", "dn")):
        def round_trip(rng, rep=rep):
            p, q = rng.randint(1, 2), rng.randint(1, 2)
            order = rng.randint(1, 3)
            j = rand_jet(p, q, order, rng)
            op = TangentialOp(rep, j)
            back = reconstruct_jet(rep, op.apply, p, q, order, j.x, rng)
            if back != j:
                return _counter(jet=j, reconstructed=back)
            other = rand_jet(p, q, order, rng, x=j.x, u=j.u)
            if other != j:
                back2 = reconstruct_jet(rep, TangentialOp(rep, other).apply,
                                        p, q, order, j.x, rng)
                if back2 != other or back2 == back:
                    return _counter(jet=other, reconstructed=back2)
            return None

        _run(report, f"{rep}-reconstruction",
             "probing the operator recovers exactly its jet", round_trip,
             trials, seed + 7 * offset)
    return report


class _DifferenceForm:
    """The pointwise difference of two equal-projection lifts, as a form."""

    def __init__(self, tag, j_plus, j_minus):
        self.tag = tag
        self.j_plus = j_plus
        self.j_minus = j_minus
        self.p, self.q = j_plus.p, j_plus.q
        self.degree = j_plus.order
        self.base_x = j_plus.x
        self.spec = dpow_spec(self.degree) if tag == "dpow" else dn_spec(self.degree)

    def apply(self, gamma):
        return strong_minus(self.spec,
                            apply_rep(self.tag, self.j_plus, gamma),
                            apply_rep(self.tag, self.j_minus, gamma))

    def apply_tensored(self, gamma):
        param = gamma.obj.right
        tspec = tensor_with_line(self.spec, param.n)
        return strong_minus(tspec,
                            tensored_apply(self.j_plus, self.tag, gamma),
                            tensored_apply(self.j_minus, self.tag, gamma))


class _TranslatedOp:
    """A jet lift translated by a symmetric form, as a black-box operator."""

    def __init__(self, rep, form_op, j):
        self.rep = rep
        self.form_op = form_op
        self.jet_data = j
        self.p, self.q, self.order = j.p, j.q, j.order
        self.base_x = j.x
        self.spec = dpow_spec(j.order) if rep == "dpow" else dn_spec(j.order)
        self.jet = None  # opaque: exercises the validator's black-box path

    def apply(self, gamma):
        return strong_plus(self.spec, self.form_op.apply(gamma),
                           apply_rep(self.rep, self.jet_data, gamma))

    def apply_tensored(self, gamma):
        param = gamma.obj.right
        tspec = tensor_with_line(self.spec, param.n)
        return strong_plus(tspec, self.form_op.apply_tensored(gamma),
                           tensored_apply(self.jet_data, self.rep, gamma))

    def project(self):
        return TangentialOp(self.rep, project(self.jet_data))


def suite_forms(trials: int, seed: int) -> Report:
    """Differences of lifts are symmetric forms; translated lifts are lifts."""
    report = Report("forms", trials, seed)
    inner_trials = 6

    for tag in ("dpow", "dn"):
        def diff_is_form(rng, tag=tag):
            p, q = rng.randint(1, 2), rng.randint(1, 2)
            order = rng.randint(2, 3)
            jm = rand_jet(p, q, order, rng)
            jp = jm.with_top([rand_vector(rng, q) for _ in jm.blocks[-1]])
            form = _DifferenceForm(tag, jp, jm)
            sub = validate_symmetric_form(form, trials=inner_trials,
                                          seed=rng.randrange(2 ** 30))
            if not sub.all_passed:
                return {"failed": [p.name for p in sub.failures()],
                        "jet_plus": jet_to_dict(jp), "jet_minus": jet_to_dict(jm)}
            gamma = rand_element(Dpow(order) if tag == "dpow" else Dn(order),
                                 p, rng, base=jm.x)
            coordinate = SymFormOp(tag, jet_minus(jp, jm))
            if form.apply(gamma) != coordinate.apply(gamma):
                return _counter(jet_plus=jp, jet_minus=jm, input=gamma)
            return None

        _run(report, f"{tag}-difference-is-form",
             "equal-projection lift differences satisfy all form laws "
             "and match the coordinate form", diff_is_form, trials, seed)

        def translated_is_lift(rng, tag=tag):
            p, q = rng.randint(1, 2), rng.randint(1, 2)
            order = rng.randint(2, 3)
            j = rand_jet(p, q, order, rng)
            s = rand_sform(p, q, order, rng, x=j.x, u=j.u)
            op = _TranslatedOp(tag, SymFormOp(tag, s), j)
            sub = validate_pseudotangential(op, trials=inner_trials,
                                            seed=rng.randrange(2 ** 30))
            if not sub.all_passed:
                return {"failed": [p.name for p in sub.failures()],
                        "jet": jet_to_dict(j)}
            gamma = rand_element(Dpow(order) if tag == "dpow" else Dn(order),
                                 p, rng, base=j.x)
            if op.apply(gamma) != apply_rep(tag, jet_plus(s, j), gamma):
                return _counter(jet=j, input=gamma)
            return None

        _run(report, f"{tag}-translated-lift",
             "a lift translated by a form is again a lift, with translated jet",
             translated_is_lift, trials, seed + 1)

    def form_conversion(rng):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        order = rng.randint(1, 3)
        s = rand_sform(p, q, order, rng)
        axes_form = SymFormOp("dpow", s)
        gamma = rand_element(Dn(order), p, rng, base=s.x)
        lhs = axes_form.apply(reparam(gamma, plus_map(order)))
        rhs = SymFormOp("dn", s).apply(gamma)
        if lhs != rhs:
            return _counter(input=gamma, lhs=lhs, rhs=rhs)
        alpha = rand_fraction(rng)
        scaled = reparam(gamma, scale_line_map(alpha, order))
        if axes_form.apply(reparam(scaled, plus_map(order))) != \
                tangent_scale(alpha ** order, lhs):
            return _counter(input=gamma, alpha=str(alpha))
        from .prolong import line_monomial_map
        for low in range(1, order):
            for k in range(2, order + 1):
                if k * (low + 1) <= order:
                    continue
                low_input = rand_element(Dn(low), p, rng, base=s.x)
                lifted = reparam(low_input, line_monomial_map(order, low, k))
                out = axes_form.apply(reparam(lifted, plus_map(order)))
                if any(v != 0 for v in out.coeff((1,))):
                    return _counter(input=low_input, low=low, k=k)
        return None

    _run(report, "form-conversion",
         "composing an axes form with variable addition gives the line form, "
         "homogeneously", form_conversion, trials, seed + 2)

    def affine_morphism(rng):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        order = rng.randint(1, 3)
        j = rand_jet(p, q, order, rng)
        s = rand_sform(p, q, order, rng, x=j.x, u=j.u)
        gamma = rand_element(Dn(order), p, rng, base=j.x)
        omega_line = SymFormOp("dpow", s).apply(reparam(gamma, plus_map(order)))
        lhs = apply_dn(jet_plus(s, j), gamma)
        rhs = strong_plus(dn_spec(order), omega_line, apply_dn(j, gamma))
        if lhs != rhs:
            return _counter(jet=j, input=gamma, lhs=lhs, rhs=rhs)
        return None

    _run(report, "affine-morphism-translation",
         "converting representations respects form translation fiberwise",
         affine_morphism, trials, seed + 3)
    return report


class _CorruptedOp:
    """A jet lift whose top output coefficient is tampered with."""

    def __init__(self, j):
        self.rep = "dpow"
        self.inner = TangentialOp("dpow", j)
        self.p, self.q, self.order = j.p, j.q, j.order
        self.base_x = j.x
        self.jet = None

    def _tamper(self, out):
        key = (1,) * self.order + (0,) * (out.obj.var_count - self.order)
        mapping = out.coeff_map()
        bump = [Fraction(0)] * self.p + [Fraction(1)] * self.q
        mapping[key] = tuple(v + b for v, b in zip(mapping[key], bump))
        return TaylorElement.build(out.obj, out.dim, mapping)

    def apply(self, gamma):
        return self._tamper(self.inner.apply(gamma))

    def apply_tensored(self, gamma):
        return self._tamper(self.inner.apply_tensored(gamma))

    def project(self):
        return self.inner.project()


def suite_pseudotangential(trials: int, seed: int) -> Report:
    """The operator validator on honest, trivial, and corrupted lifts."""
    report = Report("pseudotangential", trials, seed)
    inner_trials = 6

    def honest(rng):
        p, q, order = _shape_params(rng)
        j = rand_jet(p, q, order, rng)
        sub = validate_pseudotangential(TangentialOp("dpow", j),
                                        trials=inner_trials,
                                        seed=rng.randrange(2 ** 30))
        if not sub.all_passed:
            return {"failed": [pr.name for pr in sub.failures()],
                    "jet": jet_to_dict(j)}
        for rep in ("dn", "first"):
            sub2 = validate_pseudotangential(TangentialOp(rep, j),
                                             trials=inner_trials,
                                             seed=rng.randrange(2 ** 30))
            if not sub2.all_passed:
                return {"failed": [pr.name for pr in sub2.failures()],
                        "jet": jet_to_dict(j)}
        return None

    _run(report, "jet-lifts-pass",
         "every jet-realized operator passes all validator laws", honest,
         trials, seed)

    def trivial(rng):
        p, q, order = _shape_params(rng)
        j = JetCoord.zero(p, q, order)
        sub = validate_pseudotangential(TangentialOp("dpow", j),
                                        trials=inner_trials,
                                        seed=rng.randrange(2 ** 30))
        if not sub.all_passed:
            return {"failed": [pr.name for pr in sub.failures()]}
        return None

    _run(report, "trivial-jet-passes",
         "the zero jet realizes a valid operator", trivial, trials, seed + 1)

    def corrupted(rng):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        order = rng.randint(2, 3)
        j = rand_jet(p, q, order, rng)
        sub = validate_pseudotangential(_CorruptedOp(j), trials=inner_trials,
                                        seed=rng.randrange(2 ** 30))
        failed = {pr.name for pr in sub.failures()}
        if "contraction-projection" not in failed:
            return {"failed": sorted(failed), "jet": jet_to_dict(j)}
        return None

    _run(report, "corrupted-top-detected",
         "tampering with the top output breaks the truncation compatibility",
         corrupted, trials, seed + 2)
    return report


SUITES = {
    "dimensions": suite_dimensions,
    "faa-di-bruno": suite_faa_di_bruno,
    "set-partition": suite_set_partition,
    "affine": suite_affine,
    "solver": suite_solver,
    "naturality": suite_naturality,
    "conversion": suite_conversion,
    "holonomy": suite_holonomy,
    "bijectivity": suite_bijectivity,
    "forms": suite_forms,
    "pseudotangential": suite_pseudotangential,
}


def run_suite(name: str, trials: int, seed: int) -> Report:
    if name not in SUITES:
        raise PreconditionError(
            f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    report = SUITES[name](trials, seed)
    report.suite = name
    report.trials = trials
    report.seed = seed
    return report
