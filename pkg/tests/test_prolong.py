from fractions import Fraction as F

import pytest

from jetweil.errors import PreconditionError
from jetweil.jets import JetCoord, SymFormCoord, jet_minus, project
from jetweil.prolong import (SecondOrderData, SymFormOp, TangentialOp, apply_dn,
                             apply_dn_checked, apply_dpow, apply_first,
                             first_order_lift, first_lift_values_agree,
                             holonomic_check, iterate_second_order, plus_map,
                             reconstruct_jet, semiholonomic_check,
                             validate_pseudotangential, validate_symmetric_form)
from jetweil.quasicolimit import dn_spec, dpow_spec, strong_minus
from jetweil.randgen import rand_element, rand_jet, rand_sform, rand_vector, trial_rng
from jetweil.taylor import TaylorElement, reparam
from jetweil.weil import D, Dn, Dpow


def elem(obj, mapping):
    return TaylorElement.build(obj, len(next(iter(mapping.values()))), mapping)


def tangent(x, y):
    return TaylorElement.build(D(), len(x), {(0,): tuple(x), (1,): tuple(y)})


def test_first_order_lift_display():
    # order 1, p = q = 1: x + y d lifts to (x + y d, u + a y d)
    j = JetCoord.make(1, 1, 1, (F(2),), (F(3),), [[(F(5),)]])
    out = apply_first(j, tangent((F(2),), (F(7),)))
    assert out.base_point == (F(2), F(3))
    assert out.coeff((1,)) == (F(7), F(35))
    # zero direction gives the constant lift
    still = apply_first(j, tangent((F(2),), (F(0),)))
    assert still.coeff((1,)) == (F(0), F(0))


def test_first_lift_base_mismatch():
    j = JetCoord.make(1, 1, 1, (F(2),), (F(3),), [[(F(5),)]])
    with pytest.raises(PreconditionError):
        apply_first(j, tangent((F(1),), (F(1),)))


def test_apply_first_values_are_lower_jet_tangents():
    rng = trial_rng(1, 0)
    j = rand_jet(2, 1, 3, rng)
    t = tangent(j.x, rand_vector(rng, 2))
    out = apply_first(j, t)
    # base point is the projected jet tuple; the direction starts with y
    from jetweil.jets import jet_to_vector
    assert out.base_point == jet_to_vector(project(j))
    assert out.coeff((1,))[:2] == t.coeff((1,))


def test_axes_lift_order2_display():
    # order 2, p = q = 1, blocks (a, b); input coefficients (y1, y2, y12)
    a, b = F(2), F(3)
    y1, y2, y12 = F(5), F(-1), F(7)
    j = JetCoord.make(1, 1, 2, (F(0),), (F(0),), [[(a,)], [(b,)]])
    gamma = elem(Dpow(2), {(0, 0): (F(0),), (1, 0): (y1,), (0, 1): (y2,),
                           (1, 1): (y12,)})
    out = apply_dpow(j, gamma)
    assert out.coeff((1, 0)) == (y1, a * y1)
    assert out.coeff((0, 1)) == (y2, a * y2)
    assert out.coeff((1, 1)) == (y12, a * y12 + b * y1 * y2)
    # constant input gives constant output
    const = TaylorElement.constant(Dpow(2), (F(0),))
    assert apply_dpow(j, const) == TaylorElement.constant(Dpow(2), (F(0), F(0)))


def test_line_lift_order2_display():
    # order 2, p = q = 1: stored coefficients are plain; the degree-2 output
    # coefficient is a*c2 + b*c1^2/2
    a, b = F(2), F(3)
    c1, c2 = F(5), F(11)
    j = JetCoord.make(1, 1, 2, (F(0),), (F(0),), [[(a,)], [(b,)]])
    gamma = elem(Dn(2), {(0,): (F(0),), (1,): (c1,), (2,): (c2,)})
    out = apply_dn_checked(j, gamma)
    assert out.coeff((1,)) == (c1, a * c1)
    assert out.coeff((2,)) == (c2, a * c2 + b * c1 * c1 / 2)


def test_line_lift_first_block_is_chain_rule():
    rng = trial_rng(2, 0)
    for order in (1, 2, 3, 4):
        j = rand_jet(2, 2, order, rng)
        gamma = rand_element(Dn(order), 2, rng, base=j.x)
        out = apply_dn(j, gamma)
        c1 = gamma.coeff((1,))
        expect = tuple(sum((j.block_entry(tuple(1 if k == i else 0 for k in range(2)))[jj]
                            * c1[i] for i in range(2)), F(0)) for jj in range(2))
        assert out.coeff((1,))[2:] == expect


def test_line_lift_checked_identity_raises_on_tampering():
    j = JetCoord.make(1, 1, 2, (F(0),), (F(0),), [[(F(2),)], [(F(3),)]])
    gamma = elem(Dn(2), {(0,): (F(0),), (1,): (F(1),), (2,): (F(0),)})
    out = apply_dn_checked(j, gamma)
    pm = plus_map(2)
    assert reparam(out, pm) == apply_dpow(j, reparam(gamma, pm))


def test_form_values_display():
    # degree 2, p = q = 1, block c: the value contracts both directions
    c = F(3)
    s = SymFormCoord.make(1, 1, 2, (F(0),), (F(0),), [(c,)])
    gamma = elem(Dpow(2), {(0, 0): (F(0),), (1, 0): (F(5),), (0, 1): (F(7),),
                           (1, 1): (F(11),)})
    out = SymFormOp("dpow", s).apply(gamma)
    assert out.coeff((1,)) == (F(0), c * F(5) * F(7))
    zero_form = SymFormCoord.make(1, 1, 2, (F(0),), (F(0),), [(F(0),)])
    assert all(v == 0 for v in SymFormOp("dpow", zero_form).apply(gamma).coeff((1,)))


def test_form_matches_lift_difference():
    rng = trial_rng(3, 0)
    for tag, obj in (("dpow", Dpow(2)), ("dn", Dn(2))):
        jm = rand_jet(2, 2, 2, rng)
        jp = jm.with_top([rand_vector(rng, 2) for _ in jm.blocks[-1]])
        s = jet_minus(jp, jm)
        gamma = rand_element(obj, 2, rng, base=jm.x)
        spec = dpow_spec(2) if tag == "dpow" else dn_spec(2)
        apply = apply_dpow if tag == "dpow" else apply_dn
        assert SymFormOp(tag, s).apply(gamma) == \
            strong_minus(spec, apply(jp, gamma), apply(jm, gamma))


def test_validators_pass_on_jets():
    rng = trial_rng(4, 0)
    j = rand_jet(2, 1, 2, rng)
    report = validate_pseudotangential(TangentialOp("dpow", j), trials=5, seed=1)
    assert report.all_passed, [p.name for p in report.failures()]
    report_dn = validate_pseudotangential(TangentialOp("dn", j), trials=5, seed=1)
    assert report_dn.all_passed

    s = rand_sform(2, 1, 2, rng)
    for tag in ("dpow", "dn"):
        report_s = validate_symmetric_form(SymFormOp(tag, s), trials=5, seed=2)
        assert report_s.all_passed, [p.name for p in report_s.failures()]


def test_holonomy_displays():
    # p = 2, q = 1: symmetric transport commutes, asymmetric does not
    p, q = 2, 1
    x, u = (F(0), F(0)), (F(0),)
    u1 = [(F(1), F(2))]
    sym = [[ (F(3), F(4)), (F(4), F(5)) ]]
    data = SecondOrderData.make(p, q, x, u, u1, u1, sym)
    assert semiholonomic_check(data) and holonomic_check(data)
    gamma = elem(Dpow(2), {(0, 0): x, (1, 0): (F(1), F(0)), (0, 1): (F(0), F(1)),
                           (1, 1): (F(2), F(3))})
    assert iterate_second_order(data, gamma, 1) == iterate_second_order(data, gamma, 2)

    asym = [[(F(3), F(4)), (F(0), F(5))]]
    broken = SecondOrderData.make(p, q, x, u, u1, u1, asym)
    assert not holonomic_check(broken)
    assert iterate_second_order(broken, gamma, 1) != \
        iterate_second_order(broken, gamma, 2)
    # the mismatch shows up exactly in the cross coefficient
    one = iterate_second_order(broken, gamma, 1)
    two = iterate_second_order(broken, gamma, 2)
    assert one.coeff((1, 0)) == two.coeff((1, 0))
    assert one.coeff((0, 1)) == two.coeff((0, 1))
    assert one.coeff((1, 1)) != two.coeff((1, 1))


def test_semiholonomic_examples():
    data_eq = SecondOrderData.make(1, 1, (F(0),), (F(0),), [(F(3),)], [(F(3),)],
                                   [[(F(1),)]])
    assert semiholonomic_check(data_eq)
    assert first_lift_values_agree(data_eq, (F(1),))
    data_ne = SecondOrderData.make(1, 1, (F(0),), (F(0),), [(F(1),)], [(F(2),)],
                                   [[(F(1),)]])
    assert not semiholonomic_check(data_ne)
    assert not first_lift_values_agree(data_ne, (F(1),))
    # p = 1 transport is vacuously symmetric
    assert holonomic_check(data_ne)


def test_reconstruction_round_trips():
    rng = trial_rng(5, 0)
    for rep in ("first", "dpow", "dn"):
        for order in (1, 2, 3):
            j = rand_jet(2, 2, order, rng)
            op = TangentialOp(rep, j)
            assert reconstruct_jet(rep, op.apply, 2, 2, order, j.x, rng) == j


def test_reconstruction_rejects_non_lift():
    rng = trial_rng(6, 0)
    j = rand_jet(1, 1, 2, rng)

    def crooked(gamma):
        out = apply_dpow(j, gamma)
        mapping = out.coeff_map()
        y1 = gamma.coeff((1, 0))[0]
        mapping[(1, 1)] = (mapping[(1, 1)][0], mapping[(1, 1)][1] + y1 * y1)
        return TaylorElement.build(out.obj, out.dim, mapping)

    with pytest.raises(PreconditionError):
        reconstruct_jet("dpow", crooked, 1, 1, 2, j.x, rng)


def test_symmetric_jet_iterates_exchangeably():
    # the order-2 transport data read off an honest jet is symmetric, so the
    # two iterated lifts agree on every input
    rng = trial_rng(8, 0)
    from jetweil.combinatorics import subscripts_to_exponents
    for _ in range(5):
        p, q = rng.randint(1, 3), rng.randint(1, 2)
        j = rand_jet(p, q, 2, rng)
        u1 = [tuple(j.block_entry(subscripts_to_exponents((i + 1,), p))[jj]
                    for i in range(p)) for jj in range(q)]
        u11 = [[[j.block_entry(subscripts_to_exponents(tuple(sorted((a + 1, b + 1))),
                                                       p))[jj]
                 for b in range(p)] for a in range(p)] for jj in range(q)]
        data = SecondOrderData.make(p, q, j.x, j.u, u1, u1, u11)
        assert semiholonomic_check(data) and holonomic_check(data)
        gamma = rand_element(Dpow(2), p, rng, base=j.x)
        assert iterate_second_order(data, gamma, 1) == \
            iterate_second_order(data, gamma, 2)
