from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from jetweil.errors import PreconditionError, SchemaError
from jetweil.jets import (JetCoord, SymFormCoord, embed, embed_sform, extract,
                          extract_sform, is_coordinate_jet, jet_from_dict, jet_minus,
                          jet_plus, jet_to_dict, jet_to_vector, jet_tuple_length,
                          project, project_to, sform_from_dict, sform_to_dict,
                          sform_tuple_length, vector_to_jet)
from jetweil.randgen import rand_element, rand_jet, rand_sform, trial_rng
from jetweil.weil import Dsym


def test_tuple_lengths():
    assert jet_tuple_length(1, 1, 2) == 4          # x, u, u_1, u_11
    assert jet_tuple_length(2, 1, 1) == 5          # x1, x2, u, u_1, u_2
    assert sform_tuple_length(1, 1, 2) == 3
    assert sform_tuple_length(2, 2, 2) == 2 + 2 + 2 * 3


def test_projection_drops_top_block():
    rng = trial_rng(0, 0)
    j = rand_jet(2, 2, 3, rng)
    pj = project(j)
    assert pj.order == 2 and pj.blocks == j.blocks[:2]
    assert project_to(j, 0) == JetCoord.make(2, 2, 0, j.x, j.u, [])
    one = rand_jet(1, 1, 1, rng)
    assert project(one).order == 0
    with pytest.raises(PreconditionError):
        project(project(one))


def test_jet_minus_and_plus():
    jm = JetCoord.make(1, 1, 2, (0,), (0,), [[(F(1),)], [(F(2),)]])
    jp = JetCoord.make(1, 1, 2, (0,), (0,), [[(F(1),)], [(F(5),)]])
    s = jet_minus(jp, jm)
    assert s.block == ((F(3),),)
    assert jet_plus(s, jm) == jp
    mismatched = JetCoord.make(1, 1, 2, (0,), (0,), [[(F(9),)], [(F(5),)]])
    with pytest.raises(PreconditionError):
        jet_minus(mismatched, jm)
    bad_form = SymFormCoord.make(1, 1, 2, (1,), (0,), [(F(1),)])
    with pytest.raises(PreconditionError):
        jet_plus(bad_form, jm)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 30))
def test_embed_extract_round_trip(seed):
    rng = trial_rng(seed, 3)
    p, q = rng.randint(1, 3), rng.randint(1, 2)
    order = rng.randint(0, 3)
    j = rand_jet(p, q, order, rng)
    gamma = embed(j)
    assert gamma.obj == Dsym(p, order)
    assert is_coordinate_jet(gamma, p, q)
    assert extract(gamma, p, q) == j
    s = rand_sform(p, q, max(order, 1), rng)
    assert extract_sform(embed_sform(s), p, q, s.degree) == s


def test_membership_rejects_moving_base():
    rng = trial_rng(9, 0)
    gamma = rand_element(Dsym(2, 2), 3, rng)
    assert not is_coordinate_jet(gamma, 2, 1)
    with pytest.raises(PreconditionError):
        extract(gamma, 2, 1)


def test_vector_round_trip_and_order():
    j = JetCoord.make(2, 1, 2, (F(1), F(2)), (F(3),),
                      [[(F(4),), (F(5),)], [(F(6),), (F(7),), (F(8),)]])
    vec = jet_to_vector(j)
    # degree-major, subscript-lexicographic within a degree
    assert vec == (F(1), F(2), F(3), F(4), F(5), F(6), F(7), F(8))
    assert vector_to_jet(vec, 2, 1, 2) == j
    assert j.block_entry((1, 1)) == (F(7),)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 30))
def test_json_round_trips(seed):
    rng = trial_rng(seed, 4)
    j = rand_jet(rng.randint(1, 2), rng.randint(1, 2), rng.randint(0, 3), rng)
    assert jet_from_dict(jet_to_dict(j)) == j
    s = rand_sform(rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 3), rng)
    assert sform_from_dict(sform_to_dict(s)) == s


def test_json_schema_errors():
    with pytest.raises(SchemaError):
        jet_from_dict({"p": 1, "q": 1, "order": 1, "values": ["0", "0"]})
    with pytest.raises(SchemaError):
        jet_from_dict({"p": 1, "q": 1, "values": ["0", "0", "0"]})
    with pytest.raises(SchemaError):
        sform_from_dict({"p": 1, "q": 1, "degree": 1, "values": ["0", "0", "x"]})


def test_bundle_map_naturality_of_coordinate_ops():
    # fiberwise polynomial maps preserve jet elements; pushing the
    # difference/translation forward matches the coordinate operations
    from jetweil.quasicolimit import dsym_spec, strong_minus, strong_plus
    from jetweil.randgen import rand_bundle_map, rand_vector
    from jetweil.taylor import pushforward

    rng = trial_rng(21, 0)
    for _ in range(5):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        order = rng.randint(1, 3)
        spec = dsym_spec(p, order)
        jm = rand_jet(p, q, order, rng)
        jp = jm.with_top([rand_vector(rng, q) for _ in jm.blocks[-1]])
        fmap = rand_bundle_map(p, q, 2, rng)
        fp, fm = pushforward(fmap, embed(jp)), pushforward(fmap, embed(jm))
        assert is_coordinate_jet(fp, p, q) and is_coordinate_jet(fm, p, q)
        lhs = pushforward(fmap, strong_minus(spec, embed(jp), embed(jm)))
        assert lhs == strong_minus(spec, fp, fm)
        s = rand_sform(p, q, order, rng, x=jm.x, u=jm.u)
        lhs2 = pushforward(fmap, strong_plus(spec, embed_sform(s), embed(jm)))
        assert lhs2 == strong_plus(spec, pushforward(fmap, embed_sform(s)), fm)
