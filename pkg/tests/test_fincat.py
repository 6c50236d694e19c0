"""Finite categories, functors and natural transformations: law checks and constructions."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlkit.catalog import (chain, cyclic_group, finset_category, finset_function, kan_example, p2,
                           parallel_then_arrow, set_functor_from_lists, yoneda_family)
from dlkit.enumeration import enumerate_nats, enumerate_set_functors, random_set_functor
from dlkit.errors import ComposabilityError, MalformedError
from dlkit.fincat import (FinCategory, FinFunctor, FinSet, NatTransf, SetFunction, SetValuedFunctor,
                          check_category, check_functor, check_naturality, compose, compose_functors,
                          identity_functor, identity_nt, hom_functor, nt_compose, opposite,
                          precompose, preorder_category)
from dlkit.yoneda import eta_to_alpha
from strategies import preorders, set_functors, small_categories


def with_comp(C, key, value):
    comp = dict(C.comp)
    comp[key] = value
    return FinCategory(C.objects, C.morphisms, C.identities, comp, name=C.name)


def failing_triples(C):
    """Independent associativity scan over all composable triples."""
    out = []
    for f, g, h in itertools.product(C.mor, repeat=3):
        if C.target(f) == C.source(g) and C.target(g) == C.source(h):
            if C.comp[(h, C.comp[(g, f)])] != C.comp[(C.comp[(h, g)], f)]:
                out.append([h, g, f])
    return out


# ---------------------------------------------------------------- check_category


def test_p2_is_valid():
    C = p2()
    assert len(C.morphisms) == 3
    assert check_category(C).truth


def test_p2_with_redirected_entry_is_invalid():
    C = with_comp(p2(), ("id_b", "a<=b"), "id_a")
    v = check_category(C)
    assert not v.truth
    assert v.counterexample["check"] == "closure"
    assert v.counterexample["detail"]["pair"] == ["id_b", "a<=b"]


def test_redirected_entry_names_the_failing_triple():
    C = with_comp(cyclic_group(3), ("r1", "r2"), "r1")
    v = check_category(C)
    assert not v.truth
    assert v.counterexample["check"] == "assoc"
    expected = failing_triples(C)
    assert expected
    assert v.counterexample["detail"]["triple"] in expected


def test_redirected_identity_entry_breaks_unit_law():
    C = with_comp(parallel_then_arrow(), ("id_1", "u"), "v")
    v = check_category(C)
    assert not v.truth
    assert v.counterexample == {"check": "idL", "detail": {"morphism": "u"}}


def test_kan_example_target_is_valid_with_subreports():
    _, B, _ = kan_example()
    assert B.objects == ("1'", "2'", "3'", "4'", "5'", "6'")
    v = check_category(B)
    assert v.truth
    for key in ("assoc", "idL", "idR"):
        assert v.subreports[key].truth


def test_dangling_ids_are_malformed():
    C = p2()
    with pytest.raises(MalformedError):
        FinCategory(C.objects, C.morphisms, C.identities, {("id_b", "a<=b"): "nope"})
    with pytest.raises(MalformedError):
        FinCategory(["a"], [("id_a", "a", "z")], {"a": "id_a"}, {})


# ---------------------------------------------------------------- compose


def test_compose_identities():
    C = p2()
    assert compose(C, "id_b", "a<=b") == "a<=b"
    assert compose(C, "a<=b", "id_a") == "a<=b"


def test_compose_in_chain_gives_unique_arrow():
    C = preorder_category(["a", "b", "c"], [("a", "b"), ("b", "c")])
    h = compose(C, "b<=c", "a<=b")
    assert C.hom("a", "c") == (h,)


def test_compose_rejects_mismatched_endpoints():
    C = p2()
    with pytest.raises(ComposabilityError):
        compose(C, "a<=b", "a<=b")


# ---------------------------------------------------------------- opposite


def test_opposite_of_p2_reverses_arrow():
    Cop = opposite(p2())
    assert Cop.source("a<=b") == "b" and Cop.target("a<=b") == "a"
    assert Cop.identities == p2().identities
    assert check_category(Cop).truth


@given(small_categories())
def test_opposite_is_an_involution(C):
    Cop2 = opposite(opposite(C))
    assert Cop2.objects == C.objects
    assert Cop2.morphisms == C.morphisms
    assert Cop2.identities == C.identities
    assert Cop2.comp == C.comp


@given(small_categories())
def test_opposite_flips_composition(C):
    Cop = opposite(C)
    for (g, f), h in C.comp.items():
        assert Cop.comp[(f, g)] == h
    assert len(Cop.comp) == len(C.comp)


# ---------------------------------------------------------------- preorder_category


def test_preorder_two_elements_is_p2():
    C = preorder_category(["a", "b"], [("a", "b")])
    assert {m.id for m in C.morphisms} == {"id_a", "id_b", "a<=b"}


def test_kan_example_target_has_one_arrow_per_pair():
    _, B, _ = kan_example()
    covers = {("1'", "2'"), ("1'", "3'"), ("2'", "4'"), ("3'", "4'"), ("3'", "5'"), ("4'", "6'"), ("5'", "6'")}
    reach = {(x, x) for x in B.objects} | covers
    while True:
        new = {(a, d) for a, b in reach for c, d in reach if b == c} | reach
        if new == reach:
            break
        reach = new
    for x in B.objects:
        for y in B.objects:
            assert len(B.hom(x, y)) == (1 if (x, y) in reach else 0)


def test_preorder_closes_transitively():
    C = preorder_category(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert C.hom("a", "c") == ("a<=c",)
    assert C.hom("c", "a") == ()


def test_preorder_rejects_duplicates():
    with pytest.raises(MalformedError):
        preorder_category(["a", "a"], [])


@given(preorders())
def test_preorders_are_valid_thin_categories(C):
    assert check_category(C).truth
    assert all(len(C.hom(x, y)) <= 1 for x in C.objects for y in C.objects)
    assert C.is_preorder()


# ---------------------------------------------------------------- check_functor


def times_b_functor(n=2, B=("0", "1")):
    """``A ↦ A×B`` with ``f ↦ (p ↦ (f(πp), π′p))`` on finite sets of size at most ``n``."""
    C = finset_category(n)
    vals = {k: FinSet(tuple(f"{x}{b}" for x in range(k) for b in B)) for k in C.objects}
    maps = {}
    for m in C.morphisms:
        images = finset_function(C, m.id)
        maps[m.id] = SetFunction(vals[m.source], vals[m.target], tuple(f"{images[int(p[0])]}{p[1]}" for p in vals[m.source]))
    return SetValuedFunctor(C, vals, maps)


def test_identity_functor_is_valid():
    assert check_functor(identity_functor(p2())).truth


def test_times_b_functor_is_valid():
    F = times_b_functor()
    assert [len(F.onObjects[k]) for k in F.source.objects] == [0, 2, 4]
    assert check_functor(F).truth


def test_corrupted_composite_names_the_pair():
    C = parallel_then_arrow()
    F1 = {m.id: m.id for m in C.morphisms}
    F1["w.u"] = "w.v"
    F = FinFunctor(C, C, {o: o for o in C.objects}, F1)
    v = check_functor(F)
    assert not v.truth
    bad = [[g, f] for g, f in C.composable_pairs() if F1[C.comp[(g, f)]] != C.comp[(F1[g], F1[f])]]
    assert bad == [["w", "u"]]
    assert v.counterexample["detail"]["pair"] in bad


def test_corrupted_set_functor_names_the_pair():
    C = chain(3)
    F = set_functor_from_lists(C, {"x0": [0, 1], "x1": [0, 1], "x2": [0, 1]},
                               {"x0<=x1": [1, 0], "x1<=x2": [1, 0], "x0<=x2": [1, 0]})
    v = check_functor(F)
    assert not v.truth
    assert v.counterexample["detail"]["pair"] == ["x1<=x2", "x0<=x1"]


def test_functor_with_wrong_endpoints_is_malformed():
    C = p2()
    F = FinFunctor(C, C, {"a": "a", "b": "a"}, {"id_a": "id_a", "id_b": "id_a", "a<=b": "a<=b"})
    with pytest.raises(MalformedError):
        check_functor(F)


@given(set_functors())
@settings(max_examples=50)
def test_enumerated_functors_are_valid(F):
    assert check_functor(F).truth


# ---------------------------------------------------------------- check_naturality


def test_identity_nt_is_natural():
    F = times_b_functor()
    assert check_naturality(identity_nt(F)).truth


def test_eta_to_alpha_is_natural():
    _, B, _ = kan_example()
    R = random_set_functor(B, random.Random(3), max_size=3, min_size=1)
    for C in B.objects:
        for e in R.onObjects[C]:
            assert check_naturality(eta_to_alpha(R, C, e)).truth


def test_altered_component_gives_witness_morphism():
    C = p2()
    H = hom_functor(C, "a")
    R = set_functor_from_lists(C, {"a": [0, 1], "b": [0, 1]}, {"a<=b": [0, 1]})
    alpha = eta_to_alpha(R, "a", 0)
    comps = dict(alpha.components)
    comps["b"] = SetFunction(H.onObjects["b"], R.onObjects["b"], (1,))
    v = check_naturality(NatTransf(H, R, comps))
    assert not v.truth
    assert v.counterexample["morphism"] == "a<=b"


def test_component_with_wrong_endpoints_is_malformed():
    F = times_b_functor()
    comps = dict(identity_nt(F).components)
    comps[1] = SetFunction.identity(F.onObjects[2])
    with pytest.raises(MalformedError):
        check_naturality(NatTransf(F, F, comps))


# ---------------------------------------------------------------- hom_functor


def test_hom_functor_of_p2_at_a():
    H = hom_functor(p2(), "a")
    assert H.onObjects["a"].elements == ("id_a",)
    assert H.onObjects["b"].elements == ("a<=b",)
    assert check_functor(H).truth


def test_hom_functor_acts_by_postcomposition():
    C = chain(3)
    H = hom_functor(C, "x0")
    for g in C.morphisms:
        for f in H.onObjects[g.source]:
            assert H.onMorphisms[g.id](f) == C.comp[(g.id, f)]


def test_contravariant_hom_functor_lives_on_opposite():
    C = chain(3)
    H = hom_functor(C, "x2", "contravariant")
    assert H.source == opposite(C)
    assert H.onMorphisms["x0<=x1"]("x1<=x2") == "x0<=x2"
    assert check_functor(H).truth


def test_hom_functor_unknown_object():
    with pytest.raises(MalformedError):
        hom_functor(p2(), "zz")


@pytest.mark.parametrize("C", [C for C in yoneda_family() if len(C.objects) <= 8], ids=lambda C: C.name)
def test_hom_functors_are_valid(C):
    for c in C.objects:
        assert check_functor(hom_functor(C, c)).truth
        assert check_functor(hom_functor(C, c, "contravariant")).truth


# ---------------------------------------------------------------- nt_compose


def test_vertical_identities():
    F = times_b_functor()
    I = identity_nt(F)
    assert nt_compose("vertical", I, I) == I


def test_whiskered_then_vertical_composite():
    # F : A → B, U : G ⇒ R on B, T : RF ⇒ H on A; T·UF : GF ⇒ H.
    A = p2()
    B = chain(3)
    F = FinFunctor(A, B, {"a": "x0", "b": "x2"}, {"id_a": "id_x0", "id_b": "id_x2", "a<=b": "x0<=x2"})
    rng = random.Random(11)
    while True:
        G = random_set_functor(B, rng, max_size=2, min_size=1)
        R = random_set_functor(B, rng, max_size=2, min_size=1)
        Us = enumerate_nats(G, R)
        H = random_set_functor(A, rng, max_size=2, min_size=1)
        Ts = enumerate_nats(precompose(R, F), H)
        if Us and Ts:
            break
    U, T = Us[-1], Ts[-1]
    UF = nt_compose("whisker_right", U, F)
    out = nt_compose("vertical", T, UF)
    assert out.sourceF == precompose(G, F) and out.targetF == H
    for a in A.objects:
        assert out.components[a] == T.components[a].after(U.components[F.F0[a]])
    assert check_naturality(out).truth


def test_whisker_left_by_a_set_functor():
    A, B = p2(), chain(3)
    F = FinFunctor(A, B, {"a": "x0", "b": "x1"}, {"id_a": "id_x0", "id_b": "id_x1", "a<=b": "x0<=x1"})
    Gf = FinFunctor(A, B, {"a": "x1", "b": "x2"}, {"id_a": "id_x1", "id_b": "id_x2", "a<=b": "x1<=x2"})
    T = NatTransf(F, Gf, {"a": "x0<=x1", "b": "x1<=x2"})
    assert check_naturality(T).truth
    K = random_set_functor(B, random.Random(5), max_size=3)
    KT = nt_compose("whisker_left", K, T)
    assert KT.components["a"] == K.onMorphisms["x0<=x1"]


def test_vertical_shape_mismatch():
    F = times_b_functor()
    G = times_b_functor(B=("0",))
    with pytest.raises(ComposabilityError):
        nt_compose("vertical", identity_nt(F), identity_nt(G))


def test_vertical_composition_is_associative_on_random_triple():
    C = chain(3)
    rng = random.Random(2)
    Fs = [random_set_functor(C, rng, max_size=2, min_size=1) for _ in range(4)]
    T1 = rng.choice(enumerate_nats(Fs[0], Fs[1]) or [None])
    T2 = rng.choice(enumerate_nats(Fs[1], Fs[2]) or [None])
    T3 = rng.choice(enumerate_nats(Fs[2], Fs[3]) or [None])
    assert None not in (T1, T2, T3)
    left = nt_compose("vertical", T3, nt_compose("vertical", T2, T1))
    right = nt_compose("vertical", nt_compose("vertical", T3, T2), T1)
    assert left == right
    for o in C.objects:
        expected = tuple(T3[o](T2[o](T1[o](x))) for x in Fs[0].onObjects[o])
        assert left[o].images == expected


@given(set_functors(max_size=2))
@settings(max_examples=30)
def test_vertical_with_identity_is_identity(F):
    I = identity_nt(F)
    for T in enumerate_nats(F, F)[:3]:
        assert nt_compose("vertical", I, T) == T
        assert nt_compose("vertical", T, I) == T


def test_whiskering_preserves_naturality():
    A, B = p2(), chain(3)
    for F in [FinFunctor(A, B, {"a": x, "b": y}, {"id_a": f"id_{x}", "id_b": f"id_{y}", "a<=b": B.hom(x, y)[0]})
              for x in B.objects for y in B.objects if B.hom(x, y)]:
        for G in itertools.islice(enumerate_set_functors(B, 2), 20):
            for U in enumerate_nats(G, G)[:2]:
                assert check_naturality(nt_compose("whisker_right", U, F)).truth


def test_compose_functors_checks_shapes():
    with pytest.raises(ComposabilityError):
        compose_functors(identity_functor(p2()), identity_functor(chain(3)))
