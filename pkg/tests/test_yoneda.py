"""Transposition between elements and transformations, the Yoneda bijection and representability."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlkit.catalog import chain, cyclic_group, p2, parallel_pair, set_functor_from_lists, terminal_category
from dlkit.enumeration import count_nats, count_nats_batch, enumerate_nats, enumerate_set_functors, functor_shape
from dlkit.errors import MalformedError
from dlkit.fincat import (FinSet, all_functions, check_naturality, constant_functor, hom_functor, identity_nt,
                          nt_compose)
from dlkit.quanteval import check_universal_element
from dlkit.yoneda import (POINT, alpha_to_eta, eta_to_alpha, find_representation, name_of, names_functor,
                          yoneda_check, yoneda_embedding_map)
from strategies import FAMILY, set_functors

SMALL = [C for C in FAMILY if len(C.objects) <= 5]


def p2_functor():
    """A functor on P2 with value sizes (2, 3)."""
    return set_functor_from_lists(p2(), {"a": ["x", "y"], "b": [0, 1, 2]}, {"a<=b": [2, 0]})


# ---------------------------------------------------------------- eta_to_alpha / alpha_to_eta


def test_eta_to_alpha_by_hand():
    R = p2_functor()
    alpha = eta_to_alpha(R, "a", "y")
    assert alpha.components["a"].mapping == {"id_a": "y"}
    assert alpha.components["b"].mapping == {"a<=b": 0}
    assert check_naturality(alpha).truth


def test_identity_element_of_hom_functor_gives_identity():
    C = chain(3)
    for c in C.objects:
        H = hom_functor(C, c)
        assert eta_to_alpha(H, c, C.identities[c]) == identity_nt(H)
        assert alpha_to_eta(identity_nt(H)) == C.identities[c]


def test_alpha_to_eta_rejects_wrong_source():
    R = p2_functor()
    alpha = eta_to_alpha(R, "a", "x")
    with pytest.raises(MalformedError):
        alpha_to_eta(alpha, "b")
    with pytest.raises(MalformedError):
        eta_to_alpha(R, "a", 7)


@given(set_functors(max_size=3))
@settings(max_examples=60, deadline=None)
def test_transposition_round_trips(R):
    C = R.source
    for c in C.objects:
        for e in R.onObjects[c]:
            alpha = eta_to_alpha(R, c, e)
            assert check_naturality(alpha).truth
            assert alpha_to_eta(alpha, c) == e
        for alpha in enumerate_nats(hom_functor(C, c), R):
            assert eta_to_alpha(R, c, alpha_to_eta(alpha, c)) == alpha


# ---------------------------------------------------------------- enumerate_nats


def test_nat_contains_identity():
    R = p2_functor()
    assert identity_nt(R) in enumerate_nats(R, R)


def test_nat_from_hom_counts_elements_on_p2():
    R = p2_functor()
    assert len(enumerate_nats(hom_functor(p2(), "a"), R)) == 2
    assert len(enumerate_nats(hom_functor(p2(), "b"), R)) == 3


@pytest.mark.parametrize("C", [p2(), chain(3), parallel_pair(), cyclic_group(3)], ids=lambda C: C.name)
def test_constant_functors_over_connected_category(C):
    for s, t in [(0, 2), (2, 0), (2, 3), (3, 2)]:
        S, T = FinSet.range(s), FinSet.range(t)
        expected = len(list(all_functions(S, T)))
        assert expected == t ** s
        assert len(enumerate_nats(constant_functor(C, S), constant_functor(C, T))) == expected


@given(set_functors(max_size=2), st.data())
@settings(max_examples=40, deadline=None)
def test_count_agrees_with_enumeration(F, data):
    G = data.draw(set_functors(category=F.source, max_size=2))
    nats = enumerate_nats(F, G)
    assert count_nats(F, G) == len(nats)
    assert all(check_naturality(T).truth for T in nats)


@given(st.lists(set_functors(category=chain(3), max_size=3), min_size=1, max_size=6), st.data())
@settings(max_examples=30, deadline=None)
def test_batched_counts_agree(Fs, data):
    Gs = [data.draw(set_functors(category=chain(3), max_size=3)) for _ in Fs]
    expected = [count_nats(F, G) for F, G in zip(Fs, Gs)]
    assert list(count_nats_batch(Fs, Gs)) == expected
    shapes = [functor_shape(F) for F in Fs], [functor_shape(G) for G in Gs]
    assert list(count_nats_batch(*shapes, category=chain(3))) == expected


# ---------------------------------------------------------------- yoneda_check


def test_one_object_singleton():
    C = terminal_category()
    R = constant_functor(C, ["*"])
    v = yoneda_check(R, "•")
    assert v.truth
    assert v.subreports["names_chain"].witness == [1, 1, 1, 1]


def test_p2_sweep():
    for R in enumerate_set_functors(p2(), 3):
        for c in ("a", "b"):
            v = yoneda_check(R, c)
            assert v.truth, v.counterexample
            assert len(enumerate_nats(hom_functor(p2(), c), R)) == len(R.onObjects[c])


def test_names_chain_cardinalities():
    R = p2_functor()
    v = yoneda_check(R, "b")
    assert v.subreports["names_chain"].witness == [3, 3, 3, 3]
    N = names_functor(R)
    assert len(N.onObjects["a"]) == 2


@pytest.mark.parametrize("C", SMALL, ids=lambda C: C.name)
def test_sweep_of_small_categories(C):
    for R in itertools.islice(enumerate_set_functors(C, 3, up_to_iso=True), 6):
        for c in C.objects:
            assert yoneda_check(R, c).truth


@given(set_functors(max_size=3))
@settings(max_examples=40, deadline=None)
def test_transformations_fixed_by_value_at_identity(R):
    C = R.source
    for c in C.objects:
        nats = enumerate_nats(hom_functor(C, c), R)
        for S, T in itertools.combinations(nats, 2):
            if S.components[c](C.identities[c]) == T.components[c](C.identities[c]):
                assert S == T


# ---------------------------------------------------------------- name_of


def test_name_of_point():
    f = name_of(2, FinSet((2, 3)))
    assert f.domain == POINT and f.mapping == {"*": 2}
    with pytest.raises(MalformedError):
        name_of(4, FinSet((2, 3)))


def test_names_are_injective():
    S = FinSet((2, 3, 5))
    names = [name_of(s, S) for s in S]
    assert len({n.images for n in names}) == len(S)
    assert sorted(n.images for n in names) == sorted(f.images for f in all_functions(POINT, S))


def test_name_after_function():
    S, T = FinSet((2, 3)), FinSet(("p", "q"))
    for f in all_functions(S, T):
        for s in S:
            assert f.after(name_of(s, S)) == name_of(f(s), T)


# ---------------------------------------------------------------- yoneda_embedding_map


def test_embedding_of_identity():
    C = chain(3)
    beta = yoneda_embedding_map(C, "id_x1")
    assert beta == identity_nt(hom_functor(C, "x1"))


def test_embedding_round_trip():
    C = chain(3)
    for m in C.morphisms:
        assert alpha_to_eta(yoneda_embedding_map(C, m.id)) == m.id


def test_embedding_is_contravariant_on_chain():
    C = chain(3)
    phi, phi2 = "x0<=x1", "x1<=x2"
    composite = yoneda_embedding_map(C, C.comp[(phi2, phi)])
    assert nt_compose("vertical", yoneda_embedding_map(C, phi), yoneda_embedding_map(C, phi2)) == composite
    for D in C.objects:
        for f in hom_functor(C, "x2").onObjects[D]:
            assert composite.components[D](f) == C.comp[(C.comp[(f, phi2)], phi)]


# ---------------------------------------------------------------- find_representation


def test_hom_functor_is_represented_by_its_object():
    C = chain(3)
    for c in C.objects:
        cert = find_representation(hom_functor(C, c))
        assert cert.obj == c
        assert cert.beta == identity_nt(hom_functor(C, c))
        assert cert.eta == C.identities[c]
        assert cert.universality.truth


def test_no_representation_when_profiles_differ():
    C = chain(3)
    R = set_functor_from_lists(C, {"x0": [0, 1], "x1": [0, 1], "x2": [0, 1]},
                               {"x0<=x1": [0, 1], "x1<=x2": [0, 1], "x0<=x2": [0, 1]})
    profiles = [tuple(len(hom_functor(C, c).onObjects[d]) for d in C.objects) for c in C.objects]
    assert R.sizes() not in profiles
    assert find_representation(R) is None


@pytest.mark.parametrize("C", [p2(), chain(3), parallel_pair(), cyclic_group(2)], ids=lambda C: C.name)
def test_representation_iff_universal_element(C):
    sizes = {"found": 0, "none": 0}
    for R in enumerate_set_functors(C, 3, up_to_iso=True):
        cert = find_representation(R)
        universal = any(check_universal_element(R, c, e).truth for c in C.objects for e in R.onObjects[c])
        assert (cert is not None) == universal
        if cert is not None:
            assert cert.universality.truth
            assert all(cert.beta.components[d].is_bijection() for d in C.objects)
            assert check_naturality(cert.inverse).truth
        sizes["found" if cert else "none"] += 1
    assert sizes["found"] > 0 and sizes["none"] > 0
