"""Staged quantified diagrams, universality and marker expansion."""

import itertools
import random
from pathlib import Path

import pytest

from dlkit.catalog import (finset_category, finset_function, finset_morphism, galois_fixtures, galois_unit, p2,
                           parallel_pair)
from dlkit.diagram import Node, Diagram, parse_dl, print_dl
from dlkit.errors import MalformedError, ValidationError
from dlkit.fincat import identity_functor
from dlkit.quanteval import check_universal, eval_quantified, expand_marker

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return parse_dl((FIXTURES / name).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- eval_quantified


@pytest.mark.parametrize("n", [1, 2, 3])
def test_equalizers_exist_in_finite_sets(n):
    v = eval_quantified(finset_category(n), load("lsq.dl"))
    assert v.truth
    assert v.witness["flavor"] == "forall"


def test_parallel_pair_has_no_equalizer():
    v = eval_quantified(parallel_pair(), load("lsq.dl"))
    assert not v.truth
    cex = v.counterexample
    assert cex["stage"] == 1
    assert cex["env"] == {"A": "0", "B": "1", "f": "u", "g": "v"}
    assert cex["then"]["flavor"] == "exists"


def brute_force_equalizer_exists(C, f, g):
    """Oracle: some (E, e) equalizes f, g and every equalizing h factors uniquely through e."""
    A = C.source(f)
    for E in C.objects:
        for e in C.hom(E, A):
            if C.comp[(f, e)] != C.comp[(g, e)]:
                continue
            ok = True
            for X in C.objects:
                for h in C.hom(X, A):
                    if C.comp[(f, h)] == C.comp[(g, h)]:
                        if len([k for k in C.hom(X, E) if C.comp[(e, k)] == h]) != 1:
                            ok = False
            if ok:
                return True
    return False


def test_parallel_pair_oracle_agrees():
    C = parallel_pair()
    assert not brute_force_equalizer_exists(C, "u", "v")
    assert brute_force_equalizer_exists(C, "u", "u")
    v = eval_quantified(C, load("lsq.dl"), exclude=[{"f": "u", "g": "v"}, {"f": "v", "g": "u"}])
    assert v.truth


def test_two_witnesses_are_reported():
    v = eval_quantified(parallel_pair(), load("two_witness.dl"), {"a": "0", "b": "1"})
    assert not v.truth
    assert v.counterexample["reason"] == "extension is not unique"
    assert v.counterexample["witnesses"] == [{"f": "u"}, {"f": "v"}]


def test_unique_witness_is_stored():
    v = eval_quantified(p2(), load("two_witness.dl"), {"a": "a", "b": "b"})
    assert v.truth
    assert v.witness["env"] == {"f": "a<=b"}


def test_unbound_stage_zero_component():
    with pytest.raises(ValidationError, match="unbound"):
        eval_quantified(p2(), load("two_witness.dl"), {"a": "a"})


def test_non_commuting_base():
    D = load("square.dl")
    C = parallel_pair()
    env = {"A": "0", "B": "0", "C": "0", "D": "1", "f": "id_0", "g": "id_0", "h": "u", "k": "v"}
    with pytest.raises(ValidationError, match="commute"):
        eval_quantified(C, D, env)


def test_removing_stored_witness_gives_false():
    D = load("two_witness.dl")
    v = eval_quantified(p2(), D, {"a": "a", "b": "b"})
    assert v.truth
    assert not eval_quantified(p2(), D, {"a": "a", "b": "b"}, exclude=[v.witness["env"]]).truth


def test_removing_a_nested_witness_gives_false():
    A, B, R, L = galois_fixtures()[0]
    eta = galois_unit(A, R, L)
    a = A.objects[0]
    kw = dict(categories={"BA": A, "BB": B}, functors={"R": R})
    base = {"A": a, "B": L.F0[a], "eta": eta[a]}
    D = load("universal_arrow.dl")
    assert eval_quantified(None, D, base, **kw).truth
    flat = check_universal(A, B, R, a, L.F0[a], eta[a]).witness["flat"]
    (Dobj, g), f = next(iter(flat.items()))
    v = eval_quantified(None, D, base, exclude=[{"B2": Dobj, "g": g, "f": f}], **kw)
    assert not v.truth
    assert v.counterexample["env"] == {"B2": Dobj, "g": g}


# ---------------------------------------------------------------- check_universal


def test_identity_is_universal_in_p2():
    C = p2()
    v = check_universal(C, C, identity_functor(C), "a", "a", "id_a")
    assert v.truth
    assert v.witness["flat"] == {("a", "id_a"): "id_a", ("b", "a<=b"): "a<=b"}
    assert all(v.witness["sharp"][(D, f)] == f for D, f in v.witness["sharp"])


def brute_universal(A, B, R, a, c, eta):
    for D in B.objects:
        for g in A.hom(a, R.F0[D]):
            if len([f for f in B.hom(c, D) if A.comp[(R.F1[f], eta)] == g]) != 1:
                return False
    return True


def test_galois_units_are_universal():
    for A, B, R, L in galois_fixtures():
        eta = galois_unit(A, R, L)
        for a in A.objects:
            v = check_universal(A, B, R, a, L.F0[a], eta[a])
            assert v.truth == brute_universal(A, B, R, a, L.F0[a], eta[a]) is True
            for (D, g), f in v.witness["flat"].items():
                assert v.witness["sharp"][(D, f)] == g


def test_non_universal_arrow_has_witness():
    found = 0
    for A, B, R, L in galois_fixtures():
        for a in A.objects:
            for b in B.objects:
                h = A.hom(a, R.F0[b])
                if h and b != L.F0[a]:
                    v = check_universal(A, B, R, a, b, h[0])
                    assert not v.truth and not brute_universal(A, B, R, a, b, h[0])
                    D, g = v.counterexample["object"], v.counterexample["morphism"]
                    assert A.source(g) == a and A.target(g) == R.F0[D]
                    assert len(v.counterexample["solutions"]) != 1
                    found += 1
    assert found > 0


def test_check_universal_rejects_bad_endpoints():
    C = p2()
    with pytest.raises(MalformedError):
        check_universal(C, C, identity_functor(C), "a", "b", "id_a")


def test_universality_agrees_with_diagram_evaluation():
    D = load("universal_arrow.dl")
    for A, B, R, L in galois_fixtures():
        kw = dict(categories={"BA": A, "BB": B}, functors={"R": R})
        for a in A.objects:
            for c in B.objects:
                for eta in A.hom(a, R.F0[c]):
                    direct = check_universal(A, B, R, a, c, eta).truth
                    assert eval_quantified(None, D, {"A": a, "B": c, "eta": eta}, **kw).truth == direct


# ---------------------------------------------------------------- expand_marker


def test_univ_expansion_matches_golden():
    E = expand_marker(load("univ_marker.dl"))
    assert print_dl(E) == (FIXTURES / "univ_marker_expanded.dl").read_text(encoding="utf-8")
    assert E == load("univ_marker_expanded.dl")


def test_univ_expansion_agrees_with_universal_arrow():
    E = expand_marker(load("univ_marker.dl"))
    for A, B, R, L in galois_fixtures()[:4]:
        kw = dict(categories={"BA": A, "BB": B}, functors={"R": R})
        for a in A.objects:
            for c in B.objects:
                for eta in A.hom(a, R.F0[c]):
                    got = eval_quantified(None, E, {"A": a, "C": c, "eta": eta}, **kw).truth
                    assert got == check_universal(A, B, R, a, c, eta).truth


def test_pullback_expansion_shape():
    E = expand_marker(load("pullback_marker.dl"))
    q = {c.id: c.quantifier for c in list(E.nodes) + list(E.arrows) if c.quantifier}
    assert {k: (v.flavor, v.stage) for k, v in q.items()} == {
        "pb_P_X": ("forall", 1), "pb_P_x1": ("forall", 1), "pb_P_x2": ("forall", 1), "pb_P_u": ("existsunique", 2)}
    assert not any(n.markers for n in E.nodes)


def test_marker_stages_follow_existing_ones():
    text = (FIXTURES / "pullback_marker.dl").read_text().replace("node W;", "node W [forall@1];").replace(
        "node Y;", "node Y [forall@1];").replace("node Z;", "node Z [forall@1];").replace(
        "arrow q1 : Y -> W;", "arrow q1 : Y -> W [forall@1];").replace("arrow q2 : Z -> W;", "arrow q2 : Z -> W [forall@1];")
    E = expand_marker(parse_dl(text))
    assert E.arrow_map["pb_P_u"].quantifier.stage == 3


def test_marker_free_diagram_unchanged():
    D = load("square.dl")
    assert expand_marker(D) is D


def test_unknown_marker():
    D = Diagram("M", [Node("A", markers=("wobbly",))])
    with pytest.raises(ValidationError, match="unknown marker"):
        expand_marker(D)


def test_misplaced_pullback_marker():
    D = parse_dl("diagram M { node P [pullback]; node Y; arrow p : P -> Y; }")
    with pytest.raises(ValidationError, match="two outgoing"):
        expand_marker(D)


def pullback_oracle(f1, f2, p1, p2):
    """The square is a pullback iff ``x ↦ (p1 x, p2 x)`` is a bijection onto the matching pairs."""
    pairs = sorted((y, z) for y in range(len(f1)) for z in range(len(f2)) if f1[y] == f2[z])
    got = sorted(zip(p1, p2))
    return got == pairs


def pullback_cases(C, rng, perturbed=200):
    """Every limit square on cospans in ``C`` plus random commuting squares."""
    cases = []
    for W, Y, Z in itertools.product(C.objects, repeat=3):
        for q1, q2 in itertools.product(C.hom(Y, W), C.hom(Z, W)):
            f1, f2 = finset_function(C, q1), finset_function(C, q2)
            pairs = [(y, z) for y in range(Y) for z in range(Z) if f1[y] == f2[z]]
            if len(pairs) <= max(C.objects):
                p = len(pairs)
                cases.append((p, Y, Z, W, finset_morphism(p, Y, [a for a, _ in pairs]),
                              finset_morphism(p, Z, [b for _, b in pairs]), q1, q2))
    extra = []
    while len(extra) < perturbed:
        W, Y, Z, P = (rng.choice(C.objects) for _ in range(4))
        q1, q2 = rng.choice(C.hom(Y, W) or [None]), rng.choice(C.hom(Z, W) or [None])
        p1, p2 = rng.choice(C.hom(P, Y) or [None]), rng.choice(C.hom(P, Z) or [None])
        if None in (q1, q2, p1, p2) or C.comp[(q1, p1)] != C.comp[(q2, p2)]:
            continue
        extra.append((P, Y, Z, W, p1, p2, q1, q2))
    return cases + extra


def test_pullback_marker_agrees_with_limit():
    C = finset_category(3)
    E = expand_marker(load("pullback_marker.dl"))
    seen = {True: 0, False: 0}
    for P, Y, Z, W, p1, p2, q1, q2 in pullback_cases(C, random.Random(0)):
        env = {"P": P, "Y": Y, "Z": Z, "W": W, "p1": p1, "p2": p2, "q1": q1, "q2": q2}
        expected = pullback_oracle(finset_function(C, q1), finset_function(C, q2),
                                   finset_function(C, p1), finset_function(C, p2))
        assert eval_quantified(C, E, env).truth == expected, env
        seen[expected] += 1
    assert seen[True] > 0 and seen[False] > 0
