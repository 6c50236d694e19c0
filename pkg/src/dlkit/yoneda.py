"""The Yoneda correspondence at finite scale.

For a Set-valued ``R`` on ``B`` and an object ``C``, elements ``e ∈ R(C)``
correspond to transformations ``α : B(C,−) ⇒ R`` via
``α_D(f) = R(f)(e)`` and back via ``e = α_C(id_C)``.  Everything here
checks that correspondence by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .enumeration import enumerate_nats
from .errors import MalformedError
from .fincat import (FinCategory, FinSet, NatTransf, SetFunction, SetValuedFunctor, check_naturality,
                     hom_functor, is_natural_iso)
from .verdict import Verdict

POINT = FinSet(("*",))


def eta_to_alpha(R: SetValuedFunctor, C, e) -> NatTransf:
    """``α_D(f) = R(f)(e)`` for ``f : C → D``."""
    B = R.source
    if C not in B.identities:
        raise MalformedError(f"unknown object {C!r}")
    if e not in R.onObjects[C]:
        raise MalformedError(f"{e!r} is not an element of R({C})")
    H = hom_functor(B, C)
    comps = {D: SetFunction(H.onObjects[D], R.onObjects[D], tuple(R.onMorphisms[f](e) for f in H.onObjects[D]))
             for D in B.objects}
    return NatTransf(H, R, comps, name=f"α[{e}]")


def _represented_object(alpha: NatTransf):
    B = alpha.category
    for C in B.objects:
        if alpha.sourceF == hom_functor(B, C):
            return C
    raise MalformedError("source of the transformation is not a covariant hom-functor")


def alpha_to_eta(alpha: NatTransf, C=None):
    """``α_C(id_C)``.  ``C`` is found from the source functor when omitted."""
    B = alpha.category
    if C is None:
        C = _represented_object(alpha)
    elif alpha.sourceF != hom_functor(B, C):
        raise MalformedError(f"source of the transformation is not B({C},−)")
    return alpha.components[C](B.identities[C])


def name_of(s, S: FinSet) -> SetFunction:
    """The function ``{*} → S`` picking out ``s``."""
    if s not in S:
        raise MalformedError(f"{s!r} is not in {S}")
    return SetFunction(POINT, S, (s,))


def names_functor(R: SetValuedFunctor) -> SetValuedFunctor:
    """``Set(1, R−)``; a name is stored as its one-entry image tuple."""
    B = R.source
    vals = {D: FinSet(tuple((x,) for x in R.onObjects[D])) for D in B.objects}
    maps = {m.id: SetFunction(vals[m.source], vals[m.target],
                              tuple((R.onMorphisms[m.id](x[0]),) for x in vals[m.source]))
            for m in B.morphisms}
    return SetValuedFunctor(B, vals, maps, name="Set(1,R−)")


def _summary(alpha: NatTransf):
    return {str(D): [[f, y] for f, y in zip(c.domain, c.images)] for D, c in alpha.components.items()}


def yoneda_check(R: SetValuedFunctor, C) -> Verdict:
    """Verify the bijection ``R(C) ≅ Nat(B(C,−), R)`` by exhaustive enumeration.

    Sub-reports: naturality of every ``α_e``; both round trips; that
    ``e ↦ α_e`` is a bijection onto the enumerated transformations; the
    lemma that every transformation is fixed by its value at ``id_C``; and the
    cardinality chain through the names functor ``Set(1, R−)``.
    """
    B = R.source
    H = hom_functor(B, C)
    idC = B.identities[C]
    alphas = {e: eta_to_alpha(R, C, e) for e in R.onObjects[C]}
    nats = enumerate_nats(H, R)
    subs = {}

    bad = next((e for e, a in alphas.items() if not check_naturality(a).truth), None)
    subs["naturality"] = Verdict.fail({"element": bad}) if bad is not None else Verdict.ok()

    bad = next((e for e, a in alphas.items() if alpha_to_eta(a, C) != e), None)
    subs["eta_alpha_eta"] = Verdict.fail({"element": bad}) if bad is not None else Verdict.ok()

    bad = next((i for i, a in enumerate(nats) if eta_to_alpha(R, C, alpha_to_eta(a, C)) != a), None)
    subs["alpha_eta_alpha"] = (Verdict.fail({"transformation": _summary(nats[bad])})
                               if bad is not None else Verdict.ok())

    # Each transformation is determined by its value at id_C: α_D(f) = R f (α_C id_C).
    lemma = None
    for a in nats:
        e = a.components[C](idC)
        for D in B.objects:
            for f in H.onObjects[D]:
                if a.components[D](f) != R.onMorphisms[f](e):
                    lemma = {"object": D, "morphism": f, "transformation": _summary(a)}
                    break
            if lemma:
                break
        if lemma:
            break
    subs["determined_by_identity"] = Verdict.fail(lemma) if lemma else Verdict.ok()

    images = [alphas[e] for e in R.onObjects[C]]
    injective = all(images[i] != images[j] for i in range(len(images)) for j in range(i))
    onto = all(a in images for a in nats) and all(a in nats for a in images)
    if injective and onto and len(nats) == len(images):
        subs["bijection"] = Verdict.ok(witness=[[e, _summary(alphas[e])] for e in R.onObjects[C]])
    else:
        subs["bijection"] = Verdict.fail({"elements": len(images), "transformations": len(nats),
                                          "injective": injective})

    names = names_functor(R)
    chain = [len(R.onObjects[C]), len(names.onObjects[C]), len(enumerate_nats(H, names)), len(nats)]
    subs["names_chain"] = (Verdict.ok(witness=chain) if len(set(chain)) == 1
                           else Verdict.fail({"cardinalities": chain}))
    return Verdict.all_of(subs, notes=[f"|R({C})| = {len(images)}, |Nat| = {len(nats)}"])


def yoneda_embedding_map(B: FinCategory, phi) -> NatTransf:
    """For ``φ : b → c``, the transformation ``B(c,−) ⇒ B(b,−)``, ``f ↦ f ∘ φ``."""
    b, c = B.source(phi), B.target(phi)
    Hc, Hb = hom_functor(B, c), hom_functor(B, b)
    comps = {D: SetFunction(Hc.onObjects[D], Hb.onObjects[D], tuple(B.comp[(f, phi)] for f in Hc.onObjects[D]))
             for D in B.objects}
    beta = NatTransf(Hc, Hb, comps, name=f"β[{phi}]")
    v = check_naturality(beta)
    assert v.truth, v.counterexample
    return beta


@dataclass
class RepresentationCertificate:
    obj: object
    beta: NatTransf  # B(obj, −) ⇒ R, a natural iso
    inverse: NatTransf
    eta: object  # β_obj(id_obj)
    universality: Verdict


def _invert(T: NatTransf) -> NatTransf:
    return NatTransf(T.targetF, T.sourceF, {a: c.inverse() for a, c in T.components.items()})


def find_representation(R: SetValuedFunctor) -> Optional[RepresentationCertificate]:
    """First object (declaration order) with a natural iso from its hom-functor."""
    from .quanteval import check_universal_element

    B = R.source
    for C in B.objects:
        H = hom_functor(B, C)
        if any(len(H.onObjects[D]) != len(R.onObjects[D]) for D in B.objects):
            continue
        for alpha in enumerate_nats(H, R):
            if is_natural_iso(alpha):
                inv = _invert(alpha)
                assert check_naturality(inv).truth
                eta = alpha_to_eta(alpha, C)
                return RepresentationCertificate(C, alpha, inv, eta, check_universal_element(R, C, eta))
    return None
