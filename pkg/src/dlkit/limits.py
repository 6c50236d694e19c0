"""Limits and colimits of finite Set-valued diagrams, limits inside finite categories,
and finite dependent sums and products.

A limit element is a matching family, encoded as a tuple of
``(object, atom)`` pairs sorted by object id.  A colimit element is an
equivalence class, encoded as the sorted tuple of its ``(object, atom)``
members.  Both encodings are canonical, so equal limits compare equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import MalformedError
from .fincat import (FinCategory, FinFunctor, FinSet, SetFunction, SetValuedFunctor, compose, sort_key)


@dataclass(frozen=True)
class SetDiagram:
    index: FinCategory
    functor: SetValuedFunctor

    def __post_init__(self):
        if self.functor.source != self.index:
            raise MalformedError("diagram functor is not defined on the index category")


@dataclass
class LimitCone:
    apex: FinSet
    projections: dict  # object -> SetFunction apex -> D(object)

    def family(self, element) -> dict:
        return dict(element)


@dataclass
class Cocone:
    apex: FinSet
    injections: dict  # object -> SetFunction D(object) -> apex

    def class_of(self, obj, atom):
        return self.injections[obj](atom)


def _functor(D) -> SetValuedFunctor:
    return D.functor if isinstance(D, SetDiagram) else D


def matching_families(H: SetValuedFunctor):
    """Yield every family ``{o: x_o}`` with ``H(m)(x_a) = x_b`` for each ``m : a → b``."""
    C = H.source
    objs = C.objects
    pos = {o: i for i, o in enumerate(objs)}
    checks = [[] for _ in objs]
    for m in C.generators:
        a, b = C.mor[m].source, C.mor[m].target
        checks[max(pos[a], pos[b])].append((H.onMorphisms[m].mapping, a, b))
    chosen = {}

    def rec(i):
        if i == len(objs):
            yield dict(chosen)
            return
        o = objs[i]
        for x in H.onObjects[o]:
            chosen[o] = x
            if all(fm[chosen[a]] == chosen[b] for fm, a, b in checks[i]):
                yield from rec(i + 1)
        chosen.pop(o, None)

    yield from rec(0)


def family_atom(family: Mapping):
    return tuple(sorted(family.items(), key=lambda kv: sort_key(kv[0])))


def limit_set(D) -> LimitCone:
    """The limit as the set of matching families, with evaluation projections."""
    H = _functor(D)
    elements = sorted((family_atom(f) for f in matching_families(H)), key=sort_key)
    apex = FinSet(tuple(elements))
    projections = {}
    for o in H.source.objects:
        projections[o] = SetFunction(apex, H.onObjects[o], tuple(dict(e)[o] for e in elements))
    return LimitCone(apex, projections)


def colimit_set(D) -> Cocone:
    """Disjoint union of the values modulo ``x ~ H(m)(x)``."""
    H = _functor(D)
    C = H.source
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for o in C.objects:
        for x in H.onObjects[o]:
            parent[(o, x)] = (o, x)
    for m in C.generators:
        a, b = C.mor[m].source, C.mor[m].target
        for x, y in H.onMorphisms[m].mapping.items():
            ra, rb = find((a, x)), find((b, y))
            if ra != rb:
                parent[ra] = rb
    classes = {}
    for node in parent:
        classes.setdefault(find(node), []).append(node)
    canon = {}
    for members in classes.values():
        cls = tuple(sorted(members, key=sort_key))
        for node in members:
            canon[node] = cls
    apex = FinSet(tuple(sorted(set(canon.values()), key=sort_key)))
    injections = {o: SetFunction(H.onObjects[o], apex, tuple(canon[(o, x)] for x in H.onObjects[o]))
                  for o in C.objects}
    return Cocone(apex, injections)


def cones_from_singleton(H: SetValuedFunctor):
    """Brute force: every choice of one atom per object that forms a cone from ``{*}``."""
    C = H.source
    out = []
    for choice in itertools.product(*(H.onObjects[o].elements for o in C.objects)):
        fam = dict(zip(C.objects, choice))
        if all(H.onMorphisms[m.id](fam[m.source]) == fam[m.target] for m in C.morphisms):
            out.append(fam)
    return out


# ---------------------------------------------------------------- limits in a finite category


@dataclass
class FinCone:
    apex: object
    legs: dict  # index object -> morphism apex -> D(object)


def _cones(C: FinCategory, J: FinCategory, D: FinFunctor, apex):
    objs = J.objects
    for legs in itertools.product(*(C.hom(apex, D.F0[j]) for j in objs)):
        leg = dict(zip(objs, legs))
        if all(compose(C, D.F1[u.id], leg[u.source]) == leg[u.target] for u in J.morphisms):
            yield leg


def all_cones(C: FinCategory, J: FinCategory, D: FinFunctor):
    return [FinCone(c, leg) for c in C.objects for leg in _cones(C, J, D, c)]


def limit_in_fincat(C: FinCategory, J: FinCategory, D: FinFunctor) -> Optional[FinCone]:
    """First terminal cone in object order, or ``None`` when the limit does not exist."""
    cones = all_cones(C, J, D)
    for cand in cones:
        terminal = True
        for other in cones:
            factors = [m for m in C.hom(other.apex, cand.apex)
                       if all(compose(C, cand.legs[j], m) == other.legs[j] for j in J.objects)]
            if len(factors) != 1:
                terminal = False
                break
        if terminal:
            return cand
    return None


# ---------------------------------------------------------------- dependent sums and products


def enumerate_dependent(mode: str, A, family: Mapping) -> FinSet:
    """``(a:A) × C_a`` as pairs, or ``(a:A) → C_a`` as choice functions.

    A choice function is encoded as a tuple of ``(a, c)`` pairs in the order
    of ``A``.
    """
    A = A if isinstance(A, FinSet) else FinSet(tuple(A))
    missing = [a for a in A if a not in family]
    if missing:
        raise MalformedError(f"family has no entry for {missing}")
    fam = {a: tuple(family[a]) for a in A}
    if mode == "sigma":
        return FinSet(tuple((a, c) for a in A for c in fam[a]))
    if mode == "pi":
        return FinSet(tuple(tuple(zip(A.elements, cs)) for cs in itertools.product(*(fam[a] for a in A))))
    raise ValueError(f"mode must be sigma or pi, not {mode!r}")
