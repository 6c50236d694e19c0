"""Finite categories, functors and natural transformations with law checks.

A category is given by an explicit composition table.  Nothing is
recomputed: checking a law is a scan over that table.  Morphism ids, object
ids and set atoms are hashable tokens (strings, integers, or tuples of
those).

Composition is written the usual way round: ``compose(C, g, f)`` is
``g ∘ f`` and needs ``target(f) == source(g)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, Union

from .errors import ComposabilityError, MalformedError
from .verdict import Verdict

Atom = Hashable


# ---------------------------------------------------------------- finite sets


@dataclass(frozen=True)
class FinSet:
    """A finite set whose declared order is its iteration order."""

    elements: tuple = ()

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if len(set(elements)) != len(elements):
            seen, dups = set(), []
            for e in elements:
                if e in seen:
                    dups.append(e)
                seen.add(e)
            raise MalformedError(f"duplicate atoms in finite set: {dups}")

    @cached_property
    def _index(self):
        return {e: i for i, e in enumerate(self.elements)}

    def index(self, atom):
        return self._index[atom]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, atom):
        return atom in self._index

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.elements)) + "}"

    @classmethod
    def range(cls, n):
        return cls(tuple(range(n)))


@dataclass(frozen=True)
class SetFunction:
    """A total function between finite sets, stored as an image tuple.

    ``images[i]`` is the value at ``domain.elements[i]``.
    """

    domain: FinSet
    codomain: FinSet
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.domain):
            raise MalformedError(
                f"function defined on {len(images)} atoms but domain has {len(self.domain)}")
        for x, y in zip(self.domain, images):
            if y not in self.codomain:
                raise MalformedError(f"image {y!r} of {x!r} is not in the codomain {self.codomain}")

    @classmethod
    def from_mapping(cls, domain: FinSet, codomain: FinSet, mapping: Mapping):
        missing = [x for x in domain if x not in mapping]
        if missing:
            raise MalformedError(f"function undefined on {missing}")
        return cls(domain, codomain, tuple(mapping[x] for x in domain))

    @classmethod
    def identity(cls, S: FinSet):
        return cls(S, S, S.elements)

    @cached_property
    def mapping(self) -> dict:
        return dict(zip(self.domain.elements, self.images))

    @cached_property
    def index_images(self) -> tuple:
        """Images as codomain positions (used by the fast counting code)."""
        return tuple(self.codomain.index(y) for y in self.images)

    def __call__(self, x):
        try:
            return self.mapping[x]
        except KeyError:
            raise MalformedError(f"{x!r} is not in the domain {self.domain}") from None

    def after(self, other: "SetFunction") -> "SetFunction":
        """``self ∘ other``."""
        if other.codomain != self.domain:
            raise ComposabilityError(f"cannot compose: {other.codomain} is not {self.domain}")
        m = self.mapping
        return SetFunction(other.domain, self.codomain, tuple(m[y] for y in other.images))

    def is_bijection(self):
        return len(self.domain) == len(self.codomain) and len(set(self.images)) == len(self.images)

    def inverse(self) -> "SetFunction":
        if not self.is_bijection():
            raise ValueError("function is not a bijection")
        return SetFunction.from_mapping(self.codomain, self.domain, {y: x for x, y in self.mapping.items()})

    def __repr__(self):
        body = ", ".join(f"{x!r}↦{y!r}" for x, y in zip(self.domain, self.images))
        return f"SetFunction({body})"


def all_functions(S: FinSet, T: FinSet):
    """Every function S → T, in lexicographic order of image tuples."""
    for images in itertools.product(T.elements, repeat=len(S)):
        yield SetFunction(S, T, images)


# ---------------------------------------------------------------- categories


@dataclass(frozen=True)
class Morphism:
    id: Atom
    source: Atom
    target: Atom


def _sort_key(x):
    # Mixed ids (ints and strings) need a total order for canonical output.
    if isinstance(x, tuple):
        return (2, tuple(_sort_key(y) for y in x))
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return (0, x, "")
    return (1, 0, str(x))


sort_key = _sort_key


class FinCategory:
    """An explicit finite category.

    Structural integrity (every id resolves, no duplicates, comp keys are
    composable pairs) is checked here and raises ``MalformedError``.  The
    category laws are left to ``check_category``, so a broken table can still
    be built and diagnosed.
    """

    def __init__(self, objects, morphisms, identities, comp, name=None):
        self.name = name
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise MalformedError(f"duplicate object ids in {self.objects}")
        mors = []
        for m in morphisms:
            if not isinstance(m, Morphism):
                m = Morphism(*m)
            mors.append(m)
        mors.sort(key=lambda m: _sort_key(m.id))
        self.morphisms = tuple(mors)
        self.mor = {m.id: m for m in mors}
        if len(self.mor) != len(mors):
            raise MalformedError("duplicate morphism ids")
        objset = set(self.objects)
        for m in mors:
            if m.source not in objset or m.target not in objset:
                raise MalformedError(f"morphism {m.id!r} has a dangling endpoint")
        self.identities = dict(identities)
        for o in self.objects:
            if o not in self.identities:
                raise MalformedError(f"object {o!r} has no identity")
        for o, i in self.identities.items():
            if o not in objset:
                raise MalformedError(f"identity given for unknown object {o!r}")
            if i not in self.mor:
                raise MalformedError(f"identity {i!r} of {o!r} is not a morphism")
        self.comp = {}
        for key, h in dict(comp).items():
            g, f = key
            for x in (g, f, h):
                if x not in self.mor:
                    raise MalformedError(f"composition entry {(g, f)!r} ↦ {h!r} uses unknown morphism {x!r}")
            if self.mor[f].target != self.mor[g].source:
                raise MalformedError(f"composition entry for non-composable pair ({g!r}, {f!r})")
            self.comp[(g, f)] = h

    # structural helpers

    def source(self, m):
        return self._m(m).source

    def target(self, m):
        return self._m(m).target

    def _m(self, m):
        try:
            return self.mor[m]
        except KeyError:
            raise MalformedError(f"unknown morphism {m!r}") from None

    def identity(self, o):
        try:
            return self.identities[o]
        except KeyError:
            raise MalformedError(f"unknown object {o!r}") from None

    @cached_property
    def _homs(self):
        homs = {(a, b): [] for a in self.objects for b in self.objects}
        for m in self.morphisms:
            homs[(m.source, m.target)].append(m.id)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, a, b) -> tuple:
        """Morphism ids a → b in id order."""
        if a not in self.identities or b not in self.identities:
            raise MalformedError(f"unknown object in hom({a!r}, {b!r})")
        return self._homs[(a, b)]

    @cached_property
    def identity_ids(self):
        return frozenset(self.identities.values())

    @cached_property
    def non_identities(self):
        return tuple(m.id for m in self.morphisms if m.id not in self.identity_ids)

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self._out[f.target]:
                yield g, f.id

    @cached_property
    def _out(self):
        out = {o: [] for o in self.objects}
        for m in self.morphisms:
            out[m.source].append(m.id)
        return out

    def is_preorder(self):
        return all(len(v) <= 1 for v in self._homs.values())

    @cached_property
    def generators(self) -> tuple:
        """A small set of non-identity morphisms generating all others.

        Obtained by dropping, in reverse id order, each morphism that the
        remaining ones still generate.  Naturality and functoriality only
        need checking on these.
        """
        gens = list(self.non_identities)
        for m in reversed(list(self.non_identities)):
            rest = [x for x in gens if x != m]
            if m in self._closure(rest):
                gens = rest
        return tuple(gens)

    def _closure(self, gens):
        reached = set(gens)
        frontier = list(gens)
        while frontier:
            new = []
            for a in list(reached):
                for b in frontier:
                    for g, f in ((a, b), (b, a)):
                        if (g, f) in self.comp:
                            h = self.comp[(g, f)]
                            if h not in reached and h not in self.identity_ids:
                                reached.add(h)
                                new.append(h)
            frontier = new
        return reached

    # equality

    def _key(self):
        return (self.objects, self.morphisms, tuple(sorted(self.identities.items(), key=lambda kv: _sort_key(kv[0]))),
                frozenset(self.comp.items()))

    def __eq__(self, other):
        return isinstance(other, FinCategory) and self._key() == other._key()

    def __hash__(self):
        return hash((self.objects, self.morphisms))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinCategory{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def compose(C: FinCategory, g, f):
    """``g ∘ f`` read off the table."""
    if C.target(f) != C.source(g):
        raise ComposabilityError(
            f"cannot compose {g!r} after {f!r}: target {C.target(f)!r} is not source {C.source(g)!r}")
    try:
        return C.comp[(g, f)]
    except KeyError:
        raise MalformedError(f"composition table has no entry for ({g!r}, {f!r})") from None


def compose_path(C: FinCategory, path):
    """Compose a path given first-arrow-first: ``[f, g, h]`` ↦ ``h∘g∘f``."""
    path = list(path)
    if not path:
        raise ValueError("empty path has no composite without an object")
    acc = path[0]
    for m in path[1:]:
        acc = compose(C, m, acc)
    return acc


def check_category(C: FinCategory) -> Verdict:
    """Exhaustive check of closure, identity endpoints, unit laws and associativity."""
    subs = {}

    bad = [(o, i) for o, i in C.identities.items() if C.source(i) != o or C.target(i) != o]
    subs["identity_endpoints"] = Verdict.fail({"object": bad[0][0], "identity": bad[0][1]}) if bad else Verdict.ok()

    closure = None
    for g, f in C.composable_pairs():
        if (g, f) not in C.comp:
            closure = {"pair": [g, f], "problem": "missing"}
            break
        h = C.comp[(g, f)]
        if C.source(h) != C.source(f) or C.target(h) != C.target(g):
            closure = {"pair": [g, f], "problem": "wrong endpoints", "value": h}
            break
    subs["closure"] = Verdict.fail(closure) if closure else Verdict.ok()
    if closure or bad:
        # The remaining laws read the table and would fail spuriously.
        return Verdict.all_of(subs)

    idl = idr = None
    for m in C.morphisms:
        if C.comp[(C.identities[m.target], m.id)] != m.id and idl is None:
            idl = {"morphism": m.id}
        if C.comp[(m.id, C.identities[m.source])] != m.id and idr is None:
            idr = {"morphism": m.id}
    subs["idL"] = Verdict.fail(idl) if idl else Verdict.ok()
    subs["idR"] = Verdict.fail(idr) if idr else Verdict.ok()

    assoc = None
    for f in C.morphisms:
        for g in C._out[f.target]:
            gf = C.comp[(g, f.id)]
            for h in C._out[C.mor[g].target]:
                if C.comp[(h, gf)] != C.comp[(C.comp[(h, g)], f.id)]:
                    assoc = {"triple": [h, g, f.id]}
                    break
            if assoc:
                break
        if assoc:
            break
    subs["assoc"] = Verdict.fail(assoc) if assoc else Verdict.ok()
    return Verdict.all_of(subs)


def opposite(C: FinCategory) -> FinCategory:
    """Same ids, endpoints swapped, ``comp_op[(f, g)] = comp[(g, f)]``."""
    mors = [Morphism(m.id, m.target, m.source) for m in C.morphisms]
    comp = {(f, g): h for (g, f), h in C.comp.items()}
    name = None
    if C.name:
        name = C.name[:-3] if C.name.endswith("^op") else C.name + "^op"
    return FinCategory(C.objects, mors, C.identities, comp, name=name)


def discrete_category(objects, name=None) -> FinCategory:
    objects = tuple(objects)
    ids = {o: f"id_{o}" for o in objects}
    mors = [Morphism(ids[o], o, o) for o in objects]
    comp = {(ids[o], ids[o]): ids[o] for o in objects}
    return FinCategory(objects, mors, ids, comp, name=name)


def preorder_category(elements, relation, name=None) -> FinCategory:
    """The preorder generated by ``relation``; one morphism ``"a<=b"`` per related pair.

    The relation is closed reflexively and transitively.  Identities are
    named ``id_a``.
    """
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise MalformedError(f"duplicate elements in {elements}")
    elset = set(elements)
    le = {a: {a} for a in elements}
    for a, b in relation:
        if a not in elset or b not in elset:
            raise MalformedError(f"relation pair {(a, b)!r} mentions an unknown element")
        le[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elements:
            new = set().union(*(le[b] for b in le[a]))
            if new - le[a]:
                le[a] |= new
                changed = True

    def mid(a, b):
        return f"id_{a}" if a == b else f"{a}<={b}"

    mors = [Morphism(mid(a, b), a, b) for a in elements for b in elements if b in le[a]]
    comp = {}
    for a in elements:
        for b in le[a]:
            for c in le[b]:
                comp[(mid(b, c), mid(a, b))] = mid(a, c)
    return FinCategory(elements, mors, {a: mid(a, a) for a in elements}, comp, name=name)


def free_category(objects, edges, name=None) -> FinCategory:
    """Path category of a finite acyclic graph.

    ``edges`` is a list of ``(id, source, target)``.  A composite path is
    named by its edges joined with ``.`` last-edge-first, so ``h.f`` is
    ``h ∘ f``.
    """
    objects = tuple(objects)
    out = {o: [] for o in objects}
    for e, s, t in edges:
        if s not in out or t not in out:
            raise MalformedError(f"edge {e!r} has a dangling endpoint")
        out[s].append((e, t))
    paths = []  # (edge tuple first-first, source, target)

    def walk(start, node, trail, depth):
        if depth > len(edges):
            raise MalformedError("graph has a cycle; path category would be infinite")
        for e, t in out[node]:
            p = trail + (e,)
            paths.append((p, start, t))
            walk(start, t, p, depth + 1)

    for o in objects:
        walk(o, o, (), 0)
    ids = {o: f"id_{o}" for o in objects}

    def pid(p):
        return ".".join(reversed(p))

    mors = [Morphism(ids[o], o, o) for o in objects] + [Morphism(pid(p), s, t) for p, s, t in paths]
    by_path = {p: (s, t) for p, s, t in paths}
    comp = {}
    for o in objects:
        comp[(ids[o], ids[o])] = ids[o]
    for p, s, t in paths:
        comp[(ids[t], pid(p))] = pid(p)
        comp[(pid(p), ids[s])] = pid(p)
        for q, s2, t2 in paths:
            if s2 == t:
                comp[(pid(q), pid(p))] = pid(p + q)
                assert p + q in by_path
    return FinCategory(objects, mors, ids, comp, name=name)


def monoid_category(elements, mult, unit, obj="*", name=None) -> FinCategory:
    """One-object category from a multiplication table ``mult[(x, y)] = x·y``.

    ``x·y`` is read as ``x ∘ y``.
    """
    mors = [Morphism(e, obj, obj) for e in elements]
    comp = {(x, y): mult[(x, y)] for x in elements for y in elements}
    return FinCategory([obj], mors, {obj: unit}, comp, name=name)


# ---------------------------------------------------------------- functors


class FinFunctor:
    """A functor between finite categories given by object and morphism maps."""

    def __init__(self, source: FinCategory, target: FinCategory, F0: Mapping, F1: Mapping, name=None):
        self.source, self.target = source, target
        self.F0, self.F1 = dict(F0), dict(F1)
        self.name = name

    def __call__(self, x):
        """Apply to an object or a morphism id (objects take precedence)."""
        if x in self.F0:
            return self.F0[x]
        return self.F1[x]

    def ob(self, a):
        return self.F0[a]

    def mo(self, m):
        return self.F1[m]

    def __eq__(self, other):
        return (isinstance(other, FinFunctor) and self.source == other.source and self.target == other.target
                and self.F0 == other.F0 and self.F1 == other.F1)

    def __hash__(self):
        return hash((tuple(sorted(self.F0.items(), key=lambda kv: sort_key(kv[0]))),))

    def __repr__(self):
        return f"<FinFunctor {self.name or ''} {self.source.name}→{self.target.name}>"


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(C, C, {o: o for o in C.objects}, {m.id: m.id for m in C.morphisms}, name="id")


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """``G ∘ F``."""
    if F.target != G.source:
        raise ComposabilityError("functor composite: categories do not match")
    return FinFunctor(F.source, G.target, {a: G.F0[F.F0[a]] for a in F.source.objects},
                      {m.id: G.F1[F.F1[m.id]] for m in F.source.morphisms})


class SetValuedFunctor:
    """A functor from a finite category into finite sets.

    Identity morphisms may be omitted from ``onMorphisms``; they are filled
    with identity functions.
    """

    def __init__(self, source: FinCategory, onObjects: Mapping, onMorphisms: Mapping, name=None):
        self.source = source
        self.name = name
        self.onObjects = {}
        for o in source.objects:
            if o not in onObjects:
                raise MalformedError(f"Set-valued functor has no value at object {o!r}")
            v = onObjects[o]
            self.onObjects[o] = v if isinstance(v, FinSet) else FinSet(tuple(v))
        extra = set(onObjects) - set(source.objects)
        if extra:
            raise MalformedError(f"values given for unknown objects {sorted(map(str, extra))}")
        self.onMorphisms = {}
        for m in source.morphisms:
            if m.id in onMorphisms:
                self.onMorphisms[m.id] = onMorphisms[m.id]
            elif m.id in source.identity_ids:
                self.onMorphisms[m.id] = SetFunction.identity(self.onObjects[m.source])
            else:
                raise MalformedError(f"Set-valued functor has no value at morphism {m.id!r}")
        extra = set(onMorphisms) - set(source.mor)
        if extra:
            raise MalformedError(f"values given for unknown morphisms {sorted(map(str, extra))}")

    def __call__(self, x):
        if x in self.onObjects:
            return self.onObjects[x]
        return self.onMorphisms[x]

    def ob(self, a) -> FinSet:
        return self.onObjects[a]

    def mo(self, m) -> SetFunction:
        return self.onMorphisms[m]

    def sizes(self):
        return tuple(len(self.onObjects[o]) for o in self.source.objects)

    def __eq__(self, other):
        return (isinstance(other, SetValuedFunctor) and self.source == other.source
                and self.onObjects == other.onObjects and self.onMorphisms == other.onMorphisms)

    def __hash__(self):
        return hash(tuple(self.onObjects[o] for o in self.source.objects))

    def __repr__(self):
        vals = ", ".join(f"{o}: {self.onObjects[o]}" for o in self.source.objects)
        return f"<SetValuedFunctor {self.name or ''} on {self.source.name}: {vals}>"


def constant_functor(C: FinCategory, S) -> SetValuedFunctor:
    S = S if isinstance(S, FinSet) else FinSet(tuple(S))
    return SetValuedFunctor(C, {o: S for o in C.objects},
                            {m.id: SetFunction.identity(S) for m in C.morphisms})


def precompose(G: SetValuedFunctor, F: FinFunctor) -> SetValuedFunctor:
    """``G ∘ F`` for a Set-valued ``G`` on the target of ``F``."""
    if F.target != G.source:
        raise ComposabilityError("precompose: G is not defined on the target of F")
    return SetValuedFunctor(F.source, {a: G.onObjects[F.F0[a]] for a in F.source.objects},
                            {m.id: G.onMorphisms[F.F1[m.id]] for m in F.source.morphisms})


def check_functor(F: Union[FinFunctor, SetValuedFunctor]) -> Verdict:
    """Exhaustive check that identities and composites are preserved.

    Missing or ill-typed images are malformed input and raise.
    """
    C = F.source
    if isinstance(F, FinFunctor):
        D = F.target
        for a in C.objects:
            if a not in F.F0:
                raise MalformedError(f"functor undefined on object {a!r}")
            if F.F0[a] not in D.identities:
                raise MalformedError(f"object {a!r} maps to unknown object {F.F0[a]!r}")
        for m in C.morphisms:
            if m.id not in F.F1:
                raise MalformedError(f"functor undefined on morphism {m.id!r}")
            fm = F.F1[m.id]
            if fm not in D.mor:
                raise MalformedError(f"morphism {m.id!r} maps to unknown morphism {fm!r}")
            if D.source(fm) != F.F0[m.source] or D.target(fm) != F.F0[m.target]:
                raise MalformedError(f"image of {m.id!r} has the wrong endpoints")

        def same_id(a):
            return F.F1[C.identities[a]] == D.identities[F.F0[a]]

        def same_comp(g, f):
            return F.F1[C.comp[(g, f)]] == D.comp[(F.F1[g], F.F1[f])]
    else:
        for m in C.morphisms:
            fm = F.onMorphisms[m.id]
            if fm.domain != F.onObjects[m.source] or fm.codomain != F.onObjects[m.target]:
                raise MalformedError(f"value at {m.id!r} has the wrong domain or codomain")

        def same_id(a):
            return F.onMorphisms[C.identities[a]].images == F.onObjects[a].elements

        def same_comp(g, f):
            return F.onMorphisms[C.comp[(g, f)]].images == F.onMorphisms[g].after(F.onMorphisms[f]).images

    bad_id = next((a for a in C.objects if not same_id(a)), None)
    bad_pair = next(((g, f) for g, f in C.composable_pairs() if not same_comp(g, f)), None)
    return Verdict.all_of({
        "respids": Verdict.fail({"object": bad_id}) if bad_id is not None else Verdict.ok(),
        "respcomp": Verdict.fail({"pair": list(bad_pair)}) if bad_pair else Verdict.ok(),
    })


# ---------------------------------------------------------------- natural transformations


class NatTransf:
    """A family of components ``components[a] : F a → G a``.

    For Set-valued functors the components are ``SetFunction``s; for
    functors into a finite category they are morphism ids.
    """

    def __init__(self, sourceF, targetF, components: Mapping, name=None):
        self.sourceF, self.targetF = sourceF, targetF
        self.components = dict(components)
        self.name = name

    @property
    def category(self):
        return self.sourceF.source

    def __getitem__(self, a):
        return self.components[a]

    def __eq__(self, other):
        return (isinstance(other, NatTransf) and self.sourceF == other.sourceF
                and self.targetF == other.targetF and self.components == other.components)

    def __hash__(self):
        return hash(len(self.components))

    def __repr__(self):
        return f"<NatTransf {self.name or ''} {self.components}>"


def _check_nt_shape(T: NatTransf):
    F, G = T.sourceF, T.targetF
    if F.source != G.source:
        raise MalformedError("natural transformation between functors on different categories")
    C = F.source
    for a in C.objects:
        if a not in T.components:
            raise MalformedError(f"missing component at {a!r}")
        c = T.components[a]
        if isinstance(F, SetValuedFunctor):
            if not isinstance(c, SetFunction) or c.domain != F.onObjects[a] or c.codomain != G.onObjects[a]:
                raise MalformedError(f"component at {a!r} has the wrong endpoints")
        else:
            D = F.target
            if c not in D.mor or D.source(c) != F.F0[a] or D.target(c) != G.F0[a]:
                raise MalformedError(f"component at {a!r} has the wrong endpoints")


def check_naturality(T: NatTransf) -> Verdict:
    """Every naturality square ``G m ∘ T_a = T_b ∘ F m`` commutes."""
    _check_nt_shape(T)
    F, G = T.sourceF, T.targetF
    C = F.source
    for m in C.morphisms:
        a, b = m.source, m.target
        if isinstance(F, SetValuedFunctor):
            ok = G.onMorphisms[m.id].after(T.components[a]).images == \
                T.components[b].after(F.onMorphisms[m.id]).images
        else:
            D = F.target
            ok = D.comp[(G.F1[m.id], T.components[a])] == D.comp[(T.components[b], F.F1[m.id])]
        if not ok:
            return Verdict.fail({"morphism": m.id, "source": a, "target": b})
    return Verdict.ok(notes=[f"{len(C.morphisms)} squares"])


def identity_nt(F) -> NatTransf:
    if isinstance(F, SetValuedFunctor):
        comps = {a: SetFunction.identity(F.onObjects[a]) for a in F.source.objects}
    else:
        comps = {a: F.target.identities[F.F0[a]] for a in F.source.objects}
    return NatTransf(F, F, comps, name="id")


def hom_functor(C: FinCategory, c, variance: str = "covariant") -> SetValuedFunctor:
    """``C(c, −)`` or, for the contravariant case, ``C(−, c)`` as a functor on ``C^op``."""
    if c not in C.identities:
        raise MalformedError(f"unknown object {c!r}")
    if variance == "covariant":
        vals = {d: FinSet(C.hom(c, d)) for d in C.objects}
        maps = {}
        for g in C.morphisms:
            dom, cod = vals[g.source], vals[g.target]
            maps[g.id] = SetFunction(dom, cod, tuple(C.comp[(g.id, f)] for f in dom))
        return SetValuedFunctor(C, vals, maps, name=f"{C.name or 'C'}({c},−)")
    if variance == "contravariant":
        Cop = opposite(C)
        vals = {d: FinSet(C.hom(d, c)) for d in C.objects}
        maps = {}
        for m in C.morphisms:
            # In C^op, m goes target → source; it acts by precomposition.
            dom, cod = vals[m.target], vals[m.source]
            maps[m.id] = SetFunction(dom, cod, tuple(C.comp[(f, m.id)] for f in dom))
        return SetValuedFunctor(Cop, vals, maps, name=f"{C.name or 'C'}(−,{c})")
    raise ValueError(f"variance must be covariant or contravariant, not {variance!r}")


def nt_compose(mode: str, *args) -> NatTransf:
    """Vertical composition and whiskering.

    * ``nt_compose("vertical", S, T)`` is ``S · T`` (apply ``T`` first).
    * ``nt_compose("whisker_right", U, F)`` is ``UF`` with ``(UF)_a = U_{F a}``.
    * ``nt_compose("whisker_left", K, T)`` is ``KT`` with ``(KT)_a = K(T_a)``.

    The result is re-checked for naturality; a failure there means the
    inputs were not natural.
    """
    if mode == "vertical":
        S, T = args
        if T.targetF != S.sourceF:
            raise ComposabilityError("vertical composite: middle functors differ")
        F = T.sourceF
        if isinstance(F, SetValuedFunctor):
            comps = {a: S.components[a].after(T.components[a]) for a in F.source.objects}
        else:
            D = F.target
            comps = {a: compose(D, S.components[a], T.components[a]) for a in F.source.objects}
        out = NatTransf(T.sourceF, S.targetF, comps)
    elif mode == "whisker_right":
        U, F = args
        if not isinstance(F, FinFunctor) or F.target != U.category:
            raise ComposabilityError("whisker_right: F must be a functor into the category of U")
        src = _precompose_any(U.sourceF, F)
        tgt = _precompose_any(U.targetF, F)
        out = NatTransf(src, tgt, {a: U.components[F.F0[a]] for a in F.source.objects})
    elif mode == "whisker_left":
        K, T = args
        F = T.sourceF
        if not isinstance(F, FinFunctor) or K.source != F.target:
            raise ComposabilityError("whisker_left: K must be defined on the target category of T")
        if isinstance(K, SetValuedFunctor):
            src, tgt = precompose(K, T.sourceF), precompose(K, T.targetF)
            comps = {a: K.onMorphisms[T.components[a]] for a in F.source.objects}
        else:
            src, tgt = compose_functors(K, T.sourceF), compose_functors(K, T.targetF)
            comps = {a: K.F1[T.components[a]] for a in F.source.objects}
        out = NatTransf(src, tgt, comps)
    else:
        raise ValueError(f"unknown composition mode {mode!r}")
    v = check_naturality(out)
    if not v.truth:
        raise ComposabilityError(f"composite is not natural: {v.counterexample}")
    return out


def _precompose_any(G, F):
    if isinstance(G, SetValuedFunctor):
        return precompose(G, F)
    return compose_functors(G, F)


def is_natural_iso(T: NatTransf) -> bool:
    return all(c.is_bijection() for c in T.components.values())
