"""Named categories, functors and fixture families used by tests and the CLI."""

from __future__ import annotations

import itertools
import random

from .fincat import (FinCategory, FinFunctor, FinSet, Morphism, SetFunction, SetValuedFunctor,
                     discrete_category, free_category, monoid_category, preorder_category)


def finset_category(n: int) -> FinCategory:
    """Skeleton of finite sets: objects ``0..n`` (the set ``{0..k-1}``) and every function.

    A function ``s → t`` with images ``(y0, …)`` has id ``"s→t:y0y1…"``.
    """
    objects = list(range(n + 1))

    def mid(s, t, images):
        return f"{s}→{t}:" + "".join(map(str, images))

    mors, table = [], {}
    for s in objects:
        for t in objects:
            for images in itertools.product(range(t), repeat=s):
                m = mid(s, t, images)
                mors.append(Morphism(m, s, t))
                table[m] = (s, t, images)
    ids = {s: mid(s, s, tuple(range(s))) for s in objects}
    comp = {}
    for g, (s2, t2, gi) in table.items():
        for f, (s1, t1, fi) in table.items():
            if t1 == s2:
                comp[(g, f)] = mid(s1, t2, tuple(gi[x] for x in fi))
    return FinCategory(objects, mors, ids, comp, name=f"FinSet≤{n}")


def finset_function(C: FinCategory, m) -> tuple:
    """Image tuple of a morphism of ``finset_category``."""
    images = m.split(":", 1)[1]
    return tuple(int(ch) for ch in images)


def finset_morphism(s: int, t: int, images) -> str:
    return f"{s}→{t}:" + "".join(map(str, images))


# ---------------------------------------------------------------- small categories


def p2() -> FinCategory:
    return preorder_category(["a", "b"], [("a", "b")], name="P2")


def chain(n: int) -> FinCategory:
    xs = [f"x{i}" for i in range(n)]
    return preorder_category(xs, list(zip(xs, xs[1:])), name=f"chain{n}")


def parallel_pair() -> FinCategory:
    return free_category(["0", "1"], [("u", "0", "1"), ("v", "0", "1")], name="parallel pair")


def parallel_then_arrow() -> FinCategory:
    return free_category(["0", "1", "2"], [("u", "0", "1"), ("v", "0", "1"), ("w", "1", "2")],
                         name="parallel pair then arrow")


def cyclic_group(n: int) -> FinCategory:
    els = [f"r{i}" for i in range(n)]
    mult = {(els[i], els[j]): els[(i + j) % n] for i in range(n) for j in range(n)}
    return monoid_category(els, mult, "r0", name=f"Z{n}")


def idempotent_monoid() -> FinCategory:
    mult = {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}
    return monoid_category(["1", "e"], mult, "1", name="idempotent")


def nilpotent_monoid() -> FinCategory:
    els = ["1", "a", "0"]
    mult = {}
    for x in els:
        for y in els:
            if x == "1":
                mult[(x, y)] = y
            elif y == "1":
                mult[(x, y)] = x
            else:
                mult[(x, y)] = "0"
    return monoid_category(els, mult, "1", name="nilpotent")


def left_zero_monoid() -> FinCategory:
    """``{1, a, b}`` with ``x·y = x`` for ``x ≠ 1``."""
    els = ["1", "a", "b"]
    mult = {(x, y): (y if x == "1" else x) for x in els for y in els}
    return monoid_category(els, mult, "1", name="left zero")


def retraction_pair() -> FinCategory:
    """Objects ``a, b``; ``s : a → b``, ``r : b → a`` with ``r∘s = id_a`` and ``e = s∘r`` idempotent."""
    mors = [Morphism("id_a", "a", "a"), Morphism("id_b", "b", "b"), Morphism("s", "a", "b"),
            Morphism("r", "b", "a"), Morphism("e", "b", "b")]
    comp = {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b"}
    for m in mors:
        comp[("id_" + m.target, m.id)] = m.id
        comp[(m.id, "id_" + m.source)] = m.id
    comp.update({("r", "s"): "id_a", ("s", "r"): "e", ("e", "e"): "e", ("e", "s"): "s", ("r", "e"): "r"})
    return FinCategory(["a", "b"], mors, {"a": "id_a", "b": "id_b"}, comp, name="retraction")


def iso_pair() -> FinCategory:
    mors = [Morphism("id_a", "a", "a"), Morphism("id_b", "b", "b"), Morphism("i", "a", "b"),
            Morphism("j", "b", "a")]
    comp = {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b", ("j", "i"): "id_a", ("i", "j"): "id_b"}
    for m in mors:
        comp[("id_" + m.target, m.id)] = m.id
        comp[(m.id, "id_" + m.source)] = m.id
    return FinCategory(["a", "b"], mors, {"a": "id_a", "b": "id_b"}, comp, name="iso")


def arrow_with_z2_target() -> FinCategory:
    """``f : a → b`` and an involution ``t`` on ``b``; morphisms ``f, t∘f``."""
    mors = [Morphism("id_a", "a", "a"), Morphism("id_b", "b", "b"), Morphism("t", "b", "b"),
            Morphism("f", "a", "b"), Morphism("tf", "a", "b")]
    comp = {("id_a", "id_a"): "id_a"}
    for m in mors:
        comp[("id_" + m.target, m.id)] = m.id
        comp[(m.id, "id_" + m.source)] = m.id
    comp.update({("t", "t"): "id_b", ("t", "f"): "tf", ("t", "tf"): "f"})
    return FinCategory(["a", "b"], mors, {"a": "id_a", "b": "id_b"}, comp, name="arrow to Z2")


def all_posets(max_elements: int = 4):
    """One poset per isomorphism class with 1..max_elements elements."""
    out = []
    for n in range(1, max_elements + 1):
        elems = [str(i) for i in range(n)]
        pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
        seen = set()
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            rel = {p for p, bit in zip(pairs, bits) if bit}
            if any((b, a) in rel for a, b in rel):
                continue
            if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
                continue
            key = min(tuple(sorted((perm[a], perm[b]) for a, b in rel)) for perm in itertools.permutations(range(n)))
            if key in seen:
                continue
            seen.add(key)
            out.append(preorder_category(elems, [(str(a), str(b)) for a, b in sorted(rel)],
                                         name=f"poset{n}#{len(seen)}"))
    return out


def yoneda_family():
    """Every poset with at most four elements plus a handful of small non-posets."""
    return all_posets(4) + [
        parallel_pair(), cyclic_group(2), cyclic_group(3), idempotent_monoid(), nilpotent_monoid(),
        left_zero_monoid(), retraction_pair(), iso_pair(), arrow_with_z2_target(), parallel_then_arrow(),
    ]


# ---------------------------------------------------------------- worked preorder examples


def kan_example():
    """The inclusion of ``{2, 5, 6}`` (with ``2 → 6 ← 5``) into a six-element preorder."""
    A = preorder_category(["2", "5", "6"], [("2", "6"), ("5", "6")], name="A")
    B = preorder_category(["1'", "2'", "3'", "4'", "5'", "6'"],
                          [("1'", "2'"), ("1'", "3'"), ("2'", "4'"), ("3'", "4'"), ("3'", "5'"),
                           ("4'", "6'"), ("5'", "6'")], name="B")
    return A, B, inclusion(A, B, {"2": "2'", "5": "5'", "6": "6'"}, name="F")


def geometric_example():
    """The inclusion of ``{2, 3, 4, 5}`` into the preorder on ``1..6``."""
    B = preorder_category(["1", "2", "3", "4", "5", "6"],
                          [("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("3", "5"), ("4", "6"), ("5", "6")],
                          name="B")
    A = preorder_category(["2", "3", "4", "5"], [("2", "4"), ("3", "4"), ("3", "5")], name="A")
    return A, B, inclusion(A, B, {a: a for a in A.objects}, name="f")


def inclusion(A: FinCategory, B: FinCategory, on_objects: dict, name=None) -> FinFunctor:
    """The functor between preorders determined by its object map."""
    F1 = {}
    for m in A.morphisms:
        (target,) = B.hom(on_objects[m.source], on_objects[m.target])
        F1[m.id] = target
    return FinFunctor(A, B, on_objects, F1, name=name)


def kite() -> FinCategory:
    return preorder_category(["1", "2", "3", "4", "5"],
                             [("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "5")], name="K")


def discrete_two() -> FinCategory:
    return discrete_category(["Y", "Z"], name="••")


def terminal_category() -> FinCategory:
    return discrete_category(["•"], name="•")


# ---------------------------------------------------------------- Galois connections


def random_poset(rng: random.Random, n: int, p: float = 0.4, prefix="x") -> FinCategory:
    """Random poset: a random DAG on ``0..n-1`` respecting index order, closed transitively."""
    elems = [f"{prefix}{i}" for i in range(n)]
    rel = [(elems[i], elems[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return preorder_category(elems, rel)


def _le(P: FinCategory, a, b):
    return bool(P.hom(a, b))


def monotone(P: FinCategory, Q: FinCategory, f: dict) -> bool:
    return all(_le(Q, f[a], f[b]) for a in P.objects for b in P.objects if _le(P, a, b))


def left_adjoint_of(A: FinCategory, B: FinCategory, R: dict):
    """Object map of the left adjoint of monotone ``R : B → A``: ``L a`` = least ``b`` with ``a ≤ R b``.

    Returns ``None`` when some ``a`` has no such least element.
    """
    L = {}
    for a in A.objects:
        ups = [b for b in B.objects if _le(A, a, R[b])]
        least = [b for b in ups if all(_le(B, b, c) for c in ups)]
        if len(least) != 1:
            return None
        L[a] = least[0]
    return L


def galois_fixtures(count: int = 10, seed: int = 7, max_elements: int = 5):
    """``count`` Galois connections ``L ⊣ R`` between random posets of at most ``max_elements`` elements.

    Each fixture is ``(A, B, R, L)`` with ``R : B → A`` and ``L : A → B`` functors,
    ``L`` given directly by the least-element formula.  Fixtures where
    ``R`` is an isomorphism or constant are skipped so each one has some content.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = random_poset(rng, rng.randint(2, max_elements), prefix="a")
        B = random_poset(rng, rng.randint(2, max_elements), prefix="b")
        R0 = {b: rng.choice(A.objects) for b in B.objects}
        if not monotone(B, A, R0) or len(set(R0.values())) == 1:
            continue
        L0 = left_adjoint_of(A, B, R0)
        if L0 is None:
            continue
        A.name, B.name = f"A{len(out)}", f"B{len(out)}"
        R = inclusion(B, A, R0, name="R")
        L = inclusion(A, B, L0, name="L")
        out.append((A, B, R, L))
    return out


def galois_unit(A: FinCategory, R: FinFunctor, L: FinFunctor) -> dict:
    """``η_a : a → R L a``, the unique such arrow in a poset."""
    return {a: A.hom(a, R.F0[L.F0[a]])[0] for a in A.objects}


# ---------------------------------------------------------------- Set-valued helpers


def set_functor_from_lists(C: FinCategory, values: dict, maps: dict) -> SetValuedFunctor:
    """Convenience: ``values[o]`` are atom lists, ``maps[m]`` are image lists."""
    sets = {o: FinSet(tuple(v)) for o, v in values.items()}
    fns = {m: SetFunction(sets[C.source(m)], sets[C.target(m)], tuple(v)) for m, v in maps.items()}
    return SetValuedFunctor(C, sets, fns)
