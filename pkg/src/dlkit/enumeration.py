"""Exhaustive and random generation of Set-valued functors and transformations.

Everything here works on index tuples internally: a function ``m -> n`` is
a tuple of length ``m`` with entries in ``range(n)``.  Generated functors
take their values in the sets ``{0, …, k-1}``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .fincat import (FinCategory, FinSet, NatTransf, SetFunction, SetValuedFunctor)


@lru_cache(maxsize=None)
def _functions(n, k):
    """All functions ``range(n) -> range(k)`` as image tuples."""
    return tuple(itertools.product(range(k), repeat=n))


class _Plan:
    """Order in which to assign morphism values, and which checks fire when."""

    def __init__(self, C: FinCategory):
        ids = C.identity_ids
        gens = list(C.generators)
        placed = set(gens) | set(ids)
        order = [(m, None) for m in gens]
        remaining = [m for m in C.non_identities if m not in placed]
        decomp = {}
        for (g, f), h in C.comp.items():
            if g not in ids and f not in ids:
                decomp.setdefault(h, []).append((g, f))
        while remaining:
            progress = False
            for m in list(remaining):
                for g, f in decomp.get(m, ()):
                    if g in placed and f in placed:
                        order.append((m, (g, f)))
                        placed.add(m)
                        remaining.remove(m)
                        progress = True
                        break
            if not progress:
                raise AssertionError("generators do not generate the category")
        self.order = order
        pos = {m: i for i, (m, _) in enumerate(order)}
        checks = [[] for _ in order]
        for (g, f), h in C.comp.items():
            if g in ids or f in ids:
                continue
            # h may be an identity (retractions, inverses).
            last = max(pos[g], pos[f], pos.get(h, -1))
            checks[last].append((g, f, h))
        self.checks = checks
        self.C = C


@lru_cache(maxsize=None)
def _plan(C: FinCategory) -> _Plan:
    return _Plan(C)


def _solutions(C: FinCategory, sizes: dict, rng: random.Random | None = None) -> Iterator[dict]:
    """All assignments morphism -> index tuple satisfying the functor laws."""
    plan = _plan(C)
    vals = {}
    for o in C.objects:
        vals[C.identities[o]] = tuple(range(sizes[o]))

    def get(m):
        return vals[m]

    def consistent(i):
        for g, f, h in plan.checks[i]:
            vg, vf = get(g), get(f)
            if tuple(vg[x] for x in vf) != get(h):
                return False
        return True

    def rec(i):
        if i == len(plan.order):
            yield dict(vals)
            return
        m, forced = plan.order[i]
        src, tgt = C.mor[m].source, C.mor[m].target
        if forced is not None:
            g, f = forced
            candidates = [tuple(vals[g][x] for x in vals[f])]
        else:
            candidates = _functions(sizes[src], sizes[tgt])
            if rng is not None:
                candidates = list(candidates)
                rng.shuffle(candidates)
        for c in candidates:
            vals[m] = c
            if consistent(i):
                yield from rec(i + 1)
        vals.pop(m, None)

    yield from rec(0)


def _build(C: FinCategory, sizes: dict, vals: dict) -> SetValuedFunctor:
    sets = {o: FinSet.range(sizes[o]) for o in C.objects}
    maps = {m.id: SetFunction(sets[m.source], sets[m.target], vals[m.id]) for m in C.morphisms}
    return SetValuedFunctor(C, sets, maps)


def iso_key(C: FinCategory, sizes: dict, vals: dict):
    """Canonical key of a functor on ``{0..k-1}`` values under relabelling of elements."""
    objs = C.objects
    mors = C.non_identities
    best = None
    for perms in itertools.product(*(itertools.permutations(range(sizes[o])) for o in objs)):
        p = dict(zip(objs, perms))
        key = []
        for m in mors:
            s, t = C.mor[m].source, C.mor[m].target
            old = vals[m]
            new = [0] * len(old)
            ps, pt = p[s], p[t]
            for x, y in enumerate(old):
                new[ps[x]] = pt[y]
            key.append(tuple(new))
        key = tuple(key)
        if best is None or key < best:
            best = key
    return (tuple(sizes[o] for o in objs), best)


def enumerate_set_functors(C: FinCategory, max_size: int, up_to_iso: bool = False,
                           min_size: int = 0) -> Iterator[SetValuedFunctor]:
    """Every Set-valued functor on ``C`` whose value sets have ``min_size..max_size`` elements.

    With ``up_to_iso`` one representative per isomorphism class is
    produced: the first one met in enumeration order.
    """
    seen = set()
    for combo in itertools.product(range(min_size, max_size + 1), repeat=len(C.objects)):
        sizes = dict(zip(C.objects, combo))
        for vals in _solutions(C, sizes):
            if up_to_iso:
                key = iso_key(C, sizes, vals)
                if key in seen:
                    continue
                seen.add(key)
            yield _build(C, sizes, vals)


def random_set_functor(C: FinCategory, rng: random.Random, max_size: int = 3,
                       min_size: int = 0) -> SetValuedFunctor:
    """A random functor: random sizes, then a randomised first solution."""
    for _ in range(1000):
        sizes = {o: rng.randint(min_size, max_size) for o in C.objects}
        for vals in _solutions(C, sizes, rng=rng):
            return _build(C, sizes, vals)
    raise RuntimeError("no functor found with the requested sizes")


# ---------------------------------------------------------------- transformations


def _idx(F: SetValuedFunctor, m):
    return F.onMorphisms[m].index_images


def enumerate_nats(F, G) -> list[NatTransf]:
    """All natural transformations ``F ⇒ G`` between Set-valued functors.

    Components are chosen object by object in declaration order; each
    naturality square is checked as soon as both its corners are chosen.
    The order is lexicographic in the component image tuples.
    """
    C = F.source
    if G.source != C:
        raise ValueError("functors live on different categories")
    objs = C.objects
    pos = {o: i for i, o in enumerate(objs)}
    squares = [[] for _ in objs]
    for m in C.generators:
        a, b = C.mor[m].source, C.mor[m].target
        squares[max(pos[a], pos[b])].append((m, a, b))
    Fi = {m: _idx(F, m) for m in C.non_identities}
    Gi = {m: _idx(G, m) for m in C.non_identities}
    chosen = {}
    out = []

    def rec(i):
        if i == len(objs):
            comps = {}
            for o in objs:
                dom, cod = F.onObjects[o], G.onObjects[o]
                comps[o] = SetFunction(dom, cod, tuple(cod.elements[y] for y in chosen[o]))
            out.append(NatTransf(F, G, comps))
            return
        o = objs[i]
        for c in _functions(len(F.onObjects[o]), len(G.onObjects[o])):
            chosen[o] = c
            ok = True
            for m, a, b in squares[i]:
                ca, cb, fm, gm = chosen[a], chosen[b], Fi[m], Gi[m]
                # G m ∘ c_a == c_b ∘ F m
                if any(gm[ca[x]] != cb[fm[x]] for x in range(len(ca))):
                    ok = False
                    break
            if ok:
                rec(i + 1)
        chosen.pop(o, None)

    rec(0)
    return out


@lru_cache(maxsize=200000)
def _square_matrix(fm, gm, na, ka, nb, kb):
    """``M[i, j] = 1`` iff ``g ∘ c_i == c_j ∘ f`` for ``c_i : na→ka``, ``c_j : nb→kb``."""
    A, B = _functions(na, ka), _functions(nb, kb)
    M = np.zeros((len(A), len(B)), dtype=np.int64)
    # Group B by its values on the image of f: only those entries matter.
    index = {}
    for j, cb in enumerate(B):
        index.setdefault(tuple(cb[y] for y in fm), []).append(j)
    for i, ca in enumerate(A):
        want = tuple(gm[ca[x]] for x in range(na))
        for j in index.get(want, ()):
            M[i, j] = 1
    return M


@lru_cache(maxsize=200000)
def _loop_vector(fm, gm, n, k):
    A = _functions(n, k)
    return np.array([int(all(gm[c[x]] == c[fm[x]] for x in range(n))) for c in A], dtype=np.int64)


def count_nats(F, G) -> int:
    """``|Nat(F, G)|`` as a tensor contraction of one 0/1 matrix per generator.

    Agrees with ``len(enumerate_nats(F, G))`` but never materialises the
    transformations.
    """
    C = F.source
    objs = C.objects
    pos = {o: i for i, o in enumerate(objs)}
    n = {o: len(F.onObjects[o]) for o in objs}
    k = {o: len(G.onObjects[o]) for o in objs}
    dims = {o: k[o] ** n[o] for o in objs}
    if any(d == 0 for d in dims.values()):
        return 0
    operands = []
    touched = set()
    for m in C.generators:
        a, b = C.mor[m].source, C.mor[m].target
        fm, gm = _idx(F, m), _idx(G, m)
        if a == b:
            operands += [_loop_vector(fm, gm, n[a], k[a]), [pos[a]]]
        else:
            operands += [_square_matrix(fm, gm, n[a], k[a], n[b], k[b]), [pos[a], pos[b]]]
        touched.update((a, b))
    total = 1
    for o in objs:
        if o not in touched:
            total *= dims[o]
    if not operands:
        return total
    if len(operands) == 2:
        r = operands[0].sum()
    else:
        operands.append([])
        r = np.einsum(*operands, optimize="greedy")
    return int(r) * total


@dataclass(frozen=True)
class FunctorShape:
    """Value-set sizes and generator maps of a Set-valued functor, as index tuples."""

    sizes: tuple
    maps: tuple  # one index tuple per generator, in ``C.generators`` order


def functor_shape(F: SetValuedFunctor) -> FunctorShape:
    C = F.source
    return FunctorShape(tuple(len(F.onObjects[o]) for o in C.objects), tuple(_idx(F, m) for m in C.generators))


@lru_cache(maxsize=4096)
def _contraction_path(subscripts, shapes):
    operands = []
    for axes, shape in zip(subscripts, shapes):
        operands += [np.empty(shape, dtype=np.int8), list(axes)]
    return np.einsum_path(*operands, [subscripts[-1][0]], optimize="greedy")[0]


def count_nats_batch(Fs, Gs, category: Optional[FinCategory] = None) -> np.ndarray:
    """``[|Nat(F, G)| for F, G in zip(Fs, Gs)]`` with one contraction per size profile.

    Pairs whose value sets have the same sizes give operands of the same
    shape, so they are stacked along a batch axis and contracted together.
    Entries may be functors or precomputed ``functor_shape`` values; with
    shapes only, ``category`` must be given.
    """
    Fs, Gs = list(Fs), list(Gs)
    if len(Fs) != len(Gs):
        raise ValueError("Fs and Gs must have the same length")
    out = np.zeros(len(Fs), dtype=np.int64)
    if not Fs:
        return out
    if category is None:
        category = next(x.source for x in Fs + Gs if isinstance(x, SetValuedFunctor))
    C = category
    Fs = [x if isinstance(x, FunctorShape) else functor_shape(x) for x in Fs]
    Gs = [x if isinstance(x, FunctorShape) else functor_shape(x) for x in Gs]
    objs = C.objects
    pos = {o: i for i, o in enumerate(objs)}
    gens = [(C.mor[m].source, C.mor[m].target) for m in C.generators]
    touched = {o for ab in gens for o in ab}
    groups = {}
    for i, (F, G) in enumerate(zip(Fs, Gs)):
        groups.setdefault((F.sizes, G.sizes), []).append(i)
    batch = len(objs)
    subscripts = tuple((batch, pos[a]) if a == b else (batch, pos[a], pos[b]) for a, b in gens) + ((batch,),)
    for (nz, kz), idx in groups.items():
        n, k = dict(zip(objs, nz)), dict(zip(objs, kz))
        dims = {o: k[o] ** n[o] for o in objs}
        if any(d == 0 for d in dims.values()):
            continue
        total = 1
        for o in objs:
            if o not in touched:
                total *= dims[o]
        if not gens:
            out[idx] = total
            continue
        operands = []
        for g, (a, b) in enumerate(gens):
            # Distinct (F m, G m) pairs are few; build each matrix once and gather.
            codes, mats = {}, []
            rows = []
            for i in idx:
                key = (Fs[i].maps[g], Gs[i].maps[g])
                c = codes.get(key)
                if c is None:
                    c = codes[key] = len(mats)
                    mats.append(_loop_vector(key[0], key[1], n[a], k[a]) if a == b
                                else _square_matrix(key[0], key[1], n[a], k[a], n[b], k[b]))
                rows.append(c)
            operands.append(np.stack(mats)[np.array(rows)])
        # The batch axis scales every operand alike, so the path ignores its length.
        path = _contraction_path(subscripts, tuple((1,) + x.shape[1:] for x in operands))
        args = []
        for axes, x in zip(subscripts, operands):
            args += [x, list(axes)]
        out[idx] = np.einsum(*args, [batch], optimize=path) * total
    return out
