"""Staged quantifier semantics for DL diagrams over finite categories.

A diagram with stages ``S_0 ⊂ S_1 ⊂ … ⊂ S_n`` and quantifiers ``Q_1 … Q_n``
means: for the given binding of ``S_0``, ``Q_1`` extensions to ``S_1`` such
that everything commutes, ``Q_2`` extensions to ``S_2`` … .  Extensions are
searched exhaustively, objects in declaration order and morphisms in id
order, so certificates are deterministic.
"""

from __future__ import annotations

import functools
from contextlib import closing
from dataclasses import replace
from typing import Optional

from .diagram import (Arrow, Diagram, Node, Quantifier, _images, analyze, derived_components,
                      effective_stages, required_equations, stage_flavors, validate, AMBIENT)
from .errors import MalformedError, UnsupportedError, ValidationError
from .fincat import FinCategory, FinFunctor, SetValuedFunctor, compose
from .verdict import Verdict


@functools.lru_cache(maxsize=None)
def _finset(n):
    from .catalog import finset_category

    return finset_category(n)


class _Plan:
    """Static schedule: what to bind at each stage, what follows from it, and what to check."""

    def __init__(self, D: Diagram, cats: dict, functors: dict, region_cat: dict):
        self.D = D
        self.cats = cats
        self.functors = functors
        self.region_cat = region_cat  # node id -> FinCategory
        nodes, arrows = D.node_map, D.arrow_map
        self.nodes, self.arrows = nodes, arrows
        derived = derived_components(D)
        stages = effective_stages(D)
        self.flavors = stage_flavors(D)
        self.n = max(self.flavors, default=0)
        img = _images(D)
        self.image_of = {y: (x, F) for y, (_, x, F) in img.items()}
        # Valueless derived components: category nodes, functor, internal and bijection arrows.
        valued_derived = set(img)
        self.valueless = {c for c in derived if c not in valued_derived}
        self.deps = {}
        for c in D.ids():
            if c in self.valueless:
                self.deps[c] = set()
            elif c in img:
                self.deps[c] = {img[c][1]}
            elif c in arrows:
                self.deps[c] = {arrows[c].src, arrows[c].tgt}
            else:
                self.deps[c] = set()
        eqs = [e for e in required_equations(D)]
        self.equations = eqs
        eq_arrows = [set(e.lhs) | set(e.rhs) for e in eqs]

        bound = set(self.valueless)
        self.free0 = [c for c in D.ids() if stages[c] == 0 and c not in derived]
        bound |= set(self.free0)
        derived0 = self._closure(bound)
        bound |= set(derived0)
        self.derived0 = derived0
        self.eqs0 = [e for e, s in zip(eqs, eq_arrows) if s <= bound]
        done = {id(e) for e in self.eqs0}
        # steps[k] = [(component, derived-after, equations-after)]
        self.steps = {}
        for k in range(1, self.n + 1):
            new = [c for c in D.ids() if stages[c] == k and c not in derived]
            new.sort(key=lambda c: 0 if c in nodes else 1)
            plan = []
            for c in new:
                bound.add(c)
                der = self._closure(bound)
                bound |= set(der)
                ready = [e for e, s in zip(eqs, eq_arrows) if id(e) not in done and s <= bound]
                done |= {id(e) for e in ready}
                plan.append((c, der, ready))
            self.steps[k] = plan
        leftover = [c for c in D.ids() if c not in bound]
        if leftover:
            raise ValidationError(f"components {leftover} can never be bound")
        self.new_ids = {k: [c for c, _, _ in self.steps[k]] for k in self.steps}

    def _closure(self, bound):
        out = []
        changed = True
        while changed:
            changed = False
            for y, (x, F) in self.image_of.items():
                if y not in bound and y not in out and x in (bound | set(out)):
                    out.append(y)
                    changed = True
        return out

    # -- evaluation helpers

    def cat_of(self, c):
        if c in self.nodes:
            return self.region_cat[c]
        return self.region_cat[self.arrows[c].src]

    def compute(self, y, env):
        x, F = self.image_of[y]
        fun = self.functors[F]
        return fun.F0[env[x]] if y in self.nodes else fun.F1[env[x]]

    def holds(self, e, env):
        C = self.cat_of(e.lhs[0])
        return _composite(C, e.lhs, env) == _composite(C, e.rhs, env)

    def candidates(self, c, env):
        C = self.cat_of(c)
        if c in self.nodes:
            return C.objects
        a = self.arrows[c]
        return C.hom(env[a.src], env[a.tgt])


def _composite(C, path, env):
    acc = env[path[-1]]
    for m in reversed(path[:-1]):
        acc = C.comp[(env[m], acc)]
    return acc


def _resolve(C, D, an, categories, functors, set_bound):
    nodes, arrows = D.node_map, D.arrow_map
    categories = dict(categories or {})
    functors = dict(functors or {})

    def lookup(table, c, name):
        if c in table:
            return table[c]
        if name in table:
            return table[name]
        return None

    funs = {}
    for f in an.functors:
        F = lookup(functors, f, arrows[f].name)
        if F is None:
            raise ValidationError(f"functor arrow {f!r} is not bound")
        funs[f] = F
    cats = {}
    for c in an.categories:
        X = lookup(categories, c, nodes[c].name)
        if X is None:
            for f, (s, t) in an.functors.items():
                if s == c:
                    X = funs[f].source
                elif t == c:
                    X = funs[f].target
                if X is not None:
                    break
        if X is None and nodes[c].name in ("Set", "𝐒𝐞𝐭"):
            X = _finset(set_bound)
        if X is None:
            X = C
        if X is None:
            raise ValidationError(f"category node {c!r} is not bound")
        cats[c] = X
    for f, (s, t) in an.functors.items():
        if funs[f].source != cats[s] or funs[f].target != cats[t]:
            raise MalformedError(f"functor bound to {f!r} does not map {s!r} to {t!r}")
    region_cat = {}
    for n, r in an.region.items():
        if r == AMBIENT:
            if C is None:
                raise ValidationError("no ambient category given")
            region_cat[n] = C
        elif r in cats:
            region_cat[n] = cats[r]
        else:
            raise UnsupportedError(f"node {n!r} ranges over {r.strip('<>')}, which cannot be searched")
    return cats, funs, region_cat


def _matches(env, partial):
    return all(env.get(k) == v for k, v in partial.items())


def diagram_commutes(C: FinCategory, D: Diagram, env: dict) -> Verdict:
    """Check every required equation of ``D`` under a full binding ``env`` in ``C``."""
    for e in required_equations(D):
        l, r = _composite(C, e.lhs, env), _composite(C, e.rhs, env)
        if l != r:
            return Verdict.fail({"equation": str(e), "lhs": l, "rhs": r})
    return Verdict.ok()


def eval_quantified(C: Optional[FinCategory], D: Diagram, base: Optional[dict] = None, *,
                    categories=None, functors=None, set_bound: int = 3, exclude=None) -> Verdict:
    """Decide the staged statement made by ``D``.

    ``base`` binds the stage-0 components that are not computed from others.
    Category nodes are bound from ``categories`` (by id or name), from the
    functors touching them, to finite sets of size at most ``set_bound`` when
    named ``Set``, or otherwise to ``C``.  Functor arrows are bound from
    ``functors``.  Extensions matching any partial binding in ``exclude``
    are skipped.

    The witness of a true verdict and the counterexample of a false one are
    nested records ``{"stage", "flavor", "env", "then"}`` naming the
    decisive bindings at each stage.
    """
    validate(D)
    an = analyze(D)
    base = dict(base or {})
    exclude = list(exclude or [])
    cats, funs, region_cat = _resolve(C, D, an, categories, functors, set_bound)
    plan = _Plan(D, cats, funs, region_cat)

    env = {}
    missing = [c for c in plan.free0 if c not in base]
    if missing:
        raise ValidationError(f"stage-0 components {missing} are unbound")
    # Nodes first, then derived nodes, so arrow endpoints can be images.
    for c in plan.free0:
        if c in plan.nodes:
            if base[c] not in plan.candidates(c, base):
                raise MalformedError(f"{c!r} is bound to {base[c]!r}, which does not fit")
            env[c] = base[c]
    for y in plan.derived0:
        if y in plan.nodes:
            env[y] = plan.compute(y, env)
    for c in plan.free0:
        if c not in plan.nodes:
            if not _arrow_ok(plan, c, base[c], env):
                raise MalformedError(f"{c!r} is bound to {base[c]!r}, which does not fit")
            env[c] = base[c]
    for y in plan.derived0:
        if y not in plan.nodes:
            env[y] = plan.compute(y, env)
    bad = [str(e) for e in plan.eqs0 if not plan.holds(e, env)]
    if bad:
        raise ValidationError(f"the stage-0 binding does not commute: {bad}")

    def extensions(k, env):
        steps = plan.steps[k]

        def rec(i):
            if i == len(steps):
                yield env
                return
            c, der, eqs = steps[i]
            try:
                for v in plan.candidates(c, env):
                    env[c] = v
                    for y in der:
                        env[y] = plan.compute(y, env)
                    if all(plan.holds(e, env) for e in eqs):
                        yield from rec(i + 1)
            finally:
                env.pop(c, None)
                for y in der:
                    env.pop(y, None)

        for ext in rec(0):
            if exclude and any(_matches(ext, p) for p in exclude):
                continue
            yield ext

    def new_bindings(k, env):
        return {c: env[c] for c in plan.new_ids[k]}

    def run(k, env):
        if k > plan.n:
            return Verdict.ok()
        flavor = plan.flavors[k]
        if flavor == "forall":
            count = 0
            with closing(extensions(k, env)) as exts:
                for ext in exts:
                    count += 1
                    v = run(k + 1, ext)
                    if not v.truth:
                        return Verdict.fail({"stage": k, "flavor": flavor, "env": new_bindings(k, ext),
                                             "then": v.counterexample})
            return Verdict.ok({"stage": k, "flavor": flavor, "extensions": count})
        if flavor == "exists":
            count = 0
            with closing(extensions(k, env)) as exts:
                for ext in exts:
                    count += 1
                    v = run(k + 1, ext)
                    if v.truth:
                        return Verdict.ok({"stage": k, "flavor": flavor, "env": new_bindings(k, ext),
                                           "then": v.witness})
            return Verdict.fail({"stage": k, "flavor": flavor, "env": None, "extensions": count,
                                 "reason": "no extension satisfies the remaining stages"})
        found = []
        with closing(extensions(k, env)) as exts:
            for ext in exts:
                found.append(new_bindings(k, ext))
                if len(found) == 2:
                    break
        if not found:
            return Verdict.fail({"stage": k, "flavor": flavor, "env": None, "witnesses": [],
                                 "reason": "no commuting extension"})
        if len(found) > 1:
            return Verdict.fail({"stage": k, "flavor": flavor, "env": None, "witnesses": found,
                                 "reason": "extension is not unique"})
        ext = dict(env)
        ext.update(found[0])
        for step in plan.steps[k]:
            for y in step[1]:
                ext[y] = plan.compute(y, ext)
        v = run(k + 1, ext)
        if not v.truth:
            return Verdict.fail({"stage": k, "flavor": flavor, "env": found[0], "then": v.counterexample})
        return Verdict.ok({"stage": k, "flavor": flavor, "env": found[0], "then": v.witness})

    return run(1, env)


def _arrow_ok(plan, c, v, env):
    a = plan.arrows[c]
    C = plan.cat_of(c)
    return v in C.mor and C.source(v) == env.get(a.src) and C.target(v) == env.get(a.tgt)


# ---------------------------------------------------------------- universality


def check_universal(A: FinCategory, B: FinCategory, R: FinFunctor, Aobj, C, eta) -> Verdict:
    """Decide whether ``η : Aobj → RC`` is universal from ``Aobj`` to ``R``.

    True when every ``g : Aobj → RD`` factors as ``Rf ∘ η`` for exactly one
    ``f : C → D``.  The witness holds the factorization table
    ``flat[(D, g)] = f`` and its inverse ``sharp[(D, f)] = Rf ∘ η``.
    """
    if R.source != B or R.target != A:
        raise MalformedError("R must be a functor B → A")
    if Aobj not in A.identities or C not in B.identities:
        raise MalformedError("unknown object")
    if eta not in A.mor or A.source(eta) != Aobj or A.target(eta) != R.F0[C]:
        raise MalformedError(f"{eta!r} is not an arrow {Aobj} → R({C})")
    flat, sharp = {}, {}
    for D in B.objects:
        for f in B.hom(C, D):
            sharp[(D, f)] = compose(A, R.F1[f], eta)
        for g in A.hom(Aobj, R.F0[D]):
            sols = [f for f in B.hom(C, D) if sharp[(D, f)] == g]
            if len(sols) != 1:
                return Verdict.fail({"object": D, "morphism": g, "solutions": sols})
            flat[(D, g)] = sols[0]
    return Verdict.ok({"flat": flat, "sharp": sharp})


def check_universal_element(R: SetValuedFunctor, C, e) -> Verdict:
    """Decide whether ``e ∈ R(C)`` is universal: each ``x ∈ R(D)`` is ``R(f)(e)`` for exactly one ``f``."""
    B = R.source
    if C not in B.identities or e not in R.onObjects[C]:
        raise MalformedError(f"{e!r} is not an element of R({C})")
    flat, sharp = {}, {}
    for D in B.objects:
        for f in B.hom(C, D):
            sharp[(D, f)] = R.onMorphisms[f](e)
        for x in R.onObjects[D]:
            sols = [f for f in B.hom(C, D) if sharp[(D, f)] == x]
            if len(sols) != 1:
                return Verdict.fail({"object": D, "element": x, "solutions": sols})
            flat[(D, x)] = sols[0]
    return Verdict.ok({"flat": flat, "sharp": sharp})


# ---------------------------------------------------------------- markers


def _numbered(D: Diagram) -> Diagram:
    """Replace bare quantifiers by their default stages."""

    def fix(c):
        q = c.quantifier
        if q is None or q.stage is not None:
            return c
        return replace(c, quantifier=Quantifier(q.flavor, 1 if q.flavor == "forall" else 2))

    return Diagram(D.name, [fix(n) for n in D.nodes], [fix(a) for a in D.arrows], D.noncommute)


def _fresh(D: Diagram, want: str) -> str:
    taken = set(D.ids())
    out, i = want, 1
    while out in taken:
        i += 1
        out = f"{want}{i}"
    return out


def _expand_univ(D: Diagram, eta: Arrow, m: int) -> Diagram:
    nodes = D.node_map
    img = _images(D)
    if eta.kind != "hom" or eta.tgt not in img or img[eta.tgt][1] not in nodes:
        raise ValidationError(f"'univ' arrow {eta.id!r} must end at the image of a node under a functor")
    _, Cn, R = img[eta.tgt]
    Rname = D.arrow_map[R].name
    Did = _fresh(D, f"univ_{eta.id}_D")
    RDid = _fresh(D, f"univ_{eta.id}_RD")
    iD = _fresh(D, f"univ_{eta.id}_iD")
    g = _fresh(D, f"univ_{eta.id}_g")
    f = _fresh(D, f"univ_{eta.id}_f")
    Rf = _fresh(D, f"univ_{eta.id}_Rf")
    i_f = _fresh(D, f"univ_{eta.id}_if")
    fa, ex = Quantifier("forall", m + 1), Quantifier("existsunique", m + 2)
    new_nodes = [Node(Did, "D", quantifier=fa), Node(RDid, f"{Rname}D")]
    new_arrows = [
        Arrow(iD, Did, RDid, "internal", over=R),
        Arrow(g, eta.src, RDid, "hom", "g", quantifier=fa),
        Arrow(f, Cn, Did, "hom", "f", quantifier=ex),
        Arrow(Rf, eta.tgt, RDid, "hom", f"{Rname}f"),
        Arrow(i_f, f, Rf, "internal", over=R),
    ]
    arrows = [replace(a, markers=tuple(x for x in a.markers if x != "univ")) if a.id == eta.id else a
              for a in D.arrows]
    return Diagram(D.name, list(D.nodes) + new_nodes, arrows + new_arrows, D.noncommute)


def _expand_pullback(D: Diagram, P: Node, m: int) -> Diagram:
    outs = [a for a in D.arrows if a.kind == "hom" and a.src == P.id]
    if len(outs) != 2:
        raise ValidationError(f"'pullback' node {P.id!r} needs exactly two outgoing arrows")
    p1, p2 = outs
    q1s = [a for a in D.arrows if a.kind == "hom" and a.src == p1.tgt]
    q2s = [a for a in D.arrows if a.kind == "hom" and a.src == p2.tgt]
    pairs = [(a, b) for a in q1s for b in q2s if a.tgt == b.tgt and a.id != b.id]
    if len(pairs) != 1:
        raise ValidationError(f"'pullback' node {P.id!r} is not the corner of a single square")
    X = _fresh(D, f"pb_{P.id}_X")
    x1, x2, u = (_fresh(D, f"pb_{P.id}_{s}") for s in ("x1", "x2", "u"))
    fa, ex = Quantifier("forall", m + 1), Quantifier("existsunique", m + 2)
    nodes = [replace(n, markers=tuple(x for x in n.markers if x != "pullback")) if n.id == P.id else n
             for n in D.nodes]
    return Diagram(D.name, nodes + [Node(X, "X", quantifier=fa)],
                   list(D.arrows) + [Arrow(x1, X, p1.tgt, "hom", quantifier=fa),
                                     Arrow(x2, X, p2.tgt, "hom", quantifier=fa),
                                     Arrow(u, X, P.id, "hom", quantifier=ex)], D.noncommute)


def expand_marker(D: Diagram) -> Diagram:
    """Replace ``univ`` and ``pullback`` markers by quantified stages placed after the existing ones."""
    for c in list(D.nodes) + list(D.arrows):
        for mk in c.markers:
            if mk not in ("univ", "pullback"):
                raise ValidationError(f"unknown marker {mk!r} on {c.id!r}")
    if not any(c.markers for c in list(D.nodes) + list(D.arrows)):
        return D
    D = _numbered(D)
    while True:
        m = max(stage_flavors(D), default=0)
        target = next((c for c in list(D.nodes) + list(D.arrows) if c.markers), None)
        if target is None:
            break
        mk = target.markers[0]
        if mk == "univ":
            if not isinstance(target, Arrow):
                raise ValidationError(f"'univ' marks arrows, not node {target.id!r}")
            D = _expand_univ(D, target, m)
        else:
            if not isinstance(target, Node):
                raise ValidationError(f"'pullback' marks nodes, not arrow {target.id!r}")
            D = _expand_pullback(D, target, m)
    validate(D)
    return D
