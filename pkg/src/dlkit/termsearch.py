"""Simply typed λ-calculus with products and constants.

Surface syntax (ASCII alternatives in brackets)::

    type   := prod [("→" | "->") type]          # right associative
    prod   := tatom (("×" | "*" | "∧") tatom)*   # left associative
    tatom  := NAME | "(" type ")"

    term   := ("λ" | "\\") NAME [":" type] "." term | sum
    sum    := mul ("+" mul)*
    mul    := app (("·" | "*") app)*
    app    := prim ( "(" term ")" | prim )*     # f(x) and f x both apply
    prim   := ("π" | "fst") prim | ("π′" | "snd") prim
            | NAME | NUMBER | "(" term ["," term] ")"

Names may contain primes; an ASCII ``'`` is read as ``′``.  Identifiers
naming a constant of the signature denote that constant unless bound.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .errors import DLSyntaxError, TypeCheckError

# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Prod:
    left: object
    right: object

    def __str__(self):
        return f"{_tparen(self.left, 1)}×{_tparen(self.right, 2)}"


@dataclass(frozen=True)
class Arrow:
    dom: object
    cod: object

    def __str__(self):
        return f"{_tparen(self.dom, 1)}→{self.cod}"


@dataclass(frozen=True)
class Meta:
    """Unknown type introduced for an unannotated binder."""

    n: int

    def __str__(self):
        return f"?{self.n}"


def _tparen(t, pos):
    if isinstance(t, Arrow) or (isinstance(t, Prod) and pos == 2):
        return f"({t})"
    return str(t)


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    type: Optional[object]
    body: object


@dataclass(frozen=True)
class App:
    fn: object
    arg: object


@dataclass(frozen=True)
class Pair:
    first: object
    second: object


@dataclass(frozen=True)
class Proj1:
    term: object


@dataclass(frozen=True)
class Proj2:
    term: object


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Lit:
    value: int


BINOPS = {"+": (lambda a, b: a + b), "·": (lambda a, b: a * b)}
NAT = Base("N")


@dataclass
class Signature:
    """Constants: builtin binary operators on literals and defined constants.

    ``definitions[name] = (params, body)`` unfolds ``name(a1, …)`` to
    ``body`` with the parameters replaced.
    """

    types: dict = field(default_factory=dict)
    definitions: dict = field(default_factory=dict)
    builtins: dict = field(default_factory=dict)

    @classmethod
    def arithmetic(cls, definitions: Optional[dict] = None) -> "Signature":
        """Literals with ``+`` and ``·``; ``definitions`` maps names to source like ``"λa. a·a+4"``."""
        sig = cls(types={op: Arrow(NAT, Arrow(NAT, NAT)) for op in BINOPS}, builtins=dict(BINOPS))
        for name, src in (definitions or {}).items():
            body = parse_term(src, sig)
            params = []
            while isinstance(body, Lam):
                params.append(body.var)
                body = body.body
            lam = parse_term(src, sig)
            sig.types[name] = typecheck(TypingContext((), sig), lam, default=NAT)
            sig.definitions[name] = (tuple(params), body)
        return sig


@dataclass
class TypingContext:
    vars: tuple = ()  # ((name, type), ...)
    signature: Signature = field(default_factory=Signature)

    def __post_init__(self):
        self.vars = tuple(self.vars)
        names = [n for n, _ in self.vars]
        if len(names) != len(set(names)):
            raise TypeCheckError("context names must be unique")

    def lookup(self, name):
        for n, t in reversed(self.vars):
            if n == name:
                return t
        return None

    def extend(self, name, typ) -> "TypingContext":
        return TypingContext(tuple((n, t) for n, t in self.vars if n != name) + ((name, typ),), self.signature)


# ---------------------------------------------------------------- printing


def _is_binop(t):
    return isinstance(t, App) and isinstance(t.fn, App) and isinstance(t.fn.fn, Const) and t.fn.fn.name in BINOPS


_PREC = {"+": 1, "·": 2}


def show(t, types: bool = False) -> str:
    """Canonical text of a term; ``types`` prints binder annotations.

    Precedence, loosest first: λ, ``+``, ``·``, application and projection.
    """

    def go(t, need=0):
        if isinstance(t, (Var, Const)):
            return t.name
        if isinstance(t, Lit):
            return str(t.value)
        if isinstance(t, Pair):
            return f"({go(t.first)}, {go(t.second)})"
        if isinstance(t, Lam):
            ann = f":{t.type}" if types and t.type is not None else ""
            s, prec = f"λ{t.var}{ann}.{go(t.body)}", 0
        elif isinstance(t, (Proj1, Proj2)):
            head = "π" if isinstance(t, Proj1) else "π′"
            inner = t.term
            if isinstance(inner, (Var, Const, Lit)):
                s = f"{head} {go(inner)}"
            elif isinstance(inner, Pair):
                s = head + go(inner)
            else:
                s = f"{head}({go(inner)})"
            prec = 3
        elif _is_binop(t):
            op = t.fn.fn.name
            prec = _PREC[op]
            s = f"{go(t.fn.arg, prec)}{op}{go(t.arg, prec + 1)}"
        elif isinstance(t, App):
            s, prec = f"{go(t.fn, 3)}({go(t.arg)})", 3
        else:
            raise TypeError(f"not a term: {t!r}")
        return f"({s})" if prec < need else s

    return go(t)


# ---------------------------------------------------------------- parsing


_TOK = re.compile(r"""\s*(?:
    (?P<num>\d+) |
    (?P<lam>λ|\\) |
    (?P<proj>π′|π'|π|fst|snd)(?![\w'′]) |
    (?P<name>[^\W\d][\w'′]*) |
    (?P<punct>->|→|[().,:+·*×∧])
)""", re.VERBOSE)


def _prime(s):
    return s.replace("'", "′")


def _tokens(text, pattern):
    out, i = [], 0
    text = text.rstrip()
    while i < len(text):
        m = pattern.match(text, i)
        if not m or m.end() == i:
            raise DLSyntaxError(f"unexpected character {text[i]!r}", 1, i + 1)
        kind = m.lastgroup
        value = m.group(kind) if kind else next(g for g in m.groups() if g is not None)
        out.append((kind, value, m.start(m.lastindex or 0) + 1))
        i = m.end()
    out.append(("eof", "", len(text) + 1))
    return out


class _TypeParser:
    def __init__(self, toks, i=0):
        self.toks, self.i = toks, i

    def peek(self):
        return self.toks[self.i][1]

    def take(self, v=None):
        kind, val, col = self.toks[self.i]
        if v is not None and val != v:
            got = "end of input" if kind == "eof" else repr(val)
            raise DLSyntaxError(f"expected {v!r}, found {got}", 1, col)
        self.i += 1
        return val

    def type(self):
        left = self.prod()
        if self.peek() in ("->", "→"):
            self.take()
            return Arrow(left, self.type())
        return left

    def prod(self):
        t = self.atom()
        while self.peek() in ("×", "*", "∧"):
            self.take()
            t = Prod(t, self.atom())
        return t

    def atom(self):
        kind, val, col = self.toks[self.i]
        if val == "(":
            self.take()
            t = self.type()
            self.take(")")
            return t
        if kind in ("name", None) and val and re.match(r"[^\W\d]", val):
            self.i += 1
            return Base(_prime(val))
        raise DLSyntaxError(f"expected a type, found {val or 'end of input'!r}", 1, col)


def parse_type(text: str):
    toks = _tokens(text, _TOK)
    p = _TypeParser(toks)
    t = p.type()
    if toks[p.i][0] != "eof":
        raise DLSyntaxError(f"unexpected {toks[p.i][1]!r} after type", 1, toks[p.i][2])
    return t


class _TermParser(_TypeParser):
    def __init__(self, toks, sig):
        super().__init__(toks)
        self.sig = sig
        self.bound = []

    def kind(self):
        return self.toks[self.i][0]

    def term(self):
        if self.kind() == "lam":
            self.take()
            kind, name, col = self.toks[self.i]
            if kind != "name":
                raise DLSyntaxError("expected a binder name after λ", 1, col)
            self.i += 1
            name = _prime(name)
            typ = None
            if self.peek() == ":":
                self.take()
                typ = self.type()
            self.take(".")
            self.bound.append(name)
            body = self.term()
            self.bound.pop()
            return Lam(name, typ, body)
        return self.sum()

    def sum(self):
        t = self.mul()
        while self.peek() == "+":
            self.take()
            t = App(App(Const("+"), t), self.mul())
        return t

    def mul(self):
        t = self.app()
        while self.peek() in ("·", "*"):
            self.take()
            t = App(App(Const("·"), t), self.app())
        return t

    def starts_prim(self):
        kind, val, _ = self.toks[self.i]
        return kind in ("num", "proj", "name") or val == "("

    def app(self):
        t = self.prim()
        while self.starts_prim():
            t = App(t, self.prim())
        return t

    def prim(self):
        kind, val, col = self.toks[self.i]
        if kind == "proj":
            self.i += 1
            inner = self.prim()
            return Proj1(inner) if val in ("π", "fst") else Proj2(inner)
        if kind == "num":
            self.i += 1
            return Lit(int(val))
        if kind == "name":
            self.i += 1
            name = _prime(val)
            if name not in self.bound and name in self.sig.types:
                return Const(name)
            return Var(name)
        if val == "(":
            self.take()
            first = self.term()
            if self.peek() == ",":
                self.take()
                second = self.term()
                self.take(")")
                return Pair(first, second)
            self.take(")")
            return first
        raise DLSyntaxError(f"expected a term, found {val or 'end of input'!r}", 1, col)


def parse_term(text: str, signature: Optional[Signature] = None):
    toks = _tokens(text, _TOK)
    p = _TermParser(toks, signature or Signature())
    t = p.term()
    if toks[p.i][0] != "eof":
        raise DLSyntaxError(f"unexpected {toks[p.i][1]!r} after term", 1, toks[p.i][2])
    return t


def parse_context(text: str, signature: Optional[Signature] = None) -> TypingContext:
    """``"f:A'->A, g:B->C"`` → a typing context."""
    pairs = []
    for item in filter(None, (s.strip() for s in re.split(r"[,;]", text))):
        if ":" not in item:
            raise DLSyntaxError(f"context entry {item!r} needs 'name : type'", 1, 1)
        name, typ = item.split(":", 1)
        pairs.append((_prime(name.strip()), parse_type(typ)))
    return TypingContext(tuple(pairs), signature or Signature())


# ---------------------------------------------------------------- type checking


def _resolve(t, subst):
    while isinstance(t, Meta) and t.n in subst:
        t = subst[t.n]
    if isinstance(t, Prod):
        return Prod(_resolve(t.left, subst), _resolve(t.right, subst))
    if isinstance(t, Arrow):
        return Arrow(_resolve(t.dom, subst), _resolve(t.cod, subst))
    return t


def _occurs(n, t):
    return (isinstance(t, Meta) and t.n == n) or (isinstance(t, Prod) and (_occurs(n, t.left) or _occurs(n, t.right))) \
        or (isinstance(t, Arrow) and (_occurs(n, t.dom) or _occurs(n, t.cod)))


def _unify(a, b, subst, where):
    a, b = _resolve(a, subst), _resolve(b, subst)
    if a == b:
        return
    if isinstance(a, Meta) or isinstance(b, Meta):
        m, other = (a, b) if isinstance(a, Meta) else (b, a)
        if _occurs(m.n, other):
            raise TypeCheckError(f"{where}: infinite type {m} = {other}")
        subst[m.n] = other
        return
    if type(a) is type(b) and isinstance(a, Prod):
        _unify(a.left, b.left, subst, where)
        _unify(a.right, b.right, subst, where)
        return
    if type(a) is type(b) and isinstance(a, Arrow):
        _unify(a.dom, b.dom, subst, where)
        _unify(a.cod, b.cod, subst, where)
        return
    raise TypeCheckError(f"{where}: expected {a}, found {b}")


def typecheck(ctx: TypingContext, t, default=None):
    """The simple type of ``t`` in ``ctx``.

    Unannotated binders get their types by unification; any that stay
    undetermined become ``default`` when given, or remain ``?n``.
    """
    subst, counter = {}, itertools.count()

    def fresh():
        return Meta(next(counter))

    def go(env, t):
        if isinstance(t, Var):
            for n, ty in reversed(env):
                if n == t.name:
                    return ty
            ty = ctx.lookup(t.name)
            if ty is None:
                raise TypeCheckError(f"unbound variable {t.name!r}")
            return ty
        if isinstance(t, Const):
            if t.name not in ctx.signature.types:
                raise TypeCheckError(f"unknown constant {t.name!r}")
            return ctx.signature.types[t.name]
        if isinstance(t, Lit):
            return NAT
        if isinstance(t, Lam):
            dom = t.type if t.type is not None else fresh()
            return Arrow(dom, go(env + [(t.var, dom)], t.body))
        if isinstance(t, App):
            f, a = go(env, t.fn), go(env, t.arg)
            res = fresh()
            _unify(f, Arrow(a, res), subst, f"in {show(t)}")
            return res
        if isinstance(t, Pair):
            return Prod(go(env, t.first), go(env, t.second))
        if isinstance(t, (Proj1, Proj2)):
            p = go(env, t.term)
            l, r = fresh(), fresh()
            _unify(p, Prod(l, r), subst, f"in {show(t)}")
            return l if isinstance(t, Proj1) else r
        raise TypeCheckError(f"not a term: {t!r}")

    ty = _resolve(go([], t), subst)
    if default is not None:
        ty = _default(ty, default)
    return ty


def _default(t, d):
    if isinstance(t, Meta):
        return d
    if isinstance(t, Prod):
        return Prod(_default(t.left, d), _default(t.right, d))
    if isinstance(t, Arrow):
        return Arrow(_default(t.dom, d), _default(t.cod, d))
    return t


# ---------------------------------------------------------------- substitution and reduction


def free_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Pair):
        return free_vars(t.first) | free_vars(t.second)
    if isinstance(t, (Proj1, Proj2)):
        return free_vars(t.term)
    return set()


def _fresh_name(base, avoid):
    name = base
    while name in avoid:
        name += "′"
    return name


def substitute(t, name, value):
    """Capture-avoiding ``t[name := value]``."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, Lam):
        if t.var == name:
            return t
        fv = free_vars(value)
        if t.var in fv:
            new = _fresh_name(t.var, fv | free_vars(t.body) | {name})
            body = substitute(t.body, t.var, Var(new))
            return Lam(new, t.type, substitute(body, name, value))
        return Lam(t.var, t.type, substitute(t.body, name, value))
    if isinstance(t, App):
        return App(substitute(t.fn, name, value), substitute(t.arg, name, value))
    if isinstance(t, Pair):
        return Pair(substitute(t.first, name, value), substitute(t.second, name, value))
    if isinstance(t, Proj1):
        return Proj1(substitute(t.term, name, value))
    if isinstance(t, Proj2):
        return Proj2(substitute(t.term, name, value))
    return t


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, args[::-1]


def _contract(t, sig: Signature):
    """The contractum if ``t`` itself is a redex, else ``None``."""
    if isinstance(t, App) and isinstance(t.fn, Lam):
        return substitute(t.fn.body, t.fn.var, t.arg)
    if isinstance(t, Proj1) and isinstance(t.term, Pair):
        return t.term.first
    if isinstance(t, Proj2) and isinstance(t.term, Pair):
        return t.term.second
    if isinstance(t, App):
        head, args = _spine(t)
        if isinstance(head, Const):
            if head.name in sig.builtins and len(args) == 2 and all(isinstance(a, Lit) for a in args):
                return Lit(sig.builtins[head.name](args[0].value, args[1].value))
            if head.name in sig.definitions:
                params, body = sig.definitions[head.name]
                if len(args) == len(params):
                    out = body
                    # simultaneous substitution through fresh names
                    tmp = [_fresh_name(f"_{p}", free_vars(body) | set().union(*map(free_vars, args)))
                           for p in params]
                    for p, x in zip(params, tmp):
                        out = substitute(out, p, Var(x))
                    for x, a in zip(tmp, args):
                        out = substitute(out, x, a)
                    return out
    return None


def one_step_reducts(t, sig: Optional[Signature] = None) -> list:
    """Every term reachable in one step, redexes in leftmost-outermost order."""
    sig = sig or Signature()
    out = []
    c = _contract(t, sig)
    if c is not None:
        out.append(c)
    if isinstance(t, Lam):
        out += [Lam(t.var, t.type, b) for b in one_step_reducts(t.body, sig)]
    elif isinstance(t, App):
        out += [App(f, t.arg) for f in one_step_reducts(t.fn, sig)]
        out += [App(t.fn, a) for a in one_step_reducts(t.arg, sig)]
    elif isinstance(t, Pair):
        out += [Pair(a, t.second) for a in one_step_reducts(t.first, sig)]
        out += [Pair(t.first, b) for b in one_step_reducts(t.second, sig)]
    elif isinstance(t, Proj1):
        out += [Proj1(a) for a in one_step_reducts(t.term, sig)]
    elif isinstance(t, Proj2):
        out += [Proj2(a) for a in one_step_reducts(t.term, sig)]
    return out


def _step(t, sig):
    c = _contract(t, sig)
    if c is not None:
        return c
    if isinstance(t, Lam):
        b = _step(t.body, sig)
        return None if b is None else Lam(t.var, t.type, b)
    if isinstance(t, App):
        f = _step(t.fn, sig)
        if f is not None:
            return App(f, t.arg)
        a = _step(t.arg, sig)
        return None if a is None else App(t.fn, a)
    if isinstance(t, Pair):
        a = _step(t.first, sig)
        if a is not None:
            return Pair(a, t.second)
        b = _step(t.second, sig)
        return None if b is None else Pair(t.first, b)
    if isinstance(t, (Proj1, Proj2)):
        a = _step(t.term, sig)
        return None if a is None else type(t)(a)
    return None


def normalize(t, sig: Optional[Signature] = None, max_steps: int = 100000):
    """Leftmost-outermost normal form.  Raises ``RuntimeError`` past ``max_steps``."""
    sig = sig or Signature()
    for _ in range(max_steps):
        n = _step(t, sig)
        if n is None:
            return t
        t = n
    raise RuntimeError(f"no normal form within {max_steps} steps")


def stuck_terms(t, sig: Optional[Signature] = None) -> list:
    """Applications of builtin operators that cannot fire because an argument is not a literal.

    Meaningful on normal forms: a non-empty list flags a stuck term.
    """
    sig = sig or Signature()
    out = []

    def walk(t):
        if isinstance(t, App):
            head, args = _spine(t)
            if isinstance(head, Const) and head.name in sig.builtins and len(args) == 2 \
                    and not all(isinstance(a, Lit) for a in args):
                out.append(t)
        for child in _children(t):
            walk(child)

    walk(t)
    return out


def _children(t):
    if isinstance(t, Lam):
        return [t.body]
    if isinstance(t, App):
        return [t.fn, t.arg]
    if isinstance(t, Pair):
        return [t.first, t.second]
    if isinstance(t, (Proj1, Proj2)):
        return [t.term]
    return []


@dataclass
class ReductionGraph:
    graph: nx.DiGraph
    root: object
    sinks: list
    truncated: bool
    confluent: bool

    def to_json(self):
        return {"root": show(self.root), "nodes": len(self.graph), "edges": self.graph.number_of_edges(),
                "sinks": [show(s) for s in self.sinks], "truncated": self.truncated,
                "confluent": self.confluent,
                "edge_list": [[show(a), show(b)] for a, b in self.graph.edges]}


def reduction_graph(t, sig: Optional[Signature] = None, bound: int = 1000) -> ReductionGraph:
    """All one-step reductions from ``t``, explored breadth-first up to ``bound`` terms.

    ``confluent`` holds when the graph is complete and acyclic and every
    term reaches exactly one sink, so every maximal path ends there.
    """
    sig = sig or Signature()
    G = nx.DiGraph()
    G.add_node(t)
    queue = deque([t])
    truncated = False
    expanded = set()
    while queue:
        u = queue.popleft()
        if len(G) > bound:
            truncated = True
            break
        expanded.add(u)
        for v in one_step_reducts(u, sig):
            if v not in G:
                G.add_node(v)
                queue.append(v)
            G.add_edge(u, v)
    truncated = truncated or any(u not in expanded for u in G)
    sinks = sorted((u for u in G if G.out_degree(u) == 0 and u in expanded), key=show)
    confluent = False
    if not truncated and nx.is_directed_acyclic_graph(G):
        reach = {}
        for u in reversed(list(nx.topological_sort(G))):
            succ = list(G.successors(u))
            reach[u] = {u} if not succ else set().union(*(reach[v] for v in succ))
        confluent = all(len(r) == 1 for r in reach.values())
    return ReductionGraph(G, t, sinks, truncated, confluent)


# ---------------------------------------------------------------- term inference


def _binder(typ, avoid):
    if isinstance(typ, Base):
        base = typ.name[0].lower() + typ.name[1:]
        base = "".join(ch for ch in base if ch.isalpha() or ch == "′") or "x"
        base = base[0].lower() + base[1:]
    elif isinstance(typ, Prod):
        base = "p"
    else:
        base = "f"
    name, i = base, 1
    while name in avoid:
        i += 1
        name = f"{base}{i}"
    return name


def depth(t) -> int:
    kids = _children(t)
    if not kids:
        return 0
    return 1 + max(depth(k) for k in kids)


def size(t) -> int:
    return 1 + sum(size(k) for k in _children(t))


def alpha_key(t, env=()):
    """De Bruijn form, equal exactly for α-equivalent terms."""
    if isinstance(t, Var):
        return ("v", env.index(t.name)) if t.name in env else ("f", t.name)
    if isinstance(t, Lam):
        return ("l", t.type, alpha_key(t.body, (t.var,) + env))
    return (type(t).__name__,) + tuple(alpha_key(k, env) for k in _children(t)) + (
        (t.name,) if isinstance(t, Const) else (t.value,) if isinstance(t, Lit) else ())


def infer_term(ctx: TypingContext, goal, max_depth: int = 4) -> list:
    """Every η-long β-normal term of type ``goal`` with depth at most ``max_depth``.

    Results are deduplicated up to α-equivalence and ordered by depth,
    then size, then text.  Binders are named after their types: the
    lower-cased base name, ``p`` for pairs and ``f`` for functions.
    """
    if isinstance(goal, str):
        goal = parse_type(goal)

    def intro(env, T, d):
        """(term, depth) pairs of type T in env with depth ≤ d."""
        if d < 0:
            return []
        if isinstance(T, Arrow):
            x = _binder(T.dom, {n for n, _ in env})
            return [(Lam(x, T.dom, b), bd + 1) for b, bd in intro(env + ((x, T.dom),), T.cod, d - 1)]
        if isinstance(T, Prod):
            out = []
            for a, ad in intro(env, T.left, d - 1):
                for b, bd in intro(env, T.right, d - 1):
                    out.append((Pair(a, b), 1 + max(ad, bd)))
            return out
        out = []
        seen = set()
        for name, S in reversed(env):
            if name in seen:
                continue
            seen.add(name)
            out += elim(env, Var(name), 0, S, T, d)
        return out

    def elim(env, h, hd, S, T, d):
        out = []
        if S == T:
            out.append((h, hd))
        if hd + 1 > d:
            return out
        if isinstance(S, Arrow):
            for a, ad in intro(env, S.dom, d - 1):
                nd = 1 + max(hd, ad)
                if nd <= d:
                    out += elim(env, App(h, a), nd, S.cod, T, d)
        elif isinstance(S, Prod):
            out += elim(env, Proj1(h), hd + 1, S.left, T, d)
            out += elim(env, Proj2(h), hd + 1, S.right, T, d)
        return out

    found = intro(tuple(ctx.vars), goal, max_depth)
    uniq = {}
    for t, d in found:
        uniq.setdefault(alpha_key(t), (t, d))
    return [t for t, d in sorted(uniq.values(), key=lambda td: (td[1], size(td[0]), show(td[0])))]


def is_normal(t, sig: Optional[Signature] = None) -> bool:
    return not one_step_reducts(t, sig)
