"""DL diagrams: abstract syntax, a linear textual syntax, and static analysis.

Grammar (``#`` starts a comment; strings are double-quoted with ``\\"`` and
``\\\\`` escapes)::

    diagram   := "diagram" NAME "{" decl* "}"
    decl      := node | arrow | functor | noncommute | over
    node      := "node" ID [STRING] [":" STRING] [annots] ";"
    arrow     := "arrow" ID ":" ID KIND ID [STRING] [annots] ["over" ID] ";"
    functor   := "functor" ID ":" ID "=>" ID [STRING] [annots] ";"
    noncommute:= "noncommute" path "," path ";"
    over      := "over" ID ("," ID)* ":" ID ";"
    path      := ID ("." ID)*              # g.f is g ∘ f
    KIND      := "->" | "|->" | "<->" | "=>"
    annots    := "[" annot ("," annot)* "]"
    annot     := QUANT ["@" INT] | MARKER
    QUANT     := "forall" | "exists" | "existsunique" | "∀" | "∃" | "∃!"

A node's string is its expression (defaulting to its id); the second
string is a declared type.  An arrow's string is its label.  Internal
(``|->``) arrows must sit ``over`` a functor arrow and either map a node to
its image or an arrow to its image arrow.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .errors import DLSyntaxError, ElaborationError, InferenceError, MalformedError, ValidationError
from .fincat import FinCategory, FinFunctor, FinSet, SetFunction, SetValuedFunctor, check_functor

KINDS = {"->": "hom", "|->": "internal", "<->": "bijection", "=>": "functor"}
KIND_TOKENS = {v: k for k, v in KINDS.items()}
FLAVORS = ("forall", "exists", "existsunique")
FLAVOR_ALIASES = {"forall": "forall", "∀": "forall", "exists": "exists", "∃": "exists",
                  "existsunique": "existsunique", "∃!": "existsunique"}
SYMBOL = {"forall": "∀", "exists": "∃", "existsunique": "∃!"}
MARKERS = ("univ", "pullback")


# ---------------------------------------------------------------- syntax tree


@dataclass(frozen=True)
class Quantifier:
    flavor: str
    stage: Optional[int] = None  # None for a bare annotation

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValidationError(f"unknown quantifier {self.flavor!r}")
        if self.stage is not None and self.stage < 1:
            raise ValidationError("quantifier stages are positive integers")

    def text(self):
        return self.flavor if self.stage is None else f"{self.flavor}@{self.stage}"


@dataclass(frozen=True)
class Node:
    id: str
    expr: Optional[str] = None
    type: Optional[str] = None
    quantifier: Optional[Quantifier] = None
    markers: tuple = ()

    @property
    def name(self):
        return self.expr if self.expr is not None else self.id


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str
    kind: str = "hom"
    label: Optional[str] = None
    quantifier: Optional[Quantifier] = None
    over: Optional[str] = None
    markers: tuple = ()

    @property
    def name(self):
        return self.label if self.label is not None else self.id


@dataclass(frozen=True)
class Diagram:
    """A DL diagram.  Equality is structural and respects declaration order.

    ``noncommute`` holds pairs of paths; a path is a tuple of arrow ids in
    composition order, so ``("g", "f")`` is ``g ∘ f``.
    """

    name: str
    nodes: tuple = ()
    arrows: tuple = ()
    noncommute: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "noncommute", tuple((tuple(p), tuple(q)) for p, q in self.noncommute))

    @property
    def node_map(self):
        return {n.id: n for n in self.nodes}

    @property
    def arrow_map(self):
        return {a.id: a for a in self.arrows}

    def component(self, cid):
        m = self.node_map
        return m[cid] if cid in m else self.arrow_map[cid]

    def ids(self):
        return [n.id for n in self.nodes] + [a.id for a in self.arrows]

    def restrict(self, keep) -> "Diagram":
        keep = set(keep)
        nc = tuple((p, q) for p, q in self.noncommute if set(p) <= keep and set(q) <= keep)
        return Diagram(self.name, [n for n in self.nodes if n.id in keep],
                       [a for a in self.arrows if a.id in keep], nc)

    def to_json(self):
        def q(x):
            return None if x is None else {"flavor": x.flavor, "stage": x.stage}

        return {
            "kind": "diagram", "name": self.name,
            "nodes": [{"id": n.id, "expr": n.expr, "type": n.type, "quantifier": q(n.quantifier),
                       "markers": list(n.markers)} for n in self.nodes],
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt, "kind": a.kind, "label": a.label,
                        "quantifier": q(a.quantifier), "over": a.over, "markers": list(a.markers)}
                       for a in self.arrows],
            "noncommute": [[list(p), list(r)] for p, r in self.noncommute],
        }

    @classmethod
    def from_json(cls, doc):
        def q(x):
            return None if x is None else Quantifier(x["flavor"], x.get("stage"))

        nodes = [Node(n["id"], n.get("expr"), n.get("type"), q(n.get("quantifier")), tuple(n.get("markers", ())))
                 for n in doc.get("nodes", [])]
        arrows = [Arrow(a["id"], a["src"], a["tgt"], a.get("kind", "hom"), a.get("label"), q(a.get("quantifier")),
                        a.get("over"), tuple(a.get("markers", ()))) for a in doc.get("arrows", [])]
        D = cls(doc["name"], nodes, arrows, [(tuple(p), tuple(r)) for p, r in doc.get("noncommute", [])])
        validate(D)
        return D


# ---------------------------------------------------------------- tokenizer and parser


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>\#[^\n]*) |
    (?P<string>"(?:[^"\\\n]|\\.)*") |
    (?P<kind>\|->|<->|->|=>) |
    (?P<qsym>∃!|∀|∃) |
    (?P<ident>[\w'′]+) |
    (?P<punct>[{}\[\];:,.@])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise DLSyntaxError(f"unexpected character {text[i]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        if kind == "nl":
            line, col = line + 1, 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            if kind == "string":
                value = re.sub(r"\\(.)", r"\1", value[1:-1])
            toks.append(_Tok(kind, value, line, col))
            col += len(m.group())
        i = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, value=None, kind=None):
        t = self.toks[self.i]
        if value is not None and t.value != value:
            return False
        if kind is not None and t.kind != kind:
            return False
        return t

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value=None, kind=None, what=None):
        t = self.toks[self.i]
        ok = (value is None or (t.value == value and t.kind != "string")) and (kind is None or t.kind == kind)
        if not ok:
            want = what or (repr(value) if value else kind)
            got = "end of input" if t.kind == "eof" else repr(t.value)
            raise DLSyntaxError(f"expected {want}, found {got}", t.line, t.col)
        self.i += 1
        return t

    def ident(self, what="identifier"):
        return self.expect(kind="ident", what=what).value

    def maybe_string(self):
        if self.peek(kind="string"):
            return self.next().value
        return None

    def annotations(self):
        quant, markers = None, []
        if not self.peek("[", "punct"):
            return quant, tuple(markers)
        self.next()
        while True:
            t = self.next()
            word = t.value
            if t.kind in ("ident", "qsym") and word in FLAVOR_ALIASES:
                stage = None
                if self.peek("@", "punct"):
                    self.next()
                    st = self.expect(kind="ident", what="stage number")
                    if not st.value.isdigit():
                        raise DLSyntaxError("stage must be a positive integer", st.line, st.col)
                    stage = int(st.value)
                    if stage < 1:
                        raise DLSyntaxError("stage must be a positive integer", st.line, st.col)
                if quant is not None:
                    raise DLSyntaxError("a component carries at most one quantifier", t.line, t.col)
                quant = Quantifier(FLAVOR_ALIASES[word], stage)
            elif t.kind == "ident":
                markers.append(word)
            else:
                raise DLSyntaxError(f"unexpected {word!r} in annotations", t.line, t.col)
            if self.peek(",", "punct"):
                self.next()
                continue
            self.expect("]")
            return quant, tuple(markers)

    def path(self):
        parts = [self.ident("arrow id")]
        while self.peek(".", "punct"):
            self.next()
            parts.append(self.ident("arrow id"))
        return tuple(parts)

    def parse(self):
        self.expect("diagram", kind="ident", what="'diagram'")
        name = self.ident("diagram name")
        self.expect("{")
        nodes, arrows, noncommute, overs = [], [], [], []
        while not self.peek("}", "punct"):
            t = self.peek()
            if t.kind == "eof":
                raise DLSyntaxError("unterminated diagram: missing '}'", t.line, t.col)
            word = self.expect(kind="ident", what="declaration").value
            if word == "node":
                nid = self.ident("node id")
                expr = self.maybe_string()
                typ = None
                if self.peek(":", "punct"):
                    self.next()
                    typ = self.expect(kind="string", what="type string").value
                quant, markers = self.annotations()
                nodes.append(Node(nid, None if expr == nid else expr, typ, quant, markers))
            elif word in ("arrow", "functor"):
                aid = self.ident("arrow id")
                self.expect(":")
                src = self.ident("source")
                kt = self.expect(kind="kind", what="arrow kind")
                kind = KINDS[kt.value]
                if word == "functor" and kind != "functor":
                    raise DLSyntaxError("functor declarations use '=>'", kt.line, kt.col)
                tgt = self.ident("target")
                label = self.maybe_string()
                quant, markers = self.annotations()
                over = None
                if self.peek("over", "ident"):
                    self.next()
                    over = self.ident("functor arrow id")
                arrows.append(Arrow(aid, src, tgt, kind, label, quant, over, markers))
            elif word == "noncommute":
                p = self.path()
                self.expect(",")
                q = self.path()
                noncommute.append((p, q))
            elif word == "over":
                ids = [self.ident("arrow id")]
                while self.peek(",", "punct"):
                    self.next()
                    ids.append(self.ident("arrow id"))
                self.expect(":")
                overs.append((ids, self.ident("functor arrow id"), t))
            else:
                raise DLSyntaxError(f"unknown declaration {word!r}", t.line, t.col)
            self.expect(";")
        self.expect("}")
        self.expect(kind="eof", what="end of input")
        by_id = {a.id: i for i, a in enumerate(arrows)}
        for ids, f, t in overs:
            for aid in ids:
                if aid not in by_id:
                    raise DLSyntaxError(f"'over' names unknown arrow {aid!r}", t.line, t.col)
                a = arrows[by_id[aid]]
                if a.over is not None and a.over != f:
                    raise DLSyntaxError(f"arrow {aid!r} is over two functors", t.line, t.col)
                arrows[by_id[aid]] = replace(a, over=f)
        return Diagram(name, nodes, arrows, noncommute)


def parse_dl(text: str) -> Diagram:
    D = _Parser(text).parse()
    validate(D)
    return D


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _annots(quant, markers):
    items = ([quant.text()] if quant else []) + list(markers)
    return f" [{', '.join(items)}]" if items else ""


def print_dl(D: Diagram) -> str:
    """Canonical text: nodes, then arrows, then non-commuting cells, in declaration order."""
    lines = [f"diagram {D.name} {{"]
    for n in D.nodes:
        s = f"  node {n.id}"
        if n.expr is not None:
            s += f" {_quote(n.expr)}"
        if n.type is not None:
            s += f" : {_quote(n.type)}"
        lines.append(s + _annots(n.quantifier, n.markers) + ";")
    for a in D.arrows:
        word = "functor" if a.kind == "functor" else "arrow"
        s = f"  {word} {a.id} : {a.src} {KIND_TOKENS[a.kind]} {a.tgt}"
        if a.label is not None:
            s += f" {_quote(a.label)}"
        s += _annots(a.quantifier, a.markers)
        if a.over is not None:
            s += f" over {a.over}"
        lines.append(s + ";")
    for p, q in D.noncommute:
        lines.append(f"  noncommute {'.'.join(p)}, {'.'.join(q)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- validation and stages


def _images(D: Diagram):
    """component id -> (internal arrow id, source component id, functor arrow id)."""
    return {a.tgt: (a.id, a.src, a.over) for a in D.arrows if a.kind == "internal"}


def derived_components(D: Diagram) -> set:
    """Components that are computed rather than quantified over.

    These are images under functors, the internal arrows naming them,
    functor arrows, category nodes, and bijection claims.
    """
    out = set(_images(D))
    cats = _category_nodes(D)
    out |= cats
    out |= {a.id for a in D.arrows if a.kind in ("internal", "functor", "bijection")}
    return out


def validate(D: Diagram) -> None:
    """Raise ``ValidationError`` unless every structural invariant holds."""
    ids = D.ids()
    dup = {x for x in ids if ids.count(x) > 1}
    if dup:
        raise ValidationError(f"duplicate component ids: {sorted(dup)}")
    nodes, arrows = D.node_map, D.arrow_map
    for a in D.arrows:
        if a.kind not in KIND_TOKENS:
            raise ValidationError(f"arrow {a.id!r} has unknown kind {a.kind!r}")
        for end in (a.src, a.tgt):
            if end not in nodes and end not in arrows:
                raise ValidationError(f"arrow {a.id!r} has an unresolved endpoint {end!r}")
        if a.kind in ("hom", "functor"):
            if a.src not in nodes or a.tgt not in nodes:
                raise ValidationError(f"{a.kind} arrow {a.id!r} must connect nodes")
        if a.kind == "bijection":
            if (a.src in nodes) != (a.tgt in nodes):
                raise ValidationError(f"bijection {a.id!r} must connect two nodes or two arrows")
        if a.kind == "internal":
            if a.over is None:
                raise ValidationError(f"internal arrow {a.id!r} must be 'over' a functor arrow")
            if (a.src in nodes) != (a.tgt in nodes):
                raise ValidationError(f"internal arrow {a.id!r} must map a node to a node or an arrow to an arrow")
            if a.src in arrows:
                s, t = arrows[a.src], arrows[a.tgt]
                if s.kind != "hom" or t.kind != "hom":
                    raise ValidationError(f"internal arrow {a.id!r} maps between non-hom arrows")
                img = _images(D)
                for x, y in ((s.src, t.src), (s.tgt, t.tgt)):
                    if img.get(y, (None, None, None))[1:] != (x, a.over):
                        raise ValidationError(
                            f"internal arrow {a.id!r}: endpoint {y!r} is not the image of {x!r} over {a.over!r}")
        if a.over is not None:
            if a.kind != "internal":
                raise ValidationError(f"only internal arrows can be 'over' a functor; {a.id!r} is {a.kind}")
            if a.over not in arrows or arrows[a.over].kind != "functor":
                raise ValidationError(f"'over' target of {a.id!r} is not a functor arrow")
    targets = [a.tgt for a in D.arrows if a.kind == "internal"]
    dup = {x for x in targets if targets.count(x) > 1}
    if dup:
        raise ValidationError(f"components with two defining internal arrows: {sorted(dup)}")
    for p, q in D.noncommute:
        for path in (p, q):
            _check_path(D, path)
    derived = derived_components(D)
    bare = numbered = False
    for cid in ids:
        c = D.component(cid)
        if c.quantifier is None:
            continue
        if cid in derived:
            raise ValidationError(f"{cid!r} is computed from other components and cannot be quantified")
        if c.quantifier.stage is None:
            bare = True
            if c.quantifier.flavor == "exists":
                raise ValidationError(f"bare 'exists' on {cid!r}: only bare forall and existsunique have a default stage")
        else:
            numbered = True
    if bare and numbered:
        raise ValidationError("mixed bare and numbered quantifiers")
    effective_stages(D)  # raises on inconsistent annotations


def _check_path(D, path):
    arrows = D.arrow_map
    if not path:
        raise ValidationError("empty path in noncommute")
    for x in path:
        if x not in arrows or arrows[x].kind != "hom":
            raise ValidationError(f"noncommute path uses {x!r}, which is not a hom arrow")
    # composition order: path[i] is applied after path[i+1]
    for later, earlier in zip(path, path[1:]):
        if arrows[earlier].tgt != arrows[later].src:
            raise ValidationError(f"noncommute path {'.'.join(path)} is not composable")


def own_stage(c) -> int:
    q = c.quantifier
    if q is None:
        return 0
    if q.stage is not None:
        return q.stage
    return 1 if q.flavor == "forall" else 2


def effective_stages(D: Diagram) -> dict:
    """Stage at which each component first exists.

    A component can appear no earlier than whatever it depends on:
    endpoints of arrows, the source of an image, and the functor an
    internal arrow lies over.
    """
    nodes, arrows = D.node_map, D.arrow_map
    img = _images(D)
    memo, active = {}, set()

    def st(cid):
        if cid in memo:
            return memo[cid]
        if cid in active:
            raise ValidationError(f"cyclic dependency through {cid!r}")
        active.add(cid)
        c = D.component(cid)
        deps = []
        if cid in arrows:
            if c.kind == "internal":
                deps = [c.src, c.over]
            else:
                deps = [c.src, c.tgt]
        if cid in img:
            deps.append(img[cid][1])
        base = max([st(d) for d in deps], default=0)
        own = own_stage(c)
        if c.quantifier is not None and own < base:
            raise ValidationError(
                f"{cid!r} is annotated with stage {own} but depends on a component of stage {base}")
        active.discard(cid)
        memo[cid] = max(own, base)
        return memo[cid]

    for cid in D.ids():
        st(cid)
    return memo


def _strip(D: Diagram) -> Diagram:
    return Diagram(D.name, [replace(n, quantifier=None) for n in D.nodes],
                   [replace(a, quantifier=None) for a in D.arrows], D.noncommute)


def stage_zero(D: Diagram) -> Diagram:
    stages = effective_stages(D)
    return _strip(D.restrict(c for c in D.ids() if stages[c] == 0))


def stage_flavors(D: Diagram) -> dict:
    """stage number -> quantifier flavor, checking each stage has exactly one."""
    flavors = {}
    for cid in D.ids():
        c = D.component(cid)
        if c.quantifier is None:
            continue
        k = own_stage(c)
        if flavors.setdefault(k, c.quantifier.flavor) != c.quantifier.flavor:
            raise ValidationError(f"stage {k} mixes {flavors[k]} and {c.quantifier.flavor}")
    n = max(flavors, default=0)
    gaps = [k for k in range(1, n + 1) if k not in flavors]
    if gaps:
        raise ValidationError(f"stage gap: no component is annotated with stage {gaps[0]}")
    return flavors


class StageList(list):
    """The list returned by ``extract_stages``; ``zero`` is stage 0 (also quantifier-free)."""

    zero: Optional[Diagram] = None


def extract_stages(D: Diagram) -> StageList:
    """``[(S_1, Q_1), …, (S_n, Q_n)]``: each stage with quantifiers erased, and its quantifier.

    ``S_k`` keeps every component whose stage is at most ``k``.  A diagram
    without quantifiers is a single stage ``[(D, None)]``; its quantifier list
    is empty.  Stage 0 is kept on the ``zero`` attribute.
    """
    validate(D)
    flavors = stage_flavors(D)
    out = StageList()
    out.zero = stage_zero(D)
    if not flavors:
        out.append((_strip(D), None))
        return out
    stages = effective_stages(D)
    for k in range(1, max(flavors) + 1):
        out.append((_strip(D.restrict(c for c in D.ids() if stages[c] <= k)), flavors[k]))
    return out


def quantifier_list(stages) -> list:
    return [q for _, q in stages if q is not None]


def embed_stages(stages, zero: Optional[Diagram] = None) -> Diagram:
    """Inverse of ``extract_stages``.

    Every component that is new at stage ``k`` and is not computed from
    others gets the annotation ``Q_k@k``.  Stage 0 comes from ``zero`` or
    from the ``zero`` attribute of the stage list.
    """
    if not stages:
        raise ValueError("no stages")
    last = stages[-1][0]
    if stages[-1][1] is None:
        return last
    zero = zero if zero is not None else getattr(stages, "zero", None)
    zero_ids = set(zero.ids()) if zero is not None else set()
    first = {}
    for k, (S, _) in enumerate(stages, start=1):
        for cid in S.ids():
            first.setdefault(cid, k)
    derived = derived_components(last)

    def q(cid):
        if cid in derived or cid in zero_ids:
            return None
        k = first[cid]
        return Quantifier(stages[k - 1][1], k)

    return Diagram(last.name, [replace(n, quantifier=q(n.id)) for n in last.nodes],
                   [replace(a, quantifier=q(a.id)) for a in last.arrows], last.noncommute)


# ---------------------------------------------------------------- context inference


_HOMFUNCTOR = re.compile(r"^(?P<cat>.+?)\((?P<obj>.+?),\s*(?P<pre>.*?)[−-]\)$")
_TOKENS = re.compile(r"[^\W\d_][\w'′]*")


@dataclass(frozen=True)
class Decl:
    name: str
    sort: str  # category | functor | object | morphism | functor-valued | bijection
    type: str = ""
    id: str = ""

    def render(self):
        if self.sort == "category":
            return f"{self.name} is a category"
        if self.sort == "object":
            return f"{self.name} ∈ {self.type}"
        if self.sort == "bijection":
            return f"{self.name} : {self.type}"
        return f"{self.name} : {self.type}"


@dataclass
class TypeContext:
    """Declarations of the unquantified part, then quantified ones by stage."""

    decls: list = field(default_factory=list)
    quantified: list = field(default_factory=list)  # (flavor, stage, Decl)
    top_level: Optional[str] = None
    maximal: list = field(default_factory=list)

    def names(self):
        return [d.name for d in self.decls]

    def lines(self):
        out = [d.render() for d in self.decls]
        for flavor, stage, d in self.quantified:
            out.append(f"{SYMBOL[flavor]}{stage} {d.render()}")
        return out

    def render(self):
        return "\n".join(self.lines())

    def to_json(self):
        return {"context": [{"name": d.name, "sort": d.sort, "type": d.type, "text": d.render()}
                            for d in self.decls],
                "quantified": [{"flavor": f, "stage": s, "name": d.name, "text": d.render()}
                               for f, s, d in self.quantified],
                "top_level": self.top_level, "maximal": self.maximal}


def _category_nodes(D: Diagram) -> set:
    cats = set()
    for a in D.arrows:
        if a.kind == "functor":
            cats |= {a.src, a.tgt}
    for n in D.nodes:
        if n.type == "category" or n.name in ("Set", "𝐒𝐞𝐭"):
            cats.add(n.id)
    return cats


AMBIENT = "𝐂"


@dataclass
class Analysis:
    """Where every node lives.

    ``region[node]`` is a category-node id for objects, the string
    ``"<type>"`` for functor-valued nodes, or ``AMBIENT`` when the diagram
    has no category nodes at all.
    """

    categories: list
    functors: dict  # functor arrow id -> (source category node, target category node)
    region: dict
    node_type: dict  # node id -> rendered type string
    images: dict
    derived: set
    stages: dict


def analyze(D: Diagram) -> Analysis:
    validate(D)
    cats = _category_nodes(D)
    cat_order = [n.id for n in D.nodes if n.id in cats]
    nodes, arrows = D.node_map, D.arrow_map
    functors = {a.id: (a.src, a.tgt) for a in D.arrows if a.kind == "functor"}
    by_name = {nodes[c].name: c for c in cats}
    fun_by_name = {arrows[f].name: f for f in functors}
    region, node_type = {}, {}

    for n in D.nodes:
        if n.id in cats:
            continue
        if n.type is not None:
            if n.type in by_name:
                region[n.id] = by_name[n.type]
            elif n.type in cats:
                region[n.id] = n.type
            else:
                region[n.id] = f"<{n.type}>"
                node_type[n.id] = n.type
            continue
        m = _HOMFUNCTOR.match(n.name)
        if m and m.group("cat") in by_name:
            pre = m.group("pre").strip()
            if not pre:
                dom = m.group("cat")
            elif pre in fun_by_name:
                dom = nodes[functors[fun_by_name[pre]][0]].name
            else:
                dom = None
            if dom is not None:
                typ = f"{dom} → Set"
                region[n.id] = f"<{typ}>"
                node_type[n.id] = typ

    changed = True
    while changed:
        changed = False
        for a in D.arrows:
            if a.kind == "hom":
                for x, y in ((a.src, a.tgt), (a.tgt, a.src)):
                    if x in region and y not in region and y not in cats:
                        region[y] = region[x]
                        changed = True
            elif a.kind == "internal" and a.src in nodes:
                s_cat, t_cat = functors[a.over]
                for x, c in ((a.src, s_cat), (a.tgt, t_cat)):
                    if x not in region:
                        region[x] = c
                        changed = True
    unresolved = [n.id for n in D.nodes if n.id not in cats and n.id not in region]
    if unresolved:
        if not cats:
            for x in unresolved:
                region[x] = AMBIENT
        else:
            raise InferenceError(f"cannot infer the type of nodes {unresolved}; declare them with ': \"TYPE\"'",
                                 unresolved)
    for x, r in region.items():
        if x not in node_type:
            node_type[x] = AMBIENT if r == AMBIENT else (nodes[r].name if r in nodes else r.strip("<>"))
    return Analysis(cat_order, functors, region, node_type, _images(D), derived_components(D),
                    effective_stages(D))


def _dependencies(D: Diagram, an: Analysis) -> dict:
    nodes, arrows = D.node_map, D.arrow_map
    names = {}
    for c in D.ids():
        names.setdefault(D.component(c).name, c)
    deps = {}
    for n in D.nodes:
        d = set()
        r = an.region.get(n.id)
        if r in nodes:
            d.add(r)
        if n.id in an.images:
            d.add(an.images[n.id][0])
        if r is not None and r.startswith("<"):
            for tok in _TOKENS.findall(n.name):
                if tok in names and names[tok] != n.id:
                    d.add(names[tok])
        deps[n.id] = d
    for a in D.arrows:
        if a.kind == "internal":
            d = {a.src, a.over}
        else:
            d = {a.src, a.tgt}
        if a.id in an.images:
            d.add(an.images[a.id][0])
        deps[a.id] = d
    return deps


def infer_context(D: Diagram) -> TypeContext:
    """Default types read off the diagram, plus its top-level component."""
    an = analyze(D)
    if not D.ids():
        return TypeContext()
    nodes, arrows = D.node_map, D.arrow_map
    entries = []  # (rank, decl-order, stage, flavor, Decl)
    order = {c: i for i, c in enumerate(D.ids())}
    if AMBIENT in an.region.values():
        entries.append((0, -1, 0, None, Decl(AMBIENT, "category", id="")))
    for n in D.nodes:
        if n.id in an.images:
            continue
        if n.id in an.categories:
            d, rank = Decl(n.name, "category", id=n.id), 0
        else:
            typ = an.node_type[n.id]
            if an.region[n.id].startswith("<"):
                d, rank = Decl(n.name, "functor-valued", typ, n.id), 4
            else:
                d, rank = Decl(n.name, "object", typ, n.id), 2
        entries.append((rank, order[n.id], an.stages[n.id], n.quantifier, d))
    for a in D.arrows:
        if a.id in an.images or a.kind == "internal":
            continue
        if a.kind == "functor":
            d, rank = Decl(a.name, "functor", f"{nodes[a.src].name} → {nodes[a.tgt].name}", a.id), 1
        elif a.kind == "hom":
            src, tgt = nodes[a.src], nodes[a.tgt]
            rank = 5 if an.region[a.src].startswith("<") else 3
            d = Decl(a.name, "morphism", f"{src.name} → {tgt.name}", a.id)
        else:
            s, t = D.component(a.src), D.component(a.tgt)
            d, rank = Decl(f"{s.name} ↔ {t.name}", "bijection", "bijection", a.id), 6
        entries.append((rank, order[a.id], an.stages[a.id], a.quantifier, d))
    ctx = TypeContext()
    for rank, _, stage, q, d in sorted((e for e in entries if e[2] == 0), key=lambda e: (e[0], e[1])):
        ctx.decls.append(d)
    flavors = stage_flavors(D)
    for rank, _, stage, q, d in sorted((e for e in entries if e[2] > 0 and e[3] is not None),
                                       key=lambda e: (e[2], e[1])):
        ctx.quantified.append((flavors[stage], stage, d))
    deps = _dependencies(D, an)
    needed = set()
    for c, ds in deps.items():
        for x in ds:
            needed.add(x)
    # transitive closure is unnecessary: a component is maximal iff nothing depends on it directly
    maximal = [c for c in D.ids() if c not in needed]
    ctx.maximal = maximal
    ctx.top_level = maximal[0] if maximal else None
    return ctx


# ---------------------------------------------------------------- commutativity


@dataclass(frozen=True)
class Equation:
    """Two parallel paths (composition order) required to have equal composites."""

    lhs: tuple
    rhs: tuple
    source: str
    target: str

    def __str__(self):
        return f"{'∘'.join(self.lhs)} = {'∘'.join(self.rhs)}"


def hom_paths(D: Diagram):
    """All simple (no repeated arrow) hom-arrow paths of length ≥ 1, in composition order."""
    out_arrows = {}
    for a in D.arrows:
        if a.kind == "hom":
            out_arrows.setdefault(a.src, []).append(a)
    paths = []

    def walk(start, node, trail, used):
        for a in out_arrows.get(node, ()):
            if a.id in used:
                continue
            p = (a.id,) + trail
            paths.append((p, start, a.tgt))
            walk(start, a.tgt, p, used | {a.id})

    for n in D.nodes:
        walk(n.id, n.id, (), frozenset())
    return paths


def required_equations(D: Diagram) -> list:
    """Everything commutes by default: one equation per pair of distinct parallel paths,
    except pairs declared ``noncommute``."""
    groups = {}
    for p, s, t in hom_paths(D):
        groups.setdefault((s, t), []).append(p)
    excluded = set()
    for p, q in D.noncommute:
        excluded.add((p, q))
        excluded.add((q, p))
    eqs = []
    for (s, t), ps in groups.items():
        for p, q in itertools.combinations(ps, 2):
            if (p, q) not in excluded:
                eqs.append(Equation(p, q, s, t))
    return eqs


# ---------------------------------------------------------------- functors acting on diagrams


def map_diagram(F: FinFunctor, D: Diagram, assignment: dict) -> Diagram:
    """The image of ``D`` under ``F``: same ids and shape, expressions replaced by images.

    ``assignment`` sends every node to an object and every hom arrow to a
    morphism of ``F.source``.
    """
    missing = [n.id for n in D.nodes if n.id not in assignment]
    missing += [a.id for a in D.arrows if a.kind == "hom" and a.id not in assignment]
    if missing:
        raise MalformedError(f"assignment does not cover {missing}")
    for a in D.arrows:
        if a.kind == "hom":
            m = assignment[a.id]
            if F.source.source(m) != assignment[a.src] or F.source.target(m) != assignment[a.tgt]:
                raise MalformedError(f"arrow {a.id!r} is assigned a morphism with the wrong endpoints")
    nodes = [replace(n, expr=str(F.F0[assignment[n.id]])) for n in D.nodes]
    nodes = [replace(n, expr=None) if n.expr == n.id else n for n in nodes]
    arrows = [replace(a, label=str(F.F1[assignment[a.id]])) if a.kind == "hom" else a for a in D.arrows]
    return Diagram(D.name, nodes, arrows, D.noncommute)


def image_assignment(F: FinFunctor, D: Diagram, assignment: dict) -> dict:
    out = {}
    for n in D.nodes:
        out[n.id] = F.F0[assignment[n.id]]
    for a in D.arrows:
        if a.kind == "hom":
            out[a.id] = F.F1[assignment[a.id]]
    return out


def _atom(text):
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if len(text) >= 2 and text[0] == text[-1] == '"':
        return text[1:-1]
    return text


def parse_set_literal(text: str) -> FinSet:
    """``"{24, 25}"`` → the finite set ``{24, 25}``; ``"{}"`` or ``"∅"`` is empty."""
    t = text.strip()
    if t == "∅":
        return FinSet(())
    if not (t.startswith("{") and t.endswith("}")):
        raise ElaborationError(f"not a set literal: {text!r}")
    body = t[1:-1].strip()
    return FinSet(tuple(_atom(x) for x in body.split(","))) if body else FinSet(())


def parse_map_literal(text: str, domain: FinSet, codomain: FinSet) -> SetFunction:
    """``"24↦4, 25↦4"`` → a function; ``"24,25↦4"`` sends both atoms to 4."""
    mapping = {}
    if text.strip():
        # Split on commas, then attach bare atoms to the next "↦" clause.
        pending = []
        for piece in text.split(","):
            piece = piece.strip()
            if not piece:
                continue
            if "↦" in piece or "|->" in piece:
                lhs, rhs = re.split(r"↦|\|->", piece, maxsplit=1)
                y = _atom(rhs)
                for x in pending + [lhs]:
                    mapping[_atom(x)] = y
                pending = []
            else:
                pending.append(piece)
        if pending:
            raise ElaborationError(f"map literal {text!r} has atoms without images: {pending}")
    try:
        return SetFunction.from_mapping(domain, codomain, mapping)
    except MalformedError as e:
        raise ElaborationError(f"map literal {text!r}: {e}") from None


def elaborate_functor(D: Diagram, K: FinCategory, assignment: dict) -> SetValuedFunctor:
    """Read a Set-valued functor on ``K`` off a diagram of sets and functions.

    ``assignment`` maps each object of ``K`` to a node whose expression is a
    set literal and each generating morphism to a hom arrow whose label is a
    map literal.  Composites are computed; two paths forcing different
    values for one morphism raise ``ElaborationError``.
    """
    nodes, arrows = D.node_map, D.arrow_map
    values = {}
    for o in K.objects:
        if o not in assignment or assignment[o] not in nodes:
            raise ElaborationError(f"object {o!r} is not assigned a node")
        values[o] = parse_set_literal(nodes[assignment[o]].name)
    maps = {o_id: SetFunction.identity(values[o]) for o, o_id in K.identities.items()}
    given = {}
    for m in K.non_identities:
        if m in assignment:
            if assignment[m] not in arrows:
                raise ElaborationError(f"morphism {m!r} is assigned unknown arrow {assignment[m]!r}")
            a = arrows[assignment[m]]
            if assignment.get(K.source(m)) != a.src or assignment.get(K.target(m)) != a.tgt:
                raise ElaborationError(f"arrow {a.id!r} does not sit over morphism {m!r}")
            given[m] = parse_map_literal(a.name, values[K.source(m)], values[K.target(m)])
    maps.update(given)
    changed = True
    while changed:
        changed = False
        for (g, f), h in K.comp.items():
            if g in maps and f in maps:
                v = maps[g].after(maps[f])
                if h not in maps:
                    maps[h] = v
                    changed = True
                elif maps[h] != v:
                    raise ElaborationError(f"composite conflict at {h!r}: the pair ({g!r}, {f!r}) "
                                           f"gives {v} but {maps[h]} is already assigned")
    missing = [m for m in K.non_identities if m not in maps]
    if missing:
        raise ElaborationError(f"morphisms {missing} are neither assigned nor composites")
    F = SetValuedFunctor(K, values, maps, name=D.name)
    v = check_functor(F)
    if not v.truth:
        raise ElaborationError(f"elaborated functor breaks a law: {v.counterexample}")
    return F
