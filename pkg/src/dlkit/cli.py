"""The ``dl`` command.

Exit status: 0 when the command succeeds or the checked property holds,
1 when the property is false (the counterexample is printed), 2 on usage,
input or validation errors.  ``--format json`` prints exactly one JSON
document on stdout; diagnostics always go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import serialize
from .diagram import (Diagram, extract_stages, infer_context, parse_dl, quantifier_list, required_equations)
from .enumeration import enumerate_set_functors
from .errors import ArtifactError, DLError, ValidationError
from .fincat import (FinCategory, FinFunctor, NatTransf, SetValuedFunctor, check_category, check_functor,
                     check_naturality)
from .verdict import Verdict

DEFAULT_BOUND = 3


def default_bound() -> int:
    raw = os.environ.get("DL_BOUND")
    if raw is None:
        return DEFAULT_BOUND
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"DL_BOUND must be a positive integer, not {raw!r}") from None
    if n < 1:
        raise ValidationError("DL_BOUND must be positive")
    return n


def load_artifact(path):
    """Read a ``.dl`` diagram or a JSON artifact, validating it eagerly.

    Categories must satisfy the category laws, functors must respect
    identities and composition, and transformations must be natural;
    a failure raises ``ArtifactError`` naming the law and the offending data.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".dl":
        return parse_dl(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ArtifactError(f"{path}: invalid JSON: {e.msg}", location=f"line {e.lineno}") from None
    value = serialize.decode(doc)
    _check_loaded(value, path)
    return value


def _law_failure(path, v: Verdict):
    raise ArtifactError(f"{path}: law {v.counterexample.get('check')!r} fails: {v.counterexample.get('detail')}",
                        location="")


def _check_loaded(value, path):
    cats = []
    if isinstance(value, FinCategory):
        cats = [value]
    elif isinstance(value, SetValuedFunctor):
        cats = [value.source]
    elif isinstance(value, FinFunctor):
        cats = [value.source, value.target]
    elif isinstance(value, NatTransf):
        cats = [value.category]
    for C in cats:
        v = check_category(C)
        if not v.truth:
            _law_failure(path, v)
    if isinstance(value, (SetValuedFunctor, FinFunctor)):
        v = check_functor(value)
        if not v.truth:
            _law_failure(path, v)
    if isinstance(value, NatTransf):
        v = check_naturality(value)
        if not v.truth:
            raise ArtifactError(f"{path}: naturality fails: {v.counterexample}", location="/components")


def _load_kind(path, kinds, what):
    value = load_artifact(path)
    if not isinstance(value, kinds):
        raise ArtifactError(f"{path}: expected {what}, found {type(value).__name__}", location="/kind")
    return value


# ---------------------------------------------------------------- output


class _Out:
    def __init__(self, fmt):
        self.fmt = fmt

    def emit(self, doc, human):
        if self.fmt == "json":
            print(json.dumps(serialize.jsonable(doc), ensure_ascii=False))
        else:
            print(human)


def _verdict_text(v: Verdict) -> str:
    lines = ["true" if v.truth else "false"]
    if v.truth and v.witness is not None:
        lines.append("witness: " + json.dumps(serialize.jsonable(v.witness), ensure_ascii=False))
    if not v.truth:
        lines.append("counterexample: " + json.dumps(serialize.jsonable(v.counterexample), ensure_ascii=False))
    lines += [f"note: {n}" for n in v.notes]
    return "\n".join(lines)


# ---------------------------------------------------------------- commands


def cmd_check(args, out):
    value = load_artifact(args.file)
    if isinstance(value, Diagram):
        ctx = infer_context(value)
        stages = extract_stages(value)
        eqs = required_equations(value)
        doc = {"diagram": value.name, **ctx.to_json(),
               "quantifiers": quantifier_list(stages), "equations": [str(e) for e in eqs]}
        human = ["In a context where:"] + [f"  {line}" for line in ctx.lines()]
        tops = [d.render() for d in ctx.decls + [q[2] for q in ctx.quantified] if d.id == ctx.top_level]
        if tops:
            human.append(f"top level: {tops[0]}")
        if eqs:
            human.append("commuting: " + "; ".join(str(e) for e in eqs))
        out.emit(doc, "\n".join(human))
        return 0
    desc = type(value).__name__
    out.emit({"kind": serialize.encode(value)["kind"], "valid": True}, f"{desc}: all laws hold")
    return 0


def cmd_stages(args, out):
    D = _load_kind(args.file, Diagram, "a diagram")
    stages = extract_stages(D)
    from .diagram import print_dl

    doc = {"stages": [{"index": k, "quantifier": q, "components": S.ids()} for k, (S, q) in enumerate(stages, 1)],
           "quantifiers": quantifier_list(stages), "zero": stages.zero.ids()}
    human = [f"stage 0: {', '.join(stages.zero.ids()) or '(empty)'}"]
    for k, (S, q) in enumerate(stages, 1):
        human.append(f"stage {k} [{q}]: {', '.join(S.ids())}")
    if args.print:
        human.append(print_dl(D).rstrip())
    out.emit(doc, "\n".join(human))
    return 0


def _parse_pairs(items, flag):
    pairs = {}
    for item in items or []:
        if "=" not in item:
            raise ValidationError(f"{flag} expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        pairs[k.strip()] = v.strip()
    return pairs


def _atom_lookup(cats):
    table = {}
    for C in cats:
        for o in C.objects:
            table.setdefault(str(o), o)
        for m in C.morphisms:
            table.setdefault(str(m.id), m.id)
    return table


def cmd_eval(args, out):
    from .quanteval import eval_quantified, expand_marker

    D = _load_kind(args.file, Diagram, "a diagram")
    if args.expand:
        D = expand_marker(D)
    C = _load_kind(args.cat, FinCategory, "a category") if args.cat else None
    cats = {k: _load_kind(v, FinCategory, "a category") for k, v in _parse_pairs(args.category, "--category").items()}
    funs = {k: _load_kind(v, FinFunctor, "a functor") for k, v in _parse_pairs(args.functor, "--functor").items()}
    known = [C] if C is not None else []
    known += list(cats.values()) + [F.source for F in funs.values()] + [F.target for F in funs.values()]
    table = _atom_lookup(known)
    base = {}
    for k, v in _parse_pairs(args.bind, "--bind").items():
        if v not in table:
            raise ValidationError(f"--bind {k}={v}: no object or morphism named {v!r}")
        base[k] = table[v]
    bound = args.bound or default_bound()
    v = eval_quantified(C, D, base, categories=cats, functors=funs, set_bound=bound)
    out.emit(v.to_json(), _verdict_text(v))
    return 0 if v.truth else 1


def cmd_limit(args, out):
    from .limits import colimit_set, limit_set

    H = _load_kind(args.functor, SetValuedFunctor, "a Set-valued functor")
    if args.colimit:
        cone = colimit_set(H)
        doc = {"apex": cone.apex, "injections": {str(o): f for o, f in cone.injections.items()}}
        word = "colimit"
    else:
        cone = limit_set(H)
        doc = {"apex": cone.apex, "projections": {str(o): f for o, f in cone.projections.items()}}
        word = "limit"
    human = [f"{word}: {len(cone.apex)} element(s)"] + [f"  {serialize.jsonable(x)}" for x in cone.apex]
    out.emit(doc, "\n".join(human))
    return 0


def cmd_kan(args, out):
    from .kan import kan_extension

    F = _load_kind(args.f, FinFunctor, "a functor")
    H = _load_kind(args.h, (SetValuedFunctor, FinFunctor), "a functor")
    K = kan_extension(args.dir, F, H)
    doc = serialize.encode(K.functor)
    out.emit(doc, serialize.dumps(K.functor, indent=2))
    return 0


def cmd_gm(args, out):
    from .kan import geometric_morphism

    f = _load_kind(args.f, FinFunctor, "a functor")
    gm = geometric_morphism(f)
    bound = args.bound
    Gs = list(enumerate_set_functors(f.target, bound, up_to_iso=True))
    Hs = list(enumerate_set_functors(f.source, bound, up_to_iso=True))
    v = gm.certify(Gs, Hs)
    v.notes.append(f"value sets of size ≤ {bound}, one functor per isomorphism class")
    out.emit(v.to_json(), _verdict_text(v))
    return 0 if v.truth else 1


def _object(C: FinCategory, text):
    for o in C.objects:
        if str(o) == text:
            return o
    raise ValidationError(f"no object named {text!r}")


def cmd_yoneda(args, out):
    from .yoneda import yoneda_check

    R = _load_kind(args.functor, SetValuedFunctor, "a Set-valued functor")
    objs = [_object(R.source, args.object)] if args.object else R.source.objects
    subs = {str(c): yoneda_check(R, c) for c in objs}
    v = Verdict.all_of(subs)
    out.emit(v.to_json(), _verdict_text(v))
    return 0 if v.truth else 1


def cmd_represent(args, out):
    from .yoneda import find_representation

    R = _load_kind(args.functor, SetValuedFunctor, "a Set-valued functor")
    cert = find_representation(R)
    if cert is None:
        v = Verdict.fail({"reason": "no object represents the functor"})
        out.emit(v.to_json(), _verdict_text(v))
        return 1
    doc = {"object": cert.obj, "universal_element": cert.eta, "iso": cert.beta.components,
           "universality": cert.universality.to_json()}
    out.emit(doc, f"represented by {cert.obj} with universal element {cert.eta!r}")
    return 0


def cmd_search_term(args, out):
    from .termsearch import infer_term, parse_context, parse_type, show

    ctx = parse_context(args.ctx or "")
    goal = parse_type(args.goal)
    terms = infer_term(ctx, goal, args.depth)
    out.emit({"goal": str(goal), "terms": [show(t) for t in terms]},
             "\n".join(show(t, types=args.types) for t in terms) or "(no term within the depth bound)")
    return 0 if terms else 1


def cmd_reduce(args, out):
    from .termsearch import Signature, normalize, parse_term, reduction_graph, show, stuck_terms

    sig = Signature.arithmetic(_parse_pairs(args.define, "--define"))
    t = parse_term(args.term, sig)
    if args.graph:
        rg = reduction_graph(t, sig, bound=args.bound)
        human = [f"{show(a)} ⇝ {show(b)}" for a, b in rg.graph.edges]
        human.append("sinks: " + ", ".join(show(s) for s in rg.sinks))
        human.append("confluent" if rg.confluent else "not confluent" + (" (truncated)" if rg.truncated else ""))
        out.emit(rg.to_json(), "\n".join(human))
        return 0 if rg.confluent else 1
    n = normalize(t, sig)
    stuck = stuck_terms(n, sig)
    human = show(n) + (f"\nstuck: {', '.join(show(s) for s in stuck)}" if stuck else "")
    out.emit({"normal_form": show(n), "stuck": [show(s) for s in stuck]}, human)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dl", description="Executable diagrams for finite categories.")
    p.add_argument("--format", choices=("human", "json"), default="human")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate an artifact; for diagrams print the inferred context")
    s.add_argument("file")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("stages", help="extract the stages of a quantified diagram")
    s.add_argument("file")
    s.add_argument("--print", action="store_true", help="also print the canonical diagram")
    s.set_defaults(run=cmd_stages)

    s = sub.add_parser("eval", help="evaluate a quantified diagram over a finite category")
    s.add_argument("file")
    s.add_argument("--cat", help="ambient category (JSON)")
    s.add_argument("--category", action="append", metavar="NODE=FILE", help="bind a category node")
    s.add_argument("--functor", action="append", metavar="ARROW=FILE", help="bind a functor arrow")
    s.add_argument("--bind", action="append", metavar="ID=VALUE", help="bind a stage-0 component")
    s.add_argument("--bound", type=int, help="size bound for Set nodes (default: DL_BOUND or 3)")
    s.add_argument("--expand", action="store_true", help="expand univ and pullback markers first")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("limit", help="limit (or colimit) of a Set-valued functor")
    s.add_argument("functor")
    s.add_argument("--colimit", action="store_true")
    s.set_defaults(run=cmd_limit)

    s = sub.add_parser("kan", help="pointwise Kan extension")
    s.add_argument("--dir", choices=("ran", "lan"), default="ran")
    s.add_argument("--f", required=True, help="functor to extend along (JSON)")
    s.add_argument("--h", required=True, help="functor to extend (JSON)")
    s.set_defaults(run=cmd_kan)

    s = sub.add_parser("gm", help="check the adjoint triple of a full preorder inclusion")
    s.add_argument("--f", required=True)
    s.add_argument("--bound", type=int, default=2)
    s.set_defaults(run=cmd_gm)

    s = sub.add_parser("yoneda", help="verify the Yoneda bijection for a Set-valued functor")
    s.add_argument("--functor", required=True)
    s.add_argument("--object")
    s.set_defaults(run=cmd_yoneda)

    s = sub.add_parser("represent", help="search for a representing object")
    s.add_argument("--functor", required=True)
    s.set_defaults(run=cmd_represent)

    s = sub.add_parser("search-term", help="find λ-terms of a type")
    s.add_argument("--ctx", default="")
    s.add_argument("--goal", required=True)
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--types", action="store_true", help="print binder types")
    s.set_defaults(run=cmd_search_term)

    s = sub.add_parser("reduce", help="normalize a term or draw its reduction graph")
    s.add_argument("--term", required=True)
    s.add_argument("--define", action="append", metavar="NAME=TERM")
    s.add_argument("--graph", action="store_true")
    s.add_argument("--bound", type=int, default=1000)
    s.set_defaults(run=cmd_reduce)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    for name in ("bound", "depth"):
        val = getattr(args, name, None)
        if val is not None and val < 1:
            print(f"dl: --{name} must be positive", file=sys.stderr)
            return 2
    try:
        return args.run(args, _Out(args.format))
    except (DLError, ValueError, SyntaxError, TypeError, KeyError, OSError) as e:
        print(f"dl: error: {e}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
