"""Canonical JSON for categories, functors and natural transformations.

Field order is fixed and morphism arrays are sorted by id, so two equal
values encode to identical bytes.  Objects keep their declaration order
because that order drives every deterministic search.  Atoms are strings,
integers, or tuples; tuples are written as arrays and read back as tuples.
"""

from __future__ import annotations

import json

import jsonschema

from .errors import ArtifactError
from .fincat import (FinCategory, FinFunctor, FinSet, Morphism, NatTransf, SetFunction,
                     SetValuedFunctor, sort_key)

_ATOM = {"anyOf": [{"type": "string"}, {"type": "integer"}, {"type": "array"}]}

CATEGORY_SCHEMA = {
    "type": "object",
    "required": ["kind", "objects", "morphisms", "identities", "comp"],
    "properties": {
        "kind": {"const": "category"},
        "name": {"type": ["string", "null"]},
        "objects": {"type": "array", "items": _ATOM},
        "morphisms": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3, "items": _ATOM}},
        "identities": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _ATOM}},
        "comp": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3, "items": _ATOM}},
    },
}

SET_FUNCTOR_SCHEMA = {
    "type": "object",
    "required": ["kind", "category", "objects", "morphisms"],
    "properties": {
        "kind": {"const": "set_functor"},
        "name": {"type": ["string", "null"]},
        "category": CATEGORY_SCHEMA,
        "objects": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2,
                                                "prefixItems": [_ATOM, {"type": "array"}]}},
        "morphisms": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2,
                                                  "prefixItems": [_ATOM, {"type": "array"}]}},
    },
}

FUNCTOR_SCHEMA = {
    "type": "object",
    "required": ["kind", "source", "target", "objects", "morphisms"],
    "properties": {
        "kind": {"const": "functor"},
        "name": {"type": ["string", "null"]},
        "source": CATEGORY_SCHEMA,
        "target": CATEGORY_SCHEMA,
        "objects": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        "morphisms": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
    },
}

NAT_TRANSF_SCHEMA = {
    "type": "object",
    "required": ["kind", "source", "target", "components"],
    "properties": {
        "kind": {"const": "nat_transf"},
        "name": {"type": ["string", "null"]},
        "source": {"type": "object"},
        "target": {"type": "object"},
        "components": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
    },
}

SCHEMAS = {"category": CATEGORY_SCHEMA, "set_functor": SET_FUNCTOR_SCHEMA,
           "functor": FUNCTOR_SCHEMA, "nat_transf": NAT_TRANSF_SCHEMA}


def _atom_out(x):
    if isinstance(x, tuple):
        return [_atom_out(y) for y in x]
    return x


def _atom_in(x):
    if isinstance(x, list):
        return tuple(_atom_in(y) for y in x)
    return x


# ---------------------------------------------------------------- encoders


def encode_category(C: FinCategory) -> dict:
    comp = sorted(C.comp.items(), key=lambda kv: (sort_key(kv[0][0]), sort_key(kv[0][1])))
    return {
        "kind": "category",
        "name": C.name,
        "objects": [_atom_out(o) for o in C.objects],
        "morphisms": [[_atom_out(m.id), _atom_out(m.source), _atom_out(m.target)] for m in C.morphisms],
        "identities": [[_atom_out(o), _atom_out(C.identities[o])] for o in C.objects],
        "comp": [[_atom_out(g), _atom_out(f), _atom_out(h)] for (g, f), h in comp],
    }


def encode_set_functor(F: SetValuedFunctor) -> dict:
    C = F.source
    return {
        "kind": "set_functor",
        "name": F.name,
        "category": encode_category(C),
        "objects": [[_atom_out(o), [_atom_out(x) for x in F.onObjects[o]]] for o in C.objects],
        "morphisms": [[_atom_out(m.id), [_atom_out(y) for y in F.onMorphisms[m.id].images]]
                      for m in C.morphisms],
    }


def encode_functor(F: FinFunctor) -> dict:
    return {
        "kind": "functor",
        "name": F.name,
        "source": encode_category(F.source),
        "target": encode_category(F.target),
        "objects": [[_atom_out(a), _atom_out(F.F0[a])] for a in F.source.objects],
        "morphisms": [[_atom_out(m.id), _atom_out(F.F1[m.id])] for m in F.source.morphisms],
    }


def encode_nat_transf(T: NatTransf) -> dict:
    enc = encode_set_functor if isinstance(T.sourceF, SetValuedFunctor) else encode_functor
    comps = []
    for a in T.category.objects:
        c = T.components[a]
        comps.append([_atom_out(a), [_atom_out(y) for y in c.images] if isinstance(c, SetFunction) else _atom_out(c)])
    return {"kind": "nat_transf", "name": T.name, "source": enc(T.sourceF), "target": enc(T.targetF),
            "components": comps}


def encode(value) -> dict:
    if isinstance(value, FinCategory):
        return encode_category(value)
    if isinstance(value, SetValuedFunctor):
        return encode_set_functor(value)
    if isinstance(value, FinFunctor):
        return encode_functor(value)
    if isinstance(value, NatTransf):
        return encode_nat_transf(value)
    raise TypeError(f"no JSON encoding for {type(value).__name__}")


def dumps(value, indent=None) -> str:
    """Canonical text.  With ``indent=None`` the output is compact."""
    seps = (",", ":") if indent is None else (",", ": ")
    return json.dumps(encode(value), ensure_ascii=False, indent=indent, separators=seps)


# ---------------------------------------------------------------- decoders


def _validate(doc, kind):
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as e:
        pointer = "/" + "/".join(str(p) for p in e.absolute_path)
        raise ArtifactError(f"schema violation: {e.message}", location=pointer) from None


def decode_category(doc) -> FinCategory:
    _validate(doc, "category")
    objects = [_atom_in(o) for o in doc["objects"]]
    mors = [Morphism(_atom_in(i), _atom_in(s), _atom_in(t)) for i, s, t in doc["morphisms"]]
    ids = {_atom_in(o): _atom_in(i) for o, i in doc["identities"]}
    comp = {(_atom_in(g), _atom_in(f)): _atom_in(h) for g, f, h in doc["comp"]}
    return FinCategory(objects, mors, ids, comp, name=doc.get("name"))


def decode_set_functor(doc) -> SetValuedFunctor:
    _validate(doc, "set_functor")
    C = decode_category(doc["category"])
    vals = {_atom_in(o): FinSet(tuple(_atom_in(x) for x in xs)) for o, xs in doc["objects"]}
    maps = {}
    for m, images in doc["morphisms"]:
        m = _atom_in(m)
        if m not in C.mor:
            raise ArtifactError(f"unknown morphism {m!r}", location="/morphisms")
        src, tgt = C.source(m), C.target(m)
        if src not in vals or tgt not in vals:
            raise ArtifactError(f"morphism {m!r} has an endpoint without a value", location="/objects")
        maps[m] = SetFunction(vals[src], vals[tgt], tuple(_atom_in(y) for y in images))
    return SetValuedFunctor(C, vals, maps, name=doc.get("name"))


def decode_functor(doc) -> FinFunctor:
    _validate(doc, "functor")
    A, B = decode_category(doc["source"]), decode_category(doc["target"])
    F0 = {_atom_in(a): _atom_in(b) for a, b in doc["objects"]}
    F1 = {_atom_in(a): _atom_in(b) for a, b in doc["morphisms"]}
    return FinFunctor(A, B, F0, F1, name=doc.get("name"))


def decode_nat_transf(doc) -> NatTransf:
    _validate(doc, "nat_transf")
    F, G = decode(doc["source"]), decode(doc["target"])
    comps = {}
    for a, c in doc["components"]:
        a = _atom_in(a)
        if isinstance(F, SetValuedFunctor):
            comps[a] = SetFunction(F.onObjects[a], G.onObjects[a], tuple(_atom_in(y) for y in c))
        else:
            comps[a] = _atom_in(c)
    return NatTransf(F, G, comps, name=doc.get("name"))


_DECODERS = {"category": decode_category, "set_functor": decode_set_functor,
             "functor": decode_functor, "nat_transf": decode_nat_transf}


def decode(doc):
    if not isinstance(doc, dict) or doc.get("kind") not in _DECODERS:
        raise ArtifactError(f"unknown artifact kind {doc.get('kind') if isinstance(doc, dict) else None!r}",
                            location="/kind")
    return _DECODERS[doc["kind"]](doc)


def loads(text: str):
    return decode(json.loads(text))


# ---------------------------------------------------------------- reports


def jsonable(x):
    """Best-effort conversion of report data (witnesses, tables) to JSON values."""
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, (FinCategory, FinFunctor, SetValuedFunctor, NatTransf)):
        return encode(x)
    if isinstance(x, FinSet):
        return [jsonable(e) for e in x]
    if isinstance(x, SetFunction):
        return [[jsonable(a), jsonable(b)] for a, b in zip(x.domain, x.images)]
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        if all(isinstance(k, str) for k in x):
            return {k: jsonable(v) for k, v in x.items()}
        return [[jsonable(k), jsonable(v)] for k, v in x.items()]
    if isinstance(x, (list, tuple, set, frozenset)):
        items = list(x)
        if isinstance(x, (set, frozenset)):
            items.sort(key=sort_key)
        return [jsonable(v) for v in items]
    return str(x)
