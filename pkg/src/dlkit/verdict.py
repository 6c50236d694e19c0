"""Outcome of a law or universal-property check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """A truth value together with the data that decided it.

    ``witness`` holds the evidence for a true verdict (for example the
    unique environment found by an exists-unique stage), ``counterexample``
    the evidence against a false one.  ``subreports`` lets one verdict be
    assembled from named partial checks.
    """

    truth: bool
    witness: Any = None
    counterexample: Any = None
    notes: list[str] = field(default_factory=list)
    subreports: dict[str, "Verdict"] = field(default_factory=dict)

    def __post_init__(self):
        if not self.truth and self.counterexample is None:
            raise ValueError("a false verdict needs a counterexample")

    def __bool__(self):
        return self.truth

    @classmethod
    def ok(cls, witness=None, notes=()):
        return cls(True, witness=witness, notes=list(notes))

    @classmethod
    def fail(cls, counterexample, notes=()):
        return cls(False, counterexample=counterexample, notes=list(notes))

    @classmethod
    def all_of(cls, subreports: dict[str, "Verdict"], notes=()):
        """Conjunction; the counterexample of the first failing part is lifted."""
        for name, sub in subreports.items():
            if not sub.truth:
                return cls(False, counterexample={"check": name, "detail": sub.counterexample},
                           notes=list(notes), subreports=dict(subreports))
        return cls(True, notes=list(notes), subreports=dict(subreports))

    def to_json(self):
        from .serialize import jsonable

        out = {"truth": self.truth}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.counterexample is not None:
            out["counterexample"] = jsonable(self.counterexample)
        if self.notes:
            out["notes"] = list(self.notes)
        if self.subreports:
            out["subreports"] = {k: v.to_json() for k, v in self.subreports.items()}
        return out
