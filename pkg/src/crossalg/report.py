"""Pass/fail reports shared by all checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def plain(obj):
    """Convert numpy scalars/arrays and tuples into JSON-friendly values."""
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (list, tuple)):
        return [plain(o) for o in obj]
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    return obj


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None
    detail: str = ""

    def to_dict(self):
        return {"check": self.name, "pass": bool(self.passed), "witness": plain(self.witness), "detail": self.detail}


@dataclass
class Report:
    subject: str = ""
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, passed, witness=None, detail=""):
        self.checks.append(Check(name, bool(passed), None if passed else witness, detail))
        return passed

    def note(self, text):
        self.notes.append(text)

    def merge(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.detail))
        self.notes.extend(other.notes)
        return self

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.ok

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def get(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"subject": self.subject, "pass": self.ok, "results": [c.to_dict() for c in self.checks], "notes": list(self.notes)}

    def summary(self):
        lines = ["%s: %s" % (self.subject or "report", "PASS" if self.ok else "FAIL")]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            extra = "" if c.passed else "  witness=%s" % (plain(c.witness),)
            lines.append("  [%s] %s%s" % (mark, c.name, extra))
        return "\n".join(lines)


def first_nonzero(arr):
    """Index tuple of the first nonzero entry, or ``None``."""
    idx = np.argwhere(np.asarray(arr) != 0)
    if idx.size == 0:
        return None
    return tuple(int(i) for i in idx[0])


class HomotopyProfile:
    """Dimensions ``(pi0, pi1, pi2, pi3)`` with subquotient witness bases.

    ``witnesses[i]`` holds vectors (rows) in the ambient of the ``i``-th
    group whose classes form a basis of the subquotient.
    """

    def __init__(self, dims, witnesses=None, extra=None):
        self.dims = tuple(int(d) for d in dims)
        self.witnesses = witnesses or {}
        self.extra = extra or {}

    def __eq__(self, other):
        return isinstance(other, HomotopyProfile) and self.dims == other.dims

    def __hash__(self):
        return hash(self.dims)

    def __repr__(self):
        return "HomotopyProfile%r" % (self.dims,)

    def to_dict(self):
        out = {"dims": list(self.dims), "witnesses": {str(k): plain(v) for k, v in sorted(self.witnesses.items())}}
        out.update({k: plain(v) for k, v in self.extra.items()})
        return out


def subquotient(top, bottom):
    """Rows of ``top.basis`` whose classes form a basis of ``top / bottom``."""
    from .linalg import Subspace

    span = Subspace(top.p, top.n, bottom.basis)
    picked = []
    for row in top.basis:
        if not span.contains(row):
            picked.append(row)
            span = span + Subspace(top.p, top.n, row)
    if not picked:
        return np.zeros((0, top.n), dtype=np.int64)
    return np.array(picked, dtype=np.int64)
