"""Law-by-law results produced by the theorem verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Integral

from .errors import TheoremViolation

PASS, FAIL, VACUOUS, BOUND = "pass", "fail", "vacuous", "bound-exceeded"


@dataclass
class Law:
    law: str
    status: str
    witness: object = None

    def as_dict(self):
        return {"law": self.law, "status": self.status, "witness": _plain(self.witness)}


@dataclass
class TheoremReport:
    theorem: str
    subject: str
    verdict: str = PASS
    laws: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    def check(self, law, ok, witness=None):
        self.laws.append(Law(law, PASS if ok else FAIL, witness))
        if not ok:
            self.verdict = FAIL
        return ok

    def note(self, law, witness=None, status=PASS):
        self.laws.append(Law(law, status, witness))

    def vacuous(self, reason):
        self.verdict = VACUOUS
        self.laws.append(Law(reason, VACUOUS))
        return self

    def done(self):
        if self.verdict == FAIL:
            failed = [law.law for law in self.laws if law.status == FAIL]
            raise TheoremViolation(f"{self.theorem} on {self.subject}: {', '.join(failed)}", self)
        return self

    @property
    def ok(self):
        return self.verdict in (PASS, VACUOUS)


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=str) if isinstance(x, (set, frozenset)) else x
        return [_plain(v) for v in items]
    if isinstance(x, (str, bool, float)) or x is None:
        return x
    if isinstance(x, Integral):
        return int(x)
    return str(x)
