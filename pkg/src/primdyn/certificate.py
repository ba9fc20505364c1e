"""Machine-readable verdict records shared by every verifier."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
BUDGET_EXCEEDED = "budget-exceeded"
VERDICTS = (PASS, FAIL, INCONCLUSIVE, BUDGET_EXCEEDED)

# fields that legitimately differ between two otherwise identical runs
VOLATILE_FIELDS = ("timestamp", "elapsed_ms")


def to_jsonable(obj):
    """Convert Fractions, tuples and objects with ``to_json`` to plain JSON."""
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    return obj


@dataclass
class Certificate:
    claim_id: str
    parameters: dict
    verdict: str
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    tool_version: str = __version__
    timestamp: str = ""
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.witnesses:
            raise ValueError("a failing certificate needs at least one witness")
        self.parameters = to_jsonable(self.parameters)
        self.witnesses = to_jsonable(self.witnesses)
        self.notes = to_jsonable(list(self.notes))
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> dict:
        return self.to_dict()

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        return cls(**data)

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))

    def stable_dict(self) -> dict:
        d = self.to_dict()
        for k in VOLATILE_FIELDS:
            d.pop(k, None)
        return d


class Timer:
    def __init__(self):
        self.start = time.perf_counter()

    @property
    def ms(self) -> float:
        return round((time.perf_counter() - self.start) * 1000, 3)


def certify(claim_id: str, parameters: dict, failures: list, timer: Timer,
            witnesses: list | None = None, notes=(), verdict: str | None = None) -> Certificate:
    """Assemble a certificate: fail with ``failures`` as witnesses, else pass."""
    if verdict is None:
        verdict = FAIL if failures else PASS
    wit = list(failures) if failures else list(witnesses or [])
    return Certificate(claim_id, parameters, verdict, wit, list(notes), elapsed_ms=timer.ms)
