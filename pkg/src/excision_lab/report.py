"""Verdicts and JSON helpers shared by the analyzers and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exactlin import AbelianGroup

SCHEMA = "excision-lab/v1"

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class Verdict:
    """Outcome of a check with the evidence it was based on.

    ``horizon`` marks an inconclusive result caused only by a computation
    bound (probe range, horizon, cap) rather than by unsupported input.
    """

    name: str
    status: str
    summary: str
    evidence: dict = field(default_factory=dict)
    horizon: bool = False

    def __post_init__(self):
        if self.status not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad status {self.status!r}")

    @property
    def holds(self) -> bool:
        return self.status == PASS

    @property
    def acceptable(self) -> bool:
        return self.status == PASS or (self.status == INCONCLUSIVE and self.horizon)

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "summary": self.summary,
            "evidence": to_jsonable(self.evidence),
            "horizon": self.horizon,
        }


def verdict(name: str, ok: bool, summary: str, **evidence) -> Verdict:
    return Verdict(name, PASS if ok else FAIL, summary, evidence)


def inconclusive(name: str, summary: str, horizon: bool = False, **evidence) -> Verdict:
    return Verdict(name, INCONCLUSIVE, summary, evidence, horizon)


def group_json(G: AbelianGroup) -> dict:
    return {
        "invariant_factors": list(G.invariant_factors),
        "free_rank": G.free_rank,
        "order": G.order,
        "text": G.describe(),
    }


def to_jsonable(x):
    if isinstance(x, AbelianGroup):
        return group_json(x)
    if isinstance(x, Verdict):
        return x.to_json()
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)
