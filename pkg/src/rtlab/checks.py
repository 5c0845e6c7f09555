"""Pass/fail records shared by every checker and by the report layer."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
VACUOUS = "vacuous"
NOT_APPLICABLE = "not-applicable"
# checks in this mode report facts whose hypotheses were not verified; they
# never decide a report's status
OBSERVATION = "observation"


@dataclass
class Check:
    name: str
    status: str
    margin: Fraction | int | None = None
    witness: Any = None
    note: str = ""
    mode: str = "exact"

    @property
    def ok(self) -> bool:
        return self.status in (PASS, VACUOUS, NOT_APPLICABLE)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"check": self.name, "status": self.status, "mode": self.mode}
        if self.margin is not None:
            out["margin"] = rational_json(self.margin)
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.note:
            out["note"] = self.note
        return out


def verdict(name: str, holds: bool, margin=None, witness=None, note: str = "", mode: str = "exact") -> Check:
    return Check(name, PASS if holds else FAIL, margin, witness, note, mode)


@dataclass
class Report:
    """A named bundle of checks plus free-form measured values."""

    title: str
    checks: list[Check] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def _deciding(self) -> list[Check]:
        return [c for c in self.checks if c.mode != OBSERVATION]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self._deciding())

    @property
    def status(self) -> str:
        if any(c.status == FAIL for c in self._deciding()):
            return FAIL
        if any(c.status == INCONCLUSIVE for c in self._deciding()):
            return INCONCLUSIVE
        return PASS

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "status": self.status,
            "checks": [c.to_json() for c in self.checks],
            "values": jsonable(self.values),
        }


def rational_json(x) -> dict:
    """Exact rendering ``{num, den, decimal}`` of an int or Fraction."""
    q = Fraction(x)
    return {"num": str(q.numerator), "den": str(q.denominator), "decimal": f"{float(q):.12g}"}


def jsonable(x):
    if isinstance(x, Fraction):
        return rational_json(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in seq]
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "item"):
        return jsonable(x.item())
    return str(x)


def exact(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)
