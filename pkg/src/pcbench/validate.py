"""Structural checks on a candidate circuit against its reference."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .circuit import PHYSICAL, CircuitDoc, ComponentPin, Connection, endpoint_sort_key


class ErrorCategory(str, Enum):
    REDUNDANT_CONNECTION = "RedundantConnection"
    EXTRANEOUS_COMPONENT = "ExtraneousComponent"
    MISSING_COMPONENT = "MissingComponent"
    ISOLATED_COMPONENT = "IsolatedComponent"
    PIN_CONFLICT = "PinConflict"
    BREADBOARD_BYPASS = "BreadboardBypass"

    @property
    def physical_only(self) -> bool:
        return self in (ErrorCategory.PIN_CONFLICT, ErrorCategory.BREADBOARD_BYPASS)


CATEGORIES = tuple(ErrorCategory)


@dataclass(frozen=True)
class Finding:
    category: ErrorCategory
    subject: str
    note: str

    def to_dict(self) -> dict:
        return {"category": self.category.value, "subject": self.subject, "note": self.note}


@dataclass
class ValidationReport:
    kind: str
    findings: list[Finding] = field(default_factory=list)

    @property
    def counts(self) -> dict[ErrorCategory, int]:
        tally = Counter(f.category for f in self.findings)
        return {c: tally.get(c, 0) for c in CATEGORIES}

    @property
    def clean(self) -> bool:
        return not self.findings

    def count(self, category: ErrorCategory) -> int:
        return self.counts[category]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "counts": {c.value: n for c, n in self.counts.items()},
            "findings": [f.to_dict() for f in self.findings],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _label(conn: Connection) -> str:
    a, b = sorted(conn.endpoints, key=endpoint_sort_key)
    return f"[{a}, {b}]"


def check_redundant(circuit: CircuitDoc) -> list[Finding]:
    seen: set[frozenset] = set()
    out = []
    for conn in circuit.connections:
        if conn.key in seen:
            out.append(Finding(ErrorCategory.REDUNDANT_CONNECTION, _label(conn),
                               "connection repeats an earlier one"))
        seen.add(conn.key)
    return out


def _type_multiset(circuit: CircuitDoc, skip_breadboards: bool) -> Counter:
    return Counter(c.canonical_type for c in circuit.components
                   if not (skip_breadboards and c.is_breadboard))


def check_component_sets(candidate: CircuitDoc, reference: CircuitDoc) -> list[Finding]:
    """Extraneous and missing components, matched by type rather than id."""
    cross_kind = candidate.kind != reference.kind
    have = _type_multiset(candidate, cross_kind)
    want = _type_multiset(reference, cross_kind)
    out = []
    for ctype, n in sorted((have - want).items()):
        out += [Finding(ErrorCategory.EXTRANEOUS_COMPONENT, ctype,
                        "component type not in the reference")] * n
    for ctype, n in sorted((want - have).items()):
        out += [Finding(ErrorCategory.MISSING_COMPONENT, ctype,
                        "reference component type absent from the candidate")] * n
    return out


def check_isolated(circuit: CircuitDoc) -> list[Finding]:
    wired = {e.component_id for conn in circuit.connections for e in conn.endpoints
             if isinstance(e, ComponentPin)}
    return [Finding(ErrorCategory.ISOLATED_COMPONENT, c.id, f"{c.type} has no connections")
            for c in circuit.components if not c.is_breadboard and c.id not in wired]


def check_pin_conflicts(physical: CircuitDoc) -> list[Finding]:
    """Every hole, rail position and component pin takes a single wire.

    A literally repeated connection is the same wire listed twice; it is
    reported as redundant, not as a second wire on its endpoints.
    """
    uses: Counter = Counter()
    order = []
    seen: set[frozenset] = set()
    for conn in physical.connections:
        if conn.key in seen:
            continue
        seen.add(conn.key)
        for ep in dict.fromkeys(conn.endpoints):
            if ep not in uses:
                order.append(ep)
            uses[ep] += 1
    out = []
    for ep in order:
        out += [Finding(ErrorCategory.PIN_CONFLICT, str(ep),
                        f"{uses[ep]} connections share this point")] * (uses[ep] - 1)
    return out


def _is_bypass(conn: Connection) -> bool:
    return isinstance(conn.a, ComponentPin) and isinstance(conn.b, ComponentPin)


def check_bypass(physical: CircuitDoc) -> list[Finding]:
    return [Finding(ErrorCategory.BREADBOARD_BYPASS, _label(conn),
                    "direct pin-to-pin wire skips the breadboard")
            for conn in physical.connections if _is_bypass(conn)]


def validate(candidate: CircuitDoc, reference: CircuitDoc, kind: str | None = None) -> ValidationReport:
    kind = kind or candidate.kind
    findings = check_redundant(candidate)
    findings += check_component_sets(candidate, reference)
    findings += check_isolated(candidate)
    if kind == PHYSICAL:
        findings += check_pin_conflicts(candidate)
        findings += check_bypass(candidate)
    # connection order must not leak into the report
    findings.sort(key=lambda f: (CATEGORIES.index(f.category), f.subject))
    return ValidationReport(kind, findings)


def reports_to_csv(rows: list[tuple[str, ValidationReport]]) -> str:
    """One CSV row of category counts per labelled report."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "kind"] + [c.value for c in CATEGORIES])
    for label, report in rows:
        counts = report.counts
        writer.writerow([label, report.kind] + [counts[c] for c in CATEGORIES])
    return buf.getvalue()
