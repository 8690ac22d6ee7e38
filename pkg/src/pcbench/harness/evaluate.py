"""Scoring one candidate artifact against a project's references."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from ..circuit import CircuitParseError, parse_circuit
from ..firmware import FirmwareProgramError, FirmwareSyntaxError, parse_program
from ..sim import ARDUINO_UNO, BoardProfile
from ..testproc import Verdict, simulate
from ..validate import ErrorCategory, ValidationReport, validate
from .dataset import ProjectBundle
from .tasks import TaskKind

_FENCE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


def extract_artifact(text: str) -> str:
    """Body of the last fenced block if the text has one, else the whole text."""
    blocks = _FENCE.findall(text)
    if blocks:
        return blocks[-1].strip()
    return text.strip()


@dataclass
class SampleResult:
    project_id: str
    level: int
    task: TaskKind
    trial: int
    verdict: Verdict | None = None
    validation: ValidationReport | None = None
    error: str | None = None
    no_bypass: bool = True
    no_conflict: bool = True
    turns: int = 1
    transcript: list[dict] = field(default_factory=list, repr=False)

    @property
    def functional(self) -> bool:
        return self.verdict is not None and self.verdict.passed

    @property
    def gated_success(self) -> bool:
        return self.functional and self.no_bypass and self.no_conflict

    @property
    def filters(self) -> tuple[bool, bool, bool, bool]:
        """Success under: functional only, +no bypass, +no pin conflict, +both."""
        f = self.functional
        return (f, f and self.no_bypass, f and self.no_conflict,
                f and self.no_bypass and self.no_conflict)

    def failure_log(self) -> dict:
        """Structured failure information fed back during refinement."""
        return {"error": self.error,
                "verdict": self.verdict.to_dict() if self.verdict else None,
                "validation": self.validation.to_dict() if self.validation else None}

    def to_dict(self) -> dict[str, Any]:
        return {"project": self.project_id, "level": self.level, "task": self.task.value,
                "trial": self.trial, "turns": self.turns, "functional": self.functional,
                "gated_success": self.gated_success, "filters": list(self.filters),
                **self.failure_log()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def evaluate_sample(project: ProjectBundle, task: TaskKind, candidate: str, trial: int = 1,
                    profile: BoardProfile = ARDUINO_UNO) -> SampleResult:
    """Pair the candidate with the references, run the test procedure and gate the outcome.

    Circuit candidates run with the reference firmware and are validated
    against the reference circuit of the same kind; code candidates run on
    the reference circuit the task supplied.  Nothing here raises for a bad
    candidate: problems end up in the result.
    """
    result = SampleResult(project.id, project.level, task, trial)
    artifact = extract_artifact(candidate)
    kind = task.circuit_kind
    if task.is_circuit_task:
        try:
            circuit = parse_circuit(artifact, kind)
        except CircuitParseError as exc:
            result.error = f"parse: {exc}"
            return result
        program = project.program
        result.validation = validate(circuit, project.circuit(kind), kind)
        if task is TaskKind.GEN_PHYSICAL:
            counts = result.validation.counts
            result.no_bypass = counts[ErrorCategory.BREADBOARD_BYPASS] == 0
            result.no_conflict = counts[ErrorCategory.PIN_CONFLICT] == 0
    else:
        try:
            program = parse_program(artifact, profile.constants)
        except (FirmwareSyntaxError, FirmwareProgramError) as exc:
            result.error = f"parse: {exc}"
            return result
        circuit = project.circuit(kind)
    result.verdict = simulate(circuit, program, project.testproc, profile)
    return result
