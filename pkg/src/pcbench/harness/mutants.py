"""Known-bad variants of a project's reference artifacts.

``meta.json`` of each bundled project names two mutations that the test
procedure must catch: a firmware pin swap and one dropped connection.
They give a replay corpus with known outcomes and act as a sanity check
that a procedure is not vacuous.
"""

from __future__ import annotations

import json

from .dataset import DatasetError, ProjectBundle
from .tasks import TaskKind


def wrong_pin_firmware(project: ProjectBundle) -> str:
    spec = project.meta.get("mutants", {}).get("firmware_wrong_pin")
    if not spec or spec["from"] not in project.firmware:
        raise DatasetError(f"{project.id}: no usable firmware_wrong_pin mutant")
    return project.firmware.replace(spec["from"], spec["to"], 1)


def dropped_connection_circuit(project: ProjectBundle, kind: str) -> str:
    """Reference circuit text of ``kind`` with the named connection removed."""
    spec = project.meta.get("mutants", {}).get("dropped_connection")
    if not spec or kind not in spec:
        raise DatasetError(f"{project.id}: no dropped_connection mutant for {kind}")
    text = project.logical_text if kind == "logical" else project.physical_text
    data = json.loads(text)
    del data["connections"][spec[kind]]
    return json.dumps(data, indent=2)


def mutant_artifact(project: ProjectBundle, task: TaskKind) -> str:
    """A candidate answer for ``task`` that the test procedure should reject."""
    if task.is_circuit_task:
        return dropped_connection_circuit(project, task.circuit_kind)
    return wrong_pin_firmware(project)
