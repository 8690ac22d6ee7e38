from __future__ import annotations

from enum import Enum

from ..circuit import LOGICAL, PHYSICAL


class TaskKind(str, Enum):
    """The four generation tasks: two circuit tasks and two code tasks."""

    GEN_LOGICAL = "gen_logical"
    GEN_PHYSICAL = "gen_physical"
    CODE_FROM_LOGICAL = "code_from_logical"
    CODE_FROM_PHYSICAL = "code_from_physical"

    @property
    def is_circuit_task(self) -> bool:
        return self in (TaskKind.GEN_LOGICAL, TaskKind.GEN_PHYSICAL)

    @property
    def circuit_kind(self) -> str:
        """Kind of the circuit involved, produced or given."""
        return LOGICAL if self in (TaskKind.GEN_LOGICAL, TaskKind.CODE_FROM_LOGICAL) else PHYSICAL

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "TaskKind":
        key = text.strip().lower().replace("-", "_")
        for task in cls:
            if key in (task.value, task.name.lower(), task.label.lower().replace(" ", "")):
                return task
        compact = key.replace("_", "")
        for task in cls:
            if compact == task.value.replace("_", ""):
                return task
        raise ValueError(f"unknown task {text!r}; choose from {', '.join(t.value for t in cls)}")


_LABELS = {
    TaskKind.GEN_LOGICAL: "GenLogical",
    TaskKind.GEN_PHYSICAL: "GenPhysical",
    TaskKind.CODE_FROM_LOGICAL: "CodeFromLogical",
    TaskKind.CODE_FROM_PHYSICAL: "CodeFromPhysical",
}

TASKS = tuple(TaskKind)
CIRCUIT_TASKS = (TaskKind.GEN_LOGICAL, TaskKind.GEN_PHYSICAL)
CODE_TASKS = (TaskKind.CODE_FROM_LOGICAL, TaskKind.CODE_FROM_PHYSICAL)
