from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .dataset import ProjectBundle
from .tasks import TaskKind

PLACEHOLDERS = {
    "description": "{Project Description Text}",
    "logical": "{Standardized Logical Diagram JSON}",
    "physical": "{Standardized Physical Diagram JSON}",
    "code": "{Sketch Code Text}",
}

_COT_BRIDGE = (
    "Work in two stages. First solve the logical design task below and write out the "
    "logical circuit JSON. Then solve the physical layout task that follows it, using "
    "your logical circuit as the plan. End your answer with the physical layout JSON in "
    "its own ```json block."
)
_COT_SEPARATOR = "\n\n----------------------------------------\n\n"


@dataclass(frozen=True)
class PromptOptions:
    chain_of_thought: bool = False


@lru_cache(maxsize=None)
def load_template(task: TaskKind) -> str:
    path = resources.files("pcbench.data").joinpath("templates", f"{task.value}.md")
    return path.read_text(encoding="utf-8")


def fill_template(template: str, values: dict[str, str]) -> str:
    """Substitute the placeholders that appear; text without placeholders is unchanged."""
    out = template
    for key, marker in PLACEHOLDERS.items():
        if key in values:
            out = out.replace(marker, values[key].strip())
    return out


def _values(project: ProjectBundle) -> dict[str, str]:
    return {"description": project.description, "logical": project.logical_text,
            "physical": project.physical_text, "code": project.firmware}


def build_prompt(project: ProjectBundle, task: TaskKind,
                 options: PromptOptions = PromptOptions()) -> str:
    """Prompt text for ``task`` on ``project``.

    With ``chain_of_thought`` a physical-circuit task is preceded by the
    logical-circuit task so the model drafts the logical circuit first; other
    tasks are unaffected by the option.
    """
    values = _values(project)
    text = fill_template(load_template(task), values)
    if options.chain_of_thought and task is TaskKind.GEN_PHYSICAL:
        first = fill_template(load_template(TaskKind.GEN_LOGICAL), values)
        text = _COT_BRIDGE + _COT_SEPARATOR + first + _COT_SEPARATOR + text
    return text


def feedback_prompt(failure_log: str) -> str:
    return ("Your previous answer did not pass evaluation. The structured failure log "
            "follows.\n```json\n" + failure_log.strip() + "\n```\n"
            "Please return a corrected answer in the same output format as before.")
