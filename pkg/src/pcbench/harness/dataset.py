"""Project bundles on disk.

A dataset root holds one directory per project::

    <root>/<project>/description.md
                    /logical.json
                    /physical.json
                    /firmware.pcfw
                    /testproc.json
                    /meta.json        {"level": 1..4, "mutants": {...}}
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..circuit import LOGICAL, PHYSICAL, CircuitDoc, CircuitParseError, parse_circuit
from ..firmware import FirmwareProgramError, FirmwareSyntaxError, Program, parse_program
from ..sim import ARDUINO_UNO, BoardProfile
from ..testproc import TestProcedure, TestProcError, parse_testproc
from .tasks import TaskKind

DATASET_ENV = "PCBENCH_DATASET"
BUNDLE_FILES = ("description.md", "logical.json", "physical.json", "firmware.pcfw",
                "testproc.json", "meta.json")
LEVELS = (1, 2, 3, 4)


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class ProjectBundle:
    id: str
    level: int
    description: str
    logical: CircuitDoc
    physical: CircuitDoc
    firmware: str
    program: Program
    testproc: TestProcedure
    meta: dict = field(default_factory=dict, hash=False, compare=False)
    # original file texts, inlined verbatim into prompts
    logical_text: str = ""
    physical_text: str = ""

    def reference_artifact(self, task: TaskKind) -> str:
        """What a perfect answer to ``task`` looks like."""
        return {
            TaskKind.GEN_LOGICAL: self.logical_text,
            TaskKind.GEN_PHYSICAL: self.physical_text,
            TaskKind.CODE_FROM_LOGICAL: self.firmware,
            TaskKind.CODE_FROM_PHYSICAL: self.firmware,
        }[task]

    def circuit(self, kind: str) -> CircuitDoc:
        return self.logical if kind == LOGICAL else self.physical


def bundled_root() -> Path:
    return Path(str(resources.files("pcbench.data").joinpath("projects")))


def default_root() -> Path:
    env = os.environ.get(DATASET_ENV)
    return Path(env) if env else bundled_root()


def load_project(folder: str | Path, profile: BoardProfile = ARDUINO_UNO) -> ProjectBundle:
    folder = Path(folder)
    missing = [n for n in BUNDLE_FILES if not (folder / n).is_file()]
    if missing:
        raise DatasetError(f"{folder.name}: missing {', '.join(missing)}")
    read = lambda name: (folder / name).read_text(encoding="utf-8")  # noqa: E731
    try:
        meta = json.loads(read("meta.json"))
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{folder.name}: meta.json: {exc.msg}") from None
    level = meta.get("level") if isinstance(meta, dict) else None
    if level not in LEVELS:
        raise DatasetError(f"{folder.name}: meta.json level must be one of {LEVELS}")
    stage = "logical.json"
    try:
        logical_text = read("logical.json")
        logical = parse_circuit(logical_text, LOGICAL)
        stage = "physical.json"
        physical_text = read("physical.json")
        physical = parse_circuit(physical_text, PHYSICAL)
        stage = "firmware.pcfw"
        firmware = read("firmware.pcfw")
        program = parse_program(firmware, profile.constants)
        stage = "testproc.json"
        testproc = parse_testproc(read("testproc.json"))
    except (CircuitParseError, FirmwareSyntaxError, FirmwareProgramError, TestProcError) as exc:
        raise DatasetError(f"{folder.name}: {stage}: {exc}") from None
    return ProjectBundle(
        id=str(meta.get("id", folder.name)), level=level,
        description=read("description.md").strip(), logical=logical, physical=physical,
        firmware=firmware, program=program, testproc=testproc, meta=meta,
        logical_text=logical_text.strip(), physical_text=physical_text.strip())


def _project_dirs(root: Path) -> list[Path]:
    if not root.is_dir():
        raise DatasetError(f"dataset root {root} is not a directory")
    return sorted(p for p in root.iterdir() if p.is_dir() and (p / "meta.json").exists())


def load_dataset_lenient(root: str | Path | None = None, profile: BoardProfile = ARDUINO_UNO,
                         levels: set[int] | None = None,
                         ids: set[str] | None = None) -> tuple[list[ProjectBundle], list[str]]:
    """Load every project that parses; return the bundles and one message per failure."""
    root = Path(root) if root is not None else default_root()
    bundles, errors = [], []
    for folder in _project_dirs(root):
        if ids is not None and folder.name not in ids:
            continue
        try:
            bundle = load_project(folder, profile)
        except DatasetError as exc:
            errors.append(str(exc))
            continue
        if levels is None or bundle.level in levels:
            bundles.append(bundle)
    bundles.sort(key=lambda b: b.id)
    return bundles, errors


def load_dataset(root: str | Path | None = None, profile: BoardProfile = ARDUINO_UNO,
                 levels: set[int] | None = None,
                 ids: set[str] | None = None) -> list[ProjectBundle]:
    bundles, errors = load_dataset_lenient(root, profile, levels, ids)
    if errors:
        raise DatasetError("; ".join(errors))
    return bundles
