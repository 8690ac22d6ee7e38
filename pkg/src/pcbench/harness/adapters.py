"""Sources of candidate artifacts.

Every adapter turns a :class:`GenerationRequest` into artifact text.  The
harness never looks behind that call.

* ``replay:DIR`` reads ``DIR/<project>/<task>/<trial>.txt`` (refinement turn
  k > 1 reads ``<trial>-<k>.txt``); trials are numbered from 1.
* ``exec:CMD`` runs CMD with ``{"task", "prompt", "transcript"}`` as JSON on
  stdin and expects ``{"artifact": ...}`` as JSON on stdout.
* ``http:URL`` POSTs the same JSON body and expects the same reply.
* ``reference`` echoes each project's own reference artifact.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Protocol

from .dataset import ProjectBundle
from .tasks import TaskKind


class AdapterError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenerationRequest:
    project_id: str
    task: TaskKind
    trial: int
    prompt: str
    turn: int = 1
    transcript: tuple[dict, ...] = ()

    def body(self) -> dict:
        return {"task": self.task.value, "prompt": self.prompt,
                "transcript": list(self.transcript)}


class Adapter(Protocol):
    name: str
    # maximum simultaneous calls; None means unlimited
    concurrency: int | None

    def generate(self, request: GenerationRequest) -> str: ...


def _artifact_from_reply(raw: str, source: str) -> str:
    try:
        reply = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise AdapterError(f"{source} did not return JSON: {exc.msg}") from None
    if not isinstance(reply, dict) or not isinstance(reply.get("artifact"), str):
        raise AdapterError(f'{source} reply lacks a string "artifact" field')
    return reply["artifact"]


class ReplayAdapter:
    concurrency = None

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.name = f"replay:{self.root}"
        if not self.root.is_dir():
            raise AdapterError(f"replay directory {self.root} does not exist")

    def path_for(self, request: GenerationRequest) -> Path:
        stem = str(request.trial) if request.turn == 1 else f"{request.trial}-{request.turn}"
        return self.root / request.project_id / request.task.value / f"{stem}.txt"

    def generate(self, request: GenerationRequest) -> str:
        path = self.path_for(request)
        try:
            return path.read_text(encoding="utf-8")
        except OSError as exc:
            raise AdapterError(f"no replay file {path}: {exc.strerror}") from None


class ExecAdapter:
    def __init__(self, command: str, timeout: float = 600.0, concurrency: int | None = 1):
        self.argv = shlex.split(command)
        if not self.argv:
            raise AdapterError("exec adapter needs a command")
        self.name = f"exec:{command}"
        self.timeout = timeout
        self.concurrency = concurrency

    def generate(self, request: GenerationRequest) -> str:
        try:
            proc = subprocess.run(self.argv, input=json.dumps(request.body()),
                                  capture_output=True, text=True, timeout=self.timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise AdapterError(f"{self.name}: {exc}") from None
        if proc.returncode != 0:
            tail = proc.stderr.strip().splitlines()[-1:] or [""]
            raise AdapterError(f"{self.name} exited with {proc.returncode}: {tail[0]}")
        return _artifact_from_reply(proc.stdout, self.name)


class HttpAdapter:
    def __init__(self, url: str, timeout: float = 600.0, concurrency: int | None = 1):
        self.url = url
        self.name = f"http:{url}"
        self.timeout = timeout
        self.concurrency = concurrency

    def generate(self, request: GenerationRequest) -> str:
        data = json.dumps(request.body()).encode("utf-8")
        req = urllib.request.Request(self.url, data=data, method="POST",
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                raw = resp.read().decode("utf-8")
        except (urllib.error.URLError, OSError) as exc:
            raise AdapterError(f"{self.name}: {exc}") from None
        return _artifact_from_reply(raw, self.name)


class ReferenceAdapter:
    name = "reference"
    concurrency = None

    def __init__(self, projects: Iterable[ProjectBundle]):
        self.projects = {p.id: p for p in projects}

    def generate(self, request: GenerationRequest) -> str:
        try:
            return self.projects[request.project_id].reference_artifact(request.task)
        except KeyError:
            raise AdapterError(f"reference adapter has no project {request.project_id!r}") from None


class Throttled:
    """Wraps an adapter so at most ``adapter.concurrency`` calls run at once."""

    def __init__(self, adapter: Adapter):
        self.inner = adapter
        self.name = adapter.name
        self.concurrency = adapter.concurrency
        self._sem = threading.BoundedSemaphore(adapter.concurrency) if adapter.concurrency else None

    def generate(self, request: GenerationRequest) -> str:
        if self._sem is None:
            return self.inner.generate(request)
        with self._sem:
            return self.inner.generate(request)


def parse_adapter_spec(spec: str, projects: Iterable[ProjectBundle] = (),
                       concurrency: int | None = None) -> Adapter:
    """Build an adapter from ``replay:DIR``, ``exec:CMD``, ``http:URL`` or ``reference``."""
    kind, _, arg = spec.partition(":")
    if kind == "reference" and not arg:
        return ReferenceAdapter(projects)
    if kind in ("http", "https") and arg.startswith("//"):
        return HttpAdapter(spec, concurrency=concurrency or 1)
    if not arg:
        raise AdapterError(f"adapter spec {spec!r} needs an argument after ':'")
    if kind == "replay":
        return ReplayAdapter(arg)
    if kind == "exec":
        return ExecAdapter(arg, concurrency=concurrency or 1)
    if kind == "http":
        return HttpAdapter(arg, concurrency=concurrency or 1)
    raise AdapterError(f"unknown adapter kind {kind!r}; use replay:, exec:, http: or reference")
