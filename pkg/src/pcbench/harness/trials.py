"""Running trials: independent samples, and the multi-turn refinement loop."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..sim import ARDUINO_UNO, BoardProfile
from .adapters import Adapter, AdapterError, GenerationRequest, Throttled
from .dataset import ProjectBundle
from .evaluate import SampleResult, evaluate_sample
from .prompts import PromptOptions, build_prompt, feedback_prompt
from .tasks import TASKS, TaskKind

log = logging.getLogger(__name__)

DEFAULT_TRIALS = 5
DEFAULT_MAX_TURNS = 5


@dataclass(frozen=True)
class TrialConfig:
    trials: int = DEFAULT_TRIALS
    parallelism: int = 1
    options: PromptOptions = field(default_factory=PromptOptions)
    profile: BoardProfile = ARDUINO_UNO

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


def run_sample(project: ProjectBundle, task: TaskKind, adapter: Adapter, trial: int,
               options: PromptOptions = PromptOptions(),
               profile: BoardProfile = ARDUINO_UNO) -> SampleResult:
    """One fresh adapter call and one fresh simulation."""
    request = GenerationRequest(project.id, task, trial, build_prompt(project, task, options))
    try:
        candidate = adapter.generate(request)
    except AdapterError as exc:
        log.warning("%s/%s trial %d: %s", project.id, task.value, trial, exc)
        return SampleResult(project.id, project.level, task, trial, error=f"adapter: {exc}")
    return evaluate_sample(project, task, candidate, trial, profile)


def _sort_key(r: SampleResult) -> tuple:
    return (r.project_id, TASKS.index(r.task), r.trial)


def collect_trials(projects: Sequence[ProjectBundle], tasks: Iterable[TaskKind],
                   adapter: Adapter, config: TrialConfig = TrialConfig()) -> list[SampleResult]:
    """All (project, task, trial) samples, in a fixed order whatever the parallelism."""
    tasks = list(tasks)
    units = [(p, t, k) for p in projects for t in tasks for k in range(1, config.trials + 1)]
    gate = Throttled(adapter)

    def one(unit):
        p, t, k = unit
        return run_sample(p, t, gate, k, config.options, config.profile)

    if config.parallelism == 1:
        results = [one(u) for u in units]
    else:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            results = list(pool.map(one, units))
    return sorted(results, key=_sort_key)


def success_rate(results: Sequence[SampleResult]) -> float:
    if not results:
        raise ValueError("no results")
    return sum(r.gated_success for r in results) / len(results)


def run_trials(project: ProjectBundle, task: TaskKind, adapter: Adapter,
               n: int = DEFAULT_TRIALS, **kwargs) -> float:
    """Gated success rate over ``n`` independent trials."""
    config = TrialConfig(trials=n, **kwargs)
    return success_rate(collect_trials([project], [task], adapter, config))


def refine_loop(project: ProjectBundle, task: TaskKind, adapter: Adapter,
                max_turns: int = DEFAULT_MAX_TURNS, trial: int = 1,
                options: PromptOptions = PromptOptions(),
                profile: BoardProfile = ARDUINO_UNO) -> SampleResult:
    """Query, evaluate, and on failure re-query with the failure log, up to ``max_turns``.

    The returned result carries the number of turns used and the whole
    transcript as alternating user/assistant messages.
    """
    if max_turns < 1:
        raise ValueError("max_turns must be >= 1")
    transcript: list[dict] = []
    prompt = build_prompt(project, task, options)
    result = SampleResult(project.id, project.level, task, trial)
    for turn in range(1, max_turns + 1):
        request = GenerationRequest(project.id, task, trial, prompt, turn, tuple(transcript))
        try:
            candidate = adapter.generate(request)
        except AdapterError as exc:
            log.warning("%s/%s turn %d: %s", project.id, task.value, turn, exc)
            result = SampleResult(project.id, project.level, task, trial,
                                  error=f"adapter: {exc}")
            transcript.append({"role": "user", "content": prompt})
            result.turns, result.transcript = turn, transcript
            return result
        transcript += [{"role": "user", "content": prompt},
                       {"role": "assistant", "content": candidate}]
        result = evaluate_sample(project, task, candidate, trial, profile)
        result.turns, result.transcript = turn, transcript
        if result.gated_success:
            break
        prompt = feedback_prompt(json.dumps(result.failure_log(), indent=2, sort_keys=True))
    return result
