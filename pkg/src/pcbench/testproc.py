"""Timed test procedures: scripted inputs plus assertions over a simulation.

A procedure is JSON::

    {"timeout_ms": 1000,
     "steps": [{"at_ms": 100, "action": {"press": "button1"}},
               {"at_ms": 150, "assert": {"led_lit": "led1", "expected": true,
                                         "window_ms": 50}}]}

Actions are queued on the simulator up front; the run then proceeds to the
timeout and assertions are checked against the recorded state timeline.
An assertion with ``window_ms`` passes if it holds at any moment in
``[at_ms, at_ms + window_ms]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

from .circuit import CircuitDoc
from .firmware import FirmwareRuntimeError, Program, StepBudgetExceeded
from .sim import (
    ARDUINO_UNO,
    DEFAULT_INSTANT_BUDGET,
    ActionError,
    BoardProfile,
    Event,
    ObserveError,
    SimInstance,
    SimSetupError,
    new_sim,
    observe_snapshot,
    serial_text_at,
)
from .sim.components import Button, Dht22, _AnalogSource


class TestProcError(ValueError):
    __test__ = False  # not a pytest class


# kind -> fields required besides the kind key itself
ACTION_KINDS = {
    "press": (),
    "release": (),
    "set_analog": ("volts",),
    "set_sensor": ("field", "value"),
    "serial_send": (),
}
ASSERT_KINDS = {
    "led_lit": ("expected",),
    "pin_level": ("expected",),
    "serial_contains": (),
    "serial_line_equals": ("text",),
    "servo_angle": ("degrees",),
    "buzzer_active": ("expected",),
    "seven_segment_shows": ("digit",),
}
_ACTION_MODELS = {"press": Button, "release": Button, "set_analog": _AnalogSource,
                  "set_sensor": Dht22}


@dataclass(frozen=True)
class Action:
    kind: str
    target: str | None = None
    params: dict = field(default_factory=dict, hash=False)

    def to_dict(self) -> dict:
        if self.kind == "serial_send":
            return {"serial_send": self.params["text"]}
        return {self.kind: self.target, **self.params}


@dataclass(frozen=True)
class Assertion:
    kind: str
    target: Any
    params: dict = field(default_factory=dict, hash=False)
    window_ms: float = 0.0

    def to_dict(self) -> dict:
        out = {self.kind: self.target, **self.params}
        if self.window_ms:
            out["window_ms"] = self.window_ms
        return out


@dataclass(frozen=True)
class Step:
    at_ms: float
    payload: Action | Assertion

    @property
    def is_action(self) -> bool:
        return isinstance(self.payload, Action)


@dataclass(frozen=True)
class TestProcedure:
    __test__ = False
    timeout_ms: float
    steps: tuple[Step, ...] = ()

    def to_dict(self) -> dict:
        return {"timeout_ms": self.timeout_ms, "steps": [
            {"at_ms": s.at_ms, ("action" if s.is_action else "assert"): s.payload.to_dict()}
            for s in self.steps]}


@dataclass
class FailedStep:
    index: int
    at_ms: float
    assertion: dict
    expected: Any
    observed: Any

    def to_dict(self) -> dict:
        return {"step": self.index, "at_ms": self.at_ms, "assert": self.assertion,
                "expected": self.expected, "observed": self.observed}


@dataclass
class Verdict:
    failed_steps: list[FailedStep] = field(default_factory=list)
    sim_errors: list[str] = field(default_factory=list)
    timed_out: bool = False
    trace: list[Event] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return not self.failed_steps and not self.sim_errors and not self.timed_out

    def to_dict(self, include_trace: bool = False) -> dict:
        out = {"passed": self.passed,
               "failed_steps": [f.to_dict() for f in self.failed_steps],
               "sim_errors": list(self.sim_errors),
               "timed_out": self.timed_out}
        if include_trace:
            out["trace"] = [e.to_dict() for e in self.trace]
        return out

    def to_json(self, indent: int | None = None, include_trace: bool = False) -> str:
        return json.dumps(self.to_dict(include_trace), indent=indent)

    @classmethod
    def setup_failure(cls, reason: str) -> "Verdict":
        return cls(sim_errors=[f"setup: {reason}"])


def _number(raw: Any, what: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise TestProcError(f"{what} must be a number, got {raw!r}")
    return float(raw) if isinstance(raw, float) else raw


def _parse_action(raw: Any, where: str) -> Action:
    if not isinstance(raw, dict):
        raise TestProcError(f"{where}: action must be an object")
    kinds = [k for k in raw if k in ACTION_KINDS]
    if len(kinds) != 1:
        raise TestProcError(f"{where}: action needs exactly one of {sorted(ACTION_KINDS)}, "
                            f"got {sorted(raw)}")
    kind = kinds[0]
    required = ACTION_KINDS[kind]
    params = {k: v for k, v in raw.items() if k != kind}
    missing = [r for r in required if r not in params]
    if missing:
        raise TestProcError(f"{where}: {kind} needs {', '.join(missing)}")
    if kind == "serial_send":
        if not isinstance(raw[kind], str):
            raise TestProcError(f"{where}: serial_send text must be a string")
        return Action(kind, None, {"text": raw[kind]})
    if not isinstance(raw[kind], str):
        raise TestProcError(f"{where}: {kind} target must be a component id")
    if kind == "set_analog":
        v = _number(params["volts"], f"{where}: volts")
        if not 0 <= v <= 5:
            raise TestProcError(f"{where}: volts must lie in 0-5")
    if kind == "set_sensor":
        _number(params["value"], f"{where}: value")
    return Action(kind, raw[kind], params)


def _parse_assertion(raw: Any, where: str) -> Assertion:
    if not isinstance(raw, dict):
        raise TestProcError(f"{where}: assert must be an object")
    kinds = [k for k in raw if k in ASSERT_KINDS]
    if len(kinds) != 1:
        raise TestProcError(f"{where}: assert needs exactly one of {sorted(ASSERT_KINDS)}, "
                            f"got {sorted(raw)}")
    kind = kinds[0]
    params = {k: v for k, v in raw.items() if k not in (kind, "window_ms")}
    missing = [r for r in ASSERT_KINDS[kind] if r not in params]
    if missing:
        raise TestProcError(f"{where}: {kind} needs {', '.join(missing)}")
    window = _number(raw.get("window_ms", 0), f"{where}: window_ms")
    if window < 0:
        raise TestProcError(f"{where}: window_ms must be >= 0")
    target = raw[kind]
    if kind == "serial_line_equals":
        if isinstance(target, bool) or not isinstance(target, int):
            raise TestProcError(f"{where}: serial_line_equals takes a line index")
    elif not isinstance(target, str):
        raise TestProcError(f"{where}: {kind} target must be a string")
    if kind == "servo_angle":
        _number(params["degrees"], f"{where}: degrees")
        tol = _number(params.setdefault("tolerance", 0), f"{where}: tolerance")
        if tol < 0:
            raise TestProcError(f"{where}: tolerance must be >= 0")
    if kind in ("led_lit", "buzzer_active") and not isinstance(params["expected"], bool):
        raise TestProcError(f"{where}: expected must be true or false")
    if kind == "pin_level":
        params["expected"] = _level(params["expected"], where)
    if kind == "seven_segment_shows" and params["digit"] is not None:
        d = params["digit"]
        if isinstance(d, bool) or not isinstance(d, int) or not 0 <= d <= 9:
            raise TestProcError(f"{where}: digit must be 0-9 or null")
    return Assertion(kind, target, params, window)


def _level(raw: Any, where: str) -> int:
    if raw in ("HIGH", "high", 1, True):
        return 1
    if raw in ("LOW", "low", 0, False):
        return 0
    raise TestProcError(f"{where}: pin level must be HIGH or LOW, got {raw!r}")


def parse_testproc_data(data: Any) -> TestProcedure:
    if not isinstance(data, dict):
        raise TestProcError("test procedure must be a JSON object")
    if "timeout_ms" not in data:
        raise TestProcError("missing timeout_ms")
    timeout = _number(data["timeout_ms"], "timeout_ms")
    raw_steps = data.get("steps", [])
    if not isinstance(raw_steps, list):
        raise TestProcError("steps must be a list")
    steps = []
    last = 0.0
    for i, raw in enumerate(raw_steps):
        where = f"step {i}"
        if not isinstance(raw, dict) or "at_ms" not in raw:
            raise TestProcError(f"{where}: needs at_ms")
        at = _number(raw["at_ms"], f"{where}: at_ms")
        if at < 0:
            raise TestProcError(f"{where}: at_ms must be >= 0")
        if at < last:
            raise TestProcError(f"{where}: at_ms {at} is earlier than the previous step ({last})")
        last = at
        has_action, has_assert = "action" in raw, "assert" in raw
        if has_action == has_assert:
            raise TestProcError(f"{where}: needs exactly one of action or assert")
        unknown = set(raw) - {"at_ms", "action", "assert"}
        if unknown:
            raise TestProcError(f"{where}: unknown keys {sorted(unknown)}")
        payload = (_parse_action(raw["action"], where) if has_action
                   else _parse_assertion(raw["assert"], where))
        steps.append(Step(at, payload))
    if timeout < last:
        raise TestProcError(f"timeout_ms {timeout} is before the last step ({last})")
    return TestProcedure(timeout, tuple(steps))


def parse_testproc(text: str) -> TestProcedure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TestProcError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    return parse_testproc_data(data)


def _us(ms: float) -> int:
    return int(round(ms * 1000))


def _action_callback(action: Action, errors: list[str], at_ms: float) -> Callable[[SimInstance], None]:
    def apply(sim: SimInstance) -> None:
        try:
            if action.kind == "serial_send":
                sim.apply_action(None, "serial_send", text=action.params["text"])
            else:
                sim.apply_action(action.target, action.kind, **action.params)
        except (ActionError, KeyError, ValueError) as exc:
            errors.append(f"action at {at_ms:g} ms: {exc}")
    return apply


def _check_action_target(sim: SimInstance, action: Action) -> str | None:
    if action.kind == "serial_send":
        return None
    model = sim.models.get(action.target)
    if model is None:
        return f"{action.kind} targets unknown component {action.target!r}"
    if not isinstance(model, _ACTION_MODELS[action.kind]):
        return f"{action.kind} is not supported by {model.decl.type} {action.target!r}"
    return None


def _holds(sim: SimInstance, a: Assertion, snap) -> tuple[bool, Any]:
    if a.kind == "led_lit":
        got = observe_snapshot(sim, snap, "led_lit", a.target)
        return got == a.params["expected"], got
    if a.kind == "pin_level":
        got = observe_snapshot(sim, snap, "pin_level", a.target)
        return got == a.params["expected"], "HIGH" if got else "LOW"
    if a.kind == "servo_angle":
        got = observe_snapshot(sim, snap, "servo_angle", a.target)
        ok = got is not None and abs(got - a.params["degrees"]) <= a.params["tolerance"]
        return ok, got
    if a.kind == "buzzer_active":
        got = observe_snapshot(sim, snap, "buzzer_active", a.target)
        return got == a.params["expected"], got
    got = observe_snapshot(sim, snap, "seven_segment_digit", a.target)
    return got == a.params["digit"], got


def _expected(a: Assertion) -> Any:
    if a.kind == "pin_level":
        return "HIGH" if a.params["expected"] else "LOW"
    if a.kind == "servo_angle":
        return f"{a.params['degrees']}+-{a.params['tolerance']}"
    if a.kind == "seven_segment_shows":
        return a.params["digit"]
    if a.kind == "serial_contains":
        return a.target
    if a.kind == "serial_line_equals":
        return a.params["text"]
    return a.params["expected"]


def _evaluate(sim: SimInstance, a: Assertion, at_ms: float, end_us: int) -> tuple[bool, Any]:
    t0 = min(_us(at_ms), end_us)
    t1 = min(_us(at_ms + a.window_ms), end_us)
    if a.kind in ("serial_contains", "serial_line_equals"):
        # serial output only grows, so the end of the window is decisive
        text = serial_text_at(sim, t1)
        if a.kind == "serial_contains":
            return a.target in text, text
        lines = text.split("\n")[:-1]
        try:
            line = lines[a.target]
        except IndexError:
            return False, None
        return line.rstrip("\r") == a.params["text"], line
    observed = None
    for snap in sim.snapshots_between(t0, t1):
        ok, got = _holds(sim, a, snap)
        if ok:
            return True, got
        if observed is None:
            observed = got
    return False, observed


def run_procedure(procedure: TestProcedure, sim: SimInstance) -> Verdict:
    """Run ``procedure`` on a fresh ``sim``; every failure is folded into the verdict."""
    verdict = Verdict()
    if sim.clock != 0:
        raise ValueError("run_procedure needs a fresh simulation")
    for i, step in enumerate(procedure.steps):
        if step.is_action:
            problem = _check_action_target(sim, step.payload)
            if problem:
                verdict.sim_errors.append(f"step {i}: {problem}")
                continue
            sim.schedule(_us(step.at_ms), _action_callback(step.payload, verdict.sim_errors,
                                                          step.at_ms), step.payload.kind)
    end_us = _us(procedure.timeout_ms)
    while sim.clock < end_us or sim.clock == 0:
        try:
            sim.advance(end_us)
            break
        except StepBudgetExceeded as exc:
            verdict.timed_out = True
            verdict.sim_errors.append(f"firmware hung at {sim.clock / 1000:g} ms: {exc.message}")
        except FirmwareRuntimeError as exc:
            verdict.sim_errors.append(f"firmware runtime error at {sim.clock / 1000:g} ms: {exc}")
    for e in sim.events:
        if e.kind == "conflict" and e.value:
            verdict.sim_errors.append(f"short circuit at {e.t_us / 1000:g} ms on net {e.subject}")
    for i, step in enumerate(procedure.steps):
        if step.is_action:
            continue
        a = step.payload
        try:
            ok, observed = _evaluate(sim, a, step.at_ms, end_us)
        except ObserveError as exc:
            ok, observed = False, f"error: {exc}"
        if not ok:
            verdict.failed_steps.append(FailedStep(i, step.at_ms, a.to_dict(), _expected(a),
                                                   observed))
    verdict.trace = list(sim.events)
    return verdict


def simulate(circuit: CircuitDoc, program: Program, procedure: TestProcedure,
             profile: BoardProfile = ARDUINO_UNO,
             step_budget: int = DEFAULT_INSTANT_BUDGET) -> Verdict:
    """Build a simulation and run ``procedure`` on it; setup problems become a failed verdict."""
    try:
        sim = new_sim(circuit, program, profile, step_budget)
    except SimSetupError as exc:
        return Verdict.setup_failure(str(exc))
    return run_procedure(procedure, sim)


__all__ = [
    "Action", "Assertion", "FailedStep", "Step", "TestProcError", "TestProcedure", "Verdict",
    "parse_testproc", "parse_testproc_data", "run_procedure", "simulate",
]
