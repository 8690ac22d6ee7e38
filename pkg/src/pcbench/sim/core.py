"""Event-driven logic-level simulator hosting the firmware interpreter.

Nets are rebuilt from the circuit plus the current button states; every
state change (a pin write, an external action) triggers a full re-resolution
of net values and a diff of observable component state against the previous
snapshot.  Circuits here are small, so full recomputation stays cheap and
keeps the model obviously deterministic.

Resolution happens in three passes per net:

1. push drivers (supply and ground pins, MCU outputs, powered sensor outputs)
   decide a net outright; two disagreeing drivers give a conflict;
2. an undriven net takes the level of driven nets it reaches through
   resistors, provided they all agree;
3. an undriven net holding an ``INPUT_PULLUP`` pin reads high.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

from ..circuit import CircuitDoc, ComponentPin
from ..firmware import LOOP_START, FirmwareRuntimeError, Interpreter, Program, StepBudgetExceeded
from ..netlist import ElectricalPoint, NetPartition, build_nets
from .components import (
    CONFLICT,
    DIGIT_PATTERNS,
    FLOATING,
    HIGH,
    LOW,
    MODELS,
    ActionError,
    ComponentModel,
    Dht22,
    NetValue,
    PiezoBuzzer,
    Servo,
    SevenSegment,
    resolve_net,
    sim_bridge_table,
)
from .profile import ARDUINO_UNO, BoardProfile

INPUT, OUTPUT, INPUT_PULLUP = 0, 1, 2
# Calls that sample inputs take a little virtual time, so busy-wait loops
# such as ``while (digitalRead(b) == LOW) {}`` let the clock (and scheduled
# button presses) move forward.
INPUT_CALL_COST_US = 10
_COSTED_CALLS = frozenset({"digital_read", "analog_read", "now_micros", "serial_available",
                           "read_dht"})
_DRIVER_PASSES = 4
# Statements the firmware may execute without letting virtual time pass before
# it is declared hung.
DEFAULT_INSTANT_BUDGET = 200_000


class SimSetupError(ValueError):
    pass


class ObserveError(ValueError):
    pass


@dataclass
class McuPin:
    mode: int = INPUT
    level: int = 0
    pullup: bool = False
    duty: int | None = None
    tone_hz: int | None = None
    servo_attached: bool = False
    servo_angle: int | None = None

    def push(self) -> NetValue | None:
        if self.mode != OUTPUT:
            return None
        if self.tone_hz is not None:
            return HIGH
        if self.duty is not None:
            return HIGH if self.duty > 0 else LOW
        return HIGH if self.level else LOW


@dataclass(frozen=True)
class Event:
    t_us: int
    seq: int
    kind: str
    subject: str
    value: Any

    def to_dict(self) -> dict:
        return {"t_us": self.t_us, "kind": self.kind, "subject": self.subject,
                "value": self.value}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass(frozen=True)
class Snapshot:
    """Resolved electrical and observable state from ``t_us`` until the next snapshot."""

    t_us: int
    partition: NetPartition
    net_values: tuple[NetValue, ...]
    observables: Mapping[str, Any]

    def value_at(self, point: ElectricalPoint) -> NetValue:
        if point not in self.partition:
            return FLOATING
        return self.net_values[self.partition.net_id(point)]


@dataclass(order=True)
class _Scheduled:
    t_us: int
    seq: int
    apply: Callable[["SimInstance"], None] = field(compare=False)
    label: str = field(compare=False, default="")


def _pin_text(pins: Iterable[ComponentPin]) -> str:
    return ",".join(sorted(f"{p.component_id}.{p.pin_key}" for p in pins))


class SimInstance:
    """One simulation run: circuit, firmware, clock and event log."""

    def __init__(self, circuit: CircuitDoc, program: Program | None,
                 profile: BoardProfile = ARDUINO_UNO,
                 step_budget: int = DEFAULT_INSTANT_BUDGET):
        self.circuit = circuit
        self.program = program
        self.profile = profile
        self.clock = 0
        self.serial_out = ""
        self.serial_in = ""
        self.events: list[Event] = []
        self.errors: list[str] = []
        self.timeline: list[Snapshot] = []
        self.models: dict[str, ComponentModel] = {}
        self.mcu_ids: list[str] = []
        self._setup_components()
        self.mcu_id = self.mcu_ids[0] if self.mcu_ids else None
        self.mcu_pins = {i: McuPin() for i in range(len(profile.digital_pins)
                                                     + len(profile.analog_pins))}
        self._seq = 0
        self._actions: list[_Scheduled] = []
        self._nets_cache: dict[tuple, NetPartition] = {}
        self._prev_obs: dict[str, tuple[str, Any]] = {}
        self._conflicts: set[str] = set()
        # firmware scheduling state
        self._gen = None
        self._interp: Interpreter | None = None
        self.step_budget = step_budget
        self._pending: Any = None
        self._ready_at: int | None = None
        if program is not None:
            self._interp = Interpreter(program, profile.constants, step_budget)
            self._gen = self._interp.run()
            self._ready_at = 0
        self._recompute()

    # -- setup --------------------------------------------------------------
    def _setup_components(self) -> None:
        for comp in self.circuit.components:
            ctype = comp.canonical_type
            if comp.is_breadboard:
                continue
            if self.profile.is_mcu(ctype):
                self.mcu_ids.append(comp.id)
                continue
            cls = MODELS.get(ctype)
            if cls is None:
                raise SimSetupError(f"unsupported component type {comp.type!r} ({comp.id})")
            self.models[comp.id] = cls(comp)
        for conn in self.circuit.connections:
            for ep in conn.endpoints:
                if not isinstance(ep, ComponentPin):
                    continue
                if ep.component_id in self.mcu_ids:
                    if not self.profile.has_pin(ep.pin_key):
                        raise SimSetupError(
                            f"unknown pin {ep} for board profile {self.profile.name!r}")
                    continue
                model = self.models.get(ep.component_id)
                if model is not None and ep.pin_key not in model.pins:
                    raise SimSetupError(f"unknown pin {ep} for {model.decl.type!r}")

    # -- electrical resolution ---------------------------------------------------
    def _partition(self) -> NetPartition:
        links = []
        for cid in sorted(self.models):
            model = self.models[cid]
            for a, b in model.dynamic_links():
                links.append((model.pin(a), model.pin(b)))
        key = tuple((str(a), str(b)) for a, b in links)
        part = self._nets_cache.get(key)
        if part is None:
            # every MCU I/O pin gets a net, wired or not, so pull-ups resolve
            own = [(ComponentPin(self.mcu_id, name),) * 2
                   for name in self.profile.digital_pins + self.profile.analog_pins
                   if self.mcu_id is not None]
            part = build_nets(self.circuit, sim_bridge_table(), links + own)
            self._nets_cache[key] = part
        return part

    def _mcu_drivers(self) -> list[tuple[ComponentPin, NetValue]]:
        out = []
        for mid in self.mcu_ids:
            for name in self.profile.supply_pins:
                out.append((ComponentPin(mid, name), HIGH))
            for name in self.profile.ground_pins:
                out.append((ComponentPin(mid, name), LOW))
        if self.mcu_id is not None:
            for number, state in self.mcu_pins.items():
                level = state.push()
                if level is not None:
                    out.append((ComponentPin(self.mcu_id, self.profile.pin_name(number)), level))
        return out

    def _pullup_points(self) -> list[ComponentPin]:
        if self.mcu_id is None:
            return []
        return [ComponentPin(self.mcu_id, self.profile.pin_name(n))
                for n, s in self.mcu_pins.items() if s.mode != OUTPUT and s.pullup]

    def _resolve(self, part: NetPartition,
                 drivers: list[tuple[ComponentPin, NetValue]]) -> list[NetValue]:
        pushes: list[list[NetValue]] = [[] for _ in part.nets]
        for pin, value in drivers:
            if pin in part:
                pushes[part.net_id(pin)].append(value)
        values = [resolve_net(p) for p in pushes]
        # resistor adjacency between nets
        adj: dict[int, set[int]] = {}
        for cid in sorted(self.models):
            model = self.models[cid]
            for a, b in model.weak_links:
                pa, pb = model.pin(a), model.pin(b)
                if pa in part and pb in part:
                    na, nb = part.net_id(pa), part.net_id(pb)
                    if na != nb:
                        adj.setdefault(na, set()).add(nb)
                        adj.setdefault(nb, set()).add(na)
        weak = list(values)
        for i, v in enumerate(values):
            if v != FLOATING or i not in adj:
                continue
            seen, stack, reached = {i}, [i], set()
            while stack:
                n = stack.pop()
                for m in adj.get(n, ()):
                    if m in seen:
                        continue
                    seen.add(m)
                    if values[m] == FLOATING:
                        stack.append(m)
                    elif values[m] != CONFLICT:
                        reached.add(values[m])
            if len(reached) == 1:
                weak[i] = next(iter(reached))
        for pin in self._pullup_points():
            if pin in part:
                n = part.net_id(pin)
                if weak[n] == FLOATING:
                    weak[n] = HIGH
        return weak

    def _recompute(self) -> None:
        part = self._partition()
        base = self._mcu_drivers()
        self._part = part
        self._values = self._resolve(part, base)
        model_drivers: list = []
        for _ in range(_DRIVER_PASSES):
            new = []
            for cid in sorted(self.models):
                model = self.models[cid]
                new.extend((model.pin(p), v) for p, v in model.drivers(self))
            if new == model_drivers:
                break
            model_drivers = new
            self._values = self._resolve(part, base + model_drivers)
        self._record_snapshot()

    @property
    def nets(self) -> NetPartition:
        """Strong nets in force right now (pressed buttons included)."""
        return self._part

    def mcu_nets(self) -> list[tuple]:
        """Nets holding a microcontroller pin and at least one other point."""
        return [net for net in self._part.nets if len(net) > 1
                and any(isinstance(p, ComponentPin) and p.component_id in self.mcu_ids
                        for p in net)]

    # -- queries used by models --------------------------------------------
    def value_at(self, pin: ElectricalPoint) -> NetValue:
        if pin not in self._part:
            return FLOATING
        return self._values[self._part.net_id(pin)]

    def same_strong_net(self, a: ComponentPin, b: ComponentPin) -> bool:
        return a in self._part and b in self._part and \
            self._part.net_id(a) == self._part.net_id(b)

    def _mcu_pins_on_net(self, pin: ComponentPin) -> list[int]:
        if self.mcu_id is None or pin not in self._part:
            return []
        net = self._part.net_id(pin)
        out = []
        for number in self.mcu_pins:
            p = ComponentPin(self.mcu_id, self.profile.pin_name(number))
            if p in self._part and self._part.net_id(p) == net:
                out.append(number)
        return out

    def tone_on_net(self, pin: ComponentPin) -> int | None:
        for n in self._mcu_pins_on_net(pin):
            if self.mcu_pins[n].tone_hz is not None:
                return self.mcu_pins[n].tone_hz
        return None

    def servo_angle_on_net(self, pin: ComponentPin) -> int | None:
        for n in self._mcu_pins_on_net(pin):
            s = self.mcu_pins[n]
            if s.servo_attached and s.servo_angle is not None:
                return s.servo_angle
        return None

    # -- snapshots and events ----------------------------------------------
    def _observables(self) -> dict[str, tuple[str, Any]]:
        out: dict[str, tuple[str, Any]] = {}
        for cid in sorted(self.models):
            model = self.models[cid]
            kind = _event_kind(model)
            if kind is None:
                continue
            for subject, value in model.observe(self).items():
                out[subject] = (kind, value)
        return out

    def _emit(self, kind: str, subject: str, value: Any) -> None:
        self.events.append(Event(self.clock, self._seq, kind, subject, value))
        self._seq += 1

    def _record_snapshot(self) -> None:
        obs = self._observables()
        for subject, (kind, value) in obs.items():
            prev = self._prev_obs.get(subject, (kind, _default(kind)))[1]
            if value != prev:
                self._emit(kind, subject, value)
        self._prev_obs = obs
        conflicts = set()
        for i, v in enumerate(self._values):
            if v == CONFLICT:
                conflicts.add(_pin_text(p for p in self._part.nets[i]
                                        if isinstance(p, ComponentPin)))
        for subject in sorted(conflicts - self._conflicts):
            self._emit("conflict", subject, True)
        for subject in sorted(self._conflicts - conflicts):
            self._emit("conflict", subject, False)
        self._conflicts = conflicts
        snap = Snapshot(self.clock, self._part, tuple(self._values),
                        {k: v for k, (_, v) in obs.items()})
        if self.timeline and self.timeline[-1].t_us == self.clock:
            self.timeline[-1] = snap
        else:
            self.timeline.append(snap)

    @property
    def conflicts(self) -> set[str]:
        return set(self._conflicts)

    # -- HAL ------------------------------------------------------------------
    def _pin(self, number: int) -> McuPin:
        if number not in self.mcu_pins:
            raise FirmwareRuntimeError(
                f"pin {number} does not exist on board {self.profile.name!r}")
        return self.mcu_pins[number]

    def pin_mode(self, pin: int, mode: int) -> None:
        s = self._pin(pin)
        if mode == OUTPUT:
            s.mode = OUTPUT
        elif mode in (INPUT, INPUT_PULLUP):
            s.mode, s.pullup = INPUT, mode == INPUT_PULLUP
            s.duty = s.tone_hz = None
        else:
            raise FirmwareRuntimeError(f"pinMode with unknown mode {mode}")

    def digital_write(self, pin: int, level: int) -> None:
        s = self._pin(pin)
        if s.mode == OUTPUT:
            s.level, s.duty = level, None
        else:
            s.pullup = bool(level)

    def digital_read(self, pin: int) -> int:
        self._pin(pin)
        if self.mcu_id is None:
            return 0
        v = self.value_at(ComponentPin(self.mcu_id, self.profile.pin_name(pin)))
        return _digital(v, self.profile.logic_high_volts)

    def analog_read(self, pin: int) -> int:
        name = self.profile.analog_channel(pin)
        if name is None:
            raise FirmwareRuntimeError(f"analogRead on non-analog pin {pin}")
        if self.mcu_id is None:
            return 0
        v = self.value_at(ComponentPin(self.mcu_id, name))
        if v == HIGH:
            return 1023
        if v.kind == "analog":
            return max(0, min(1023, int(v.volts / self.profile.logic_high_volts * 1023)))
        return 0

    def analog_write(self, pin: int, value: int) -> None:
        s = self._pin(pin)
        s.mode, s.duty = OUTPUT, value

    def now_micros(self) -> int:
        return self.clock

    def sleep(self, micros: int) -> None:  # scheduling is handled by advance()
        raise NotImplementedError

    def serial_write(self, text: str) -> None:
        self.serial_out += text
        self._emit("serial", "serial", text)

    def serial_available(self) -> int:
        return len(self.serial_in)

    def serial_read_line(self) -> str:
        line, sep, rest = self.serial_in.partition("\n")
        self.serial_in = rest if sep else ""
        return line.rstrip("\r")

    def tone(self, pin: int, hz: int) -> None:
        s = self._pin(pin)
        s.mode, s.tone_hz = OUTPUT, hz

    def no_tone(self, pin: int) -> None:
        s = self._pin(pin)
        s.tone_hz = None
        s.level = 0

    def servo_attach(self, pin: int) -> None:
        s = self._pin(pin)
        s.servo_attached = True
        if s.servo_angle is None:
            s.servo_angle = 90

    def servo_write(self, pin: int, degrees: int) -> None:
        s = self._pin(pin)
        if s.servo_attached:
            s.servo_angle = degrees

    def read_dht(self, pin: int, field: str) -> float:
        self._pin(pin)
        if self.mcu_id is None:
            return math.nan
        mcu_pin = ComponentPin(self.mcu_id, self.profile.pin_name(pin))
        for cid in sorted(self.models):
            model = self.models[cid]
            if isinstance(model, Dht22) and self.same_strong_net(model.pin("sda"), mcu_pin):
                return model.read(self, field)
        return math.nan

    # -- scheduling -----------------------------------------------------------
    def schedule(self, t_us: int, apply: Callable[["SimInstance"], None], label: str = "") -> None:
        if t_us < self.clock:
            raise ValueError(f"cannot schedule at {t_us} us, clock is already {self.clock} us")
        self._actions.append(_Scheduled(t_us, self._seq, apply, label))
        self._seq += 1
        self._actions.sort()

    def apply_action(self, component: str | None, action: str, **kwargs: Any) -> None:
        """Apply an external action now: press, release, set_analog, set_sensor, serial_send."""
        if action == "serial_send":
            self.serial_in += str(kwargs["text"])
            return
        model = self.models.get(component or "")
        if model is None:
            raise ActionError(f"unknown component {component!r}")
        model.apply(action, **kwargs)
        self._recompute()

    def _halt(self, exc: Exception) -> None:
        message = str(exc)
        self.errors.append(message)
        self._emit("error", "firmware", message)
        self._gen = None
        self._ready_at = None

    def _run_firmware(self) -> None:
        """Run the firmware at the current clock until it must wait."""
        self._interp.step_budget = self._interp.steps + self.step_budget
        try:
            self._run_firmware_inner()
        except StepBudgetExceeded as exc:
            raise StepBudgetExceeded(
                f"firmware ran {self.step_budget} statements without letting time pass",
                None) from exc

    def _run_firmware_inner(self) -> None:
        request = self._pending
        result: Any = None
        if request is not None:
            result = getattr(self, request.name)(*request.args)
        self._pending = None
        while True:
            request = self._gen.send(result)
            result = None
            if request is LOOP_START:
                continue
            name = request.name
            if name == "sleep":
                self._ready_at = self.clock + request.args[0]
                return
            if name in _COSTED_CALLS:
                self._pending = request
                self._ready_at = self.clock + INPUT_CALL_COST_US
                return
            before = self._mcu_state()
            result = getattr(self, name)(*request.args)
            if self._mcu_state() != before:
                self._recompute()

    def _mcu_state(self) -> tuple:
        return tuple((s.mode, s.level, s.pullup, s.duty, s.tone_hz, s.servo_attached,
                      s.servo_angle) for s in self.mcu_pins.values())

    def advance(self, until: int) -> list[Event]:
        """Run to ``until`` µs.  Actions at a given instant apply before the firmware runs.

        A firmware runtime error is logged, stops the firmware and is re-raised;
        later calls keep the clock and external actions moving.
        """
        if until < self.clock:
            raise ValueError(f"cannot advance backwards from {self.clock} to {until}")
        start = len(self.events)
        while True:
            next_action = self._actions[0].t_us if self._actions else None
            ready = self._ready_at
            if next_action is not None and next_action <= until and (
                    ready is None or next_action <= ready):
                item = self._actions.pop(0)
                self.clock = item.t_us
                item.apply(self)
                continue
            if ready is not None and ready <= until:
                self.clock = ready
                try:
                    self._run_firmware()
                except FirmwareRuntimeError as exc:
                    self._halt(exc)
                    raise
                continue
            break
        self.clock = until
        return self.events[start:]

    # -- observation -------------------------------------------------------
    def snapshot_at(self, t_us: int) -> Snapshot:
        """State in force at ``t_us`` (the last change at or before it)."""
        best = self.timeline[0]
        for snap in self.timeline:
            if snap.t_us <= t_us:
                best = snap
            else:
                break
        return best

    def snapshots_between(self, t0: int, t1: int) -> list[Snapshot]:
        out = [self.snapshot_at(t0)]
        out.extend(s for s in self.timeline if t0 < s.t_us <= t1)
        return out

    def resolve_pin(self, text: str) -> ComponentPin:
        if "." in text:
            cid, pin = text.split(".", 1)
            if cid not in self.models and cid not in self.mcu_ids:
                raise ObserveError(f"unknown component {cid!r}")
            return ComponentPin(cid, pin)
        if self.mcu_id is None or not self.profile.has_pin(text):
            raise ObserveError(f"unknown pin {text!r}")
        return ComponentPin(self.mcu_id, text)

    def model(self, component: str, kind: type | tuple[type, ...] | None = None) -> ComponentModel:
        model = self.models.get(component)
        if model is None:
            raise ObserveError(f"unknown component {component!r}")
        if kind is not None and not isinstance(model, kind):
            raise ObserveError(f"{component!r} is a {model.decl.type}, not queryable that way")
        return model

    def event_log_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.events)


def _event_kind(model: ComponentModel) -> str | None:
    if isinstance(model, Servo):
        return "servo"
    if isinstance(model, PiezoBuzzer):
        return "buzzer"
    if isinstance(model, SevenSegment):
        return "segment"
    if type(model).observe is ComponentModel.observe:
        return None
    return "led"


def _default(kind: str) -> Any:
    return {"led": False, "segment": ""}.get(kind)


def _digital(v: NetValue, logic_high: float) -> int:
    if v == HIGH:
        return 1
    if v.kind == "analog":
        return 1 if v.volts >= logic_high / 2 else 0
    return 0


def new_sim(circuit: CircuitDoc, program: Program | None,
            profile: BoardProfile = ARDUINO_UNO,
            step_budget: int = DEFAULT_INSTANT_BUDGET) -> SimInstance:
    return SimInstance(circuit, program, profile, step_budget)


def advance(sim: SimInstance, until: int) -> list[Event]:
    return sim.advance(until)


_QUERIES = ("led_lit", "servo_angle", "serial_output", "pin_level", "buzzer_active",
            "buzzer_frequency", "seven_segment_digit", "seven_segment_pattern")


def serial_text_at(sim: SimInstance, t_us: int) -> str:
    return "".join(e.value for e in sim.events if e.kind == "serial" and e.t_us <= t_us)


def observe_snapshot(sim: SimInstance, snap: Snapshot, query: str, target: str | None = None) -> Any:
    """Answer a component or pin query against one snapshot (not ``serial_output``)."""
    if query not in _QUERIES or query == "serial_output":
        raise ObserveError(f"unknown query {query!r}")
    if target is None:
        raise ObserveError(f"{query} needs a target")
    if query == "pin_level":
        pin = sim.resolve_pin(target)
        return _digital(snap.value_at(pin), sim.profile.logic_high_volts)
    if query == "led_lit":
        cid = target.split(".", 1)[0]
        model = sim.model(cid)
        if _event_kind(model) != "led" or target not in snap.observables:
            raise ObserveError(f"{target!r} is not an LED output")
        return bool(snap.observables[target])
    if query == "servo_angle":
        return snap.observables[sim.model(target, Servo).id]
    if query in ("buzzer_active", "buzzer_frequency"):
        hz = snap.observables[sim.model(target, PiezoBuzzer).id]
        return hz if query == "buzzer_frequency" else hz is not None
    pattern = snap.observables[sim.model(target, SevenSegment).id]
    if query == "seven_segment_pattern":
        return pattern
    return DIGIT_PATTERNS.get(pattern)


def observe(sim: SimInstance, query: str, target: str | None = None) -> Any:
    """Pure read of the current state, e.g. ``observe(sim, "led_lit", "led1")``."""
    if query == "serial_output":
        return sim.serial_out
    return observe_snapshot(sim, sim.timeline[-1], query, target)


__all__ = [
    "Event", "INPUT_CALL_COST_US", "McuPin", "ObserveError", "SimInstance", "SimSetupError",
    "DEFAULT_INSTANT_BUDGET", "Snapshot", "advance", "new_sim", "observe", "observe_snapshot", "serial_text_at",
]
