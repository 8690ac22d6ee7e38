"""Behavioural models of the supported parts.

Each model names its pins, the pins it ties together, what it drives onto
its nets, and what a test can observe about it.  Models read net values from
the simulator; they never store derived electrical state themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, ClassVar, Iterable

from ..circuit import ComponentDecl, ComponentPin

if TYPE_CHECKING:
    from .core import SimInstance


@dataclass(frozen=True)
class NetValue:
    kind: str  # high | low | analog | floating | conflict
    volts: float | None = None

    def __str__(self) -> str:
        return f"analog({self.volts:g}V)" if self.kind == "analog" else self.kind


HIGH = NetValue("high")
LOW = NetValue("low")
FLOATING = NetValue("floating")
CONFLICT = NetValue("conflict")


def analog(volts: float) -> NetValue:
    return NetValue("analog", float(volts))


def resolve_net(drivers: Iterable[NetValue]) -> NetValue:
    """Combine push drivers on one net: none floats, agreement wins, else conflict."""
    values = set(drivers)
    if not values:
        return FLOATING
    if len(values) == 1:
        return next(iter(values))
    return CONFLICT


class ActionError(ValueError):
    pass


class ComponentModel:
    type_names: ClassVar[tuple[str, ...]] = ()
    pins: ClassVar[tuple[str, ...]] = ()
    static_bridges: ClassVar[tuple[frozenset[str], ...]] = ()
    weak_links: ClassVar[tuple[tuple[str, str], ...]] = ()

    def __init__(self, decl: ComponentDecl):
        self.id = decl.id
        self.decl = decl

    def pin(self, name: str) -> ComponentPin:
        return ComponentPin(self.id, name)

    def dynamic_links(self) -> list[tuple[str, str]]:
        return []

    def drivers(self, sim: "SimInstance") -> list[tuple[str, NetValue]]:
        return []

    def observe(self, sim: "SimInstance") -> dict[str, Any]:
        return {}

    def apply(self, action: str, **kwargs: Any) -> None:
        raise ActionError(f"{self.decl.type} {self.id!r} does not support {action!r}")

    def powered(self, sim: "SimInstance", vcc: str = "vcc", gnd: str = "gnd") -> bool:
        return sim.value_at(self.pin(vcc)) == HIGH and sim.value_at(self.pin(gnd)) == LOW

    def _float_prop(self, name: str, default: float) -> float:
        try:
            return float(self.decl.properties.get(name, default))
        except ValueError:
            return default


def _lit(sim: "SimInstance", anode: ComponentPin, cathode: ComponentPin) -> bool:
    a, c = sim.value_at(anode), sim.value_at(cathode)
    high = a == HIGH or (a.kind == "analog" and a.volts is not None
                         and a.volts >= sim.profile.logic_high_volts / 2)
    return high and c == LOW and not sim.same_strong_net(anode, cathode)


class Led(ComponentModel):
    type_names = ("led",)
    pins = ("anode", "cathode")

    def observe(self, sim):
        return {self.id: _lit(sim, self.pin("anode"), self.pin("cathode"))}


class RgbLed(ComponentModel):
    """Common-cathode RGB LED; channels are observed as ``id.r`` etc."""

    type_names = ("rgb led",)
    pins = ("r", "g", "b", "com")

    def observe(self, sim):
        com = self.pin("com")
        return {f"{self.id}.{ch}": _lit(sim, self.pin(ch), com) for ch in ("r", "g", "b")}


class BarGraphLed(ComponentModel):
    type_names = ("bar graph led",)
    pins = tuple(f"a{i}" for i in range(1, 11)) + tuple(f"c{i}" for i in range(1, 11))

    def observe(self, sim):
        return {f"{self.id}.{i}": _lit(sim, self.pin(f"a{i}"), self.pin(f"c{i}"))
                for i in range(1, 11)}


class Resistor(ComponentModel):
    """Passes a level to an undriven net; never joins two driven nets."""

    type_names = ("resistor",)
    pins = ("pin1", "pin2")
    weak_links = (("pin1", "pin2"),)


class Button(ComponentModel):
    type_names = ("button",)
    pins = ("pin1.l", "pin1.r", "pin2.l", "pin2.r")
    static_bridges = (frozenset({"pin1.l", "pin1.r"}), frozenset({"pin2.l", "pin2.r"}))

    def __init__(self, decl):
        super().__init__(decl)
        self.pressed = False

    def dynamic_links(self):
        return [("pin1.l", "pin2.l")] if self.pressed else []

    def apply(self, action, **kwargs):
        if action not in ("press", "release"):
            super().apply(action, **kwargs)
        self.pressed = action == "press"


class PiezoBuzzer(ComponentModel):
    type_names = ("piezo buzzer",)
    pins = ("pin1", "pin2")

    def frequency(self, sim) -> int | None:
        for sig, ret in (("pin1", "pin2"), ("pin2", "pin1")):
            hz = sim.tone_on_net(self.pin(sig))
            if hz is not None and sim.value_at(self.pin(ret)) == LOW:
                return hz
        return None

    def observe(self, sim):
        return {self.id: self.frequency(sim)}


class Servo(ComponentModel):
    type_names = ("servo",)
    pins = ("pwm", "v+", "gnd")

    def angle(self, sim) -> int | None:
        if not self.powered(sim, "v+", "gnd"):
            return None
        return sim.servo_angle_on_net(self.pin("pwm"))

    def observe(self, sim):
        return {self.id: self.angle(sim)}


class _AnalogSource(ComponentModel):
    output_pin: ClassVar[str] = "sig"

    def __init__(self, decl):
        super().__init__(decl)
        self.volts = self._float_prop("volts", 0.0)

    def apply(self, action, **kwargs):
        if action != "set_analog":
            super().apply(action, **kwargs)
        volts = float(kwargs["volts"])
        if not 0.0 <= volts <= 5.0:
            raise ActionError(f"set_analog volts {volts} outside 0-5 V")
        self.volts = volts

    def drivers(self, sim):
        if not self.powered(sim):
            return []
        return [(self.output_pin, analog(self.volts))]


class Potentiometer(_AnalogSource):
    type_names = ("potentiometer",)
    pins = ("vcc", "sig", "gnd")


class PhotoresistorModule(_AnalogSource):
    """Analog output ``ao``; ``do`` reads HIGH once ``ao`` reaches half supply."""

    type_names = ("photoresistor module",)
    pins = ("vcc", "gnd", "do", "ao")
    output_pin = "ao"

    def drivers(self, sim):
        if not self.powered(sim):
            return []
        digital = HIGH if self.volts >= sim.profile.logic_high_volts / 2 else LOW
        return [("ao", analog(self.volts)), ("do", digital)]


class Dht22(ComponentModel):
    type_names = ("dht22",)
    pins = ("vcc", "sda", "nc", "gnd")

    def __init__(self, decl):
        super().__init__(decl)
        self.readings = {
            "temperature": self._float_prop("temperature", 24.0),
            "humidity": self._float_prop("humidity", 40.0),
        }

    def apply(self, action, **kwargs):
        if action != "set_sensor":
            super().apply(action, **kwargs)
        field = kwargs["field"]
        if field not in self.readings:
            raise ActionError(f"DHT22 has no field {field!r}")
        self.readings[field] = float(kwargs["value"])

    def read(self, sim, field: str) -> float:
        return self.readings[field] if self.powered(sim) else math.nan


SEGMENTS = ("a", "b", "c", "d", "e", "f", "g")
DIGIT_PATTERNS = {
    "abcdef": 0, "bc": 1, "abdeg": 2, "abcdg": 3, "bcfg": 4,
    "acdfg": 5, "acdefg": 6, "abc": 7, "abcdefg": 8, "abcdfg": 9,
}


class SevenSegment(ComponentModel):
    """Single-digit common-cathode display, observed as its lit-segment string."""

    type_names = ("7 segment display",)
    pins = SEGMENTS + ("dp", "com")

    def pattern(self, sim) -> str:
        com = self.pin("com")
        return "".join(s for s in SEGMENTS if _lit(sim, self.pin(s), com))

    def digit(self, sim) -> int | None:
        return DIGIT_PATTERNS.get(self.pattern(sim))

    def observe(self, sim):
        return {self.id: self.pattern(sim)}


MODELS: dict[str, type[ComponentModel]] = {}


def register_model(cls: type[ComponentModel]) -> type[ComponentModel]:
    for name in cls.type_names:
        MODELS[name] = cls
    return cls


for _cls in (Led, RgbLed, BarGraphLed, Resistor, Button, PiezoBuzzer, Servo, Potentiometer,
             PhotoresistorModule, Dht22, SevenSegment):
    register_model(_cls)


def sim_bridge_table() -> dict[str, tuple[frozenset[str], ...]]:
    return {name: cls.static_bridges for name, cls in MODELS.items() if cls.static_bridges}
