from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..circuit import canonical_type


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class BoardProfile:
    """Pin inventory of a microcontroller board.

    Digital pins are numbered by position in ``digital_pins``; analog pins
    start at ``analog_base`` (A0 = 14 on an Uno).
    """

    name: str
    component_types: tuple[str, ...]
    digital_pins: tuple[str, ...]
    analog_pins: tuple[str, ...]
    analog_base: int
    supply_pins: tuple[str, ...]
    ground_pins: tuple[str, ...]
    other_pins: tuple[str, ...] = ()
    logic_high_volts: float = 5.0
    constants: dict[str, int] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        names = self.all_pins
        if len(set(names)) != len(names):
            raise ProfileError(f"profile {self.name!r} lists a pin twice")

    @property
    def all_pins(self) -> tuple[str, ...]:
        return (self.digital_pins + self.analog_pins + self.supply_pins
                + self.ground_pins + self.other_pins)

    def has_pin(self, name: str) -> bool:
        return name.lower() in self.all_pins

    def is_mcu(self, type_name: str) -> bool:
        return canonical_type(type_name) in self.component_types

    def pin_name(self, number: int) -> str | None:
        if 0 <= number < len(self.digital_pins):
            return self.digital_pins[number]
        k = number - self.analog_base
        if 0 <= k < len(self.analog_pins):
            return self.analog_pins[k]
        return None

    def analog_channel(self, number: int) -> str | None:
        """analogRead(n) accepts both A-constants and bare channel numbers."""
        k = number - self.analog_base
        if 0 <= k < len(self.analog_pins):
            return self.analog_pins[k]
        if 0 <= number < len(self.analog_pins):
            return self.analog_pins[number]
        return None


def profile_from_data(data: dict) -> BoardProfile:
    try:
        return BoardProfile(
            name=data["name"],
            component_types=tuple(canonical_type(t) for t in data["component_types"]),
            digital_pins=tuple(p.lower() for p in data["digital_pins"]),
            analog_pins=tuple(p.lower() for p in data.get("analog_pins", [])),
            analog_base=int(data.get("analog_base", len(data["digital_pins"]))),
            supply_pins=tuple(p.lower() for p in data.get("supply_pins", [])),
            ground_pins=tuple(p.lower() for p in data.get("ground_pins", [])),
            other_pins=tuple(p.lower() for p in data.get("other_pins", [])),
            logic_high_volts=float(data.get("logic_high_volts", 5.0)),
            constants={str(k): int(v) for k, v in data.get("constants", {}).items()},
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ProfileError(f"malformed board profile: {exc}") from None


def load_profile(path: str | Path) -> BoardProfile:
    return profile_from_data(json.loads(Path(path).read_text(encoding="utf-8")))


def builtin_profile(name: str = "arduino-uno") -> BoardProfile:
    text = resources.files("pcbench.data").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return profile_from_data(json.loads(text))


ARDUINO_UNO = builtin_profile()
