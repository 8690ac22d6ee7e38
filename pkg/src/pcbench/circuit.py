"""Circuit documents: components plus two-ended connections.

Logical circuits wire component pins to each other directly.  Physical
circuits route wires through breadboard holes (``breadboard1.10a``) and
power-rail positions (``breadboard1.tp.1``).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Union

LOGICAL = "logical"
PHYSICAL = "physical"
KINDS = (LOGICAL, PHYSICAL)

COLUMNS = range(1, 61)
ROWS = "abcdefghij"
RAILS = ("tp", "tn", "bp", "bn")
RAIL_INDICES = range(1, 51)

_ID_RE = re.compile(r"^[a-z_]+[0-9]+$")
_HOLE_RE = re.compile(r"^([0-9]+)([a-zA-Z])$")
_RAIL_RE = re.compile(r"^(tp|tn|bp|bn)\.([0-9]+)$", re.IGNORECASE)

# Synonyms seen in generated circuits, folded onto one registry name.
_TYPE_ALIASES = {
    "arduino": "arduino uno",
    "arduino uno r3": "arduino uno",
    "push button": "button",
    "pushbutton": "button",
    "push-button": "button",
    "rgb led": "rgb led",
    "bar graph led": "bar graph led",
    "bargraph led": "bar graph led",
    "led bar graph": "bar graph led",
    "led bar": "bar graph led",
    "buzzer": "piezo buzzer",
    "piezo": "piezo buzzer",
    "servo motor": "servo",
    "dht22 sensor": "dht22",
    "dht22 temperature and humidity sensor": "dht22",
    "photoresistor": "photoresistor module",
    "photoresistor sensor": "photoresistor module",
    "photoresistor sensor module": "photoresistor module",
    "ldr": "photoresistor module",
    "7-segment display": "7 segment display",
    "seven segment display": "7 segment display",
    "7segment display": "7 segment display",
}


def canonical_type(type_name: str) -> str:
    key = " ".join(type_name.lower().replace("_", " ").split())
    return _TYPE_ALIASES.get(key, key)


def is_breadboard_type(type_name: str) -> bool:
    return canonical_type(type_name) == "breadboard"


class CircuitParseError(ValueError):
    """Raised for malformed circuit documents.

    ``position`` names where the problem sits, e.g. ``connections[2][0]``
    or ``line 3 column 7`` for JSON syntax errors.
    """

    def __init__(self, message: str, position: str = ""):
        self.message = message
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)


@dataclass(frozen=True, eq=False)
class ComponentPin:
    component_id: str
    pin: str

    @property
    def pin_key(self) -> str:
        return self.pin.lower()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComponentPin):
            return NotImplemented
        return self.component_id == other.component_id and self.pin_key == other.pin_key

    def __hash__(self) -> int:
        return hash(("pin", self.component_id, self.pin_key))

    def __str__(self) -> str:
        return f"{self.component_id}.{self.pin}"


@dataclass(frozen=True)
class Hole:
    board_id: str
    column: int
    row: str

    def __str__(self) -> str:
        return f"{self.board_id}.{self.column}{self.row}"


@dataclass(frozen=True)
class RailPos:
    board_id: str
    rail: str
    index: int

    def __str__(self) -> str:
        return f"{self.board_id}.{self.rail}.{self.index}"


Endpoint = Union[ComponentPin, Hole, RailPos]


def endpoint_sort_key(ep: Endpoint) -> tuple:
    if isinstance(ep, ComponentPin):
        return (0, ep.component_id, ep.pin_key)
    if isinstance(ep, Hole):
        return (1, ep.board_id, ep.column, ep.row)
    return (2, ep.board_id, ep.rail, ep.index)


@dataclass(frozen=True)
class ComponentDecl:
    id: str
    type: str
    properties: dict[str, str] = field(default_factory=dict, hash=False)

    @property
    def canonical_type(self) -> str:
        return canonical_type(self.type)

    @property
    def is_breadboard(self) -> bool:
        return is_breadboard_type(self.type)


@dataclass(frozen=True)
class Connection:
    a: Endpoint
    b: Endpoint

    @property
    def endpoints(self) -> tuple[Endpoint, Endpoint]:
        return (self.a, self.b)

    @property
    def key(self) -> frozenset:
        """Order-free identity: ``[A, B]`` and ``[B, A]`` share a key."""
        return frozenset((self.a, self.b))

    def __str__(self) -> str:
        return f"[{self.a}, {self.b}]"


@dataclass(frozen=True)
class CircuitStats:
    num_components: int
    num_connections: int


@dataclass(frozen=True)
class CircuitDoc:
    kind: str
    components: tuple[ComponentDecl, ...] = ()
    connections: tuple[Connection, ...] = ()

    def component(self, component_id: str) -> ComponentDecl:
        for comp in self.components:
            if comp.id == component_id:
                return comp
        raise KeyError(component_id)

    @property
    def component_ids(self) -> list[str]:
        return [c.id for c in self.components]

    @property
    def breadboards(self) -> list[ComponentDecl]:
        return [c for c in self.components if c.is_breadboard]

    def replace(self, *, components: Iterable[ComponentDecl] | None = None,
                connections: Iterable[Connection] | None = None) -> "CircuitDoc":
        return CircuitDoc(
            kind=self.kind,
            components=tuple(self.components if components is None else components),
            connections=tuple(self.connections if connections is None else connections),
        )


class _Resolver:
    """Endpoint-string resolution against a set of declared components."""

    def __init__(self, components: Iterable[ComponentDecl]):
        self.types = {c.id: c.type for c in components}
        boards = [cid for cid, t in self.types.items() if is_breadboard_type(t)]
        self.boards = set(boards)
        self.alias = boards[0] if len(boards) == 1 else None

    def board_for(self, prefix: str) -> str | None:
        if prefix in self.boards:
            return prefix
        if prefix == "breadboard" and self.alias is not None and prefix not in self.types:
            return self.alias
        return None

    def resolve(self, text: str, position: str = "") -> Endpoint:
        if not isinstance(text, str):
            raise CircuitParseError(f"endpoint must be a string, got {text!r}", position)
        head, dot, rest = text.strip().partition(".")
        if not dot or not head or not rest:
            raise CircuitParseError(f"endpoint {text!r} is not of the form 'id.pin'", position)
        board = self.board_for(head)
        if board is not None:
            return _board_endpoint(board, rest, text, position)
        if head not in self.types:
            raise CircuitParseError(f"endpoint {text!r} references undeclared component {head!r}",
                                    position)
        return ComponentPin(head, rest)


def _board_endpoint(board: str, rest: str, text: str, position: str) -> Endpoint:
    m = _HOLE_RE.match(rest)
    if m:
        column, row = int(m.group(1)), m.group(2).lower()
        if column not in COLUMNS:
            raise CircuitParseError(f"{text!r}: column {column} outside 1-60", position)
        if row not in ROWS:
            raise CircuitParseError(f"{text!r}: row {row!r} outside a-j", position)
        return Hole(board, column, row)
    m = _RAIL_RE.match(rest)
    if m:
        rail, index = m.group(1).lower(), int(m.group(2))
        if index not in RAIL_INDICES:
            raise CircuitParseError(f"{text!r}: rail index {index} outside 1-50", position)
        return RailPos(board, rail, index)
    raise CircuitParseError(f"{text!r} is not a breadboard hole or rail position", position)


def parse_endpoint(text: str, components: Iterable[ComponentDecl]) -> Endpoint:
    """Resolve one endpoint string in the context of declared components.

    >>> parse_endpoint("arduino1.pin13", [ComponentDecl("arduino1", "Arduino Uno")])
    ComponentPin(component_id='arduino1', pin='pin13')
    """
    return _Resolver(components).resolve(text)


def _parse_component(raw: Any, position: str) -> ComponentDecl:
    if not isinstance(raw, dict):
        raise CircuitParseError("component must be an object", position)
    cid, ctype = raw.get("id"), raw.get("type")
    if not isinstance(cid, str) or not _ID_RE.match(cid):
        raise CircuitParseError(f"component id {cid!r} must look like 'name' + number", position)
    if not isinstance(ctype, str) or not ctype.strip():
        raise CircuitParseError(f"component {cid!r} has an empty type", position)
    props = raw.get("properties") or {}
    if not isinstance(props, dict):
        raise CircuitParseError(f"component {cid!r} properties must be an object", position)
    # values are kept as text; component models interpret them
    props = {str(k): v if isinstance(v, str) else json.dumps(v) for k, v in props.items()}
    return ComponentDecl(cid, ctype, props)


def parse_circuit_data(data: Any, kind: str) -> CircuitDoc:
    if kind not in KINDS:
        raise ValueError(f"unknown circuit kind {kind!r}")
    if not isinstance(data, dict):
        raise CircuitParseError("top level must be an object")
    for section in ("components", "connections"):
        if not isinstance(data.get(section), list):
            raise CircuitParseError(f"missing or non-array {section!r} section", section)

    components: list[ComponentDecl] = []
    seen: set[str] = set()
    for i, raw in enumerate(data["components"]):
        comp = _parse_component(raw, f"components[{i}]")
        if comp.id in seen:
            raise CircuitParseError(f"duplicate component id {comp.id!r}", f"components[{i}]")
        seen.add(comp.id)
        components.append(comp)

    if kind == LOGICAL:
        for i, comp in enumerate(components):
            if comp.is_breadboard:
                raise CircuitParseError("breadboard component in a logical circuit",
                                        f"components[{i}]")

    resolver = _Resolver(components)
    connections: list[Connection] = []
    for i, raw in enumerate(data["connections"]):
        if not isinstance(raw, list) or len(raw) != 2:
            n = len(raw) if isinstance(raw, list) else "non-array"
            raise CircuitParseError(f"connection must have exactly two endpoints, got {n}",
                                    f"connections[{i}]")
        a, b = (resolver.resolve(s, f"connections[{i}][{j}]") for j, s in enumerate(raw))
        connections.append(Connection(a, b))

    if kind == PHYSICAL and connections and not any(c.is_breadboard for c in components):
        raise CircuitParseError("physical circuit with connections declares no breadboard")
    return CircuitDoc(kind, tuple(components), tuple(connections))


def parse_circuit(text: str, kind: str) -> CircuitDoc:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_circuit_data(data, kind)


def circuit_to_data(circuit: CircuitDoc) -> dict:
    components = []
    for comp in circuit.components:
        entry: dict[str, Any] = {"id": comp.id, "type": comp.type}
        if comp.properties:
            entry["properties"] = dict(comp.properties)
        components.append(entry)
    return {
        "components": components,
        "connections": [[str(c.a), str(c.b)] for c in circuit.connections],
    }


def serialize_circuit(circuit: CircuitDoc, indent: int | None = None) -> str:
    data = circuit_to_data(circuit)
    if indent is None:
        return json.dumps(data, separators=(",", ":"))
    return json.dumps(data, indent=indent)


def circuit_stats(circuit: CircuitDoc) -> CircuitStats:
    return CircuitStats(len(circuit.components), len(circuit.connections))


def detect_kind(text: str) -> str:
    """Guess the kind of a circuit file: physical iff it declares a breadboard."""
    try:
        data = json.loads(text)
        comps = data.get("components", []) if isinstance(data, dict) else []
        if any(isinstance(c, dict) and is_breadboard_type(str(c.get("type", ""))) for c in comps):
            return PHYSICAL
    except json.JSONDecodeError:
        pass
    return LOGICAL
