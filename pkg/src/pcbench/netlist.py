"""Electrical nets of a circuit.

Wires join their two endpoints.  Inside a breadboard every hole belongs to a
column segment (rows a-e or f-j of one column) and every rail position to its
rail; points in the same group are connected.  Some components also tie their
own pins together permanently (a resistor's two legs at logic level, the two
legs on each side of a push button).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .circuit import (
    LOGICAL,
    CircuitDoc,
    ComponentDecl,
    ComponentPin,
    Connection,
    Endpoint,
    Hole,
    RailPos,
)


@dataclass(frozen=True, order=True)
class ColumnSegment:
    column: int
    half: str  # "top" for rows a-e, "bottom" for f-j


@dataclass(frozen=True, order=True)
class Rail:
    rail: str


@dataclass(frozen=True)
class BoardGroup:
    board_id: str
    group: Union[ColumnSegment, Rail]

    def __str__(self) -> str:
        if isinstance(self.group, Rail):
            return f"{self.board_id}.{self.group.rail}"
        return f"{self.board_id}.{self.group.column}{self.group.half}"


ElectricalPoint = Union[ComponentPin, BoardGroup]


def point_sort_key(point: ElectricalPoint) -> tuple:
    if isinstance(point, ComponentPin):
        return (0, point.component_id, point.pin_key, "")
    g = point.group
    if isinstance(g, ColumnSegment):
        return (1, point.board_id, g.column, g.half)
    return (2, point.board_id, 0, g.rail)


StaticBridgeTable = Mapping[str, tuple[frozenset[str], ...]]

DEFAULT_BRIDGES: StaticBridgeTable = {
    "resistor": (frozenset({"pin1", "pin2"}),),
    "button": (frozenset({"pin1.l", "pin1.r"}), frozenset({"pin2.l", "pin2.r"})),
}
NO_BRIDGES: StaticBridgeTable = {}


def hole_group(endpoint: Hole | RailPos) -> Union[ColumnSegment, Rail]:
    if isinstance(endpoint, RailPos):
        return Rail(endpoint.rail)
    return ColumnSegment(endpoint.column, "top" if endpoint.row in "abcde" else "bottom")


def to_point(endpoint: Endpoint) -> ElectricalPoint:
    if isinstance(endpoint, ComponentPin):
        return endpoint
    return BoardGroup(endpoint.board_id, hole_group(endpoint))


def component_bridges(comp: ComponentDecl, bridges: StaticBridgeTable) -> list[list[ComponentPin]]:
    return [[ComponentPin(comp.id, pin) for pin in sorted(group)]
            for group in bridges.get(comp.canonical_type, ())]


class UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic root choice keeps builds reproducible
            if point_sort_key(rb) < point_sort_key(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


class NetPartition:
    """Immutable partition of electrical points into nets.

    Nets are numbered 0..n-1 in order of their smallest point, so ids are
    stable across connection reorderings.
    """

    def __init__(self, groups: Iterable[Iterable[ElectricalPoint]]):
        nets = [tuple(sorted(g, key=point_sort_key)) for g in groups]
        nets = [n for n in nets if n]
        nets.sort(key=lambda n: point_sort_key(n[0]))
        self._nets: tuple[tuple[ElectricalPoint, ...], ...] = tuple(nets)
        self._index = {p: i for i, net in enumerate(nets) for p in net}

    @property
    def nets(self) -> tuple[tuple[ElectricalPoint, ...], ...]:
        return self._nets

    def __len__(self) -> int:
        return len(self._nets)

    def __contains__(self, point: ElectricalPoint) -> bool:
        return point in self._index

    def net_id(self, point: ElectricalPoint) -> int:
        return self._index[point]

    def net_of(self, point: ElectricalPoint) -> tuple[ElectricalPoint, ...]:
        return self._nets[self._index[point]]

    def as_sets(self) -> set[frozenset]:
        return {frozenset(n) for n in self._nets}

    def pin_partition(self) -> set[frozenset[ComponentPin]]:
        """Nets restricted to component pins, keeping nets with two or more pins."""
        out = set()
        for net in self._nets:
            pins = frozenset(p for p in net if isinstance(p, ComponentPin))
            if len(pins) >= 2:
                out.add(pins)
        return out


def build_nets(circuit: CircuitDoc, bridges: StaticBridgeTable = DEFAULT_BRIDGES,
               extra_links: Iterable[tuple[ElectricalPoint, ElectricalPoint]] = ()) -> NetPartition:
    """Partition every point the circuit mentions into nets.

    ``extra_links`` joins additional point pairs (the simulator passes pressed
    buttons here).
    """
    uf = UnionFind()
    for conn in circuit.connections:
        a, b = to_point(conn.a), to_point(conn.b)
        uf.add(a)
        uf.add(b)
        uf.union(a, b)
    for comp in circuit.components:
        for group in component_bridges(comp, bridges):
            for pin in group:
                uf.add(pin)
            for pin in group[1:]:
                uf.union(group[0], pin)
    for a, b in extra_links:
        uf.union(a, b)
    return NetPartition(uf.groups())


def same_net(partition: NetPartition, a: Endpoint, b: Endpoint) -> bool:
    pa, pb = to_point(a), to_point(b)
    for ep, p in ((a, pa), (b, pb)):
        if p not in partition:
            raise KeyError(f"endpoint {ep} is not part of this circuit")
    return partition.net_id(pa) == partition.net_id(pb)


def reduce_to_logical(physical: CircuitDoc,
                      bridges: StaticBridgeTable = NO_BRIDGES) -> CircuitDoc:
    """Logical circuit with the same pin connectivity as a physical layout.

    Breadboards are dropped; each net's wired component pins are joined as a
    star from the lexicographically smallest pin.  Bridges default to none so
    that series parts (resistors) keep their own connections in the output.
    """
    nets = build_nets(physical, bridges)
    wired = {e for conn in physical.connections for e in conn.endpoints
             if isinstance(e, ComponentPin)}
    connections = []
    for net in nets.nets:
        pins = sorted((p for p in net if isinstance(p, ComponentPin) and p in wired),
                      key=lambda p: (p.component_id, p.pin_key))
        for pin in pins[1:]:
            connections.append(Connection(pins[0], pin))
    connections.sort(key=lambda c: ((c.a.component_id, c.a.pin_key),
                                    (c.b.component_id, c.b.pin_key)))
    components = tuple(c for c in physical.components if not c.is_breadboard)
    return CircuitDoc(LOGICAL, components, tuple(connections))


def same_pin_partition(a: CircuitDoc, b: CircuitDoc,
                       bridges: StaticBridgeTable = DEFAULT_BRIDGES) -> bool:
    return build_nets(a, bridges).pin_partition() == build_nets(b, bridges).pin_partition()


__all__ = [
    "BoardGroup", "ColumnSegment", "DEFAULT_BRIDGES", "ElectricalPoint", "NO_BRIDGES",
    "NetPartition", "Rail", "StaticBridgeTable", "UnionFind", "build_nets",
    "hole_group", "reduce_to_logical", "same_net", "same_pin_partition", "to_point",
]
