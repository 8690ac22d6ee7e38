"""Independent reference implementations used as test oracles."""

from __future__ import annotations

import random
from collections import defaultdict, deque

from pcbench.circuit import PHYSICAL, ComponentPin, Hole, parse_circuit_data

PIN_NAMES = {
    "Arduino Uno": ["pin2", "pin3", "pin13", "gnd1", "5v", "a0"],
    "LED": ["anode", "cathode"],
    "Resistor": ["pin1", "pin2"],
    "Button": ["pin1.l", "pin1.r", "pin2.l", "pin2.r"],
    "Servo": ["pwm", "v+", "gnd"],
}
# pins tied together inside a component, as a breadboard user would expect
INTERNAL = {"Resistor": [("pin1", "pin2")], "Button": [("pin1.l", "pin1.r"), ("pin2.l", "pin2.r")]}


def _key(ep) -> tuple:
    if isinstance(ep, ComponentPin):
        return ("pin", ep.component_id, ep.pin_key)
    if isinstance(ep, Hole):
        return ("hole", ep.board_id, ep.column, ep.row)
    return ("rail", ep.board_id, ep.rail, ep.index)


def bfs_components(circuit) -> list[set[tuple]]:
    """Connected components of the explicit rule graph, by breadth-first search.

    Nodes are concrete holes, rail positions and component pins.  Edges: each
    wire; every pair of mentioned holes in the same column and the same half
    (rows a-e or f-j); every pair of mentioned positions on the same rail;
    the internal ties listed in ``INTERNAL``.
    """
    graph: dict[tuple, set[tuple]] = defaultdict(set)

    def edge(a, b):
        graph[a].add(b)
        graph[b].add(a)

    for conn in circuit.connections:
        edge(_key(conn.a), _key(conn.b))
    for comp in circuit.components:
        for a, b in INTERNAL.get(comp.type, []):
            edge(("pin", comp.id, a), ("pin", comp.id, b))
    nodes = list(graph)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if a[0] == b[0] == "hole" and a[1:3] == b[1:3] and (a[3] <= "e") == (b[3] <= "e"):
                edge(a, b)
            if a[0] == b[0] == "rail" and a[1:3] == b[1:3]:
                edge(a, b)
    seen: set[tuple] = set()
    out = []
    for start in graph:
        if start in seen:
            continue
        comp, queue = {start}, deque([start])
        seen.add(start)
        while queue:
            for nxt in graph[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    comp.add(nxt)
                    queue.append(nxt)
        out.append(comp)
    return out


def bfs_pin_partition(circuit) -> set[frozenset]:
    return {frozenset(n for n in c if n[0] == "pin") for c in bfs_components(circuit)
            if sum(n[0] == "pin" for n in c) >= 2}


def random_physical(rng: random.Random, max_components: int = 10, max_connections: int = 40):
    types = list(PIN_NAMES)
    comps = [{"id": "breadboard1", "type": "Breadboard"}]
    for i in range(rng.randint(1, max_components - 1)):
        t = rng.choice(types)
        comps.append({"id": f"part{i + 1}", "type": t})

    def endpoint() -> str:
        r = rng.random()
        if r < 0.4:
            c = rng.choice(comps[1:])
            return f"{c['id']}.{rng.choice(PIN_NAMES[c['type']])}"
        if r < 0.8:
            # a handful of columns so that segments actually collide
            return f"breadboard1.{rng.randint(1, 6)}{rng.choice('abcdefghij')}"
        return f"breadboard1.{rng.choice(['tp', 'tn', 'bp', 'bn'])}.{rng.randint(1, 50)}"

    conns = [[endpoint(), endpoint()] for _ in range(rng.randint(0, max_connections))]
    return parse_circuit_data({"components": comps, "connections": conns}, PHYSICAL)
