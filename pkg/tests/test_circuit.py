import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcbench.circuit import (
    LOGICAL, PHYSICAL, CircuitParseError, ComponentDecl, ComponentPin, Hole, RailPos,
    circuit_stats, detect_kind, parse_circuit, parse_circuit_data, parse_endpoint,
    serialize_circuit,
)

from builders import clean_physical_data, doc

UNO = [ComponentDecl("arduino1", "Arduino Uno"), ComponentDecl("breadboard1", "Breadboard"),
       ComponentDecl("led2", "LED")]


def test_single_component_document():
    c = parse_circuit('{"components":[{"id":"arduino1","type":"Arduino Uno"}],"connections":[]}',
                      LOGICAL)
    assert [x.id for x in c.components] == ["arduino1"]
    assert c.connections == ()


def test_empty_document():
    c = parse_circuit('{"components":[],"connections":[]}', LOGICAL)
    assert circuit_stats(c).num_components == 0
    assert serialize_circuit(c) == '{"components":[],"connections":[]}'


def test_connection_arity_error_names_position():
    text = json.dumps({"components": [{"id": "arduino1", "type": "Arduino Uno"},
                                      {"id": "led2", "type": "LED"}],
                       "connections": [["arduino1.pin13", "led2.anode"], ["arduino1.pin13"]]})
    with pytest.raises(CircuitParseError) as err:
        parse_circuit(text, LOGICAL)
    assert err.value.position == "connections[1]"


@pytest.mark.parametrize("text,expected", [
    ("arduino1.pin13", ComponentPin("arduino1", "pin13")),
    ("breadboard1.tp.1", RailPos("breadboard1", "tp", 1)),
    ("breadboard.bn.12", RailPos("breadboard1", "bn", 12)),
    ("breadboard1.10a", Hole("breadboard1", 10, "a")),
    ("breadboard.60J", Hole("breadboard1", 60, "j")),
])
def test_parse_endpoint(text, expected):
    assert parse_endpoint(text, UNO) == expected


@pytest.mark.parametrize("text", ["breadboard1.61a", "breadboard1.0a", "breadboard1.5k",
                                  "breadboard1.tp.51", "breadboard1.tp.0", "breadboard1.xx.3",
                                  "ghost1.pin1", "arduino1", ".pin"])
def test_parse_endpoint_errors(text):
    with pytest.raises(CircuitParseError):
        parse_endpoint(text, UNO)


def test_pin_names_case_insensitive_ids_case_sensitive():
    assert parse_endpoint("arduino1.A0", UNO) == ComponentPin("arduino1", "a0")
    with pytest.raises(CircuitParseError):
        parse_endpoint("Arduino1.a0", UNO)


def test_breadboard_alias_needs_single_board():
    two = UNO + [ComponentDecl("breadboard2", "Breadboard")]
    with pytest.raises(CircuitParseError):
        parse_endpoint("breadboard.3a", two)
    assert parse_endpoint("breadboard2.3a", two) == Hole("breadboard2", 3, "a")


@pytest.mark.parametrize("data,kind", [
    ({"components": [{"id": "breadboard1", "type": "Breadboard"}], "connections": []}, LOGICAL),
    ({"components": [{"id": "a1", "type": "Arduino Uno"}, {"id": "led1", "type": "LED"}],
      "connections": [["a1.pin2", "led1.anode"]]}, PHYSICAL),
    ({"components": [{"id": "Arduino", "type": "Arduino Uno"}], "connections": []}, LOGICAL),
    ({"components": [{"id": "a1", "type": ""}], "connections": []}, LOGICAL),
    ({"components": [{"id": "a1", "type": "X"}, {"id": "a1", "type": "Y"}], "connections": []},
     LOGICAL),
    ({"components": []}, LOGICAL),
    ([], LOGICAL),
])
def test_invariant_violations(data, kind):
    with pytest.raises(CircuitParseError):
        parse_circuit_data(data, kind)


def test_json_syntax_error_has_position():
    with pytest.raises(CircuitParseError) as err:
        parse_circuit('{"components": [', LOGICAL)
    assert err.value.position.startswith("line 1")


def test_unknown_types_and_duplicates_parse():
    c = parse_circuit_data({"components": [{"id": "a1", "type": "Flux capacitor"},
                                           {"id": "b1", "type": "LED"}],
                            "connections": [["a1.x", "b1.anode"], ["b1.anode", "a1.x"]]}, LOGICAL)
    assert circuit_stats(c).num_connections == 2


def test_properties_kept_as_text(ntc_physical):
    assert ntc_physical.component("ntc_sensor1").properties == {"temperature": "24"}


def test_ntc_example_stats_and_round_trip(ntc_physical):
    s = circuit_stats(ntc_physical)
    assert (s.num_components, s.num_connections) == (3, 6)
    again = parse_circuit(serialize_circuit(ntc_physical), PHYSICAL)
    assert again == ntc_physical


def test_serialize_keeps_component_order():
    data = {"components": [{"id": f"led{i}", "type": "LED"} for i in (3, 1, 2)], "connections": []}
    out = json.loads(serialize_circuit(parse_circuit_data(data, LOGICAL)))
    assert [c["id"] for c in out["components"]] == ["led3", "led1", "led2"]


def test_button_led_physical_counts(by_id):
    # hand tally of src/pcbench/data/projects/button_led/physical.json
    raw = json.loads(by_id["button_led"].physical_text)
    s = circuit_stats(by_id["button_led"].physical)
    assert (s.num_components, s.num_connections) == (len(raw["components"]), len(raw["connections"]))
    assert (s.num_components, s.num_connections) == (5, 10)


def test_detect_kind(ntc_physical):
    assert detect_kind(serialize_circuit(ntc_physical)) == PHYSICAL
    assert detect_kind('{"components":[],"connections":[]}') == LOGICAL
    assert detect_kind("not json") == LOGICAL


# -- properties ----------------------------------------------------------------

holes = st.builds(lambda c, r: f"breadboard1.{c}{r}", st.integers(1, 60), st.sampled_from("abcdefghij"))
rails = st.builds(lambda r, i: f"breadboard1.{r}.{i}", st.sampled_from(["tp", "tn", "bp", "bn"]),
                  st.integers(1, 50))
pins = st.builds(lambda c, p: f"{c}.{p}", st.sampled_from(["arduino1", "led2"]),
                 st.sampled_from(["pin13", "gnd1", "anode", "cathode", "A0"]))
endpoint_text = st.one_of(holes, rails, pins)


@given(endpoint_text)
def test_endpoint_grammar_is_total(text):
    ep = parse_endpoint(text, UNO)
    assert str(ep).lower() == text.lower()


@settings(max_examples=60)
@given(st.lists(st.tuples(endpoint_text, endpoint_text), max_size=15))
def test_round_trip_is_identity(pairs):
    data = {"components": [{"id": c.id, "type": c.type} for c in UNO],
            "connections": [list(p) for p in pairs]}
    c = parse_circuit_data(data, PHYSICAL)
    assert parse_circuit(serialize_circuit(c), PHYSICAL) == c
    assert parse_circuit(serialize_circuit(c, indent=2), PHYSICAL) == c


@given(st.randoms())
def test_stats_invariant_under_reordering(rnd):
    data = clean_physical_data()
    shuffled = dict(data, connections=rnd.sample(data["connections"], len(data["connections"])))
    assert circuit_stats(doc(data, PHYSICAL)) == circuit_stats(doc(shuffled, PHYSICAL))
