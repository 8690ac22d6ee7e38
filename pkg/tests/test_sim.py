import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcbench.circuit import LOGICAL, CircuitDoc
from pcbench.firmware import FirmwareRuntimeError, parse_program
from pcbench.sim import (
    ARDUINO_UNO, CONFLICT, FLOATING, HIGH, LOW, MODELS, ObserveError, SimSetupError, advance,
    analog, load_profile, new_sim, observe, resolve_net,
)

from builders import doc

K = ARDUINO_UNO.constants
MS = 1000


def fw(src):
    return parse_program(src, K)


def logical(*conns, parts=()):
    comps = [{"id": "arduino1", "type": "Arduino Uno"}] + [{"id": i, "type": t} for i, t in parts]
    return doc({"components": comps, "connections": [list(c) for c in conns]}, LOGICAL)


LED_ON_13 = logical(("arduino1.pin13", "resistor1.pin1"), ("resistor1.pin2", "led1.anode"),
                    ("led1.cathode", "arduino1.gnd1"),
                    parts=[("led1", "LED"), ("resistor1", "Resistor")])


@pytest.mark.parametrize("drivers,expected", [
    ([], FLOATING), ([HIGH], HIGH), ([HIGH, HIGH], HIGH), ([LOW, LOW], LOW),
    ([HIGH, LOW], CONFLICT), ([analog(2.0), analog(2.0)], analog(2.0)),
])
def test_resolve_net(drivers, expected):
    assert resolve_net(drivers) == expected


def test_blink_instance_nets(by_id):
    p = by_id["led_blink_basic"]
    sim = new_sim(p.logical, p.program)
    assert len(sim.mcu_nets()) == 2


def test_empty_circuit_has_no_nets():
    sim = new_sim(CircuitDoc(LOGICAL), fw("void setup() {} void loop() {}"))
    assert len(sim.nets) == 0
    advance(sim, 5 * MS)


def test_setup_errors():
    with pytest.raises(SimSetupError, match="pin99"):
        new_sim(logical(("arduino1.pin99", "led1.anode"), parts=[("led1", "LED")]), None)
    with pytest.raises(SimSetupError, match="unsupported"):
        new_sim(logical(parts=[("flux1", "Flux capacitor")]), None)
    with pytest.raises(SimSetupError, match="unknown pin"):
        new_sim(logical(("arduino1.pin2", "led1.gate"), parts=[("led1", "LED")]), None)


def test_advance_to_now_is_empty():
    sim = new_sim(LED_ON_13, fw("void setup() { pinMode(13, OUTPUT); } void loop() { delay(5); }"))
    advance(sim, 10 * MS)
    assert advance(sim, sim.clock) == []
    with pytest.raises(ValueError):
        advance(sim, 0)


def test_fresh_led_is_dark():
    sim = new_sim(LED_ON_13, None)
    assert observe(sim, "led_lit", "led1") is False


def test_blink_events():
    sim = new_sim(LED_ON_13, fw("void setup() { pinMode(13, OUTPUT); }"
                                " void loop() { digitalWrite(13, HIGH); delay(500);"
                                " digitalWrite(13, LOW); delay(500); }"))
    events = advance(sim, 1600 * MS)
    assert [(e.t_us, e.value) for e in events if e.kind == "led"] == [
        (0, True), (500_000, False), (1_000_000, True), (1_500_000, False)]


def test_reversed_led_never_lights():
    c = logical(("arduino1.pin13", "led1.cathode"), ("led1.anode", "arduino1.gnd1"),
                parts=[("led1", "LED")])
    sim = new_sim(c, fw("void setup() { pinMode(13, OUTPUT); digitalWrite(13, HIGH); }"
                        " void loop() { delay(10); }"))
    advance(sim, 50 * MS)
    assert observe(sim, "led_lit", "led1") is False


def test_button_pulldown_read_flips_at_press(by_id):
    p = by_id["button_pulldown"]
    src = ("int last = 0; void setup() { pinMode(2, INPUT); Serial.begin(9600); }"
           " void loop() { int v = digitalRead(2);"
           " if (v != last) { Serial.println(micros()); last = v; } }")
    sim = new_sim(p.logical, fw(src))
    sim.schedule(100 * MS, lambda s: s.apply_action("button1", "press"))
    advance(sim, 99 * MS)
    assert observe(sim, "pin_level", "pin2") == 0
    advance(sim, 200 * MS)
    assert observe(sim, "pin_level", "pin2") == 1
    first = int(observe(sim, "serial_output").splitlines()[0])
    # the first read at or after the press sees HIGH; reads cost 10 µs each
    assert 100_000 <= first <= 100_000 + 20


def test_servo_angle(by_id):
    p = by_id["servo_motor_basic"]
    sim = new_sim(p.logical, fw("void setup() { servoAttach(9); servoWrite(9, 90); }"
                                " void loop() { delay(100); }"))
    advance(sim, 10 * MS)
    assert observe(sim, "servo_angle", "servo1") == 90


def test_serial_println():
    sim = new_sim(CircuitDoc(LOGICAL), fw('void setup() { Serial.begin(9600); Serial.println("5"); }'
                                          " void loop() { delay(1000); }"))
    advance(sim, 1)
    assert observe(sim, "serial_output") == "5\n"


def test_serial_input():
    sim = new_sim(CircuitDoc(LOGICAL), fw(
        "void setup() {} void loop() { if (Serial.available() > 0) {"
        " String s = Serial.readLine(); Serial.println(s.toInt() * 2); } delay(10); }"))
    sim.schedule(30 * MS, lambda s: s.apply_action(None, "serial_send", text="21\n"))
    advance(sim, 100 * MS)
    assert observe(sim, "serial_output") == "42\n"


def test_floating_input_reads_low_pullup_high():
    c = logical(("arduino1.pin4", "button1.pin1.l"), ("button1.pin2.l", "arduino1.gnd1"),
                parts=[("button1", "Push button")])
    sim = new_sim(c, fw("void setup() { pinMode(4, INPUT_PULLUP); pinMode(5, INPUT); }"
                        " void loop() { delay(5); }"))
    advance(sim, 1 * MS)
    assert observe(sim, "pin_level", "pin4") == 1
    assert observe(sim, "pin_level", "pin5") == 0
    sim.apply_action("button1", "press")
    assert observe(sim, "pin_level", "pin4") == 0


def test_analog_read_truncates():
    c = logical(("pot1.vcc", "arduino1.5v"), ("pot1.gnd", "arduino1.gnd1"), ("pot1.sig", "arduino1.a0"),
                parts=[("pot1", "Potentiometer")])
    sim = new_sim(c, fw("void setup() {} void loop() { Serial.println(analogRead(A0)); delay(100); }"))
    sim.schedule(50 * MS, lambda s: s.apply_action("pot1", "set_analog", volts=2.5))
    advance(sim, 150 * MS)
    # 2.5 / 5 * 1023 = 511.5
    assert observe(sim, "serial_output") == "0\n511\n"


def test_short_circuit_is_a_conflict_event():
    c = logical(("arduino1.pin2", "arduino1.pin3"))
    sim = new_sim(c, fw("void setup() { pinMode(2, OUTPUT); pinMode(3, OUTPUT);"
                        " digitalWrite(2, HIGH); digitalWrite(3, LOW); } void loop() { delay(10); }"))
    events = advance(sim, 5 * MS)
    assert any(e.kind == "conflict" for e in events)


def test_runtime_error_is_logged_and_raised():
    sim = new_sim(CircuitDoc(LOGICAL), fw("void setup() { int z = 0; int y = 1 / z; } void loop() {}"))
    with pytest.raises(FirmwareRuntimeError):
        advance(sim, 1 * MS)
    assert any(e.kind == "error" for e in sim.events)


def test_unknown_queries():
    sim = new_sim(LED_ON_13, None)
    with pytest.raises(ObserveError):
        observe(sim, "temperature", "led1")
    with pytest.raises(ObserveError):
        observe(sim, "servo_angle", "led1")
    with pytest.raises(ObserveError):
        observe(sim, "led_lit", "ghost1")


def test_registry_covers_core_components():
    for t in ["led", "rgb led", "bar graph led", "resistor", "button", "piezo buzzer", "servo",
              "potentiometer", "photoresistor module", "dht22", "7 segment display"]:
        assert t in MODELS


def test_profile_roundtrip(tmp_path):
    import json
    from importlib import resources
    data = json.loads(resources.files("pcbench.data").joinpath("arduino-uno.json").read_text())
    path = tmp_path / "board.json"
    path.write_text(json.dumps(data))
    assert load_profile(path).constants == ARDUINO_UNO.constants


# -- properties ------------------------------------------------------------------

TOGGLER = ("int pins[] = {2, 3, 4}; int i = 0;"
           " void setup() { for (int k = 0; k < 3; k++) pinMode(pins[k], OUTPUT); pinMode(5, INPUT); }"
           " void loop() { digitalWrite(pins[i % 3], (i / 3) % 2); i++; delay(D); }")


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 50), st.lists(st.integers(1, 400), max_size=4))
def test_event_log_determinism(delay_ms, presses):
    c = logical(("arduino1.pin2", "led1.anode"), ("led1.cathode", "arduino1.gnd1"),
                ("arduino1.pin5", "button1.pin1.l"), ("button1.pin2.l", "arduino1.5v"),
                parts=[("led1", "LED"), ("button1", "Push button")])
    src = TOGGLER.replace("D", str(delay_ms))

    def go():
        sim = new_sim(c, fw(src))
        for t in presses:
            sim.schedule(t * MS, lambda s: s.apply_action("button1", "press"))
        advance(sim, 500 * MS)
        return sim.event_log_jsonl()

    assert go() == go()


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 30))
def test_same_net_pins_agree(delay_ms):
    c = logical(("arduino1.pin2", "arduino1.pin5"), ("arduino1.pin3", "resistor1.pin1"),
                ("resistor1.pin2", "arduino1.pin6"), parts=[("resistor1", "Resistor")])
    sim = new_sim(c, fw(TOGGLER.replace("D", str(delay_ms))))
    for t in range(0, 300, 7):
        advance(sim, t * MS)
        assert observe(sim, "pin_level", "pin2") == observe(sim, "pin_level", "pin5")


@pytest.mark.parametrize("ohms", ["10", "220", "1000000"])
def test_resistance_does_not_matter(by_id, ohms):
    p = by_id["led_blink_basic"]
    base = new_sim(p.logical, p.program)
    advance(base, 2000 * MS)
    comps = [c if c.type != "Resistor" else type(c)(c.id, c.type, {"resistance": ohms})
             for c in p.logical.components]
    other = new_sim(p.logical.replace(components=comps), p.program)
    advance(other, 2000 * MS)
    assert base.event_log_jsonl() == other.event_log_jsonl()
