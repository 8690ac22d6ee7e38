import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcbench.circuit import LOGICAL, CircuitDoc
from pcbench.firmware import parse_program
from pcbench.sim import ARDUINO_UNO
from pcbench.testproc import (
    TestProcError, Verdict, parse_testproc, parse_testproc_data, simulate,
)

from builders import doc

K = ARDUINO_UNO.constants


def proc(*steps, timeout=2000):
    return parse_testproc_data({"timeout_ms": timeout, "steps": list(steps)})


def at(ms, **payload):
    kind = "action" if "action" in payload else "assert"
    return {"at_ms": ms, kind: payload[kind]}


def lit(ms, expected, window=0):
    body = {"led_lit": "led1", "expected": expected}
    if window:
        body["window_ms"] = window
    return at(ms, **{"assert": body})


@pytest.fixture
def blink(by_id):
    return by_id["led_blink_basic"]


def test_one_step_schema_instance():
    p = parse_testproc('{"timeout_ms":1000,"steps":[{"at_ms":250,"assert":{"led_lit":"led1",'
                       '"expected":true}}]}')
    assert len(p.steps) == 1 and p.timeout_ms == 1000
    assert p.steps[0].payload.window_ms == 0


def test_bundled_button_led_has_four_steps(by_id):
    assert len(by_id["button_led"].testproc.steps) == 4


@pytest.mark.parametrize("data,msg", [
    ({"timeout_ms": 1000, "steps": [lit(300, True), lit(100, False)]}, "earlier"),
    ({"steps": []}, "timeout_ms"),
    ({"timeout_ms": 100, "steps": [lit(300, True)]}, "before the last step"),
    ({"timeout_ms": 100, "steps": {}}, "list"),
    ({"timeout_ms": 100, "steps": [{"at_ms": 1}]}, "exactly one"),
    ({"timeout_ms": 100, "steps": [{"at_ms": 1, "action": {"press": "b1"},
                                    "assert": {"led_lit": "l1", "expected": True}}]}, "exactly one"),
    ({"timeout_ms": 100, "steps": [{"at_ms": 1, "when": 2, "action": {"press": "b1"}}]}, "unknown"),
    ({"timeout_ms": 100, "steps": [at(1, action={"set_analog": "p1", "volts": 7})]}, "0-5"),
    ({"timeout_ms": 100, "steps": [at(1, action={"set_analog": "p1"})]}, "volts"),
    ({"timeout_ms": 100, "steps": [at(1, action={"jump": "p1"})]}, "exactly one"),
    ({"timeout_ms": 100, "steps": [lit(1, "yes")]}, "true or false"),
    ({"timeout_ms": 100, "steps": [lit(1, True, -5)]}, "window"),
    ({"timeout_ms": 100, "steps": [at(1, **{"assert": {"seven_segment_shows": "d1", "digit": 12}})]},
     "digit"),
    ({"timeout_ms": 100, "steps": [at(1, **{"assert": {"servo_angle": "s1", "degrees": 9,
                                                         "tolerance": -1}})]}, "tolerance"),
    ({"timeout_ms": 100, "steps": [at(-1, action={"press": "b1"})]}, ">= 0"),
])
def test_schema_errors(data, msg):
    with pytest.raises(TestProcError, match=msg):
        parse_testproc_data(data)


def test_invalid_json():
    with pytest.raises(TestProcError, match="line 1"):
        parse_testproc("{")


def test_round_trip(projects):
    for p in projects:
        assert parse_testproc_data(p.testproc.to_dict()) == p.testproc


def test_blink_lit_then_unlit(blink):
    v = simulate(blink.logical, blink.program, proc(lit(250, True), lit(750, False)))
    assert v.passed


def test_slow_blink_fails_at_second_step(blink):
    slow = parse_program(blink.firmware.replace("delay(500)", "delay(2000)"), K)
    v = simulate(blink.logical, slow, proc(lit(250, True), lit(750, False)))
    assert not v.passed
    assert [f.index for f in v.failed_steps] == [1]
    assert v.failed_steps[0].observed is True


def test_empty_procedure_passes(blink):
    assert simulate(blink.logical, blink.program, proc(timeout=100)).passed


def test_windows(blink):
    run = lambda *s: simulate(blink.logical, blink.program, proc(*s))  # noqa: E731
    assert run(lit(499, True)).passed
    assert run(lit(500, False)).passed          # the write at 500 ms is already visible
    assert run(lit(490, False, window=20)).passed
    assert not run(lit(400, False, window=50)).passed
    # [1900, 2100] would reach the write at 2000 ms, but the window stops at the timeout
    clipped = simulate(blink.logical, blink.program, proc(lit(1900, True, 200), timeout=1950))
    assert not clipped.passed
    assert simulate(blink.logical, blink.program, proc(lit(1900, True, 200), timeout=2000)).passed


def test_actions_apply_before_assertions_at_same_time(by_id):
    p = by_id["button_pulldown"]
    steps = [at(100, action={"press": "button1"}),
             at(100, **{"assert": {"pin_level": "pin2", "expected": "HIGH"}}),
             at(200, action={"press": "button1"}), at(200, action={"release": "button1"}),
             at(200, **{"assert": {"pin_level": "pin2", "expected": "LOW"}})]
    assert simulate(p.logical, p.program, proc(*steps, timeout=300)).passed


def test_serial_assertions():
    program = parse_program('void setup() { Serial.println("ready"); } void loop() {'
                            ' if (Serial.available() > 0) { String s = Serial.readLine();'
                            ' Serial.println(s + "!"); } delay(10); }', K)
    steps = [at(0, **{"assert": {"serial_line_equals": 0, "text": "ready"}}),
             at(50, action={"serial_send": "go\n"}),
             at(60, **{"assert": {"serial_contains": "go!", "window_ms": 20}}),
             at(100, **{"assert": {"serial_line_equals": 1, "text": "go!"}}),
             at(100, **{"assert": {"serial_line_equals": 2, "text": ""}})]
    v = simulate(CircuitDoc(LOGICAL), program, proc(*steps, timeout=200))
    assert [f.index for f in v.failed_steps] == [4]


def test_action_on_unknown_or_wrong_component(blink):
    v = simulate(blink.logical, blink.program,
                 proc(at(10, action={"press": "button9"}), at(20, action={"press": "led1"})))
    assert not v.passed and len(v.sim_errors) == 2


def test_hung_firmware_times_out(blink):
    hung = parse_program("void setup() { while (true) { } } void loop() {}", K)
    v = simulate(blink.logical, hung, proc(lit(100, False), timeout=200))
    assert v.timed_out and not v.passed
    assert any("hung" in e for e in v.sim_errors)


def test_runtime_error_fails_verdict(blink):
    bad = parse_program("int a[2]; void setup() { a[5] = 1; } void loop() {}", K)
    v = simulate(blink.logical, bad, proc(timeout=10))
    assert not v.passed and not v.timed_out
    assert "runtime error" in v.sim_errors[0]


def test_setup_failure_becomes_verdict(blink):
    c = doc({"components": [{"id": "arduino1", "type": "Arduino Uno"}, {"id": "x1", "type": "Laser"}],
             "connections": []}, LOGICAL)
    v = simulate(c, blink.program, proc(timeout=10))
    assert not v.passed and v.sim_errors[0].startswith("setup:")


def test_short_circuit_fails_verdict():
    c = doc({"components": [{"id": "arduino1", "type": "Arduino Uno"}],
             "connections": [["arduino1.pin2", "arduino1.gnd1"]]}, LOGICAL)
    p = parse_program("void setup() { pinMode(2, OUTPUT); digitalWrite(2, HIGH); }"
                      " void loop() { delay(10); }", K)
    v = simulate(c, p, proc(timeout=50))
    assert any("short circuit" in e for e in v.sim_errors)


def test_unknown_observation_target_is_failed_step(blink):
    v = simulate(blink.logical, blink.program,
                 proc(at(10, **{"assert": {"led_lit": "led7", "expected": False}})))
    assert v.failed_steps[0].observed.startswith("error:")


def test_verdict_json(blink):
    slow = parse_program(blink.firmware.replace("delay(500)", "delay(2000)"), K)
    v = simulate(blink.logical, slow, proc(lit(250, True), lit(750, False)))
    d = json.loads(v.to_json(include_trace=True))
    assert d["passed"] is False and d["failed_steps"][0]["step"] == 1
    assert {"t_us", "kind", "subject", "value"} <= set(d["trace"][0])
    assert Verdict().passed


CHECKS = [lit(t, e) for t in (100, 300, 600, 900, 1200, 1700) for e in (True, False)]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(CHECKS), max_size=5), st.sampled_from(CHECKS))
def test_adding_assertion_never_fixes_a_failure(by_id, base, extra):
    p = by_id["led_blink_basic"]
    base = sorted(base, key=lambda s: s["at_ms"])
    more = sorted(base + [extra], key=lambda s: s["at_ms"])
    a = simulate(p.logical, p.program, proc(*base))
    b = simulate(p.logical, p.program, proc(*more))
    assert not (not a.passed and b.passed)
    assert len(b.failed_steps) >= len(a.failed_steps)
    again = simulate(p.logical, p.program, proc(*base))
    assert again.to_json(include_trace=True) == a.to_json(include_trace=True)
