"""Regenerate the bundled sample corpus under src/pcbench/data/projects.

Each project is authored here as a description, a logical circuit, firmware
and a test procedure.  The physical layout is derived by a simple placer:
every logical net gets its own breadboard column segment (ground and supply
nets take the power rails while rails remain) and every wired pin is plugged
into its own hole, so the layout has no pin conflicts and no breadboard
bypasses.

Usage: python scripts/build_corpus.py [--out DIR] [--check]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pcbench.circuit import ComponentPin, parse_circuit_data
from pcbench.netlist import NO_BRIDGES, build_nets

ROOT = Path(__file__).resolve().parents[1]
DEFAULT_OUT = ROOT / "src" / "pcbench" / "data" / "projects"

# rails handed out in order to nets holding a ground or supply pin
RAIL_POOLS = {"gnd": ["tn", "bn"], "supply": ["tp", "bp"]}


def place(logical: dict) -> dict:
    """Physical layout for a logical circuit (see module docstring)."""
    circuit = parse_circuit_data(logical, "logical")
    nets = build_nets(circuit, NO_BRIDGES)
    mcu = {c["id"] for c in logical["components"] if c["type"] == "Arduino Uno"}
    connections: list[list[str]] = []
    next_col = 1
    pools = {k: list(v) for k, v in RAIL_POOLS.items()}
    rail_pos = {r: 1 for v in RAIL_POOLS.values() for r in v}
    for net in nets.nets:
        pins = [p for p in net if isinstance(p, ComponentPin)]
        rail = None
        for p in pins:
            if p.component_id in mcu and not rail:
                kind = ("gnd" if p.pin_key.startswith("gnd")
                        else "supply" if p.pin_key in ("5v", "3.3v") else None)
                if kind and pools[kind]:
                    rail = pools[kind].pop(0)
        if rail:
            for p in pins:
                connections.append([str(p), f"breadboard1.{rail}.{rail_pos[rail]}"])
                rail_pos[rail] += 1
            continue
        if len(pins) > 5:
            raise ValueError(f"net with {len(pins)} pins does not fit one column segment")
        col, half = (next_col, "abcde") if next_col <= 60 else (next_col - 60, "fghij")
        next_col += 1
        for row, p in zip(half, pins):
            connections.append([str(p), f"breadboard1.{col}{row}"])
    components = list(logical["components"]) + [{"id": "breadboard1", "type": "Breadboard"}]
    return {"components": components, "connections": connections}


def _arduino() -> dict:
    return {"id": "arduino1", "type": "Arduino Uno"}


PROJECTS: list[dict] = []


def project(pid: str, level: int, description: str, components: list, connections: list,
            firmware: str, testproc: dict, wrong_pin: tuple[str, str], drop_pin: str) -> None:
    PROJECTS.append(dict(id=pid, level=level, description=description,
                         logical={"components": [_arduino()] + components,
                                  "connections": connections},
                         firmware=firmware.strip() + "\n", testproc=testproc,
                         wrong_pin=wrong_pin, drop_pin=drop_pin))


project(
    "led_blink_basic", 1,
    "Wire one LED, with a series resistor, to digital pin 13 of an Arduino Uno and "
    "write a sketch that switches it on for half a second and off for half a second, "
    "forever.",
    [{"id": "led1", "type": "LED", "properties": {"color": "red"}},
     {"id": "resistor1", "type": "Resistor", "properties": {"resistance": "220"}}],
    [["arduino1.pin13", "resistor1.pin1"], ["resistor1.pin2", "led1.anode"],
     ["led1.cathode", "arduino1.gnd1"]],
    """
// Blink an LED on pin 13.
const int LED_PIN = 13;

void setup() {
  pinMode(LED_PIN, OUTPUT);
}

void loop() {
  digitalWrite(LED_PIN, HIGH);
  delay(500);
  digitalWrite(LED_PIN, LOW);
  delay(500);
}
""",
    {"timeout_ms": 2000, "steps": [
        {"at_ms": 250, "assert": {"led_lit": "led1", "expected": True, "window_ms": 50}},
        {"at_ms": 750, "assert": {"led_lit": "led1", "expected": False, "window_ms": 50}},
        {"at_ms": 1250, "assert": {"led_lit": "led1", "expected": True, "window_ms": 50}},
        {"at_ms": 1750, "assert": {"led_lit": "led1", "expected": False, "window_ms": 50}}]},
    ("const int LED_PIN = 13;", "const int LED_PIN = 12;"),
    "led1.cathode",
)

project(
    "servo_motor_basic", 1,
    "Connect a hobby servo to an Arduino Uno (signal on pin 9, powered from the 5 V "
    "pin) and sweep it between 0 and 180 degrees, holding each end for one second.",
    [{"id": "servo1", "type": "Servo"}],
    [["servo1.pwm", "arduino1.pin9"], ["servo1.v+", "arduino1.5v"],
     ["servo1.gnd", "arduino1.gnd1"]],
    """
const int SERVO_PIN = 9;

void setup() {
  servoAttach(SERVO_PIN);
}

void loop() {
  servoWrite(SERVO_PIN, 0);
  delay(1000);
  servoWrite(SERVO_PIN, 180);
  delay(1000);
}
""",
    {"timeout_ms": 3000, "steps": [
        {"at_ms": 500, "assert": {"servo_angle": "servo1", "degrees": 0, "tolerance": 2}},
        {"at_ms": 1500, "assert": {"servo_angle": "servo1", "degrees": 180, "tolerance": 2}},
        {"at_ms": 2500, "assert": {"servo_angle": "servo1", "degrees": 0, "tolerance": 2}}]},
    ("const int SERVO_PIN = 9;", "const int SERVO_PIN = 10;"),
    "servo1.pwm",
)

project(
    "temperature_sensor_basic", 1,
    "Read a DHT22 temperature and humidity sensor on digital pin 2 once per second and "
    "report both values on the serial monitor in the form "
    "\"Temp: 24.00 C, Humidity: 40.00 %\".",
    [{"id": "dht1", "type": "DHT22", "properties": {"temperature": "24", "humidity": "40"}}],
    [["dht1.vcc", "arduino1.5v"], ["dht1.sda", "arduino1.pin2"], ["dht1.gnd", "arduino1.gnd1"]],
    """
const int DHT_PIN = 2;

void setup() {
  Serial.begin(9600);
}

void loop() {
  float temperature = dhtRead(DHT_PIN, "temperature");
  float humidity = dhtRead(DHT_PIN, "humidity");
  Serial.print("Temp: ");
  Serial.print(temperature);
  Serial.print(" C, Humidity: ");
  Serial.print(humidity);
  Serial.println(" %");
  delay(1000);
}
""",
    {"timeout_ms": 2600, "steps": [
        {"at_ms": 500, "assert": {"serial_line_equals": 0,
                                  "text": "Temp: 24.00 C, Humidity: 40.00 %"}},
        {"at_ms": 1500, "action": {"set_sensor": "dht1", "field": "temperature", "value": 30.5}},
        {"at_ms": 2500, "assert": {"serial_contains": "Temp: 30.50 C"}}]},
    ("const int DHT_PIN = 2;", "const int DHT_PIN = 3;"),
    "dht1.sda",
)

project(
    "seven_segment_basic", 1,
    "Drive a single-digit common-cathode 7-segment display from pins 2 to 8 (segments a "
    "to g) and count from 0 to 9, advancing once per second and wrapping around.",
    [{"id": "sevseg1", "type": "7 Segment Display"},
     {"id": "resistor1", "type": "Resistor", "properties": {"resistance": "220"}}],
    [["sevseg1.a", "arduino1.pin2"], ["sevseg1.b", "arduino1.pin3"],
     ["sevseg1.c", "arduino1.pin4"], ["sevseg1.d", "arduino1.pin5"],
     ["sevseg1.e", "arduino1.pin6"], ["sevseg1.f", "arduino1.pin7"],
     ["sevseg1.g", "arduino1.pin8"], ["sevseg1.com", "resistor1.pin1"],
     ["resistor1.pin2", "arduino1.gnd1"]],
    """
// Segment a..g on pins 2..8; bit i of a pattern drives segment i.
int segPins[7] = {2, 3, 4, 5, 6, 7, 8};
int patterns[10] = {0x3F, 0x06, 0x5B, 0x4F, 0x66, 0x6D, 0x7D, 0x07, 0x7F, 0x6F};
int count = 0;

void showDigit(int d) {
  for (int i = 0; i < 7; i++) {
    digitalWrite(segPins[i], (patterns[d] >> i) & 1);
  }
}

void setup() {
  for (int i = 0; i < 7; i++) {
    pinMode(segPins[i], OUTPUT);
  }
}

void loop() {
  showDigit(count);
  delay(1000);
  count = (count + 1) % 10;
}
""",
    {"timeout_ms": 3000, "steps": [
        {"at_ms": 500, "assert": {"seven_segment_shows": "sevseg1", "digit": 0}},
        {"at_ms": 1500, "assert": {"seven_segment_shows": "sevseg1", "digit": 1}},
        {"at_ms": 2500, "assert": {"seven_segment_shows": "sevseg1", "digit": 2}}]},
    ("int segPins[7] = {2, 3,", "int segPins[7] = {9, 3,"),
    "sevseg1.com",
)

project(
    "button_pulldown", 2,
    "Wire a push button between 5 V and digital pin 2 with a pull-down resistor to "
    "ground, and print \"pressed\" or \"released\" on the serial monitor whenever the "
    "button state changes.",
    [{"id": "button1", "type": "Button"},
     {"id": "resistor1", "type": "Resistor", "properties": {"resistance": "10000"}}],
    [["button1.pin1.l", "arduino1.5v"], ["button1.pin2.l", "arduino1.pin2"],
     ["resistor1.pin1", "arduino1.pin2"], ["resistor1.pin2", "arduino1.gnd1"]],
    """
const int BUTTON_PIN = 2;
int lastState = LOW;

void setup() {
  Serial.begin(9600);
  pinMode(BUTTON_PIN, INPUT);
}

void loop() {
  int state = digitalRead(BUTTON_PIN);
  if (state != lastState) {
    if (state == HIGH) {
      Serial.println("pressed");
    } else {
      Serial.println("released");
    }
    lastState = state;
  }
  delay(20);
}
""",
    {"timeout_ms": 1500, "steps": [
        {"at_ms": 400, "assert": {"pin_level": "pin2", "expected": "LOW"}},
        {"at_ms": 500, "action": {"press": "button1"}},
        {"at_ms": 600, "assert": {"pin_level": "pin2", "expected": "HIGH"}},
        {"at_ms": 600, "assert": {"serial_line_equals": 0, "text": "pressed"}},
        {"at_ms": 1000, "action": {"release": "button1"}},
        {"at_ms": 1100, "assert": {"serial_line_equals": 1, "text": "released"}}]},
    ("const int BUTTON_PIN = 2;", "const int BUTTON_PIN = 3;"),
    "button1.pin1.l",
)

project(
    "serial_rgb_led", 2,
    "Connect a common-cathode RGB LED to pins 9 (red), 10 (green) and 11 (blue) through "
    "resistors. Read commands from the serial monitor: \"red\", \"green\" or \"blue\" "
    "lights that colour alone, \"off\" turns the LED off.",
    [{"id": "rgb1", "type": "RGB LED"},
     {"id": "resistor1", "type": "Resistor", "properties": {"resistance": "220"}},
     {"id": "resistor2", "type": "Resistor", "properties": {"resistance": "220"}},
     {"id": "resistor3", "type": "Resistor", "properties": {"resistance": "220"}}],
    [["arduino1.pin9", "resistor1.pin1"], ["resistor1.pin2", "rgb1.r"],
     ["arduino1.pin10", "resistor2.pin1"], ["resistor2.pin2", "rgb1.g"],
     ["arduino1.pin11", "resistor3.pin1"], ["resistor3.pin2", "rgb1.b"],
     ["rgb1.com", "arduino1.gnd1"]],
    """
const int RED_PIN = 9;
const int GREEN_PIN = 10;
const int BLUE_PIN = 11;

void setColor(int r, int g, int b) {
  digitalWrite(RED_PIN, r);
  digitalWrite(GREEN_PIN, g);
  digitalWrite(BLUE_PIN, b);
}

void setup() {
  Serial.begin(9600);
  pinMode(RED_PIN, OUTPUT);
  pinMode(GREEN_PIN, OUTPUT);
  pinMode(BLUE_PIN, OUTPUT);
}

void loop() {
  if (Serial.available() > 0) {
    String cmd = Serial.readLine();
    cmd = cmd.trim();
    if (cmd.equals("red")) {
      setColor(HIGH, LOW, LOW);
    } else if (cmd.equals("green")) {
      setColor(LOW, HIGH, LOW);
    } else if (cmd.equals("blue")) {
      setColor(LOW, LOW, HIGH);
    } else if (cmd.equals("off")) {
      setColor(LOW, LOW, LOW);
    } else {
      Serial.println("unknown command");
    }
  }
  delay(10);
}
""",
    {"timeout_ms": 1000, "steps": [
        {"at_ms": 100, "action": {"serial_send": "red\n"}},
        {"at_ms": 200, "assert": {"led_lit": "rgb1.r", "expected": True}},
        {"at_ms": 200, "assert": {"led_lit": "rgb1.g", "expected": False}},
        {"at_ms": 300, "action": {"serial_send": "green\n"}},
        {"at_ms": 400, "assert": {"led_lit": "rgb1.g", "expected": True}},
        {"at_ms": 400, "assert": {"led_lit": "rgb1.r", "expected": False}},
        {"at_ms": 500, "action": {"serial_send": "blue\n"}},
        {"at_ms": 600, "assert": {"led_lit": "rgb1.b", "expected": True}},
        {"at_ms": 700, "action": {"serial_send": "off\n"}},
        {"at_ms": 800, "assert": {"led_lit": "rgb1.b", "expected": False}}]},
    ("const int RED_PIN = 9;", "const int RED_PIN = 6;"),
    "rgb1.com",
)

project(
    "light_alarm", 2,
    "Read a photoresistor module on analog pin A0 and sound a piezo buzzer on pin 8 at "
    "1 kHz whenever the reading falls below 300 (dark); silence it otherwise.",
    [{"id": "ldr1", "type": "Photoresistor Module"},
     {"id": "buzzer1", "type": "Piezo Buzzer"}],
    [["ldr1.vcc", "arduino1.5v"], ["ldr1.gnd", "arduino1.gnd1"],
     ["ldr1.ao", "arduino1.a0"], ["buzzer1.pin1", "arduino1.pin8"],
     ["buzzer1.pin2", "arduino1.gnd2"]],
    """
const int LIGHT_PIN = A0;
const int BUZZER_PIN = 8;
const int THRESHOLD = 300;

void setup() {
  pinMode(BUZZER_PIN, OUTPUT);
}

void loop() {
  int light = analogRead(LIGHT_PIN);
  if (light < THRESHOLD) {
    tone(BUZZER_PIN, 1000);
  } else {
    noTone(BUZZER_PIN);
  }
  delay(50);
}
""",
    {"timeout_ms": 1000, "steps": [
        {"at_ms": 0, "action": {"set_analog": "ldr1", "volts": 4.0}},
        {"at_ms": 200, "assert": {"buzzer_active": "buzzer1", "expected": False}},
        {"at_ms": 300, "action": {"set_analog": "ldr1", "volts": 0.5}},
        {"at_ms": 500, "assert": {"buzzer_active": "buzzer1", "expected": True}},
        {"at_ms": 600, "action": {"set_analog": "ldr1", "volts": 4.0}},
        {"at_ms": 800, "assert": {"buzzer_active": "buzzer1", "expected": False}}]},
    ("const int BUZZER_PIN = 8;", "const int BUZZER_PIN = 7;"),
    "buzzer1.pin2",
)

project(
    "button_led", 3,
    "Connect a push button to pin 2 (using the internal pull-up, other side to ground) "
    "and an LED with resistor to pin 13. Each press of the button toggles the LED; "
    "ignore contact bounce shorter than 30 ms.",
    [{"id": "button1", "type": "Button"},
     {"id": "led1", "type": "LED"},
     {"id": "resistor1", "type": "Resistor", "properties": {"resistance": "220"}}],
    [["button1.pin1.l", "arduino1.pin2"], ["button1.pin2.l", "arduino1.gnd1"],
     ["arduino1.pin13", "resistor1.pin1"], ["resistor1.pin2", "led1.anode"],
     ["led1.cathode", "arduino1.gnd2"]],
    """
const int BUTTON_PIN = 2;
const int LED_PIN = 13;
const long DEBOUNCE_MS = 30;

bool ledOn = false;
int lastReading = HIGH;
int stableState = HIGH;
unsigned long lastChange = 0;

void setup() {
  pinMode(BUTTON_PIN, INPUT_PULLUP);
  pinMode(LED_PIN, OUTPUT);
  digitalWrite(LED_PIN, LOW);
}

void loop() {
  int reading = digitalRead(BUTTON_PIN);
  if (reading != lastReading) {
    lastChange = millis();
    lastReading = reading;
  }
  if (millis() - lastChange > DEBOUNCE_MS && reading != stableState) {
    stableState = reading;
    // act on the falling edge only: pull-up means pressed reads LOW
    if (stableState == LOW) {
      ledOn = !ledOn;
      digitalWrite(LED_PIN, ledOn ? HIGH : LOW);
    }
  }
  delay(5);
}
""",
    {"timeout_ms": 600, "steps": [
        {"at_ms": 200, "action": {"press": "button1"}},
        {"at_ms": 300, "assert": {"led_lit": "led1", "expected": True}},
        {"at_ms": 400, "action": {"release": "button1"}},
        {"at_ms": 500, "assert": {"led_lit": "led1", "expected": True}}]},
    ("const int BUTTON_PIN = 2;", "const int BUTTON_PIN = 4;"),
    "led1.cathode",
)

project(
    "potentiometer_servo_motor", 3,
    "Use a potentiometer on A0 to set the angle of a servo on pin 9: the full knob range "
    "maps linearly onto 0 to 180 degrees.",
    [{"id": "pot1", "type": "Potentiometer"},
     {"id": "servo1", "type": "Servo"}],
    [["pot1.vcc", "arduino1.5v"], ["pot1.gnd", "arduino1.gnd1"], ["pot1.sig", "arduino1.a0"],
     ["servo1.pwm", "arduino1.pin9"], ["servo1.v+", "arduino1.5v"],
     ["servo1.gnd", "arduino1.gnd2"]],
    """
const int POT_PIN = A0;
const int SERVO_PIN = 9;

void setup() {
  servoAttach(SERVO_PIN);
}

void loop() {
  int value = analogRead(POT_PIN);
  int angle = map(value, 0, 1023, 0, 180);
  servoWrite(SERVO_PIN, angle);
  delay(20);
}
""",
    {"timeout_ms": 1000, "steps": [
        {"at_ms": 0, "action": {"set_analog": "pot1", "volts": 0.0}},
        {"at_ms": 200, "assert": {"servo_angle": "servo1", "degrees": 0, "tolerance": 2}},
        {"at_ms": 300, "action": {"set_analog": "pot1", "volts": 5.0}},
        {"at_ms": 500, "assert": {"servo_angle": "servo1", "degrees": 180, "tolerance": 2}},
        {"at_ms": 600, "action": {"set_analog": "pot1", "volts": 2.5}},
        {"at_ms": 800, "assert": {"servo_angle": "servo1", "degrees": 90, "tolerance": 2}}]},
    ("const int POT_PIN = A0;", "const int POT_PIN = A1;"),
    "pot1.sig",
)

project(
    "traffic_light", 4,
    "Build a pedestrian-style traffic light: red, yellow and green LEDs on pins 13, 12 "
    "and 11 and a push button on pin 2 (internal pull-up). Green is on by default; a "
    "press switches to yellow for one second, then red for two seconds, then back to "
    "green.",
    [{"id": "button1", "type": "Button"},
     {"id": "led1", "type": "LED", "properties": {"color": "red"}},
     {"id": "led2", "type": "LED", "properties": {"color": "yellow"}},
     {"id": "led3", "type": "LED", "properties": {"color": "green"}},
     {"id": "resistor1", "type": "Resistor", "properties": {"resistance": "220"}},
     {"id": "resistor2", "type": "Resistor", "properties": {"resistance": "220"}},
     {"id": "resistor3", "type": "Resistor", "properties": {"resistance": "220"}}],
    [["button1.pin1.l", "arduino1.pin2"], ["button1.pin2.l", "arduino1.gnd1"],
     ["arduino1.pin13", "resistor1.pin1"], ["resistor1.pin2", "led1.anode"],
     ["arduino1.pin12", "resistor2.pin1"], ["resistor2.pin2", "led2.anode"],
     ["arduino1.pin11", "resistor3.pin1"], ["resistor3.pin2", "led3.anode"],
     ["led1.cathode", "arduino1.gnd2"], ["led2.cathode", "arduino1.gnd2"],
     ["led3.cathode", "arduino1.gnd2"]],
    """
const int RED = 13;
const int YELLOW = 12;
const int GREEN = 11;
const int BUTTON = 2;

void setLights(int r, int y, int g) {
  digitalWrite(RED, r);
  digitalWrite(YELLOW, y);
  digitalWrite(GREEN, g);
}

void setup() {
  pinMode(RED, OUTPUT);
  pinMode(YELLOW, OUTPUT);
  pinMode(GREEN, OUTPUT);
  pinMode(BUTTON, INPUT_PULLUP);
  setLights(LOW, LOW, HIGH);
}

void loop() {
  if (digitalRead(BUTTON) == LOW) {
    setLights(LOW, HIGH, LOW);
    delay(1000);
    setLights(HIGH, LOW, LOW);
    delay(2000);
    setLights(LOW, LOW, HIGH);
  }
  delay(20);
}
""",
    {"timeout_ms": 4000, "steps": [
        {"at_ms": 100, "assert": {"led_lit": "led3", "expected": True}},
        {"at_ms": 100, "assert": {"led_lit": "led1", "expected": False}},
        {"at_ms": 200, "action": {"press": "button1"}},
        {"at_ms": 300, "action": {"release": "button1"}},
        {"at_ms": 400, "assert": {"led_lit": "led2", "expected": True}},
        {"at_ms": 400, "assert": {"led_lit": "led3", "expected": False}},
        {"at_ms": 1500, "assert": {"led_lit": "led1", "expected": True}},
        {"at_ms": 1500, "assert": {"led_lit": "led2", "expected": False}},
        {"at_ms": 3500, "assert": {"led_lit": "led3", "expected": True}},
        {"at_ms": 3500, "assert": {"led_lit": "led1", "expected": False}}]},
    ("const int YELLOW = 12;", "const int YELLOW = 10;"),
    "led1.cathode",
)

project(
    "binary_led", 4,
    "Show a number from 0 to 15 in binary on four LEDs (pins 2 to 5, least significant "
    "bit on pin 2). Numbers arrive one per line on the serial monitor; echo each accepted "
    "number and answer \"out of range\" otherwise.",
    [{"id": f"led{i}", "type": "LED"} for i in range(1, 5)]
    + [{"id": f"resistor{i}", "type": "Resistor", "properties": {"resistance": "220"}}
       for i in range(1, 5)],
    [c for i in range(1, 5) for c in (
        [f"arduino1.pin{i + 1}", f"resistor{i}.pin1"],
        [f"resistor{i}.pin2", f"led{i}.anode"],
        [f"led{i}.cathode", "arduino1.gnd1"])],
    """
int ledPins[4] = {2, 3, 4, 5};

void showNumber(int n) {
  for (int i = 0; i < 4; i++) {
    digitalWrite(ledPins[i], (n >> i) & 1);
  }
}

void setup() {
  Serial.begin(9600);
  for (int i = 0; i < 4; i++) {
    pinMode(ledPins[i], OUTPUT);
  }
}

void loop() {
  if (Serial.available() > 0) {
    String line = Serial.readLine();
    int n = line.toInt();
    if (n >= 0 && n <= 15) {
      showNumber(n);
      Serial.println(n);
    } else {
      Serial.println("out of range");
    }
  }
  delay(10);
}
""",
    {"timeout_ms": 800, "steps": [
        {"at_ms": 100, "action": {"serial_send": "5\n"}},
        {"at_ms": 200, "assert": {"led_lit": "led1", "expected": True}},
        {"at_ms": 200, "assert": {"led_lit": "led2", "expected": False}},
        {"at_ms": 200, "assert": {"led_lit": "led3", "expected": True}},
        {"at_ms": 200, "assert": {"led_lit": "led4", "expected": False}},
        {"at_ms": 300, "action": {"serial_send": "10\n"}},
        {"at_ms": 400, "assert": {"led_lit": "led1", "expected": False}},
        {"at_ms": 400, "assert": {"led_lit": "led2", "expected": True}},
        {"at_ms": 400, "assert": {"led_lit": "led4", "expected": True}},
        {"at_ms": 500, "action": {"serial_send": "42\n"}},
        {"at_ms": 600, "assert": {"serial_line_equals": 2, "text": "out of range"}}]},
    ("int ledPins[4] = {2, 3, 4, 5};", "int ledPins[4] = {6, 3, 4, 5};"),
    "led1.cathode",
)


def _drop_index(connections: list, pin: str) -> int:
    for i, conn in enumerate(connections):
        if any(ep.lower() == pin for ep in conn):
            return i
    raise ValueError(f"no connection touches {pin}")


def render(p: dict) -> dict[str, str]:
    physical = place(p["logical"])
    src_from, src_to = p["wrong_pin"]
    if p["firmware"].count(src_from) != 1:
        raise ValueError(f"{p['id']}: wrong-pin mutant source must occur exactly once")
    meta = {
        "id": p["id"],
        "level": p["level"],
        "mutants": {
            "firmware_wrong_pin": {"from": src_from, "to": src_to},
            "dropped_connection": {
                "pin": p["drop_pin"],
                "logical": _drop_index(p["logical"]["connections"], p["drop_pin"]),
                "physical": _drop_index(physical["connections"], p["drop_pin"]),
            },
        },
    }
    dump = lambda obj: json.dumps(obj, indent=2) + "\n"  # noqa: E731
    return {
        "description.md": p["description"] + "\n",
        "logical.json": dump(p["logical"]),
        "physical.json": dump(physical),
        "firmware.pcfw": p["firmware"],
        "testproc.json": dump(p["testproc"]),
        "meta.json": dump(meta),
    }


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    ap.add_argument("--check", action="store_true",
                    help="exit 1 if the files on disk differ from the generated ones")
    args = ap.parse_args(argv)
    stale = []
    for p in PROJECTS:
        folder = args.out / p["id"]
        for name, text in render(p).items():
            path = folder / name
            if args.check:
                if not path.exists() or path.read_text(encoding="utf-8") != text:
                    stale.append(str(path))
                continue
            folder.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
    if stale:
        print("out of date:\n  " + "\n  ".join(stale), file=sys.stderr)
        return 1
    if not args.check:
        print(f"wrote {len(PROJECTS)} projects to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
