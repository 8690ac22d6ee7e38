"""Acceptance criteria, one test per criterion.

Each test records PASS/FAIL through the ``acceptance`` fixture; the summary
lines are printed at the end of the pytest run.  Tolerances are pinned here.
Run ``python tests/test_acceptance.py`` for just this file.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

from pcbench.circuit import (
    COLUMNS, PHYSICAL, RAIL_INDICES, RAILS, ROWS, ComponentPin, parse_circuit, parse_circuit_data,
)
from pcbench.firmware import parse_program
from pcbench.harness import (
    TASKS, ReferenceAdapter, ReplayAdapter, TaskKind, TrialConfig, aggregate, collect_trials,
    dropped_connection_circuit, evaluate_sample, load_dataset, mutant_artifact, run_trials,
    success_breakdown, write_reports, wrong_pin_firmware,
)
from pcbench.netlist import build_nets
from pcbench.sim import ARDUINO_UNO, new_sim
from pcbench.testproc import run_procedure, simulate
from pcbench.validate import CATEGORIES, validate

from builders import clean_physical_data, doc, inject
from oracles import bfs_pin_partition, random_physical

FIXTURES = Path(__file__).parent / "fixtures"
SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"
BLINK = "led_blink_basic"

# pinned limits and tolerances
RULES_BUDGET_S = 1.0
ORACLE_CASES = 200
ORACLE_BUDGET_S = 5.0
FIXED_POINT_BUDGET_S = 30.0
ARITHMETIC_TOL = 0.001


# -- 1 -------------------------------------------------------------------------------

def _expected_group(point: str) -> tuple:
    """Independent statement of the breadboard rules for one board point name."""
    if "." in point:
        rail, _ = point.split(".")
        return ("rail", rail)
    col, row = int(point[:-1]), point[-1]
    return ("col", col, "top" if row in "abcde" else "bottom")


def test_c01_breadboard_rules(acceptance):
    start = time.perf_counter()
    points = [f"{c}{r}" for c in COLUMNS for r in ROWS] + \
             [f"{rail}.{i}" for rail in RAILS for i in RAIL_INDICES]
    # one LED pin on every point: 400 LEDs cover the 800 points
    comps = [{"id": "breadboard1", "type": "Breadboard"}]
    conns, pin_at = [], {}
    for n, (a, b) in enumerate(zip(points[0::2], points[1::2]), start=1):
        comps.append({"id": f"led{n}", "type": "LED"})
        for pin, point in (("anode", a), ("cathode", b)):
            conns.append([f"led{n}.{pin}", f"breadboard1.{point}"])
            pin_at[point] = ComponentPin(f"led{n}", pin)
    part = build_nets(parse_circuit_data({"components": comps, "connections": conns}, PHYSICAL))
    net_of = {point: part.net_id(pin) for point, pin in pin_at.items()}
    # every pair of points agrees with the rules
    bad = sum((net_of[a] == net_of[b]) != (_expected_group(a) == _expected_group(b))
              for a, b in itertools.combinations(points, 2))
    groups = {_expected_group(p) for p in points}
    elapsed = time.perf_counter() - start
    ok = bad == 0 and len(groups) == 60 * 2 + 4 and len(part) == len(groups) \
        and elapsed < RULES_BUDGET_S
    acceptance(1, "breadboard rules, all point pairs", ok,
               f"{len(points)} points, {bad} mismatches, {elapsed:.2f} s")
    assert bad == 0
    assert len(part) == len(groups) == 124
    assert elapsed < RULES_BUDGET_S


# -- 2 -------------------------------------------------------------------------------

def test_c02_net_oracle(acceptance):
    start = time.perf_counter()
    rng = random.Random(20240)
    mismatches = 0
    for _ in range(ORACLE_CASES):
        c = random_physical(rng, max_components=10, max_connections=40)
        want = {frozenset(ComponentPin(k[1], k[2]) for k in net) for net in bfs_pin_partition(c)}
        mismatches += build_nets(c).pin_partition() != want
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < ORACLE_BUDGET_S
    acceptance(2, "net partition equals BFS oracle", ok,
               f"{ORACLE_CASES - mismatches}/{ORACLE_CASES}, {elapsed:.2f} s")
    assert mismatches == 0
    assert elapsed < ORACLE_BUDGET_S


# -- 3 -------------------------------------------------------------------------------

def test_c03_validator_injection(acceptance):
    clean = doc(clean_physical_data(), PHYSICAL)
    passed, failures = 0, []
    for cat in CATEGORIES:
        for k in (1, 2, 3):
            report = validate(doc(inject(clean_physical_data(), cat.value, k), PHYSICAL),
                              clean, PHYSICAL)
            want = {c: (k if c is cat else 0) for c in CATEGORIES}
            if report.counts == want:
                passed += 1
            else:
                failures.append(f"{cat.value} k={k}: {report.counts}")
    ok = passed == 18
    acceptance(3, "validator injection suite", ok, f"{passed}/18")
    assert ok, failures


# -- 4 -------------------------------------------------------------------------------

def test_c04_reference_fixed_point(acceptance, projects):
    start = time.perf_counter()
    results = collect_trials(projects, TASKS, ReferenceAdapter(projects), TrialConfig(trials=1))
    wins = sum(r.gated_success for r in results)
    elapsed = time.perf_counter() - start
    ok = wins == len(results) == 4 * len(projects) and elapsed < FIXED_POINT_BUDGET_S
    acceptance(4, "reference artifacts are gated successes", ok,
               f"{wins}/{len(results)}, {elapsed:.2f} s")
    assert wins == len(results) == 4 * len(projects)
    assert elapsed < FIXED_POINT_BUDGET_S


# -- 5 -------------------------------------------------------------------------------

def _event_log(circuit, program, procedure) -> str:
    # compared raw: timestamps come from the virtual clock, so no normalization is needed
    sim = new_sim(circuit, program)
    run_procedure(procedure, sim)
    return sim.event_log_jsonl()


def test_c05_logical_physical_equivalence(acceptance, projects):
    differ = [p.id for p in projects
              if _event_log(p.logical, p.program, p.testproc)
              != _event_log(p.physical, p.program, p.testproc)]
    ok = not differ
    acceptance(5, "identical event logs on L and P", ok,
               f"{len(projects) - len(differ)}/{len(projects)} projects")
    assert ok, differ


# -- 6 -------------------------------------------------------------------------------

def test_c06_gating_rule(acceptance, by_id):
    candidate = (FIXTURES / "gating_physical.json").read_text()
    r = evaluate_sample(by_id[BLINK], TaskKind.GEN_PHYSICAL, candidate)
    breakdown = success_breakdown([r]).as_tuple()
    ok = r.functional and not r.gated_success and breakdown == (1, 1, 0, 0)
    acceptance(6, "pin conflict gates a functional layout", ok,
               f"functional={r.functional}, gated={r.gated_success}, breakdown={breakdown}")
    assert r.functional is True
    assert r.gated_success is False
    assert breakdown == (1.0, 1.0, 0.0, 0.0)


# -- 7 -------------------------------------------------------------------------------

def _wrap(task: TaskKind, body: str) -> str:
    return f"```{'json' if task.is_circuit_task else 'cpp'}\n{body}\n```\n"


def test_c07_overall_arithmetic(acceptance, by_id, tmp_path):
    # 250 trials per task is the smallest count giving all four rates exactly
    n = 250
    wins = {TaskKind.GEN_LOGICAL: 120, TaskKind.GEN_PHYSICAL: 3,
            TaskKind.CODE_FROM_LOGICAL: 123, TaskKind.CODE_FROM_PHYSICAL: 128}
    p = by_id[BLINK]
    for task, w in wins.items():
        folder = tmp_path / p.id / task.value
        folder.mkdir(parents=True)
        good, bad = _wrap(task, p.reference_artifact(task)), _wrap(task, mutant_artifact(p, task))
        for k in range(1, n + 1):
            (folder / f"{k}.txt").write_text(good if k <= w else bad)
    results = collect_trials([p], TASKS, ReplayAdapter(tmp_path), TrialConfig(trials=n))
    t = aggregate(results).overall
    rates = tuple(round(t.task_rates[task], 6) for task in TASKS)
    got = (t.circuit_overall, t.code_overall, t.total_overall)
    want = (0.246, 0.502, 0.374)
    ok = rates == (0.480, 0.012, 0.492, 0.512) and all(
        abs(g - w) <= ARITHMETIC_TOL for g, w in zip(got, want))
    acceptance(7, "overall columns from task rates", ok,
               "circuit {:.3f}, code {:.3f}, total {:.3f}".format(*got))
    assert rates == (0.480, 0.012, 0.492, 0.512)
    for g, w in zip(got, want):
        assert g == pytest.approx(w, abs=ARITHMETIC_TOL)


# -- 8 -------------------------------------------------------------------------------

def test_c08_mutation_sensitivity(acceptance, projects):
    false_passes = []
    for p in projects:
        bad_fw = parse_program(wrong_pin_firmware(p), ARDUINO_UNO.constants)
        for kind in ("logical", "physical"):
            if simulate(p.circuit(kind), bad_fw, p.testproc).passed:
                false_passes.append(f"{p.id} wrong pin on {kind}")
            dropped = parse_circuit(dropped_connection_circuit(p, kind), kind)
            if simulate(dropped, p.program, p.testproc).passed:
                false_passes.append(f"{p.id} dropped connection on {kind}")
    ok = not false_passes
    acceptance(8, "mutants fail their test procedure", ok,
               f"{len(false_passes)} false passes over {4 * len(projects)} mutant runs")
    assert ok, false_passes


# -- 9 -------------------------------------------------------------------------------

def test_c09_trial_protocol(acceptance, by_id, tmp_path):
    p = by_id[BLINK]
    task = TaskKind.CODE_FROM_PHYSICAL
    folder = tmp_path / p.id / task.value
    folder.mkdir(parents=True)
    for k, good in enumerate([True, False, True, False, True], start=1):
        (folder / f"{k}.txt").write_text(p.firmware if good else wrong_pin_firmware(p))
    default_n = run_trials.__defaults__[0]
    rate = run_trials(p, task, ReplayAdapter(tmp_path))
    ok = default_n == 5 and rate == 0.6
    acceptance(9, "five trials by default, 3 of 5 gives 0.6", ok, f"n={default_n}, rate={rate}")
    assert default_n == 5
    assert rate == 0.6


# -- 10 ------------------------------------------------------------------------------

def test_c10_determinism(acceptance, tmp_path):
    sys.path.insert(0, str(SCRIPTS))
    try:
        import make_replay_corpus
    finally:
        sys.path.remove(str(SCRIPTS))
    corpus = tmp_path / "replay"
    assert make_replay_corpus.main([str(corpus), "--seed", "0"]) == 0
    projects = load_dataset()
    outputs = []
    for run, parallelism in (("a", 1), ("b", 4)):
        results = collect_trials(projects, TASKS, ReplayAdapter(corpus),
                                 TrialConfig(parallelism=parallelism))
        paths = write_reports(results, projects, tmp_path / run, f"replay:{corpus.name}")
        outputs.append({x.name: x.read_bytes() for x in paths})
    same = outputs[0] == outputs[1]
    acceptance(10, "two replay runs give byte-identical reports", same,
               f"{len(outputs[0])} files")
    assert same


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
