"""Sanity checks over every project of a dataset.

For each project: the reference firmware passes on both circuits, the two
circuits produce identical event logs, the logical and physical pin
partitions agree, and both recorded mutants are caught on both circuits.

Usage: python scripts/check_corpus.py [--dataset DIR]
"""

from __future__ import annotations

import argparse
import sys
import time

from pcbench.circuit import parse_circuit
from pcbench.firmware import parse_program
from pcbench.harness import dropped_connection_circuit, load_dataset, wrong_pin_firmware
from pcbench.netlist import same_pin_partition
from pcbench.sim import ARDUINO_UNO, new_sim
from pcbench.testproc import run_procedure, simulate


def check(p) -> list[str]:
    problems = []
    logs = []
    for kind, circuit in (("logical", p.logical), ("physical", p.physical)):
        sim = new_sim(circuit, p.program)
        verdict = run_procedure(p.testproc, sim)
        if not verdict.passed:
            problems.append(f"reference fails on {kind}: {verdict.to_json()}")
        logs.append(sim.event_log_jsonl())
    if logs[0] != logs[1]:
        problems.append("logical and physical event logs differ")
    if not same_pin_partition(p.logical, p.physical):
        problems.append("pin partitions differ")
    bad_fw = parse_program(wrong_pin_firmware(p), ARDUINO_UNO.constants)
    for kind, circuit in (("logical", p.logical), ("physical", p.physical)):
        if simulate(circuit, bad_fw, p.testproc).passed:
            problems.append(f"wrong-pin mutant passes on {kind}")
        dropped = parse_circuit(dropped_connection_circuit(p, kind), kind)
        if simulate(dropped, p.program, p.testproc).passed:
            problems.append(f"dropped-connection mutant passes on {kind}")
    return problems


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset")
    args = ap.parse_args(argv)
    bad = 0
    for p in load_dataset(args.dataset):
        start = time.perf_counter()
        problems = check(p)
        status = "ok" if not problems else "FAIL"
        print(f"L{p.level} {p.id:<28} {status:<4} {time.perf_counter() - start:.2f}s")
        for msg in problems:
            print(f"    {msg}")
        bad += bool(problems)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
