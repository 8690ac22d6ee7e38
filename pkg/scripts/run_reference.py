"""Evaluate the reference adapter on a dataset and write the report files.

Every task should score 100%; anything less points at a broken project
bundle (a procedure the reference itself fails) or a simulator regression.

Usage: python scripts/run_reference.py [--dataset DIR] [--out DIR] [--trials N]
"""

from __future__ import annotations

import argparse
import sys
import time

from pcbench.harness import (
    TASKS, ReferenceAdapter, TrialConfig, aggregate, collect_trials, load_dataset, write_reports,
)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset", help="dataset root (default: bundled corpus)")
    ap.add_argument("--out", default="runs/reference", help="report directory")
    ap.add_argument("--trials", type=int, default=1)
    args = ap.parse_args(argv)

    projects = load_dataset(args.dataset)
    start = time.perf_counter()
    results = collect_trials(projects, TASKS, ReferenceAdapter(projects), TrialConfig(args.trials))
    elapsed = time.perf_counter() - start
    write_reports(results, projects, args.out, "reference")
    overall = aggregate(results).overall
    for task in TASKS:
        print(f"{task.label:>18}: {100 * overall.task_rates[task]:5.1f}%")
    print(f"{len(results)} samples in {elapsed:.2f}s; reports in {args.out}")
    failing = sorted({r.project_id for r in results if not r.gated_success})
    if failing:
        print("reference failures:", ", ".join(failing), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
