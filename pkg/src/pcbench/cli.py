"""``pcbench`` command line.

Exit status: 0 success, 1 semantic failure (validation findings, failing
test procedure, parse errors in inputs), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from .circuit import LOGICAL, PHYSICAL, CircuitParseError, detect_kind, parse_circuit, serialize_circuit
from .firmware import FirmwareProgramError, FirmwareSyntaxError, parse_program
from .netlist import reduce_to_logical
from .sim import ARDUINO_UNO, BoardProfile, ProfileError, load_profile
from .testproc import TestProcError, parse_testproc, simulate
from .validate import validate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass



def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _profile(args) -> BoardProfile:
    if not getattr(args, "profile", None):
        return ARDUINO_UNO
    try:
        return load_profile(args.profile)
    except OSError as exc:
        raise UsageError(f"cannot read profile {args.profile}: {exc.strerror}") from None
    except (ProfileError, ValueError) as exc:
        raise UsageError(f"bad profile {args.profile}: {exc}") from None


def _emit(obj, pretty: bool) -> None:
    print(json.dumps(obj, indent=2 if pretty else None, sort_keys=True))


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


# -- subcommands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    cand_text, ref_text = _read(args.candidate), _read(args.reference)
    kind = args.kind or detect_kind(ref_text)
    try:
        candidate = parse_circuit(cand_text, kind)
        reference = parse_circuit(ref_text, kind)
    except CircuitParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = validate(candidate, reference, kind)
    _emit(report.to_dict(), args.pretty)
    return EXIT_OK if report.clean else EXIT_FAIL


def cmd_reduce(args) -> int:
    try:
        physical = parse_circuit(_read(args.physical), PHYSICAL)
    except CircuitParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(serialize_circuit(reduce_to_logical(physical), indent=2 if args.pretty else None))
    return EXIT_OK


def cmd_simulate(args) -> int:
    profile = _profile(args)
    circuit_text, fw_text, tp_text = _read(args.circuit), _read(args.firmware), _read(args.testproc)
    try:
        circuit = parse_circuit(circuit_text, args.kind or detect_kind(circuit_text))
        program = parse_program(fw_text, profile.constants)
        procedure = parse_testproc(tp_text)
    except (CircuitParseError, FirmwareSyntaxError, FirmwareProgramError, TestProcError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    verdict = simulate(circuit, program, procedure, profile)
    _emit(verdict.to_dict(include_trace=args.trace), args.pretty)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def _load_projects(args, profile):
    from .harness import DatasetError, load_dataset_lenient

    root = Path(args.dataset) if args.dataset else None
    levels = set(args.level) if getattr(args, "level", None) else None
    ids = set(args.project) if getattr(args, "project", None) else None
    try:
        return load_dataset_lenient(root, profile, levels, ids)
    except DatasetError as exc:
        raise UsageError(str(exc)) from None


def cmd_run(args) -> int:
    from .harness import (
        TASKS, AdapterError, PromptOptions, TaskKind, TrialConfig, collect_trials,
        parse_adapter_spec, refine_loop, write_reports,
    )
    from .harness.report import render_markdown

    profile = _profile(args)
    projects, errors = _load_projects(args, profile)
    for e in errors:
        print(f"warning: skipped project: {e}", file=sys.stderr)
    try:
        tasks = [TaskKind.parse(t) for t in args.task] if args.task else list(TASKS)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        adapter = parse_adapter_spec(args.adapter, projects)
    except AdapterError as exc:
        raise UsageError(str(exc)) from None
    options = PromptOptions(chain_of_thought=args.cot)
    if args.refine:
        results = []
        for p in projects:
            for t in tasks:
                for k in range(1, args.trials + 1):
                    results.append(refine_loop(p, t, adapter, args.refine, k, options, profile))
    else:
        config = TrialConfig(args.trials, args.parallelism, options, profile)
        results = collect_trials(projects, tasks, adapter, config)
    if args.out:
        write_reports(results, projects, args.out, adapter.name)
    if args.pretty:
        print(render_markdown(results, adapter.name))
    else:
        from .harness import aggregate

        agg = aggregate(results)
        _emit({"samples": len(results),
               "task_rates": {t.value: r for t, r in agg.overall.task_rates.items()},
               "circuit_overall": agg.overall.circuit_overall,
               "code_overall": agg.overall.code_overall,
               "total_overall": agg.overall.total_overall}, False)
    return EXIT_OK


def cmd_metrics(args) -> int:
    from .harness import dataset_metrics_csv

    projects, errors = _load_projects(args, _profile(args))
    for e in errors:
        print(f"error: {e}", file=sys.stderr)
    sys.stdout.write(dataset_metrics_csv(projects))
    return EXIT_FAIL if errors else EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcbench", description="Physical-computing benchmark tools.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, dataset=False):
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.add_argument("--profile", help="board profile JSON (default: built-in arduino-uno)")
        if dataset:
            p.add_argument("--dataset", default=os.environ.get("PCBENCH_DATASET"),
                           help="dataset root (default: $PCBENCH_DATASET or bundled corpus)")
            p.add_argument("--level", type=int, action="append", choices=(1, 2, 3, 4),
                           help="only projects of this level (repeatable)")
            p.add_argument("--project", action="append", help="only this project (repeatable)")

    p = sub.add_parser("validate", help="compare a candidate circuit with a reference")
    p.add_argument("candidate")
    p.add_argument("reference")
    p.add_argument("--kind", choices=(LOGICAL, PHYSICAL))
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reduce", help="physical layout to logical circuit")
    p.add_argument("physical")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("simulate", help="run a test procedure on circuit + firmware")
    p.add_argument("circuit")
    p.add_argument("firmware")
    p.add_argument("testproc")
    p.add_argument("--kind", choices=(LOGICAL, PHYSICAL))
    p.add_argument("--trace", action="store_true", help="include the event log")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("run", help="evaluate an adapter over the dataset")
    p.add_argument("--adapter", required=True,
                   help="replay:DIR | exec:CMD | http:URL | reference")
    p.add_argument("--task", action="append", help="task to run (repeatable; default all)")
    p.add_argument("--trials", type=_positive, default=5)
    p.add_argument("--parallelism", type=_positive, default=1)
    p.add_argument("--out", help="directory for report files")
    p.add_argument("--cot", action="store_true", help="chain-of-thought prompt variant")
    p.add_argument("--refine", type=_positive, metavar="TURNS",
                   help="refinement loop with up to TURNS turns per trial")
    common(p, dataset=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("metrics", help="per-level size statistics of a dataset")
    common(p, dataset=True)
    p.set_defaults(func=cmd_metrics)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
