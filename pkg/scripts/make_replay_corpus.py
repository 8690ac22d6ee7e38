"""Write a synthetic replay corpus with a known success profile.

For each (project, task, trial) the script flips a seeded coin: heads
writes the reference artifact, tails a mutant that the test procedure
rejects.  Success probability falls with the complexity level, so the
resulting report shows the usual downward trend, and the expected rates
are known exactly.  Answers are wrapped in prose and a fenced block like
a chat reply would be.

Usage: python scripts/make_replay_corpus.py OUT [--seed S] [--trials N]
       pcbench run --adapter replay:OUT --out report/
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from pcbench.harness import TASKS, load_dataset, mutant_artifact

# success probability per complexity level
LEVEL_P = {1: 0.9, 2: 0.7, 3: 0.5, 4: 0.3}


def wrap(task, body: str) -> str:
    lang = "json" if task.is_circuit_task else "cpp"
    return f"Here is my answer.\n\n```{lang}\n{body.strip()}\n```\n"


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out")
    ap.add_argument("--dataset")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    out = Path(args.out)
    expected: dict[str, dict[str, int]] = {}
    for p in load_dataset(args.dataset):
        for task in TASKS:
            folder = out / p.id / task.value
            folder.mkdir(parents=True, exist_ok=True)
            wins = 0
            for k in range(1, args.trials + 1):
                good = rng.random() < LEVEL_P[p.level]
                wins += good
                body = p.reference_artifact(task) if good else mutant_artifact(p, task)
                (folder / f"{k}.txt").write_text(wrap(task, body), encoding="utf-8")
            expected.setdefault(p.id, {})[task.value] = wins
    (out / "expected.json").write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n")
    total = sum(sum(v.values()) for v in expected.values())
    print(f"wrote {out} ({total} passing samples expected)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
