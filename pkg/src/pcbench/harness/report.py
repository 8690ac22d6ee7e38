"""Aggregation of sample results and the report files written from them.

Output is a pure function of the results: rows are sorted and no clock or
host information is written, so repeated runs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from statistics import mean
from typing import Iterable, Sequence

from ..circuit import LOGICAL, PHYSICAL, circuit_stats
from ..firmware import code_metrics
from ..validate import CATEGORIES, ErrorCategory
from .dataset import ProjectBundle
from .evaluate import SampleResult
from .tasks import CIRCUIT_TASKS, CODE_TASKS, TASKS, TaskKind

FILTER_NAMES = ("functional", "no_bypass", "no_conflict", "both")


def _mean_or_none(values: Iterable[float]) -> float | None:
    values = list(values)
    return mean(values) if values else None


@dataclass
class RateTable:
    """Per-task gated success rates and the three overall columns."""

    task_rates: dict[TaskKind, float] = field(default_factory=dict)
    samples: dict[TaskKind, int] = field(default_factory=dict)

    @property
    def circuit_overall(self) -> float | None:
        return _mean_or_none(self.task_rates[t] for t in CIRCUIT_TASKS if t in self.task_rates)

    @property
    def code_overall(self) -> float | None:
        return _mean_or_none(self.task_rates[t] for t in CODE_TASKS if t in self.task_rates)

    @property
    def total_overall(self) -> float | None:
        return _mean_or_none(self.task_rates[t] for t in TASKS if t in self.task_rates)

    def row(self) -> list[float | None]:
        return ([self.task_rates.get(t) for t in TASKS]
                + [self.circuit_overall, self.code_overall, self.total_overall])


def rate_table(results: Iterable[SampleResult]) -> RateTable:
    buckets: dict[TaskKind, list[bool]] = {}
    for r in results:
        buckets.setdefault(r.task, []).append(r.gated_success)
    table = RateTable()
    for task in TASKS:
        if task in buckets:
            table.task_rates[task] = sum(buckets[task]) / len(buckets[task])
            table.samples[task] = len(buckets[task])
    return table


@dataclass
class AggregateReport:
    overall: RateTable
    by_level: dict[int, RateTable]
    by_project: dict[str, RateTable]


def aggregate(results: Sequence[SampleResult]) -> AggregateReport:
    """Task rates with circuit, code and total overalls as unweighted means of task rates."""
    levels: dict[int, list[SampleResult]] = {}
    projects: dict[str, list[SampleResult]] = {}
    for r in results:
        levels.setdefault(r.level, []).append(r)
        projects.setdefault(r.project_id, []).append(r)
    return AggregateReport(
        overall=rate_table(results),
        by_level={lv: rate_table(rs) for lv, rs in sorted(levels.items())},
        by_project={pid: rate_table(rs) for pid, rs in sorted(projects.items())},
    )


def error_stats(results: Iterable[SampleResult]) -> dict[str, dict[ErrorCategory, float]]:
    """Mean error count per category, split by circuit kind.

    Only circuit-task samples that parsed (and so have a validation report)
    contribute.  Kinds without samples are omitted.
    """
    counts: dict[str, list[dict[ErrorCategory, int]]] = {}
    for r in results:
        if r.task.is_circuit_task and r.validation is not None:
            counts.setdefault(r.task.circuit_kind, []).append(r.validation.counts)
    out = {}
    for kind in (LOGICAL, PHYSICAL):
        if kind in counts:
            rows = counts[kind]
            out[kind] = {c: sum(row[c] for row in rows) / len(rows) for c in CATEGORIES}
    return out


@dataclass(frozen=True)
class FilterRates:
    functional: float
    no_bypass: float
    no_conflict: float
    both: float
    samples: int

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.functional, self.no_bypass, self.no_conflict, self.both)


def success_breakdown(results: Iterable[SampleResult]) -> FilterRates | None:
    """Physical-generation success under progressively stricter filters."""
    rows = [r.filters for r in results if r.task is TaskKind.GEN_PHYSICAL]
    if not rows:
        return None
    n = len(rows)
    rates = [sum(row[i] for row in rows) / n for i in range(4)]
    return FilterRates(*rates, samples=n)


@dataclass(frozen=True)
class ProjectMetrics:
    project_id: str
    level: int
    lines_of_code: int
    cyclomatic_complexity: int
    logical_components: int
    logical_connections: int
    physical_components: int
    physical_connections: int


def project_metrics(p: ProjectBundle) -> ProjectMetrics:
    code = code_metrics(p.program)
    ls, ps = circuit_stats(p.logical), circuit_stats(p.physical)
    return ProjectMetrics(p.id, p.level, code.lines_of_code, code.cyclomatic_complexity,
                          ls.num_components, ls.num_connections,
                          ps.num_components, ps.num_connections)


_METRIC_FIELDS = ("lines_of_code", "cyclomatic_complexity", "logical_components",
                  "logical_connections", "physical_components", "physical_connections")


def dataset_metrics_csv(projects: Iterable[ProjectBundle]) -> str:
    """Per-level means of code and circuit size (one row per level present)."""
    by_level: dict[int, list[ProjectMetrics]] = {}
    for p in projects:
        by_level.setdefault(p.level, []).append(project_metrics(p))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "projects"] + list(_METRIC_FIELDS))
    for level in sorted(by_level):
        rows = by_level[level]
        w.writerow([level, len(rows)] + [_fmt(mean(getattr(m, f) for m in rows))
                                         for f in _METRIC_FIELDS])
    return buf.getvalue()


# -- emitters ------------------------------------------------------------------

def _fmt(x: float | None, digits: int = 3) -> str:
    return "" if x is None else f"{x:.{digits}f}"


def _pct(x: float | None) -> str:
    return "-" if x is None else f"{100 * x:.1f}"


_RATE_HEADER = [t.label for t in TASKS] + ["CircuitOverall", "CodeOverall", "TotalOverall"]


def _md_table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def render_markdown(results: Sequence[SampleResult], adapter_name: str = "") -> str:
    agg = aggregate(results)
    parts = ["# Benchmark report\n"]
    if adapter_name:
        parts.append(f"Adapter: `{adapter_name}`\n")
    parts.append(f"Samples: {len(results)}\n")
    parts.append("## Success rate (%) by task\n")
    parts.append(_md_table(["Source"] + _RATE_HEADER,
                           [["all"] + [_pct(x) for x in agg.overall.row()]]))
    parts.append("## Success rate (%) by complexity level\n")
    parts.append(_md_table(["Level"] + _RATE_HEADER,
                           [[str(lv)] + [_pct(x) for x in t.row()]
                            for lv, t in agg.by_level.items()]))
    stats = error_stats(results)
    parts.append("## Mean error counts by circuit kind\n")
    parts.append(_md_table(["Kind"] + [c.value for c in CATEGORIES],
                           [[k] + [f"{v[c]:.2f}" for c in CATEGORIES] for k, v in stats.items()]))
    fr = success_breakdown(results)
    parts.append("## Physical generation under stricter filters (%)\n")
    rows = [[_pct(x) for x in fr.as_tuple()] + [str(fr.samples)]] if fr else []
    parts.append(_md_table(["Functional", "+NoBypass", "+NoConflict", "+Both", "Samples"], rows))
    return "\n".join(parts)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def table_rates_csv(results: Sequence[SampleResult]) -> str:
    agg = aggregate(results)
    rows = [["scope"] + _RATE_HEADER, ["all"] + [_fmt(x) for x in agg.overall.row()]]
    rows += [[f"level{lv}"] + [_fmt(x) for x in t.row()] for lv, t in agg.by_level.items()]
    return _csv(rows)


def error_stats_csv(results: Sequence[SampleResult]) -> str:
    rows = [["kind"] + [c.value for c in CATEGORIES]]
    rows += [[k] + [_fmt(v[c]) for c in CATEGORIES] for k, v in error_stats(results).items()]
    return _csv(rows)


def filters_csv(results: Sequence[SampleResult]) -> str:
    rows = [list(FILTER_NAMES) + ["samples"]]
    fr = success_breakdown(results)
    if fr:
        rows.append([_fmt(x) for x in fr.as_tuple()] + [fr.samples])
    return _csv(rows)


def per_project_csv(results: Sequence[SampleResult], projects: Iterable[ProjectBundle]) -> str:
    agg = aggregate(results)
    rows = [["project"] + ["level"] + list(_METRIC_FIELDS) + [t.label for t in TASKS]]
    for p in sorted(projects, key=lambda b: b.id):
        m = project_metrics(p)
        table = agg.by_project.get(p.id, RateTable())
        rows.append([p.id, p.level] + [getattr(m, f) for f in _METRIC_FIELDS]
                    + [_fmt(table.task_rates.get(t)) for t in TASKS])
    return _csv(rows)


def samples_jsonl(results: Sequence[SampleResult]) -> str:
    return "".join(r.to_json() + "\n" for r in results)


def write_reports(results: Sequence[SampleResult], projects: Iterable[ProjectBundle],
                  out_dir: str | Path, adapter_name: str = "") -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "report.md": render_markdown(results, adapter_name),
        "rates.csv": table_rates_csv(results),
        "error_counts.csv": error_stats_csv(results),
        "physical_filters.csv": filters_csv(results),
        "per_project.csv": per_project_csv(results, projects),
        "samples.jsonl": samples_jsonl(results),
    }
    written = []
    for name, text in files.items():
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written
