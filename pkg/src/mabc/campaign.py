"""Experiment harness: campaign configuration, execution across problems and
seeds, CSV/manifest emission, and comparison of algorithm mean-error tables
(rank points plus the Friedman test). File schemas are documented in OUTPUT.md."""

import concurrent.futures
import csv
import json
import os
import subprocess

from . import __version__
from .benchmarks import PROBLEM_IDS, compose_problem, problem_class
from .engine import DEFAULT_CHECKPOINT_FRACTIONS, MabcConfig, run
from .stats import CampaignSummary, FriedmanResult, RunRecord, SummaryRow, \
    friedman_test, rank_points, summarize

CLASS_LABELS = ("I", "II", "III", "IV", "V")

_CLASS_BY_KIND = {
    "separable": "I",
    "single-group": "II",
    "half-groups": "III",
    "all-groups": "IV",
    "fully-nonseparable": "V",
}


def class_label(problem_id: str) -> str:
    return _CLASS_BY_KIND[problem_class(problem_id)]


def _problem_order(problem_id: str) -> int:
    return int(problem_id[1:])


class CampaignConfig:
    """Everything a campaign needs; every field lands in the manifest."""

    FIELDS = ("problems", "dimension", "group_size", "runs", "seed", "data_seed",
              "checkpoint_fractions", "trace_stride", "jobs")

    def __init__(self, problems=PROBLEM_IDS, dimension=1000, group_size=50,
                 runs=25, seed=1, data_seed=1, engine: MabcConfig | None = None,
                 checkpoint_fractions=DEFAULT_CHECKPOINT_FRACTIONS,
                 trace_stride=1000, jobs=1):
        self.problems = tuple(problems)
        self.dimension = int(dimension)
        self.group_size = int(group_size)
        self.runs = int(runs)
        self.seed = int(seed)
        self.data_seed = int(data_seed)
        self.engine = engine if engine is not None else MabcConfig()
        self.checkpoint_fractions = tuple(float(f) for f in checkpoint_fractions)
        self.trace_stride = int(trace_stride)
        self.jobs = int(jobs)
        self.validate()

    def validate(self) -> None:
        if not self.problems:
            raise ValueError("campaign needs at least one problem")
        unknown = [p for p in self.problems if p not in PROBLEM_IDS]
        if unknown:
            raise ValueError(f"unknown problem ids: {unknown}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.checkpoint_fractions:
            raise ValueError("at least one checkpoint fraction is required")
        if any(not 0.0 < f <= 1.0 for f in self.checkpoint_fractions):
            raise ValueError("checkpoint fractions must lie in (0, 1]")
        if self.trace_stride < 1:
            raise ValueError("trace_stride must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @property
    def checkpoints(self) -> tuple[int, ...]:
        points = sorted({int(round(f * self.engine.max_evaluations))
                         for f in self.checkpoint_fractions})
        return tuple(max(p, 1) for p in points)

    def asdict(self) -> dict:
        out = {name: getattr(self, name) for name in self.FIELDS}
        out["problems"] = list(self.problems)
        out["checkpoint_fractions"] = list(self.checkpoint_fractions)
        out["engine"] = self.engine.asdict()
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "CampaignConfig":
        if "config" in payload:  # accept a whole manifest
            payload = payload["config"]
        fields = dict(payload)
        engine = fields.pop("engine", None)
        return cls(engine=MabcConfig(**engine) if engine else None, **fields)


def _build_identifier() -> str:
    try:
        commit = subprocess.run(["git", "rev-parse", "--short", "HEAD"],
                                capture_output=True, text=True, timeout=5,
                                cwd=os.path.dirname(os.path.abspath(__file__)))
        git_id = commit.stdout.strip() if commit.returncode == 0 else "unknown"
    except OSError:
        git_id = "unknown"
    return f"mabc {__version__} ({git_id})"


def write_manifest(config: CampaignConfig, path: str) -> None:
    manifest = {"build": _build_identifier(), "config": config.asdict()}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_manifest(path: str) -> CampaignConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return CampaignConfig.from_dict(json.load(handle))


# ---------------------------------------------------------------------------
# CSV emission. Machine-read files write floats with repr() so parsing them
# back is lossless; the human-facing comparison table uses %.2e rendering.

def _write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def write_trace_csv(record: RunRecord, path: str) -> None:
    _write_csv(path, ("evaluations", "best_error"),
               ((fes, repr(err)) for fes, err in record.trace))


def write_summary_csv(summary: CampaignSummary, path: str) -> None:
    rows = []
    for (pid, fes) in sorted(summary.rows, key=lambda k: (_problem_order(k[0]), k[1])):
        row = summary.rows[(pid, fes)]
        rows.append((pid, fes, repr(row.best), repr(row.median), repr(row.worst),
                     repr(row.mean), repr(row.std), row.runs))
    _write_csv(path, ("problem", "evaluations", "best", "median", "worst",
                      "mean", "std", "runs"), rows)


def read_summary_csv(path: str) -> CampaignSummary:
    rows = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for line in csv.DictReader(handle):
            key = (line["problem"], int(line["evaluations"]))
            rows[key] = SummaryRow(float(line["best"]), float(line["median"]),
                                   float(line["worst"]), float(line["mean"]),
                                   float(line["std"]), int(line["runs"]))
    if not rows:
        raise ValueError(f"{path} holds no summary rows")
    return CampaignSummary(rows)


def write_means_csv(means_by_algorithm: dict[str, dict[str, float]], path: str) -> None:
    algorithms = list(means_by_algorithm)
    problems = sorted(next(iter(means_by_algorithm.values())), key=_problem_order)
    rows = [(pid, *(repr(means_by_algorithm[a][pid]) for a in algorithms))
            for pid in problems]
    _write_csv(path, ("problem", *algorithms), rows)


def read_means_csv(path: str) -> dict[str, dict[str, float]]:
    """Wide mean-error table: one `problem` column plus one column per algorithm."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or "problem" not in reader.fieldnames:
            raise ValueError(f"{path} needs a 'problem' column")
        algorithms = [name for name in reader.fieldnames if name != "problem"]
        out = {name: {} for name in algorithms}
        for line in reader:
            for name in algorithms:
                out[name][line["problem"]] = float(line[name])
    if not algorithms:
        raise ValueError(f"{path} holds no algorithm columns")
    return out


# ---------------------------------------------------------------------------
# Campaign execution.

def _run_one(args):
    problem_id, dimension, group_size, data_seed, engine_fields, seed, \
        checkpoints, trace_stride = args
    problem = compose_problem(problem_id, dimension, group_size, data_seed)
    return run(problem, MabcConfig(**engine_fields), seed,
               checkpoints=checkpoints, trace_stride=trace_stride)


def execute_runs(config: CampaignConfig) -> dict[str, list[RunRecord]]:
    """All runs of a campaign, keyed by problem id; run r uses seed base+r."""
    tasks = [(pid, config.dimension, config.group_size, config.data_seed,
              config.engine.asdict(), config.seed + r, config.checkpoints,
              config.trace_stride)
             for pid in config.problems for r in range(config.runs)]
    if config.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_run_one, tasks))
    else:
        records = [_run_one(task) for task in tasks]
    by_problem: dict[str, list[RunRecord]] = {pid: [] for pid in config.problems}
    for record in records:
        by_problem[record.problem_id].append(record)
    for group in by_problem.values():
        group.sort(key=lambda r: r.seed)
    return by_problem


def emit_convergence(records: list[RunRecord], stride: int, path: str,
                     checkpoints=()) -> None:
    """Mean/min/max best error over runs of one problem, one row per `stride`
    evaluations plus every checkpoint."""
    if not records:
        raise ValueError("emit_convergence needs at least one run record")
    grids = {tuple(fes for fes, _ in r.trace) for r in records}
    if len(grids) != 1:
        raise ValueError("runs disagree on their trace grid")
    (grid,) = grids
    checkpoint_set = set(checkpoints)
    rows = []
    for index, fes in enumerate(grid):
        if not (fes % stride == 0 or fes in checkpoint_set):
            continue
        errors = [r.trace[index][1] for r in records]
        rows.append((fes, repr(sum(errors) / len(errors)),
                     repr(min(errors)), repr(max(errors))))
    _write_csv(path, ("evaluations", "mean_best_error", "min_best_error",
                      "max_best_error"), rows)


def run_campaign(config: CampaignConfig, out_dir: str) -> CampaignSummary:
    """Execute the campaign and write, under `out_dir`: one trace CSV per run,
    a convergence CSV per problem, summary.csv, and manifest.json."""
    config.validate()
    os.makedirs(out_dir, exist_ok=True)
    write_manifest(config, os.path.join(out_dir, "manifest.json"))
    by_problem = execute_runs(config)
    all_records = []
    for pid in sorted(by_problem, key=_problem_order):
        for index, record in enumerate(by_problem[pid]):
            write_trace_csv(record, os.path.join(out_dir, f"trace_{pid}_run{index:02d}.csv"))
        emit_convergence(by_problem[pid], config.trace_stride,
                         os.path.join(out_dir, f"convergence_{pid}.csv"),
                         checkpoints=config.checkpoints)
        all_records.extend(by_problem[pid])
    summary = summarize(all_records)
    write_summary_csv(summary, os.path.join(out_dir, "summary.csv"))
    return summary


# ---------------------------------------------------------------------------
# Comparison.

class ComparisonTable:
    """Rank points per problem class (when exactly four algorithms compete)
    plus the Friedman outcome."""

    def __init__(self, algorithms, class_points, totals, friedman: FriedmanResult,
                 at_evaluations: int | None = None):
        self.algorithms = list(algorithms)
        self.class_points = class_points  # {class label: {algorithm: points}} or None
        self.totals = totals              # {algorithm: points} or None
        self.friedman = friedman
        self.at_evaluations = at_evaluations

    def render(self) -> str:
        lines = []
        if self.class_points is not None:
            labels = [label for label in CLASS_LABELS if label in self.class_points]
            header = ["alg."] + labels + ["sum"]
            lines.append("  ".join(f"{h:>8}" for h in header))
            for name in self.algorithms:
                cells = [f"{self.class_points[label][name]:>8}" for label in labels]
                lines.append("  ".join([f"{name:>8}", *cells, f"{self.totals[name]:>8}"]))
        else:
            lines.append("rank points skipped (needs exactly 4 algorithms)")
        ranks = ", ".join(f"{name}={self.friedman.mean_ranks[name]:.2f}"
                          for name in self.algorithms)
        lines.append(f"friedman: statistic={self.friedman.statistic:.3f} "
                     f"df={self.friedman.degrees_of_freedom} "
                     f"critical={self.friedman.critical_value:.3f} "
                     f"{self.friedman.p_indicator} "
                     f"{'reject' if self.friedman.reject else 'no rejection'}")
        lines.append(f"mean ranks: {ranks}")
        return "\n".join(lines)

    def write_csv(self, path: str) -> None:
        rows = []
        if self.class_points is not None:
            labels = [label for label in CLASS_LABELS if label in self.class_points]
            for name in self.algorithms:
                rows.append((name,
                             *(self.class_points[label][name] for label in labels),
                             self.totals[name],
                             f"{self.friedman.mean_ranks[name]:.4f}"))
            header = ("algorithm", *labels, "total", "mean_rank")
        else:
            for name in self.algorithms:
                rows.append((name, f"{self.friedman.mean_ranks[name]:.4f}"))
            header = ("algorithm", "mean_rank")
        _write_csv(path, header, rows)


def compare_means(means_by_algorithm: dict[str, dict[str, float]],
                  alpha: float = 0.05,
                  at_evaluations: int | None = None) -> ComparisonTable:
    """Rank-points table (exactly four algorithms) and Friedman test (two or
    more) over per-problem mean errors. All inputs must cover one problem set."""
    if len(means_by_algorithm) < 2:
        raise ValueError("comparison needs at least two algorithms")
    problem_sets = {frozenset(means) for means in means_by_algorithm.values()}
    if len(problem_sets) != 1:
        raise ValueError("algorithms cover different problem sets")
    problems = sorted(next(iter(problem_sets)), key=_problem_order)
    if len(problems) < 2:
        raise ValueError("comparison needs at least two problems")

    algorithms = list(means_by_algorithm)
    matrix = {name: [means_by_algorithm[name][pid] for pid in problems]
              for name in algorithms}
    friedman = friedman_test(matrix, alpha=alpha)

    class_points = None
    totals = None
    if len(algorithms) == 4:
        class_points = {}
        totals = {name: 0 for name in algorithms}
        for pid in problems:
            points = rank_points({name: means_by_algorithm[name][pid]
                                  for name in algorithms})
            label = class_label(pid)
            bucket = class_points.setdefault(label, {name: 0 for name in algorithms})
            for name, awarded in points.items():
                bucket[name] += awarded
                totals[name] += awarded
    return ComparisonTable(algorithms, class_points, totals, friedman, at_evaluations)


def summary_to_means(summary: CampaignSummary, at_evaluations: int) -> dict[str, float]:
    means = summary.mean_errors(at_evaluations)
    if not means:
        raise ValueError(f"summary has no checkpoint at {at_evaluations} evaluations")
    return means
