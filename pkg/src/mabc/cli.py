"""Command-line harness: `run` (campaign), `compare`, `bench-info`, `selftest`.

Every `run` flag has a config-file equivalent (--config takes a manifest.json
or bare config JSON); flags override the file. Exits 0 on success, nonzero on
configuration or I/O failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .benchmarks import PROBLEM_IDS, compose_problem, describe, eval_ackley, \
    eval_elliptic, eval_rastrigin, eval_rosenbrock, eval_schwefel12, generate_rotation
from .campaign import CampaignConfig, ComparisonTable, compare_means, \
    read_means_csv, read_manifest, read_summary_csv, run_campaign, summary_to_means
from .core import Bounds, clamp_to_bounds, rng_from_seed
from .engine import MabcConfig, run
from .stats import Welford


def _parse_problems(text: str) -> tuple[str, ...]:
    """Accept 'F1,F4,F9' and 'F1..F20' (both may be mixed, comma-separated)."""
    out = []
    for token in text.split(","):
        token = token.strip()
        if ".." in token:
            start, end = token.split("..")
            lo, hi = int(start.strip().lstrip("Ff")), int(end.strip().lstrip("Ff"))
            out.extend(f"F{i}" for i in range(lo, hi + 1))
        elif token:
            out.append("F" + token.lstrip("Ff"))
    return tuple(out)


def _add_run_parser(subparsers):
    p = subparsers.add_parser("run", help="execute a campaign")
    p.add_argument("--config", help="manifest.json or config JSON to start from")
    p.add_argument("--problems", help="e.g. F1..F20 or F1,F4,F19")
    p.add_argument("--dim", type=int, help="problem dimension")
    p.add_argument("--group-size", type=int, help="nonseparable group size m")
    p.add_argument("--runs", type=int, help="independent runs per problem")
    p.add_argument("--seed", type=int, help="base seed; run r uses seed+r")
    p.add_argument("--data-seed", type=int, help="benchmark instance data seed")
    p.add_argument("--max-fes", type=int, help="evaluation budget per run")
    p.add_argument("--np", dest="population", type=int, help="population size")
    p.add_argument("--cr", type=float, help="crossover probability")
    p.add_argument("--ls-ratio", type=float, help="per-generation local search probability")
    p.add_argument("--ls-budget", type=int, help="evaluations per local search")
    p.add_argument("--ls-subspace", type=int, help="coordinates used by the simplex search")
    p.add_argument("--scout-limit", type=int, help="stagnation limit before re-seeding")
    p.add_argument("--onlooker-rule", choices=("prose", "literal"))
    p.add_argument("--checkpoint-fractions", help="e.g. 0.04,0.2,1")
    p.add_argument("--stride", type=int, help="trace downsampling stride")
    p.add_argument("--jobs", type=int, help="parallel worker processes")
    p.add_argument("--out", required=True, help="output directory")


def _config_from_args(args) -> CampaignConfig:
    if args.config:
        base = read_manifest(args.config)
        fields = base.asdict()
    else:
        fields = CampaignConfig().asdict()
    engine = fields.pop("engine")

    if args.problems:
        fields["problems"] = list(_parse_problems(args.problems))
    if args.dim is not None:
        fields["dimension"] = args.dim
    if args.group_size is not None:
        fields["group_size"] = args.group_size
    if args.runs is not None:
        fields["runs"] = args.runs
    if args.seed is not None:
        fields["seed"] = args.seed
    if args.data_seed is not None:
        fields["data_seed"] = args.data_seed
    if args.checkpoint_fractions:
        fields["checkpoint_fractions"] = [float(f) for f in
                                          args.checkpoint_fractions.split(",")]
    if args.stride is not None:
        fields["trace_stride"] = args.stride
    if args.jobs is not None:
        fields["jobs"] = args.jobs

    if args.max_fes is not None:
        engine["max_evaluations"] = args.max_fes
    if args.population is not None:
        engine["population_size"] = args.population
    if args.cr is not None:
        engine["crossover_probability"] = args.cr
    if args.ls_ratio is not None:
        engine["local_search_ratio"] = args.ls_ratio
    if args.ls_budget is not None:
        engine["ls_budget"] = args.ls_budget
    if args.ls_subspace is not None:
        engine["ls_subspace"] = args.ls_subspace
    if args.scout_limit is not None:
        engine["scout_limit"] = args.scout_limit
    if args.onlooker_rule is not None:
        engine["onlooker_rule"] = args.onlooker_rule

    fields["engine"] = MabcConfig(**engine)
    return CampaignConfig(**fields)


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    summary = run_campaign(config, args.out)
    problems = summary.problems()
    print(f"campaign complete: {len(problems)} problem(s) x {config.runs} run(s) "
          f"-> {args.out}")
    for pid in problems:
        final = max(summary.checkpoints(pid))
        row = summary.rows[(pid, final)]
        print(f"  {pid}: mean {row.mean:.2e}  best {row.best:.2e}  "
              f"std {row.std:.2e}  at {final} FEs")
    return 0


def _cmd_compare(args) -> int:
    means_by_algorithm: dict[str, dict[str, float]] = {}
    names = args.names.split(",") if args.names else []
    summaries = []
    for path in args.inputs:
        with open(path, "r", encoding="utf-8") as handle:
            header = handle.readline()
        if header.startswith("problem,evaluations"):
            summaries.append(path)
        else:
            for name, column in read_means_csv(path).items():
                if name in means_by_algorithm:
                    raise ValueError(f"duplicate algorithm name {name!r}")
                means_by_algorithm[name] = column
    for index, path in enumerate(summaries):
        summary = read_summary_csv(path)
        at = args.fes
        if at is None:
            at = max(fes for _, fes in summary.rows)
        name = names[index] if index < len(names) else \
            os.path.splitext(os.path.basename(path))[0]
        if name in means_by_algorithm:
            raise ValueError(f"duplicate algorithm name {name!r}")
        means_by_algorithm[name] = summary_to_means(summary, at)

    table = compare_means(means_by_algorithm, alpha=args.alpha, at_evaluations=args.fes)
    if args.points and table.class_points is None:
        raise ValueError("--points needs exactly 4 algorithms")
    print(table.render())
    if args.out:
        table.write_csv(args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_bench_info(args) -> int:
    problems = _parse_problems(args.problems) if args.problems else PROBLEM_IDS
    print(f"{'id':>4}  {'class':<20} {'group base':<12} {'remainder':<10} "
          f"{'rot':<4} {'groups':>6}  bounds")
    for pid in problems:
        info = describe(pid, args.dim, args.group_size)
        print(f"{info['id']:>4}  {info['class']:<20} {str(info['group_base']):<12} "
              f"{str(info['remainder_base']):<10} {str(info['rotated']):<4} "
              f"{info['groups']:>6}  [{info['lower']:g}, {info['upper']:g}]")
    return 0


def _selftest_checks():
    rng = rng_from_seed(7)

    def check_clamp():
        bounds = Bounds(-1.0, 1.0)
        got = clamp_to_bounds(np.array([-2.0, 0.0, 2.0]), bounds)
        assert np.array_equal(got, [-1.0, 0.0, 1.0])

    def check_base_functions():
        assert eval_elliptic(np.array([1.0, 1.0])) == 1000001.0
        assert eval_schwefel12(np.array([1.0, 1.0])) == 5.0
        assert eval_rosenbrock(np.ones(3)) == 0.0
        assert abs(eval_rastrigin(np.zeros(4))) < 1e-12
        assert abs(eval_ackley(np.zeros(4))) < 1e-12

    def check_rotation():
        r = generate_rotation(10, rng)
        assert np.max(np.abs(r.T @ r - np.eye(10))) <= 1e-10

    def check_optimum_identity():
        for pid in PROBLEM_IDS:
            problem = compose_problem(pid, dimension=20, group_size=2, data_seed=3)
            assert abs(problem(problem.optimum_position())) <= 1e-8, pid

    def check_welford():
        w = Welford()
        for x in (1.0, 2.0, 3.0):
            w.push(x)
        assert abs(w.mean - 2.0) < 1e-12 and abs(w.variance - 1.0) < 1e-12

    def check_determinism():
        problem = compose_problem("F2", dimension=10, group_size=2, data_seed=5)
        config = MabcConfig(max_evaluations=2000, scout_limit=50)
        first = run(problem, config, seed=11, trace_stride=100)
        second = run(problem, config, seed=11, trace_stride=100)
        assert first == second

    return (("clamp saturation", check_clamp),
            ("base function values", check_base_functions),
            ("rotation orthogonality", check_rotation),
            ("optimum identity F1..F20", check_optimum_identity),
            ("welford statistics", check_welford),
            ("run determinism", check_determinism))


def _cmd_selftest(_args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # report, keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"PASS {name}")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mabc")
    parser.add_argument("--version", action="version", version=f"mabc {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    _add_run_parser(subparsers)

    p = subparsers.add_parser("compare", help="rank algorithms from mean-error tables")
    p.add_argument("inputs", nargs="+",
                   help="campaign summary.csv files and/or wide mean-error CSVs")
    p.add_argument("--fes", type=int, help="checkpoint to compare at (default: final)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--names", help="names for summary inputs, comma-separated")
    p.add_argument("--points", action="store_true",
                   help="fail unless the 4-way points table applies")
    p.add_argument("--out", help="write the comparison table CSV here")

    p = subparsers.add_parser("bench-info", help="print suite metadata")
    p.add_argument("--dim", type=int, default=1000)
    p.add_argument("--group-size", type=int, default=50)
    p.add_argument("--problems", help="subset, e.g. F1..F8")

    subparsers.add_parser("selftest", help="run the fast invariant checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "compare": _cmd_compare,
                "bench-info": _cmd_bench_info, "selftest": _cmd_selftest}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
