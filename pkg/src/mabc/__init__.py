"""Memetic artificial bee colony optimizer and the twenty-problem
large-scale continuous benchmark harness around it."""

__version__ = "0.1.0"

from .core import (Bounds, BudgetExhausted, BudgetLedger, Solution,
                   clamp_to_bounds, evaluate, rng_from_seed)
from .benchmarks import (PROBLEM_IDS, BenchmarkProblem, ProblemData,
                         compose_problem, generate_rotation, load_problem_data,
                         problem_bounds, problem_class)
from .localsearch import LsOutcome, nma_search, rwde_search
from .engine import (Colony, DiversityTracker, EngineHooks, MabcConfig,
                     balance_probability, fitness_diversity, run)
from .stats import (CampaignSummary, FriedmanResult, RunRecord, SummaryRow,
                    Welford, friedman_test, lower_median, rank_points, summarize)
from .campaign import (CampaignConfig, ComparisonTable, compare_means,
                       emit_convergence, read_manifest, read_means_csv,
                       read_summary_csv, run_campaign, write_manifest,
                       write_means_csv, write_summary_csv, write_trace_csv)

__all__ = [
    "Bounds", "BudgetExhausted", "BudgetLedger", "Solution",
    "clamp_to_bounds", "evaluate", "rng_from_seed",
    "PROBLEM_IDS", "BenchmarkProblem", "ProblemData", "compose_problem",
    "generate_rotation", "load_problem_data", "problem_bounds", "problem_class",
    "LsOutcome", "nma_search", "rwde_search",
    "Colony", "DiversityTracker", "EngineHooks", "MabcConfig",
    "balance_probability", "fitness_diversity", "run",
    "CampaignSummary", "FriedmanResult", "RunRecord", "SummaryRow", "Welford",
    "friedman_test", "lower_median", "rank_points", "summarize",
    "CampaignConfig", "ComparisonTable", "compare_means", "emit_convergence",
    "read_manifest", "read_means_csv", "read_summary_csv", "run_campaign",
    "write_manifest", "write_means_csv", "write_summary_csv", "write_trace_csv",
]
