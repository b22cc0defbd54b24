"""Run records and campaign statistics: streaming mean/variance, checkpoint
summaries, the four-way rank-points comparison and the Friedman omnibus test."""

import math


class Welford:
    """Streaming mean and variance (Knuth's incremental update).

    Sample variance (n-1 denominator); zero by convention for fewer than two
    observations. Numerically stable for values sharing a large offset.
    """

    __slots__ = ("count", "_mean", "_m2")

    def __init__(self):
        self.count = 0
        self._mean = 0.0
        self._m2 = 0.0

    def push(self, x: float) -> None:
        x = float(x)
        if not math.isfinite(x):
            raise ValueError("Welford.push requires finite values")
        self.count += 1
        delta = x - self._mean
        self._mean += delta / self.count
        self._m2 += delta * (x - self._mean)

    @property
    def mean(self) -> float:
        return self._mean

    @property
    def variance(self) -> float:
        if self.count < 2:
            return 0.0
        return self._m2 / (self.count - 1)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    def merge(self, other: "Welford") -> "Welford":
        """Combined statistics over both observation streams."""
        merged = Welford()
        n = self.count + other.count
        if n == 0:
            return merged
        delta = other._mean - self._mean
        merged.count = n
        merged._mean = self._mean + delta * other.count / n
        merged._m2 = self._m2 + other._m2 + delta * delta * self.count * other.count / n
        return merged


class RunRecord:
    """Per-run outcome: checkpointed best errors plus a downsampled trace."""

    __slots__ = ("problem_id", "seed", "checkpoint_errors", "final_error", "trace")

    def __init__(self, problem_id, seed, checkpoint_errors, final_error, trace):
        self.problem_id = problem_id
        self.seed = int(seed)
        self.checkpoint_errors = list(checkpoint_errors)
        self.final_error = float(final_error)
        self.trace = list(trace)

    def __eq__(self, other):
        return (isinstance(other, RunRecord)
                and self.problem_id == other.problem_id
                and self.seed == other.seed
                and self.checkpoint_errors == other.checkpoint_errors
                and self.final_error == other.final_error
                and self.trace == other.trace)

    def __repr__(self):
        return (f"RunRecord({self.problem_id}, seed={self.seed}, "
                f"final_error={self.final_error!r})")


class SummaryRow:
    """Best/median/worst/mean/std of the error over a campaign's runs."""

    __slots__ = ("best", "median", "worst", "mean", "std", "runs")

    def __init__(self, best, median, worst, mean, std, runs):
        self.best = float(best)
        self.median = float(median)
        self.worst = float(worst)
        self.mean = float(mean)
        self.std = float(std)
        self.runs = int(runs)

    def astuple(self):
        return (self.best, self.median, self.worst, self.mean, self.std, self.runs)

    def __eq__(self, other):
        return isinstance(other, SummaryRow) and self.astuple() == other.astuple()

    def __repr__(self):
        return f"SummaryRow(best={self.best!r}, mean={self.mean!r}, runs={self.runs})"


class CampaignSummary:
    """Rows keyed by (problem_id, checkpoint evaluations)."""

    def __init__(self, rows: dict):
        self.rows = dict(rows)

    def problems(self) -> list[str]:
        seen = []
        for pid, _ in self.rows:
            if pid not in seen:
                seen.append(pid)
        return seen

    def checkpoints(self, problem_id: str) -> list[int]:
        return sorted(fes for pid, fes in self.rows if pid == problem_id)

    def mean_errors(self, at_evaluations: int) -> dict[str, float]:
        """problem -> mean error at one checkpoint (for comparisons)."""
        out = {}
        for (pid, fes), row in self.rows.items():
            if fes == at_evaluations:
                out[pid] = row.mean
        return out

    def __eq__(self, other):
        return isinstance(other, CampaignSummary) and self.rows == other.rows


def lower_median(values) -> float:
    """Median using the lower-middle element for even counts."""
    ordered = sorted(values)
    if not ordered:
        raise ValueError("median of empty sequence")
    return ordered[(len(ordered) - 1) // 2]


def _sample_std(values) -> float:
    w = Welford()
    for v in values:
        w.push(v)
    return w.std


def summarize(records) -> CampaignSummary:
    """Five statistics per (problem, checkpoint) over a set of run records."""
    records = list(records)
    if not records:
        raise ValueError("summarize needs at least one run record")
    by_problem: dict[str, list[RunRecord]] = {}
    for record in records:
        by_problem.setdefault(record.problem_id, []).append(record)
    rows = {}
    for pid, group in by_problem.items():
        layouts = {tuple(fes for fes, _ in r.checkpoint_errors) for r in group}
        if len(layouts) != 1:
            raise ValueError(f"runs of {pid} disagree on checkpoint layout")
        (layout,) = layouts
        for index, fes in enumerate(layout):
            errors = [r.checkpoint_errors[index][1] for r in group]
            rows[(pid, fes)] = SummaryRow(
                best=min(errors),
                median=lower_median(errors),
                worst=max(errors),
                mean=sum(errors) / len(errors),
                std=_sample_std(errors),
                runs=len(errors),
            )
    return CampaignSummary(rows)


RANK_POINTS = (25, 18, 15, 12)


def rank_points(mean_errors: dict[str, float]) -> dict[str, int]:
    """Award 25/18/15/12 points by ascending mean error over exactly four
    algorithms; ties broken by algorithm name."""
    if len(mean_errors) != len(RANK_POINTS):
        raise ValueError(f"the points scheme needs exactly {len(RANK_POINTS)} algorithms, "
                         f"got {len(mean_errors)}")
    order = sorted(mean_errors, key=lambda name: (mean_errors[name], name))
    return {name: RANK_POINTS[rank] for rank, name in enumerate(order)}


# Chi-square critical values, df 1..10 (no CDF dependency; alpha is fixed
# to the tabulated levels).
_CHI2_CRITICAL = {
    0.05: (3.841, 5.991, 7.815, 9.488, 11.070, 12.592, 14.067, 15.507, 16.919, 18.307),
    0.01: (6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090, 21.666, 23.209),
}


def average_ranks(values) -> list[float]:
    """Ranks 1..n ascending, averaging over ties."""
    values = list(values)
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = shared
        i = j + 1
    return ranks


class FriedmanResult:
    __slots__ = ("statistic", "degrees_of_freedom", "alpha", "critical_value",
                 "reject", "p_indicator", "mean_ranks")

    def __init__(self, statistic, degrees_of_freedom, alpha, critical_value,
                 reject, mean_ranks):
        self.statistic = statistic
        self.degrees_of_freedom = degrees_of_freedom
        self.alpha = alpha
        self.critical_value = critical_value
        self.reject = reject
        self.p_indicator = f"p<{alpha:g}" if reject else f"p>={alpha:g}"
        self.mean_ranks = mean_ranks

    def __repr__(self):
        return (f"FriedmanResult(statistic={self.statistic:.4f}, "
                f"df={self.degrees_of_freedom}, {self.p_indicator})")


def friedman_test(mean_errors: dict[str, list[float]], alpha: float = 0.05) -> FriedmanResult:
    """Friedman omnibus test on an algorithms x problems matrix of mean errors.

    Ranks within each problem (average ranks for ties), then
    chi2 = 12N/(k(k+1)) * (sum_j Rbar_j^2 - k(k+1)^2/4) against the chi-square
    critical value at k-1 degrees of freedom.
    """
    names = list(mean_errors)
    k = len(names)
    if k < 2:
        raise ValueError("friedman_test needs at least two algorithms")
    lengths = {len(mean_errors[name]) for name in names}
    if len(lengths) != 1:
        raise ValueError("all algorithms must cover the same problems")
    (n,) = lengths
    if n < 2:
        raise ValueError("friedman_test needs at least two problems")
    if alpha not in _CHI2_CRITICAL:
        raise ValueError(f"alpha must be one of {sorted(_CHI2_CRITICAL)}")
    df = k - 1
    if df > len(_CHI2_CRITICAL[alpha]):
        raise ValueError(f"critical values tabulated up to {len(_CHI2_CRITICAL[alpha])} "
                         f"degrees of freedom")

    rank_sums = {name: 0.0 for name in names}
    for j in range(n):
        column = [mean_errors[name][j] for name in names]
        for name, rank in zip(names, average_ranks(column)):
            rank_sums[name] += rank
    mean_ranks = {name: rank_sums[name] / n for name in names}
    statistic = (12.0 * n / (k * (k + 1))) * (
        sum(r * r for r in mean_ranks.values()) - k * (k + 1) ** 2 / 4.0)
    critical = _CHI2_CRITICAL[alpha][df - 1]
    return FriedmanResult(statistic, df, alpha, critical, statistic > critical, mean_ranks)
