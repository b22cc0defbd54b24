"""Shared domain types: box bounds, candidate solutions, RNG streams and the
function-evaluation budget ledger every other module charges against."""

import math

import numpy as np


class BudgetExhausted(RuntimeError):
    """Raised when an objective evaluation is requested beyond the FE budget."""


class Bounds:
    """Uniform box constraint [lower, upper] applied to every dimension."""

    __slots__ = ("lower", "upper")

    def __init__(self, lower: float, upper: float):
        lower = float(lower)
        upper = float(upper)
        if not (math.isfinite(lower) and math.isfinite(upper)):
            raise ValueError("bounds must be finite")
        if not lower < upper:
            raise ValueError(f"lower bound {lower} must be strictly below upper bound {upper}")
        self.lower = lower
        self.upper = upper

    @property
    def span(self) -> float:
        return self.upper - self.lower

    def __eq__(self, other):
        return isinstance(other, Bounds) and (self.lower, self.upper) == (other.lower, other.upper)

    def __repr__(self):
        return f"Bounds({self.lower}, {self.upper})"


class Solution:
    """A food source: position vector, its objective value, and the count of
    generations it has gone without improvement (compared to the scout limit)."""

    __slots__ = ("position", "fitness", "trial_counter")

    def __init__(self, position: np.ndarray, fitness: float, trial_counter: int = 0):
        self.position = position
        self.fitness = float(fitness)
        self.trial_counter = int(trial_counter)

    def copy(self) -> "Solution":
        return Solution(self.position.copy(), self.fitness, self.trial_counter)

    def __repr__(self):
        return f"Solution(fitness={self.fitness!r}, trial_counter={self.trial_counter})"


class BudgetLedger:
    """Counts objective evaluations against a hard cap and snapshots the
    best-so-far error whenever an evaluation count checkpoint is crossed.

    Also keeps a downsampled (evaluations, best_error) trace: one point every
    `trace_stride` evaluations plus every checkpoint.
    """

    def __init__(self, max_evaluations: int, checkpoints=(), trace_stride: int = 1000):
        max_evaluations = int(max_evaluations)
        if max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")
        checkpoints = tuple(int(c) for c in checkpoints)
        if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if checkpoints and (checkpoints[0] < 1 or checkpoints[-1] > max_evaluations):
            raise ValueError("checkpoints must lie in [1, max_evaluations]")
        if trace_stride < 1:
            raise ValueError("trace_stride must be positive")
        self.max_evaluations = max_evaluations
        self.checkpoints = checkpoints
        self.trace_stride = int(trace_stride)
        self.used_evaluations = 0
        self.best_error = math.inf
        self.checkpoint_errors: list[tuple[int, float]] = []
        self.trace: list[tuple[int, float]] = []
        self._next_checkpoint = 0

    @property
    def remaining(self) -> int:
        return self.max_evaluations - self.used_evaluations

    def record(self, error: float) -> None:
        """Charge one evaluation whose error (objective minus optimum) is `error`."""
        if self.used_evaluations >= self.max_evaluations:
            raise BudgetExhausted(f"evaluation budget of {self.max_evaluations} exhausted")
        self.used_evaluations += 1
        if error < self.best_error:
            self.best_error = error
        crossed = False
        while (self._next_checkpoint < len(self.checkpoints)
               and self.checkpoints[self._next_checkpoint] <= self.used_evaluations):
            self.checkpoint_errors.append(
                (self.checkpoints[self._next_checkpoint], self.best_error))
            self._next_checkpoint += 1
            crossed = True
        if crossed or self.used_evaluations % self.trace_stride == 0:
            self.snapshot_now()

    def snapshot_now(self) -> None:
        """Append the current (evaluations, best_error) point to the trace."""
        point = (self.used_evaluations, self.best_error)
        if not self.trace or self.trace[-1] != point:
            self.trace.append(point)


def clamp_to_bounds(position: np.ndarray, bounds: Bounds) -> np.ndarray:
    """Saturate out-of-bounds components to [lower, upper]; in-bounds ones pass through."""
    return np.clip(position, bounds.lower, bounds.upper)


def evaluate(problem, position: np.ndarray, ledger: BudgetLedger) -> float:
    """Evaluate `problem` at `position`, charging exactly one FE to `ledger`.

    Raises BudgetExhausted (before evaluating) when the ledger is already full,
    so callers can terminate phases cleanly.
    """
    if ledger.remaining <= 0:
        raise BudgetExhausted(f"evaluation budget of {ledger.max_evaluations} exhausted")
    dimension = getattr(problem, "dimension", None)
    if dimension is not None and len(position) != dimension:
        raise ValueError(f"position has length {len(position)}, problem dimension is {dimension}")
    value = float(problem(position))
    ledger.record(value - getattr(problem, "optimum_value", 0.0))
    return value


def rng_from_seed(seed: int) -> np.random.Generator:
    """One independent, reproducible random stream: same seed, same draws."""
    return np.random.Generator(np.random.PCG64(int(seed)))
