import math

import numpy as np
import pytest

from mabc.core import Bounds, BudgetLedger, Solution, rng_from_seed
from mabc.localsearch import (RWDE_MAX_FAILURES, LsOutcome, nma_search,
                              rwde_search)

from conftest import RecordingProblem, StubProblem, sphere_problem


def _start(problem, position):
    position = np.array(position, dtype=float)
    return Solution(position, problem(position))


# --- Nelder-Mead subspace search ------------------------------------------------

def test_nma_rejects_insufficient_budget():
    problem = sphere_problem(4)
    start = _start(problem, [1.0, 1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        nma_search(start, problem, budget=3, subspace_size=3,
                   rng=rng_from_seed(0), ledger=BudgetLedger(100))
    with pytest.raises(ValueError):
        nma_search(start, problem, budget=50, subspace_size=1,
                   rng=rng_from_seed(0), ledger=BudgetLedger(100))
    with pytest.raises(ValueError):
        nma_search(start, problem, budget=50, subspace_size=5,
                   rng=rng_from_seed(0), ledger=BudgetLedger(100))


def test_nma_converges_on_2d_quadratic():
    # expectation cross-checked against scipy's textbook Nelder-Mead below
    problem = sphere_problem(2)
    start = _start(problem, [1.0, 1.0])
    ledger = BudgetLedger(1000)
    outcome = nma_search(start, problem, budget=200, subspace_size=2,
                         rng=rng_from_seed(1), ledger=ledger)
    assert outcome.improved_fitness <= 1e-6
    assert outcome.evaluations_used == ledger.used_evaluations

    scipy_optimize = pytest.importorskip("scipy.optimize")
    reference = scipy_optimize.minimize(
        lambda x: float(np.dot(x, x)), [1.0, 1.0], method="Nelder-Mead",
        options={"maxfev": 200, "xatol": 1e-10, "fatol": 1e-12})
    assert reference.fun <= 1e-6  # the oracle agrees the target is reachable


@pytest.mark.parametrize("seed", range(6))
def test_nma_never_worsens(seed):
    problem = sphere_problem(6)
    rng = rng_from_seed(seed)
    position = rng.uniform(-5, 5, size=6)
    start = _start(problem, position)
    outcome = nma_search(start, problem, budget=40, subspace_size=3,
                         rng=rng, ledger=BudgetLedger(1000))
    assert outcome.improved_fitness <= start.fitness


def test_nma_freezes_non_subspace_coordinates():
    problem = sphere_problem(10)
    rng = rng_from_seed(3)
    position = rng.uniform(-5, 5, size=10)
    start = _start(problem, position)
    outcome = nma_search(start, problem, budget=60, subspace_size=3,
                         rng=rng_from_seed(3), ledger=BudgetLedger(1000))
    coords = rng_from_seed(3).choice(10, size=3, replace=False)
    frozen = np.setdiff1d(np.arange(10), coords)
    assert np.array_equal(outcome.improved_position[frozen], start.position[frozen])


def test_nma_budget_honesty_and_cap():
    problem = sphere_problem(2)
    start = _start(problem, [2.0, -3.0])
    ledger = BudgetLedger(10_000)
    outcome = nma_search(start, problem, budget=17, subspace_size=2,
                         rng=rng_from_seed(5), ledger=ledger)
    assert outcome.evaluations_used <= 17
    assert outcome.evaluations_used == ledger.used_evaluations


def test_nma_stops_at_global_ledger_exhaustion():
    problem = sphere_problem(2)
    start = _start(problem, [2.0, 2.0])
    ledger = BudgetLedger(5)  # tighter than the local budget
    outcome = nma_search(start, problem, budget=100, subspace_size=2,
                         rng=rng_from_seed(7), ledger=ledger)
    assert outcome.evaluations_used == 5
    assert outcome.improved_fitness <= start.fitness


def test_nma_returns_start_when_nothing_beats_it():
    # a two-armed pit: the start is already optimal
    problem = sphere_problem(3)
    start = _start(problem, [0.0, 0.0, 0.0])
    outcome = nma_search(start, problem, budget=30, subspace_size=2,
                         rng=rng_from_seed(11), ledger=BudgetLedger(100))
    assert outcome.improved_fitness == start.fitness
    assert np.array_equal(outcome.improved_position, start.position)


# --- random walk with direction exploitation --------------------------------------

def test_rwde_budget_one_single_probe():
    problem = RecordingProblem(lambda x: float(np.dot(x, x)), 2, Bounds(-5, 5))
    start = _start(problem, [1.0, 1.0])
    problem.calls.clear()
    ledger = BudgetLedger(100)
    outcome = rwde_search(start, problem, budget=1,
                          rng=rng_from_seed(2), ledger=ledger)
    assert len(problem.calls) == 1
    assert ledger.used_evaluations == 1
    probed = float(np.dot(problem.calls[0], problem.calls[0]))
    assert outcome.improved_fitness == min(start.fitness, probed)


@pytest.mark.parametrize("seed", range(20))
def test_rwde_descends_on_1d_quadratic(seed):
    problem = StubProblem(lambda x: float(x[0] * x[0]), 1, Bounds(-5, 5))
    start = _start(problem, [1.3])
    outcome = rwde_search(start, problem, budget=500,
                          rng=rng_from_seed(seed), ledger=BudgetLedger(10_000))
    assert outcome.improved_fitness < start.fitness


def test_rwde_rejects_zero_budget():
    problem = sphere_problem(2)
    with pytest.raises(ValueError):
        rwde_search(_start(problem, [1.0, 1.0]), problem, budget=0,
                    rng=rng_from_seed(0), ledger=BudgetLedger(10))


def test_rwde_budget_honesty():
    problem = sphere_problem(4)
    start = _start(problem, [3.0, -2.0, 1.0, 0.5])
    ledger = BudgetLedger(10_000)
    outcome = rwde_search(start, problem, budget=137,
                          rng=rng_from_seed(9), ledger=ledger)
    assert outcome.evaluations_used == ledger.used_evaluations <= 137


def test_rwde_step_length_never_increases():
    # reconstruct the walk from the probe log: each probe sits exactly one
    # step away from the current accepted point (bounds too wide to clamp)
    problem = RecordingProblem(lambda x: float(np.dot(x, x)), 3, Bounds(-1e9, 1e9))
    start_position = np.array([1.0, -1.0, 0.5])
    start = Solution(start_position, problem(start_position))
    problem.calls.clear()
    rwde_search(start, problem, budget=400, rng=rng_from_seed(13),
                ledger=BudgetLedger(10_000))
    current = start_position
    current_fit = float(np.dot(current, current))
    steps = []
    for probe in problem.calls:
        steps.append(float(np.linalg.norm(probe - current)))
        fit = float(np.dot(probe, probe))
        if fit < current_fit:
            current, current_fit = probe, fit
    assert all(b <= a + 1e-9 for a, b in zip(steps, steps[1:]))
    assert steps[-1] < steps[0]  # the schedule did shrink during 400 probes


def test_rwde_exploits_improving_direction():
    # strictly decreasing along +x: every accepted probe re-uses the direction,
    # so consecutive accepted probes are collinear
    problem = RecordingProblem(lambda x: float(x[0]), 2, Bounds(-1e6, 1e6))
    start = Solution(np.zeros(2), 0.0)
    problem.calls.clear()
    rwde_search(start, problem, budget=50, rng=rng_from_seed(17),
                ledger=BudgetLedger(1000))
    improving = [c for c in problem.calls if c[0] < 0.0]
    assert len(improving) >= 2


def test_ls_outcome_fields():
    outcome = LsOutcome(np.zeros(2), 1.5, 7)
    assert outcome.improved_fitness == 1.5 and outcome.evaluations_used == 7
    assert RWDE_MAX_FAILURES == 5
