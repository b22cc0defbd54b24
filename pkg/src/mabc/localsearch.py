"""Budget-bounded local refinement of a single solution: a subspace
Nelder-Mead simplex search (exploration-leaning) and a random walk with
direction exploitation (exploitation-leaning). Both are pure procedures over
an immutable problem; acceptance back into a colony is the caller's job."""

import numpy as np

from .core import BudgetExhausted, Solution, clamp_to_bounds, evaluate

NMA_REFLECTION = 1.0
NMA_EXPANSION = 2.0
NMA_CONTRACTION = 0.5
NMA_SHRINK = 0.5
NMA_STEP_FRACTION = 0.05      # initial simplex offset as a fraction of the box span
NMA_SPREAD_TOLERANCE = 1e-12  # stop when vertex fitnesses collapse to this spread

RWDE_STEP_FRACTION = 0.1      # initial step length as a fraction of the box span
RWDE_MIN_STEP_FRACTION = 1e-8
RWDE_MAX_FAILURES = 5         # consecutive rejected directions before halving the step


class LsOutcome:
    """Result of one local-search invocation; never worse than the start."""

    __slots__ = ("improved_position", "improved_fitness", "evaluations_used")

    def __init__(self, improved_position, improved_fitness, evaluations_used):
        self.improved_position = improved_position
        self.improved_fitness = float(improved_fitness)
        self.evaluations_used = int(evaluations_used)

    def __repr__(self):
        return (f"LsOutcome(fitness={self.improved_fitness!r}, "
                f"evaluations_used={self.evaluations_used})")


class _OutOfProbes(Exception):
    """Internal: the granted probe budget is used up."""


class _Prober:
    """Evaluates candidates against the ledger while enforcing a local budget
    and tracking the best point seen."""

    def __init__(self, problem, budget, ledger, start: Solution):
        self.problem = problem
        self.budget = int(budget)
        self.ledger = ledger
        self.used = 0
        self.best_position = start.position.copy()
        self.best_fitness = start.fitness

    def __call__(self, position: np.ndarray) -> float:
        if self.used >= self.budget:
            raise _OutOfProbes
        value = evaluate(self.problem, position, self.ledger)
        self.used += 1
        if value < self.best_fitness:
            self.best_fitness = value
            self.best_position = position.copy()
        return value

    def outcome(self) -> LsOutcome:
        return LsOutcome(self.best_position, self.best_fitness, self.used)


def nma_search(start: Solution, problem, budget: int, subspace_size: int,
               rng: np.random.Generator, ledger) -> LsOutcome:
    """Nelder-Mead over a random coordinate subspace, all other coordinates
    frozen at the start values.

    Builds a (subspace_size+1)-vertex simplex from the start point plus one
    point per chosen coordinate offset by 0.05*(ub-lb) (clamped), then iterates
    reflection/expansion/contraction/shrink until the probe budget runs out or
    the vertex fitness spread falls below 1e-12.
    """
    dimension = problem.dimension
    if not 2 <= subspace_size <= dimension:
        raise ValueError(f"subspace size must be in [2, {dimension}]")
    if budget < subspace_size + 1:
        raise ValueError(f"budget {budget} cannot build a {subspace_size + 1}-vertex simplex")

    bounds = problem.bounds
    coords = rng.choice(dimension, size=subspace_size, replace=False)
    step = NMA_STEP_FRACTION * bounds.span
    prober = _Prober(problem, budget, ledger, start)

    def embed(sub: np.ndarray) -> np.ndarray:
        full = start.position.copy()
        full[coords] = sub
        return clamp_to_bounds(full, bounds)

    base = start.position[coords].astype(float)
    try:
        # start vertex reuses the known fitness; the others cost one probe each
        vertices = [(base.copy(), start.fitness)]
        for axis in range(subspace_size):
            sub = base.copy()
            sub[axis] += step
            full = embed(sub)
            vertices.append((full[coords].copy(), prober(full)))

        while True:
            vertices.sort(key=lambda vf: vf[1])
            if vertices[-1][1] - vertices[0][1] < NMA_SPREAD_TOLERANCE:
                break
            best_fit = vertices[0][1]
            second_worst_fit = vertices[-2][1]
            worst_sub, worst_fit = vertices[-1]
            centroid = np.mean([sub for sub, _ in vertices[:-1]], axis=0)

            reflected = centroid + NMA_REFLECTION * (centroid - worst_sub)
            reflected_full = embed(reflected)
            reflected_fit = prober(reflected_full)
            if best_fit <= reflected_fit < second_worst_fit:
                vertices[-1] = (reflected_full[coords].copy(), reflected_fit)
                continue
            if reflected_fit < best_fit:
                expanded = centroid + NMA_EXPANSION * (reflected - centroid)
                expanded_full = embed(expanded)
                expanded_fit = prober(expanded_full)
                if expanded_fit < reflected_fit:
                    vertices[-1] = (expanded_full[coords].copy(), expanded_fit)
                else:
                    vertices[-1] = (reflected_full[coords].copy(), reflected_fit)
                continue
            # reflected no better than the second worst: contract
            if reflected_fit < worst_fit:
                contracted = centroid + NMA_CONTRACTION * (reflected - centroid)
            else:
                contracted = centroid - NMA_CONTRACTION * (centroid - worst_sub)
            contracted_full = embed(contracted)
            contracted_fit = prober(contracted_full)
            if contracted_fit < min(reflected_fit, worst_fit):
                vertices[-1] = (contracted_full[coords].copy(), contracted_fit)
                continue
            # shrink every vertex toward the best
            best_sub = vertices[0][0]
            shrunk = [vertices[0]]
            for sub, _ in vertices[1:]:
                moved = best_sub + NMA_SHRINK * (sub - best_sub)
                moved_full = embed(moved)
                shrunk.append((moved_full[coords].copy(), prober(moved_full)))
            vertices = shrunk
    except (_OutOfProbes, BudgetExhausted):
        pass
    return prober.outcome()


def rwde_search(start: Solution, problem, budget: int,
                rng: np.random.Generator, ledger) -> LsOutcome:
    """Random walk with direction exploitation.

    Probes x + lambda*u along uniform random unit directions u; an improving
    probe is accepted and the same direction is tried again. After five
    consecutive rejected directions the step lambda (initially 0.1*(ub-lb))
    is halved; the walk stops at the probe budget or at lambda < 1e-8*(ub-lb).
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    bounds = problem.bounds
    dimension = problem.dimension
    lam = RWDE_STEP_FRACTION * bounds.span
    lam_floor = RWDE_MIN_STEP_FRACTION * bounds.span
    prober = _Prober(problem, budget, ledger, start)
    position = start.position.copy()
    fitness = start.fitness
    failures = 0
    try:
        while prober.used < budget and lam >= lam_floor:
            direction = rng.standard_normal(dimension)
            norm = np.linalg.norm(direction)
            if norm == 0.0:
                continue
            direction /= norm
            improved_along = False
            while prober.used < budget:
                candidate = clamp_to_bounds(position + lam * direction, bounds)
                value = prober(candidate)
                if value < fitness:
                    position, fitness = candidate, value
                    improved_along = True
                else:
                    break
            if improved_along:
                failures = 0
            else:
                failures += 1
                if failures >= RWDE_MAX_FAILURES:
                    lam *= 0.5
                    failures = 0
    except (_OutOfProbes, BudgetExhausted):
        pass
    return prober.outcome()
