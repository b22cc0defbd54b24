"""Four-phase memetic bee-colony engine: employed bees (rand/1/bin-style
long-distance moves), onlooker bees (current-to-best/1/bin-style moves biased
toward good food sources), a local improvement step on the best solution
switching between Nelder-Mead and a random walk through a fitness-diversity
signal, and scouts that re-seed stagnant food sources.

Every stochastic choice draws from one seeded stream, in a fixed order per
run: initialization (NP*D uniforms), then per generation: employed phase
(per member: three partner indices, D crossover uniforms, one forced
dimension), onlooker phase (one visit uniform per scan; two partner indices
plus the crossover draws per placement), the best-improvement step (one gate
uniform; one switch uniform and the local-search draws when it fires), scout
phase (D uniforms per replaced member).
"""

import math

import numpy as np

from .core import (BudgetExhausted, BudgetLedger, Solution, clamp_to_bounds,
                   evaluate, rng_from_seed)
from .localsearch import nma_search, rwde_search
from .stats import RunRecord, Welford

# literal-rule onlookers can stall on a flat population; bail out after this
# many consecutive non-placing scans per needed placement
_MAX_IDLE_SCANS_PER_MEMBER = 100

DEFAULT_CHECKPOINT_FRACTIONS = (1 / 25, 1 / 5, 1.0)


class MabcConfig:
    """Engine parameters; the defaults are the tuned reference values."""

    __slots__ = ("population_size", "crossover_probability", "local_search_ratio",
                 "scout_limit", "max_evaluations", "onlooker_rule", "ls_budget",
                 "ls_subspace")

    def __init__(self, population_size=20, crossover_probability=0.01,
                 local_search_ratio=0.006, scout_limit=200,
                 max_evaluations=3_000_000, onlooker_rule="prose",
                 ls_budget=100, ls_subspace=10):
        self.population_size = int(population_size)
        self.crossover_probability = float(crossover_probability)
        self.local_search_ratio = float(local_search_ratio)
        self.scout_limit = int(scout_limit)
        self.max_evaluations = int(max_evaluations)
        self.onlooker_rule = onlooker_rule
        self.ls_budget = int(ls_budget)
        self.ls_subspace = int(ls_subspace)
        if self.population_size < 4:
            raise ValueError("population_size must be >= 4 (mutation needs three "
                             "distinct partners besides the target)")
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise ValueError("crossover_probability must lie in [0, 1]")
        if not 0.0 <= self.local_search_ratio <= 1.0:
            raise ValueError("local_search_ratio must lie in [0, 1]")
        if self.scout_limit < 1:
            raise ValueError("scout_limit must be positive")
        if self.max_evaluations < self.population_size:
            raise ValueError("max_evaluations must cover at least the initial population")
        if self.onlooker_rule not in ("prose", "literal"):
            raise ValueError("onlooker_rule must be 'prose' or 'literal'")
        if self.ls_budget < 1:
            raise ValueError("ls_budget must be positive")
        if self.ls_subspace < 2:
            raise ValueError("ls_subspace must be >= 2")

    def asdict(self) -> dict:
        return {name: getattr(self, name) for name in self.__slots__}

    def replace(self, **changes) -> "MabcConfig":
        fields = self.asdict()
        fields.update(changes)
        return MabcConfig(**fields)


class DiversityTracker:
    """Current fitness-diversity value plus its running mean/std (Welford)."""

    __slots__ = ("psi", "stats")

    def __init__(self):
        self.psi = 1.0
        self.stats = Welford()

    def update(self, psi: float) -> None:
        self.psi = psi
        self.stats.push(psi)

    @property
    def mu_p(self) -> float:
        return self.stats.mean

    @property
    def sigma_p(self) -> float:
        return self.stats.std

    @property
    def count(self) -> int:
        return self.stats.count


class Colony:
    """Population state: members, the best-so-far solution and its slot."""

    __slots__ = ("members", "best", "best_index", "generation", "diversity")

    def __init__(self, members, best, best_index):
        self.members = members
        self.best = best
        self.best_index = best_index
        self.generation = 0
        self.diversity = DiversityTracker()


class EngineHooks:
    """Optional observation callbacks (tests use these; None costs nothing)."""

    __slots__ = ("on_generation", "on_partners", "on_local_search", "on_scouts")

    def __init__(self, on_generation=None, on_partners=None,
                 on_local_search=None, on_scouts=None):
        self.on_generation = on_generation
        self.on_partners = on_partners
        self.on_local_search = on_local_search
        self.on_scouts = on_scouts


def _random_position(problem, rng) -> np.ndarray:
    bounds = problem.bounds
    return bounds.lower + rng.random(problem.dimension) * bounds.span


def _consider_best(colony: Colony, index: int) -> None:
    member = colony.members[index]
    if member.fitness < colony.best.fitness:
        colony.best = member.copy()
        colony.best_index = index


def init_colony(problem, config: MabcConfig, rng, ledger) -> Colony:
    """Sample NP members uniformly inside the box and evaluate them all."""
    members = []
    for _ in range(config.population_size):
        position = _random_position(problem, rng)
        members.append(Solution(position, evaluate(problem, position, ledger)))
    best_index = min(range(len(members)), key=lambda i: members[i].fitness)
    return Colony(members, members[best_index].copy(), best_index)


def _distinct_indices(rng, count: int, taken: list[int], draws: int) -> list[int]:
    """`draws` uniform indices in [0, count), mutually distinct and avoiding `taken`."""
    picked = list(taken)
    for _ in range(draws):
        r = int(rng.integers(count))
        while r in picked:
            r = int(rng.integers(count))
        picked.append(r)
    return picked[len(taken):]


def mutate_rand1(colony: Colony, index: int, rng, hooks: EngineHooks | None = None) -> np.ndarray:
    """Donor x_r1 + (x_r2 - x_r3) from three distinct partners (no scale factor)."""
    r1, r2, r3 = _distinct_indices(rng, len(colony.members), [index], 3)
    if hooks is not None and hooks.on_partners is not None:
        hooks.on_partners(index, (r1, r2, r3))
    members = colony.members
    return members[r1].position + (members[r2].position - members[r3].position)


def crossover(target: np.ndarray, donor: np.ndarray, crossover_probability: float,
              bounds, rng) -> np.ndarray:
    """Binomial multi-dimension crossover: take the donor where a uniform draw
    falls below CR and on one forced dimension; clamp the result to the box."""
    take = rng.random(len(target)) <= crossover_probability
    take[int(rng.integers(len(target)))] = True
    return clamp_to_bounds(np.where(take, donor, target), bounds)


def select_greedy(incumbent: Solution, trial: np.ndarray, problem, ledger) -> Solution:
    """Evaluate the trial and keep the better of the two (ties go to the trial,
    which resets the stagnation counter)."""
    trial_fitness = evaluate(problem, trial, ledger)
    if trial_fitness <= incumbent.fitness:
        return Solution(trial, trial_fitness)
    incumbent.trial_counter += 1
    return incumbent


def employed_phase(colony: Colony, problem, config: MabcConfig, ledger, rng,
                   hooks: EngineHooks | None = None) -> None:
    """One rand/1/bin trial per member, greedily selected."""
    for i in range(len(colony.members)):
        donor = mutate_rand1(colony, i, rng, hooks)
        trial = crossover(colony.members[i].position, donor,
                          config.crossover_probability, problem.bounds, rng)
        colony.members[i] = select_greedy(colony.members[i], trial, problem, ledger)
        _consider_best(colony, i)


def onlooker_probability(colony: Colony, index: int) -> float:
    """Visit propensity q_i = (f_i - f_worst)/(f_best - f_worst): 1 for the
    best member, 0 for the worst; defined as 1 for a flat population."""
    fitnesses = [m.fitness for m in colony.members]
    best = min(fitnesses)
    worst = max(fitnesses)
    if worst == best:
        return 1.0
    return (fitnesses[index] - worst) / (best - worst)


def onlooker_phase(colony: Colony, problem, config: MabcConfig, ledger, rng,
                   hooks: EngineHooks | None = None) -> None:
    """Cycle over food sources until exactly NP onlookers have been placed;
    a placement builds a current-to-best donor and applies crossover plus
    greedy selection at that source."""
    population = len(colony.members)
    prose = config.onlooker_rule == "prose"
    placements = 0
    idle_scans = 0
    idle_limit = _MAX_IDLE_SCANS_PER_MEMBER * population
    i = 0
    while placements < population:
        q = onlooker_probability(colony, i)
        r0 = rng.random()
        visit = (r0 < q) if prose else (q < r0)
        if visit:
            r1, r2 = _distinct_indices(rng, population, [i], 2)
            if hooks is not None and hooks.on_partners is not None:
                hooks.on_partners(i, (r1, r2))
            members = colony.members
            current = members[i].position
            donor = (current + (colony.best.position - current)
                     + (members[r1].position - members[r2].position))
            trial = crossover(current, donor, config.crossover_probability,
                              problem.bounds, rng)
            colony.members[i] = select_greedy(colony.members[i], trial, problem, ledger)
            _consider_best(colony, i)
            placements += 1
            idle_scans = 0
        else:
            idle_scans += 1
            if idle_scans >= idle_limit:
                break
        i = (i + 1) % population


def fitness_diversity(colony: Colony) -> float:
    """Psi = 1 - |(f_avg - f_best)/(f_worst - f_best)|, clipped to [0, 1];
    1 for a flat population."""
    fitnesses = [m.fitness for m in colony.members]
    best = min(fitnesses)
    worst = max(fitnesses)
    if worst == best:
        return 1.0
    psi = 1.0 - abs((sum(fitnesses) / len(fitnesses) - best) / (worst - best))
    return min(max(psi, 0.0), 1.0)


def balance_probability(tracker: DiversityTracker) -> float:
    """exp(-(psi - mu_p)/(2 sigma_p^2)) saturated into [0, 1]; 1 when the
    tracked spread is still zero."""
    if tracker.count < 1:
        raise ValueError("balance_probability needs at least one tracked observation")
    sigma = tracker.sigma_p
    if sigma == 0.0:
        return 1.0
    exponent = -(tracker.psi - tracker.mu_p) / (2.0 * sigma * sigma)
    if exponent >= 0.0:
        return 1.0
    return math.exp(exponent)


def local_improve_best(colony: Colony, problem, config: MabcConfig, ledger, rng,
                       hooks: EngineHooks | None = None) -> None:
    """Track this generation's fitness diversity, then with probability
    `local_search_ratio` refine a copy of the best solution: Nelder-Mead when
    a uniform draw exceeds the balance probability, the random walk otherwise.
    The refined point replaces the best (and its colony slot) only if strictly
    better."""
    colony.diversity.update(fitness_diversity(colony))
    if rng.random() >= config.local_search_ratio:
        return
    probability = balance_probability(colony.diversity)
    use_nma = rng.random() > probability
    if ledger.remaining <= 0:
        raise BudgetExhausted("no budget left for local improvement")
    granted = min(config.ls_budget, ledger.remaining)
    subspace = min(config.ls_subspace, problem.dimension)
    if use_nma and granted >= subspace + 1:
        outcome = nma_search(colony.best, problem, granted, subspace, rng, ledger)
    else:
        # too few probes to build a simplex: the walk handles any budget >= 1
        outcome = rwde_search(colony.best, problem, granted, rng, ledger)
    if hooks is not None and hooks.on_local_search is not None:
        hooks.on_local_search(outcome)
    if outcome.improved_fitness < colony.best.fitness:
        improved = Solution(outcome.improved_position.copy(), outcome.improved_fitness)
        colony.members[colony.best_index] = improved
        colony.best = improved.copy()


def scout_phase(colony: Colony, problem, config: MabcConfig, ledger, rng,
                hooks: EngineHooks | None = None) -> None:
    """Replace every member whose stagnation counter reached the scout limit
    with a fresh uniform sample; the slot holding the best-so-far is exempt."""
    scouted = 0
    for i in range(len(colony.members)):
        if i == colony.best_index:
            continue
        if colony.members[i].trial_counter >= config.scout_limit:
            position = _random_position(problem, rng)
            colony.members[i] = Solution(position, evaluate(problem, position, ledger))
            _consider_best(colony, i)
            scouted += 1
    if hooks is not None and hooks.on_scouts is not None:
        hooks.on_scouts(scouted)


def default_checkpoints(max_evaluations: int,
                        fractions=DEFAULT_CHECKPOINT_FRACTIONS) -> tuple[int, ...]:
    """Absolute checkpoint evaluation counts from budget fractions."""
    points = sorted({int(round(f * max_evaluations)) for f in fractions})
    if any(p < 1 or p > max_evaluations for p in points):
        raise ValueError("checkpoint fractions must lie in (0, 1]")
    return tuple(points)


def run(problem, config: MabcConfig, seed: int, checkpoints=None,
        trace_stride: int = 1000, hooks: EngineHooks | None = None) -> RunRecord:
    """One full optimization run; budget exhaustion is the normal termination.

    Returns the run record with the best error at every checkpoint and the
    downsampled convergence trace. Identical (problem, config, seed) inputs
    reproduce the record bit for bit.
    """
    if checkpoints is None:
        checkpoints = default_checkpoints(config.max_evaluations)
    ledger = BudgetLedger(config.max_evaluations, checkpoints, trace_stride)
    rng = rng_from_seed(seed)
    try:
        colony = init_colony(problem, config, rng, ledger)
        ledger.snapshot_now()
        while ledger.remaining > 0:
            employed_phase(colony, problem, config, ledger, rng, hooks)
            onlooker_phase(colony, problem, config, ledger, rng, hooks)
            local_improve_best(colony, problem, config, ledger, rng, hooks)
            scout_phase(colony, problem, config, ledger, rng, hooks)
            colony.generation += 1
            if hooks is not None and hooks.on_generation is not None:
                hooks.on_generation(colony, ledger)
    except BudgetExhausted:
        pass
    ledger.snapshot_now()
    return RunRecord(problem_id=getattr(problem, "problem_id", "custom"),
                     seed=seed,
                     checkpoint_errors=ledger.checkpoint_errors,
                     final_error=ledger.best_error,
                     trace=ledger.trace)
