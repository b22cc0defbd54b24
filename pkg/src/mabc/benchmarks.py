"""The twenty-problem large-scale continuous benchmark suite.

Five separability classes built from five base functions (elliptic,
Rastrigin, Ackley, Schwefel 1.2, Rosenbrock):

  F1-F3    separable: base(x - o) over the whole vector
  F4-F8    single-group: one m-variable nonseparable group weighted 1e6
           plus a separable remainder
  F9-F13   D/2m groups of m nonseparable variables plus a separable half
  F14-F18  D/m groups covering every variable
  F19-F20  fully nonseparable: Schwefel 1.2 / Rosenbrock over the whole vector

Grouping uses a random permutation of the variable indices; elliptic,
Rastrigin and Ackley groups are additionally rotated by random orthogonal
matrices. Formulas, bounds and weights follow the CEC'2010 LSGO suite
definitions; every adopted constant is documented in SUITE.md. Instance data
(shift, permutation, rotations) is generated deterministically from a data
seed, or loaded from plain-text files via `load_problem_data`.
"""

import functools
import math

import numpy as np

from .core import Bounds

PROBLEM_IDS = tuple(f"F{i}" for i in range(1, 21))

SEPARABLE = "separable"
SINGLE_GROUP = "single-group"
HALF_GROUPS = "half-groups"
ALL_GROUPS = "all-groups"
FULLY_NONSEPARABLE = "fully-nonseparable"

SINGLE_GROUP_WEIGHT = 1.0e6

_ROTATION_ORTHO_TOL = 1e-10


# ---------------------------------------------------------------------------
# Base functions. Each maps a real vector z to a scalar with minimum 0 at
# z = 0 (Rosenbrock: at z = 1).

@functools.lru_cache(maxsize=None)
def _elliptic_weights(d: int) -> np.ndarray:
    if d == 1:
        return np.ones(1)
    return np.power(1.0e6, np.arange(d) / (d - 1))


def eval_elliptic(z: np.ndarray) -> float:
    """sum_i 10^(6(i-1)/(D-1)) z_i^2 (z_1^2 when D = 1)."""
    z = np.asarray(z, dtype=float)
    return float(np.dot(_elliptic_weights(z.shape[0]), z * z))


def eval_rastrigin(z: np.ndarray) -> float:
    """sum_i (z_i^2 - 10 cos(2 pi z_i) + 10)."""
    z = np.asarray(z, dtype=float)
    return float(np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z) + 10.0))


def eval_ackley(z: np.ndarray) -> float:
    """-20 exp(-0.2 sqrt(mean(z^2))) - exp(mean(cos(2 pi z))) + 20 + e."""
    z = np.asarray(z, dtype=float)
    d = z.shape[0]
    return float(-20.0 * math.exp(-0.2 * math.sqrt(np.dot(z, z) / d))
                 - math.exp(np.sum(np.cos(2.0 * np.pi * z)) / d) + 20.0 + math.e)


def eval_schwefel12(z: np.ndarray) -> float:
    """sum_i (sum_{j<=i} z_j)^2, via running prefix sums (O(D))."""
    z = np.asarray(z, dtype=float)
    partial = np.cumsum(z)
    return float(np.dot(partial, partial))


def eval_rosenbrock(z: np.ndarray) -> float:
    """sum_{i<D} [100 (z_i^2 - z_{i+1})^2 + (z_i - 1)^2]."""
    z = np.asarray(z, dtype=float)
    head, tail = z[:-1], z[1:]
    return float(np.sum(100.0 * (head * head - tail) ** 2 + (head - 1.0) ** 2))


def eval_sphere(z: np.ndarray) -> float:
    """sum_i z_i^2 (the separable remainder of F7/F8/F12/F13)."""
    z = np.asarray(z, dtype=float)
    return float(np.dot(z, z))


_BASE_FUNCTIONS = {
    "elliptic": eval_elliptic,
    "rastrigin": eval_rastrigin,
    "ackley": eval_ackley,
    "schwefel12": eval_schwefel12,
    "rosenbrock": eval_rosenbrock,
    "sphere": eval_sphere,
}

_FAMILY_BOUNDS = {
    "elliptic": Bounds(-100.0, 100.0),
    "rastrigin": Bounds(-5.0, 5.0),
    "ackley": Bounds(-32.0, 32.0),
    "schwefel12": Bounds(-100.0, 100.0),
    "rosenbrock": Bounds(-100.0, 100.0),
}


class _Recipe:
    """Static composition layout for one problem id."""

    __slots__ = ("klass", "group_base", "rotated", "remainder_base")

    def __init__(self, klass, group_base, rotated, remainder_base):
        self.klass = klass
        self.group_base = group_base
        self.rotated = rotated
        self.remainder_base = remainder_base


_RECIPES = {
    "F1": _Recipe(SEPARABLE, None, False, "elliptic"),
    "F2": _Recipe(SEPARABLE, None, False, "rastrigin"),
    "F3": _Recipe(SEPARABLE, None, False, "ackley"),
    "F4": _Recipe(SINGLE_GROUP, "elliptic", True, "elliptic"),
    "F5": _Recipe(SINGLE_GROUP, "rastrigin", True, "rastrigin"),
    "F6": _Recipe(SINGLE_GROUP, "ackley", True, "ackley"),
    "F7": _Recipe(SINGLE_GROUP, "schwefel12", False, "sphere"),
    "F8": _Recipe(SINGLE_GROUP, "rosenbrock", False, "sphere"),
    "F9": _Recipe(HALF_GROUPS, "elliptic", True, "elliptic"),
    "F10": _Recipe(HALF_GROUPS, "rastrigin", True, "rastrigin"),
    "F11": _Recipe(HALF_GROUPS, "ackley", True, "ackley"),
    "F12": _Recipe(HALF_GROUPS, "schwefel12", False, "sphere"),
    "F13": _Recipe(HALF_GROUPS, "rosenbrock", False, "sphere"),
    "F14": _Recipe(ALL_GROUPS, "elliptic", True, None),
    "F15": _Recipe(ALL_GROUPS, "rastrigin", True, None),
    "F16": _Recipe(ALL_GROUPS, "ackley", True, None),
    "F17": _Recipe(ALL_GROUPS, "schwefel12", False, None),
    "F18": _Recipe(ALL_GROUPS, "rosenbrock", False, None),
    "F19": _Recipe(FULLY_NONSEPARABLE, "schwefel12", False, None),
    "F20": _Recipe(FULLY_NONSEPARABLE, "rosenbrock", False, None),
}


def _recipe(problem_id: str) -> _Recipe:
    try:
        return _RECIPES[problem_id]
    except KeyError:
        raise ValueError(f"unknown problem id {problem_id!r}; expected F1..F20") from None


def problem_class(problem_id: str) -> str:
    return _recipe(problem_id).klass


def problem_bounds(problem_id: str) -> Bounds:
    """Search box of a problem, determined by its base-function family."""
    recipe = _recipe(problem_id)
    family = recipe.group_base or recipe.remainder_base
    return _FAMILY_BOUNDS[family]


def generate_rotation(m: int, rng: np.random.Generator) -> np.ndarray:
    """Random m x m orthogonal matrix: Gaussian columns, modified Gram-Schmidt.

    A second orthogonalization pass keeps ||R^T R - I|| near machine epsilon.
    """
    if m < 1:
        raise ValueError("rotation size must be >= 1")
    q = np.empty((m, m))
    for j in range(m):
        v = rng.standard_normal(m)
        while True:
            for _ in range(2):
                for i in range(j):
                    v = v - np.dot(q[:, i], v) * q[:, i]
            norm = np.linalg.norm(v)
            if norm > 1e-8:
                break
            v = rng.standard_normal(m)
        q[:, j] = v / norm
    return q


class ProblemData:
    """Instance data: optimum shift, variable grouping and group rotations."""

    __slots__ = ("shift", "permutation", "rotations", "weight")

    def __init__(self, shift, permutation, rotations=(), weight=1.0):
        self.shift = np.asarray(shift, dtype=float)
        self.permutation = np.asarray(permutation, dtype=np.intp)
        self.rotations = [np.asarray(r, dtype=float) for r in rotations]
        self.weight = float(weight)

    def validate(self, dimension: int, bounds: Bounds) -> None:
        if self.shift.shape != (dimension,):
            raise ValueError(f"shift must have length {dimension}")
        if not (np.all(self.shift > bounds.lower) and np.all(self.shift < bounds.upper)):
            raise ValueError("shift components must lie strictly inside the bounds")
        if sorted(self.permutation.tolist()) != list(range(dimension)):
            raise ValueError("permutation must be a bijection on the variable indices")
        for r in self.rotations:
            m = r.shape[0]
            if r.shape != (m, m):
                raise ValueError("rotations must be square")
            defect = np.max(np.abs(r.T @ r - np.eye(m)))
            if defect > _ROTATION_ORTHO_TOL:
                raise ValueError(f"rotation fails orthogonality check ({defect:.2e})")


class BenchmarkProblem:
    """A composed benchmark objective; immutable and safe to share across runs.

    Evaluation applies, in order: shift (z = x - o), permutation, per-group
    rotation where the class calls for it, the base function per group, and
    the class-specific aggregation. `optimum_position()` returns the analytic
    minimizer (fitness 0).
    """

    __slots__ = ("problem_id", "dimension", "group_size", "bounds", "klass",
                 "group_base", "remainder_base", "rotated", "group_count",
                 "data", "optimum_value", "_group_fn", "_remainder_fn",
                 "_grouped_length", "_identity_permutation")

    def __init__(self, problem_id, dimension, group_size, data: ProblemData):
        recipe = _recipe(problem_id)
        self.problem_id = problem_id
        self.dimension = int(dimension)
        self.group_size = int(group_size)
        self.bounds = problem_bounds(problem_id)
        self.klass = recipe.klass
        self.group_base = recipe.group_base
        self.remainder_base = recipe.remainder_base
        self.rotated = recipe.rotated
        self.group_count = _group_count(recipe.klass, self.dimension, self.group_size)
        self.data = data
        self.optimum_value = 0.0
        self._group_fn = _BASE_FUNCTIONS[recipe.group_base] if recipe.group_base else None
        self._remainder_fn = (_BASE_FUNCTIONS[recipe.remainder_base]
                              if recipe.remainder_base else None)
        if self.klass == FULLY_NONSEPARABLE:
            self._grouped_length = self.dimension
        else:
            self._grouped_length = self.group_count * self.group_size
        self._identity_permutation = bool(
            np.array_equal(data.permutation, np.arange(self.dimension)))
        data.validate(self.dimension, self.bounds)
        if self.rotated and len(data.rotations) != self.group_count:
            raise ValueError(f"{problem_id} needs {self.group_count} rotation matrices")

    def __call__(self, x) -> float:
        z = np.asarray(x, dtype=float) - self.data.shift
        y = z if self._identity_permutation else z[self.data.permutation]
        if self.klass == SEPARABLE:
            return self._remainder_fn(y)
        if self.klass == FULLY_NONSEPARABLE:
            return self._group_fn(y)
        m = self.group_size
        total = 0.0
        for k in range(self.group_count):
            w = y[k * m:(k + 1) * m]
            if self.rotated:
                w = self.data.rotations[k] @ w
            total += self._group_fn(w)
        if self.klass == SINGLE_GROUP:
            total *= self.data.weight
        if self._remainder_fn is not None:
            total += self._remainder_fn(y[self._grouped_length:])
        return total

    def optimum_position(self) -> np.ndarray:
        """Analytic minimizer: the shift, +1 inside Rosenbrock-valued groups."""
        x = self.data.shift.copy()
        if self.group_base == "rosenbrock":
            x[self.data.permutation[:self._grouped_length]] += 1.0
        return x

    def __repr__(self):
        return (f"BenchmarkProblem({self.problem_id}, D={self.dimension}, "
                f"m={self.group_size}, class={self.klass})")


def _group_count(klass: str, dimension: int, group_size: int) -> int:
    if klass == SEPARABLE:
        return 0
    if klass == SINGLE_GROUP:
        return 1
    if klass == HALF_GROUPS:
        return dimension // (2 * group_size)
    if klass == ALL_GROUPS:
        return dimension // group_size
    return 1  # fully nonseparable: one group spanning the vector


def _validate_shape(problem_id: str, dimension: int, group_size: int) -> None:
    recipe = _recipe(problem_id)
    if dimension < 2:
        raise ValueError("dimension must be >= 2")
    if recipe.klass in (SINGLE_GROUP, HALF_GROUPS, ALL_GROUPS):
        if group_size < 2:
            raise ValueError("group size must be >= 2 for grouped problems")
        if recipe.klass == SINGLE_GROUP and group_size >= dimension:
            raise ValueError(f"{problem_id} needs group_size < dimension")
        if recipe.klass == HALF_GROUPS and dimension % (2 * group_size) != 0:
            raise ValueError(f"{problem_id} needs 2*group_size to divide the dimension")
        if recipe.klass == ALL_GROUPS and dimension % group_size != 0:
            raise ValueError(f"{problem_id} needs group_size to divide the dimension")


def compose_problem(problem_id: str, dimension: int = 1000, group_size: int = 50,
                    data_seed: int = 1, data: ProblemData | None = None) -> BenchmarkProblem:
    """Build a benchmark instance, generating its data from `data_seed` unless
    preloaded `data` is supplied.

    Draw order from the data seed: shift (uniform strictly inside the bounds),
    permutation (identity for separable and fully-nonseparable classes), then
    one rotation matrix per rotated group.
    """
    _validate_shape(problem_id, dimension, group_size)
    if data is None:
        data = _generate_data(problem_id, dimension, group_size, data_seed)
    return BenchmarkProblem(problem_id, dimension, group_size, data)


# domain tag keeping instance-data streams decorrelated from engine run
# streams (a run seeded like the data seed must not sample the shift vector)
_DATA_STREAM_TAG = 0x6D616263


def _data_rng(data_seed: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([int(data_seed), _DATA_STREAM_TAG])))


def _generate_data(problem_id, dimension, group_size, data_seed) -> ProblemData:
    recipe = _recipe(problem_id)
    bounds = problem_bounds(problem_id)
    rng = _data_rng(data_seed)
    u = rng.random(dimension)
    shift = bounds.lower + bounds.span * u
    # random() can return exactly 0; keep the shift strictly interior
    np.clip(shift, bounds.lower + 1e-12 * bounds.span,
            bounds.upper - 1e-12 * bounds.span, out=shift)
    if recipe.klass in (SINGLE_GROUP, HALF_GROUPS, ALL_GROUPS):
        permutation = rng.permutation(dimension)
    else:
        permutation = np.arange(dimension)
    rotations = []
    if recipe.rotated:
        count = _group_count(recipe.klass, dimension, group_size)
        rotations = [generate_rotation(group_size, rng) for _ in range(count)]
    weight = SINGLE_GROUP_WEIGHT if recipe.klass == SINGLE_GROUP else 1.0
    return ProblemData(shift, permutation, rotations, weight)


# ---------------------------------------------------------------------------
# Optional loader for externally published instance data files (SUITE.md
# documents the naming and layout: whitespace-separated decimal text,
# row-major matrices, permutations 0- or 1-based).

def _read_tokens(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read().replace(",", " ").split()


def load_problem_data(directory, problem_id: str, dimension: int,
                      group_size: int) -> ProblemData:
    """Read `<id>_shift.txt`, and where the class needs them `<id>_perm.txt`
    and `<id>_rot.txt`, from `directory`."""
    import os

    _validate_shape(problem_id, dimension, group_size)
    recipe = _recipe(problem_id)
    shift = np.array([float(t) for t in
                      _read_tokens(os.path.join(directory, f"{problem_id}_shift.txt"))])
    if shift.shape != (dimension,):
        raise ValueError(f"{problem_id}_shift.txt holds {shift.shape[0]} values, "
                         f"expected {dimension}")

    if recipe.klass in (SINGLE_GROUP, HALF_GROUPS, ALL_GROUPS):
        raw = [int(float(t)) for t in
               _read_tokens(os.path.join(directory, f"{problem_id}_perm.txt"))]
        permutation = np.asarray(raw, dtype=np.intp)
        if sorted(raw) == list(range(1, dimension + 1)):
            permutation = permutation - 1  # 1-based file
        elif sorted(raw) != list(range(dimension)):
            raise ValueError(f"{problem_id}_perm.txt is not a permutation of the indices")
    else:
        permutation = np.arange(dimension)

    rotations = []
    if recipe.rotated:
        count = _group_count(recipe.klass, dimension, group_size)
        values = [float(t) for t in
                  _read_tokens(os.path.join(directory, f"{problem_id}_rot.txt"))]
        expected = count * group_size * group_size
        if len(values) != expected:
            raise ValueError(f"{problem_id}_rot.txt holds {len(values)} values, "
                             f"expected {expected}")
        block = np.asarray(values).reshape(count, group_size, group_size)
        rotations = [block[k] for k in range(count)]

    weight = SINGLE_GROUP_WEIGHT if recipe.klass == SINGLE_GROUP else 1.0
    return ProblemData(shift, permutation, rotations, weight)


def describe(problem_id: str, dimension: int = 1000, group_size: int = 50) -> dict:
    """Suite metadata for one problem id (used by the CLI's bench-info verb)."""
    recipe = _recipe(problem_id)
    bounds = problem_bounds(problem_id)
    return {
        "id": problem_id,
        "class": recipe.klass,
        "group_base": recipe.group_base,
        "remainder_base": recipe.remainder_base,
        "rotated": recipe.rotated,
        "groups": _group_count(recipe.klass, dimension, group_size),
        "lower": bounds.lower,
        "upper": bounds.upper,
    }
