"""Shared test helpers: stub problems and independent scalar-loop reference
implementations of the base functions (kept numpy-free on purpose so the
vectorized package code is checked against a structurally different path)."""

import math

import numpy as np
import pytest

from mabc.core import Bounds


class StubProblem:
    """Duck-typed problem wrapping an arbitrary objective callable."""

    def __init__(self, fn, dimension, bounds=Bounds(-100.0, 100.0),
                 problem_id="stub", optimum_value=0.0):
        self._fn = fn
        self.dimension = dimension
        self.bounds = bounds
        self.problem_id = problem_id
        self.optimum_value = optimum_value

    def __call__(self, x):
        return self._fn(x)


class RecordingProblem(StubProblem):
    """Stub that logs every evaluated position (copies, in call order)."""

    def __init__(self, fn, dimension, bounds=Bounds(-100.0, 100.0)):
        super().__init__(fn, dimension, bounds)
        self.calls: list[np.ndarray] = []

    def __call__(self, x):
        self.calls.append(np.array(x, dtype=float))
        return self._fn(x)


def sphere_problem(dimension, bounds=Bounds(-5.0, 5.0)):
    return StubProblem(lambda x: float(np.dot(x, x)), dimension, bounds,
                       problem_id="sphere")


# --- scalar-loop references -------------------------------------------------

def elliptic_ref(z):
    d = len(z)
    if d == 1:
        return z[0] * z[0]
    return sum((10.0 ** (6.0 * i / (d - 1))) * z[i] * z[i] for i in range(d))


def rastrigin_ref(z):
    return sum(v * v - 10.0 * math.cos(2.0 * math.pi * v) + 10.0 for v in z)


def ackley_ref(z):
    d = len(z)
    square_sum = sum(v * v for v in z)
    cos_sum = sum(math.cos(2.0 * math.pi * v) for v in z)
    return (-20.0 * math.exp(-0.2 * math.sqrt(square_sum / d))
            - math.exp(cos_sum / d) + 20.0 + math.e)


def schwefel12_ref(z):
    total = 0.0
    for i in range(len(z)):
        partial = 0.0
        for j in range(i + 1):
            partial += z[j]
        total += partial * partial
    return total


def rosenbrock_ref(z):
    return sum(100.0 * (z[i] * z[i] - z[i + 1]) ** 2 + (z[i] - 1.0) ** 2
               for i in range(len(z) - 1))


def sphere_ref(z):
    return sum(v * v for v in z)


BASE_REFS = {
    "elliptic": elliptic_ref,
    "rastrigin": rastrigin_ref,
    "ackley": ackley_ref,
    "schwefel12": schwefel12_ref,
    "rosenbrock": rosenbrock_ref,
    "sphere": sphere_ref,
}


def compose_ref(problem, x):
    """Independent re-derivation of the suite composition (plain loops)."""
    z = [float(a) - float(b) for a, b in zip(x, problem.data.shift)]
    y = [z[int(p)] for p in problem.data.permutation]
    m = problem.group_size
    if problem.klass == "separable":
        return BASE_REFS[problem.remainder_base](y)
    if problem.klass == "fully-nonseparable":
        return BASE_REFS[problem.group_base](y)
    total = 0.0
    for k in range(problem.group_count):
        w = y[k * m:(k + 1) * m]
        if problem.rotated:
            rotation = problem.data.rotations[k]
            w = [sum(float(rotation[r][c]) * w[c] for c in range(m)) for r in range(m)]
        total += BASE_REFS[problem.group_base](w)
    if problem.klass == "single-group":
        total *= problem.data.weight
    if problem.remainder_base is not None:
        total += BASE_REFS[problem.remainder_base](y[problem.group_count * m:])
    return total


@pytest.fixture
def rng():
    from mabc.core import rng_from_seed
    return rng_from_seed(12345)
