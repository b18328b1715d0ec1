"""Ideological sublations (IS) optimizer.

Each iteration has three moments:

* understanding: evaluate proposals, keep a thinker's new thesis only if it
  is strictly better, sort the population and split it into ``k1``
  speculative thinkers (the best) and ``p - k1`` practical thinkers;
* sublation: every thinker deterministically picks an antithesis among the
  current theses;
* resolution: every thinker steps toward its antithesis with a random
  entry-wise step vector whose distribution depends on the thinking mode.

Indices below are 0-based positions in the cost-sorted population, so the
best thesis is index 0.
"""

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .metrics import MetricKind, pairwise_distance
from .problem import ConfigurationError


class ThinkingMode(enum.Enum):
    SPECULATIVE = "speculative"
    PRACTICAL = "practical"


class TargetKind(enum.IntEnum):
    NEIGHBOR = 0  # speculative thinkers: a quality neighbour
    BEST = 1  # practical thinker heading to the best thesis
    ALT = 2  # practical thinker heading to the alternative antithesis


@dataclass(frozen=True)
class StepSizeParams:
    """Fixed step-size distribution parameters.

    Speculative steps are uniform around ``m1``. With the default
    ``uniform_spread="half_width"`` the support is ``m1 +/- sigma1``; with
    ``"std"`` the support is ``m1 +/- sigma1*sqrt(3)`` so that ``sigma1`` is
    the standard deviation. The std reading makes the speculative moves
    expansive, which drives populations onto the domain boundary (see the
    README).

    Practical steps are Gaussian with mean ``m2_best`` or ``m2_alt``
    depending on the target and a standard deviation selected by ``k2``.
    """

    m1: float = 0.0445
    sigma1: float = 1.02
    m2_best: float = 0.6
    m2_alt: float = 0.45
    sigma2_k2eq1: float = math.sqrt(0.2)
    sigma2_k2gt1: float = math.sqrt(0.5)
    uniform_spread: str = "half_width"

    def __post_init__(self):
        for name in ("m1", "sigma1", "m2_best", "m2_alt", "sigma2_k2eq1", "sigma2_k2gt1"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"step-size parameter {name} must be positive")
        if self.uniform_spread not in ("half_width", "std"):
            raise ConfigurationError(f"unknown uniform_spread {self.uniform_spread!r}")

    @property
    def uniform_bounds(self):
        half = self.sigma1 if self.uniform_spread == "half_width" else self.sigma1 * math.sqrt(3.0)
        return self.m1 - half, self.m1 + half

    @property
    def uniform_std(self):
        low, high = self.uniform_bounds
        return (high - low) / math.sqrt(12.0)

    def sigma2(self, k2):
        return self.sigma2_k2eq1 if k2 == 1 else self.sigma2_k2gt1

    def m2(self, target):
        return self.m2_best if target == TargetKind.BEST else self.m2_alt


DEFAULT_STEPS = StepSizeParams()


@dataclass(frozen=True)
class Thesis:
    id: int
    position: np.ndarray
    cost: float


@dataclass
class Population:
    """Theses kept sorted by cost (ties broken by thinker id)."""

    positions: np.ndarray
    costs: np.ndarray
    ids: np.ndarray
    k1: int
    k2: int
    iteration: int = 0
    nfe: int = 0
    nonfinite: int = 0

    def __post_init__(self):
        p = len(self.positions)
        if not 2 <= self.k1 <= p - 1:
            raise ConfigurationError(f"k1 must lie in [2, p-1] = [2, {p - 1}], got {self.k1}")
        if not 1 <= self.k2 <= self.k1:
            raise ConfigurationError(f"k2 must lie in [1, k1] = [1, {self.k1}], got {self.k2}")

    @classmethod
    def unevaluated(cls, positions, k1, k2):
        """Initial theses before the first understanding moment."""
        positions = np.array(positions, dtype=float)
        p = len(positions)
        return cls(positions, np.full(p, np.inf), np.arange(p), k1, k2)

    @property
    def p(self):
        return len(self.positions)

    @property
    def dim(self):
        return self.positions.shape[1]

    @property
    def best(self):
        return self[0]

    def __len__(self):
        return self.p

    def __getitem__(self, i):
        return Thesis(int(self.ids[i]), self.positions[i], float(self.costs[i]))

    def mode(self, i):
        return ThinkingMode.SPECULATIVE if i < self.k1 else ThinkingMode.PRACTICAL


@dataclass(frozen=True)
class AntithesisAssignment:
    """Per-thinker antithesis index and target kind, in sorted order."""

    indices: np.ndarray
    kinds: np.ndarray

    def kind(self, i):
        return TargetKind(int(self.kinds[i]))


def _points(population, points):
    return population.positions if points is None else np.asarray(points, dtype=float)


def _dist(points, i, j, metric):
    return pairwise_distance(points[i], points[j], metric)


def speculative_antithesis(population, i, metric=MetricKind.EUCLIDEAN, points=None):
    """Antithesis of speculative thinker ``i`` (0 <= i < k1).

    The best and the k1-th thinker take their only quality neighbour; the
    others take whichever neighbour is farther away, preferring the better
    one on ties.
    """
    k1 = population.k1
    if k1 < 2:
        raise ConfigurationError("the speculative block needs at least two thinkers")
    if not 0 <= i < k1:
        raise IndexError(f"speculative index {i} outside [0, {k1})")
    if i == 0:
        return 1
    if i == k1 - 1:
        return k1 - 2
    pts = _points(population, points)
    if _dist(pts, i + 1, i, metric) > _dist(pts, i - 1, i, metric):
        return i + 1
    return i - 1


def alternative_antithesis(population, k2=None, metric=MetricKind.EUCLIDEAN, points=None):
    """Among the 2nd..k2-th best theses, the one farthest from the best.

    With ``k2 == 1`` there is no candidate and the best thesis (index 0)
    itself is returned.
    """
    k2 = population.k2 if k2 is None else k2
    if k2 < 1:
        raise ConfigurationError("k2 must be at least 1")
    if k2 > population.p:
        raise ConfigurationError(f"k2={k2} exceeds population size {population.p}")
    if k2 == 1:
        return 0
    pts = _points(population, points)
    cand = np.arange(1, k2)
    d = pairwise_distance(pts[cand], np.broadcast_to(pts[0], pts[cand].shape), metric)
    return int(cand[np.argmax(d)])


def practical_antithesis(population, i, alt, metric=MetricKind.EUCLIDEAN, points=None):
    """Pick the nearer of the best thesis and ``alt`` for practical thinker ``i``.

    Returns ``(index, TargetKind)``; ties go to the alternative.
    """
    if not population.k1 <= i < population.p:
        raise IndexError(f"practical index {i} outside [{population.k1}, {population.p})")
    if alt == 0:
        return 0, TargetKind.BEST
    pts = _points(population, points)
    if _dist(pts, alt, i, metric) > _dist(pts, 0, i, metric):
        return 0, TargetKind.BEST
    return alt, TargetKind.ALT


def assign_antitheses(population, metric=MetricKind.EUCLIDEAN, points=None):
    """Vectorized sublation moment over the whole population."""
    p, k1 = population.p, population.k1
    pts = _points(population, points)
    indices = np.empty(p, dtype=np.intp)
    kinds = np.full(p, TargetKind.NEIGHBOR, dtype=np.int8)

    indices[0] = 1
    indices[k1 - 1] = k1 - 2
    if k1 > 2:
        mid = np.arange(1, k1 - 1)
        ahead = pairwise_distance(pts[mid + 1], pts[mid], metric)
        behind = pairwise_distance(pts[mid - 1], pts[mid], metric)
        indices[mid] = np.where(ahead > behind, mid + 1, mid - 1)

    alt = alternative_antithesis(population, metric=metric, points=pts)
    if p > k1:
        prac = np.arange(k1, p)
        if alt == 0:
            indices[prac] = 0
            kinds[prac] = TargetKind.BEST
        else:
            to_alt = pairwise_distance(np.broadcast_to(pts[alt], pts[prac].shape), pts[prac], metric)
            to_best = pairwise_distance(np.broadcast_to(pts[0], pts[prac].shape), pts[prac], metric)
            go_best = to_alt > to_best
            indices[prac] = np.where(go_best, 0, alt)
            kinds[prac] = np.where(go_best, TargetKind.BEST, TargetKind.ALT)
    return AntithesisAssignment(indices, kinds)


def sample_step_vector(mode, target_kind, k2, d, rng, params=DEFAULT_STEPS):
    """Draw one step vector for a single thinker."""
    if mode is ThinkingMode.SPECULATIVE:
        low, high = params.uniform_bounds
        return rng.uniform(low, high, d)
    return rng.normal(params.m2(target_kind), params.sigma2(k2), d)


def sample_steps(assignment, k1, k2, d, rng, params=DEFAULT_STEPS):
    """Step vectors for the whole sorted population.

    Consumes the stream exactly like calling :func:`sample_step_vector` for
    thinkers 0..p-1 in order: the speculative block comes first and draws
    uniforms only, the practical block draws standard normals only.
    """
    p = len(assignment.indices)
    low, high = params.uniform_bounds
    steps = np.empty((p, d))
    steps[:k1] = rng.uniform(low, high, (k1, d))
    if p > k1:
        kinds = assignment.kinds[k1:]
        means = np.where(kinds == TargetKind.BEST, params.m2_best, params.m2_alt)
        steps[k1:] = means[:, None] + params.sigma2(k2) * rng.standard_normal((p - k1, d))
    return steps


def resolution_moment(population, assignment, params=DEFAULT_STEPS, rng=None, steps=None):
    """Proposed positions x + mu * (anti - x); the population is not modified.

    ``steps`` overrides the random step vectors (shape (p, d)).
    """
    x = population.positions
    if steps is None:
        if rng is None:
            raise ValueError("either rng or steps is required")
        steps = sample_steps(assignment, population.k1, population.k2, population.dim, rng, params)
    steps = np.asarray(steps, dtype=float)
    return x + steps * (x[assignment.indices] - x)


def understanding_moment(population, new_positions, problem, rngs=None):
    """Evaluate proposals, accept strict improvements, then re-sort.

    ``new_positions[i]`` is the proposal of the thinker currently at sorted
    index ``i``; it must already be inside the problem domain. ``rngs`` is
    indexed by thinker id and only needed for stochastic problems. In the
    first iteration every proposal is accepted.
    """
    new_positions = np.asarray(new_positions, dtype=float)
    if new_positions.shape != population.positions.shape:
        raise ConfigurationError(
            f"expected proposals of shape {population.positions.shape}, got {new_positions.shape}"
        )
    row_rngs = None if rngs is None else [rngs[t] for t in population.ids]
    new_costs = problem.evaluate(new_positions, row_rngs)
    nonfinite = int(np.count_nonzero(np.isinf(new_costs)))

    if population.iteration == 0:
        accept = np.ones(population.p, dtype=bool)
    else:
        accept = new_costs < population.costs
    positions = np.where(accept[:, None], new_positions, population.positions)
    costs = np.where(accept, new_costs, population.costs)

    order = np.lexsort((population.ids, costs))
    return Population(
        positions[order],
        costs[order],
        population.ids[order],
        population.k1,
        population.k2,
        iteration=population.iteration + 1,
        nfe=population.nfe + population.p,
        nonfinite=population.nonfinite + nonfinite,
    )


@dataclass(frozen=True)
class ISConfig:
    k1: int
    k2: int = 2
    p: int = 40
    nfe: int = 20000
    params: StepSizeParams = DEFAULT_STEPS

    def validate(self):
        if self.p < 3:
            raise ConfigurationError(f"population size must be at least 3, got {self.p}")
        if not 2 <= self.k1 <= self.p - 1:
            raise ConfigurationError(f"k1 must lie in [2, {self.p - 1}], got {self.k1}")
        if not 1 <= self.k2 <= self.k1:
            raise ConfigurationError(f"k2 must lie in [1, k1={self.k1}], got {self.k2}")
        if self.nfe < self.p:
            raise ConfigurationError(f"nfe budget {self.nfe} is below the population size {self.p}")


@dataclass
class TrialRecord:
    """Outcome of one optimizer run.

    ``trace`` has one row per iteration: (nfe, best cost, iteration).
    """

    algorithm: str
    problem: str
    seed: int
    best_position: np.ndarray
    best_cost: float
    trace: np.ndarray
    nfe: int
    iterations: int
    wall_time: float
    nonfinite: int = 0
    unified: bool = False
    extras: dict = field(default_factory=dict)

    @property
    def best_costs(self):
        return self.trace[:, 1]


def max_spread(points):
    """Largest pairwise Euclidean distance inside a point cloud."""
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))


# Theses closer than this are considered unified (diagnostic only).
UNIFIED_TOL = 1e-12


def run(problem, config, seed, init=None):
    """Minimize ``problem`` with IS until the nfe budget is spent.

    The budget is consumed in whole iterations of ``p`` evaluations. Three
    independent streams are derived from ``seed``: initial positions, step
    vectors, and (for stochastic problems) one noise stream per thinker.
    """
    config.validate()
    p, d = config.p, problem.dim
    init_ss, step_ss, noise_ss = np.random.SeedSequence(seed).spawn(3)
    step_rng = np.random.default_rng(step_ss)
    noise = None
    if problem.stochastic:
        noise = [np.random.default_rng(s) for s in noise_ss.spawn(p)]

    if init is None:
        init = problem.random_positions(p, np.random.default_rng(init_ss))
    init = np.asarray(init, dtype=float)
    if init.shape != (p, d):
        raise ConfigurationError(f"initial population must have shape {(p, d)}, got {init.shape}")

    start = time.perf_counter()
    pop = Population.unevaluated(problem.clamp(init), config.k1, config.k2)
    pop = understanding_moment(pop, pop.positions, problem, noise)
    rows = [(pop.nfe, pop.costs[0], pop.iteration)]
    while pop.nfe + p <= config.nfe:
        pts = problem.distance_points(pop.positions)
        assignment = assign_antitheses(pop, problem.metric, pts)
        proposals = resolution_moment(pop, assignment, config.params, step_rng)
        pop = understanding_moment(pop, problem.clamp(proposals), problem, noise)
        rows.append((pop.nfe, pop.costs[0], pop.iteration))
    wall = time.perf_counter() - start

    return TrialRecord(
        algorithm="IS",
        problem=problem.name,
        seed=seed,
        best_position=pop.positions[0].copy(),
        best_cost=float(pop.costs[0]),
        trace=np.array(rows, dtype=float),
        nfe=pop.nfe,
        iterations=pop.iteration,
        wall_time=wall,
        nonfinite=pop.nonfinite,
        unified=max_spread(pop.positions) < UNIFIED_TOL,
    )
