import numpy as np
import pytest

from sublation import benchmarks
from sublation.metrics import MetricKind
from sublation.optimizer import (
    DEFAULT_STEPS,
    ISConfig,
    Population,
    StepSizeParams,
    TargetKind,
    ThinkingMode,
    alternative_antithesis,
    assign_antitheses,
    practical_antithesis,
    resolution_moment,
    run,
    sample_step_vector,
    sample_steps,
    speculative_antithesis,
    understanding_moment,
)
from sublation.problem import ConfigurationError, ObjectiveProblem

import antithesis_oracle

KIND_CODE = {"N": TargetKind.NEIGHBOR, "B": TargetKind.BEST, "A": TargetKind.ALT}


def pop_1d(values, k1, k2=1):
    x = np.array(values, dtype=float)[:, None]
    return Population(x, np.arange(len(x), dtype=float), np.arange(len(x)), k1, k2)


def sphere_problem(d=3):
    return ObjectiveProblem.box("sphere", lambda x: np.sum(x * x, axis=-1), -5, 5, d)


# --- antithesis selection -------------------------------------------------

def test_speculative_ends():
    pop = pop_1d([0, 5, 1, 9], k1=3)
    assert speculative_antithesis(pop, 0) == 1
    assert speculative_antithesis(pop, 2) == 1


def test_speculative_farther_neighbour():
    # x1=0, x2=5, x3=1: |x3-x2| = 4 is not larger than |x1-x2| = 5
    pop = pop_1d([0, 5, 1, 7], k1=3)
    assert speculative_antithesis(pop, 1) == 0
    pop = pop_1d([0, 1, 5, 7], k1=3)
    assert speculative_antithesis(pop, 1) == 2


def test_speculative_tie_goes_to_better_neighbour():
    pop = pop_1d([0, 2, 4, 7], k1=3)
    assert speculative_antithesis(pop, 1) == 0


def test_speculative_index_range():
    pop = pop_1d([0, 1, 2, 3], k1=2)
    with pytest.raises(IndexError):
        speculative_antithesis(pop, 2)


def test_alternative():
    assert alternative_antithesis(pop_1d([0, 1, -4, 3], k1=3, k2=3)) == 2
    assert alternative_antithesis(pop_1d([0, 1, -4, 3], k1=3, k2=2)) == 1
    assert alternative_antithesis(pop_1d([0, 1, -4, 3], k1=3, k2=1)) == 0
    # equal distances: smallest index wins
    assert alternative_antithesis(pop_1d([0, 2, -2, 3], k1=3, k2=3)) == 1
    with pytest.raises(ConfigurationError):
        alternative_antithesis(pop_1d([0, 1, 2, 3], k1=3, k2=3), k2=5)


def test_practical():
    pop = pop_1d([0, 10, 5, 2], k1=3, k2=2)
    assert practical_antithesis(pop, 3, alt=1) == (0, TargetKind.BEST)
    equi = pop_1d([0, 10, 5, 5], k1=3, k2=2)
    assert practical_antithesis(equi, 3, alt=1) == (1, TargetKind.ALT)
    assert practical_antithesis(pop, 3, alt=0) == (0, TargetKind.BEST)


def test_population_validation():
    x = np.zeros((4, 2))
    with pytest.raises(ConfigurationError):
        Population.unevaluated(x, k1=1, k2=1)
    with pytest.raises(ConfigurationError):
        Population.unevaluated(x, k1=4, k2=1)
    with pytest.raises(ConfigurationError):
        Population.unevaluated(x, k1=2, k2=3)


def test_assignment_matches_scalar_functions_and_oracle():
    rng = np.random.default_rng(11)
    for _ in range(500):
        p = int(rng.integers(3, 9))
        d = int(rng.integers(1, 5))
        k1 = int(rng.integers(2, p))
        k2 = int(rng.integers(1, k1 + 1))
        # coarse grid makes distance ties common
        x = rng.integers(-2, 3, size=(p, d)).astype(float)
        pop = Population(x, np.arange(p, dtype=float), np.arange(p), k1, k2)
        a = assign_antitheses(pop)
        alt = alternative_antithesis(pop)
        for i in range(p):
            if i < k1:
                assert a.indices[i] == speculative_antithesis(pop, i)
                assert a.kind(i) is TargetKind.NEIGHBOR
            else:
                assert (a.indices[i], a.kind(i)) == practical_antithesis(pop, i, alt)
        expected = antithesis_oracle.select(x.tolist(), k1, k2)
        assert [int(j) + 1 for j in a.indices] == [j for j, _ in expected]
        assert [TargetKind(int(k)) for k in a.kinds] == [KIND_CODE[k] for _, k in expected]


def test_zero_norm_assignment_uses_hamming():
    rng = np.random.default_rng(5)
    for _ in range(200):
        p, d = 6, 5
        x = rng.integers(0, 2, size=(p, d)).astype(float)
        pop = Population(x, np.zeros(p), np.arange(p), 3, 3)
        a = assign_antitheses(pop, MetricKind.ZERO_NORM)
        expected = antithesis_oracle.select(x.tolist(), 3, 3, antithesis_oracle.hamming)
        assert [int(j) + 1 for j in a.indices] == [j for j, _ in expected]


def test_antithesis_never_self():
    rng = np.random.default_rng(8)
    for _ in range(300):
        p = int(rng.integers(3, 9))
        k1 = int(rng.integers(2, p))
        k2 = int(rng.integers(2, k1 + 1))
        x = rng.normal(size=(p, 2))
        a = assign_antitheses(Population(x, np.zeros(p), np.arange(p), k1, k2))
        assert np.all(a.indices != np.arange(p))


# --- step sizes ---------------------------------------------------------

def test_block_sampler_matches_per_thinker_sampler():
    pop = Population(np.random.default_rng(0).normal(size=(7, 3)), np.zeros(7), np.arange(7), 3, 2)
    a = assign_antitheses(pop)
    block = sample_steps(a, 3, 2, 3, np.random.default_rng(42))
    rng = np.random.default_rng(42)
    spec = [sample_step_vector(ThinkingMode.SPECULATIVE, None, 2, 3, rng) for _ in range(3)]
    z = [rng.standard_normal(3) for _ in range(4)]
    assert np.array_equal(block[:3], np.array(spec))
    for row, i in zip(z, range(3, 7)):
        mean = DEFAULT_STEPS.m2(a.kind(i))
        assert np.allclose(block[i], mean + DEFAULT_STEPS.sigma2(2) * row)


@pytest.mark.parametrize("spread", ["half_width", "std"])
def test_uniform_support_and_moments(spread):
    params = StepSizeParams(uniform_spread=spread)
    low, high = params.uniform_bounds
    mu = sample_step_vector(ThinkingMode.SPECULATIVE, None, 2, 200_000, np.random.default_rng(1), params)
    assert mu.min() >= low and mu.max() <= high
    assert abs(mu.mean() - params.m1) < 0.01
    assert abs(mu.std() - params.uniform_std) < 0.01


def test_std_reading_declares_sigma1_as_std():
    params = StepSizeParams(uniform_spread="std")
    assert params.uniform_std == pytest.approx(1.02)
    assert params.uniform_bounds == pytest.approx((0.0445 - 1.02 * 3**0.5, 0.0445 + 1.02 * 3**0.5))
    assert StepSizeParams().uniform_bounds == pytest.approx((0.0445 - 1.02, 0.0445 + 1.02))


def test_practical_parameters():
    assert DEFAULT_STEPS.m2(TargetKind.BEST) == 0.6
    assert DEFAULT_STEPS.m2(TargetKind.ALT) == 0.45
    assert DEFAULT_STEPS.sigma2(1) == pytest.approx(0.2**0.5)
    assert DEFAULT_STEPS.sigma2(3) == pytest.approx(0.5**0.5)
    with pytest.raises(ConfigurationError):
        StepSizeParams(uniform_spread="range")


# --- resolution and understanding -----------------------------------------

def test_resolution_examples():
    pop = pop_1d([2, 6, 0], k1=2)
    a = assign_antitheses(pop)  # thinker 0 -> 1
    out = resolution_moment(pop, a, steps=np.full((3, 1), 0.5))
    assert out[0, 0] == 4.0
    assert np.array_equal(resolution_moment(pop, a, steps=np.ones((3, 1)))[:, 0], pop.positions[a.indices, 0])
    assert np.array_equal(resolution_moment(pop, a, steps=np.zeros((3, 1))), pop.positions)
    assert np.array_equal(pop.positions[:, 0], [2, 6, 0])


def test_first_understanding_accepts_all_and_sorts():
    costs = np.array([3.0, 1.0, 4.0, 2.0])
    prob = ObjectiveProblem.box("lin", lambda x: x[:, 0], -10, 10, 1)
    pop = Population.unevaluated(np.zeros((4, 1)), 2, 1)
    pop = understanding_moment(pop, costs[:, None], prob)
    assert list(pop.costs) == [1, 2, 3, 4]
    assert list(pop.ids) == [1, 3, 0, 2]
    assert [pop.mode(i) for i in range(4)] == [ThinkingMode.SPECULATIVE] * 2 + [ThinkingMode.PRACTICAL] * 2
    assert pop.nfe == 4 and pop.iteration == 1


def test_equal_cost_is_rejected():
    prob = ObjectiveProblem.box("abs", lambda x: np.abs(x[:, 0]), -10, 10, 1)
    pop = understanding_moment(Population.unevaluated([[1.0], [2.0], [3.0]], 2, 1), [[1.0], [2.0], [3.0]], prob)
    nxt = understanding_moment(pop, [[-1.0], [-2.0], [0.5]], prob)
    assert nxt.positions[:, 0].tolist() == [0.5, 1.0, 2.0]
    assert nxt.ids.tolist() == [2, 0, 1]


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonfinite_costs_become_inf_and_are_counted():
    prob = ObjectiveProblem.box("log", lambda x: np.log(x[:, 0]), -1, 1, 1)
    pop = understanding_moment(Population.unevaluated([[0.5], [-0.5], [0.0]], 2, 1), [[0.5], [-0.5], [0.0]], prob)
    assert np.isinf(pop.costs[1:]).all() and pop.nonfinite == 2


def test_dimension_mismatch():
    prob = sphere_problem(2)
    pop = Population.unevaluated(np.zeros((3, 2)), 2, 1)
    with pytest.raises(ConfigurationError):
        understanding_moment(pop, np.zeros((3, 3)), prob)


def test_permutation_invariance_of_first_acceptance():
    prob = benchmarks.problem("f6", 4)
    rng = np.random.default_rng(9)
    x = rng.uniform(-5, 5, (6, 4))
    seeds = np.random.SeedSequence(1).spawn(6)
    perm = rng.permutation(6)

    def accepted(order):
        # thinker id follows the point, so each point keeps its own noise stream
        pop = Population(x[order], np.full(6, np.inf), order.copy(), 2, 1)
        streams = {int(t): np.random.default_rng(seeds[t]) for t in order}
        return sorted(understanding_moment(pop, x[order], prob, streams).costs)

    assert accepted(np.arange(6)) == accepted(perm)


# --- full runs ------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ConfigurationError):
        ISConfig(k1=40, p=40).validate()
    with pytest.raises(ConfigurationError):
        ISConfig(k1=5, k2=6).validate()
    with pytest.raises(ConfigurationError):
        ISConfig(k1=5, p=40, nfe=39).validate()
    with pytest.raises(ConfigurationError):
        ISConfig(k1=2, p=2).validate()


def test_run_bookkeeping():
    rec = run(benchmarks.problem("f1", 5), ISConfig(k1=10, k2=2, p=20, nfe=1010), seed=3)
    assert rec.nfe == 1000 and rec.iterations == 50
    assert rec.nfe == 20 * rec.iterations
    assert rec.trace[:, 0].tolist() == list(range(20, 1001, 20))
    assert rec.trace[:, 2].tolist() == list(range(1, 51))
    assert np.all(np.diff(rec.best_costs) <= 0)
    assert rec.best_cost == rec.best_costs[-1]
    assert rec.algorithm == "IS" and rec.problem == "f1-d5"


def test_budget_equal_to_population_returns_initial_best():
    prob = sphere_problem()
    init = np.random.default_rng(0).uniform(-5, 5, (10, 3))
    rec = run(prob, ISConfig(k1=4, k2=2, p=10, nfe=10), seed=0, init=init)
    assert rec.iterations == 1 and rec.nfe == 10
    assert rec.best_cost == min(prob(r) for r in init)


def test_deterministic_trace():
    prob = benchmarks.problem("f6", 6)
    cfg = ISConfig(k1=8, k2=3, p=16, nfe=800)
    a, b = run(prob, cfg, 7), run(prob, cfg, 7)
    assert np.array_equal(a.trace, b.trace) and np.array_equal(a.best_position, b.best_position)
    assert not np.array_equal(a.trace, run(prob, cfg, 8).trace)


def test_init_shape_checked():
    with pytest.raises(ConfigurationError):
        run(sphere_problem(), ISConfig(k1=4, p=10, nfe=100), 0, init=np.zeros((9, 3)))


def test_sphere_converges():
    rec = run(sphere_problem(5), ISConfig(k1=20, k2=2, p=40, nfe=8000), seed=0)
    assert rec.best_cost < 1e-8
