"""DE/rand/1/bin baseline with the same trace format as the IS runs."""

import time
from dataclasses import dataclass

import numpy as np

from .optimizer import TrialRecord, max_spread, UNIFIED_TOL
from .problem import ConfigurationError


@dataclass(frozen=True)
class DEConfig:
    cr: float
    f: float
    p: int = 40
    nfe: int = 20000

    def validate(self):
        if not 0.0 <= self.cr <= 1.0:
            raise ConfigurationError(f"Cr must lie in [0, 1], got {self.cr}")
        if not self.f > 0.0:
            raise ConfigurationError(f"F must be positive, got {self.f}")
        if self.p < 4:
            raise ConfigurationError(f"DE/rand/1 needs p >= 4, got {self.p}")
        if self.nfe < self.p:
            raise ConfigurationError(f"nfe budget {self.nfe} is below the population size {self.p}")


def sample_partners(p, rng):
    """Three mutually distinct partner indices per target, none equal to it.

    Rejection sampling: rows with a collision are redrawn until clean.
    """
    target = np.arange(p)
    r = rng.integers(0, p, size=(p, 3))
    while True:
        bad = (
            (r[:, 0] == target) | (r[:, 1] == target) | (r[:, 2] == target)
            | (r[:, 0] == r[:, 1]) | (r[:, 0] == r[:, 2]) | (r[:, 1] == r[:, 2])
        )
        n_bad = int(np.count_nonzero(bad))
        if n_bad == 0:
            return r
        r[bad] = rng.integers(0, p, size=(n_bad, 3))


def make_trials(x, cr, f, rng, partners=None):
    """Mutation plus binomial crossover for the whole population.

    At least one coordinate (drawn uniformly) always comes from the mutant.
    """
    p, d = x.shape
    if partners is None:
        partners = sample_partners(p, rng)
    r1, r2, r3 = partners.T
    mutant = x[r1] + f * (x[r2] - x[r3])
    cross = rng.random((p, d)) < cr
    jrand = rng.integers(0, d, size=p)
    cross[np.arange(p), jrand] = True
    return np.where(cross, mutant, x)


def de_run(problem, config, seed, init=None):
    """Minimize ``problem`` with DE/rand/1/bin.

    Selection keeps the trial vector when it is no worse than the target
    (the classic ``<=`` rule), which keeps the best cost monotone.
    """
    config.validate()
    p, d = config.p, problem.dim
    init_ss, step_ss, noise_ss = np.random.SeedSequence([seed, 0xDE]).spawn(3)
    rng = np.random.default_rng(step_ss)
    noise = None
    if problem.stochastic:
        noise = [np.random.default_rng(s) for s in noise_ss.spawn(p)]

    if init is None:
        init = problem.random_positions(p, np.random.default_rng(init_ss))
    x = problem.clamp(np.asarray(init, dtype=float))
    if x.shape != (p, d):
        raise ConfigurationError(f"initial population must have shape {(p, d)}, got {x.shape}")

    start = time.perf_counter()
    costs = problem.evaluate(x, noise)
    nonfinite = int(np.count_nonzero(np.isinf(costs)))
    nfe, it = p, 1
    rows = [(nfe, costs.min(), it)]
    while nfe + p <= config.nfe:
        trial = problem.clamp(make_trials(x, config.cr, config.f, rng))
        trial_costs = problem.evaluate(trial, noise)
        nonfinite += int(np.count_nonzero(np.isinf(trial_costs)))
        keep = trial_costs <= costs
        x = np.where(keep[:, None], trial, x)
        costs = np.where(keep, trial_costs, costs)
        nfe += p
        it += 1
        rows.append((nfe, costs.min(), it))
    wall = time.perf_counter() - start

    best = int(np.argmin(costs))
    return TrialRecord(
        algorithm="DE",
        problem=problem.name,
        seed=seed,
        best_position=x[best].copy(),
        best_cost=float(costs[best]),
        trace=np.array(rows, dtype=float),
        nfe=nfe,
        iterations=it,
        wall_time=wall,
        nonfinite=nonfinite,
        unified=max_spread(x) < UNIFIED_TOL,
    )
