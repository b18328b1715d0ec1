"""The evaluation contract shared by every optimizer in the package."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .metrics import MetricKind


class ConfigurationError(ValueError):
    """Raised for invalid run parameters, before any evaluation happens."""


@dataclass(frozen=True)
class ObjectiveProblem:
    """A box-constrained minimization problem.

    ``cost`` maps an (n, d) array of (mapped) positions to n costs when
    ``vectorized`` is true, otherwise a single d-vector to a float. Stochastic
    objectives additionally receive ``rng=`` and are always called one
    position at a time, so each thinker can own its noise stream.

    ``mapping`` turns a continuous position into the discrete point that is
    actually evaluated (for instance a top-k binarization). It must accept
    (n, d) arrays and work row-wise.
    """

    name: str
    cost: Callable
    lower: np.ndarray
    upper: np.ndarray
    mapping: Optional[Callable] = None
    metric: MetricKind = MetricKind.EUCLIDEAN
    stochastic: bool = False
    vectorized: bool = True
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float)
        upper = np.array(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ConfigurationError("bounds must be two vectors of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("bounds must be finite")
        if np.any(lower >= upper):
            raise ConfigurationError("every lower bound must be below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "metric", MetricKind.parse(self.metric))

    @classmethod
    def box(cls, name, cost, low, high, dim, **kwargs):
        return cls(name, cost, np.full(dim, float(low)), np.full(dim, float(high)), **kwargs)

    @property
    def dim(self):
        return self.lower.shape[0]

    def clamp(self, x):
        return np.minimum(np.maximum(x, self.lower), self.upper)

    def map(self, x):
        x = np.asarray(x, dtype=float)
        if self.mapping is None:
            return x
        return np.asarray(self.mapping(x), dtype=float)

    def distance_points(self, x):
        # ZERO_NORM compares discrete representations, EUCLIDEAN raw positions.
        if self.metric is MetricKind.ZERO_NORM:
            return self.map(x)
        return np.asarray(x, dtype=float)

    def random_positions(self, n, rng):
        return self.lower + rng.random((n, self.dim)) * (self.upper - self.lower)

    def evaluate(self, positions, rngs=None):
        """Costs of an (n, d) batch; non-finite values come back as +inf.

        ``rngs`` is a sequence of n generators, required for stochastic
        problems (one per row).
        """
        x = np.asarray(positions, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.dim:
            raise ConfigurationError(
                f"{self.name}: expected positions of shape (n, {self.dim}), got {x.shape}"
            )
        mapped = self.map(x)
        if self.stochastic:
            if rngs is None or len(rngs) != len(mapped):
                raise ConfigurationError(f"{self.name} is stochastic and needs one rng per row")
            costs = np.array([self.cost(row, rng=r) for row, r in zip(mapped, rngs)], dtype=float)
        elif self.vectorized:
            costs = np.asarray(self.cost(mapped), dtype=float).reshape(len(mapped))
        else:
            costs = np.array([self.cost(row) for row in mapped], dtype=float)
        return np.where(np.isfinite(costs), costs, np.inf)

    def __call__(self, x, rng=None):
        """Evaluate a single position (convenience for interactive use)."""
        x = np.asarray(x, dtype=float)
        rngs = None if rng is None else [rng]
        return float(self.evaluate(x[None, :], rngs)[0])


def negated(problem, name=None):
    """Wrap a maximization problem as minimization of the negated objective."""
    cost = problem.cost

    def neg_cost(x, **kwargs):
        return -np.asarray(cost(x, **kwargs), dtype=float)

    return ObjectiveProblem(
        name or f"-{problem.name}",
        neg_cost,
        problem.lower,
        problem.upper,
        mapping=problem.mapping,
        metric=problem.metric,
        stochastic=problem.stochastic,
        vectorized=problem.vectorized,
        info=dict(problem.info),
    )
