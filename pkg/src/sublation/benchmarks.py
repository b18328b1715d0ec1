"""Single-objective benchmark functions f1..f12.

Every function works on the last axis, so it accepts one d-vector or an
(n, d) batch. ``f6`` is stochastic and needs a generator.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .problem import ConfigurationError, ObjectiveProblem

SCHWEFEL_SHIFT = 4.209687462275036e2
# Shift used by f12, taken literally as 4.209687462275036 * e^2.
SCHWEFEL_SHIFT_EXP = 4.209687462275036 * np.exp(2.0)


def cigar(x):
    x = np.asarray(x, dtype=float)
    return x[..., 0] ** 2 + 1e6 * np.sum(x[..., 1:] ** 2, axis=-1)


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    head, tail = x[..., :-1], x[..., 1:]
    return np.sum(100.0 * (tail - head**2) ** 2 + (head - 1.0) ** 2, axis=-1)


def ackley(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    a = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x**2, axis=-1) / d))
    b = -np.exp(np.sum(np.cos(2.0 * np.pi * x), axis=-1) / d)
    return a + b + 20.0 + np.e


def griewank(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[-1] + 1)
    return np.sum(x**2, axis=-1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=-1) + 1.0


def levy(x):
    x = np.asarray(x, dtype=float)
    w = 1.0 + (x - 1.0) / 4.0
    head = w[..., :-1]
    last = w[..., -1]
    return (
        np.sin(np.pi * w[..., 0]) ** 2
        + np.sum((head - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * head + 1.0) ** 2), axis=-1)
        + (last - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * last) ** 2)
    )


def stochastic(x, rng=None, eps=None):
    """sum_i eps_i |x_i - 1/i| with eps_i ~ U(0, 1) drawn per call.

    Pass ``eps`` explicitly (e.g. ``eps=1.0``) for a deterministic variant.
    """
    x = np.asarray(x, dtype=float)
    if eps is None:
        if rng is None:
            raise ValueError("stochastic benchmark needs rng or eps")
        eps = rng.random(x.shape)
    i = np.arange(1, x.shape[-1] + 1)
    return np.sum(eps * np.abs(x - 1.0 / i), axis=-1)


_WEIERSTRASS_K = np.arange(21)
_WEIERSTRASS_A = 0.5**_WEIERSTRASS_K
_WEIERSTRASS_B = 3.0**_WEIERSTRASS_K


def weierstrass(x):
    # The constant term sits inside the sum over i, as tabulated; the
    # minimum is therefore d*(d-1)*(2 - 2**-20) rather than zero.
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    waves = np.sum(
        _WEIERSTRASS_A * np.cos(2.0 * np.pi * _WEIERSTRASS_B * (x[..., None] + 0.5)), axis=-1
    )
    offset = d * np.sum(_WEIERSTRASS_A * np.cos(np.pi * _WEIERSTRASS_B))
    return np.sum(waves - offset, axis=-1)


_SHUBERT_J = np.arange(1, 6)


def shubert3(x):
    x = np.asarray(x, dtype=float)
    j = _SHUBERT_J
    return np.sum(np.sum(j * np.sin((j + 1) * x[..., None] + j), axis=-1), axis=-1)


def vincent(x):
    x = np.asarray(x, dtype=float)
    return -np.sum(np.sin(10.0 * np.log(x)), axis=-1)


def schaffer_f7(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    s = np.sqrt(x[..., :-1] ** 2 + x[..., 1:] ** 2)
    root = np.sqrt(s)
    inner = np.sum(root + root * np.sin(50.0 * s**0.2) ** 2, axis=-1) / (d - 1)
    return inner**2


def _schwefel_g(z, d):
    out = z * np.sin(np.sqrt(np.abs(z)))
    hi = z > 500.0
    lo = z < -500.0
    m = 500.0 - np.mod(z, 500.0)
    out = np.where(hi, m * np.sin(np.sqrt(np.abs(m))) - (z - 500.0) ** 2 / (1e4 * d), out)
    m = np.mod(np.abs(z), 500.0) - 500.0
    out = np.where(lo, m * np.sin(np.sqrt(np.abs(m))) - (z + 500.0) ** 2 / (1e4 * d), out)
    return out


def modified_schwefel(x, shift=SCHWEFEL_SHIFT):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    return 418.9829 * d - np.sum(_schwefel_g(x + shift, d), axis=-1)


def modified_schwefel_exp(x):
    return modified_schwefel(x, SCHWEFEL_SHIFT_EXP)


@dataclass(frozen=True)
class BenchmarkSpec:
    id: str
    name: str
    func: Callable
    domain: Tuple[float, float]
    dims: Tuple[int, ...]
    optimum: Optional[Callable] = None  # d -> (point, cost)
    stochastic: bool = False
    aliases: Tuple[str, ...] = ()

    def __post_init__(self):
        lo, hi = self.domain
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValueError(f"bad domain for {self.id}: {self.domain}")

    def optimal_cost(self, d):
        if self.optimum is None:
            return None
        return self.optimum(d)[1]


def _at(value, cost):
    return lambda d: (np.full(d, float(value)), cost(d))


def _weierstrass_min(d):
    return d * (d - 1) * float(np.sum(_WEIERSTRASS_A))


_SPECS = [
    BenchmarkSpec("f1", "Cigar", cigar, (-100.0, 100.0), (10, 100), _at(0.0, lambda d: 0.0)),
    BenchmarkSpec("f2", "Rosenbrock", rosenbrock, (-30.0, 30.0), (10, 100), _at(1.0, lambda d: 0.0)),
    BenchmarkSpec(
        "f3", "Ackley", ackley, (-100.0, 100.0), (10, 100), _at(0.0, lambda d: 0.0),
        aliases=("Easom",),
    ),
    # Domain widened to the usual Griewank box so that the optimum is reachable.
    BenchmarkSpec("f4", "Griewank", griewank, (-600.0, 600.0), (10, 100), _at(0.0, lambda d: 0.0)),
    BenchmarkSpec("f5", "Levy", levy, (-10.0, 10.0), (10, 100), _at(1.0, lambda d: 0.0)),
    BenchmarkSpec(
        "f6", "Stochastic", stochastic, (-5.0, 5.0), (10, 100),
        lambda d: (1.0 / np.arange(1, d + 1), 0.0), stochastic=True,
    ),
    BenchmarkSpec("f7", "Weierstrass", weierstrass, (-0.5, 0.5), (10, 100), _at(0.0, _weierstrass_min)),
    BenchmarkSpec("f8", "Shubert 3", shubert3, (-10.0, 10.0), (10, 100)),
    BenchmarkSpec(
        "f9", "Vincent", vincent, (0.25, 10.0), (10, 100),
        _at(np.exp(np.pi / 20.0), lambda d: -float(d)),
    ),
    BenchmarkSpec("f10", "Schaffer F7", schaffer_f7, (-100.0, 100.0), (40,), _at(0.0, lambda d: 0.0)),
    BenchmarkSpec("f11", "Modified Schwefel", modified_schwefel, (-600.0, 600.0), (80,)),
    BenchmarkSpec("f12", "Modified Schwefel (e^2 shift)", modified_schwefel_exp, (-600.0, 600.0), (10,)),
]

REGISTRY = {s.id: s for s in _SPECS}

# Tuned control parameters per function: (DE Cr, DE F, IS k1, IS k2), for p = 40.
SUGGESTED_SETTINGS = {
    "f1": (0.2, 0.3, 25, 2),
    "f2": (0.7, 0.6, 25, 4),
    "f3": (0.0, 0.5, 39, 1),
    "f4": (0.1, 0.3, 30, 2),
    "f5": (0.1, 0.4, 35, 12),
    "f6": (0.5, 0.3, 15, 2),
    "f7": (0.2, 0.2, 30, 2),
    "f8": (0.0, 0.4, 25, 2),
    "f9": (0.3, 0.2, 15, 2),
    "f10": (0.01, 0.9, 35, 2),
    "f11": (0.01, 0.9, 35, 2),
    "f12": (0.1, 1.2, 35, 2),
}


def spec(fid):
    try:
        return REGISTRY[str(fid).lower()]
    except KeyError:
        raise KeyError(f"unknown benchmark {fid!r}; expected one of {', '.join(REGISTRY)}") from None


def evaluate(fid, x, rng=None):
    s = spec(fid)
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] < 2:
        raise ValueError(f"{s.id} needs at least two variables")
    if s.stochastic:
        return s.func(x, rng=rng)
    return s.func(x)


def problem(fid, d):
    """Wrap benchmark ``fid`` in ``d`` dimensions as an ObjectiveProblem."""
    s = spec(fid)
    if d < 2:
        raise ConfigurationError(f"{s.id} needs d >= 2")
    lo, hi = s.domain
    return ObjectiveProblem.box(
        f"{s.id}-d{d}", s.func, lo, hi, d, stochastic=s.stochastic, info={"benchmark": s.id}
    )
