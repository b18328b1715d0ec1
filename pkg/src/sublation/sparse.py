"""Compressed-sensing test problems and the l_q regularized objective.

The objective is

    f13(x) = 1/2 * ||y - A x||_2 ** p_fid + lam * (sum_j |x_j| ** q) ** (1/q)

with ``p_fid = 1`` and ``q = 0.9`` by default.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .problem import ConfigurationError, ObjectiveProblem


class Scenario(enum.Enum):
    GAUSSIAN = "gaussian"
    BINARY = "binary"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


# Defaults used for reproduction runs: (lambda, search box, noise variance
# for the noisy experiment).
SCENARIO_DEFAULTS = {
    Scenario.GAUSSIAN: {"lam": 0.1, "bounds": (-2.0, 2.0), "noise_variance": 1.6e-3},
    Scenario.BINARY: {"lam": 1.0, "bounds": (0.0, 1.0), "noise_variance": 0.04},
}


@dataclass(frozen=True)
class SparseInstance:
    A: np.ndarray
    y: np.ndarray
    x_true: np.ndarray
    k: int
    noise_variance: float
    scenario: Scenario
    seed: int

    @property
    def d(self):
        return self.A.shape[1]

    @property
    def m(self):
        return self.A.shape[0]


@dataclass(frozen=True)
class SparseObjectiveParams:
    lam: float = 0.1
    q: float = 0.9
    p_fid: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ConfigurationError("lambda must be positive")
        if not 0 < self.q <= 1:
            raise ConfigurationError("q must lie in (0, 1]")

    @classmethod
    def for_scenario(cls, scenario, **overrides):
        kw = {"lam": SCENARIO_DEFAULTS[Scenario.parse(scenario)]["lam"]}
        kw.update(overrides)
        return cls(**kw)


def generate_instance(scenario, d=256, m=128, k=20, noise_variance=0.0, seed=0):
    scenario = Scenario.parse(scenario)
    if not 0 < k < m < d:
        raise ConfigurationError(f"need 0 < k < m < d, got k={k}, m={m}, d={d}")
    if noise_variance < 0:
        raise ConfigurationError("noise variance must be non-negative")
    rng = np.random.default_rng(seed)
    if scenario is Scenario.GAUSSIAN:
        A = rng.standard_normal((m, d))
        A /= np.linalg.norm(A, axis=0)
    else:
        A = rng.integers(0, 2, size=(m, d)).astype(float)
    support = np.sort(rng.choice(d, size=k, replace=False))
    x_true = np.zeros(d)
    if scenario is Scenario.GAUSSIAN:
        x_true[support] = rng.standard_normal(k)
    else:
        x_true[support] = 1.0
    y = A @ x_true
    if noise_variance > 0:
        y = y + np.sqrt(noise_variance) * rng.standard_normal(m)
    return SparseInstance(A, y, x_true, k, float(noise_variance), scenario, seed)


def lq_norm(x, q):
    x = np.asarray(x, dtype=float)
    return np.sum(np.abs(x) ** q, axis=-1) ** (1.0 / q)


def f13(x, instance, params=SparseObjectiveParams()):
    """Objective value for one d-vector or an (n, d) batch."""
    x = np.asarray(x, dtype=float)
    residual = instance.y - x @ instance.A.T
    fidelity = 0.5 * np.linalg.norm(residual, axis=-1) ** params.p_fid
    return fidelity + params.lam * lq_norm(x, params.q)


def distortion(x_hat, x_true):
    """Per-trial (MSE, NMSE) as plain and normalized Euclidean errors."""
    x_hat = np.asarray(x_hat, dtype=float)
    x_true = np.asarray(x_true, dtype=float)
    if x_hat.shape != x_true.shape:
        raise ValueError(f"length mismatch: {x_hat.shape} vs {x_true.shape}")
    ref = np.linalg.norm(x_true)
    if ref == 0:
        raise ValueError("NMSE is undefined for an all-zero ground truth")
    err = float(np.linalg.norm(x_true - x_hat))
    return err, err / ref


def problem(instance, params=None, bounds=None):
    """ObjectiveProblem minimizing f13 over a box (scenario default if omitted)."""
    if params is None:
        params = SparseObjectiveParams.for_scenario(instance.scenario)
    lo, hi = bounds if bounds is not None else SCENARIO_DEFAULTS[instance.scenario]["bounds"]
    return ObjectiveProblem.box(
        f"f13-{instance.scenario.value}-d{instance.d}",
        lambda x: f13(x, instance, params),
        lo,
        hi,
        instance.d,
        info={"instance": instance, "params": params},
    )


def save_instance(instance, path):
    """Write an instance as flat text: a header, then A row-major, y and x_true.

    Header line: ``d m k scenario seed noise_variance``. Every number is
    written with 17 significant digits so the file round-trips exactly.
    """
    fmt = "%.17g"
    with open(path, "w") as fh:
        fh.write(
            f"{instance.d} {instance.m} {instance.k} {instance.scenario.value} "
            f"{instance.seed} {instance.noise_variance!r}\n"
        )
        for row in instance.A:
            fh.write(" ".join(fmt % v for v in row) + "\n")
        fh.write(" ".join(fmt % v for v in instance.y) + "\n")
        fh.write(" ".join(fmt % v for v in instance.x_true) + "\n")


def load_instance(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    d, m, k, scenario, seed, noise = lines[0].split()
    d, m, k = int(d), int(m), int(k)
    if len(lines) != m + 3:
        raise ValueError(f"{path}: expected {m + 3} lines, found {len(lines)}")
    A = np.array([[float(v) for v in line.split()] for line in lines[1 : m + 1]])
    y = np.array([float(v) for v in lines[m + 1].split()])
    x_true = np.array([float(v) for v in lines[m + 2].split()])
    if A.shape != (m, d) or y.shape != (m,) or x_true.shape != (d,):
        raise ValueError(f"{path}: array shapes do not match header")
    return SparseInstance(A, y, x_true, k, float(noise), Scenario.parse(scenario), int(seed))
