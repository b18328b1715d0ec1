"""Antenna selection for a multiuser massive-MIMO downlink.

The goal is to choose ``k`` of ``d`` base-station antennas so that the
minimum singular value (MSV) of the selected m x k channel is as large as
possible. Optimizers search a continuous box [0, 1]^d; a position is mapped
to a selection by setting its k largest coordinates to one.
"""

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .metrics import MetricKind
from .problem import ConfigurationError, ObjectiveProblem

# Users closer than this to the base station are redrawn; keeps path loss finite.
MIN_DISTANCE = 35.0


@dataclass(frozen=True)
class ChannelParams:
    radius: float = 500.0
    path_loss_exponent: float = 3.8
    shadowing_db: float = 8.0
    min_distance: float = MIN_DISTANCE
    normalize: bool = True


@dataclass(frozen=True)
class ChannelInstance:
    """One channel realization.

    ``H_hat`` is the small-scale fading known to the selector and ``H`` the
    actual one (they coincide for ``beta == 1``); both already include the
    antenna correlation. ``D`` holds the diagonal large-scale amplitudes.
    ``G_hat`` and ``G`` are the effective channels D @ H, row-normalized
    when ``params.normalize`` is set.
    """

    H_hat: np.ndarray
    H: np.ndarray
    D: np.ndarray
    alpha: float
    beta: float
    seed: int
    params: ChannelParams
    user_distances: np.ndarray

    @property
    def m(self):
        return self.H.shape[0]

    @property
    def d(self):
        return self.H.shape[1]

    def _effective(self, small):
        G = self.D[:, None] * small
        if self.params.normalize:
            G = G / np.linalg.norm(G, axis=1, keepdims=True)
        return G

    @property
    def G_hat(self):
        return self._effective(self.H_hat)

    @property
    def G(self):
        return self._effective(self.H)


def correlation_matrix(d, alpha):
    i = np.arange(d)
    return alpha ** np.abs(i[:, None] - i[None, :])


def _sqrtm_psd(R):
    w, V = np.linalg.eigh(R)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def hexagon_points(n, radius, rng, min_distance=0.0):
    """Uniform points in a hexagon of circumradius ``radius`` centred at 0."""
    pts = np.empty((0, 2))
    h = math.sqrt(3.0) / 2.0 * radius
    while len(pts) < n:
        cand = rng.uniform([-radius, -h], [radius, h], size=(2 * n, 2))
        x, y = np.abs(cand[:, 0]), np.abs(cand[:, 1])
        inside = (y <= h) & (math.sqrt(3.0) * x + y <= math.sqrt(3.0) * radius)
        inside &= np.hypot(cand[:, 0], cand[:, 1]) >= min_distance
        pts = np.vstack([pts, cand[inside]])
    return pts[:n]


def generate_channel(d, m, seed, alpha=0.0, beta=1.0, params=ChannelParams()):
    """Draw a reproducible channel.

    Shadowing is lognormal with an 8 dB standard deviation in the dB
    domain. With imperfect CSI the actual channel is
    ``beta * H_hat + sqrt(1 - beta**2) * H_err``.
    """
    if m > d:
        raise ConfigurationError(f"need m <= d, got m={m}, d={d}")
    if not abs(alpha) < 1:
        raise ConfigurationError(f"correlation coefficient must satisfy |alpha| < 1, got {alpha}")
    if not 0.0 <= beta <= 1.0:
        raise ConfigurationError(f"CSI accuracy beta must lie in [0, 1], got {beta}")
    rng = np.random.default_rng(seed)

    users = hexagon_points(m, params.radius, rng, params.min_distance)
    dist = np.hypot(users[:, 0], users[:, 1])
    shadow = 10.0 ** (params.shadowing_db * rng.standard_normal(m) / 10.0)
    D = np.sqrt(shadow * dist ** (-params.path_loss_exponent))

    H_hat = _complex_gaussian(rng, (m, d))
    H_err = _complex_gaussian(rng, (m, d))
    if alpha != 0.0:
        root = _sqrtm_psd(correlation_matrix(d, alpha))
        H_hat = H_hat @ root
        H_err = H_err @ root
    H = H_hat if beta == 1.0 else beta * H_hat + math.sqrt(1.0 - beta**2) * H_err
    return ChannelInstance(H_hat, H, D, float(alpha), float(beta), seed, params, dist)


def map_topk(x, k):
    """Binary vector(s) with ones at the k largest entries (lower index wins ties)."""
    x = np.asarray(x, dtype=float)
    if not 0 < k <= x.shape[-1]:
        raise ConfigurationError(f"k must lie in [1, {x.shape[-1]}], got {k}")
    order = np.argsort(-x, axis=-1, kind="stable")[..., :k]
    out = np.zeros_like(x)
    np.put_along_axis(out, order, 1.0, axis=-1)
    return out


def msv(G, columns):
    """Minimum singular values of G[:, columns] for a (n, k) batch of index sets."""
    columns = np.atleast_2d(columns)
    sub = np.transpose(G[:, columns], (1, 0, 2))
    return np.linalg.svd(sub, compute_uv=False)[:, -1]


def _selected_columns(x_binary):
    xb = np.atleast_2d(np.asarray(x_binary) > 0.5)
    counts = xb.sum(axis=1)
    if np.any(counts != counts[0]):
        raise ValueError("every selection in a batch must have the same cardinality")
    return np.argsort(~xb, axis=1, kind="stable")[:, : counts[0]]


def f14(x_binary, instance, actual=False):
    """MSV of the selected channel; batches of equal cardinality allowed.

    Uses the estimate ``G_hat`` unless ``actual`` is set.
    """
    G = instance.G if actual else instance.G_hat
    values = msv(G, _selected_columns(x_binary))
    return values if np.ndim(x_binary) > 1 else float(values[0])


def problem(instance, k):
    """Maximize the MSV as minimization of its negation, with top-k mapping."""
    if not 1 <= k <= instance.d:
        raise ConfigurationError(f"k must lie in [1, {instance.d}], got {k}")
    G = instance.G_hat

    def cost(xb):
        return -msv(G, _selected_columns(xb))

    return ObjectiveProblem.box(
        f"f14-d{instance.d}-m{instance.m}-k{k}",
        cost,
        0.0,
        1.0,
        instance.d,
        mapping=lambda x: map_topk(x, k),
        metric=MetricKind.ZERO_NORM,
        info={"instance": instance, "k": k},
    )


class OracleResult(NamedTuple):
    selection: np.ndarray
    msv: float
    evaluations: int


def exhaustive_msv(instance, k, limit=10**6, chunk=20000):
    """Best k-subset by full enumeration of C(d, k) subsets.

    Ties keep the lexicographically first subset.
    """
    d = instance.d
    total = math.comb(d, k)
    if total > limit:
        raise ValueError(f"exhaustive search over C({d}, {k}) = {total} subsets exceeds limit {limit}")
    G = instance.G_hat
    best_val, best_cols, seen = -np.inf, None, 0
    combos = itertools.combinations(range(d), k)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.intp)
        if len(block) == 0:
            break
        values = msv(G, block)
        seen += len(block)
        j = int(np.argmax(values))
        if values[j] > best_val:
            best_val, best_cols = float(values[j]), block[j]
    selection = np.zeros(d)
    selection[best_cols] = 1.0
    return OracleResult(selection, best_val, seen)
