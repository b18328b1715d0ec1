"""Distance functions used when thinkers look for their antithesis."""

import enum

import numpy as np


class MetricKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    # Hamming count on the discrete (mapped) representation.
    ZERO_NORM = "zero_norm"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"l2": "euclidean", "l0": "zero_norm", "hamming": "zero_norm"}
        key = aliases.get(key, key)
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown metric kind {value!r}")


def distance(a, b, kind=MetricKind.EUCLIDEAN, mapping=None):
    """Distance between two positions.

    For ZERO_NORM the optional ``mapping`` converts both continuous
    positions into their discrete representation first; the result is the
    number of coordinates where the mapped vectors differ. EUCLIDEAN always
    works on the raw positions.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    kind = MetricKind.parse(kind)
    if kind is MetricKind.EUCLIDEAN:
        return float(np.sqrt(np.sum((a - b) ** 2)))
    if mapping is not None:
        a = np.asarray(mapping(a), dtype=float)
        b = np.asarray(mapping(b), dtype=float)
    return float(np.count_nonzero(a != b))


def pairwise_distance(x, y, kind=MetricKind.EUCLIDEAN):
    """Row-wise distances between two equally shaped (n, d) arrays.

    Inputs are expected to be already mapped. Returns an (n,) array.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if kind is MetricKind.EUCLIDEAN:
        return np.sqrt(np.sum((x - y) ** 2, axis=-1))
    return np.asarray(np.count_nonzero(x != y, axis=-1), dtype=float)
