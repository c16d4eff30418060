"""Seeded generators for test spaces: repaired random metrics, point clouds,
Cantor endpoints."""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .metric import FiniteMetricSpace, _freeze, build_euclidean, build_from_matrix

__all__ = [
    "random_metric",
    "random_cloud",
    "standard_corpus",
    "distance_quantiles",
    "cantor_space",
    "cantor_eps",
    "cantor_interval_count",
]


def random_metric(rng: np.random.Generator, n: int, low: float = 0.1, high: float = 1.0) -> FiniteMetricSpace:
    """Uniform random symmetric weights closed under shortest paths.

    The shortest-path closure repairs every triangle inequality violation
    and keeps distances positive.
    """
    w = rng.uniform(low, high, (n, n))
    w = np.triu(w, 1)
    w = w + w.T
    return build_from_matrix(shortest_path(w, method="FW", directed=False))


def random_cloud(rng: np.random.Generator, n: int, d: int, norm: str = "euclidean") -> FiniteMetricSpace:
    return build_euclidean(rng.uniform(0.0, 1.0, (n, d)), norm=norm)


def distance_quantiles(space: FiniteMetricSpace, qs) -> list[float]:
    """Pairwise distances at the given quantile positions (actual distance values).

    Using realized distances as ε exercises the d = ε boundary on purpose.
    """
    vals = np.unique(space.matrix[np.triu_indices(space.n, 1)])
    if vals.size == 0:
        return [1.0 for _ in qs]
    return [float(vals[min(int(q * vals.size), vals.size - 1)]) for q in qs]


def standard_corpus(seed: int, count: int, n_max: int, n_min: int = 2):
    """Alternating repaired random metrics and planar clouds, n in [n_min, n_max]."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        yield random_metric(rng, n) if i % 2 == 0 else random_cloud(rng, n, 2)


def cantor_space(level: int) -> FiniteMetricSpace:
    """Left endpoints of the 2^level intervals of the middle-thirds construction.

    Coordinates are integers m / 3^level with m = Σ 2 c_i 3^(level−1−i);
    distances are rounded once from exact integer differences, so
    comparisons with `cantor_eps` never flip.
    """
    scale = 3**level
    digits = np.array(np.meshgrid(*[[0, 2]] * level, indexing="ij")).reshape(level, -1).T
    ints = (digits * (3 ** np.arange(level - 1, -1, -1))).sum(axis=1)
    ints = np.sort(ints)
    d = np.abs(ints[:, None] - ints[None, :]) / scale
    space = _freeze(d, None, {"cantor_level": level, "integer_coordinates": ints.tolist()})
    return space


def cantor_eps(level: int, k: int) -> float:
    """3^(−k), rounded the same way as `cantor_space` distances."""
    return 3 ** (level - k) / 3**level


def cantor_interval_count(space: FiniteMetricSpace, k: int) -> int:
    """Number of level-k intervals containing a point of the space."""
    level = space.metadata["cantor_level"]
    ints = np.asarray(space.metadata["integer_coordinates"])
    return len(np.unique(ints // 3 ** (level - k)))
