"""Finite metric spaces, open balls, point maps and Bowen distances."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "MetricError",
    "FiniteMetricSpace",
    "Ball",
    "PointMap",
    "AxiomReport",
    "build_from_matrix",
    "build_euclidean",
    "verify_metric_axioms",
    "is_ultrametric",
    "ball",
    "check_isometry",
    "bowen_space",
    "disjoint_union",
]

SYMMETRY_TOL = 1e-12


class MetricError(ValueError):
    """Input does not describe a valid finite metric space."""


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """n points with a dense symmetric distance matrix.

    The matrix is stored read-only; build instances with `build_from_matrix`
    or the other constructors rather than directly.
    """

    matrix: np.ndarray
    labels: tuple[str, ...] | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def dist(self, i: int, j: int) -> float:
        return float(self.matrix[i, j])

    @property
    def diameter(self) -> float:
        return float(self.matrix.max()) if self.n else 0.0

    def min_positive_distance(self) -> float:
        if self.n < 2:
            return float("inf")
        iu = np.triu_indices(self.n, 1)
        return float(self.matrix[iu].min())

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        """Induced subspace on `indices`; point k of the result is indices[k]."""
        idx = np.asarray(list(indices), dtype=int)
        m = self.matrix[np.ix_(idx, idx)]
        labels = None if self.labels is None else tuple(self.labels[i] for i in idx)
        return _freeze(m, labels, {"parent_indices": tuple(int(i) for i in idx)})

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n}, diameter={self.diameter:g})"


def _freeze(m: np.ndarray, labels, metadata) -> FiniteMetricSpace:
    m = np.array(m, dtype=float)
    m.setflags(write=False)
    return FiniteMetricSpace(m, labels, dict(metadata))


@dataclass(frozen=True)
class Ball:
    center: int
    radius: float
    members: tuple[int, ...]

    def __contains__(self, y: int) -> bool:
        return y in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class PointMap:
    """A self-map of the points of a finite space, stored as an index table.

    `isometry_radius` is the claimed ε₀ for which the map is an ε₀-isometry;
    it is supplied by whoever builds the map and checked by `check_isometry`.
    """

    forward: tuple[int, ...]
    isometry_radius: float | None = None

    def __call__(self, i: int) -> int:
        return self.forward[i]

    def __len__(self) -> int:
        return len(self.forward)

    @property
    def is_bijection(self) -> bool:
        return sorted(self.forward) == list(range(len(self.forward)))

    def inverse(self) -> "PointMap":
        if not self.is_bijection:
            raise ValueError("map is not a bijection")
        inv = [0] * len(self.forward)
        for i, j in enumerate(self.forward):
            inv[j] = i
        return PointMap(tuple(inv), self.isometry_radius)

    def compose(self, other: "PointMap") -> "PointMap":
        """self ∘ other."""
        return PointMap(tuple(self.forward[j] for j in other.forward))

    def image(self, points) -> tuple[int, ...]:
        return tuple(sorted(self.forward[i] for i in points))

    def preimage(self, points) -> tuple[int, ...]:
        target = set(points)
        return tuple(i for i, j in enumerate(self.forward) if j in target)

    @classmethod
    def identity(cls, n: int, isometry_radius: float | None = None) -> "PointMap":
        return cls(tuple(range(n)), isometry_radius)


@dataclass(frozen=True)
class AxiomReport:
    violated_triples: tuple[tuple[int, int, int], ...] = ()
    zero_distance_pairs: tuple[tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violated_triples and not self.zero_distance_pairs


def build_from_matrix(matrix) -> FiniteMetricSpace:
    """Wrap an n×n distance matrix.

    Only the upper triangle is kept (mirrored), so tiny asymmetries up to
    1e-12 are absorbed. Axioms beyond symmetry, zero diagonal and
    nonnegativity are not checked here; use `verify_metric_axioms`.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MetricError(f"distance matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MetricError("distance matrix has non-finite entries")
    if np.any(m < 0):
        raise MetricError("distance matrix has negative entries")
    if np.any(np.diag(m) != 0):
        raise MetricError("distance matrix has a nonzero diagonal")
    if m.size and np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise MetricError("distance matrix is not symmetric")
    upper = np.triu(m, 1)
    return _freeze(upper + upper.T, None, {})


def build_euclidean(points, norm: str = "euclidean") -> FiniteMetricSpace:
    """Pairwise distances of a point cloud under the Euclidean or max norm."""
    try:
        pts = np.asarray(points, dtype=float)
    except ValueError as exc:
        raise MetricError("points have mismatched dimensions") from exc
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
        raise MetricError("need a non-empty list of coordinate vectors")
    diff = pts[:, None, :] - pts[None, :, :]
    if norm == "euclidean":
        m = np.sqrt(np.sum(diff * diff, axis=-1))
    elif norm == "max":
        m = np.max(np.abs(diff), axis=-1)
    else:
        raise MetricError(f"unknown norm {norm!r}")
    space = build_from_matrix(m)
    space.metadata.update(dimension=pts.shape[1], norm=norm)
    return space


def verify_metric_axioms(space: FiniteMetricSpace, tol: float = 1e-12) -> AxiomReport:
    """List every triple (i, j, k) with d(i,k) > d(i,j) + d(j,k).

    `tol` is relative to the diameter and only absorbs rounding in spaces
    built from floating-point coordinates.
    """
    d = space.matrix
    n = space.n
    slack = tol * max(space.diameter, 1.0)
    triples = []
    for j in range(n):
        # bad[i, k]: path through j is shorter than the direct distance
        bad = d > d[:, j][:, None] + d[j, :][None, :] + slack
        for i, k in zip(*np.nonzero(bad)):
            if i < k:
                triples.append((int(i), j, int(k)))
    iu = np.triu_indices(n, 1)
    zero = [(int(i), int(k)) for i, k in zip(*iu) if d[i, k] <= 0]
    return AxiomReport(tuple(sorted(triples)), tuple(zero))


def is_ultrametric(space: FiniteMetricSpace, tol: float = 0.0) -> bool:
    d = space.matrix
    for j in range(space.n):
        if np.any(d > np.maximum(d[:, j][:, None], d[j, :][None, :]) + tol):
            return False
    return True


def ball(space: FiniteMetricSpace, x: int, eps: float) -> Ball:
    """Open ball {y : d(x, y) < eps}."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    members = tuple(int(i) for i in np.nonzero(space.matrix[x] < eps)[0])
    return Ball(x, float(eps), members)


def check_isometry(space: FiniteMetricSpace, tau: PointMap, radius: float | None = None) -> list[tuple[int, int]]:
    """Pairs (x, y) with d(x,y) ≤ radius whose distance tau does not preserve.

    Defaults to tau.isometry_radius. Raises if tau is not a bijection of the
    space's points.
    """
    if len(tau) != space.n or not tau.is_bijection:
        raise ValueError("point map is not a bijection of the space")
    r = tau.isometry_radius if radius is None else radius
    if r is None:
        raise ValueError("no isometry radius to check against")
    d = space.matrix
    f = np.asarray(tau.forward)
    moved = d[np.ix_(f, f)]
    bad = (d <= r) & (moved != d)
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(bad)) if i < j]


def bowen_space(space: FiniteMetricSpace, f: PointMap, n: int) -> FiniteMetricSpace:
    """Space with d_n(x, y) = max over 0 ≤ i < n of d(f^i x, f^i y)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if len(f) != space.n:
        raise ValueError("map is not defined on every point of the space")
    fwd = np.asarray(f.forward)
    d = space.matrix
    out = d.copy()
    it = np.arange(space.n)
    for _ in range(1, n):
        it = fwd[it]
        out = np.maximum(out, d[np.ix_(it, it)])
    result = _freeze(out, space.labels, space.metadata)
    result.metadata["bowen_steps"] = n
    return result


def disjoint_union(a: FiniteMetricSpace, b: FiniteMetricSpace, cross_distance: float) -> FiniteMetricSpace:
    """Union of two spaces with every cross pair at `cross_distance`.

    The union is a metric iff cross_distance ≥ half of each part's diameter;
    it is an ultrametric when both parts are and cross_distance ≥ both
    diameters. Points of `b` are renumbered after those of `a`.
    """
    if not cross_distance > 0:
        raise MetricError("cross distance must be positive")
    if 2 * cross_distance < max(a.diameter, b.diameter):
        raise MetricError("cross distance too small: union violates the triangle inequality")
    n = a.n + b.n
    m = np.full((n, n), float(cross_distance))
    m[: a.n, : a.n] = a.matrix
    m[a.n :, a.n :] = b.matrix
    labels = None
    if a.labels is not None or b.labels is not None:
        labels = tuple(a.label(i) for i in range(a.n)) + tuple(b.label(i) for i in range(b.n))
    return _freeze(m, labels, {"parts": ((0, a.n), (a.n, n)), "cross_distance": float(cross_distance)})
