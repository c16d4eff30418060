"""Empirical complexity functionals, their finite-ε theorems, measure
estimates along ε-schedules, and the log-log dimension estimate.

The limit along an ultrafilter has no computable counterpart; schedules
carry subsequence tags instead and reports give per-tag tail averages.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .metric import FiniteMetricSpace, PointMap
from .solvers import (
    NET,
    SEPARATED,
    ComplexityProfile,
    ComplexityResult,
    is_net,
    is_separated,
    local_packing_bound,
    max_separated_exact,
    min_net_exact,
)

__all__ = [
    "TestFunction",
    "EmpiricalMeasure",
    "EpsilonSchedule",
    "ClusterReport",
    "Gap",
    "Comparison",
    "DimensionEstimate",
    "indicator",
    "functional_I",
    "functional_I_dual",
    "modulus_of_continuity",
    "independence_gap",
    "estimate_measure",
    "mu_nu_comparison",
    "invariance_gap",
    "dimension_estimate",
]

# absorbs rounding when two separately computed means are compared to a bound
TOL = 1e-12


@dataclass(frozen=True)
class TestFunction:
    values: np.ndarray
    name: str = "phi"

    __test__ = False  # not a pytest class

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("test function has non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    def compose(self, tau: PointMap) -> "TestFunction":
        """φ ∘ τ."""
        return TestFunction(self.values[np.asarray(tau.forward)], f"{self.name}∘tau")

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], float], name: str = "phi") -> "TestFunction":
        return cls(np.array([fn(i) for i in range(n)], dtype=float), name)


def indicator(n: int, members: Iterable[int], name: str = "indicator") -> TestFunction:
    v = np.zeros(n)
    v[list(members)] = 1.0
    return TestFunction(v, name)


def _values(phi, n: int) -> np.ndarray:
    v = phi.values if isinstance(phi, TestFunction) else np.asarray(phi, dtype=float)
    if v.shape != (n,):
        raise ValueError(f"test function has {v.shape} values for a space of {n} points")
    return v


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniform weights on a witness set, optionally summarised per cell."""

    weights: np.ndarray
    cell_masses: dict[str, float] | None = None

    @classmethod
    def from_witness(cls, n: int, witness: Sequence[int], cells: Mapping[str, Iterable[int]] | None = None):
        w = np.zeros(n)
        w[list(witness)] = 1.0 / len(witness)
        masses = None
        if cells is not None:
            masses = {name: float(w[list(members)].sum()) for name, members in cells.items()}
        return cls(w, masses)

    def integrate(self, phi) -> float:
        return float(self.weights @ _values(phi, len(self.weights)))


# --- functionals ---------------------------------------------------------------


def functional_I(space: FiniteMetricSpace, eps: float, phi, witness: Sequence[int] | None = None, cap=None) -> float:
    """Mean of φ over an optimal ε-separated set (computed if not given)."""
    v = _values(phi, space.n)
    if witness is None:
        witness = max_separated_exact(space, eps, cap=cap).witness
    elif not is_separated(space, eps, witness):
        raise ValueError("witness is not ε-separated")
    return float(np.mean(v[list(witness)]))


def functional_I_dual(space: FiniteMetricSpace, eps: float, phi, witness: Sequence[int] | None = None, cap=None) -> float:
    """Mean of φ over an optimal ε-net (computed if not given)."""
    v = _values(phi, space.n)
    if witness is None:
        witness = min_net_exact(space, eps, cap=cap).witness
    elif not is_net(space, eps, witness):
        raise ValueError("witness is not an ε-net")
    return float(np.mean(v[list(witness)]))


def modulus_of_continuity(space: FiniteMetricSpace, phi, eps: float) -> float:
    """max |φ(x) − φ(y)| over pairs with d(x, y) < ε; 0 if there are none."""
    v = _values(phi, space.n)
    close = space.matrix < eps
    if not close.any():
        return 0.0
    return float(np.max(np.abs(v[:, None] - v[None, :])[close]))


class Gap(NamedTuple):
    gap: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.gap <= self.bound + TOL


def independence_gap(space: FiniteMetricSpace, eps: float, phi, mode: str = SEPARATED, cap=None) -> Gap:
    """|I_ε(φ) over two optimal witnesses| from forward and reverse tie-breaking.

    The bound is r_φ(ε) for separated sets and r_φ(2ε) for nets.
    """
    v = _values(phi, space.n)
    reverse = list(range(space.n))[::-1]
    if mode == SEPARATED:
        a = max_separated_exact(space, eps, cap=cap).witness
        b = max_separated_exact(space, eps, order=reverse, cap=cap).witness
        bound = modulus_of_continuity(space, v, eps)
    elif mode == NET:
        a = min_net_exact(space, eps, cap=cap).witness
        b = min_net_exact(space, eps, order=reverse, cap=cap).witness
        bound = modulus_of_continuity(space, v, 2 * eps)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Gap(abs(float(np.mean(v[list(a)]) - np.mean(v[list(b)]))), bound)


def invariance_gap(space: FiniteMetricSpace, eps: float, tau: PointMap, phi, cap=None) -> Gap:
    """|I_ε(φ ∘ τ) − I_ε(φ)| on one optimal separated set A, bounded by r_φ(ε).

    Valid for ε up to the isometry radius of τ, where τ⁻¹(A) is again an
    optimal ε-separated set (checked here).
    """
    if tau.isometry_radius is None or eps > tau.isometry_radius:
        raise ValueError(f"eps={eps} exceeds the isometry radius {tau.isometry_radius}")
    v = _values(phi, space.n)
    a = max_separated_exact(space, eps, cap=cap).witness
    pulled = tau.preimage(a)
    if len(pulled) != len(a) or not is_separated(space, eps, pulled):
        raise RuntimeError("preimage of an optimal separated set is not optimal separated")
    moved = v[np.asarray(tau.forward)]
    gap = abs(float(np.mean(moved[list(a)]) - np.mean(v[list(a)])))
    return Gap(gap, modulus_of_continuity(space, v, eps))


class Comparison(NamedTuple):
    I: float
    I_dual: float
    k: int
    delta: float
    verdict: bool


def mu_nu_comparison(space: FiniteMetricSpace, eps: float, phi, cap=None) -> Comparison:
    """Both functionals, k, δ = r_φ(ε), and whether Ĩ/k − δ ≤ I ≤ kĨ + δ."""
    v = _values(phi, space.n)
    if np.any(v < 0):
        raise ValueError("the comparison needs a nonnegative test function")
    i_sep = functional_I(space, eps, v, cap=cap)
    i_net = functional_I_dual(space, eps, v, cap=cap)
    k = local_packing_bound(space, eps, cap=cap)
    delta = modulus_of_continuity(space, v, eps)
    ok = i_net / k - delta - TOL <= i_sep <= k * i_net + delta + TOL
    return Comparison(i_sep, i_net, k, delta, bool(ok))


# --- schedules and cluster reports ------------------------------------------------


@dataclass(frozen=True)
class EpsilonSchedule:
    values: tuple
    tags: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        vals = tuple(self.values)
        if any(not v > 0 for v in vals):
            raise ValueError("schedule values must be positive")
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise ValueError("schedule must be strictly decreasing")
        for name, idx in self.tags.items():
            if any(not 0 <= i < len(vals) for i in idx):
                raise ValueError(f"tag {name!r} refers to missing schedule entries")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "tags", {k: tuple(v) for k, v in self.tags.items()})

    @classmethod
    def tagged(cls, **subsequences: Sequence) -> "EpsilonSchedule":
        """Merge named subsequences into one decreasing schedule."""
        values = sorted({v for seq in subsequences.values() for v in seq}, reverse=True)
        pos = {v: i for i, v in enumerate(values)}
        return cls(tuple(values), {k: tuple(pos[v] for v in seq) for k, seq in subsequences.items()})


@dataclass(frozen=True)
class ClusterReport:
    schedule: EpsilonSchedule
    mode: str
    cells: tuple[str, ...]
    counts: np.ndarray  # witness points per (cell, schedule entry)
    sizes: tuple[int, ...]  # |witness| per schedule entry
    tag_limits: dict[str, tuple[float, ...]]

    @property
    def masses(self) -> np.ndarray:
        return self.counts / np.asarray(self.sizes)[None, :]

    def mass(self, cell: str) -> np.ndarray:
        return self.masses[self.cells.index(cell)]

    def tag_sequence(self, cell: str, tag: str) -> np.ndarray:
        return self.mass(cell)[list(self.schedule.tags[tag])]

    @property
    def spread(self) -> float:
        """Largest disagreement between tag limits over all cells."""
        if not self.tag_limits:
            return 0.0
        lim = np.asarray(list(self.tag_limits.values()))
        return float(np.max(lim.max(axis=0) - lim.min(axis=0)))

    def to_dict(self) -> dict:
        return {
            "schedule": [float(v) for v in self.schedule.values],
            "schedule_exact": [str(v) for v in self.schedule.values],
            "tags": {k: list(v) for k, v in self.schedule.tags.items()},
            "mode": self.mode,
            "cells": list(self.cells),
            "witness_sizes": list(self.sizes),
            "counts": self.counts.tolist(),
            "masses": self.masses.tolist(),
            "tag_limits": {k: list(v) for k, v in self.tag_limits.items()},
            "spread": self.spread,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def estimate_measure(
    space,
    schedule: EpsilonSchedule,
    cells: Mapping[str, Iterable[int]],
    mode: str = SEPARATED,
    solver: Callable[[object], ComplexityResult] | None = None,
) -> ClusterReport:
    """Cell masses of the optimal-witness measure at each schedule entry.

    `space` is a FiniteMetricSpace solved exactly, or anything with an `n`
    attribute when a `solver(eps) -> ComplexityResult` is supplied. Tag
    limits are means of the last min(3, len(tag)) masses of each tag.
    """
    names = tuple(cells)
    members = [np.asarray(list(cells[c]), dtype=int) for c in names]
    n = space.n
    owner = np.full(n, -1)
    for k, m in enumerate(members):
        if np.any(owner[m] >= 0):
            raise ValueError("cells overlap")
        owner[m] = k
    if np.any(owner < 0):
        raise ValueError("cells do not cover the space")
    if solver is None:
        exact = max_separated_exact if mode == SEPARATED else min_net_exact
        solver = lambda eps: exact(space, float(eps))  # noqa: E731
    counts = np.zeros((len(names), len(schedule.values)), dtype=np.int64)
    sizes = []
    for j, eps in enumerate(schedule.values):
        res = solver(eps)
        if not res.exact:
            raise RuntimeError(f"no exact witness at eps={eps}")
        sizes.append(res.size)
        counts[:, j] = np.bincount(owner[list(res.witness)], minlength=len(names))
    masses = counts / np.asarray(sizes)[None, :]
    limits = {}
    for tag, idx in schedule.tags.items():
        tail = list(idx)[-min(3, len(idx)):]
        limits[tag] = tuple(float(masses[k, tail].mean()) for k in range(len(names)))
    return ClusterReport(schedule, mode, names, counts, tuple(sizes), limits)


# --- dimension --------------------------------------------------------------------


class DimensionEstimate(NamedTuple):
    slope: float
    per_point: tuple[float, ...]


def dimension_estimate(profile) -> DimensionEstimate:
    """Slopes ln C_ε / (−ln ε) per entry and a least-squares slope of ln C on −ln ε.

    Accepts a ComplexityProfile or an iterable of (eps, C) pairs.
    """
    if isinstance(profile, ComplexityProfile):
        if not all(e.separated.exact for e in profile):
            raise ValueError("dimension estimate needs exact C_ε entries")
        pairs = [(e.eps, e.separated.size) for e in profile]
    else:
        pairs = [(float(e), int(c)) for e, c in profile]
    if len(pairs) < 2:
        raise ValueError("need at least two entries for the fit")
    if any(not 0 < e < 1 or c < 1 for e, c in pairs):
        raise ValueError("entries need 0 < eps < 1 and C ≥ 1")
    x = np.array([-math.log(e) for e, _ in pairs])
    y = np.array([math.log(c) for _, c in pairs])
    per_point = tuple(float(b / a) for a, b in zip(x, y))
    slope = float(np.polyfit(x, y, 1)[0])
    return DimensionEstimate(slope, per_point)
