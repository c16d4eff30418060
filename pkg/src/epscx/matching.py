"""Bipartite matching with Hall-violator certificates, and the structural
maps between optimal separated sets and optimal nets."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

from .metric import FiniteMetricSpace
from .solvers import is_net, is_separated

__all__ = [
    "HallFailure",
    "BipartiteInstance",
    "MatchingResult",
    "KxPartition",
    "max_matching",
    "neighborhood",
    "verify_hall_violator",
    "optimal_separated_bijection",
    "net_injection",
    "kx_partition",
    "dump_counterexample",
]


class HallFailure(RuntimeError):
    """No left-saturating matching exists; carries the Hall violator."""

    def __init__(self, message: str, instance: "BipartiteInstance", result: "MatchingResult"):
        super().__init__(message)
        self.instance = instance
        self.result = result


@dataclass(frozen=True)
class BipartiteInstance:
    left: tuple
    right: tuple
    edges: frozenset

    def __post_init__(self):
        lset, rset = set(self.left), set(self.right)
        for a, b in self.edges:
            if a not in lset or b not in rset:
                raise ValueError(f"edge {(a, b)} not in left × right")

    @classmethod
    def from_pairs(cls, left: Iterable, right: Iterable, edges: Iterable[tuple]) -> "BipartiteInstance":
        return cls(tuple(left), tuple(right), frozenset(edges))

    def adjacency(self) -> dict:
        rank = {b: i for i, b in enumerate(self.right)}
        adj = {a: [] for a in self.left}
        for a, b in self.edges:
            adj[a].append(b)
        for a in adj:
            adj[a].sort(key=rank.__getitem__)
        return adj


@dataclass(frozen=True)
class MatchingResult:
    pairs: dict
    unmatched_left: tuple
    hall_violator: tuple | None

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def saturating(self) -> bool:
        return not self.unmatched_left


def neighborhood(instance: BipartiteInstance, subset: Iterable[Hashable]) -> set:
    s = set(subset)
    return {b for a, b in instance.edges if a in s}


def verify_hall_violator(instance: BipartiteInstance, subset: Sequence[Hashable]) -> bool:
    """Independent check that |N(S)| < |S|."""
    return len(neighborhood(instance, subset)) < len(set(subset))


def max_matching(instance: BipartiteInstance) -> MatchingResult:
    """Maximum matching by augmenting paths (Kuhn), lowest index first.

    When some left vertex stays unmatched, the left vertices reachable from
    it by alternating paths form a set S with |N(S)| = |S| − 1.
    """
    adj = instance.adjacency()
    match_r: dict = {}

    def augment(a, seen: set) -> bool:
        for b in adj[a]:
            if b in seen:
                continue
            seen.add(b)
            if b not in match_r or augment(match_r[b], seen):
                match_r[b] = a
                return True
        return False

    for a in instance.left:
        augment(a, set())

    pairs = {a: b for b, a in match_r.items()}
    order = {a: i for i, a in enumerate(instance.left)}
    pairs = dict(sorted(pairs.items(), key=lambda kv: order[kv[0]]))
    unmatched = tuple(a for a in instance.left if a not in pairs)
    violator = None
    if unmatched:
        reach_l = {unmatched[0]}
        stack = [unmatched[0]]
        seen_r: set = set()
        while stack:
            a = stack.pop()
            for b in adj[a]:
                if b not in seen_r:
                    seen_r.add(b)
                    nxt = match_r[b]
                    if nxt not in reach_l:
                        reach_l.add(nxt)
                        stack.append(nxt)
        violator = tuple(sorted(reach_l, key=order.__getitem__))
    return MatchingResult(pairs, unmatched, violator)


def _strict_instance(space: FiniteMetricSpace, eps: float, a: Sequence[int], b: Sequence[int]) -> BipartiteInstance:
    d = space.matrix
    edges = [(x, y) for x in a for y in b if d[x, y] < eps]
    return BipartiteInstance.from_pairs(a, b, edges)


def optimal_separated_bijection(
    space: FiniteMetricSpace, eps: float, a: Iterable[int], b: Iterable[int]
) -> dict[int, int]:
    """Bijection α: A → B with d(x, α(x)) < ε between two optimal ε-separated sets.

    Edges are B_x = O_ε(x) ∩ B. A non-perfect matching means the inputs were
    not both optimal; it is raised as HallFailure with the violator.
    """
    a, b = sorted(set(a)), sorted(set(b))
    if len(a) != len(b):
        raise ValueError(f"separated sets differ in size ({len(a)} vs {len(b)}); not both optimal")
    if not (is_separated(space, eps, a) and is_separated(space, eps, b)):
        raise ValueError("input set is not ε-separated")
    inst = _strict_instance(space, eps, a, b)
    res = max_matching(inst)
    if not res.saturating:
        raise HallFailure("no perfect matching between separated sets", inst, res)
    return res.pairs


def net_injection(space: FiniteMetricSpace, eps: float, a: Iterable[int], b: Iterable[int]) -> dict[int, int]:
    """Injection α: A → B from an optimal ε-net into any ε-net.

    x and y are joined when O_ε(x) ∩ O_ε(y) contains a point of the space,
    so every matched pair has d(x, α(x)) < 2ε.
    """
    a, b = sorted(set(a)), sorted(set(b))
    if not is_net(space, eps, a):
        raise ValueError("A is not an ε-net")
    if not is_net(space, eps, b):
        raise ValueError("B is not an ε-net")
    close = space.matrix < eps
    meet = close[a].astype(np.int64) @ close[:, b].astype(np.int64) > 0
    edges = [(x, b[j]) for i, x in enumerate(a) for j in np.nonzero(meet[i])[0]]
    inst = BipartiteInstance.from_pairs(a, b, edges)
    res = max_matching(inst)
    if not res.saturating:
        raise HallFailure("optimal net admits no injection into the other net", inst, res)
    return res.pairs


@dataclass(frozen=True)
class KxPartition:
    eps: float
    cells: dict[int, tuple[int, ...]]

    def problems(self, space: FiniteMetricSpace, b: Iterable[int]) -> list[str]:
        """Violated properties; empty when the partition is valid."""
        out = []
        seen: set = set()
        for x, cell in self.cells.items():
            if not cell:
                out.append(f"K_{x} is empty")
            if seen & set(cell):
                out.append(f"K_{x} overlaps another cell")
            seen |= set(cell)
            far = [y for y in cell if not space.matrix[x, y] < self.eps]
            if far:
                out.append(f"K_{x} contains points at distance ≥ eps: {far}")
        if seen != set(b):
            out.append("cells do not cover B")
        return out


def kx_partition(space: FiniteMetricSpace, eps: float, a: Iterable[int], b: Iterable[int]) -> KxPartition:
    """Partition an optimal separated set B into cells K_x ⊆ O_ε(x) indexed by an optimal net A.

    Seeds come from an A-saturating matching on the edges d(x, y) < ε; every
    other point of B goes to the lowest-index x of A with d(x, y) < ε.
    A failed seed matching is raised as HallFailure: it would be a
    counterexample to the partition's existence at this radius.
    """
    a, b = sorted(set(a)), sorted(set(b))
    if not is_net(space, eps, a):
        raise ValueError("A is not an ε-net")
    if not is_separated(space, eps, b):
        raise ValueError("B is not ε-separated")
    inst = _strict_instance(space, eps, a, b)
    res = max_matching(inst)
    if not res.saturating:
        raise HallFailure("strict-radius seed matching is not A-saturating", inst, res)
    cells = {x: [y] for x, y in res.pairs.items()}
    seeded = set(res.pairs.values())
    d = space.matrix
    for y in b:
        if y in seeded:
            continue
        owners = [x for x in a if d[x, y] < eps]
        if not owners:
            raise RuntimeError(f"point {y} of B lies outside every ball of the net")
        cells[owners[0]].append(y)
    return KxPartition(float(eps), {x: tuple(sorted(c)) for x, c in cells.items()})


def dump_counterexample(path: str | Path, space: FiniteMetricSpace, eps: float, **sets) -> Path:
    """Write the space, ε and the offending sets to a JSON file for inspection."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "eps": eps,
        "matrix": space.matrix.tolist(),
        **{k: None if v is None else list(v) for k, v in sets.items()},
    }
    path.write_text(json.dumps(payload, indent=1))
    return path
