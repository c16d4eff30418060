"""Exact and greedy ε-complexity (packing) and dual ε-complexity (covering).

C_ε is the size of a maximum ε-separated set, i.e. a maximum independent
set of the conflict graph (i ~ j iff d(i, j) < ε). R_ε is the size of a
minimum ε-net, i.e. a minimum dominating set of the same graph. Both exact
solvers split the conflict graph into connected components: cliques are
solved on sight (one point), other components by bitmask branch and bound,
subject to the exact-solver cap.

Among optimal sets the returned witness is the lexicographically smallest
with respect to a priority order (natural index order unless given).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .metric import FiniteMetricSpace, ball

__all__ = [
    "DEFAULT_CAP",
    "SEPARATED",
    "NET",
    "EXACT",
    "GREEDY_LOWER",
    "GREEDY_UPPER",
    "CapExceeded",
    "InvariantViolation",
    "ComplexityResult",
    "ProfileEntry",
    "ComplexityProfile",
    "SubadditivityReport",
    "resolve_cap",
    "is_separated",
    "is_net",
    "max_separated_exact",
    "max_separated_greedy",
    "min_net_exact",
    "min_net_greedy",
    "complexity_profile",
    "local_packing_bound",
    "b_eps",
    "check_subadditivity",
]

DEFAULT_CAP = 64

SEPARATED = "separated"
NET = "net"
EXACT = "exact"
GREEDY_LOWER = "greedy-lower-bound"
GREEDY_UPPER = "greedy-upper-bound"


class CapExceeded(RuntimeError):
    """A conflict-graph component is too large for the exact solver."""


class InvariantViolation(RuntimeError):
    """A result broke one of the inequalities that must hold between C and R."""


def resolve_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get("EPSCX_CAP")
    return int(env) if env else DEFAULT_CAP


@dataclass(frozen=True)
class ComplexityResult:
    eps: float
    kind: str
    size: int
    witness: tuple[int, ...]
    certificate: str

    @property
    def exact(self) -> bool:
        return self.certificate == EXACT

    def to_dict(self, with_witness: bool = True) -> dict:
        d = {"eps": self.eps, "kind": self.kind, "size": self.size, "certificate": self.certificate}
        if with_witness:
            d["witness"] = list(self.witness)
        return d


# --- predicates ---------------------------------------------------------------


def is_separated(space: FiniteMetricSpace, eps: float, points: Iterable[int]) -> bool:
    pts = np.asarray(sorted(set(points)), dtype=int)
    if len(pts) < 2:
        return True
    sub = space.matrix[np.ix_(pts, pts)]
    return bool(np.all(sub[np.triu_indices(len(pts), 1)] >= eps))


def is_net(space: FiniteMetricSpace, eps: float, points: Iterable[int], targets: Iterable[int] | None = None) -> bool:
    pts = sorted(set(points))
    tg = np.arange(space.n) if targets is None else np.asarray(sorted(set(targets)), dtype=int)
    if len(tg) == 0:
        return True
    if not pts:
        return False
    return bool(np.all((space.matrix[np.ix_(pts, tg)] < eps).any(axis=0)))


# --- bitmask helpers ----------------------------------------------------------


def _rank_of(order: Sequence[int] | None, n: int) -> np.ndarray:
    if order is None:
        return np.arange(n)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the point indices")
    rank = np.empty(n, dtype=int)
    rank[np.asarray(order, dtype=int)] = np.arange(n)
    return rank


def _masks(adj: np.ndarray) -> list[int]:
    """Row i of a boolean matrix as an int bitmask (bit j = column j)."""
    packed = np.packbits(adj, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _components(adj: np.ndarray) -> list[np.ndarray]:
    k, labels = connected_components(adj, directed=False)
    return [np.nonzero(labels == c)[0] for c in range(k)]


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError("eps must be positive")


# --- maximum independent set --------------------------------------------------


def _clique_cover_size(cand: int, nbr: list[int]) -> int:
    """Greedy partition of `cand` into cliques; bounds the independence number."""
    count = 0
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        clique = low
        pool = cand & nbr[v]
        while pool:
            u_bit = pool & -pool
            clique |= u_bit
            pool &= nbr[u_bit.bit_length() - 1]
        cand &= ~clique
        count += 1
    return count


def _mis_lexmin(nbr: list[int]) -> list[int]:
    """Lexicographically first maximum independent set (bit order = priority).

    Depth-first, lowest vertex first, include-branch before exclude-branch,
    replacing the incumbent only on strict improvement: the first maximum
    set met in this order is the lexicographically smallest.
    """
    m = len(nbr)
    best: list[int] = []
    best_size = 0

    def search(cand: int, chosen: list[int]) -> None:
        nonlocal best, best_size
        if not cand:
            if len(chosen) > best_size:
                best, best_size = list(chosen), len(chosen)
            return
        if len(chosen) + _clique_cover_size(cand, nbr) <= best_size:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        chosen.append(v)
        search(cand & ~low & ~nbr[v], chosen)
        chosen.pop()
        if cand & nbr[v]:
            # v isolated in cand: every maximum set of this branch contains v
            search(cand & ~low, chosen)

    search((1 << m) - 1, [])
    return best


def max_separated_exact(
    space: FiniteMetricSpace,
    eps: float,
    order: Sequence[int] | None = None,
    cap: int | None = None,
) -> ComplexityResult:
    """Maximum ε-separated set; witness lexicographically smallest w.r.t. `order`."""
    _check_eps(eps)
    cap = resolve_cap(cap)
    rank = _rank_of(order, space.n)
    conflict = space.matrix < eps
    np.fill_diagonal(conflict, False)
    witness: list[int] = []
    for comp in _components(conflict):
        comp = comp[np.argsort(rank[comp], kind="stable")]
        sub = conflict[np.ix_(comp, comp)]
        if sub.sum() == len(comp) * (len(comp) - 1):
            witness.append(int(comp[0]))
            continue
        if len(comp) > cap:
            raise CapExceeded(f"conflict component of size {len(comp)} exceeds exact cap {cap}")
        witness.extend(int(comp[i]) for i in _mis_lexmin(_masks(sub)))
    witness.sort()
    return ComplexityResult(float(eps), SEPARATED, len(witness), tuple(witness), EXACT)


def max_separated_greedy(space: FiniteMetricSpace, eps: float, order: Sequence[int] | None = None) -> ComplexityResult:
    """Maximal ε-separated set built by scanning points in `order`."""
    _check_eps(eps)
    order = range(space.n) if order is None else order
    d = space.matrix
    chosen: list[int] = []
    for i in order:
        if all(d[i, j] >= eps for j in chosen):
            chosen.append(int(i))
    return ComplexityResult(float(eps), SEPARATED, len(chosen), tuple(sorted(chosen)), GREEDY_LOWER)


# --- minimum cover -------------------------------------------------------------


def _cover_lower_bound(uncovered: int, covers: list[int], coverers: list[list[int]], allowed: int) -> int:
    if not uncovered:
        return 0
    pool = _bits(allowed)
    widest = max((bin(covers[c] & uncovered).count("1") for c in pool), default=0)
    if widest == 0:
        return math.inf
    bound = -(-bin(uncovered).count("1") // widest)
    # targets with pairwise disjoint coverer sets each need their own center
    used = 0
    packed = 0
    for t in _bits(uncovered):
        mask = 0
        for c in coverers[t]:
            if allowed >> c & 1:
                mask |= 1 << c
        if mask & used == 0:
            used |= mask
            packed += 1
    return max(bound, packed)


def _min_cover(
    n_targets: int,
    covers: list[int],
    allowed: int,
    limit: int,
    chosen_covered: int = 0,
) -> list[int] | None:
    """Smallest set of allowed centers covering all targets, if of size ≤ limit.

    covers[c] is the bitmask of targets center c covers.
    """
    full = (1 << n_targets) - 1
    coverers: list[list[int]] = [[] for _ in range(n_targets)]
    for c, mask in enumerate(covers):
        for t in _bits(mask):
            coverers[t].append(c)
    best: list[int] | None = None
    best_size = limit + 1

    def search(uncovered: int, allowed: int, chosen: list[int]) -> None:
        nonlocal best, best_size
        if not uncovered:
            if len(chosen) < best_size:
                best, best_size = list(chosen), len(chosen)
            return
        if len(chosen) + 1 >= best_size:
            return
        if len(chosen) + _cover_lower_bound(uncovered, covers, coverers, allowed) >= best_size:
            return
        # branch on the uncovered target with the fewest remaining coverers
        target, options = -1, None
        for t in _bits(uncovered):
            opts = [c for c in coverers[t] if allowed >> c & 1]
            if options is None or len(opts) < len(options):
                target, options = t, opts
                if len(opts) <= 1:
                    break
        if not options:
            return
        options.sort(key=lambda c: -bin(covers[c] & uncovered).count("1"))
        for c in options:
            chosen.append(c)
            search(uncovered & ~covers[c], allowed & ~(1 << c), chosen)
            chosen.pop()
            allowed &= ~(1 << c)

    search(full & ~chosen_covered, allowed, [])
    return best


def _cover_lexmin(n_targets: int, covers: list[int]) -> list[int]:
    """Lexicographically smallest minimum cover (center index order = priority)."""
    m = len(covers)
    every = (1 << m) - 1
    opt = _min_cover(n_targets, covers, every, m)
    if opt is None:
        raise ValueError("targets cannot be covered")
    k = len(opt)
    full = (1 << n_targets) - 1
    chosen: list[int] = []
    covered = 0
    for c in range(m):
        if len(chosen) == k:
            break
        trial = covered | covers[c]
        later = every & ~((1 << (c + 1)) - 1)
        remaining = k - len(chosen) - 1
        if trial == full or (
            remaining > 0 and _min_cover(n_targets, covers, later, remaining, trial) is not None
        ):
            chosen.append(c)
            covered = trial
    if covered != full or len(chosen) != k:
        raise AssertionError("lexicographic cover construction lost optimality")
    return chosen


def min_net_exact(
    space: FiniteMetricSpace,
    eps: float,
    order: Sequence[int] | None = None,
    cap: int | None = None,
    targets: Iterable[int] | None = None,
    centers: Iterable[int] | None = None,
) -> ComplexityResult:
    """Minimum ε-net: fewest centers whose open ε-balls cover every target.

    By default targets and centers are all points (R_ε of the space).
    Restricting them gives covering numbers of subsets, with centers either
    inside the subset or anywhere in the ambient space.
    """
    _check_eps(eps)
    cap = resolve_cap(cap)
    rank = _rank_of(order, space.n)
    all_pts = np.arange(space.n)
    tg = all_pts if targets is None else np.asarray(sorted(set(targets)), dtype=int)
    ct = all_pts if centers is None else np.asarray(sorted(set(centers)), dtype=int)
    if len(tg) == 0:
        return ComplexityResult(float(eps), NET, 0, (), EXACT)
    nodes = np.union1d(tg, ct)
    is_t = np.isin(nodes, tg)
    is_c = np.isin(nodes, ct)
    close = space.matrix[np.ix_(nodes, nodes)] < eps
    link = close & ((is_c[:, None] & is_t[None, :]) | (is_t[:, None] & is_c[None, :]))
    witness: list[int] = []
    for comp in _components(link):
        comp_t = comp[is_t[comp]]
        if len(comp_t) == 0:
            continue
        comp_c = comp[is_c[comp]]
        if len(comp_c) == 0:
            raise ValueError(f"target {nodes[comp_t[0]]} is not covered by any allowed center")
        comp_c = comp_c[np.argsort(rank[nodes[comp_c]], kind="stable")]
        cov = close[np.ix_(comp_c, comp_t)]
        full_rows = np.nonzero(cov.all(axis=1))[0]
        if len(full_rows):
            witness.append(int(nodes[comp_c[full_rows[0]]]))
            continue
        if len(comp_t) > cap or len(comp_c) > cap:
            raise CapExceeded(f"cover component of size {max(len(comp_t), len(comp_c))} exceeds exact cap {cap}")
        witness.extend(int(nodes[comp_c[i]]) for i in _cover_lexmin(len(comp_t), _masks(cov)))
    witness.sort()
    return ComplexityResult(float(eps), NET, len(witness), tuple(witness), EXACT)


def min_net_greedy(space: FiniteMetricSpace, eps: float) -> ComplexityResult:
    """Greedy cover: repeatedly take the ball covering most uncovered points."""
    _check_eps(eps)
    close = space.matrix < eps
    uncovered = np.ones(space.n, dtype=bool)
    chosen: list[int] = []
    while uncovered.any():
        gain = (close & uncovered[None, :]).sum(axis=1)
        c = int(np.argmax(gain))
        chosen.append(c)
        uncovered &= ~close[c]
    return ComplexityResult(float(eps), NET, len(chosen), tuple(sorted(chosen)), GREEDY_UPPER)


# --- profiles and derived quantities --------------------------------------------


@dataclass(frozen=True)
class ProfileEntry:
    eps: float
    separated: ComplexityResult
    net: ComplexityResult


@dataclass(frozen=True)
class ComplexityProfile:
    entries: tuple[ProfileEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def eps(self) -> list[float]:
        return [e.eps for e in self.entries]

    @property
    def C(self) -> list[int]:
        return [e.separated.size for e in self.entries]

    @property
    def R(self) -> list[int]:
        return [e.net.size for e in self.entries]

    @property
    def exact(self) -> bool:
        return all(e.separated.exact and e.net.exact for e in self.entries)


def complexity_profile(
    space: FiniteMetricSpace,
    eps_list: Iterable[float],
    cap: int | None = None,
    allow_greedy: bool = True,
) -> ComplexityProfile:
    """C_ε and R_ε over a grid, sorted by decreasing ε.

    Entries fall back to greedy brackets when the exact solver is capped
    (unless allow_greedy is False, in which case CapExceeded propagates).
    The monotonicity and C/R inequalities are checked on the exact entries.
    """
    grid = sorted({float(e) for e in eps_list}, reverse=True)
    entries = []
    for eps in grid:
        try:
            sep = max_separated_exact(space, eps, cap=cap)
        except CapExceeded:
            if not allow_greedy:
                raise
            sep = max_separated_greedy(space, eps)
        try:
            net = min_net_exact(space, eps, cap=cap)
        except CapExceeded:
            if not allow_greedy:
                raise
            net = min_net_greedy(space, eps)
        entries.append(ProfileEntry(eps, sep, net))
    profile = ComplexityProfile(tuple(entries))
    _check_profile(profile)
    return profile


def _check_profile(profile: ComplexityProfile) -> None:
    exact = [e for e in profile.entries if e.separated.exact and e.net.exact]
    for e in exact:
        if e.net.size > e.separated.size:
            raise InvariantViolation(f"R > C at eps={e.eps}")
    for coarse, fine in zip(exact, exact[1:]):
        if fine.separated.size < coarse.separated.size or fine.net.size < coarse.net.size:
            raise InvariantViolation(f"complexity decreased between eps={coarse.eps} and eps={fine.eps}")
    by_eps = {e.eps: e for e in exact}
    for e in exact:
        half = by_eps.get(e.eps / 2)
        if half is not None and half.net.size < e.separated.size:
            raise InvariantViolation(f"R_(eps/2) < C_eps at eps={e.eps}")


def _ball_subspaces(space: FiniteMetricSpace, eps: float):
    seen = set()
    for x in range(space.n):
        members = ball(space, x, eps).members
        if members not in seen:
            seen.add(members)
            yield members


def local_packing_bound(space: FiniteMetricSpace, eps: float, cap: int | None = None) -> int:
    """k = max over x of C_ε of the induced subspace on the ball O_ε(x)."""
    return max(
        max_separated_exact(space.subspace(m), eps, cap=cap).size for m in _ball_subspaces(space, eps)
    )


def b_eps(space: FiniteMetricSpace, eps: float, cap: int | None = None) -> int:
    """max over x of R_{ε/2} of the induced subspace on O_ε(x)."""
    return max(
        min_net_exact(space.subspace(m), eps / 2, cap=cap).size for m in _ball_subspaces(space, eps)
    )


@dataclass(frozen=True)
class SubadditivityReport:
    eps: float
    C: tuple[int, int, int]
    R: tuple[int, int, int]

    @property
    def ok(self) -> bool:
        return self.C[0] <= self.C[1] + self.C[2] and self.R[0] <= self.R[1] + self.R[2]


def check_subadditivity(
    space: FiniteMetricSpace, part_a: Iterable[int], part_b: Iterable[int], eps: float, cap: int | None = None
) -> SubadditivityReport:
    """(union, A, B) values of C_ε and R_ε on induced subspaces."""
    a = sorted(set(part_a))
    b = sorted(set(part_b))
    u = sorted(set(a) | set(b))

    def both(points):
        if not points:
            return 0, 0
        sub = space.subspace(points)
        return max_separated_exact(sub, eps, cap=cap).size, min_net_exact(sub, eps, cap=cap).size

    cu, ru = both(u)
    ca, ra = both(a)
    cb, rb = both(b)
    return SubadditivityReport(float(eps), (cu, ca, cb), (ru, ra, rb))
