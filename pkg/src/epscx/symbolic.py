"""Truncated one-sided shifts: full shifts, topological Markov chains, their
metrics and cylinders, Perron data, local isometries, and the two-part
ultrametric shift whose complexity measure depends on the ε-schedule."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .metric import FiniteMetricSpace, PointMap, _freeze, disjoint_union
from .solvers import EXACT, NET, SEPARATED, ComplexityResult

__all__ = [
    "NotPrimitiveError",
    "DistanceSpec",
    "SymbolicSpace",
    "PerronData",
    "Example3Config",
    "Example3Model",
    "as_fraction",
    "enumerate_words",
    "is_primitive",
    "realize_space",
    "perron",
    "cylinder_measure",
    "refinement_residual",
    "prefix_classes",
    "cylinder_solve",
    "example3_space",
    "closed_form_C",
    "group_translation",
    "admissible_permutation_isometry",
]

Word = tuple[int, ...]


class NotPrimitiveError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Exact rational for a schedule value; floats snap to denominators ≤ 10^6."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**6)


@dataclass(frozen=True)
class DistanceSpec:
    """Either d_q(x, y) = Σ |x_i − y_i| q^(−i), or d = s_n at the first index of disagreement."""

    variant: str
    q: float | None = None
    scales: tuple = ()

    def __post_init__(self):
        if self.variant == "dq":
            if self.q is None or not self.q > 1:
                raise ValueError("d_q needs q > 1")
        elif self.variant == "scales":
            s = self.scales
            if not s or any(v <= 0 for v in s) or any(b > a for a, b in zip(s, s[1:])):
                raise ValueError("scale sequence must be positive and nonincreasing")
        else:
            raise ValueError(f"unknown distance variant {self.variant!r}")

    @classmethod
    def dq(cls, q: float) -> "DistanceSpec":
        return cls("dq", q=float(q))

    @classmethod
    def scale_sequence(cls, scales: Sequence) -> "DistanceSpec":
        return cls("scales", scales=tuple(scales))

    @classmethod
    def geometric(cls, ratio, depth: int) -> "DistanceSpec":
        """s_k = ratio^k for k < depth."""
        return cls("scales", scales=tuple(ratio**k for k in range(depth)))


@dataclass(frozen=True)
class SymbolicSpace:
    p: int
    depth: int
    distance: DistanceSpec
    matrix: tuple[tuple[int, ...], ...] | None = None
    alphabet: tuple = ()

    def __post_init__(self):
        if self.p < 1 or self.depth < 1:
            raise ValueError("need p ≥ 1 and depth ≥ 1")
        if self.matrix is not None:
            m = np.asarray(self.matrix)
            if m.shape != (self.p, self.p) or not np.isin(m, (0, 1)).all():
                raise ValueError("transition matrix must be p×p with 0/1 entries")
        if self.alphabet and len(self.alphabet) != self.p:
            raise ValueError("alphabet must have p symbols")
        if self.distance.variant == "scales" and len(self.distance.scales) < self.depth:
            raise ValueError("scale sequence shorter than depth")

    @property
    def symbols(self) -> tuple:
        return self.alphabet or tuple(range(self.p))

    def words(self) -> list[Word]:
        return enumerate_words(self.p, self.matrix, self.depth)

    def labels(self) -> tuple[str, ...]:
        sym = self.symbols
        return tuple("".join(str(sym[c]) for c in w) for w in self.words())


def enumerate_words(p: int, M=None, L: int = 1) -> list[Word]:
    """Admissible words of length L in lexicographic order."""
    if L < 1:
        raise ValueError("L must be at least 1")
    if M is None:
        return list(itertools.product(range(p), repeat=L))
    m = np.asarray(M)
    dead = [i for i in range(p) if not m[i].any()]
    words: list[Word] = [(i,) for i in range(p)]
    for _ in range(L - 1):
        words = [w + (j,) for w in words for j in range(p) if m[w[-1], j]]
    if dead and any(w[-1] in dead or any(c in dead for c in w[:-1]) for w in words):
        warnings.warn(f"transition matrix has dead symbols {dead}", stacklevel=2)
    return words


def realize_space(sym: SymbolicSpace) -> FiniteMetricSpace:
    """One point per admissible depth-L word.

    For d_q the distance is the sum over the first L symbols; the neglected
    tail (p − 1) q^(1−L) / (q − 1) is stored as metadata["tail_bound"].
    """
    words = np.asarray(sym.words(), dtype=np.int64)
    n, L = words.shape
    if sym.distance.variant == "dq":
        q = sym.distance.q
        d = np.zeros((n, n))
        for i in range(L):
            d += np.abs(words[:, i, None] - words[None, :, i]) * q**-i
        meta = {"tail_bound": (sym.p - 1) * q ** (1 - L) / (q - 1)}
    else:
        scales = [float(s) for s in sym.distance.scales]
        d = np.zeros((n, n))
        open_ = np.ones((n, n), dtype=bool)
        for i in range(L):
            differ = open_ & (words[:, i, None] != words[None, :, i])
            d[differ] = scales[i]
            open_ &= ~differ
        meta = {"tail_bound": 0.0}
    meta.update(words=[tuple(int(c) for c in w) for w in words], depth=L, p=sym.p)
    return _freeze(d, sym.labels(), meta)


# --- Perron data -----------------------------------------------------------------


def is_primitive(M) -> bool:
    """Some power M^k, k ≤ (p − 1)² + 1, is strictly positive."""
    m = (np.asarray(M) > 0).astype(np.int64)
    p = m.shape[0]
    power = m.copy()
    for _ in range((p - 1) ** 2 + 1):
        if power.all():
            return True
        power = ((power @ m) > 0).astype(np.int64)
    return False


@dataclass(frozen=True)
class PerronData:
    lam: float
    e: np.ndarray
    iterations: int

    def residual(self, M) -> float:
        m = np.asarray(M, dtype=float)
        return float(np.max(np.abs(m @ self.e - self.lam * self.e)) / self.lam)


def perron(M, tol: float = 1e-14, max_iter: int = 10**6) -> PerronData:
    """Perron eigenpair of a primitive 0/1 matrix by power iteration from the ones vector."""
    m = np.asarray(M, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not is_primitive(m):
        raise NotPrimitiveError("transition matrix is not primitive")
    x = np.ones(m.shape[0]) / m.shape[0]
    for it in range(1, max_iter + 1):
        y = m @ x
        y /= y.sum()
        if np.max(np.abs(y - x)) < tol:
            x = y
            break
        x = y
    else:
        raise RuntimeError("power iteration did not converge")
    lam = float((m @ x).sum() / x.sum())
    return PerronData(lam, x, it)


def _admissible(word: Sequence[int], M) -> bool:
    if M is None:
        return True
    m = np.asarray(M)
    return all(m[a, b] for a, b in zip(word, word[1:]))


def cylinder_measure(pd: PerronData, word: Sequence[int], M=None, normalization: str = "mass-one") -> float:
    """Perron mass λ^(−n) e_i of the cylinder [word], i its last symbol.

    "eigenvector" returns λ^(−n) e_i as is; "mass-one" rescales by λ / Σ e_i (over
    admissible starting symbols) so that length-1 cylinders carry total mass 1.
    """
    if len(word) < 1:
        raise ValueError("cylinder word must be non-empty")
    if not _admissible(word, M):
        raise ValueError(f"word {tuple(word)} is not admissible")
    n = len(word)
    base = pd.lam**-n * pd.e[word[-1]]
    if normalization == "eigenvector":
        return float(base)
    if normalization != "mass-one":
        raise ValueError(f"unknown normalization {normalization!r}")
    starts = range(len(pd.e))
    if M is not None:
        starts = [i for i in starts if np.asarray(M)[i].any()]
    return float(base * pd.lam / sum(pd.e[i] for i in starts))


def refinement_residual(pd: PerronData, M, n: int) -> float:
    """max_i |v_i(n) − Σ_{j: M(i,j)=1} v_j(n+1)| for v(n) = λ^(−n) e."""
    if n < 1:
        raise ValueError("n must be at least 1")
    m = np.asarray(M, dtype=float)
    vn = pd.lam**-n * pd.e
    vn1 = pd.lam ** -(n + 1) * pd.e
    return float(np.max(np.abs(vn - m @ vn1)))


# --- cylinder structure of scale-sequence spaces ---------------------------------


def prefix_classes(words: Sequence[Word], scales: Sequence, eps) -> list[list[int]]:
    """Equivalence classes of d < ε for d = s_(first difference).

    With s nonincreasing, d(x, y) < ε iff x and y share their first k symbols,
    where k counts the leading scales ≥ ε. Classes are listed in order of
    their first member.
    """
    eps = as_fraction(eps)
    k = 0
    while k < len(scales) and as_fraction(scales[k]) >= eps:
        k += 1
    groups: dict = {}
    for idx, w in enumerate(words):
        groups.setdefault(tuple(w[:k]), []).append(idx)
    return sorted(groups.values(), key=lambda g: g[0])


def cylinder_solve(classes: Sequence[Sequence[int]], eps, kind: str = SEPARATED) -> ComplexityResult:
    """Exact C_ε or R_ε on an ultrametric space given its ε-ball classes.

    Balls of an ultrametric partition the space, so one point per class is
    both a maximum separated set and a minimum net; the lowest index of
    each class gives the lexicographically smallest witness.
    """
    witness = tuple(sorted(min(c) for c in classes))
    return ComplexityResult(float(eps), kind, len(witness), witness, EXACT)


# --- the two-part ultrametric example -------------------------------------------


@dataclass(frozen=True)
class Example3Config:
    """Scale sequences a (for Ω_{0,1}) and b (for Ω_{2,3}) as exact unit fractions.

    a is 1/(2n) on indices (n−1)(2n−1) … n(2n+1) − 1; b_0 = 1 and b is
    1/(2n+1) on indices n(2n−1) … (n+1)(2n+1) − 1. Runs are generated one
    block beyond n_max so every C_ε with ε ≥ 1/(2 n_max + 1) is resolved.
    """

    n_max: int = 2
    a: tuple[Fraction, ...] = field(init=False)
    b: tuple[Fraction, ...] = field(init=False)

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        runs = self.n_max + 1
        a: list[Fraction] = []
        for n in range(1, runs + 1):
            a.extend([Fraction(1, 2 * n)] * (n * (2 * n + 1) - (n - 1) * (2 * n - 1)))
        b: list[Fraction] = [Fraction(1)]
        for n in range(1, runs + 1):
            b.extend([Fraction(1, 2 * n + 1)] * ((n + 1) * (2 * n + 1) - n * (2 * n - 1)))
        object.__setattr__(self, "a", tuple(a))
        object.__setattr__(self, "b", tuple(b))

    @property
    def E(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, 2 * n) for n in range(1, self.n_max + 1))

    @property
    def E_prime(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, 2 * n + 1) for n in range(1, self.n_max + 1))

    def sequence(self, part: str) -> tuple[Fraction, ...]:
        if part == "01":
            return self.a
        if part == "23":
            return self.b
        raise ValueError("part must be '01' or '23'")

    def resolution(self, part: str, eps) -> int:
        """r with s_(r−1) ≥ ε > s_r (r = 0 when ε > s_0)."""
        s = self.sequence(part)
        eps = as_fraction(eps)
        if not eps > 0:
            raise ValueError("eps must be positive")
        r = 0
        while r < len(s) and s[r] >= eps:
            r += 1
        if r == len(s):
            raise ValueError(f"eps={eps} is below the resolution of the generated sequence")
        return r

    def part_space(self, part: str, depth: int) -> SymbolicSpace:
        s = self.sequence(part)
        if depth > len(s):
            raise ValueError("depth exceeds generated sequence length")
        return SymbolicSpace(
            2, depth, DistanceSpec.scale_sequence(s[:depth]), alphabet=(0, 1) if part == "01" else (2, 3)
        )


def closed_form_C(cfg: Example3Config, part: str, eps, depth: int | None = None) -> int:
    """2^r for a_(r−1) ≥ ε > a_r (or 2^m with b); capped at 2^depth for a truncated part."""
    r = cfg.resolution(part, eps)
    if depth is not None:
        r = min(r, depth)
    return 2**r


MAX_DENSE_POINTS = 4096


def example3_space(cfg: Example3Config, depth: int) -> FiniteMetricSpace:
    """Dense realization: both parts truncated at `depth`, cross distance 1."""
    if 2 * 2**depth > MAX_DENSE_POINTS:
        raise MemoryError(f"depth {depth} needs {2 * 2 ** depth} points (limit {MAX_DENSE_POINTS})")
    a = realize_space(cfg.part_space("01", depth))
    b = realize_space(cfg.part_space("23", depth))
    space = disjoint_union(a, b, 1.0)
    space.metadata.update(example3_n_max=cfg.n_max, depth=depth)
    return space


class Example3Model:
    """Cylinder-level model of the two-part space, exact at any depth.

    Each part may be truncated at its own depth; by default the depth is the
    resolution needed at the finest schedule value, so truncation never
    caps C_ε. Points are numbered Ω_{0,1} first. Solvers work class by class
    (the metric is an ultrametric with cross distance 1) instead of through
    a distance matrix.
    """

    def __init__(self, cfg: Example3Config, depth01: int | None = None, depth23: int | None = None):
        self.cfg = cfg
        finest = min(cfg.E + cfg.E_prime)
        self.depth01 = depth01 or max(1, cfg.resolution("01", finest))
        self.depth23 = depth23 or max(1, cfg.resolution("23", finest))
        self.words01 = enumerate_words(2, None, self.depth01)
        self.words23 = enumerate_words(2, None, self.depth23)

    @property
    def n(self) -> int:
        return len(self.words01) + len(self.words23)

    @property
    def cells(self) -> dict[str, range]:
        n01 = len(self.words01)
        return {"Omega01": range(0, n01), "Omega23": range(n01, self.n)}

    def classes(self, eps) -> list[list[int]]:
        if as_fraction(eps) > 1:
            return [list(range(self.n))]
        off = len(self.words01)
        c01 = prefix_classes(self.words01, self.cfg.a, eps)
        c23 = prefix_classes(self.words23, self.cfg.b, eps)
        return c01 + [[i + off for i in c] for c in c23]

    def solve(self, eps, kind: str = SEPARATED) -> ComplexityResult:
        return cylinder_solve(self.classes(eps), eps, kind)

    def solve_net(self, eps) -> ComplexityResult:
        return self.solve(eps, NET)


# --- local isometries -------------------------------------------------------------


def _word_index(words: Sequence[Word]) -> dict[Word, int]:
    return {tuple(w): i for i, w in enumerate(words)}


def group_translation(sym: SymbolicSpace, g: Sequence[int]) -> PointMap:
    """x ↦ x ⊕ g (coordinatewise addition mod p) on a full shift.

    Only offered for scale-sequence metrics, where it preserves the first
    disagreement index and is therefore a global isometry.
    """
    if sym.matrix is not None:
        raise ValueError("translation needs a full shift (no transition matrix)")
    if sym.distance.variant != "scales":
        raise ValueError("translation is an isometry only for scale-sequence metrics")
    g = tuple(g)
    if len(g) != sym.depth or any(not 0 <= c < sym.p for c in g):
        raise ValueError("g must be a depth-L word over the alphabet")
    words = sym.words()
    index = _word_index(words)
    fwd = tuple(index[tuple((x + y) % sym.p for x, y in zip(w, g))] for w in words)
    return PointMap(fwd, float(sym.distance.scales[0]))


def admissible_permutation_isometry(
    sym: SymbolicSpace, n: int, alpha: Mapping[Sequence[int], Sequence[int]]
) -> PointMap:
    """g_α: rewrite the first n symbols by a last-symbol-preserving permutation α of W_n.

    Words missing from `alpha` are fixed. The isometry radius returned is the
    largest distance of the realized space below the smallest distance
    between points whose n-prefixes differ; at or below it only pairs with
    equal n-prefixes occur, and those are moved rigidly.
    """
    if not 1 <= n <= sym.depth:
        raise ValueError("need 1 ≤ n ≤ depth")
    wn = set(enumerate_words(sym.p, sym.matrix, n))
    perm = {tuple(k): tuple(v) for k, v in alpha.items()}
    for k, v in perm.items():
        if k not in wn or v not in wn:
            raise ValueError(f"{k} ↦ {v}: both words must be admissible of length {n}")
        if k[-1] != v[-1]:
            raise ValueError(f"{k} ↦ {v} does not preserve the last symbol")
    if len(set(perm.values())) != len(perm) or set(perm.values()) != set(perm):
        raise ValueError("alpha is not a permutation of its support")
    words = sym.words()
    index = _word_index(words)
    fwd = []
    for w in words:
        head = perm.get(tuple(w[:n]), tuple(w[:n]))
        image = head + tuple(w[n:])
        if image not in index:
            raise ValueError(f"image {image} is not admissible")
        fwd.append(index[image])
    space = realize_space(sym)
    ids: dict = {}
    prefixes = np.asarray([ids.setdefault(tuple(w[:n]), len(ids)) for w in words])
    differ = prefixes[:, None] != prefixes[None, :]
    d = space.matrix
    floor = float(d[differ].min()) if differ.any() else np.inf
    below = d[(d < floor) & (d > 0)]
    radius = float(below.max()) if below.size else (floor / 2 if np.isfinite(floor) else float(space.diameter))
    return PointMap(tuple(fwd), radius)
