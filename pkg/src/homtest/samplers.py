"""Sampling distributions for the tests.

All samplers draw from an :class:`RngStream`, a counter-based Philox stream
that can be split deterministically, so a fixed seed gives the same draws on
every platform and under any worker count.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import kernels
from .engine import EvalMapCtx, kernel_bits, surjective_multiplicity
from .errors import Unsupported
from .fields import prime_factorization
from .groups import Cyclic, Group, VectorSpace
from .homs import CodewordSpace, Projection, matrix_rank
from .settings import check_cap


class RngStream:
    """Deterministic stream backed by numpy's Philox generator.

    ``split(i)`` returns the i-th child stream; children depend only on
    ``(seed, path)`` and not on how many draws the parent has made.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()) -> None:
        self.seed = int(seed) & (2**64 - 1)
        self.path = tuple(path)
        ss = np.random.SeedSequence([self.seed, *self.path])
        self.gen = np.random.Generator(np.random.Philox(ss))

    def split(self, i: int) -> "RngStream":
        return RngStream(self.seed, self.path + (int(i),))

    def integers(self, *args, **kwargs):
        return self.gen.integers(*args, **kwargs)

    def random(self, *args, **kwargs):
        return self.gen.random(*args, **kwargs)

    def permutation(self, n):
        return self.gen.permutation(n)

    def choice(self, *args, **kwargs):
        return self.gen.choice(*args, **kwargs)


def as_stream(rng) -> RngStream:
    if isinstance(rng, RngStream):
        return rng
    return RngStream(int(rng))


# ---------------------------------------------------------------------------
# weighted tuple tables


@dataclass
class WeightedTupleTable:
    """Exact weights for every tuple of ``allowed^k``.

    Tuples are addressed by their mixed-radix position (first coordinate most
    significant).  Excluded tuples simply carry weight zero.
    """

    domain: Group
    allowed: np.ndarray
    k: int
    weights: np.ndarray
    restricted: bool
    cumulative: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        self.cumulative = np.cumsum(self.weights, dtype=np.int64)

    @property
    def total_weight(self) -> int:
        return int(self.cumulative[-1]) if len(self.cumulative) else 0

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.weights))

    def decode(self, pos: np.ndarray) -> np.ndarray:
        """Positions -> (len, k) arrays of domain element indices."""
        L = len(self.allowed)
        pos = np.asarray(pos, dtype=np.int64)
        out = np.empty(pos.shape + (self.k,), dtype=np.int64)
        for j in range(self.k - 1, -1, -1):
            pos, r = np.divmod(pos, L)
            out[..., j] = self.allowed[r]
        return out

    def probability(self, xs) -> Fraction:
        L = len(self.allowed)
        where = {int(a): i for i, a in enumerate(self.allowed)}
        pos = 0
        for x in xs:
            pos = pos * L + where[self.domain.index(x)]
        return Fraction(int(self.weights[pos]), self.total_weight)

    def sample_indices(self, rng: RngStream, size: int) -> np.ndarray:
        r = rng.integers(0, self.total_weight, size=size)
        pos = np.searchsorted(self.cumulative, r, side="right")
        return self.decode(pos)

    def summary(self) -> dict:
        return {
            "support": self.support_size,
            "total_weight": self.total_weight,
            "tuples": int(len(self.weights)),
            "k": self.k,
        }


def _build_table(space: CodewordSpace, k: int, restrict: bool, allowed=None) -> WeightedTupleTable:
    G = space.domain
    if allowed is None:
        allowed = np.arange(G.order, dtype=np.int64)
    check_cap(len(allowed) ** k, f"weighted table over {space.text()} at k={k}")
    w = kernels.tuple_weights(kernel_bits(space), allowed, k).copy()
    if restrict:
        excl = surjective_multiplicity(space, k)
        if excl >= 0:
            w[w == excl] = 0
    return WeightedTupleTable(G, np.asarray(allowed, dtype=np.int64), k, w, restrict)


def build_dker_table(ctx: EvalMapCtx, restrict: bool = True) -> WeightedTupleTable:
    """Tuples weighted by kernel size, excluding surjective evaluation maps."""
    if ctx.space.kind not in ("hom", "lift"):
        raise Unsupported("the kernel distribution needs a hom or lifted hom space")
    return _build_table(ctx.space, ctx.k, restrict)


def build_stab_table(space: CodewordSpace, k: int) -> WeightedTupleTable:
    """Tuples weighted by stabilizer size (Aut) or centralizer count (Inn)."""
    if space.kind not in ("aut", "inn"):
        raise Unsupported("stabilizer weights need an automorphism space")
    return _build_table(space, k, restrict=False)


def sample_dker(table: WeightedTupleTable, rng: RngStream) -> tuple:
    G = table.domain
    return tuple(G.element_at(int(i)) for i in table.sample_indices(rng, 1)[0])


sample_stab = sample_dker


# ---------------------------------------------------------------------------
# two-stage kernel sampler for cyclic domains


def jordan_totient(n: int, k: int) -> int:
    """Number of k-tuples in ``Z_n^k`` whose entries generate ``Z_n``."""
    out = n**k
    for p in prime_factorization(n):
        out = out // p**k * (p**k - 1)
    return out


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


class CyclicKernelSampler:
    """Kernel-weighted tuples of ``Z_n^k`` without a table.

    The kernel size of ``xs`` only depends on ``d = gcd(n, xs)``: it is
    ``|Hom(Z_d, H)|``.  The stratum ``gcd = d`` has ``J_k(n/d)`` tuples, so we
    draw ``d`` with weight ``J_k(n/d) |Hom(Z_d, H)|`` and then a uniform
    generating tuple of ``Z_{n/d}``, scaled by ``d``.
    """

    def __init__(self, n: int, H: Group, k: int, restrict: bool = True) -> None:
        self.n, self.k = n, k
        mods = H.moduli()
        hom_total = math.prod(math.gcd(n, m) for m in mods)
        excl = -1
        if restrict and hom_total % H.order**k == 0:
            excl = hom_total // H.order**k
        self.strata = []
        for d in divisors(n):
            kernel = math.prod(math.gcd(d, m) for m in mods)
            if kernel == excl:
                continue
            self.strata.append((d, jordan_totient(n // d, k) * kernel))
        self.cumulative = np.cumsum([w for _, w in self.strata])
        self.total_weight = int(self.cumulative[-1]) if self.strata else 0

    def sample(self, rng: RngStream) -> tuple[int, ...]:
        r = int(rng.integers(0, self.total_weight))
        d = self.strata[int(np.searchsorted(self.cumulative, r, side="right"))][0]
        m = self.n // d
        if m == 1:
            return (0,) * self.k
        while True:
            y = [int(v) for v in rng.integers(0, m, size=self.k)]
            if math.gcd(m, *y) == 1:
                return tuple(d * v for v in y)


# ---------------------------------------------------------------------------
# vector-space tuples


class VSpaceTables:
    """Index-level arithmetic on ``GF(q)^n``: addition and scalar tables."""

    def __init__(self, q: int, n: int) -> None:
        self.V = VectorSpace(q, n)
        self.q, self.n = q, n
        self.F = self.V.field
        size = q**n
        check_cap(size * size, f"addition table of {self.V.text()}")
        E = np.array(self.V.elements(), dtype=np.int64).reshape(size, n)
        self.E = E
        weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self.add = (self.F.add[E[:, None, :], E[None, :, :]] * weights).sum(axis=-1)
        self.sub = (self.F.sub[E[:, None, :], E[None, :, :]] * weights).sum(axis=-1)
        self.smul = (self.F.mul[np.arange(q)[:, None, None], E[None, :, :]] * weights).sum(axis=-1)

    def combo(self, coeffs, idx) -> int:
        s = 0
        for a, x in zip(coeffs, idx):
            s = int(self.add[s, self.smul[a, x]])
        return s

    def grow_span(self, span: np.ndarray, x: int) -> np.ndarray:
        members = np.flatnonzero(span)
        new = np.zeros(len(span), dtype=bool)
        new[self.add[members[:, None], self.smul[np.arange(self.q)[None, :], x]].ravel()] = True
        return new

    def rank(self, idx) -> int:
        return matrix_rank(self.F, [tuple(int(v) for v in self.E[i]) for i in idx])


def _null_vector(F, rows: list[list[int]]) -> list[int] | None:
    """A nonzero ``a`` with ``sum_i a_i rows_i = 0`` when the relation space is 1-dimensional."""
    k = len(rows)
    n = len(rows[0]) if rows else 0
    # eliminate on the transpose: columns are the vectors
    M = [[rows[i][r] for i in range(k)] for r in range(n)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = int(F.inv[M[r][c]])
        M[r] = [int(F.mul[inv, v]) for v in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [int(F.sub[a, F.mul[f, b]]) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(k) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    a = [0] * k
    a[fc] = 1
    for row, pc in enumerate(pivots):
        a[pc] = int(F.neg[M[row][fc]])
    return a


def classify_relation_level(q: int, n: int, xs) -> int | None:
    """Support size of the unique linear relation among ``xs``.

    None when the tuple is independent or satisfies two or more independent
    relations.
    """
    V = VectorSpace(q, n)
    rows = [tuple(int(v) for v in x) for x in xs]
    for x in rows:
        V.check(x)
    k = len(rows)
    if matrix_rank(V.field, rows) != k - 1:
        return None
    a = _null_vector(V.field, [list(r) for r in rows])
    return sum(1 for v in a if v)


def relation_level_count(q: int, n: int, k: int, j: int) -> int:
    """``C(k,j) (q-1)^(j-1) prod_{t=0}^{k-2} (q^n - q^t)``.

    Pick the support S, a pivot position in S whose vector is a combination
    of the other j-1 with nonzero coefficients, and independent vectors in
    the remaining k-1 positions.
    """
    if not 1 <= j <= k:
        raise ValueError("need 1 <= j <= k")
    indep = math.prod(q**n - q**t for t in range(k - 1))
    return math.comb(k, j) * (q - 1) ** (j - 1) * indep


def full_rank_probability(q: int, n: int, k: int) -> Fraction:
    return Fraction(math.prod(q**n - q**t for t in range(k)), q ** (k * n))


def relation_census(q: int, n: int, k: int) -> Counter:
    """Classify every tuple of ``(GF(q)^n)^k``: keys ``'full'``, ``'low'`` or j."""
    V = VectorSpace(q, n)
    check_cap(V.order**k, f"relation census of {V.text()} at k={k}")
    out: Counter = Counter()
    for xs in product(V.elements(), repeat=k):
        r = matrix_rank(V.field, list(xs))
        if r == k:
            out["full"] += 1
        elif r < k - 1:
            out["low"] += 1
        else:
            out[classify_relation_level(q, n, xs)] += 1
    return out


def _independent_vectors(T: VSpaceTables, count: int, rng: RngStream, stats: dict | None = None) -> list[int]:
    """Ordered independent vectors (as indices), each uniform outside the current span."""
    size = T.q**T.n
    span = np.zeros(size, dtype=bool)
    span[0] = True
    out = []
    for _ in range(count):
        while True:
            x = int(rng.integers(0, size))
            if not span[x]:
                break
            if stats is not None:
                stats["rejected"] = stats.get("rejected", 0) + 1
        out.append(x)
        span = T.grow_span(span, x)
    return out


def _nonzero_coeffs(q: int, m: int, rng: RngStream) -> list[int]:
    return [int(v) for v in rng.integers(1, q, size=m)] if m else []


def sample_Rj(q: int, n: int, k: int, j: int, rng: RngStream, stats: dict | None = None, tables=None) -> tuple:
    """Uniform draw from the level-j distribution on ``(GF(q)^n)^k``."""
    if not 1 <= j <= k:
        raise ValueError("need 1 <= j <= k")
    if k - 1 > n:
        raise Unsupported(f"k-1={k - 1} independent vectors do not fit in dimension {n}")
    T = tables or VSpaceTables(q, n)
    S = sorted(int(v) for v in rng.choice(k, size=j, replace=False))
    pivot = S[int(rng.integers(0, j))]
    others = [i for i in range(k) if i != pivot]
    vecs = _independent_vectors(T, k - 1, rng, stats)
    idx = [0] * k
    for pos, v in zip(others, vecs):
        idx[pos] = v
    rest = [i for i in S if i != pivot]
    coeffs = _nonzero_coeffs(q, len(rest), rng)
    idx[pivot] = T.combo(coeffs, [idx[i] for i in rest])
    xs = tuple(T.V.element_at(i) for i in idx)
    level = classify_relation_level(q, n, xs)
    if level != j:  # pragma: no cover - construction guarantees this
        raise AssertionError(f"constructed tuple has level {level}, wanted {j}")
    return xs


def sample_vspace_test_tuple(q: int, n: int, k: int, rng: RngStream, relaxed: bool = False, tables=None):
    """``(xs, a)`` with ``x_k = sum_i a_i x_i`` and every ``a_i`` nonzero.

    The exact variant draws ``x_1..x_{k-1}`` independent; the relaxed one
    draws them uniformly.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    T = tables or VSpaceTables(q, n)
    if relaxed:
        idx = [int(v) for v in rng.integers(0, q**n, size=k - 1)]
    else:
        if k - 1 > n:
            raise Unsupported(f"k-1={k - 1} independent vectors do not fit in dimension {n}")
        idx = _independent_vectors(T, k - 1, rng)
    a = _nonzero_coeffs(q, k - 1, rng)
    idx.append(T.combo(a, idx))
    return tuple(T.V.element_at(i) for i in idx), tuple(a)


def enumerate_Rk(q: int, n: int, k: int, tables: VSpaceTables | None = None):
    """All ``(prefix indices, coefficients)`` pairs of the exact test distribution.

    Returns ``(X, A)``: ``X`` has shape (T, k) with the last column the
    combination, ``A`` has shape (T, k-1).
    """
    T = tables or VSpaceTables(q, n)
    size = q**n
    d = k - 1
    total = math.prod(size - q**t for t in range(d)) * (q - 1) ** d
    check_cap(total, f"exact test support of V({q},{n}) at k={k}")
    prefixes = np.zeros((1, 0), dtype=np.int64)
    spans = np.zeros((1, size), dtype=bool)
    spans[0, 0] = True
    for _ in range(d):
        rows, cols = np.nonzero(~spans)
        new_pre = np.concatenate([prefixes[rows], cols[:, None]], axis=1)
        old = spans[rows]
        grown = np.zeros_like(old)
        for c in range(q):
            shift = T.sub[np.arange(size)[None, :], T.smul[c, cols][:, None]]
            grown |= np.take_along_axis(old, shift, axis=1)
        prefixes, spans = new_pre, grown
    coeffs = np.array(list(product(range(1, q), repeat=d)), dtype=np.int64).reshape(-1, d)
    P = np.repeat(prefixes, len(coeffs), axis=0)
    A = np.tile(coeffs, (len(prefixes), 1))
    s = np.zeros(len(P), dtype=np.int64)
    for i in range(d):
        s = T.add[s, T.smul[A[:, i], P[:, i]]]
    X = np.concatenate([P, s[:, None]], axis=1)
    return X, A


def relaxed_distribution(q: int, n: int, k: int) -> Counter:
    """Exact law of the relaxed sampler as counts over a common denominator."""
    T = VSpaceTables(q, n)
    size = q**n
    check_cap(size ** (k - 1) * (q - 1) ** (k - 1), "relaxed test distribution")
    out: Counter = Counter()
    for pre in product(range(size), repeat=k - 1):
        for a in product(range(1, q), repeat=k - 1):
            out[pre + (T.combo(a, pre),)] += 1
    return out


def tv_exact_relaxed(q: int, n: int, k: int) -> Fraction:
    """Total variation between the exact and relaxed test distributions, by enumeration."""
    X, _ = enumerate_Rk(q, n, k)
    exact = Counter(map(tuple, X.tolist()))
    relaxed = relaxed_distribution(q, n, k)
    ne, nr = sum(exact.values()), sum(relaxed.values())
    keys = set(exact) | set(relaxed)
    return sum(abs(Fraction(exact.get(t, 0), ne) - Fraction(relaxed.get(t, 0), nr)) for t in keys) / 2


def tv_exact_relaxed_formula(q: int, n: int, k: int) -> Fraction:
    """``1 - prod_{t=0}^{k-2} (1 - q^(t-n))``: the relaxed sampler's mass off the support."""
    return 1 - math.prod((1 - Fraction(q**t, q**n) for t in range(k - 1)), start=Fraction(1))


# ---------------------------------------------------------------------------
# nonzero and lifted samplers


def sample_nonzero(q: int, k: int, rng: RngStream) -> tuple[int, ...]:
    """k i.i.d. uniform elements of ``GF(q)*`` (as field integers)."""
    if q < 2:
        raise ValueError("q must be at least 2")
    return tuple(int(v) for v in rng.integers(1, q, size=k))


def base_vspace(G: Group) -> tuple[int, int]:
    """``(q, n)`` when ``G`` is ``GF(q)^n`` or a prime cyclic group."""
    if isinstance(G, VectorSpace):
        return G.q, G.n
    if isinstance(G, Cyclic) and len(prime_factorization(G.n)) == 1 and sum(prime_factorization(G.n).values()) == 1:
        return G.n, 1
    raise Unsupported(f"{G.text()} is not a vector space over a prime field")


def to_vspace_elem(G: Group, y):
    return y if isinstance(G, VectorSpace) else (y,)


def from_vspace_elem(G: Group, v):
    return tuple(v) if isinstance(G, VectorSpace) else int(v[0])


def sample_lifted_Rk(proj: Projection, k: int, rng: RngStream, tables=None):
    """Draw from ``pi^-1(R_k)``: a base test tuple, then uniform fiber points."""
    q, n = base_vspace(proj.target)
    base, a = sample_vspace_test_tuple(q, n, k, rng, tables=tables)
    ys = [from_vspace_elem(proj.target, v) for v in base]
    return tuple(proj.sample_fiber(y, rng.gen) for y in ys), tuple(a), tuple(ys)


__all__ = [
    "CyclicKernelSampler",
    "RngStream",
    "VSpaceTables",
    "WeightedTupleTable",
    "build_dker_table",
    "build_stab_table",
    "classify_relation_level",
    "enumerate_Rk",
    "full_rank_probability",
    "jordan_totient",
    "relation_census",
    "relation_level_count",
    "sample_Rj",
    "sample_dker",
    "sample_lifted_Rk",
    "sample_nonzero",
    "sample_stab",
    "sample_vspace_test_tuple",
    "tv_exact_relaxed",
    "tv_exact_relaxed_formula",
]
