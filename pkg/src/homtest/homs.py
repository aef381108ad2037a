"""Codeword spaces: homomorphisms, automorphisms, inner automorphisms and lifts.

A :class:`CodewordSpace` owns an ordered, duplicate-free list of codewords
together with their full evaluation table (codeword x domain element ->
codomain element index).  The tables are what the counting kernels consume.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidElement, Unsupported
from .fields import prime_factorization
from .groups import (
    Cyclic,
    Dihedral,
    GeneralLinear,
    Group,
    LieGL,
    Symmetric,
    VectorSpace,
    _parse_int_tuple,
    _parse_matrix,
    mat_det,
    mat_trace,
)
from .settings import check_cap


# ---------------------------------------------------------------------------
# homomorphism types


class Hom:
    domain: Group
    codomain: Group

    def __call__(self, x):
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def kernel_size(self) -> int:
        e = self.codomain.identity
        return sum(1 for x in self.domain.elements() if self(x) == e)

    def fix_count(self) -> int:
        return sum(1 for x in self.domain.elements() if self(x) == x)

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class AbelianHom(Hom):
    """``y_j = sum_i C[j][i] x_i (mod m_j)`` on cyclic residue coordinates."""

    domain: Group
    codomain: Group
    matrix: tuple

    def __post_init__(self):
        n, m = self.domain.moduli(), self.codomain.moduli()
        if len(self.matrix) != len(m) or any(len(r) != len(n) for r in self.matrix):
            raise InvalidElement("multiplier matrix has the wrong shape")
        for j, row in enumerate(self.matrix):
            for i, c in enumerate(row):
                if not 0 <= c < m[j] or (n[i] * c) % m[j]:
                    raise InvalidElement(f"multiplier {c} does not define a map Z/{n[i]} -> Z/{m[j]}")

    def __call__(self, x):
        v = self.domain.to_residues(x)
        m = self.codomain.moduli()
        y = [sum(c * a for c, a in zip(row, v)) % m[j] for j, row in enumerate(self.matrix)]
        return self.codomain.from_residues(y)

    def kernel_size(self) -> int:
        n = self.domain.moduli()
        if len(n) == 1:
            # order of the image of the generator
            m = self.codomain.moduli()
            order = 1
            for j, row in enumerate(self.matrix):
                order = math.lcm(order, m[j] // math.gcd(row[0], m[j]))
            return n[0] // order
        return super().kernel_size()

    def text(self) -> str:
        if len(self.matrix) == 1 and len(self.matrix[0]) == 1:
            return f"mul:{self.matrix[0][0]}"
        return "mul:" + _matrix_text(self.matrix)


@dataclass(frozen=True)
class LinearMap(Hom):
    """GF(q)-linear map ``V(q,n) -> V(q,m)``; ``matrix`` is m rows of length n."""

    domain: VectorSpace
    codomain: VectorSpace
    matrix: tuple

    def __call__(self, x):
        F = self.domain.field
        out = []
        for row in self.matrix:
            acc = 0
            for c, a in zip(row, x):
                acc = F.add[acc, F.mul[c, a]]
            out.append(int(acc))
        return tuple(out)

    def kernel_size(self) -> int:
        return self.domain.q ** (self.domain.n - matrix_rank(self.domain.field, self.matrix))

    def text(self) -> str:
        return "mat:" + _matrix_text(self.matrix)


@dataclass(frozen=True)
class DihedralAut(Hom):
    """``r -> r^l``, ``s -> s r^m``; on ``s^b r^i`` this gives ``s^b r^(l i + m b)``."""

    domain: Dihedral
    codomain: Dihedral
    l: int
    m: int

    def __post_init__(self):
        p = self.domain.p
        if not (1 <= self.l <= p - 1 and 0 <= self.m <= p - 1):
            raise InvalidElement(f"(l,m)=({self.l},{self.m}) out of range for p={p}")

    def __call__(self, x):
        i, b = x
        return ((self.l * i + self.m * b) % self.domain.p, b)

    def fix_count_closed(self) -> int:
        p = self.domain.p
        if self.l != 1:
            return 2
        return 2 * p if self.m == 0 else p

    def text(self) -> str:
        return f"dih:({self.l},{self.m})"


@dataclass(frozen=True)
class InnerAut(Hom):
    """Conjugation ``x -> g x g^-1``; ``g`` is the first element of its coset mod Z(G)."""

    domain: Group
    codomain: Group
    g: object

    def __call__(self, x):
        G = self.domain
        return G.op(G.op(self.g, x), G.inv(self.g))

    def text(self) -> str:
        return "inn:" + self.domain.format_elem(self.g)


@dataclass(frozen=True)
class LiftedHom(Hom):
    """``incl o base o proj``."""

    base: Hom
    projection: "Projection"
    inclusion: "Inclusion"

    @property
    def domain(self) -> Group:
        return self.projection.source

    @property
    def codomain(self) -> Group:
        return self.inclusion.target

    def __call__(self, x):
        return self.inclusion(self.base(self.projection(x)))

    def text(self) -> str:
        return f"lift({self.projection.name})∘{self.base.text()}"


def _matrix_text(M) -> str:
    return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in M) + "]"


def matrix_rank(F, rows) -> int:
    """Rank over GF(q) of a list of row vectors."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = F.inv[M[rank][c]]
        M[rank] = [int(F.mul[inv, v]) for v in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][c]:
                f = M[r][c]
                M[r] = [int(F.sub[M[r][j], F.mul[f, M[rank][j]]]) for j in range(ncols)]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# projections and inclusions for lifting


class Projection:
    """Surjective homomorphism ``source -> target`` with uniform fiber sampling."""

    name = "proj"
    source: Group
    target: Group

    def __call__(self, x):
        raise NotImplementedError

    def kernel_size(self) -> int:
        return self.source.order // self.target.order

    def sample_fiber(self, y, rng):
        raise NotImplementedError

    def fibers(self) -> dict:
        """Map target element -> list of source element indices (enumerated)."""
        out: dict = {}
        for i, x in enumerate(self.source.elements()):
            out.setdefault(self(x), []).append(i)
        return out

    def __eq__(self, other):
        return type(self) is type(other) and self.source == other.source and self.target == other.target

    def __hash__(self):
        return hash((self.name, self.source, self.target))


class DetProjection(Projection):
    """``GL(n,q) -> GF(q)* = Z/(q-1)`` via the discrete log of the determinant."""

    name = "det"

    def __init__(self, G: GeneralLinear) -> None:
        if not isinstance(G, GeneralLinear):
            raise Unsupported("det projects from GL(n,q) only")
        self.source = G
        self.target = Cyclic(G.q - 1)

    def __call__(self, x):
        return int(self.source.field.log[mat_det(self.source.field, x)])

    def sample_fiber(self, y, rng):
        G, F = self.source, self.source.field
        while True:
            a = tuple(tuple(int(v) for v in row) for row in rng.integers(0, G.q, size=(G.n, G.n)))
            d = mat_det(F, a)
            if d:
                break
        c = int(F.mul[F.exp[y], F.inv[d]])
        first = tuple(int(F.mul[c, v]) for v in a[0])
        return (first,) + a[1:]


class TraceProjection(Projection):
    """``gl(n,q) -> GF(q)`` (as ``Z/p`` for prime q, else ``V(q,1)``)."""

    name = "trace"

    def __init__(self, G: LieGL) -> None:
        if not isinstance(G, LieGL):
            raise Unsupported("trace projects from gl(n,q) only")
        self.source = G
        self.target = Cyclic(G.q) if G.field.a == 1 else VectorSpace(G.q, 1)

    def __call__(self, x):
        t = mat_trace(self.source.field, x)
        return t if isinstance(self.target, Cyclic) else (t,)

    def sample_fiber(self, y, rng):
        G, F = self.source, self.source.field
        a = [[int(v) for v in row] for row in rng.integers(0, G.q, size=(G.n, G.n))]
        want = y if isinstance(self.target, Cyclic) else y[0]
        a[0][0] = int(F.add[a[0][0], F.sub[want, mat_trace(F, a)]])
        return tuple(tuple(r) for r in a)


class ModProjection(Projection):
    """``Z/p^s -> Z/p^r``, reduction mod p^r."""

    name = "mod"

    def __init__(self, G: Cyclic, r_order: int) -> None:
        if not isinstance(G, Cyclic) or G.n % r_order:
            raise Unsupported(f"mod {r_order} does not project from {G.text()}")
        self.source = G
        self.target = Cyclic(r_order)

    def __call__(self, x):
        return x % self.target.n

    def sample_fiber(self, y, rng):
        m = self.target.n
        return y + m * int(rng.integers(self.source.n // m))


class ComponentModProjection(Projection):
    """Abelianization onto ``V(p, n)``.

    For cyclic or direct-sum groups every summand ``Z/m`` with ``p | m`` maps
    to one coordinate by ``x mod p``; ``S(n)`` maps to ``V(2,1)`` by the sign;
    ``D(p)`` maps to ``V(2,1)`` by the reflection bit.
    """

    name = "cmod"

    def __init__(self, G: Group, p: int) -> None:
        self.source, self.p = G, p
        if isinstance(G, Symmetric) and p == 2 and G.n >= 2:
            self._kind = "sign"
            dim = 1
        elif isinstance(G, Dihedral) and p == 2:
            self._kind = "bit"
            dim = 1
        elif G.abelian and not isinstance(G, LieGL):
            self._kind = "abelian"
            self._mods = G.moduli()
            self._hit = [i for i, m in enumerate(self._mods) if m % p == 0]
            dim = len(self._hit)
            if dim == 0:
                raise Unsupported(f"{G.text()} has no Z/{p} quotient")
        else:
            raise Unsupported(f"component-wise mod is not available for {G.text()}")
        self.target = VectorSpace(p, dim)

    def __call__(self, x):
        if self._kind == "sign":
            ct = self.source.cycle_type(x)
            return (sum(c - 1 for c in ct) % 2,)
        if self._kind == "bit":
            return (x[1],)
        v = self.source.to_residues(x)
        return tuple(v[i] % self.p for i in self._hit)

    def sample_fiber(self, y, rng):
        G = self.source
        if self._kind == "sign":
            a = G.element_at(int(rng.integers(G.order)))
            if self(a) != y:
                a = G.op(a, (1, 0) + tuple(range(2, G.n)))
            return a
        if self._kind == "bit":
            return (int(rng.integers(G.p)), y[0])
        v = [int(rng.integers(m)) for m in self._mods]
        for pos, i in enumerate(self._hit):
            v[i] = y[pos] + self.p * int(rng.integers(self._mods[i] // self.p))
        return G.from_residues(v)

    def __eq__(self, other):
        return super().__eq__(other) and self.p == other.p

    def __hash__(self):
        return hash((self.name, self.source, self.p))


class IdentityProjection(Projection):
    name = "id"

    def __init__(self, G: Group) -> None:
        self.source = self.target = G

    def __call__(self, x):
        return x

    def sample_fiber(self, y, rng):
        return y


class Inclusion:
    """Injective homomorphism ``H -> H~``."""

    name = "id"
    is_isomorphism = True

    def __init__(self, H: Group) -> None:
        self.source = self.target = H

    def __call__(self, y):
        return y

    def __eq__(self, other):
        return type(self) is type(other) and self.source == other.source and self.target == other.target

    def __hash__(self):
        return hash((self.name, self.source, self.target))


class ScaleInclusion(Inclusion):
    """``Z/m -> Z/(m d)``, ``y -> d y``."""

    name = "scale"
    is_isomorphism = False

    def __init__(self, H: Cyclic, d: int) -> None:
        if d < 2:
            raise Unsupported("scale inclusion needs d >= 2")
        self.source = H
        self.target = Cyclic(H.n * d)
        self.d = d

    def __call__(self, y):
        return y * self.d


def make_projection(name: str, G: Group, arg: int | None = None) -> Projection:
    if name == "det":
        return DetProjection(G)
    if name in ("trace", "tr"):
        return TraceProjection(G)
    if name == "mod":
        return ModProjection(G, arg)
    if name == "cmod":
        return ComponentModProjection(G, arg)
    if name == "id":
        return IdentityProjection(G)
    raise Unsupported(f"unknown projection {name!r}")


# ---------------------------------------------------------------------------
# enumeration


def enumerate_homs(G: Group, H: Group) -> list[Hom]:
    """All homomorphisms between abelian groups, duplicate-free and ordered."""
    if not (G.abelian and H.abelian) or isinstance(G, LieGL) or isinstance(H, LieGL):
        raise Unsupported(f"Hom({G.text()},{H.text()}) is only enumerated for abelian pairs")
    if isinstance(G, VectorSpace) and isinstance(H, VectorSpace) and G.q == H.q:
        count = G.q ** (G.n * H.n)
        check_cap(count, f"linear maps {G.text()} -> {H.text()}")
        out = []
        for flat in itertools.product(range(G.q), repeat=G.n * H.n):
            M = tuple(tuple(flat[j * G.n : (j + 1) * G.n]) for j in range(H.n))
            out.append(LinearMap(G, H, M))
        return out
    n, m = G.moduli(), H.moduli()
    choices = []
    for mj in m:
        for ni in n:
            step = mj // math.gcd(ni, mj)
            choices.append(range(0, mj, step))
    count = math.prod(len(c) for c in choices)
    check_cap(count, f"homomorphisms {G.text()} -> {H.text()}")
    out = []
    for flat in itertools.product(*choices):
        M = tuple(tuple(flat[j * len(n) : (j + 1) * len(n)]) for j in range(len(m)))
        out.append(AbelianHom(G, H, M))
    return out


def hom_count(G: Group, H: Group) -> int:
    """``|Hom(G,H)|`` from the cyclic decomposition (no enumeration)."""
    if isinstance(G, VectorSpace) and isinstance(H, VectorSpace) and G.q == H.q:
        return G.q ** (G.n * H.n)
    return math.prod(math.gcd(a, b) for a in G.moduli() for b in H.moduli())


def enumerate_aut_dihedral(p: int) -> list[DihedralAut]:
    D = Dihedral(p)
    return [DihedralAut(D, D, l, m) for l in range(1, p) for m in range(p)]


def center_indices(G: Group) -> list[int]:
    if G.abelian:
        return list(range(G.order))
    t = G.table()
    return [int(i) for i in np.flatnonzero(np.all(t == t.T, axis=1))]


def enumerate_inner(G: Group) -> list[InnerAut]:
    """One inner automorphism per coset of the center, represented by its first element."""
    check_cap(G.order, f"inner automorphisms of {G.text()}")
    if G.abelian:
        return [InnerAut(G, G, G.identity)]
    t = G.table()
    Z = center_indices(G)
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for i in range(G.order):
        if seen[i]:
            continue
        seen[t[i, Z]] = True
        out.append(InnerAut(G, G, G.element_at(i)))
    return out


def enumerate_lifthom(Gt: Group, proj: Projection, baseH: Group, inj: Inclusion | None = None) -> list[LiftedHom]:
    if not isinstance(proj, Projection):
        raise Unsupported(f"unsupported projection {proj!r}")
    if proj.source != Gt:
        raise Unsupported(f"projection {proj.name} does not start at {Gt.text()}")
    inj = inj or Inclusion(baseH)
    if inj.source != baseH:
        raise Unsupported("inclusion does not start at the base codomain")
    return [LiftedHom(h, proj, inj) for h in enumerate_homs(proj.target, baseH)]


# ---------------------------------------------------------------------------
# codeword spaces


@dataclass
class CodewordSpace:
    """An ordered list of codewords with their evaluation table.

    ``reference`` is the codeword whose agreement pattern defines the kernel
    (the zero map) or stabilizer (the identity automorphism).
    """

    kind: str
    domain: Group
    codomain: Group
    codewords: list
    reference: int
    label: str = ""
    projection: Projection | None = None
    inclusion: Inclusion | None = None
    base_space: "CodewordSpace | None" = None
    _table: np.ndarray | None = field(default=None, repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.codewords)

    def text(self) -> str:
        return self.label or f"{self.kind}:{self.domain.text()}->{self.codomain.text()}"

    def table(self) -> np.ndarray:
        if self._table is None:
            self._table = codeword_table(self)
        return self._table

    def reference_row(self) -> np.ndarray:
        return self.table()[self.reference]

    def find(self, text: str) -> int:
        for i, h in enumerate(self.codewords):
            if h.text() == text:
                return i
        raise InvalidElement(f"no codeword {text!r} in {self.text()}")

    def index_of(self, h: Hom) -> int:
        return self.codewords.index(h)


def hom_space(G: Group, H: Group) -> CodewordSpace:
    homs = enumerate_homs(G, H)
    return CodewordSpace("hom", G, H, homs, 0, f"{G.text()}->{H.text()}")


def aut_space(D: Dihedral) -> CodewordSpace:
    auts = enumerate_aut_dihedral(D.p)
    ref = next(i for i, a in enumerate(auts) if a.l == 1 and a.m == 0)
    return CodewordSpace("aut", D, D, auts, ref, f"Aut({D.text()})")


def inn_space(G: Group) -> CodewordSpace:
    inns = enumerate_inner(G)
    return CodewordSpace("inn", G, G, inns, 0, f"Inn({G.text()})")


def lift_space(Gt: Group, proj: Projection, baseH: Group, inj: Inclusion | None = None) -> CodewordSpace:
    inj = inj or Inclusion(baseH)
    lifts = enumerate_lifthom(Gt, proj, baseH, inj)
    base = hom_space(proj.target, baseH)
    label = f"{Gt.text()}-{proj.name}->{inj.target.text()}"
    return CodewordSpace("lift", Gt, inj.target, lifts, 0, label, proj, inj, base)


def _residue_array(G: Group) -> np.ndarray:
    return np.array([G.to_residues(x) for x in G.elements()], dtype=np.int64).reshape(G.order, -1)


def _radix_index(res: np.ndarray, moduli) -> np.ndarray:
    idx = np.zeros(res.shape[:-1], dtype=np.int64)
    for j, m in enumerate(moduli):
        idx = idx * m + res[..., j]
    return idx


def codeword_table(space: CodewordSpace) -> np.ndarray:
    """Evaluation table ``T[c, x] = index(codeword_c(element_x))``."""
    G, H = space.domain, space.codomain
    check_cap(space.size * G.order, f"evaluation table of {space.text()}")
    cws = space.codewords
    if space.kind == "hom" and cws and isinstance(cws[0], AbelianHom):
        R = _residue_array(G)  # |G| x nd
        C = np.array([h.matrix for h in cws], dtype=np.int64)  # |Hom| x mH x nd
        m = np.array(H.moduli(), dtype=np.int64)
        img = np.einsum("cjd,xd->cxj", C, R) % m
        return _radix_index(img, H.moduli())
    if space.kind == "hom" and cws and isinstance(cws[0], LinearMap):
        F = G.field
        X = np.array(G.elements(), dtype=np.int64)  # |G| x n
        out = np.zeros((len(cws), G.order), dtype=np.int64)
        for c, h in enumerate(cws):
            img = np.zeros((G.order, H.n), dtype=np.int64)
            for j, row in enumerate(h.matrix):
                acc = np.zeros(G.order, dtype=np.int64)
                for t, coef in enumerate(row):
                    acc = F.add[acc, F.mul[coef, X[:, t]]]
                img[:, j] = acc
            out[c] = _radix_index(img, [H.q] * H.n)
        return out
    if space.kind == "aut":
        p = G.p
        i = np.array([x[0] for x in G.elements()])
        b = np.array([x[1] for x in G.elements()])
        out = np.empty((len(cws), G.order), dtype=np.int64)
        for c, h in enumerate(cws):
            out[c] = b * p + (h.l * i + h.m * b) % p
        return out
    if space.kind == "inn":
        t = G.table()
        inv = G.inverse_indices()
        gi = np.array([G.index(h.g) for h in cws])
        # g x g^-1: row g of T gives g x, then right-multiply by g^-1
        return t[t[gi, :], inv[gi][:, None]]
    if space.kind == "lift":
        proj, inj, base = space.projection, space.inclusion, space.base_space
        pidx = np.array([proj.target.index(proj(x)) for x in G.elements()], dtype=np.int64)
        iidx = np.array([inj.target.index(inj(y)) for y in inj.source.elements()], dtype=np.int64)
        return iidx[base.table()[:, pidx]]
    els = G.elements()
    return np.array([[H.index(h(x)) for x in els] for h in cws], dtype=np.int64)


# ---------------------------------------------------------------------------
# per-codeword constants


def hom_apply(h: Hom, x):
    h.domain.check(x)
    return h(x)


def hom_kernel_size(h: Hom) -> int:
    return h.kernel_size()


def aut_fix_count(h: Hom) -> int:
    if isinstance(h, DihedralAut):
        return h.fix_count_closed()
    return h.fix_count()


def sym_centralizer_size(cycle_type) -> int:
    """``prod_i i^a_i a_i!`` for the cycle type with a_i cycles of length i."""
    counts: dict[int, int] = {}
    for c in cycle_type:
        counts[c] = counts.get(c, 0) + 1
    return math.prod(i**a * math.factorial(a) for i, a in counts.items())


# ---------------------------------------------------------------------------
# query functions and agreement


class QueryFunction:
    """A total function ``f: G -> H`` stored as a table of codomain indices."""

    def __init__(self, domain: Group, codomain: Group, idx, label: str = "") -> None:
        self.domain, self.codomain = domain, codomain
        self.idx = np.asarray(idx, dtype=np.int64)
        if self.idx.shape != (domain.order,):
            raise InvalidElement("query table length differs from the domain order")
        if self.idx.min(initial=0) < 0 or self.idx.max(initial=0) >= codomain.order:
            raise InvalidElement("query table holds indices outside the codomain")
        self.label = label

    @classmethod
    def from_callable(cls, domain: Group, codomain: Group, fn, label: str = "") -> "QueryFunction":
        return cls(domain, codomain, [codomain.index(fn(x)) for x in domain.elements()], label)

    @classmethod
    def from_hom(cls, h: Hom, label: str = "") -> "QueryFunction":
        return cls.from_callable(h.domain, h.codomain, h, label or h.text())

    @classmethod
    def from_row(cls, space: CodewordSpace, c: int) -> "QueryFunction":
        return cls(space.domain, space.codomain, space.table()[c].copy(), space.codewords[c].text())

    def __call__(self, x):
        return self.codomain.element_at(int(self.idx[self.domain.index(x)]))

    def values(self) -> list:
        return [self.codomain.element_at(int(i)) for i in self.idx]


def agreement_counts(f: QueryFunction, space: CodewordSpace, mask: np.ndarray | None = None) -> np.ndarray:
    """Number of (optionally masked) domain points where f meets each codeword."""
    eq = space.table() == f.idx[None, :]
    if mask is not None:
        eq = eq[:, mask]
    return eq.sum(axis=1).astype(np.int64)


def agreement(f: QueryFunction, h: Hom) -> Fraction:
    G = f.domain
    hits = sum(1 for x, y in zip(G.elements(), f.idx) if f.codomain.index(h(x)) == y)
    return Fraction(hits, G.order)


def shifted_agreement(f: QueryFunction, h: Hom, q: int) -> Fraction:
    return (q * agreement(f, h) - 1) / Fraction(q - 1)


def nonzero_mask(G: Group) -> np.ndarray:
    mask = np.ones(G.order, dtype=bool)
    mask[G.identity_index()] = False
    return mask


def agreement_nonzero(f: QueryFunction, h: Hom) -> Fraction:
    G = f.domain
    e = G.identity
    hits = sum(
        1 for x, y in zip(G.elements(), f.idx) if x != e and f.codomain.index(h(x)) == y
    )
    return Fraction(hits, G.order - 1)


# ---------------------------------------------------------------------------
# text form of homs


def parse_hom(text: str, space: CodewordSpace) -> Hom:
    """Parse ``mul:2``, ``mat:[[1,0]]``, ``dih:(2,1)``, ``inn:g`` or ``lift(det)∘mul:1``."""
    s = text.strip()
    G, H = space.domain, space.codomain
    if s.startswith("lift("):
        if space.kind != "lift":
            raise InvalidElement(f"{text!r} is a lifted hom but the space is {space.kind}")
        rest = s[s.index(")") + 1 :].lstrip("∘@.")
        base = parse_hom(rest, space.base_space)
        return LiftedHom(base, space.projection, space.inclusion)
    if space.kind == "lift":
        return LiftedHom(parse_hom(s, space.base_space), space.projection, space.inclusion)
    kind, _, body = s.partition(":")
    if kind == "mul":
        if body.strip().startswith("["):
            M = tuple(tuple(r) for r in _parse_matrix(body))
        else:
            M = ((int(body),),)
        n, m = G.moduli(), H.moduli()
        if len(M) == 1 and len(M[0]) == 1 and (len(n), len(m)) != (1, 1):
            raise InvalidElement(f"{text!r} needs a multiplier matrix for {space.text()}")
        M = tuple(tuple(c % m[j] for c in row) for j, row in enumerate(M))
        return AbelianHom(G, H, M)
    if kind == "mat":
        M = tuple(tuple(v % G.q for v in r) for r in _parse_matrix(body))
        if len(M) != H.n or any(len(r) != G.n for r in M):
            raise InvalidElement(f"{text!r} has the wrong shape for {space.text()}")
        return LinearMap(G, H, M)
    if kind == "dih":
        l, m = _parse_int_tuple(body)
        return DihedralAut(G, G, l % G.p, m % G.p)
    if kind == "inn":
        g = G.parse_elem(body)
        # canonical coset representative
        gi = G.index(g)
        t = G.table()
        coset = sorted(int(t[gi, z]) for z in center_indices(G))
        return InnerAut(G, G, G.element_at(coset[0]))
    raise InvalidElement(f"cannot parse hom {text!r}")


def is_homomorphism(h: Hom, pairs) -> bool:
    G, H = h.domain, h.codomain
    return all(h(G.op(x, y)) == H.op(h(x), h(y)) for x, y in pairs)


def p_part_exponents(G: Group) -> dict[int, list[int]]:
    """Per prime, the exponents of the cyclic summands of the p-component."""
    out: dict[int, list[int]] = {}
    for m in G.moduli():
        for p, e in prime_factorization(m).items():
            out.setdefault(p, []).append(e)
    return out


__all__ = [
    "AbelianHom",
    "CodewordSpace",
    "DihedralAut",
    "Hom",
    "InnerAut",
    "LiftedHom",
    "LinearMap",
    "QueryFunction",
    "agreement",
    "agreement_counts",
    "agreement_nonzero",
    "aut_fix_count",
    "aut_space",
    "enumerate_aut_dihedral",
    "enumerate_homs",
    "enumerate_inner",
    "enumerate_lifthom",
    "hom_apply",
    "hom_count",
    "hom_kernel_size",
    "hom_space",
    "inn_space",
    "lift_space",
    "make_projection",
    "parse_hom",
    "shifted_agreement",
    "sym_centralizer_size",
]
