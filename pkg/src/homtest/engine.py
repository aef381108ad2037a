"""The evaluation map x -> (phi(x_1), ..., phi(x_k)) and the constants built on it.

For a tuple ``xs`` the codewords that agree with the reference codeword on
every coordinate form the kernel (hom spaces) or the pointwise stabilizer
(automorphism spaces); its size ``N(xs)`` is the multiplicity of the
evaluation map on its image.  Summing ``N`` over tuples gives gamma_k, rho_k
or the inner-automorphism analogue, depending on the space.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import kernels
from .errors import TooLarge, Unsupported
from .fields import prime_factorization
from .groups import Cyclic, DirectSum, Extraspecial, Group, Symmetric, VectorSpace
from .homs import (
    AbelianHom,
    CodewordSpace,
    LinearMap,
    QueryFunction,
    hom_count,
    hom_space,
    matrix_rank,
    sym_centralizer_size,
)
from .settings import check_cap, enumeration_cap, tuple_cap


@dataclass
class EvalMapCtx:
    """A codeword space together with the tuple arity k."""

    space: CodewordSpace
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")

    @property
    def domain(self) -> Group:
        return self.space.domain

    @property
    def codomain(self) -> Group:
        return self.space.codomain


# ---------------------------------------------------------------------------
# bitmask plumbing


def kernel_bits(space: CodewordSpace) -> np.ndarray:
    if "kbits" not in space.cache:
        t = space.table()
        space.cache["kbits"] = kernels.pack_bits(t == space.reference_row()[None, :])
    return space.cache["kbits"]


def query_bits(space: CodewordSpace, f: QueryFunction) -> np.ndarray:
    return kernels.pack_bits(space.table() == f.idx[None, :])


def surjective_multiplicity(space: CodewordSpace, k: int) -> int:
    """The value of N at which the evaluation map is onto ``H^k`` (or -1 if never)."""
    if space.kind not in ("hom", "lift"):
        return -1
    target = space.codomain.order**k
    if space.size % target:
        return -1
    return space.size // target


@dataclass
class ScanResult:
    """Exact sums over every tuple of the (possibly restricted) domain."""

    tuples: int
    weight_all: int
    pass_all: int
    kept: int
    weight_kept: int
    pass_kept: int


def tuple_scan(
    space: CodewordSpace,
    k: int,
    f: QueryFunction | None = None,
    allowed: np.ndarray | None = None,
    restrict: bool = True,
) -> ScanResult:
    """Run the tuple kernel over ``allowed^k`` (default: the whole domain)."""
    G = space.domain
    if allowed is None:
        allowed = np.arange(G.order, dtype=np.int64)
    n_tuples = len(allowed) ** k
    check_cap(n_tuples, f"tuple scan over {space.text()} at k={k}", tuple_cap())
    kb = kernel_bits(space)
    fb = query_bits(space, f) if f is not None else kb
    excl = surjective_multiplicity(space, k) if restrict else -1
    out = kernels.scan_tuples(kb, fb, allowed, k, excl)
    return ScanResult(n_tuples, *(int(v) for v in out))


# ---------------------------------------------------------------------------
# kernel size and image membership


def kernel_size_at(ctx: EvalMapCtx, xs) -> int:
    """Number of codewords that match the reference codeword on every ``x_i``."""
    space, G, H = ctx.space, ctx.domain, ctx.codomain
    xs = tuple(xs)
    for x in xs:
        G.check(x)
    if space.kind == "hom" and isinstance(G, Cyclic):
        d = math.gcd(G.n, *xs)
        return math.prod(math.gcd(d, m) for m in H.moduli())
    if space.kind == "hom" and isinstance(G, VectorSpace) and isinstance(H, VectorSpace) and G.q == H.q:
        rank = matrix_rank(G.field, xs)
        return G.q ** ((G.n - rank) * H.n)
    if space.kind == "inn":
        if G.abelian:
            return 1
        t = G.table()
        mask = np.ones(G.order, dtype=bool)
        for x in xs:
            i = G.index(x)
            mask &= t[i, :] == t[:, i]
        return int(mask.sum()) // G.center_order()
    return kernel_size_scan(ctx, xs)


def kernel_size_scan(ctx: EvalMapCtx, xs) -> int:
    space, G = ctx.space, ctx.domain
    cols = [G.index(x) for x in xs]
    t = space.table()[:, cols]
    ref = space.reference_row()[cols]
    return int(np.all(t == ref[None, :], axis=1).sum())


def _solve_congruence(a: int, b: int, m: int) -> tuple[int, int] | None:
    """Solutions of ``a c = b (mod m)`` as ``c = r (mod M)``."""
    g = math.gcd(a, m)
    if b % g:
        return None
    M = m // g
    if M == 1:
        return (0, 1)
    r = (b // g) * pow(a // g, -1, M) % M
    return (r, M)


def _intersect(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    t = ((r2 - r1) // g) * pow(m1 // g, -1, m2 // g) % (m2 // g)
    return ((r1 + m1 * t) % lcm, lcm)


def _lexmin_solution(F, X: list, y: list) -> list | None:
    """Lexicographically smallest ``r`` with ``<x_i, r> = y_i`` for all i."""
    n = len(X[0]) if X else 0

    def consistent(fixed: list) -> bool:
        rows = []
        for x, yi in zip(X, y):
            rhs = yi
            for j, v in enumerate(fixed):
                rhs = int(F.sub[rhs, F.mul[x[j], v]])
            rows.append(list(x[len(fixed):]) + [rhs])
        if not rows:
            return True
        a = matrix_rank(F, [r[:-1] for r in rows]) if n > len(fixed) else 0
        b = matrix_rank(F, rows)
        return a == b

    if not consistent([]):
        return None
    fixed: list[int] = []
    for _ in range(n):
        for v in range(F.q):
            if consistent(fixed + [v]):
                fixed.append(v)
                break
    return fixed


def image_membership(ctx: EvalMapCtx, xs, ys):
    """A codeword with ``phi(x_i) = y_i`` for all i, or None.

    The witness is always the first such codeword in enumeration order.
    """
    space, G, H = ctx.space, ctx.domain, ctx.codomain
    xs, ys = tuple(xs), tuple(ys)
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have equal length")
    for x in xs:
        G.check(x)
    for y in ys:
        H.check(y)
    if space.kind == "hom" and isinstance(G, Cyclic) and isinstance(H, Cyclic):
        n, m = G.n, H.n
        step = m // math.gcd(n, m)
        r, M = 0, step
        for x, y in zip(xs, ys):
            sol = _solve_congruence(x % m, y, m)
            if sol is None:
                return None
            both = _intersect(r, M, *sol)
            if both is None:
                return None
            r, M = both
        return AbelianHom(G, H, ((r % m,),))
    if space.kind == "hom" and isinstance(G, VectorSpace) and isinstance(H, VectorSpace) and G.q == H.q:
        rows = []
        for j in range(H.n):
            sol = _lexmin_solution(G.field, list(xs), [y[j] for y in ys])
            if sol is None:
                return None
            rows.append(tuple(sol))
        return LinearMap(G, H, tuple(rows))
    if space.kind == "inn" and isinstance(G, Symmetric):
        for x, y in zip(xs, ys):
            if G.cycle_type(x) != G.cycle_type(y):
                return None
    return image_membership_scan(ctx, xs, ys)


def image_membership_scan(ctx: EvalMapCtx, xs, ys):
    space, G, H = ctx.space, ctx.domain, ctx.codomain
    cols = [G.index(x) for x in xs]
    want = np.array([H.index(y) for y in ys])
    hits = np.flatnonzero(np.all(space.table()[:, cols] == want[None, :], axis=1))
    return space.codewords[int(hits[0])] if len(hits) else None


# ---------------------------------------------------------------------------
# gamma_k


def kernel_sizes(space: CodewordSpace) -> list[int]:
    t = space.table()
    return [int(v) for v in (t == space.reference_row()[None, :]).sum(axis=1)]


def gamma_k_bruteforce(G: Group | CodewordSpace, H: Group | None = None, k: int = 1, cross_check: bool = True) -> int:
    """``sum_phi |ker phi|^k``, cross-checked against the tuple sum when small."""
    space = G if isinstance(G, CodewordSpace) else hom_space(G, H)
    total = sum(s**k for s in kernel_sizes(space))
    if cross_check and space.domain.order**k <= enumeration_cap():
        via_tuples = tuple_scan(space, k, restrict=False).weight_all
        if via_tuples != total:
            raise AssertionError(f"gamma_{k}: codeword sum {total} != tuple sum {via_tuples}")
    return total


def hom_count_cyclic_p(m: int, p: int, b_list) -> int:
    """``|Hom(Z_{p^m}, H)| = prod_i p^min(m, b_i)``."""
    return math.prod(p ** min(m, b) for b in b_list)


def gamma_k_closed_cyclic(p: int, r: int, b_list, k: int) -> int:
    """gamma_k(Z_{p^r}, H) for H with p-component exponents ``b_list``."""
    total = Fraction(hom_count_cyclic_p(r, p, b_list))
    factor = 1 - Fraction(1, p**k)
    for a in range(1, r + 1):
        total += factor * p ** (a * k) * hom_count_cyclic_p(r - a, p, b_list)
    if total.denominator != 1:
        raise AssertionError("closed form did not produce an integer")
    return int(total)


def p_component(G: Group, p: int) -> Group | None:
    """The p-primary part of an abelian group as cyclic summands (None if trivial)."""
    parts = []
    for m in G.moduli():
        e = prime_factorization(m).get(p, 0)
        if e:
            parts.append(Cyclic(p**e))
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else DirectSum(parts)


def gamma_k_multiplicative(G: Group, H: Group, k: int) -> int:
    """Product over primes of gamma_k on the p-components."""
    total = 1
    for p in prime_factorization(G.order):
        Gp = p_component(G, p)
        Hp = p_component(H, p)
        if Hp is None:
            total *= Gp.order**k
        elif isinstance(Gp, Cyclic):
            r = prime_factorization(Gp.n)[p]
            b_list = [prime_factorization(m)[p] for m in Hp.moduli()]
            total *= gamma_k_closed_cyclic(p, r, b_list, k)
        else:
            total *= gamma_k_bruteforce(Gp, Hp, k, cross_check=False)
    return total


def zeta_partial_product(n: int, s: int) -> Fraction:
    """``prod_{p | n} (1 - p^-s)^-1``, the part of zeta(s) the bound needs."""
    out = Fraction(1)
    for p in prime_factorization(n):
        out /= 1 - Fraction(1, p**s)
    return out


# ---------------------------------------------------------------------------
# eta_k


def eta_k(G: Group | CodewordSpace, H: Group | None = None, k: int = 1) -> tuple[Fraction, str]:
    """``eta_k`` with the rule or path that produced it."""
    space = G if isinstance(G, CodewordSpace) else None
    if space is None:
        if hom_count(G, H) < H.order**k:
            return Fraction(1), "rule:|Hom|<|H|^k"
        space = hom_space(G, H)
    if space.kind in ("aut", "inn"):
        return Fraction(1), "rule:automorphisms"
    if space.size < space.codomain.order**k:
        return Fraction(1), "rule:|Hom|<|H|^k"
    if space.kind == "lift":
        if not space.inclusion.is_isomorphism:
            return Fraction(1), "rule:lift-non-iso"
        base, rule = eta_k(space.base_space, k=k)
        return base, "lift:" + rule
    if space.domain.order**k > tuple_cap():
        raise TooLarge(f"eta_{k} of {space.text()} needs a scan of {space.domain.order ** k} tuples")
    res = tuple_scan(space, k)
    return Fraction(res.kept, res.tuples), "brute-force"


def eta_k_multiplicative(G: Group, H: Group, k: int) -> Fraction:
    """``1 - prod_p (1 - eta_k(G_p, H_p))``."""
    prod = Fraction(1)
    for p in prime_factorization(G.order):
        Gp, Hp = p_component(G, p), p_component(H, p)
        if Hp is None:
            e = Fraction(1)
        else:
            e, _ = eta_k(Gp, Hp, k)
        prod *= 1 - e
    return 1 - prod


# ---------------------------------------------------------------------------
# rho_k and the inner analogue


def rho_k_dihedral(p: int, k: int) -> int:
    """Four-term closed form for ``sum_{phi in Aut(D_2p)} |Fix phi|^k``."""
    return (p - 1) * (p - 2) * 2**k + (p - 2) * 2**k + (p - 1) * p**k + (2 * p) ** k


def fix_counts(space: CodewordSpace) -> list[int]:
    t = space.table()
    ident = np.arange(space.domain.order)
    return [int(v) for v in (t == ident[None, :]).sum(axis=1)]


def rho_k_bruteforce(space: CodewordSpace, k: int) -> int:
    return sum(c**k for c in fix_counts(space))


def rho_k_tuplesum(space: CodewordSpace, k: int) -> int:
    return tuple_scan(space, k, restrict=False).weight_all


def partitions(n: int, largest: int | None = None):
    """Integer partitions of n in nonincreasing parts."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def class_sizes(G: Group) -> list[int]:
    """Conjugacy class sizes: cycle types for S_n, the known structure for
    extraspecial groups, and an orbit scan otherwise."""
    if isinstance(G, Symmetric):
        return [G.order // sym_centralizer_size(ct) for ct in partitions(G.n)]
    return [len(c) for c in G.conjugacy_classes()]


def trho_class_formula(G: Group, k: int, sizes: list[int] | None = None) -> int:
    sizes = class_sizes(G) if sizes is None else sizes
    z = sum(1 for s in sizes if s == 1)
    val = Fraction(G.order**k, z) * sum(Fraction(1, s ** (k - 1)) for s in sizes)
    if val.denominator != 1:
        raise AssertionError("class formula did not produce an integer")
    return int(val)


def trho_centralizer_scan(G: Group, k: int) -> int:
    """``sum_{phi_g in Inn} |C(g)|^k`` with centralizers counted by commuting scan."""
    cent = G.centralizer_sizes()
    z = G.center_order()
    total = sum(int(c) ** k for c in cent)
    if total % z:
        raise AssertionError("centralizer sum not divisible by |Z|")
    return total // z


def trho_extraspecial(G: Extraspecial, k: int) -> int:
    p, r = G.p, G.r
    return p ** (r * k) + (p ** (r - 1) - 1) * p ** ((r - 1) * k)


def trho_k(G: Group, k: int, paths=("class-formula", "centralizer-scan", "closed-form", "tuple-scan")) -> dict:
    """All available evaluations of the inner-automorphism constant; asserted equal."""
    out: dict[str, int] = {}
    if "class-formula" in paths:
        out["class-formula"] = trho_class_formula(G, k)
    if "closed-form" in paths and isinstance(G, Extraspecial):
        out["closed-form"] = trho_extraspecial(G, k)
    if "closed-form" in paths and isinstance(G, Symmetric):
        # cycle-type form of the class formula, without any element scan
        out["closed-form"] = sum(
            (G.order // sym_centralizer_size(ct)) * sym_centralizer_size(ct) ** k for ct in partitions(G.n)
        ) // (2 if G.n == 2 else 1)
    if "centralizer-scan" in paths:
        out["centralizer-scan"] = trho_centralizer_scan(G, k)
    if "tuple-scan" in paths and G.order**k <= enumeration_cap():
        from .homs import inn_space

        out["tuple-scan"] = tuple_scan(inn_space(G), k, restrict=False).weight_all
    if len(set(out.values())) > 1:
        raise AssertionError(f"trho_{k}({G.text()}) paths disagree: {out}")
    return out


# ---------------------------------------------------------------------------
# lifting and the binomial identity


def lift_gamma(ker_pi_size: int, base_gamma: int, k: int) -> int:
    if ker_pi_size < 1 or base_gamma < 1:
        raise ValueError("inputs must be positive")
    return ker_pi_size**k * base_gamma


def binom_collapse_check(k: int, j: int) -> int:
    """``sum_{i=j}^k (-1)^(k-i) C(k,i) C(i,j)``; zero whenever j < k."""
    return sum((-1) ** (k - i) * math.comb(k, i) * math.comb(i, j) for i in range(j, k + 1))


# ---------------------------------------------------------------------------
# reports


@dataclass
class ConstantsReport:
    space: str
    k: int
    gamma_k: int | None
    eta_k_num: int | None
    eta_k_den: int | None
    method: str
    rho_k: int | None = None
    trho_k: int | None = None
    elapsed_ms: float | None = None

    def row(self) -> dict:
        return asdict(self)


def constants_report(space: CodewordSpace, k: int, timings: bool = False) -> ConstantsReport:
    """gamma_k / eta_k (hom and lift spaces) or rho_k (automorphism spaces)."""
    t0 = time.perf_counter()
    methods = []
    gamma = rho = trho = None
    eta_num = eta_den = None
    if space.kind in ("hom", "lift"):
        gamma = gamma_k_bruteforce(space, k=k)
        methods.append("brute-force")
        G, H = space.domain, space.codomain
        if space.kind == "hom" and isinstance(G, Cyclic):
            closed = gamma_k_multiplicative(G, H, k)
            if closed != gamma:
                raise AssertionError(f"gamma_{k}: closed form {closed} != brute force {gamma}")
            methods.append("closed-form")
        if space.kind == "lift":
            base = gamma_k_bruteforce(space.base_space, k=k)
            via_rule = lift_gamma(space.projection.kernel_size(), base, k)
            if via_rule != gamma:
                raise AssertionError(f"lifted gamma_{k}: product rule {via_rule} != scan {gamma}")
            methods.append("lift-rule")
        eta, how = eta_k(space, k=k)
        eta_num, eta_den = eta.numerator, eta.denominator
        methods.append("eta:" + how)
    elif space.kind == "aut":
        rho = rho_k_bruteforce(space, k)
        closed = rho_k_dihedral(space.domain.p, k)
        if closed != rho:
            raise AssertionError(f"rho_{k}: closed form {closed} != scan {rho}")
        methods.append("brute-force+closed-form")
    elif space.kind == "inn":
        vals = trho_k(space.domain, k)
        trho = next(iter(vals.values()))
        methods.append("+".join(vals))
    else:  # pragma: no cover
        raise Unsupported(space.kind)
    elapsed = round((time.perf_counter() - t0) * 1000, 3) if timings else None
    return ConstantsReport(space.text(), k, gamma, eta_num, eta_den, ",".join(methods), rho, trho, elapsed)


def all_tuples(G: Group, k: int):
    """Every k-tuple of elements (first coordinate most significant)."""
    check_cap(G.order**k, f"tuples of {G.text()} at k={k}")
    return product(G.elements(), repeat=k)
