"""Brute-force oracles and function generators.

Every identity here is checked in exact rational arithmetic.  Reals only
appear inside theorem bounds, whose roots are rounded outward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bounds as B
from .engine import (
    EvalMapCtx,
    eta_k,
    fix_counts,
    gamma_k_bruteforce,
    kernel_size_at,
    lift_gamma,
    rho_k_dihedral,
    trho_centralizer_scan,
    trho_class_formula,
    tuple_scan,
)
from .errors import Unsupported
from .fields import prime_factorization
from .groups import Cyclic, Dihedral, Group
from .homs import CodewordSpace, QueryFunction, agreement_counts, parse_hom
from .procedures import TestSpec, delta_exact, theorem_bounds_or_none
from .samplers import RngStream

# ---------------------------------------------------------------------------
# function generators

GENERATOR_KINDS = ("exact", "corrupt", "random", "shift", "mix")


@dataclass
class FunctionGenerator:
    """Recipe for a query function on a codeword space.

    ``kind`` is one of ``exact`` (a codeword), ``corrupt`` (a codeword with a
    ``1 - alpha`` fraction of points changed), ``random`` (uniform values),
    ``shift`` (a codeword plus a constant) or ``mix`` (codewords planted on
    blocks of a random partition of the domain).
    """

    kind: str
    homs: tuple[str, ...] = ()
    alpha: Fraction | None = None
    constant: str | None = None
    weights: tuple[Fraction, ...] | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise Unsupported(f"unknown generator {self.kind!r}")

    def text(self) -> str:
        if self.label:
            return self.label
        if self.kind == "exact":
            return f"hom({self.homs[0]})"
        if self.kind == "corrupt":
            return f"corrupt({self.homs[0]},{B.fraction_text(self.alpha)})"
        if self.kind == "shift":
            return f"shift({self.homs[0]},{self.constant})"
        if self.kind == "mix":
            return "mix(" + ",".join(self.homs) + ")"
        return "random"

    def generate(self, space: CodewordSpace, rng: RngStream) -> QueryFunction:
        G, H = space.domain, space.codomain
        if self.kind == "random":
            idx = rng.integers(0, H.order, size=G.order)
            return QueryFunction(G, H, idx, self.text())
        rows = [space.index_of(parse_hom(h, space)) for h in self.homs]
        if self.kind == "exact":
            return QueryFunction(G, H, space.table()[rows[0]].copy(), self.text())
        if self.kind == "corrupt":
            return QueryFunction(G, H, corrupt_row(space, rows[0], self.alpha, rng), self.text())
        if self.kind == "shift":
            c = H.index(H.parse_elem(self.constant))
            T = H.table() if not H.abelian or H.order <= 6000 else None
            if T is None:  # pragma: no cover
                raise Unsupported("shift needs the codomain table")
            return QueryFunction(G, H, T[space.table()[rows[0]], c], self.text())
        if self.kind == "mix":
            return QueryFunction(G, H, planted_mixture(space, rows, self.weights, rng), self.text())
        raise Unsupported(self.kind)  # pragma: no cover


def corrupt_row(space: CodewordSpace, row: int, alpha, rng: RngStream) -> np.ndarray:
    """The codeword ``row`` with all but ``ceil(alpha |G|)`` points changed.

    Changed points are chosen without replacement.  A changed value avoids
    every codeword's value at that point when the codomain has room, and
    otherwise just the base value.
    """
    G, H = space.domain, space.codomain
    a = Fraction(alpha)
    if not 0 <= a <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    keep = math.ceil(a * G.order)
    table = space.table()
    out = table[row].copy()
    order = rng.permutation(G.order)
    for x in order[keep:]:
        x = int(x)
        taken = np.zeros(H.order, dtype=bool)
        taken[table[:, x]] = True
        free = np.flatnonzero(~taken)
        if len(free) == 0:
            free = np.array([h for h in range(H.order) if h != out[x]])
        if len(free) == 0:
            raise Unsupported("cannot corrupt a function into a trivial codomain")
        out[x] = int(free[int(rng.integers(0, len(free)))])
    return out


def planted_mixture(space: CodewordSpace, rows: list[int], weights=None, rng: RngStream | None = None) -> np.ndarray:
    """Plant codeword ``rows[i]`` on the i-th block of a random partition of the domain."""
    n = space.domain.order
    r = len(rows)
    if r == 0:
        raise ValueError("need at least one codeword")
    if weights is None:
        sizes = [n // r + (1 if i < n % r else 0) for i in range(r)]
    else:
        w = [Fraction(x) for x in weights]
        tot = sum(w)
        sizes = [math.floor(x / tot * n) for x in w]
        for i in range(n - sum(sizes)):
            sizes[i % r] += 1
    perm = rng.permutation(n) if rng is not None else np.arange(n)
    out = np.empty(n, dtype=np.int64)
    start = 0
    table = space.table()
    for row, s in zip(rows, sizes):
        pts = perm[start : start + s]
        out[pts] = table[row, pts]
        start += s
    return out


def random_function(space: CodewordSpace, rng: RngStream) -> QueryFunction:
    return FunctionGenerator("random").generate(space, rng)


# ---------------------------------------------------------------------------
# moment sums


def agreements(f: QueryFunction, space: CodewordSpace) -> list[Fraction]:
    n = space.domain.order
    return [Fraction(int(c), n) for c in agreement_counts(f, space)]


def moment_sum(f: QueryFunction, space: CodewordSpace, k: int) -> Fraction:
    """``sum_phi agr(f, phi)^k``, exact."""
    n = space.domain.order
    return Fraction(sum(int(c) ** k for c in agreement_counts(f, space)), n**k)


def moment_expectation(f: QueryFunction, space: CodewordSpace, k: int) -> Fraction:
    """``E_{xs ~ G^k}[1{f(xs) in image} N(xs)]`` by tuple enumeration."""
    res = tuple_scan(space, k, f, restrict=False)
    return Fraction(res.pass_all, res.tuples)


def verify_moment_identity(f: QueryFunction, space: CodewordSpace, k: int) -> tuple[bool, Fraction, Fraction]:
    lhs, rhs = moment_sum(f, space, k), moment_expectation(f, space, k)
    return lhs == rhs, lhs, rhs


# ---------------------------------------------------------------------------
# sandwich and containment


def verify_max_agreement_sandwich(f: QueryFunction, space: CodewordSpace, k_range, kind: str | None = None, method: str = "scan") -> dict:
    """Moment-ratio and theorem-interval checks on ``max agr`` for each k.

    For every k the report records whether ``max agr >= M_{k+1}/M_k`` and,
    where a theorem applies, whether ``max agr`` lies between the bounds
    evaluated at the exact pass probability.
    """
    from .procedures import default_kind

    kind = kind or default_kind(space)
    mx = max(agreements(f, space))
    rows = []
    ok = True
    for k in k_range:
        mk, mk1 = moment_sum(f, space, k), moment_sum(f, space, k + 1)
        ratio_ok = mk == 0 or mx >= mk1 / mk
        spec = TestSpec(kind, space, k)
        delta = delta_exact(spec, f, method=method).value
        bnd, why = theorem_bounds_or_none(spec, delta)
        row = {
            "k": k,
            "max_agreement": B.fraction_text(mx),
            "delta": B.fraction_text(delta),
            "ratio_ok": ratio_ok,
        }
        if bnd is not None:
            row.update(bnd.as_dict())
            row["contained"] = bnd.contains(mx)
            ok &= row["contained"]
        else:
            row["bounds_unavailable"] = why
        ok &= ratio_ok
        rows.append(row)
    return {"function": f.label, "space": space.text(), "ok": ok, "rows": rows}


def shifted_moment(f: QueryFunction, space: CodewordSpace, k: int) -> Fraction:
    """``sum_phi ((q agr - 1)/(q - 1))^k`` over linear maps ``GF(q)^n -> GF(q)``."""
    q = space.codomain.q
    return sum(((q * a - 1) / Fraction(q - 1)) ** k for a in agreements(f, space))


def verify_shifted_moment(f: QueryFunction, space: CodewordSpace, k: int) -> Fraction:
    """Gap between the shifted moment and ``(q delta_k - 1)/(q - 1)``, exact.

    ``delta_k`` is the exact pass probability over the level-k distribution.
    At k = 1 that distribution is the single tuple ``(0,)``, so the test passes
    iff ``f(0) = 0``.
    """
    q = space.codomain.q
    if k == 1:
        delta = Fraction(int(f.idx[space.domain.identity_index()] == space.codomain.identity_index()))
    else:
        delta = delta_exact(TestSpec("vspace", space, k), f).value
    return abs(shifted_moment(f, space, k) - (q * delta - 1) / Fraction(q - 1))


# ---------------------------------------------------------------------------
# list decoding


@dataclass
class ListDecodeReport:
    epsilon: Fraction
    codewords: list[str]
    bound: Fraction
    bound_id: str
    satisfied: bool
    bound_two: Fraction | None = None
    satisfied_two: bool | None = None

    def as_dict(self) -> dict:
        out = {
            "epsilon": B.fraction_text(self.epsilon),
            "size": len(self.codewords),
            "list": self.codewords,
            "bound": B.fraction_text(self.bound),
            "bound_float": float(self.bound),
            "bound_id": self.bound_id,
            "satisfied": self.satisfied,
        }
        if self.bound_two is not None:
            out["bound_two_over_eps_sq"] = B.fraction_text(self.bound_two)
            out["satisfied_two_over_eps_sq"] = self.satisfied_two
        return out


def list_size_cap(space: CodewordSpace, eps) -> tuple[Fraction, str]:
    """The family's list-size bound at ``eps``."""
    G, H = space.domain, space.codomain
    if space.kind != "hom" or not isinstance(G, Cyclic):
        raise Unsupported("list-size bounds are stated for cyclic domains")
    fac = prime_factorization(G.n)
    if len(fac) == 1:
        p = next(iter(fac))
        t = sum(1 for m in H.moduli() if m % p == 0)
        return B.list_size_bound(p, t, eps), "prime-power"
    return B.list_size_bound_general(eps), "general-cyclic"


def list_decode(f: QueryFunction, space: CodewordSpace, epsilon) -> ListDecodeReport:
    """All codewords with ``agr >= epsilon``, by exhaustive scan, and the bound check."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    n = space.domain.order
    counts = agreement_counts(f, space)
    hits = [space.codewords[i].text() for i in np.flatnonzero(counts * eps.denominator >= eps.numerator * n)]
    bound, bid = list_size_cap(space, eps)
    two = B.list_size_bound_two(eps) if isinstance(space.codomain, Cyclic) else None
    return ListDecodeReport(
        eps,
        hits,
        bound,
        bid,
        len(hits) <= bound,
        two,
        None if two is None else len(hits) <= two,
    )


# ---------------------------------------------------------------------------
# decomposition and automorphism identities


def verify_eta_decomposition(space: CodewordSpace, k: int, fs) -> bool:
    """``sum agr^k = eta E_{G_k}[1 N] + (1 - eta) |Hom| / |H|^k`` for each f."""
    H = space.codomain
    eta, _ = eta_k(space, k=k)
    tail = (1 - eta) * Fraction(space.size, H.order**k)
    for f in fs:
        res = tuple_scan(space, k, f, restrict=True)
        head = Fraction(res.pass_kept, res.kept) if res.kept else Fraction(0)
        if eta != Fraction(res.kept, res.tuples):
            return False
        if moment_sum(f, space, k) != eta * head + tail:
            return False
    return True


def verify_aut_inner_identities(space: CodewordSpace, k: int, fs) -> dict[str, bool]:
    """Moment identity per f, fixed-point duality and the closed forms.

    ``fix_duality`` compares ``sum_phi |Fix phi|^k`` with the tuple sum of
    stabilizer sizes.  For inner automorphisms the closed form is the
    conjugacy-class formula.
    """
    G: Group = space.domain
    out = {"moment_identity": all(verify_moment_identity(f, space, k)[0] for f in fs)}
    by_tuples = tuple_scan(space, k, restrict=False).weight_all
    by_codewords = sum(c**k for c in fix_counts(space))
    out["fix_duality"] = by_tuples == by_codewords
    if space.kind == "inn":
        out["centralizer_scan"] = trho_centralizer_scan(G, k) == by_tuples
        out["closed_form"] = trho_class_formula(G, k) == by_tuples
    elif isinstance(G, Dihedral):
        out["closed_form"] = rho_k_dihedral(G.p, k) == by_tuples
    return out


def verify_lift_consistency(space: CodewordSpace, k_range, fs_base, rng: RngStream, samples: int = 1000) -> dict:
    """Kernel equality, the gamma product rule and pass-probability push-forward."""
    if space.kind != "lift":
        raise Unsupported("lift consistency needs a lifted space")
    proj, base = space.projection, space.base_space
    Gt = space.domain
    report = {"kernel_equal": True, "gamma_rule": True, "pushforward": True, "rows": []}
    for k in k_range:
        lctx, bctx = EvalMapCtx(space, k), EvalMapCtx(base, k)
        for _ in range(samples):
            xs = tuple(Gt.element_at(int(i)) for i in rng.integers(0, Gt.order, size=k))
            if kernel_size_at(lctx, xs) != kernel_size_at(bctx, tuple(proj(x) for x in xs)):
                report["kernel_equal"] = False
                break
        direct = gamma_k_bruteforce(space, k=k, cross_check=False)
        rule = lift_gamma(proj.kernel_size(), gamma_k_bruteforce(base, k=k, cross_check=False), k)
        report["gamma_rule"] &= direct == rule
        mismatches = 0
        for g in fs_base:
            f = lift_function(space, g)
            d_lift = delta_exact(TestSpec("ker", space, k), f).value
            d_base = delta_exact(TestSpec("ker", base, k), g).value
            mismatches += d_lift != d_base
        report["pushforward"] &= mismatches == 0
        report["rows"].append({"k": k, "gamma_direct": direct, "gamma_rule": rule, "pushforward_mismatches": mismatches})
    report["ok"] = report["kernel_equal"] and report["gamma_rule"] and report["pushforward"]
    return report


def lift_function(space: CodewordSpace, g: QueryFunction) -> QueryFunction:
    """``iota o g o pi`` as a query function on the lifted space."""
    proj, inj = space.projection, space.inclusion
    G = space.domain
    Hs = inj.source
    pidx = np.array([proj.target.index(proj(x)) for x in G.elements()], dtype=np.int64)
    iidx = np.array([inj.target.index(inj(y)) for y in Hs.elements()], dtype=np.int64)
    return QueryFunction(G, inj.target, iidx[g.idx[pidx]], f"lift({g.label})")


# ---------------------------------------------------------------------------
# exploratory search


def blr_pass_probability(f: np.ndarray, n: int, m: int) -> Fraction:
    """``Pr_{x,y}[f(x) + f(y) = f(x + y)]`` for ``f: Z_n -> Z_m`` as a table."""
    x = np.arange(n)
    lhs = (f[:, None] + f[None, :]) % m
    rhs = f[(x[:, None] + x[None, :]) % n]
    return Fraction(int(np.count_nonzero(lhs == rhs)), n * n)


def bclr_search(r: int, rng: RngStream, steps: int = 2000) -> dict:
    """Exploratory local search for ``f: Z_{3^r} -> Z_{3^(r-1)}`` passing the
    two-query linearity check often while staying far from every homomorphism.

    The objective is the pass probability, subject to ``max agr <= 3^-(r-1)``.
    Failure to reach any particular value says nothing about the library.
    """
    n, m = 3**r, 3 ** (r - 1)
    G, H = Cyclic(n), Cyclic(m)
    from .homs import hom_space

    space = hom_space(G, H)
    table = space.table()
    limit = Fraction(1, m)

    def feasible(f):
        return Fraction(int((table == f[None, :]).sum(axis=1).max()), n) <= limit

    f = rng.integers(0, m, size=n)
    while not feasible(f):
        f = rng.integers(0, m, size=n)
    best = blr_pass_probability(f, n, m)
    for _ in range(steps):
        g = f.copy()
        g[int(rng.integers(0, n))] = int(rng.integers(0, m))
        if not feasible(g):
            continue
        val = blr_pass_probability(g, n, m)
        if val >= best:
            f, best = g, val
    max_agr = Fraction(int((table == f[None, :]).sum(axis=1).max()), n)
    return {
        "r": r,
        "exploratory": True,
        "pass_probability": B.fraction_text(best),
        "max_agreement": B.fraction_text(max_agr),
        "target_pass": "7/9",
        "reached": best >= Fraction(7, 9),
        "function": [int(v) for v in f],
    }


__all__ = [
    "FunctionGenerator",
    "ListDecodeReport",
    "agreements",
    "bclr_search",
    "blr_pass_probability",
    "corrupt_row",
    "lift_function",
    "list_decode",
    "list_size_cap",
    "moment_expectation",
    "moment_sum",
    "planted_mixture",
    "random_function",
    "shifted_moment",
    "verify_aut_inner_identities",
    "verify_eta_decomposition",
    "verify_lift_consistency",
    "verify_max_agreement_sandwich",
    "verify_moment_identity",
    "verify_shifted_moment",
]
