"""The six test procedures, exact and Monte Carlo pass probabilities, and
per-theorem soundness bounds.

A :class:`TestSpec` fixes the codeword space, the test kind and the arity.
``run_trial`` samples one tuple and runs the membership check,
``delta_exact`` sums the pass indicator over the whole weighted support and
``delta_mc`` estimates it from seeded trials with a 99% Wilson interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from . import bounds as B
from . import kernels
from .engine import (
    EvalMapCtx,
    image_membership,
    query_bits,
    rho_k_dihedral,
    trho_class_formula,
    tuple_scan,
)
from .errors import OutOfTheoremRange, TooLarge, Unsupported
from .fields import prime_factorization
from .groups import Cyclic, Dihedral, Extraspecial, GeneralLinear, LieGL, Symmetric, VectorSpace
from .homs import CodewordSpace, QueryFunction, agreement_counts, nonzero_mask
from .samplers import (
    CyclicKernelSampler,
    RngStream,
    VSpaceTables,
    WeightedTupleTable,
    base_vspace,
    build_dker_table,
    build_stab_table,
    enumerate_Rk,
    sample_lifted_Rk,
    sample_nonzero,
    sample_vspace_test_tuple,
    to_vspace_elem,
)
from .settings import check_cap, enumeration_cap

KINDS = ("ker", "vspace", "nonzero", "dihedral", "inner", "liftedvspace")

# two-sided 99% normal quantile
Z99 = NormalDist().inv_cdf(0.995)


@dataclass
class TestSpec:
    """One test: kind, codeword space, arity and sampler variant."""

    __test__ = False  # not a pytest class

    kind: str
    space: CodewordSpace
    k: int
    relaxed: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise Unsupported(f"unknown test kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        sp = self.space
        need = {
            "ker": ("hom", "lift"),
            "vspace": ("hom",),
            "nonzero": ("hom",),
            "dihedral": ("aut",),
            "inner": ("inn",),
            "liftedvspace": ("lift",),
        }[self.kind]
        if sp.kind not in need:
            raise Unsupported(f"test {self.kind} needs a {'/'.join(need)} space, got {sp.kind}")
        G, H = sp.domain, sp.codomain
        if self.kind == "vspace":
            if not (isinstance(G, VectorSpace) and isinstance(H, VectorSpace) and H.n == 1 and G.q == H.q):
                raise Unsupported("the vector-space test runs on GF(q)^n -> GF(q)")
            if self.k < 2 or self.k - 1 > G.n:
                raise Unsupported(f"k={self.k} needs 2 <= k <= n+1 = {G.n + 1}")
        if self.kind == "nonzero":
            if not (isinstance(G, VectorSpace) and isinstance(H, VectorSpace) and G.n == 1 and G.q == H.q):
                raise Unsupported("the nonzero test runs on GF(q) -> GF(q)^n")
        if self.kind == "liftedvspace":
            q, n = base_vspace(sp.projection.target)
            if not sp.inclusion.is_isomorphism:
                raise Unsupported("the lifted vector-space test needs an isomorphic inclusion")
            base_vspace(sp.base_space.codomain)
            if self.k < 2 or self.k - 1 > n:
                raise Unsupported(f"k={self.k} needs 2 <= k <= n+1 = {n + 1}")

    @property
    def ctx(self) -> EvalMapCtx:
        return EvalMapCtx(self.space, self.k)

    def text(self) -> str:
        return f"{self.kind}[{self.space.text()}, k={self.k}{', relaxed' if self.relaxed else ''}]"

    # --- lazily built samplers ------------------------------------------
    def weighted_table(self) -> WeightedTupleTable | None:
        if "table" not in self._cache:
            try:
                if self.kind == "ker":
                    self._cache["table"] = build_dker_table(self.ctx)
                else:
                    self._cache["table"] = build_stab_table(self.space, self.k)
            except TooLarge:
                self._cache["table"] = None
        return self._cache["table"]

    def cyclic_sampler(self) -> CyclicKernelSampler | None:
        G = self.space.domain
        if self.kind == "ker" and self.space.kind == "hom" and isinstance(G, Cyclic):
            if "cyclic" not in self._cache:
                self._cache["cyclic"] = CyclicKernelSampler(G.n, self.space.codomain, self.k)
            return self._cache["cyclic"]
        return None

    def vtables(self) -> VSpaceTables:
        if "vt" not in self._cache:
            if self.kind == "liftedvspace":
                q, n = base_vspace(self.space.projection.target)
            else:
                q, n = self.space.domain.q, self.space.domain.n
            self._cache["vt"] = VSpaceTables(q, n)
        return self._cache["vt"]


@dataclass
class DeltaEstimate:
    mode: str
    value: Fraction | float
    ci_low: float | None = None
    ci_high: float | None = None
    trials: int | None = None
    passes: int | None = None
    method: str = ""

    def as_dict(self) -> dict:
        if self.mode == "exact":
            v = Fraction(self.value)
            return {"mode": "exact", "method": self.method, "delta": B.fraction_text(v), "delta_float": float(v)}
        return {
            "mode": "mc",
            "delta": self.value,
            "ci": [self.ci_low, self.ci_high],
            "trials": self.trials,
            "passes": self.passes,
        }


# ---------------------------------------------------------------------------
# single trials


def draw_tuple(spec: TestSpec, rng: RngStream):
    """One tuple from the test's distribution, plus coefficients where relevant."""
    G = spec.space.domain
    if spec.kind in ("ker", "dihedral", "inner"):
        table = spec.weighted_table()
        if table is not None:
            idx = table.sample_indices(rng, 1)[0]
            return tuple(G.element_at(int(i)) for i in idx), None
        cyc = spec.cyclic_sampler()
        if cyc is None:
            raise TooLarge(f"no exact sampler for {spec.text()} within the cap")
        return cyc.sample(rng), None
    if spec.kind == "vspace":
        q, n = G.q, G.n
        return sample_vspace_test_tuple(q, n, spec.k, rng, relaxed=spec.relaxed, tables=spec.vtables())
    if spec.kind == "nonzero":
        return tuple((v,) for v in sample_nonzero(G.q, spec.k, rng)), None
    if spec.kind == "liftedvspace":
        xs, a, _ = sample_lifted_Rk(spec.space.projection, spec.k, rng, tables=spec.vtables())
        return xs, a
    raise Unsupported(spec.kind)  # pragma: no cover


def check_tuple(spec: TestSpec, f: QueryFunction, xs, a=None, via_membership: bool = False) -> bool:
    """The test predicate on a drawn tuple.

    The vector-space and nonzero tests use their algebraic forms unless
    ``via_membership`` asks for the generic image-membership check.
    """
    sp = spec.space
    ys = [f(x) for x in xs]
    if spec.kind in ("vspace", "liftedvspace") and not via_membership:
        H = sp.codomain
        F = spec.vtables().F
        vals = [to_vspace_elem(H, y)[0] for y in ys]
        s = 0
        for c, v in zip(a, vals[:-1]):
            s = int(F.add[s, F.mul[c, v]])
        return s == vals[-1]
    if spec.kind == "nonzero" and not via_membership:
        F = sp.domain.field
        ratios = {tuple(int(F.mul[F.inv[x[0]], c]) for c in y) for x, y in zip(xs, ys)}
        return len(ratios) == 1
    return image_membership(EvalMapCtx(sp, len(xs)), xs, ys) is not None


def run_trial(spec: TestSpec, f: QueryFunction, rng: RngStream, via_membership: bool = False) -> bool:
    xs, a = draw_tuple(spec, rng)
    return check_tuple(spec, f, xs, a, via_membership)


# ---------------------------------------------------------------------------
# exact pass probability


def _check_pair(spec: TestSpec, f: QueryFunction) -> None:
    if f.domain != spec.space.domain or f.codomain != spec.space.codomain:
        raise Unsupported(f"function {f.domain.text()}->{f.codomain.text()} does not fit {spec.space.text()}")


def moment_route_available(spec: TestSpec) -> bool:
    """True when no tuple is excluded, so ``delta = sum c^k / sum N^k``.

    That holds for the stabilizer tests and for the kernel test whenever the
    codeword count is below ``|H|^k`` (no evaluation map can be onto).
    """
    sp = spec.space
    if spec.kind in ("dihedral", "inner"):
        return True
    return spec.kind == "ker" and sp.size < sp.codomain.order**spec.k


def delta_from_moments(spec: TestSpec, f: QueryFunction) -> Fraction:
    """``sum_phi c_phi^k / sum_phi N_phi^k`` with ``c_phi`` the agreement count
    with f and ``N_phi`` the agreement count with the reference codeword."""
    if not moment_route_available(spec):
        raise Unsupported(f"{spec.text()} excludes tuples; the moment route does not apply")
    sp, k = spec.space, spec.k
    c = agreement_counts(f, sp)
    t = sp.table()
    ref = (t == sp.reference_row()[None, :]).sum(axis=1)
    return Fraction(sum(int(v) ** k for v in c), sum(int(v) ** k for v in ref))


def delta_exact(spec: TestSpec, f: QueryFunction, method: str = "scan") -> DeltaEstimate:
    """Exact pass probability.

    ``method="scan"`` enumerates the whole weighted support.  ``"moment"``
    uses the codeword-side sum instead (see :func:`delta_from_moments`), and
    ``"auto"`` scans when the support fits the enumeration cap and falls back
    to the moment route otherwise.
    """
    _check_pair(spec, f)
    sp, k = spec.space, spec.k
    if method not in ("scan", "moment", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        small = sp.domain.order**k <= enumeration_cap()
        method = "scan" if small or not moment_route_available(spec) else "moment"
    if method == "moment":
        return DeltaEstimate("exact", delta_from_moments(spec, f), method="moment")
    if spec.kind == "ker":
        res = tuple_scan(sp, k, f, restrict=True)
        return DeltaEstimate("exact", Fraction(res.pass_kept, res.weight_kept), method="scan")
    if spec.kind in ("dihedral", "inner"):
        res = tuple_scan(sp, k, f, restrict=False)
        return DeltaEstimate("exact", Fraction(res.pass_all, res.weight_all), method="scan")
    if spec.kind == "nonzero":
        allowed = np.flatnonzero(nonzero_mask(sp.domain))
        res = tuple_scan(sp, k, f, allowed=allowed, restrict=False)
        if res.weight_all != res.tuples:  # pragma: no cover - kernels are trivial here
            raise AssertionError("nonzero tuples must have trivial kernel")
        return DeltaEstimate("exact", Fraction(res.pass_all, res.tuples), method="scan")
    if spec.kind == "vspace":
        return DeltaEstimate("exact", _delta_vspace(spec, f), method="scan")
    if spec.kind == "liftedvspace":
        return DeltaEstimate("exact", _delta_lifted_vspace(spec, f), method="scan")
    raise Unsupported(spec.kind)  # pragma: no cover


def _delta_vspace(spec: TestSpec, f: QueryFunction) -> Fraction:
    T = spec.vtables()
    F, q, k = T.F, T.q, spec.k
    fv = f.idx  # codomain GF(q)^1 indices are the field values
    if not spec.relaxed:
        total, passes = kernels.rk_pass_count(T.add, T.smul, F.add, F.mul, fv, q, k)
        return Fraction(passes, total)
    size = q**T.n
    check_cap(size ** (k - 1) * (q - 1) ** (k - 1), f"relaxed support of {spec.text()}")
    grids = np.indices((size,) * (k - 1)).reshape(k - 1, -1)
    total = passes = 0
    from itertools import product

    for a in product(range(1, q), repeat=k - 1):
        s = np.zeros(grids.shape[1], dtype=np.int64)
        t = np.zeros(grids.shape[1], dtype=np.int64)
        for c, xi in zip(a, grids):
            s = T.add[s, T.smul[c, xi]]
            t = F.add[t, F.mul[c, fv[xi]]]
        total += len(s)
        passes += int(np.sum(fv[s] == t))
    return Fraction(passes, total)


def _delta_lifted_vspace(spec: TestSpec, f: QueryFunction) -> Fraction:
    """Average over base test tuples of the fiber-averaged pass probability."""
    sp, k = spec.space, spec.k
    proj, H = sp.projection, sp.codomain
    T = spec.vtables()
    q, F = T.q, T.F
    # counts[y, h]: points of the fiber over y where f takes field value h
    counts = np.zeros((q**T.n, q), dtype=object)
    target = proj.target
    for i, x in enumerate(sp.domain.elements()):
        counts[_vindex(T, target, proj(x)), to_vspace_elem(H, H.element_at(int(f.idx[i])))[0]] += 1
    K = proj.kernel_size()
    X, A = enumerate_Rk(q, T.n, k, T)
    num = 0
    for xs, a in zip(X.tolist(), A.tolist()):
        dist = np.zeros(q, dtype=object)
        dist[0] = 1
        for c, xi in zip(a, xs[:-1]):
            new = np.zeros(q, dtype=object)
            for s in range(q):
                if dist[s] == 0:
                    continue
                for h in range(q):
                    if counts[xi, h]:
                        new[int(F.add[s, F.mul[c, h]])] += dist[s] * counts[xi, h]
            dist = new
        num += int(sum(dist[h] * counts[xs[-1], h] for h in range(q)))
    return Fraction(num, len(X) * K**k)


def _vindex(T: VSpaceTables, target, y) -> int:
    return T.V.index(to_vspace_elem(target, y))


# ---------------------------------------------------------------------------
# Monte Carlo


def wilson_interval(passes: int, trials: int, z: float = Z99) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = passes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    lo = 0.0 if passes == 0 else max(0.0, centre - half)
    hi = 1.0 if passes == trials else min(1.0, centre + half)
    return lo, hi


def _batch_passes(spec: TestSpec, f: QueryFunction, rng: RngStream, n: int) -> int | None:
    """Vectorized pass count for table-backed and nonzero tests (None if unavailable)."""
    sp = spec.space
    if spec.kind in ("ker", "dihedral", "inner"):
        table = spec.weighted_table()
        if table is None:
            return None
        if "fbits" not in spec._cache or spec._cache["fbits"][0] is not f:
            spec._cache["fbits"] = (f, query_bits(sp, f))
        fb = spec._cache["fbits"][1]
        idx = table.sample_indices(rng, n)
        acc = fb[idx[:, 0]]
        for j in range(1, spec.k):
            acc = acc & fb[idx[:, j]]
        return int(np.count_nonzero((acc != 0).any(axis=1)))
    if spec.kind == "nonzero":
        G, H = sp.domain, sp.codomain
        F = G.field
        ratio = np.zeros(G.order, dtype=np.int64)
        for i, x in enumerate(G.elements()):
            if x[0]:
                y = H.element_at(int(f.idx[i]))
                ratio[i] = H.index(tuple(int(F.mul[F.inv[x[0]], c]) for c in y))
        xs = rng.integers(1, G.q, size=(n, spec.k))  # nonzero field values = element indices
        r = ratio[xs]
        return int(np.count_nonzero((r == r[:, :1]).all(axis=1)))
    return None


def delta_mc(spec: TestSpec, f: QueryFunction, trials: int, rng: RngStream, batch: int = 1 << 16) -> DeltaEstimate:
    """Pass-rate estimate with a 99% Wilson interval; deterministic under the seed."""
    _check_pair(spec, f)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    passes = 0
    done = 0
    fast = spec.kind == "nonzero" or (spec.kind in ("ker", "dihedral", "inner") and spec.weighted_table() is not None)
    while done < trials:
        m = min(batch, trials - done)
        if fast:
            passes += _batch_passes(spec, f, rng, m)
        else:
            passes += sum(run_trial(spec, f, rng) for _ in range(m))
        done += m
    lo, hi = wilson_interval(passes, trials)
    return DeltaEstimate("mc", passes / trials, lo, hi, trials, passes)


# ---------------------------------------------------------------------------
# soundness bounds


def inner_parameters(G) -> tuple[int, str]:
    """``(tau, theorem_id)`` for the inner-automorphism bound of a family."""
    if isinstance(G, Symmetric):
        return 3, "inner-symmetric"
    if isinstance(G, Extraspecial):
        return G.r + 1, "inner-extraspecial"
    return 2, "inner-generic"


def inner_constant(G, tau: int, k: int) -> Fraction:
    """``min_{tau <= i <= k} trho_i / (|G| trho_{i-1})``, exact."""
    vals = [trho_class_formula(G, i) for i in range(tau - 1, k + 1)]
    return min(Fraction(vals[j + 1], G.order * vals[j]) for j in range(len(vals) - 1))


def _prime_power(n: int) -> tuple[int, int] | None:
    fac = prime_factorization(n)
    if len(fac) != 1:
        return None
    return next(iter(fac.items()))


def soundness_bounds(spec: TestSpec, delta) -> B.Bounds:
    """Theorem interval for ``max agr`` at pass probability ``delta``.

    Raises :class:`OutOfTheoremRange` when k is outside the theorem's range and
    :class:`Unsupported` when no theorem covers the instance.
    """
    sp, k = spec.space, spec.k
    d = Fraction(delta)
    if spec.kind == "ker":
        if sp.kind == "lift":
            Gt = sp.domain
            if isinstance(Gt, GeneralLinear) and sp.projection.name == "det":
                return B.general_cyclic(k, d, "gl-group-characters")
            if isinstance(Gt, LieGL) and sp.projection.name == "trace":
                return B.gl_lie(Gt.field.p, k, d)
            base = TestSpec("ker", sp.base_space, k)
            out = soundness_bounds(base, d)
            return B.Bounds(out.lower, out.upper, "lifted:" + out.theorem_id)
        G, H = sp.domain, sp.codomain
        if not isinstance(G, Cyclic):
            raise Unsupported("no soundness theorem for the kernel test on a non-cyclic domain")
        pp = _prime_power(G.n)
        if pp is not None:
            p, _ = pp
            t = sum(1 for m in H.moduli() if m % p == 0)
            if t == 0:
                raise Unsupported(f"{H.text()} has trivial {p}-component")
            return B.bounded_rank_cyclic(p, t, k, d)
        if isinstance(H, Cyclic):
            return B.general_cyclic(k, d)
        raise Unsupported("no soundness theorem for a composite cyclic domain into a non-cyclic group")
    if spec.kind == "vspace":
        return B.vector_space(sp.domain.q, k, d)
    if spec.kind == "liftedvspace":
        q, _ = base_vspace(sp.projection.target)
        out = B.vector_space(q, k, d)
        return B.Bounds(out.lower, out.upper, "lifted-vector-space")
    if spec.kind == "nonzero":
        return B.field_to_space(sp.domain.q, k, d)
    if spec.kind == "dihedral":
        D: Dihedral = sp.domain
        return B.dihedral(k, d, rho_k_dihedral(D.p, k), D.order)
    if spec.kind == "inner":
        G = sp.domain
        tau, tid = inner_parameters(G)
        if k < tau:
            raise OutOfTheoremRange(f"k={k} must be at least tau={tau}")
        c = inner_constant(G, tau, k)
        return B.inner(k, d, tau, c, trho_class_formula(G, k), G.order, tid)
    raise Unsupported(spec.kind)  # pragma: no cover


def theorem_bounds_or_none(spec: TestSpec, delta) -> tuple[B.Bounds | None, str | None]:
    """Bounds plus an explanation when they are unavailable."""
    try:
        return soundness_bounds(spec, delta), None
    except (OutOfTheoremRange, Unsupported) as exc:
        return None, str(exc)


def max_agreement(spec: TestSpec, f: QueryFunction) -> Fraction:
    """Exact ``max_phi agr(f, phi)`` over the whole domain."""
    counts = agreement_counts(f, spec.space)
    return Fraction(int(counts.max()), spec.space.domain.order)


def test_distribution_size(spec: TestSpec) -> int:
    """Number of tuples the exact computation visits (for cap planning)."""
    G = spec.space.domain
    if spec.kind == "vspace":
        q, n, k = G.q, G.n, spec.k
        return math.prod(q**n - q**t for t in range(k - 1)) * (q - 1) ** (k - 1)
    return G.order**spec.k


def default_kind(space: CodewordSpace) -> str:
    G, H = space.domain, space.codomain
    if space.kind == "aut":
        return "dihedral"
    if space.kind == "inn":
        return "inner"
    if space.kind == "lift":
        return "ker"
    if isinstance(G, VectorSpace) and isinstance(H, VectorSpace) and G.q == H.q:
        if H.n == 1 and G.n > 1:
            return "vspace"
        if G.n == 1:
            return "nonzero"
    return "ker"


__all__ = [
    "DeltaEstimate",
    "TestSpec",
    "check_tuple",
    "default_kind",
    "delta_exact",
    "delta_from_moments",
    "delta_mc",
    "draw_tuple",
    "inner_constant",
    "inner_parameters",
    "max_agreement",
    "moment_route_available",
    "run_trial",
    "soundness_bounds",
    "theorem_bounds_or_none",
    "wilson_interval",
]
