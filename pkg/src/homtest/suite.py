"""The verification matrix: every oracle identity on every small instance.

Each check returns a :class:`CheckResult`.  :func:`run_suite` runs the
registered (identity, instance) pairs on a process pool and the results are
assembled in registry order, so the JSON summary and CSV matrix do not
depend on the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds as B
from .engine import (
    binom_collapse_check,
    eta_k,
    eta_k_multiplicative,
    gamma_k_bruteforce,
    gamma_k_multiplicative,
    p_component,
    rho_k_bruteforce,
    rho_k_dihedral,
    trho_class_formula,
    trho_extraspecial,
    trho_k,
)
from .errors import HomtestError
from .fields import prime_factorization
from .groups import Extraspecial, Symmetric
from .homs import CodewordSpace, QueryFunction, hom_space
from .oracles import (
    FunctionGenerator,
    agreements,
    list_decode,
    random_function,
    shifted_moment,
    verify_aut_inner_identities,
    verify_eta_decomposition,
    verify_lift_consistency,
    verify_moment_identity,
    verify_shifted_moment,
)
from .procedures import (
    TestSpec,
    default_kind,
    delta_exact,
    max_agreement,
    theorem_bounds_or_none,
)
from .samplers import (
    RngStream,
    relation_census,
    relation_level_count,
    tv_exact_relaxed,
    tv_exact_relaxed_formula,
)

ft = B.fraction_text


@dataclass
class CheckResult:
    identity: str
    instance: str
    ok: bool
    detail: dict = field(default_factory=dict)
    counterexample: dict | None = None
    skipped: str | None = None

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return "SKIP"
        return "PASS" if self.ok else "FAIL"

    def as_dict(self) -> dict:
        out = {"identity": self.identity, "instance": self.instance, "status": self.status, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.skipped is not None:
            out["reason"] = self.skipped
        return out


def _dump(f: QueryFunction) -> dict:
    return {"function": f.label, "values": [int(v) for v in f.idx]}


# ---------------------------------------------------------------------------
# individual checks


def check_moment_identity(space: CodewordSpace, ks, n_f: int, rng: RngStream) -> CheckResult:
    """``sum agr^k = E_{G^k}[1{f(x) in image} N(x)]`` for random f."""
    for k in ks:
        for i in range(n_f):
            f = random_function(space, rng.split(k * 100003 + i))
            ok, lhs, rhs = verify_moment_identity(f, space, k)
            if not ok:
                return CheckResult(
                    "moment_identity", space.text(), False, {"k": k},
                    {**_dump(f), "k": k, "lhs": ft(lhs), "rhs": ft(rhs)},
                )
    return CheckResult("moment_identity", space.text(), True, {"k": list(ks), "functions": n_f})


def check_gamma_closed_form(space: CodewordSpace, ks) -> CheckResult:
    """Closed (multiplicative, per-prime) gamma_k against the kernel-size sum."""
    G, H = space.domain, space.codomain
    vals = {}
    for k in ks:
        brute = gamma_k_bruteforce(space, k=k)
        closed = gamma_k_multiplicative(G, H, k)
        vals[str(k)] = brute
        if brute != closed:
            return CheckResult("gamma_closed_form", space.text(), False, {"k": k},
                               {"k": k, "brute": brute, "closed": closed})
    return CheckResult("gamma_closed_form", space.text(), True, {"gamma": vals})


def check_multiplicativity(space: CodewordSpace, ks) -> CheckResult:
    """gamma_k and eta_k against products over the p-components."""
    G, H = space.domain, space.codomain
    for k in ks:
        whole = gamma_k_bruteforce(space, k=k)
        parts = math.prod(
            gamma_k_bruteforce(p_component(G, p), p_component(H, p), k=k)
            for p in prime_factorization(G.order)
            if p_component(H, p) is not None
        )
        e_whole, _ = eta_k(space, k=k)
        e_parts = eta_k_multiplicative(G, H, k)
        if whole != parts or e_whole != e_parts:
            return CheckResult("multiplicativity", space.text(), False, {"k": k},
                               {"k": k, "gamma": whole, "gamma_parts": parts,
                                "eta": ft(e_whole), "eta_parts": ft(e_parts)})
    return CheckResult("multiplicativity", space.text(), True, {"k": list(ks)})


def sandwich_row(space: CodewordSpace, kind: str, k: int, f: QueryFunction, method: str = "auto") -> dict:
    """Exact delta, the moment ratio check and the theorem interval at one k."""
    mx = max_agreement(TestSpec(kind, space, k), f)
    ag = agreements(f, space)
    mk = sum(a**k for a in ag)
    mk1 = sum(a ** (k + 1) for a in ag)
    spec = TestSpec(kind, space, k)
    est = delta_exact(spec, f, method=method)
    bnd, why = theorem_bounds_or_none(spec, est.value)
    row = {
        "k": k,
        "delta": ft(est.value),
        "delta_method": est.method,
        "max_agreement": ft(mx),
        "ratio_ok": mk == 0 or mx >= mk1 / mk,
    }
    if bnd is None:
        row["bounds"] = None
        row["bounds_unavailable"] = why
        row["contained"] = None
    else:
        row["bounds"] = bnd.as_dict()
        row["contained"] = bnd.contains(mx)
    return row


def check_sandwich(space: CodewordSpace, ks, fs, kind: str | None = None, method: str = "auto") -> CheckResult:
    """Moment ratio and theorem containment for each f and k."""
    kind = kind or default_kind(space)
    rows = []
    for f in fs:
        for k in ks:
            row = sandwich_row(space, kind, k, f, method)
            rows.append(row)
            if not row["ratio_ok"] or row["contained"] is False:
                return CheckResult("sandwich", space.text(), False, {"checked": len(rows)}, {**_dump(f), **row})
    contained = sum(1 for r in rows if r["contained"])
    return CheckResult("sandwich", space.text(), True, {"rows": len(rows), "with_bounds": contained})


def check_list_size(space: CodewordSpace, eps_grid, fs) -> CheckResult:
    worst = Fraction(0)
    for f in fs:
        for eps in eps_grid:
            rep = list_decode(f, space, eps)
            worst = max(worst, Fraction(len(rep.codewords)) / rep.bound)
            if not rep.satisfied:
                return CheckResult("list_size", space.text(), False, {}, {**_dump(f), **rep.as_dict()})
    return CheckResult("list_size", space.text(), True,
                       {"functions": len(fs), "eps": [ft(e) for e in eps_grid], "max_size_over_bound": ft(worst)})


def check_eta_decomposition(space: CodewordSpace, ks, n_f: int, rng: RngStream) -> CheckResult:
    for k in ks:
        fs = [random_function(space, rng.split(k * 1000 + i)) for i in range(n_f)]
        if not verify_eta_decomposition(space, k, fs):
            return CheckResult("eta_decomposition", space.text(), False, {"k": k}, {"k": k})
    etas = {str(k): ft(eta_k(space, k=k)[0]) for k in ks}
    return CheckResult("eta_decomposition", space.text(), True, {"eta": etas, "functions": n_f})


def check_aut_inner(space: CodewordSpace, ks, n_f: int, rng: RngStream) -> CheckResult:
    for k in ks:
        fs = [random_function(space, rng.split(k * 1000 + i)) for i in range(n_f)]
        fs.append(QueryFunction.from_row(space, min(1, space.size - 1)))
        res = verify_aut_inner_identities(space, k, fs)
        if not all(res.values()):
            return CheckResult("aut_inner_identities", space.text(), False, {"k": k}, {"k": k, **res})
    return CheckResult("aut_inner_identities", space.text(), True, {"k": list(ks), "functions": n_f + 1})


def check_lift(space: CodewordSpace, ks, n_f: int, rng: RngStream, samples: int = 1000) -> CheckResult:
    gs = [random_function(space.base_space, rng.split(i)) for i in range(n_f)]
    rep = verify_lift_consistency(space, ks, gs, rng.split(10**6), samples)
    return CheckResult("lift_consistency", space.text(), rep["ok"], {"rows": rep["rows"]},
                       None if rep["ok"] else rep)


def quadratic_witness(space: CodewordSpace) -> QueryFunction:
    """``f(x) = x_1 x_2`` on GF(q)^n, the witness for the shifted-moment trend."""
    G, H = space.domain, space.codomain
    F = G.field
    idx = [int(F.mul[G.to_residues(x)[0], G.to_residues(x)[1]]) for x in G.elements()]
    return QueryFunction(G, H, idx, "x1*x2")


def shifted_residuals(q: int, ns, k: int) -> list[Fraction]:
    from .groups import VectorSpace

    out = []
    for n in ns:
        space = hom_space(VectorSpace(q, n), VectorSpace(q, 1))
        out.append(verify_shifted_moment(quadratic_witness(space), space, k))
    return out


def check_shifted_trend(q: int, ns, k: int, lo=Fraction(3, 2), hi=Fraction(3)) -> CheckResult:
    res = shifted_residuals(q, ns, k)
    ratios = [a / b for a, b in zip(res, res[1:])]
    ok = all(r != 0 for r in res) and all(lo <= r <= hi for r in ratios)
    detail = {"n": list(ns), "residual": [ft(r) for r in res], "ratio": [ft(r) for r in ratios]}
    return CheckResult("shifted_moment_trend", f"q={q},k={k}", ok, detail, None if ok else detail)


def check_shifted_linear(q: int, n: int, k: int) -> CheckResult:
    """For linear f the residual is the sum over the other codewords."""
    from .groups import VectorSpace

    space = hom_space(VectorSpace(q, n), VectorSpace(q, 1))
    f = QueryFunction.from_row(space, 1)
    res = verify_shifted_moment(f, space, k)
    others = abs(shifted_moment(f, space, k) - 1)
    ok = res == others
    return CheckResult("shifted_moment_linear", f"V({q},{n}),k={k}", ok, {"residual": ft(res)})


def check_binomial(kmax: int = 12) -> CheckResult:
    bad = [(j, k) for k in range(1, kmax + 1) for j in range(k) if binom_collapse_check(k, j) != 0]
    return CheckResult("binomial_collapse", f"k<={kmax}", not bad, {"pairs": kmax * (kmax + 1) // 2},
                       {"pairs": bad} if bad else None)


def check_census(q: int, n: int, k: int) -> CheckResult:
    census = relation_census(q, n, k)
    formula = {str(j): relation_level_count(q, n, k, j) for j in range(1, k + 1)}
    counted = {str(j): census.get(j, 0) for j in range(1, k + 1)}
    ok = formula == counted
    detail = {"enumerated": counted, "formula": formula, "full": census.get("full", 0), "low": census.get("low", 0)}
    return CheckResult("relation_census", f"q={q},n={n},k={k}", ok, detail, None if ok else detail)


def check_tv(q: int, n: int, k: int) -> CheckResult:
    tv = tv_exact_relaxed(q, n, k)
    formula = tv_exact_relaxed_formula(q, n, k)
    cap = Fraction(4, q**n)
    ok = tv == formula and tv <= cap
    return CheckResult("tv_relaxed", f"q={q},n={n},k={k}", ok,
                       {"tv": ft(tv), "formula": ft(formula), "cap": ft(cap)})


def check_completeness(space: CodewordSpace, kind: str, ks) -> CheckResult:
    for k in ks:
        spec = TestSpec(kind, space, k)
        for c in range(space.size):
            f = QueryFunction.from_row(space, c)
            d = delta_exact(spec, f).value
            if d != 1:
                return CheckResult("completeness", space.text(), False, {"k": k},
                                   {**_dump(f), "k": k, "delta": ft(d)})
    return CheckResult("completeness", space.text(), True, {"test": kind, "k": list(ks), "codewords": space.size})


def dihedral_sandwich_ok(p: int, k: int, rho: int) -> bool:
    return p**k * ((p - 1) + 2**k) <= rho <= p**k * ((p - 1) + 2 ** (k + 1))


def check_rho_dihedral(space: CodewordSpace, ks) -> CheckResult:
    p = space.domain.p
    vals = {}
    for k in ks:
        scan, closed = rho_k_bruteforce(space, k), rho_k_dihedral(p, k)
        vals[str(k)] = closed
        if scan != closed or not dihedral_sandwich_ok(p, k, closed):
            return CheckResult("rho_dihedral", space.text(), False, {"k": k},
                               {"k": k, "scan": scan, "closed": closed})
    return CheckResult("rho_dihedral", space.text(), True, {"rho": vals})


def check_trho(space: CodewordSpace, ks) -> CheckResult:
    G = space.domain
    vals = {}
    for k in ks:
        try:
            paths = trho_k(G, k)
        except AssertionError as exc:
            return CheckResult("trho", space.text(), False, {"k": k}, {"k": k, "error": str(exc)})
        v = next(iter(paths.values()))
        vals[str(k)] = {"value": v, "paths": sorted(paths)}
        if isinstance(G, Extraspecial):
            ratio = Fraction(v, G.order**k)
            expect = 1 + Fraction(G.p ** (G.r - 1) - 1, G.p**k)
            if ratio != expect or trho_extraspecial(G, k) != v:
                return CheckResult("trho", space.text(), False, {"k": k},
                                   {"k": k, "ratio": ft(ratio), "expected": ft(expect)})
    return CheckResult("trho", space.text(), True, {"trho": vals})


def sym_slack(n: int, k: int) -> Fraction:
    return Fraction(trho_class_formula(Symmetric(n), k), math.factorial(n) ** k) - 1


def check_sym_slack(ns, ks) -> CheckResult:
    detail, ok = {}, True
    for k in ks:
        s = [sym_slack(n, k) for n in ns]
        detail[str(k)] = [ft(v) for v in s]
        ok &= all(a > b for a, b in zip(s, s[1:]))
    return CheckResult("sym_slack_decreasing", f"n={','.join(map(str, ns))}", ok, detail, None if ok else detail)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Task:
    identity: str
    instance: str
    order: int
    func: str
    kwargs: tuple = ()


def _space(text: str) -> CodewordSpace:
    from .config import parse_space

    return parse_space(text)


def _fs(space: CodewordSpace, n: int, rng: RngStream) -> list[QueryFunction]:
    out = [random_function(space, rng.split(i)) for i in range(n)]
    if space.size > 1:
        for j, a in enumerate(("3/10", "1/2", "4/5")):
            gen = FunctionGenerator("corrupt", (space.codewords[1].text(),), Fraction(a))
            out.append(gen.generate(space, rng.split(10**6 + j)))
    return out


def _run_task(task: Task, seed: int, index: int) -> CheckResult:
    rng = RngStream(seed, (index,))
    kw = dict(task.kwargs)
    try:
        if task.func == "binomial":
            return check_binomial(**kw)
        if task.func == "census":
            return check_census(**kw)
        if task.func == "tv":
            return check_tv(**kw)
        if task.func == "shifted_trend":
            return check_shifted_trend(**kw)
        if task.func == "shifted_linear":
            return check_shifted_linear(**kw)
        if task.func == "sym_slack":
            return check_sym_slack(**kw)
        space = _space(task.instance)
        ks = kw.pop("ks")
        if task.func == "moment":
            return check_moment_identity(space, ks, kw.get("n_f", 20), rng)
        if task.func == "gamma":
            return check_gamma_closed_form(space, ks)
        if task.func == "mult":
            return check_multiplicativity(space, ks)
        if task.func == "sandwich":
            return check_sandwich(space, ks, _fs(space, kw.get("n_f", 10), rng))
        if task.func == "listsize":
            fs = _fs(space, kw.get("n_f", 20), rng)
            fs += [FunctionGenerator("mix", tuple(h.text() for h in space.codewords[1:4])).generate(space, rng.split(7))]
            return check_list_size(space, [Fraction(1, 9), Fraction(2, 9), Fraction(1, 3), Fraction(1, 2)], fs)
        if task.func == "eta":
            return check_eta_decomposition(space, ks, kw.get("n_f", 10), rng)
        if task.func == "autinner":
            return check_aut_inner(space, ks, kw.get("n_f", 5), rng)
        if task.func == "lift":
            return check_lift(space, ks, kw.get("n_f", 5), rng, samples=200)
        if task.func == "complete":
            return check_completeness(space, kw.get("kind") or default_kind(space), ks)
        if task.func == "rho":
            return check_rho_dihedral(space, ks)
        if task.func == "trho":
            return check_trho(space, ks)
    except HomtestError as exc:
        return CheckResult(task.identity, task.instance, True, skipped=f"{type(exc).__name__}: {exc}")
    raise ValueError(f"unknown task {task.func}")  # pragma: no cover


def _t(identity: str, instance: str, order: int, func: str, **kw) -> Task:
    return Task(identity, instance, order, func, tuple(sorted(kw.items())))


REGISTRY: list[Task] = [
    *[_t("moment_identity", s, o, "moment", ks=(1, 2, 3, 4)) for s, o in
      [("Z/4->Z/4", 4), ("Z/8->Z/2", 8), ("Z/9->Z/3", 9), ("Z/6->Z/6", 6), ("V(2,2)->F2", 4), ("V(3,2)->F3", 9)]],
    _t("moment_identity", "D(5)", 10, "moment", ks=(2, 3)),
    _t("moment_identity", "Inn(S(4))", 24, "moment", ks=(2, 3)),
    *[_t("gamma_closed_form", s, o, "gamma", ks=tuple(range(1, 7))) for s, o in
      [("Z/4->Z/4", 4), ("Z/6->Z/6", 6), ("Z/8->Z/4+Z/2", 8), ("Z/9->Z/9+Z/3", 9), ("Z/25->Z/5", 25),
       ("Z/27->Z/27+Z/9", 27), ("Z/125->Z/25", 125)]],
    *[_t("multiplicativity", s, o, "mult", ks=(1, 2, 3)) for s, o in
      [("Z/6->Z/6", 6), ("Z/12->Z/12", 12), ("Z/36->Z/36", 36)]],
    _t("sandwich", "Z/27->Z/9", 27, "sandwich", ks=(3, 4, 5)),
    _t("sandwich", "Z/8->Z/8", 8, "sandwich", ks=(3, 4, 5)),
    _t("sandwich", "Z/25->Z/5+Z/5", 25, "sandwich", ks=(4, 5)),
    _t("sandwich", "Z/12->Z/6", 12, "sandwich", ks=(4, 5)),
    _t("sandwich", "D(5)", 10, "sandwich", ks=(3, 4)),
    _t("sandwich", "Inn(S(4))", 24, "sandwich", ks=(3, 4)),
    _t("sandwich", "F5->V(5,2)", 5, "sandwich", ks=(2, 3, 4)),
    _t("list_size", "Z/27->Z/27", 27, "listsize", ks=()),
    _t("list_size", "Z/25->Z/25", 25, "listsize", ks=()),
    _t("eta_decomposition", "V(2,2)->F2", 4, "eta", ks=(1, 2, 3)),
    _t("eta_decomposition", "V(3,2)->F3", 9, "eta", ks=(2, 3)),
    _t("eta_decomposition", "Z/4->Z/4", 4, "eta", ks=(1, 2)),
    _t("aut_inner_identities", "D(5)", 10, "autinner", ks=(2, 3)),
    _t("aut_inner_identities", "D(7)", 14, "autinner", ks=(2, 3)),
    _t("aut_inner_identities", "Inn(S(4))", 24, "autinner", ks=(2, 3)),
    _t("aut_inner_identities", "Inn(H(3))", 27, "autinner", ks=(2, 3)),
    _t("lift_consistency", "GL(2,3)->F3*", 48, "lift", ks=(2, 3)),
    _t("lift_consistency", "gl(2,3)->F3", 81, "lift", ks=(2, 3)),
    _t("lift_consistency", "Z/8-mod(4)->Z/4", 8, "lift", ks=(2, 3)),
    *[_t("completeness", s, o, "complete", ks=ks) for s, o, ks in
      [("Z/8->Z/4", 8, (2, 3, 4)), ("Z/6->Z/6", 6, (2, 3)), ("Z/4->Z/2+Z/2", 4, (2, 3)),
       ("V(2,3)->F2", 8, (2, 3, 4)), ("F3->V(3,2)", 3, (2, 3)), ("D(5)", 10, (3, 4)),
       ("Inn(S(4))", 24, (3,)), ("Inn(H(3))", 27, (4,)), ("GL(2,3)->F3*", 48, (2, 3)),
       ("gl(2,3)->F3", 81, (2, 3))]],
    _t("completeness", "gl(2,3)->F3", 81, "complete", ks=(2,), kind="liftedvspace"),
    *[_t("rho_dihedral", f"D({p})", 2 * p, "rho", ks=(2, 3, 4, 5)) for p in (5, 7, 11)],
    *[_t("trho", f"Inn(S({n}))", math.factorial(n), "trho", ks=(2, 3)) for n in (3, 4, 5)],
    _t("trho", "Inn(H(3))", 27, "trho", ks=(2, 3, 4)),
    _t("trho", "Inn(H(5))", 125, "trho", ks=(2, 3)),
    _t("sym_slack_decreasing", "n=4,5,6", 720, "sym_slack", ns=(4, 5, 6), ks=(2, 3)),
    _t("binomial_collapse", "k<=12", 1, "binomial", kmax=12),
    *[_t("relation_census", f"q={q},n={n},k=3", q**n, "census", q=q, n=n, k=3) for q in (2, 3) for n in (2, 3)],
    *[_t("tv_relaxed", f"q=2,n={n},k=3", 2**n, "tv", q=2, n=n, k=3) for n in (3, 4, 5, 6)],
    _t("shifted_moment_trend", "q=2,k=3", 128, "shifted_trend", q=2, ns=(3, 4, 5, 6, 7), k=3),
    _t("shifted_moment_linear", "V(2,4),k=3", 16, "shifted_linear", q=2, n=4, k=3),
]

IDENTITIES = tuple(dict.fromkeys(t.identity for t in REGISTRY))


def select_tasks(suite: str = "all", max_order: int | None = None) -> list[tuple[int, Task]]:
    """Registry entries matching ``suite`` (``all`` or comma-separated identities)."""
    wanted = None if suite == "all" else set(suite.split(","))
    if wanted is not None:
        unknown = wanted - set(IDENTITIES)
        if unknown:
            raise ValueError(f"unknown identities: {', '.join(sorted(unknown))}")
    return [
        (i, t) for i, t in enumerate(REGISTRY)
        if (wanted is None or t.identity in wanted) and (max_order is None or t.order <= max_order)
    ]


def _worker(args):
    index, task, seed = args
    return _run_task(task, seed, index)


def run_suite(suite: str = "all", max_order: int | None = None, seed: int = 0, workers: int = 1) -> list[CheckResult]:
    tasks = select_tasks(suite, max_order)
    jobs = [(i, t, seed) for i, t in tasks]
    if workers <= 1:
        return [_worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_worker, jobs))


def suite_summary(results: list[CheckResult], seed: int, max_order: int | None, suite: str) -> dict:
    counts = {s: sum(1 for r in results if r.status == s) for s in ("PASS", "FAIL", "SKIP")}
    return {
        "suite": suite,
        "seed": seed,
        "max_order": max_order,
        "counts": counts,
        "ok": counts["FAIL"] == 0,
        "results": [r.as_dict() for r in results],
        "counterexamples": [r.as_dict() for r in results if r.status == "FAIL"],
    }


def matrix_csv(results: list[CheckResult]) -> str:
    """Pass/fail matrix with one row per instance and one column per identity."""
    identities = list(dict.fromkeys(r.identity for r in results))
    instances = list(dict.fromkeys(r.instance for r in results))
    cell = {(r.instance, r.identity): r.status for r in results}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", *identities])
    for inst in instances:
        w.writerow([inst, *(cell.get((inst, i), "") for i in identities)])
    return buf.getvalue()


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


__all__ = [
    "CheckResult",
    "IDENTITIES",
    "REGISTRY",
    "check_aut_inner",
    "check_binomial",
    "check_census",
    "check_completeness",
    "check_eta_decomposition",
    "check_gamma_closed_form",
    "check_lift",
    "check_list_size",
    "check_moment_identity",
    "check_multiplicativity",
    "check_rho_dihedral",
    "check_sandwich",
    "check_shifted_linear",
    "check_shifted_trend",
    "check_sym_slack",
    "check_tv",
    "check_trho",
    "dihedral_sandwich_ok",
    "dumps",
    "matrix_csv",
    "quadratic_witness",
    "run_suite",
    "sandwich_row",
    "select_tasks",
    "shifted_residuals",
    "suite_summary",
    "sym_slack",
]
