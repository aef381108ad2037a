"""Acceptance criteria 1-11.

Each test records its verdict in ``conftest.ACCEPTANCE`` and prints one
``criterion N: PASS|FAIL`` line; the terminal summary repeats them.
"""

from __future__ import annotations

import json
import math
import time
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from homtest import bounds as B
from homtest.campaign import row_cap, run_campaign
from homtest.config import parse_config, parse_space
from homtest.engine import (
    binom_collapse_check,
    gamma_k_bruteforce,
    gamma_k_closed_cyclic,
    gamma_k_multiplicative,
    lift_gamma,
    rho_k_bruteforce,
    rho_k_dihedral,
    rho_k_tuplesum,
    trho_centralizer_scan,
    trho_class_formula,
    trho_extraspecial,
    zeta_partial_product,
)
from homtest.groups import Cyclic, Dihedral, Extraspecial, Symmetric, parse_group
from homtest.homs import QueryFunction, aut_space
from homtest.oracles import FunctionGenerator, list_decode, verify_lift_consistency, verify_moment_identity
from homtest.procedures import TestSpec, default_kind, delta_exact, max_agreement, theorem_bounds_or_none
from homtest.samplers import RngStream, relation_census, relation_level_count, tv_exact_relaxed
from homtest.suite import dumps, matrix_csv, run_suite, shifted_residuals, suite_summary, sym_slack

from conftest import ACCEPTANCE

pytestmark = pytest.mark.acceptance

SEED = 20240601


def record(n: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE[n] = (status, detail)
    print(f"criterion {n}: {status}  {detail}")
    assert ok, f"criterion {n}: {detail}"


def test_criterion_01_moment_identity():
    t0 = time.perf_counter()
    spaces = ["Z/4->Z/4", "Z/8->Z/2", "Z/9->Z/3", "Z/6->Z/6", "V(2,2)->F2", "V(3,2)->F3"]
    bad = []
    checked = 0
    for si, text in enumerate(spaces):
        sp = parse_space(text)
        rng = RngStream(SEED, (1, si))
        fs = [FunctionGenerator("random").generate(sp, rng.split(i)) for i in range(100)]
        for k in range(1, 5):
            for i, f in enumerate(fs):
                ok, lhs, rhs = verify_moment_identity(f, sp, k)
                checked += 1
                if not ok:
                    bad.append((text, k, i, str(lhs), str(rhs)))
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 120, f"{checked} exact identities, {len(bad)} mismatches, {dt:.1f}s (budget 120s)")


def _criterion2_grid():
    codomains = [(b,) for b in (1, 2, 3)] + list(combinations_with_replacement((1, 2, 3), 2))
    for p in (2, 3, 5):
        for r in (1, 2, 3):
            for bs in codomains:
                yield p, r, bs


# the largest grid point, Z/125 -> Z/125+Z/125, has a 1.95M-entry evaluation table
GRID_CAP = 2_000_000


def _group_of(p, bs):
    return parse_group("+".join(f"Z/{p**b}" for b in bs))


@row_cap(GRID_CAP)
def test_criterion_02_gamma_closed_form():
    bad = []
    n = 0
    for p, r, bs in _criterion2_grid():
        G, H = Cyclic(p**r), _group_of(p, bs)
        for k in range(1, 7):
            brute = gamma_k_bruteforce(G, H, k)
            n += 1
            if gamma_k_closed_cyclic(p, r, list(bs), k) != brute or gamma_k_multiplicative(G, H, k) != brute:
                bad.append((p, r, bs, k))
    named = (gamma_k_bruteforce(Cyclic(4), Cyclic(4), 2), gamma_k_bruteforce(Cyclic(6), Cyclic(6), 2))
    mult_bad = []
    for m in (6, 12, 36):
        for k in range(1, 7):
            whole = gamma_k_bruteforce(Cyclic(m), Cyclic(m), k)
            parts = math.prod(
                gamma_k_bruteforce(Cyclic(p**e), Cyclic(p**e), k)
                for p, e in _factor(m)
            )
            if whole != parts or gamma_k_multiplicative(Cyclic(m), Cyclic(m), k) != whole:
                mult_bad.append((m, k))
    ok = not bad and not mult_bad and named == (22, 55)
    record(2, ok, f"{n} grid instances, {len(bad)} closed-form mismatches; gamma_2 = {named}; "
                  f"multiplicativity mismatches {len(mult_bad)}")


def _factor(m):
    out, p = [], 2
    while m > 1:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    return out


def _zeta_ok(n: int, g: int, k: int) -> bool:
    """``n^k <= g`` and ``g <= n^k z^2`` for the exact prime partial product
    and for the outward-rounded full zeta(k-1)."""
    _, z_hi = B.zeta_bounds(k - 1)
    part = zeta_partial_product(n, k - 1)
    return n**k <= g <= n**k * part**2 <= n**k * z_hi**2


@row_cap(GRID_CAP)
def test_criterion_03_gamma_sandwich_and_zeta():
    bad = []
    n_rank = n_zeta = 0
    for p, r, bs in _criterion2_grid():
        G, H = Cyclic(p**r), _group_of(p, bs)
        t = len(bs)
        for k in range(1, 7):
            g = gamma_k_bruteforce(G, H, k, cross_check=False)
            if k > t:
                n_rank += 1
                lo = (1 - Fraction(1, p**k)) * p ** (k * r)
                hi = Fraction(p ** (k - t), p ** (k - t) - 1) * p ** (k * r)
                if not lo <= g <= hi:
                    bad.append(("rank", p, r, bs, k))
            if t == 1 and k >= 3:
                n_zeta += 1
                if not _zeta_ok(G.order, g, k):
                    bad.append(("zeta", p, r, bs, k))
    # composite cyclic pairs for the zeta side
    for n_ in (6, 12, 36):
        for m in (6, 12, 36):
            for k in range(3, 7):
                n_zeta += 1
                g = gamma_k_bruteforce(Cyclic(n_), Cyclic(m), k, cross_check=False)
                if not _zeta_ok(n_, g, k):
                    bad.append(("zeta", n_, m, k))
    record(3, not bad, f"{n_rank} rank-t sandwiches, {n_zeta} zeta bounds, {len(bad)} violations")


COMPLETENESS = [
    ("Z/27->Z/9", "ker", (2, 3, 4)),
    ("Z/8->Z/4", "ker", (2, 3, 4)),
    ("Z/12->Z/6", "ker", (2, 3, 4)),
    ("Z/6->Z/6", "ker", (2, 3)),
    ("Z/4->Z/2+Z/2", "ker", (2, 3)),
    ("Z/8->Z/2+Z/4", "ker", (2, 3)),
    ("Z/25->Z/5+Z/5", "ker", (2, 3)),
    ("V(2,3)->F2", "vspace", (2, 3, 4)),
    ("V(3,2)->F3", "vspace", (2, 3)),
    ("V(2,3)->F2", "ker", (2, 3)),
    ("F3->V(3,2)", "nonzero", (2, 3)),
    ("F5->V(5,2)", "nonzero", (2, 3, 4)),
    ("D(5)", "dihedral", (2, 3, 4)),
    ("D(7)", "dihedral", (3,)),
    ("Inn(S(3))", "inner", (2, 3, 4)),
    ("Inn(S(4))", "inner", (3,)),
    ("Inn(H(3))", "inner", (2, 4)),
    ("GL(2,3)->F3*", "ker", (2, 3)),
    ("gl(2,3)->F3", "ker", (2, 3)),
    ("gl(2,3)->F3", "liftedvspace", (2,)),
    ("Z/9-mod(3)->Z/3", "ker", (2, 3)),
]


def test_criterion_04_completeness():
    bad = []
    n = 0
    families = set()
    for text, kind, ks in COMPLETENESS:
        sp = parse_space(text)
        families.add((type(sp.domain).__name__, sp.kind, kind))
        for k in ks:
            spec = TestSpec(kind, sp, k)
            for c in range(sp.size):
                n += 1
                if delta_exact(spec, QueryFunction.from_row(sp, c), method="scan").value != 1:
                    bad.append((text, kind, k, sp.codewords[c].text()))
    record(4, not bad, f"{n} (codeword, k) pairs over {len(families)} families, {len(bad)} with delta != 1")


SOUNDNESS = [
    ("Z/27->Z/9", (4, 5, 6)),
    ("V(2,5)->F2", (3, 5)),
    ("F5->V(5,2)", (2, 3, 4)),
    ("D(5)", (3, 4)),
    ("Inn(S(5))", (3, 4)),
    ("Inn(H(3))", (4, 5)),
]


def test_criterion_05_soundness_containment():
    t0 = time.perf_counter()
    misses = []
    n = 0
    for si, (text, ks) in enumerate(SOUNDNESS):
        sp = parse_space(text)
        kind = default_kind(sp)
        for ai, a in enumerate((Fraction(3, 10), Fraction(1, 2), Fraction(4, 5))):
            gen = FunctionGenerator("corrupt", (sp.codewords[1].text(),), a)
            f = gen.generate(sp, RngStream(SEED, (5, si, ai)))
            for k in ks:
                spec = TestSpec(kind, sp, k)
                delta = delta_exact(spec, f, method="scan").value
                bnd, why = theorem_bounds_or_none(spec, delta)
                assert bnd is not None, why
                mx = max_agreement(spec, f)
                n += 1
                if not bnd.contains(mx):
                    misses.append(f"{text} alpha={a} k={k}: max={mx} not in "
                                  f"[{float(bnd.lower):.4f}, {float(bnd.upper):.4f}]")
    dt = time.perf_counter() - t0
    detail = f"{n - len(misses)}/{n} contained, {dt:.1f}s (budget 600s)"
    if misses:
        detail += "; misses: " + "; ".join(misses)
    record(5, not misses and dt < 600, detail)


def test_criterion_06_list_size():
    eps_grid = [Fraction(1, m) for m in range(9, 1, -1)]
    violations = []
    n = 0
    largest = 0
    for si, (text, p) in enumerate((("Z/27->Z/27", 3), ("Z/25->Z/25", 5))):
        sp = parse_space(text)
        rng = RngStream(SEED, (6, si))
        fs = [FunctionGenerator("random").generate(sp, rng.split(i)) for i in range(500)]
        mix_rng = rng.split(10**6)
        for j in range(20):
            r = 2 + j % 4
            rows = [int(v) for v in mix_rng.split(j).choice(sp.size, size=r, replace=False)]
            gen = FunctionGenerator("mix", tuple(sp.codewords[i].text() for i in rows))
            fs.append(gen.generate(sp, mix_rng.split(1000 + j)))
        for f in fs:
            for e in eps_grid:
                rep = list_decode(f, sp, e)
                n += 1
                largest = max(largest, len(rep.codewords))
                cap = Fraction(p, p - 1) / e**2
                if len(rep.codewords) > cap or rep.bound != cap:
                    violations.append((text, f.label, str(e), len(rep.codewords)))
    record(6, not violations, f"{n} (f, eps) checks, largest list {largest}, {len(violations)} violations")


def test_criterion_07_rho_dihedral():
    bad = []
    for p in (5, 7, 11):
        sp = aut_space(Dihedral(p))
        for k in range(2, 6):
            closed = rho_k_dihedral(p, k)
            if closed != rho_k_bruteforce(sp, k):
                bad.append(("scan", p, k))
            if (2 * p) ** k <= 10**7 and closed != rho_k_tuplesum(sp, k):
                bad.append(("tuples", p, k))
            if not p**k * ((p - 1) + 2**k) <= closed <= p**k * ((p - 1) + 2 ** (k + 1)):
                bad.append(("sandwich", p, k))
    r2 = rho_k_dihedral(5, 2)
    record(7, not bad and r2 == 260, f"12 (p, k) pairs, rho_2(D_10) = {r2}, {len(bad)} mismatches")


def test_criterion_08_trho():
    bad = []
    for n in (3, 4, 5, 6):
        S = Symmetric(n)
        for k in (2, 3, 4):
            if trho_class_formula(S, k) != trho_centralizer_scan(S, k):
                bad.append((f"S{n}", k))
    for p in (3, 5):
        E = Extraspecial(p, 3)
        for k in (2, 3, 4):
            v = trho_class_formula(E, k)
            if v != trho_centralizer_scan(E, k) or v != trho_extraspecial(E, k):
                bad.append((f"H{p}", k))
            if Fraction(v, E.order**k) != 1 + Fraction(p**2 - 1, p**k):
                bad.append((f"H{p} ratio", k))
    h3 = trho_class_formula(Extraspecial(3, 3), 2)
    dec = all(sym_slack(4, k) > sym_slack(5, k) > sym_slack(6, k) for k in (2, 3))
    record(8, not bad and h3 == 1377 and dec,
           f"trho_2(H_3) = {h3}, S_n slack decreasing: {dec}, {len(bad)} mismatches")


def test_criterion_09_lifting():
    rows = []
    ok = True
    for si, (text, base_gamma_expect) in enumerate((("GL(2,3)->F3*", 2880), ("gl(2,3)->F3", 8019))):
        sp = parse_space(text)
        K = sp.projection.kernel_size()
        by_rule = lift_gamma(K, gamma_k_bruteforce(sp.base_space, k=2), 2)
        direct = gamma_k_bruteforce(sp, k=2, cross_check=True)
        rng = RngStream(SEED, (9, si))
        base = sp.base_space
        fs = [FunctionGenerator("random").generate(base, rng.split(i)) for i in range(40)]
        fs += [FunctionGenerator("corrupt", (base.codewords[-1].text(),), Fraction(a, 10)).generate(base, rng.split(100 + a))
               for a in range(10)]
        rep = verify_lift_consistency(sp, (2, 3), fs, rng.split(999), samples=300)
        ok &= by_rule == direct == base_gamma_expect and rep["ok"]
        mism = sum(r["pushforward_mismatches"] for r in rep["rows"])
        rows.append(f"{text}: rule {by_rule}, scan {direct}, {len(fs)} lifted f, {mism} push-forward mismatches")
    record(9, ok, "; ".join(rows))


def test_criterion_10_vector_space():
    t0 = time.perf_counter()
    bad = []
    for k in range(1, 13):
        for j in range(k):
            if binom_collapse_check(k, j) != 0:
                bad.append(("binomial", k, j))
    for q in (2, 3):
        for n in (2, 3):
            census = relation_census(q, n, 3)
            for j in (1, 2, 3):
                if census[j] != relation_level_count(q, n, 3, j):
                    bad.append(("census", q, n, j))
    res = shifted_residuals(2, range(3, 8), 3)
    ratios = [a / b for a, b in zip(res, res[1:])]
    if not all(Fraction(3, 2) <= r <= 3 for r in ratios):
        bad.append(("shifted", [str(r) for r in ratios]))
    tvs = []
    for n in range(3, 7):
        tv = tv_exact_relaxed(2, n, 3)
        tvs.append(tv)
        if tv > Fraction(4, 2**n):
            bad.append(("tv", n, str(tv)))
    dt = time.perf_counter() - t0
    ratio_text = ", ".join(f"{float(r):.3f}" for r in ratios)
    record(10, not bad and dt < 300,
           f"shifted ratios [{ratio_text}], TV {[str(t) for t in tvs]}, {len(bad)} problems, {dt:.1f}s (budget 300s)")


REPRO_CONFIG = """\
default seed=3 mode=exact
space=Z/27->Z/9 k=4,5 gen=corrupt(0.6) count=3 eps=1/3,1/2
space=D(5) k=3 gen=random count=2
space=Inn(S(4)) k=3 gen=mix(inn:(1 2),inn:(1 2 3))
space=Z/12->Z/6 k=3 gen=random mode=mc(3000) count=2
space=F5->V(5,2) k=3 gen=corrupt(1/2) mode=mc(2000)
"""


def test_criterion_11_reproducibility():
    a = run_suite("all", None, SEED, 1)
    b = run_suite("all", None, SEED, 4)
    ja = dumps(suite_summary(a, SEED, None, "all"))
    jb = dumps(suite_summary(b, SEED, None, "all"))
    same_suite = ja == jb and matrix_csv(a) == matrix_csv(b)
    cfg = parse_config(REPRO_CONFIG)
    ca = json.dumps(run_campaign(cfg, workers=1).as_dict(), indent=2, sort_keys=True)
    cb = json.dumps(run_campaign(cfg, workers=3).as_dict(), indent=2, sort_keys=True)
    suite_ok = suite_summary(a, SEED, None, "all")["ok"]
    record(11, same_suite and ca == cb and suite_ok,
           f"suite JSON {len(ja)} bytes identical: {ja == jb}; campaign JSON identical: {ca == cb}; "
           f"suite all PASS: {suite_ok}")
