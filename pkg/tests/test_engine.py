import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homtest.engine import (
    EvalMapCtx,
    binom_collapse_check,
    constants_report,
    eta_k,
    gamma_k_bruteforce,
    gamma_k_closed_cyclic,
    gamma_k_multiplicative,
    image_membership,
    image_membership_scan,
    kernel_size_at,
    kernel_size_scan,
    lift_gamma,
    rho_k_bruteforce,
    rho_k_dihedral,
    rho_k_tuplesum,
    trho_k,
)
from homtest.groups import Cyclic, Dihedral, Extraspecial, GeneralLinear, LieGL, Symmetric, VectorSpace, parse_group
from homtest.homs import aut_space, hom_space, inn_space, lift_space, make_projection
from homtest.samplers import RngStream


def test_kernel_size_examples():
    ctx = EvalMapCtx(hom_space(Cyclic(4), Cyclic(4)), 2)
    assert kernel_size_at(ctx, (2, 2)) == 2
    S = Symmetric(3)
    ctx = EvalMapCtx(inn_space(S), 1)
    assert kernel_size_at(ctx, (S.parse_elem("(1 2 3)"),)) == 3 // 1


def test_kernel_size_vector_space_rank():
    V = VectorSpace(3, 3)
    ctx = EvalMapCtx(hom_space(V, VectorSpace(3, 1)), 2)
    x, y = V.element_at(1), V.element_at(3)
    assert kernel_size_at(ctx, (x, y)) == 3 ** (3 - 2)
    assert kernel_size_at(ctx, (x, x)) == 3 ** (3 - 1)


@pytest.mark.parametrize("space", ["Z/12->Z/6", "V(2,3)->V(2,2)", "D(5)", "S(4)", "ES(3,3)", "Z/4+Z/2->Z/4"])
def test_kernel_size_shortcut_matches_scan(space):
    from homtest.config import parse_space

    sp = parse_space(space)
    rng = RngStream(2)
    G = sp.domain
    for k in (1, 2, 3):
        ctx = EvalMapCtx(sp, k)
        for _ in range(30):
            xs = tuple(G.random_element(rng) for _ in range(k))
            assert kernel_size_at(ctx, xs) == kernel_size_scan(ctx, xs)


def test_image_membership_examples():
    ctx = EvalMapCtx(hom_space(Cyclic(9), Cyclic(3)), 2)
    w = image_membership(ctx, (1, 2), (1, 2))
    assert w is not None and w.text() == "mul:1"
    V = VectorSpace(2, 3)
    F = VectorSpace(2, 1)
    ctx = EvalMapCtx(hom_space(V, F), 3)
    x1, x2 = V.element_at(1), V.element_at(2)
    x3 = V.op(x1, x2)
    one = F.element_at(1)
    assert image_membership(ctx, (x1, x2, x3), (one, one, one)) is None
    S = Symmetric(4)
    c = S.parse_elem("(1 3)")
    xs = (S.parse_elem("(1 2)"), S.parse_elem("(3 4)"))
    ys = tuple(S.op(S.op(c, x), S.inv(c)) for x in xs)
    assert image_membership(EvalMapCtx(inn_space(S), 2), xs, ys) is not None


@pytest.mark.parametrize("space", ["Z/12->Z/6", "V(3,2)->V(3,1)", "D(5)", "S(4)", "Z/4+Z/2->Z/4"])
def test_image_membership_matches_scan(space):
    from homtest.config import parse_space

    sp = parse_space(space)
    rng = RngStream(3)
    G, H = sp.domain, sp.codomain
    for k in (1, 2, 3):
        ctx = EvalMapCtx(sp, k)
        for _ in range(30):
            xs = tuple(G.random_element(rng) for _ in range(k))
            ys = tuple(H.random_element(rng) for _ in range(k))
            assert (image_membership(ctx, xs, ys) is None) == (image_membership_scan(ctx, xs, ys) is None)


def test_gamma_examples():
    assert gamma_k_bruteforce(Cyclic(4), Cyclic(4), 2) == 22
    assert gamma_k_bruteforce(Cyclic(6), Cyclic(6), 2) == 55
    assert gamma_k_bruteforce(Cyclic(4), Cyclic(9), 2) == 16
    assert gamma_k_bruteforce(Cyclic(5), Cyclic(1), 3) == 125
    assert gamma_k_closed_cyclic(2, 2, [2], 2) == 22
    assert gamma_k_closed_cyclic(3, 1, [1], 2) == 11
    assert gamma_k_multiplicative(Cyclic(6), Cyclic(6), 2) == 5 * 11


@given(
    p=st.sampled_from([2, 3, 5]),
    r=st.integers(1, 3),
    bs=st.lists(st.integers(1, 3), min_size=1, max_size=2),
    k=st.integers(1, 6),
)
def test_gamma_closed_form_grid(p, r, bs, k):
    H = parse_group("+".join(f"Z/{p**b}" for b in bs))
    brute = gamma_k_bruteforce(Cyclic(p**r), H, k, cross_check=False)
    assert gamma_k_closed_cyclic(p, r, bs, k) == brute
    t = len(bs)
    lo = (1 - Fraction(1, p**k)) * p ** (k * r)
    assert lo <= brute
    if k > t:
        assert brute <= Fraction(p ** (k * r) * p ** (k - t), p ** (k - t) - 1)


def test_zeta_bound_on_gamma():
    from homtest.bounds import zeta_bounds

    for n in range(1, 37):
        for m in range(1, 37, 5):
            for k in (3, 4, 5):
                g = gamma_k_multiplicative(Cyclic(n), Cyclic(m), k)
                _, z = zeta_bounds(k - 1)
                assert n**k <= g <= n**k * z**2


def test_eta_values():
    assert eta_k(VectorSpace(2, 2), VectorSpace(2, 1), 2)[0] == Fraction(5, 8)
    for k in (2, 3, 4):
        assert eta_k(Cyclic(27), Cyclic(9), k)[0] == 1
    G = GeneralLinear(2, 3)
    sp = lift_space(G, make_projection("det", G), Cyclic(2))
    for k in (2, 3):
        assert eta_k(sp, k=k)[0] == 1


def test_rho_dihedral():
    assert rho_k_dihedral(5, 2) == 260
    sp = aut_space(Dihedral(5))
    assert rho_k_bruteforce(sp, 2) == rho_k_tuplesum(sp, 2) == 260
    for p in (5, 7, 11):
        for k in range(2, 6):
            assert rho_k_dihedral(p, k) == rho_k_bruteforce(aut_space(Dihedral(p)), k)


def test_trho_values():
    assert set(trho_k(Symmetric(3), 2).values()) == {66}
    vals = trho_k(Extraspecial(3, 3), 2)
    assert set(vals.values()) == {1377} and "closed-form" in vals
    assert Fraction(1377, 27**2) == Fraction(17, 9)


def test_lift_gamma():
    G = GeneralLinear(2, 3)
    sp = lift_space(G, make_projection("det", G), Cyclic(2))
    assert lift_gamma(24, 5, 2) == 2880 == gamma_k_bruteforce(sp, k=2)
    L = LieGL(2, 3)
    sp = lift_space(L, make_projection("trace", L), Cyclic(3))
    assert lift_gamma(27, 11, 2) == 8019 == gamma_k_bruteforce(sp, k=2, cross_check=False)
    Z = Cyclic(6)
    sp = lift_space(Z, make_projection("id", Z), Cyclic(6))
    assert gamma_k_bruteforce(sp, k=3) == gamma_k_bruteforce(Z, Cyclic(6), 3)


def test_binomial_collapse():
    assert binom_collapse_check(3, 1) == 0
    assert binom_collapse_check(12, 5) == 0
    assert all(binom_collapse_check(k, k) == 1 for k in range(1, 13))
    assert all(binom_collapse_check(k, j) == 0 for k in range(1, 13) for j in range(k))


def test_constants_report_rows():
    r = constants_report(hom_space(Cyclic(4), Cyclic(4)), 2)
    assert (r.gamma_k, r.eta_k_num, r.eta_k_den, r.elapsed_ms) == (22, 1, 1, None)
    r = constants_report(aut_space(Dihedral(5)), 2, timings=True)
    assert r.rho_k == 260 and r.elapsed_ms is not None
    r = constants_report(inn_space(Extraspecial(3, 3)), 2)
    assert r.trho_k == 1377
    assert math.isclose(Fraction(r.trho_k, 27**2), 17 / 9)
