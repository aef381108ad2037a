from fractions import Fraction

import numpy as np
import pytest

from homtest.groups import Cyclic, Dihedral, Extraspecial, GeneralLinear, LieGL, Symmetric, VectorSpace, parse_group
from homtest.homs import (
    QueryFunction,
    agreement,
    agreement_counts,
    agreement_nonzero,
    aut_fix_count,
    aut_space,
    enumerate_aut_dihedral,
    enumerate_homs,
    enumerate_inner,
    enumerate_lifthom,
    hom_apply,
    hom_count,
    hom_kernel_size,
    hom_space,
    inn_space,
    is_homomorphism,
    lift_space,
    make_projection,
    parse_hom,
    shifted_agreement,
    sym_centralizer_size,
)
from homtest.samplers import RngStream


def test_cyclic_hom_counts():
    assert len(enumerate_homs(Cyclic(4), Cyclic(4))) == 4
    assert len(enumerate_homs(Cyclic(27), Cyclic(9))) == 9
    assert len(enumerate_homs(Cyclic(6), Cyclic(6))) == 6
    assert hom_count(Cyclic(4), Cyclic(9)) == 1


@pytest.mark.parametrize("G,H", [("Z/6", "Z/4"), ("Z/4+Z/2", "Z/4"), ("V(2,2)", "V(2,1)"), ("Z/8", "Z/2+Z/4")])
def test_homs_are_homomorphisms(G, H):
    G, H = parse_group(G), parse_group(H)
    homs = enumerate_homs(G, H)
    assert len(homs) == hom_count(G, H)
    pairs = [(a, b) for a in G.elements() for b in G.elements()]
    assert all(is_homomorphism(h, pairs) for h in homs)
    # distinct as functions
    rows = {tuple(hom_apply(h, x) for x in G.elements()) for h in homs}
    assert len(rows) == len(homs)


def test_dihedral_automorphisms():
    auts = enumerate_aut_dihedral(5)
    assert len(auts) == 20
    D = Dihedral(5)
    for a in auts:
        assert sorted(a(x) for x in D.elements()) == sorted(D.elements())
    ident = [a for a in auts if a.l == 1 and a.m == 0][0]
    assert all(ident(x) == x for x in D.elements())
    phi = [a for a in auts if a.l == 2 and a.m == 1][0]
    assert phi((1, 0)) == (2, 0)
    assert phi((0, 1)) == D.op((0, 1), (1, 0))


def test_dihedral_fix_counts():
    p = 5
    for a in enumerate_aut_dihedral(p):
        scan = aut_fix_count(a)
        if (a.l, a.m) == (1, 0):
            assert scan == 2 * p
        elif a.l != 1:
            assert scan == 2
        else:
            assert scan == p
        assert scan == a.fix_count_closed()


def test_inner_counts():
    assert len(enumerate_inner(Symmetric(3))) == 6
    assert len(enumerate_inner(Extraspecial(3, 3))) == 9
    assert len(enumerate_inner(Cyclic(7))) == 1


def test_inner_preserves_cycle_type():
    S = Symmetric(3)

    def ctype(x):
        seen, out = set(), []
        for i in range(len(x)):
            if i not in seen:
                j, n = i, 0
                while j not in seen:
                    seen.add(j)
                    j = x[j]
                    n += 1
                out.append(n)
        return sorted(out)

    for h in enumerate_inner(S):
        for x in S.elements():
            assert ctype(h(x)) == ctype(x)


def test_centralizer_sizes_s5():
    S = Symmetric(5)
    cent = S.centralizer_sizes()
    for i, x in enumerate(S.elements()):
        seen, ct = set(), []
        for s in range(5):
            if s not in seen:
                j, n = s, 0
                while j not in seen:
                    seen.add(j)
                    j = x[j]
                    n += 1
                ct.append(n)
        assert sym_centralizer_size(sorted(ct, reverse=True)) == cent[i]


def test_lifted_characters():
    G = GeneralLinear(2, 3)
    assert len(enumerate_lifthom(G, make_projection("det", G), Cyclic(2))) == 2
    L = LieGL(2, 3)
    assert len(enumerate_lifthom(L, make_projection("trace", L), Cyclic(3))) == 3
    Z9 = Cyclic(9)
    sp = lift_space(Z9, make_projection("mod", Z9, 3), Cyclic(3))
    full = hom_space(Z9, Cyclic(3))
    assert {tuple(r) for r in sp.table()} == {tuple(r) for r in full.table()}


def test_apply_and_kernel():
    sp = hom_space(Cyclic(4), Cyclic(4))
    h = parse_hom("mul:2", sp)
    assert hom_apply(h, 3) == 2
    assert hom_kernel_size(h) == 2


def test_agreement_functions():
    sp = hom_space(Cyclic(4), Cyclic(4))
    h = parse_hom("mul:1", sp)
    f = QueryFunction.from_hom(h)
    assert agreement(f, h) == 1
    zero = QueryFunction(sp.domain, sp.codomain, [0, 0, 0, 0])
    assert [agreement(zero, c) for c in sp.codewords] == [1, Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]
    assert list(agreement_counts(zero, sp)) == [4, 1, 2, 1]
    V = hom_space(VectorSpace(5, 1), VectorSpace(5, 2))
    hv = V.codewords[7]
    assert agreement_nonzero(QueryFunction.from_hom(hv), hv) == 1


def test_shifted_agreement_random_near_zero():
    sp = hom_space(VectorSpace(2, 6), VectorSpace(2, 1))
    rng = RngStream(9)
    f = QueryFunction(sp.domain, sp.codomain, rng.integers(0, 2, size=64))
    vals = [shifted_agreement(f, h, 2) for h in sp.codewords]
    mean = sum(vals) / len(vals)
    # each value has variance 1/64 under a uniform f
    assert abs(mean) <= 3 * Fraction(1, 8)


def test_space_tables_match_hom_apply():
    for sp in (aut_space(Dihedral(5)), inn_space(Symmetric(4)), hom_space(Cyclic(12), Cyclic(6))):
        G, H = sp.domain, sp.codomain
        T = sp.table()
        for c, h in enumerate(sp.codewords):
            assert [H.element_at(int(v)) for v in T[c]] == [h(x) for x in G.elements()]


def test_parse_hom_roundtrip():
    for sp in (hom_space(Cyclic(8), parse_group("Z/4+Z/2")), aut_space(Dihedral(7)), inn_space(Symmetric(4)),
               hom_space(VectorSpace(3, 2), VectorSpace(3, 1))):
        for h in sp.codewords:
            assert parse_hom(h.text(), sp) == h


def test_query_function_validation():
    with pytest.raises(Exception):
        QueryFunction(Cyclic(4), Cyclic(4), [0, 1, 2])
    with pytest.raises(Exception):
        QueryFunction(Cyclic(4), Cyclic(4), np.array([0, 1, 2, 7]))
