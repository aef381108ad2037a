import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homtest.errors import InvalidElement, Unsupported
from homtest.groups import (
    Cyclic,
    Dihedral,
    Extraspecial,
    GeneralLinear,
    LieGL,
    Symmetric,
    VectorSpace,
    enumerate_elems,
    g_eq,
    g_id,
    g_inv,
    g_op,
    generated_subgroup_size,
    lie_bracket,
    parse_group,
)
from homtest.samplers import RngStream

SMALL = ["Z/6", "Z/4+Z/2", "V(3,2)", "D(5)", "S(4)", "ES(3,3)", "GL(2,3)", "gl(2,2)"]


def test_cyclic_op():
    assert g_op(Cyclic(6), 4, 5) == 3


def test_dihedral_reflections_are_involutions():
    D = Dihedral(5)
    r, s = (1, 0), (0, 1)
    sr = g_op(D, s, r)
    assert g_op(D, sr, sr) == g_id(D)


def test_gl_inverse():
    G = GeneralLinear(2, 3)
    rng = RngStream(0)
    for _ in range(50):
        A = G.random_element(rng)
        assert g_op(G, A, g_inv(G, A)) == G.identity


@pytest.mark.parametrize(
    "text,order",
    [("Z/4", 4), ("D(5)", 10), ("GL(2,3)", 48), ("gl(2,3)", 81), ("S(4)", 24), ("ES(3,3)", 27), ("H(5)", 125),
     ("V(2,3)", 8), ("F4*", 3)],
)
def test_orders(text, order):
    G = parse_group(text)
    assert G.order == order
    assert len(list(enumerate_elems(G))) == order


def test_gl_order_formula():
    for n, q in [(2, 2), (2, 3), (3, 2)]:
        assert GeneralLinear(n, q).order == math.prod(q**n - q**j for j in range(n))


def test_dihedral_rotations_and_reflections():
    els = Dihedral(5).elements()
    assert sum(1 for _, s in els if s == 0) == 5
    assert sum(1 for _, s in els if s == 1) == 5


def test_family_preconditions():
    with pytest.raises(Unsupported):
        Dihedral(4)
    with pytest.raises(Unsupported):
        Dihedral(3)
    with pytest.raises(Unsupported):
        Extraspecial(3, 4)


def test_extraspecial_center():
    for p in (3, 5):
        assert Extraspecial(p, 3).center_order() == p


def test_generated_subgroup():
    assert generated_subgroup_size(Cyclic(8), (2, 6)) == 4
    assert generated_subgroup_size(Cyclic(9), (0, 0)) == 1
    S = Symmetric(4)
    assert generated_subgroup_size(S, (S.parse_elem("(1 2)"), S.parse_elem("(1 2 3 4)"))) == 24


def test_invalid_element():
    with pytest.raises(InvalidElement):
        g_op(Cyclic(4), 5, 1)
    with pytest.raises(InvalidElement):
        Symmetric(3).check((0, 0, 1))


@pytest.mark.parametrize("text", SMALL)
def test_index_roundtrip(text):
    G = parse_group(text)
    for i, x in enumerate(G.elements()):
        assert G.index(x) == i and G.element_at(i) == x
        assert G.parse_elem(G.format_elem(x)) == x


@given(name=st.sampled_from(SMALL), data=st.data())
def test_group_axioms(name, data):
    G = parse_group(name)
    idx = st.integers(0, G.order - 1)
    a, b, c = (G.element_at(data.draw(idx)) for _ in range(3))
    assert g_op(G, g_op(G, a, b), c) == g_op(G, a, g_op(G, b, c))
    assert g_op(G, a, g_id(G)) == a
    assert g_eq(G, g_op(G, a, g_inv(G, a)), g_id(G))


def test_cayley_table_matches_op():
    G = Symmetric(3)
    T = G.table()
    els = G.elements()
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            assert els[T[i, j]] == G.op(a, b)


def test_conjugacy_classes_s4():
    sizes = sorted(len(c) for c in Symmetric(4).conjugacy_classes())
    assert sizes == [1, 3, 6, 6, 8]


def test_lie_bracket_identities():
    L = LieGL(2, 3)
    rng = RngStream(4)
    zero = L.identity
    for _ in range(50):
        x, y, z = (L.random_element(rng) for _ in range(3))
        assert lie_bracket(L, x, x) == zero
        jac = L.op(L.op(lie_bracket(L, x, lie_bracket(L, y, z)), lie_bracket(L, y, lie_bracket(L, z, x))),
                   lie_bracket(L, z, lie_bracket(L, x, y)))
        assert jac == zero
        assert L.trace(lie_bracket(L, x, y)) == 0


def test_vector_space_rejects_bad_field():
    with pytest.raises(Unsupported):
        VectorSpace(6, 2)
