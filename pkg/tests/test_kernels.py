import numpy as np
import pytest

from homtest import kernels
from homtest.config import parse_space
from homtest.engine import kernel_bits, query_bits
from homtest.homs import QueryFunction
from homtest.samplers import RngStream, VSpaceTables

pytestmark = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


def test_backend_switch(monkeypatch):
    monkeypatch.delenv("HOMTEST_NO_NUMBA", raising=False)
    assert kernels.backend() == "numba"
    monkeypatch.setenv("HOMTEST_NO_NUMBA", "1")
    assert kernels.backend() == "numpy"
    monkeypatch.setenv("HOMTEST_NO_NUMBA", "0")
    assert kernels.backend() == "numba"


def test_pack_bits_layout():
    m = np.zeros((70, 3), dtype=bool)
    m[0, 0] = m[65, 0] = m[3, 2] = True
    b = kernels.pack_bits(m)
    assert b.shape == (3, 2)
    assert int(b[0, 0]) == 1 and int(b[0, 1]) == 2 and int(b[2, 0]) == 8 and not b[1].any()


def _random_f(space, seed):
    rng = RngStream(seed)
    return QueryFunction(space.domain, space.codomain, rng.integers(0, space.codomain.order, size=space.domain.order))


@pytest.mark.parametrize("text,k", [("Z/12->Z/6", 3), ("D(7)", 3), ("S(4)", 2), ("ES(3,3)", 2), ("Z/8->Z/2+Z/4", 4)])
def test_scan_parity(text, k):
    sp = parse_space(text)
    kb = kernel_bits(sp)
    fb = query_bits(sp, _random_f(sp, 4))
    allowed = np.arange(sp.domain.order, dtype=np.int64)
    for excl in (-1, 1):
        a = kernels._scan_nb(kb, fb, allowed, k, excl)
        b = kernels._scan_np(kb, fb, allowed, k, excl)
        assert [int(v) for v in a] == [int(v) for v in b]


@pytest.mark.parametrize("text,k", [("Z/9->Z/3", 3), ("D(5)", 2), ("S(3)", 3)])
def test_weights_parity(text, k):
    sp = parse_space(text)
    kb = kernel_bits(sp)
    allowed = np.arange(sp.domain.order, dtype=np.int64)
    np.testing.assert_array_equal(kernels._weights_nb(kb, allowed, k), kernels._weights_np(kb, allowed, k))


@pytest.mark.parametrize("q,n,k", [(2, 4, 3), (3, 3, 3), (2, 5, 5)])
def test_rk_parity(q, n, k):
    T = VSpaceTables(q, n)
    fv = RngStream(q * n).integers(0, q, size=q**n).astype(np.int64)
    args = [np.ascontiguousarray(a, dtype=np.int64) for a in (T.add, T.smul, T.F.add, T.F.mul, fv)]
    a = kernels._rk_nb(*args, q, k)
    b = kernels._rk_np(*args, q, k)
    assert (int(a[0]), int(a[1])) == (int(b[0]), int(b[1]))


def test_dispatch_follows_env(monkeypatch):
    from homtest.procedures import TestSpec, delta_exact

    sp = parse_space("D(5)")
    f = _random_f(sp, 8)
    vals = []
    for flag in ("0", "1"):
        monkeypatch.setenv("HOMTEST_NO_NUMBA", flag)
        vals.append(delta_exact(TestSpec("dihedral", sp, 3), f).value)
    assert vals[0] == vals[1]
