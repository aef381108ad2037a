import pytest
from hypothesis import given
from hypothesis import strategies as st

from homtest.errors import Unsupported
from homtest.fields import FieldCtx, factor_prime_power, get_field, is_prime, prime_factorization

FIELDS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factorization(360) == {2: 3, 3: 2, 5: 1}
    assert factor_prime_power(27) == (3, 3)
    assert factor_prime_power(12) is None


def test_rejects_non_prime_power():
    with pytest.raises(Unsupported):
        FieldCtx(6)


@pytest.mark.parametrize("q", FIELDS)
def test_field_axioms(q):
    F = get_field(q)
    e = list(range(q))
    for a in e:
        assert F.add[a, 0] == a and F.mul[a, 1] == a
        assert F.add[a, F.neg[a]] == 0
        if a:
            assert F.mul[a, F.inv[a]] == 1
    assert (F.add == F.add.T).all() and (F.mul == F.mul.T).all()


@pytest.mark.parametrize("q", FIELDS)
def test_generator_and_logs(q):
    F = get_field(q)
    assert sorted(F.exp.tolist()) == list(range(1, q))
    for x in range(1, q):
        assert F.exp[F.log[x]] == x


@given(q=st.sampled_from(FIELDS), data=st.data())
def test_distributivity(q, data):
    F = get_field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]
    assert F.mul[a, F.mul[b, c]] == F.mul[F.mul[a, b], c]
