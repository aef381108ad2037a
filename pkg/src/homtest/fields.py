"""Finite fields GF(q) with full lookup tables.

Elements are the integers ``0 .. q-1``.  For a prime field the integer is the
residue itself.  For ``q = p^a`` with ``a > 1`` the base-``p`` digits of the
integer are the coefficients of a polynomial over GF(p) (least significant
digit first), reduced modulo a fixed irreducible polynomial:

    q=4  : x^2 + x + 1
    q=8  : x^3 + x + 1
    q=9  : x^2 + 1
    q=16 : x^4 + x + 1
    q=25 : x^2 + 2
    q=27 : x^3 + 2x + 1
    q=32 : x^5 + x^2 + 1
    q=49 : x^2 + 1
    q=64 : x^6 + x + 1
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import Unsupported
from .settings import field_cap

# Low-order coefficients of the monic irreducible polynomial (leading 1 omitted).
IRREDUCIBLE: dict[int, tuple[int, ...]] = {
    4: (1, 1),
    8: (1, 1, 0),
    9: (1, 0),
    16: (1, 1, 0, 0),
    25: (2, 0),
    27: (1, 2, 0),
    32: (1, 0, 1, 0, 0),
    49: (1, 0),
    64: (1, 1, 0, 0, 0, 0),
}


def factor_prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, a)`` with ``q = p**a`` and p prime, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return (q, 1)
    a = 0
    while q % p == 0:
        q //= p
        a += 1
    return (p, a) if q == 1 else None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = factor_prime_power(n)
    return f is not None and f[1] == 1


def prime_factorization(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FieldCtx:
    """Arithmetic tables for GF(q).

    Parameters
    ----------
    q : int
        Field order, a prime or one of the extension orders listed in the
        module docstring, and at most the field cap.
    """

    def __init__(self, q: int) -> None:
        pa = factor_prime_power(q)
        if pa is None:
            raise Unsupported(f"{q} is not a prime power")
        if q > field_cap():
            raise Unsupported(f"field order {q} exceeds field table cap {field_cap()}")
        self.q = q
        self.p, self.a = pa
        if self.a == 1:
            idx = np.arange(q)
            self.add = (idx[:, None] + idx[None, :]) % q
            self.mul = (idx[:, None] * idx[None, :]) % q
        else:
            if q not in IRREDUCIBLE:
                raise Unsupported(f"no irreducible polynomial stored for q={q}")
            self.add, self.mul = self._extension_tables()
        self.neg = np.array([int(np.flatnonzero(self.add[x] == 0)[0]) for x in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            hits = np.flatnonzero(self.mul[x] == 1)
            if len(hits) != 1:
                raise Unsupported(f"tables for q={q} do not define a field")
            inv[x] = hits[0]
        self.inv = inv
        self.sub = self.add[:, self.neg]
        self._spot_check()
        self.generator = self._find_generator()
        self.log = np.full(q, -1, dtype=np.int64)
        self.exp = np.zeros(q - 1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            self.exp[i] = x
            self.log[x] = i
            x = int(self.mul[x, self.generator])

    def _digits(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.a)]

    def _from_digits(self, d: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(d))

    def _poly_mul(self, x: int, y: int) -> int:
        p, a = self.p, self.a
        xs, ys = self._digits(x), self._digits(y)
        prod = [0] * (2 * a - 1)
        for i, u in enumerate(xs):
            for j, v in enumerate(ys):
                prod[i + j] = (prod[i + j] + u * v) % p
        low = IRREDUCIBLE[self.q]
        # x^a = -(low polynomial); reduce from the top degree down.
        for deg in range(2 * a - 2, a - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i, coef in enumerate(low):
                    prod[deg - a + i] = (prod[deg - a + i] - c * coef) % p
        return self._from_digits(prod[:a])

    def _extension_tables(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        digits = np.array([self._digits(x) for x in range(q)])
        weights = self.p ** np.arange(self.a)
        s = (digits[:, None, :] + digits[None, :, :]) % self.p
        add = (s * weights).sum(axis=2)
        mul = np.array([[self._poly_mul(x, y) for y in range(q)] for x in range(q)])
        return add, mul

    def _spot_check(self) -> None:
        add, mul = self.add, self.mul
        if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
            raise Unsupported(f"tables for q={self.q} are not commutative")
        rng = np.random.default_rng(self.q)
        a, b, c = rng.integers(0, self.q, size=(3, 64))
        lhs = mul[a, add[b, c]]
        rhs = add[mul[a, b], mul[a, c]]
        if not np.array_equal(lhs, rhs):
            raise Unsupported(f"tables for q={self.q} are not distributive")

    def _find_generator(self) -> int:
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = int(self.mul[x, g])
                order += 1
            if order == self.q - 1:
                return g
        raise Unsupported("multiplicative group is not cyclic")  # pragma: no cover

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q})"


@lru_cache(maxsize=None)
def get_field(q: int) -> FieldCtx:
    """Shared, cached field context for ``q``."""
    return FieldCtx(q)
