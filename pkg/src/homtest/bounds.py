"""Soundness bounds with outward rounding.

Every bound is returned as exact rationals: lower bounds are rounded down and
upper bounds rounded up.  Real roots are evaluated in 128-bit interval
arithmetic (``mpmath.iv``) unless the radicand is a perfect power, in which
case the root is exact.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .errors import OutOfTheoremRange

PRECISION = 128


@contextmanager
def _precision():
    """Run interval arithmetic at ``PRECISION`` bits, restoring the old setting."""
    old = iv.prec
    iv.prec = PRECISION
    try:
        yield
    finally:
        iv.prec = old


@dataclass(frozen=True)
class Bounds:
    lower: Fraction
    upper: Fraction
    theorem_id: str

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper

    def as_dict(self) -> dict:
        return {
            "lower": fraction_text(self.lower),
            "upper": fraction_text(self.upper),
            "lower_float": float(self.lower),
            "upper_float": float(self.upper),
            "theorem_id": self.theorem_id,
        }


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # Newton refinement from the float guess
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


def _ends(v) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an interval, read from the raw binary tuples.

    Going through ``mpmath.mpf`` would round them to the working precision.
    """
    return tuple(_raw_fraction(t) for t in v._mpi_)


def _raw_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    if not man and exp:
        raise ValueError("non-finite interval endpoint")
    x = Fraction(int(man)) * Fraction(2) ** exp
    return -x if sign else x


def _interval(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def root_bounds(x: Fraction, n: int) -> tuple[Fraction, Fraction]:
    """``(lo, hi)`` with ``lo <= x^(1/n) <= hi`` (real root; x < 0 needs odd n)."""
    x = Fraction(x)
    if n < 1:
        raise ValueError("root index must be positive")
    if x < 0:
        if n % 2 == 0:
            raise ValueError("even root of a negative number")
        lo, hi = root_bounds(-x, n)
        return -hi, -lo
    if n == 1 or x == 0:
        return x, x
    a, b = _iroot(x.numerator, n), _iroot(x.denominator, n)
    if a is not None and b is not None:
        r = Fraction(a, b)
        return r, r
    with _precision():
        v = iv.exp(iv.log(_interval(x)) / n)
        return _ends(v)


def zeta_bounds(s: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of zeta(s) for integer s >= 2.

    zeta(2) = pi^2/6 comes from an enclosure of pi; for s >= 3 the partial sum
    up to N = 1000 is completed by the integral tail bound N^(1-s)/(s-1),
    which is below 1e-6.
    """
    if s < 2:
        raise ValueError("zeta(s) diverges for s < 2")
    with _precision():
        if s == 2:
            v = iv.pi**2 / 6
            return _ends(v)
        N = 1000
        acc = iv.mpf(0)
        for n in range(1, N + 1):
            acc += iv.mpf(1) / iv.mpf(n) ** s
        tail = iv.mpf(N) ** (1 - s) / (s - 1)
        return _ends(acc)[0], _ends(acc + tail)[1]


def zeta2_squared_bounds() -> tuple[Fraction, Fraction]:
    """Enclosure of zeta(2)^2 = pi^4/36."""
    with _precision():
        v = iv.pi**4 / 36
        return _ends(v)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise OutOfTheoremRange(msg)


def _check_delta(delta) -> Fraction:
    d = Fraction(delta)
    if not 0 <= d <= 1:
        raise ValueError(f"delta={d} outside [0,1]")
    return d


# ---------------------------------------------------------------------------
# per-theorem formulas


def bounded_rank_cyclic(p: int, t: int, k: int, delta) -> Bounds:
    """Z_{p^r} -> H of p-rank t, k >= t+2."""
    d = _check_delta(delta)
    _require(t >= 1, "the codomain needs a nontrivial p-component")
    _require(k >= t + 2, f"k={k} must be at least t+2={t + 2}")
    c_low = Fraction((p - 1) ** 2, p**2)
    c_up = Fraction(p**2, p**2 - 1)
    lower, _ = root_bounds(c_low * d, k - t - 1)
    _, upper = root_bounds(c_up * d, k)
    return Bounds(lower, upper, "cyclic-prime-power")


def general_cyclic(k: int, delta, theorem_id: str = "cyclic-general") -> Bounds:
    """Z_n -> Z_m, k >= 4.

    Lower ``(delta / zeta(2)^2)^(1/(k-3))``; upper ``(zeta(k-1)^2 delta)^(1/k)``.
    """
    d = _check_delta(delta)
    _require(k >= 4, f"k={k} must be at least 4")
    z_lo, z_hi = zeta2_squared_bounds()
    lower, _ = root_bounds(d / z_hi, k - 3)
    _, zk_hi = zeta_bounds(k - 1)
    _, upper = root_bounds(zk_hi**2 * d, k)
    return Bounds(lower, upper, theorem_id)


def vector_space(q: int, k: int, delta) -> Bounds:
    """F_q^n -> F_q over the level-k distribution, odd k >= 3."""
    d = _check_delta(delta)
    _require(k >= 3 and k % 2 == 1, f"k={k} must be odd and at least 3")
    x = (q * d - 1) / Fraction(q - 1)
    base = Fraction(1, q)
    scale = Fraction(q - 1, q)
    if x < 0:
        lower = Fraction(0)
    else:
        lo, _ = root_bounds(x, k - 2)
        lower = base + scale * lo
    _, hi = root_bounds(x, k)
    upper = base + scale * hi
    return Bounds(lower, upper, "vector-space")


def field_to_space(q: int, k: int, delta) -> Bounds:
    """F_q -> F_q^n with nonzero queries, k >= 2."""
    d = _check_delta(delta)
    _require(k >= 2, f"k={k} must be at least 2")
    lo, _ = root_bounds(d, k - 1)
    _, hi = root_bounds(d, k)
    return Bounds(Fraction(q - 1, q) * lo, Fraction(1, q) + Fraction(q - 1, q) * hi, "field-to-space")


def dihedral(k: int, delta, rho_k: int, order: int) -> Bounds:
    """Aut(D_2p), k >= 3; upper from max^k <= sum agr^k = delta rho_k/|G|^k."""
    d = _check_delta(delta)
    _require(k >= 3, f"k={k} must be at least 3")
    lo, _ = root_bounds(d, k - 2)
    _, hi = root_bounds(d * Fraction(rho_k, order**k), k)
    return Bounds(lo / 2, hi, "dihedral")


def inner(k: int, delta, tau: int, c: Fraction, trho_k: int, order: int, theorem_id: str) -> Bounds:
    """Inn(G): ``c delta^(1/(k-tau+1))`` below, moment bound above."""
    d = _check_delta(delta)
    _require(k >= tau, f"k={k} must be at least tau={tau}")
    lo, _ = root_bounds(d, k - tau + 1)
    _, hi = root_bounds(d * Fraction(trho_k, order**k), k)
    return Bounds(c * lo, hi, theorem_id)


def gl_lie(p: int, k: int, delta) -> Bounds:
    """Characters of gl_n(q), q = p^a: lower ``((p-1)^2/p^2 delta)^(1/(k-1))``."""
    d = _check_delta(delta)
    _require(k >= 3, f"k={k} must be at least 3")
    lower, _ = root_bounds(Fraction((p - 1) ** 2, p**2) * d, k - 1)
    _, upper = root_bounds(Fraction(p**2, p**2 - 1) * d, k)
    return Bounds(lower, upper, "gl-characters")


def list_size_bound(p: int, t: int, eps) -> Fraction:
    """``(p/(p-1)) eps^-(t+1)`` for Z_{p^r} -> H of p-rank t."""
    e = Fraction(eps)
    return Fraction(p, p - 1) / e ** (t + 1)


def list_size_bound_two(eps) -> Fraction:
    return 2 / Fraction(eps) ** 2


def list_size_bound_general(eps) -> Fraction:
    """``zeta(2)^2 eps^-3``, rounded up."""
    _, z_hi = zeta2_squared_bounds()
    return z_hi / Fraction(eps) ** 3


def floor_log(x: int, p: int) -> int:
    return int(math.log(x, p)) if x > 0 else 0
