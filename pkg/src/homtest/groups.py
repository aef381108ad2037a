"""Concrete finite groups and their arithmetic.

Every family exposes the same small interface: ``op``, ``inv``, ``identity``,
``elements`` (deterministic order), ``index`` (position of an element in that
order) and a compact text form.  Elements are canonical hashable encodings:

=================  ===========================================================
family             encoding
=================  ===========================================================
Cyclic(n)          int residue in ``0..n-1``
DirectSum(parts)   tuple of part encodings
VectorSpace(q, n)  tuple of ``n`` field elements
Dihedral(p)        ``(i, b)`` standing for ``s^b r^i``
Symmetric(n)       one-line tuple of images of ``0..n-1``
Extraspecial(p,r)  ``(a_1..a_m, b_1..b_m, c)`` with ``r = 2m + 1``
GeneralLinear      ``n x n`` tuple of row tuples over GF(q)
LieGL              ``n x n`` tuple of row tuples over GF(q), under addition
=================  ===========================================================

The extraspecial model multiplies by
``(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a.b')``, which for ``m = 1``
is the group of 3x3 unitriangular matrices.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from functools import lru_cache

import numpy as np

from .errors import InvalidElement, TooLarge, Unsupported
from .fields import FieldCtx, factor_prime_power, get_field, is_prime, prime_factorization
from .settings import check_cap, enumeration_cap

Elem = object

# Cayley tables are only built up to this order (table has order**2 entries).
TABLE_ORDER_CAP = 6000


class Group:
    """Base class; subclasses fill in the arithmetic."""

    family = "group"
    abelian = False

    def __init__(self, key: tuple) -> None:
        self._key = key
        self._elements: list | None = None
        self._index: dict | None = None
        self._table: np.ndarray | None = None
        self._center: int | None = None

    # identity and hashing are structural
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Group) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"<{self.text()}>"

    # --- interface -----------------------------------------------------
    order: int
    identity: Elem

    def op(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def _generate(self):
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def format_elem(self, a) -> str:
        return str(a)

    def parse_elem(self, s: str):
        raise NotImplementedError

    # --- derived -------------------------------------------------------
    def check(self, a) -> None:
        if not self.contains(a):
            raise InvalidElement(f"{a!r} is not an element of {self.text()}")

    def elements(self) -> list:
        if self._elements is None:
            check_cap(self.order, f"elements of {self.text()}")
            els = list(self._generate())
            if len(els) != self.order:
                raise AssertionError(f"{self.text()}: enumerated {len(els)} elements, expected {self.order}")
            self._elements = els
        return self._elements

    def index(self, a) -> int:
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self.elements())}
        try:
            return self._index[a]
        except KeyError:
            raise InvalidElement(f"{a!r} is not an element of {self.text()}") from None

    def element_at(self, i: int):
        return self.elements()[i]

    def identity_index(self) -> int:
        return self.index(self.identity)

    def power(self, a, e: int):
        result, base = self.identity, a
        if e < 0:
            base, e = self.inv(a), -e
        while e:
            if e & 1:
                result = self.op(result, base)
            base = self.op(base, base)
            e >>= 1
        return result

    def table(self) -> np.ndarray:
        """Cayley table on element indices, ``T[i, j] = index(e_i * e_j)``."""
        if self._table is None:
            if self.order > TABLE_ORDER_CAP:
                raise TooLarge(f"Cayley table of {self.text()} (order {self.order})")
            els = self.elements()
            idx = self.index
            t = np.empty((self.order, self.order), dtype=np.int64)
            for i, a in enumerate(els):
                t[i] = [idx(self.op(a, b)) for b in els]
            self._table = t
        return self._table

    def inverse_indices(self) -> np.ndarray:
        t = self.table()
        e = self.identity_index()
        return np.argmax(t == e, axis=1)

    def center_order(self) -> int:
        if self._center is None:
            if self.abelian:
                self._center = self.order
            else:
                t = self.table()
                self._center = int(np.sum(np.all(t == t.T, axis=1)))
        return self._center

    def centralizer_sizes(self) -> np.ndarray:
        """``|C_G(g)|`` for every element, by a commuting-element scan."""
        if self.abelian:
            return np.full(self.order, self.order, dtype=np.int64)
        t = self.table()
        return np.sum(t == t.T, axis=1).astype(np.int64)

    def conjugacy_classes(self) -> list[list[int]]:
        """Classes as sorted lists of element indices, in order of first member."""
        if self.abelian:
            return [[i] for i in range(self.order)]
        t = self.table()
        inv = self.inverse_indices()
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        for i in range(self.order):
            if seen[i]:
                continue
            orbit = np.unique(t[t[:, i], inv])
            seen[orbit] = True
            classes.append([int(x) for x in orbit])
        return classes

    def random_element(self, rng):
        return self.element_at(int(rng.integers(self.order)))


# ---------------------------------------------------------------------------
# abelian families


class Cyclic(Group):
    family = "Cyclic"
    abelian = True

    def __init__(self, n: int) -> None:
        if n < 1:
            raise Unsupported(f"cyclic group order must be positive, got {n}")
        super().__init__(("Z", n))
        self.n = n
        self.order = n
        self.identity = 0

    def op(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def contains(self, a) -> bool:
        return isinstance(a, (int, np.integer)) and not isinstance(a, bool) and 0 <= a < self.n

    def _generate(self):
        return range(self.n)

    def index(self, a) -> int:
        if not self.contains(a):
            raise InvalidElement(f"{a!r} is not an element of {self.text()}")
        return int(a)

    def element_at(self, i: int):
        return int(i)

    def table(self) -> np.ndarray:
        if self._table is None:
            if self.order > TABLE_ORDER_CAP:
                raise TooLarge(f"Cayley table of {self.text()}")
            r = np.arange(self.n)
            self._table = (r[:, None] + r[None, :]) % self.n
        return self._table

    def moduli(self) -> tuple[int, ...]:
        return (self.n,)

    def to_residues(self, a) -> tuple[int, ...]:
        return (a,)

    def from_residues(self, v) -> int:
        return int(v[0]) % self.n

    def text(self) -> str:
        return f"Z/{self.n}"

    def parse_elem(self, s: str):
        a = int(s.strip()) % self.n
        return a


class VectorSpace(Group):
    """Additive group of GF(q)^n."""

    family = "VectorSpace"
    abelian = True

    def __init__(self, q: int, n: int) -> None:
        if n < 1:
            raise Unsupported("vector space dimension must be positive")
        super().__init__(("V", q, n))
        self.field: FieldCtx = get_field(q)
        self.q, self.n = q, n
        self.order = q**n
        self.identity = (0,) * n

    def op(self, a, b):
        add = self.field.add
        return tuple(int(add[x, y]) for x, y in zip(a, b))

    def inv(self, a):
        neg = self.field.neg
        return tuple(int(neg[x]) for x in a)

    def scale(self, c: int, a):
        mul = self.field.mul
        return tuple(int(mul[c, x]) for x in a)

    def contains(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.n
            and all(isinstance(x, (int, np.integer)) and 0 <= x < self.q for x in a)
        )

    def _generate(self):
        return itertools.product(range(self.q), repeat=self.n)

    def index(self, a) -> int:
        if not self.contains(a):
            raise InvalidElement(f"{a!r} is not an element of {self.text()}")
        i = 0
        for x in a:
            i = i * self.q + int(x)
        return i

    def element_at(self, i: int):
        out = []
        for _ in range(self.n):
            i, r = divmod(int(i), self.q)
            out.append(r)
        return tuple(reversed(out))

    def moduli(self) -> tuple[int, ...]:
        if self.field.a != 1:
            raise Unsupported(f"GF({self.q}) is not a prime field; use linear maps instead")
        return (self.q,) * self.n

    def to_residues(self, a) -> tuple[int, ...]:
        return tuple(a)

    def from_residues(self, v):
        return tuple(int(x) % self.q for x in v)

    def text(self) -> str:
        return f"V({self.q},{self.n})"

    def format_elem(self, a) -> str:
        return "(" + ",".join(str(x) for x in a) + ")"

    def parse_elem(self, s: str):
        vals = _parse_int_tuple(s)
        if self.n == 1 and len(vals) == 1:
            return (vals[0] % self.q,)
        a = tuple(v % self.q for v in vals)
        self.check(a)
        return a


class DirectSum(Group):
    """Direct sum of abelian groups (cyclic or prime-field vector spaces)."""

    family = "DirectSum"
    abelian = True

    def __init__(self, parts) -> None:
        parts = tuple(parts)
        if len(parts) < 2:
            raise Unsupported("a direct sum needs at least two summands")
        for g in parts:
            if not g.abelian or isinstance(g, DirectSum):
                raise Unsupported(f"direct-sum summand {g.text()} must be cyclic or a vector space")
        super().__init__(("DS",) + tuple(g._key for g in parts))
        self.parts = parts
        self.order = math.prod(g.order for g in parts)
        self.identity = tuple(g.identity for g in parts)

    def op(self, a, b):
        return tuple(g.op(x, y) for g, x, y in zip(self.parts, a, b))

    def inv(self, a):
        return tuple(g.inv(x) for g, x in zip(self.parts, a))

    def contains(self, a) -> bool:
        return isinstance(a, tuple) and len(a) == len(self.parts) and all(
            g.contains(x) for g, x in zip(self.parts, a)
        )

    def _generate(self):
        return itertools.product(*(g._generate() for g in self.parts))

    def index(self, a) -> int:
        if not self.contains(a):
            raise InvalidElement(f"{a!r} is not an element of {self.text()}")
        i = 0
        for g, x in zip(self.parts, a):
            i = i * g.order + g.index(x)
        return i

    def element_at(self, i: int):
        out = []
        for g in reversed(self.parts):
            i, r = divmod(int(i), g.order)
            out.append(g.element_at(r))
        return tuple(reversed(out))

    def moduli(self) -> tuple[int, ...]:
        return tuple(m for g in self.parts for m in g.moduli())

    def to_residues(self, a) -> tuple[int, ...]:
        return tuple(r for g, x in zip(self.parts, a) for r in g.to_residues(x))

    def from_residues(self, v):
        out, pos = [], 0
        for g in self.parts:
            width = len(g.moduli())
            out.append(g.from_residues(v[pos : pos + width]))
            pos += width
        return tuple(out)

    def text(self) -> str:
        return "+".join(g.text() for g in self.parts)

    def format_elem(self, a) -> str:
        return "(" + ",".join(g.format_elem(x) for g, x in zip(self.parts, a)) + ")"

    def parse_elem(self, s: str):
        items = _split_top(s.strip()[1:-1], ",")
        if len(items) != len(self.parts):
            raise InvalidElement(f"{s!r} does not have {len(self.parts)} components")
        return tuple(g.parse_elem(t) for g, t in zip(self.parts, items))


# ---------------------------------------------------------------------------
# non-abelian families


class Dihedral(Group):
    """Dihedral group of order 2p with ``s^2 = r^p = e`` and ``s r s = r^-1``."""

    family = "Dihedral"

    def __init__(self, p: int) -> None:
        if not is_prime(p) or p <= 3:
            raise Unsupported(f"dihedral groups need p prime and p > 3, got p={p}")
        super().__init__(("D", p))
        self.p = p
        self.order = 2 * p
        self.identity = (0, 0)

    def op(self, a, b):
        i, s1 = a
        j, s2 = b
        # s^b1 r^i s^b2 r^j = s^(b1+b2) r^((-1)^b2 i + j)
        return (((-i if s2 else i) + j) % self.p, s1 ^ s2)

    def inv(self, a):
        i, s = a
        return (i, 1) if s else ((-i) % self.p, 0)

    def contains(self, a) -> bool:
        return isinstance(a, tuple) and len(a) == 2 and a[1] in (0, 1) and 0 <= a[0] < self.p

    def _generate(self):
        return [(i, b) for b in (0, 1) for i in range(self.p)]

    def index(self, a) -> int:
        if not self.contains(a):
            raise InvalidElement(f"{a!r} is not an element of {self.text()}")
        return a[1] * self.p + a[0]

    def element_at(self, i: int):
        b, r = divmod(int(i), self.p)
        return (r, b)

    def center_order(self) -> int:
        return 1

    def text(self) -> str:
        return f"D({self.p})"

    def format_elem(self, a) -> str:
        i, b = a
        if i == 0:
            return "s" if b else "e"
        rot = "r" if i == 1 else f"r^{i}"
        return ("s" if b else "") + rot

    def parse_elem(self, s: str):
        t = s.strip().replace(" ", "")
        if t.startswith("("):
            vals = _parse_int_tuple(t)
            a = (vals[0] % self.p, vals[1])
            self.check(a)
            return a
        m = re.fullmatch(r"(s?)(?:r(?:\^(-?\d+))?)?|e", t)
        if not m or t == "":
            raise InvalidElement(f"cannot parse dihedral element {s!r}")
        if t == "e":
            return (0, 0)
        b = 1 if m.group(1) else 0
        if "r" in t:
            i = int(m.group(2)) if m.group(2) else 1
        else:
            i = 0
        return (i % self.p, b)


class Symmetric(Group):
    family = "Symmetric"

    def __init__(self, n: int) -> None:
        if n < 1:
            raise Unsupported("symmetric group degree must be positive")
        super().__init__(("S", n))
        self.n = n
        self.order = math.factorial(n)
        self.identity = tuple(range(n))

    def op(self, a, b):
        # (a b)(i) = a(b(i)): apply b first
        return tuple(a[i] for i in b)

    def inv(self, a):
        out = [0] * self.n
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def contains(self, a) -> bool:
        return isinstance(a, tuple) and len(a) == self.n and sorted(a) == list(range(self.n))

    def _generate(self):
        return itertools.permutations(range(self.n))

    def center_order(self) -> int:
        return 2 if self.n == 2 else 1

    def cycle_type(self, a) -> tuple[int, ...]:
        """Cycle lengths in nonincreasing order (fixed points included)."""
        seen = [False] * self.n
        lengths = []
        for i in range(self.n):
            if not seen[i]:
                ln, j = 0, i
                while not seen[j]:
                    seen[j] = True
                    j = a[j]
                    ln += 1
                lengths.append(ln)
        return tuple(sorted(lengths, reverse=True))

    def text(self) -> str:
        return f"S({self.n})"

    def format_elem(self, a) -> str:
        seen = [False] * self.n
        cycles = []
        for i in range(self.n):
            if seen[i] or a[i] == i:
                seen[i] = True
                continue
            cyc, j = [], i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = a[j]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(cycles) if cycles else "()"

    def parse_elem(self, s: str):
        t = s.strip()
        if t.startswith("["):
            a = tuple(int(x) for x in _parse_int_tuple(t))
            self.check(a)
            return a
        perm = list(range(self.n))
        for body in re.findall(r"\(([^()]*)\)", t):
            pts = [int(x) - 1 for x in re.split(r"[\s,]+", body.strip()) if x]
            if any(not 0 <= x < self.n for x in pts) or len(set(pts)) != len(pts):
                raise InvalidElement(f"bad cycle {body!r} for {self.text()}")
            cyc = list(range(self.n))
            for x, y in zip(pts, pts[1:] + pts[:1]):
                cyc[x] = y
            # cycles written left to right compose right-to-left
            perm = [perm[cyc[i]] for i in range(self.n)]
        if re.sub(r"\([^()]*\)", "", t).strip():
            raise InvalidElement(f"cannot parse permutation {s!r}")
        return tuple(perm)


class Extraspecial(Group):
    """Extraspecial group of order p^r (r odd) in Heisenberg normal form."""

    family = "Extraspecial"

    def __init__(self, p: int, r: int) -> None:
        if not is_prime(p):
            raise Unsupported(f"extraspecial groups need a prime p, got {p}")
        if r < 3 or r % 2 == 0:
            raise Unsupported(f"extraspecial order p^r needs odd r >= 3, got r={r}")
        super().__init__(("ES", p, r))
        self.p, self.r = p, r
        self.m = (r - 1) // 2
        self.order = p**r
        self.identity = (0,) * r

    def op(self, x, y):
        p, m = self.p, self.m
        dot = sum(x[i] * y[m + i] for i in range(m))
        head = tuple((x[i] + y[i]) % p for i in range(2 * m))
        return head + ((x[-1] + y[-1] + dot) % p,)

    def inv(self, x):
        p, m = self.p, self.m
        dot = sum(x[i] * x[m + i] for i in range(m))
        return tuple((-v) % p for v in x[:-1]) + ((dot - x[-1]) % p,)

    def contains(self, a) -> bool:
        return isinstance(a, tuple) and len(a) == self.r and all(
            isinstance(v, (int, np.integer)) and 0 <= v < self.p for v in a
        )

    def _generate(self):
        return itertools.product(range(self.p), repeat=self.r)

    def index(self, a) -> int:
        if not self.contains(a):
            raise InvalidElement(f"{a!r} is not an element of {self.text()}")
        i = 0
        for v in a:
            i = i * self.p + int(v)
        return i

    def element_at(self, i: int):
        out = []
        for _ in range(self.r):
            i, v = divmod(int(i), self.p)
            out.append(v)
        return tuple(reversed(out))

    def center_order(self) -> int:
        return self.p

    def text(self) -> str:
        return f"ES({self.p},{self.r})"

    def format_elem(self, a) -> str:
        return "(" + ",".join(map(str, a)) + ")"

    def parse_elem(self, s: str):
        a = tuple(v % self.p for v in _parse_int_tuple(s))
        self.check(a)
        return a


# ---------------------------------------------------------------------------
# matrix families


def mat_mul(F: FieldCtx, A, B):
    n = len(A)
    m = len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for t in range(len(B)):
                acc = F.add[acc, F.mul[A[i][t], B[t][j]]]
            row.append(int(acc))
        out.append(tuple(row))
    return tuple(out)


def mat_det(F: FieldCtx, A) -> int:
    """Determinant over GF(q) by Gaussian elimination."""
    M = [list(r) for r in A]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = int(F.neg[det])
        det = int(F.mul[det, M[c][c]])
        inv = F.inv[M[c][c]]
        for r in range(c + 1, n):
            if M[r][c]:
                f = F.mul[M[r][c], inv]
                M[r] = [int(F.sub[M[r][j], F.mul[f, M[c][j]]]) for j in range(n)]
    return det


def mat_inv(F: FieldCtx, A):
    n = len(A)
    M = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise InvalidElement("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = F.inv[M[c][c]]
        M[c] = [int(F.mul[inv, v]) for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [int(F.sub[M[r][j], F.mul[f, M[c][j]]]) for j in range(2 * n)]
    return tuple(tuple(row[n:]) for row in M)


def mat_trace(F: FieldCtx, A) -> int:
    acc = 0
    for i in range(len(A)):
        acc = int(F.add[acc, A[i][i]])
    return acc


class _MatrixGroup(Group):
    def __init__(self, key, n: int, q: int) -> None:
        super().__init__(key)
        self.field = get_field(q)
        self.n, self.q = n, q

    def _is_matrix(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.n
            and all(
                isinstance(r, tuple)
                and len(r) == self.n
                and all(isinstance(v, (int, np.integer)) and 0 <= v < self.q for v in r)
                for r in a
            )
        )

    def _all_matrices(self):
        n = self.n
        for flat in itertools.product(range(self.q), repeat=n * n):
            yield tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))

    def format_elem(self, a) -> str:
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in a) + "]"

    def parse_elem(self, s: str):
        rows = _parse_matrix(s)
        a = tuple(tuple(v % self.q for v in r) for r in rows)
        self.check(a)
        return a

    def identity_matrix(self):
        return tuple(tuple(1 if i == j else 0 for j in range(self.n)) for i in range(self.n))

    def zero_matrix(self):
        return tuple((0,) * self.n for _ in range(self.n))


class GeneralLinear(_MatrixGroup):
    family = "GeneralLinear"

    def __init__(self, n: int, q: int) -> None:
        super().__init__(("GL", n, q), n, q)
        self.order = math.prod(q**n - q**j for j in range(n))
        self.identity = self.identity_matrix()

    def op(self, a, b):
        return mat_mul(self.field, a, b)

    def inv(self, a):
        return mat_inv(self.field, a)

    def det(self, a) -> int:
        return mat_det(self.field, a)

    def contains(self, a) -> bool:
        return self._is_matrix(a) and mat_det(self.field, a) != 0

    def _generate(self):
        check_cap(self.q ** (self.n * self.n), f"matrix scan for {self.text()}")
        return (a for a in self._all_matrices() if mat_det(self.field, a) != 0)

    def center_order(self) -> int:
        return self.q - 1

    def text(self) -> str:
        return f"GL({self.n},{self.q})"


class LieGL(_MatrixGroup):
    """The Lie algebra gl_n(q), used as its additive group."""

    family = "LieGL"
    abelian = True

    def __init__(self, n: int, q: int) -> None:
        super().__init__(("gl", n, q), n, q)
        self.order = q ** (n * n)
        self.identity = self.zero_matrix()

    def op(self, a, b):
        add = self.field.add
        return tuple(tuple(int(add[x, y]) for x, y in zip(r, s)) for r, s in zip(a, b))

    def inv(self, a):
        neg = self.field.neg
        return tuple(tuple(int(neg[x]) for x in r) for r in a)

    def contains(self, a) -> bool:
        return self._is_matrix(a)

    def _generate(self):
        return self._all_matrices()

    def index(self, a) -> int:
        if not self.contains(a):
            raise InvalidElement(f"{a!r} is not an element of {self.text()}")
        i = 0
        for r in a:
            for v in r:
                i = i * self.q + int(v)
        return i

    def element_at(self, i: int):
        flat = []
        for _ in range(self.n * self.n):
            i, v = divmod(int(i), self.q)
            flat.append(v)
        flat.reverse()
        n = self.n
        return tuple(tuple(flat[j * n : (j + 1) * n]) for j in range(n))

    def bracket(self, x, y):
        F = self.field
        xy, yx = mat_mul(F, x, y), mat_mul(F, y, x)
        return tuple(tuple(int(F.sub[u, v]) for u, v in zip(r, s)) for r, s in zip(xy, yx))

    def trace(self, x) -> int:
        return mat_trace(self.field, x)

    def text(self) -> str:
        return f"gl({self.n},{self.q})"


# ---------------------------------------------------------------------------
# operations on descriptors


def g_op(G: Group, a, b):
    G.check(a)
    G.check(b)
    return G.op(a, b)


def g_inv(G: Group, a):
    G.check(a)
    return G.inv(a)


def g_id(G: Group):
    return G.identity


def g_eq(G: Group, a, b) -> bool:
    G.check(a)
    G.check(b)
    return a == b


def enumerate_elems(G: Group):
    """Elements of ``G`` in the canonical deterministic order."""
    return iter(G.elements())


def generated_subgroup_size(G: Group, xs) -> int:
    """Order of the subgroup generated by ``xs``."""
    xs = tuple(xs)
    if not xs:
        raise ValueError("need at least one generator")
    for x in xs:
        G.check(x)
    if isinstance(G, Cyclic):
        return G.n // math.gcd(G.n, *xs)
    return closure_size(G, xs)


def closure_size(G: Group, xs) -> int:
    """Breadth-first product closure of ``xs`` (no shortcuts)."""
    cap = enumeration_cap()
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        a = queue.popleft()
        for x in xs:
            b = G.op(a, x)
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    raise TooLarge(f"subgroup closure in {G.text()} exceeds cap {cap}")
                queue.append(b)
    return len(seen)


def lie_bracket(G: LieGL, x, y):
    if not isinstance(G, LieGL):
        raise Unsupported("the Lie bracket is defined on gl(n,q) only")
    G.check(x)
    G.check(y)
    return G.bracket(x, y)


def abelian_invariants(G: Group) -> tuple[int, ...]:
    """Cyclic moduli of an abelian group in its built-in decomposition."""
    if not G.abelian or isinstance(G, LieGL):
        raise Unsupported(f"{G.text()} has no cyclic decomposition here")
    return G.moduli()


def p_ranks(G: Group, p: int) -> list[int]:
    """Exponents b_i of the p-component ``Z_{p^b_1} + ... `` of an abelian group."""
    out = []
    for m in abelian_invariants(G):
        e = prime_factorization(m).get(p, 0)
        if e:
            out.append(e)
    return out


# ---------------------------------------------------------------------------
# text form


def _split_top(s: str, sep: str) -> list[str]:
    """Split on ``sep`` outside any brackets."""
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _parse_int_tuple(s: str) -> tuple[int, ...]:
    t = s.strip()
    if t[:1] in "([" and t[-1:] in ")]":
        t = t[1:-1]
    return tuple(int(x) for x in re.split(r"[\s,]+", t.strip()) if x)


def _parse_matrix(s: str) -> list[list[int]]:
    t = s.replace(" ", "")
    rows = re.findall(r"\[([-\d,]*)\]", t[1:-1] if t.startswith("[[") else t)
    if not rows:
        raise InvalidElement(f"cannot parse matrix {s!r}")
    return [[int(v) for v in r.split(",") if v] for r in rows]


_SIMPLE = [
    (re.compile(r"Z/(\d+)"), lambda m: Cyclic(int(m[1]))),
    (re.compile(r"V\((\d+),(\d+)\)"), lambda m: VectorSpace(int(m[1]), int(m[2]))),
    (re.compile(r"F(\d+)\*"), lambda m: multiplicative_group(int(m[1]))),
    (re.compile(r"F(\d+)"), lambda m: VectorSpace(int(m[1]), 1)),
    (re.compile(r"D\((\d+)\)"), lambda m: Dihedral(int(m[1]))),
    (re.compile(r"S\((\d+)\)"), lambda m: Symmetric(int(m[1]))),
    (re.compile(r"ES\((\d+),(\d+)\)"), lambda m: Extraspecial(int(m[1]), int(m[2]))),
    (re.compile(r"H\((\d+)\)"), lambda m: Extraspecial(int(m[1]), 3)),
    (re.compile(r"GL\((\d+),(\d+)\)"), lambda m: GeneralLinear(int(m[1]), int(m[2]))),
    (re.compile(r"gl\((\d+),(\d+)\)"), lambda m: LieGL(int(m[1]), int(m[2]))),
]


def multiplicative_group(q: int) -> Cyclic:
    """GF(q)* realized as Z/(q-1) through the discrete log of the field generator."""
    if factor_prime_power(q) is None:
        raise Unsupported(f"{q} is not a prime power")
    return Cyclic(q - 1)


def parse_group(text: str) -> Group:
    """Parse the compact text form, e.g. ``Z/4+Z/2`` or ``GL(2,3)``."""
    s = text.strip().replace(" ", "")
    parts = _split_top(s, "+")
    if len(parts) > 1:
        return DirectSum([parse_group(p) for p in parts])
    for rx, make in _SIMPLE:
        m = rx.fullmatch(s)
        if m:
            return make(m)
    raise Unsupported(f"unknown group family in {text!r}")


@lru_cache(maxsize=None)
def cached_group(text: str) -> Group:
    return parse_group(text)
