"""Tuple-enumeration kernels.

Codeword agreement patterns are packed into bitmasks: for every domain point
``x`` and codeword ``c``, bit ``c`` of ``bits[x]`` says whether codeword ``c``
takes the wanted value at ``x``.  A tuple's kernel (or stabilizer) is then the
AND of its coordinates' masks and its size is a popcount.

Each kernel has a numba implementation and a pure numpy one.  The numba path
is used unless ``HOMTEST_NO_NUMBA`` is set (see :mod:`homtest.settings`) or
numba cannot be imported.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

from .settings import numba_disabled

try:
    import numba
    from numba import njit, prange

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the portable layer; avoids probing an old system TBB
        numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not args or not callable(args[0]) else args[0]

    prange = range


def backend() -> str:
    return "numba" if HAVE_NUMBA and not numba_disabled() else "numpy"


def pack_bits(match: np.ndarray) -> np.ndarray:
    """Pack a boolean (codewords x points) matrix into (points x words) uint64."""
    C, M = match.shape
    W = max(1, -(-C // 64))
    padded = np.zeros((W * 64, M), dtype=np.uint64)
    padded[:C] = match
    shifts = np.arange(64, dtype=np.uint64)[None, :, None]
    words = (padded.reshape(W, 64, M) << shifts).sum(axis=1, dtype=np.uint64)
    return np.ascontiguousarray(words.T)


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def _accumulate(out, n, hit, excl_n):
    out[0] += n
    if hit:
        out[1] += n
    if n != excl_n:
        out[2] += 1
        out[3] += n
        if hit:
            out[4] += n


@njit(cache=True)
def _scan_rest(kbits, fbits, allowed, k, excl_n, K0, F0, out):
    """Odometer over the last ``k-1`` coordinates below a fixed first-coordinate mask."""
    L = allowed.shape[0]
    W = kbits.shape[1]
    d = k - 1
    if d == 0:
        n = 0
        hit = False
        for w in range(W):
            n += _popcount(K0[w])
            if F0[w] != 0:
                hit = True
        _accumulate(out, n, hit, excl_n)
        return
    K = np.empty((d, W), dtype=np.uint64)
    F = np.empty((d, W), dtype=np.uint64)
    for w in range(W):
        K[0, w] = K0[w]
        F[0, w] = F0[w]
    idx = np.zeros(d, dtype=np.int64)
    for lv in range(1, d):
        x = allowed[0]
        for w in range(W):
            K[lv, w] = K[lv - 1, w] & kbits[x, w]
            F[lv, w] = F[lv - 1, w] & fbits[x, w]
    last = d - 1
    while True:
        for j in range(L):
            x = allowed[j]
            n = 0
            hit = False
            for w in range(W):
                n += _popcount(K[last, w] & kbits[x, w])
                if (F[last, w] & fbits[x, w]) != 0:
                    hit = True
            _accumulate(out, n, hit, excl_n)
        lv = d - 2
        while lv >= 0:
            idx[lv] += 1
            if idx[lv] < L:
                break
            idx[lv] = 0
            lv -= 1
        if lv < 0:
            break
        for l2 in range(lv, d - 1):
            x = allowed[idx[l2]]
            for w in range(W):
                K[l2 + 1, w] = K[l2, w] & kbits[x, w]
                F[l2 + 1, w] = F[l2, w] & fbits[x, w]


@njit(cache=True, parallel=True)
def _scan_nb(kbits, fbits, allowed, k, excl_n):
    L = allowed.shape[0]
    parts = np.zeros((L, 5), dtype=np.int64)
    for i in prange(L):
        x = allowed[i]
        _scan_rest(kbits, fbits, allowed, k, excl_n, kbits[x].copy(), fbits[x].copy(), parts[i])
    out = np.zeros(5, dtype=np.int64)
    for i in range(L):
        for c in range(5):
            out[c] += parts[i, c]
    return out


@njit(cache=True)
def _weights_nb(kbits, allowed, k):
    L = allowed.shape[0]
    W = kbits.shape[1]
    total = L**k
    out = np.empty(total, dtype=np.int64)
    K = np.empty((k, W), dtype=np.uint64)
    full = ~np.uint64(0)
    for w in range(W):
        K[0, w] = full
    idx = np.zeros(k, dtype=np.int64)
    for lv in range(1, k):
        x = allowed[0]
        for w in range(W):
            K[lv, w] = K[lv - 1, w] & kbits[x, w]
    pos = 0
    last = k - 1
    while True:
        for j in range(L):
            x = allowed[j]
            n = 0
            for w in range(W):
                n += _popcount(K[last, w] & kbits[x, w])
            out[pos] = n
            pos += 1
        lv = k - 2
        while lv >= 0:
            idx[lv] += 1
            if idx[lv] < L:
                break
            idx[lv] = 0
            lv -= 1
        if lv < 0:
            break
        for l2 in range(lv, k - 1):
            x = allowed[idx[l2]]
            for w in range(W):
                K[l2 + 1, w] = K[l2, w] & kbits[x, w]
    return out


@njit(cache=True)
def _rk_nb(vadd, smul, fadd, fmul, fv, q, k):
    V = vadd.shape[0]
    d = k - 1
    span = np.zeros((d + 1, V), dtype=np.bool_)
    span[0, 0] = True
    xs = np.full(d, -1, dtype=np.int64)
    a = np.ones(d, dtype=np.int64)
    total = 0
    passes = 0
    lv = 0
    while lv >= 0:
        x = xs[lv] + 1
        while x < V and span[lv, x]:
            x += 1
        if x >= V:
            xs[lv] = -1
            lv -= 1
            continue
        xs[lv] = x
        if lv < d - 1:
            for v in range(V):
                span[lv + 1, v] = False
            for v in range(V):
                if span[lv, v]:
                    for c in range(q):
                        span[lv + 1, vadd[v, smul[c, x]]] = True
            lv += 1
            xs[lv] = -1
            continue
        for i in range(d):
            a[i] = 1
        while True:
            s = 0
            t = 0
            for i in range(d):
                s = vadd[s, smul[a[i], xs[i]]]
                t = fadd[t, fmul[a[i], fv[xs[i]]]]
            total += 1
            if fv[s] == t:
                passes += 1
            i = d - 1
            while i >= 0:
                a[i] += 1
                if a[i] < q:
                    break
                a[i] = 1
                i -= 1
            if i < 0:
                break
    return total, passes


# ---------------------------------------------------------------------------
# numpy fallbacks


def _popcount_np(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).astype(np.int64)


BLOCK_ELEMS = 1 << 18


def _block_masks(B: np.ndarray, m: int) -> np.ndarray:
    """AND masks of all ``m``-tuples from the rows of ``B`` (shape L^m x W)."""
    L, W = B.shape
    out = B
    for _ in range(m - 1):
        out = (out[:, None, :] & B[None, :, :]).reshape(-1, W)
    return out


def _block_size(L: int, W: int, k: int) -> int:
    m = 1
    while m < k and L ** (m + 1) * W <= BLOCK_ELEMS:
        m += 1
    return m


def _prefix_masks(B: np.ndarray, depth: int):
    """Yield the AND mask of every prefix of length ``depth`` in odometer order."""
    W = B.shape[1]
    full = np.full(W, ~np.uint64(0), dtype=np.uint64)
    if depth == 0:
        yield full
        return
    for prefix in itertools.product(range(B.shape[0]), repeat=depth):
        pk = full
        for j in prefix:
            pk = pk & B[j]
        yield pk


def _scan_np(kbits, fbits, allowed, k, excl_n):
    KB, FB = kbits[allowed], fbits[allowed]
    L, W = KB.shape
    m = _block_size(L, W, k)
    blk_k, blk_f = _block_masks(KB, m), _block_masks(FB, m)
    out = np.zeros(5, dtype=np.int64)
    for pk, pf in zip(_prefix_masks(KB, k - m), _prefix_masks(FB, k - m)):
        n = _popcount_np(blk_k & pk).sum(axis=-1)
        hit = ((blk_f & pf) != 0).any(axis=-1)
        keep = n != excl_n
        out[0] += n.sum()
        out[1] += n[hit].sum()
        out[2] += keep.sum()
        out[3] += n[keep].sum()
        out[4] += n[keep & hit].sum()
    return out


def _weights_np(kbits, allowed, k):
    KB = kbits[allowed]
    L, W = KB.shape
    m = _block_size(L, W, k)
    blk = _block_masks(KB, m)
    chunks = [_popcount_np(blk & pk).sum(axis=-1) for pk in _prefix_masks(KB, k - m)]
    return np.concatenate(chunks)


def _rk_np(vadd, smul, fadd, fmul, fv, q, k):
    V = vadd.shape[0]
    d = k - 1
    total = 0
    passes = 0
    coeffs = np.arange(1, q)

    def grow(span: np.ndarray, x: int) -> np.ndarray:
        members = np.flatnonzero(span)
        new = np.zeros(V, dtype=bool)
        new[vadd[members[:, None], smul[np.arange(q)[None, :], x]].ravel()] = True
        return new

    def walk(prefix: list[int], span: np.ndarray) -> None:
        nonlocal total, passes
        cand = np.flatnonzero(~span)
        if len(prefix) < d - 1:
            for x in cand:
                walk(prefix + [int(x)], grow(span, int(x)))
            return
        # all coefficient choices for the prefix
        s_pre = np.zeros(1, dtype=np.int64)
        t_pre = np.zeros(1, dtype=np.int64)
        for x in prefix:
            s_pre = vadd[s_pre[:, None], smul[coeffs[None, :], x]].ravel()
            t_pre = fadd[t_pre[:, None], fmul[coeffs[None, :], fv[x]]].ravel()
        s = vadd[s_pre[:, None, None], smul[coeffs[None, None, :], cand[None, :, None]]]
        t = fadd[t_pre[:, None, None], fmul[coeffs[None, None, :], fv[cand][None, :, None]]]
        total += s.size
        passes += int(np.sum(fv[s] == t))

    span0 = np.zeros(V, dtype=bool)
    span0[0] = True
    walk([], span0)
    return total, passes


# ---------------------------------------------------------------------------
# dispatch


def scan_tuples(kbits, fbits, allowed, k: int, excl_n: int = -1) -> np.ndarray:
    """Sums over all tuples of ``allowed^k``.

    Returns ``[sum N, sum N*hit, #kept, sum_kept N, sum_kept N*hit]`` where
    ``N`` is the popcount of the AND of ``kbits``, ``hit`` says the AND of
    ``fbits`` is nonzero and a tuple is kept unless ``N == excl_n``.
    """
    allowed = np.ascontiguousarray(allowed, dtype=np.int64)
    if backend() == "numba":
        return _scan_nb(kbits, fbits, allowed, int(k), int(excl_n))
    return _scan_np(kbits, fbits, allowed, int(k), int(excl_n))


def tuple_weights(kbits, allowed, k: int) -> np.ndarray:
    """Popcount of the AND mask for every tuple, first coordinate most significant."""
    allowed = np.ascontiguousarray(allowed, dtype=np.int64)
    if backend() == "numba":
        return _weights_nb(kbits, allowed, int(k))
    return _weights_np(kbits, allowed, int(k))


def rk_pass_count(vadd, smul, fadd, fmul, fv, q: int, k: int) -> tuple[int, int]:
    """Enumerate ``x_1..x_{k-1}`` independent and nonzero ``a``; count linearity passes."""
    args = [np.ascontiguousarray(a, dtype=np.int64) for a in (vadd, smul, fadd, fmul, fv)]
    if backend() == "numba":
        total, passes = _rk_nb(*args, int(q), int(k))
    else:
        total, passes = _rk_np(*args, int(q), int(k))
    return int(total), int(passes)
