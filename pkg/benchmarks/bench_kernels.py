"""Numba vs numpy timings for the tuple-enumeration kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each case checks that both backends return the same numbers before timing.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from homtest import kernels
from homtest.config import parse_space
from homtest.engine import kernel_bits, query_bits
from homtest.homs import QueryFunction
from homtest.samplers import RngStream, VSpaceTables


def _random_f(space, seed=0):
    idx = RngStream(seed).integers(0, space.codomain.order, size=space.domain.order)
    return QueryFunction(space.domain, space.codomain, idx)


def scan_case(text, k):
    sp = parse_space(text)
    kb, fb = kernel_bits(sp), query_bits(sp, _random_f(sp))
    allowed = np.arange(sp.domain.order, dtype=np.int64)
    return (f"scan {text} k={k}", (kb, fb, allowed, k, -1), kernels._scan_nb, kernels._scan_np)


def weights_case(text, k):
    sp = parse_space(text)
    allowed = np.arange(sp.domain.order, dtype=np.int64)
    return (f"weights {text} k={k}", (kernel_bits(sp), allowed, k), kernels._weights_nb, kernels._weights_np)


def rk_case(q, n, k):
    T = VSpaceTables(q, n)
    fv = RngStream(1).integers(0, q, size=q**n).astype(np.int64)
    args = tuple(np.ascontiguousarray(a, dtype=np.int64) for a in (T.add, T.smul, T.F.add, T.F.mul, fv)) + (q, k)
    return (f"rk V({q},{n}) k={k}", args, kernels._rk_nb, kernels._rk_np)


CASES = [
    lambda: scan_case("Z/27->Z/9", 5),
    lambda: scan_case("D(7)", 4),
    lambda: scan_case("Inn(S(5))", 3),
    lambda: scan_case("Inn(H(3))", 4),
    lambda: weights_case("Z/12->Z/6", 4),
    lambda: weights_case("D(5)", 4),
    lambda: rk_case(2, 5, 5),
    lambda: rk_case(3, 4, 4),
]


def _best(fn, args, repeat):
    out = None
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(int(x) == int(y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="write the timings here")
    args = ap.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    print(f"{'case':34} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for make in CASES:
        name, a, nb, np_ = make()
        nb(*a)  # compile outside the timing
        t_nb, r_nb = _best(nb, a, args.repeat)
        t_np, r_np = _best(np_, a, args.repeat)
        if not _same(r_nb, r_np):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        rows.append({"case": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb})
        print(f"{name:34} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
