"""Campaign runner: one report row per (config row, function, k).

Every numeric field is tagged ``exact`` or ``estimated``.  Rows run on a
process pool, each with its own RNG stream derived from ``(seed, row
index)``, and the report is assembled in config order, so identical
(config, seed) pairs give byte-identical JSON for any worker count.
Wall-clock times are only recorded when asked for.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds as B
from .config import ExperimentConfig, ExperimentRow, parse_space
from .errors import HomtestError, Unsupported
from .homs import CodewordSpace, QueryFunction
from .oracles import FunctionGenerator, list_decode
from .procedures import TestSpec, delta_exact, delta_mc, max_agreement, theorem_bounds_or_none
from .samplers import RngStream

ft = B.fraction_text


def exact_num(x: Fraction) -> dict:
    x = Fraction(x)
    return {"value": ft(x), "float": float(x), "tag": "exact"}


def estimated_num(x: float, ci=None) -> dict:
    out = {"value": float(x), "tag": "estimated"}
    if ci is not None:
        out["ci99"] = [float(ci[0]), float(ci[1])]
    return out


@contextmanager
def row_cap(cap: int | None):
    """Temporarily set ``HOMTEST_CAP`` for one row."""
    if cap is None:
        yield
        return
    old = os.environ.get("HOMTEST_CAP")
    os.environ["HOMTEST_CAP"] = str(cap)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop("HOMTEST_CAP", None)
        else:
            os.environ["HOMTEST_CAP"] = old


def build_functions(row: ExperimentRow, space: CodewordSpace, rng: RngStream) -> list[tuple[QueryFunction, bool]]:
    """The row's query functions, each with a flag saying whether it is a codeword."""
    g = row.gen
    if g.kind == "all":
        return [(QueryFunction.from_row(space, c), True) for c in range(space.size)]
    homs = g.homs
    if g.kind == "corrupt" and not homs:
        homs = (space.codewords[min(1, space.size - 1)].text(),)
    gen = FunctionGenerator(g.kind, homs, g.alpha, g.constant)
    count = 1 if g.kind == "exact" else row.count
    out = []
    for i in range(count):
        f = gen.generate(space, rng.split(i))
        if count > 1:
            f.label = f"{f.label}#{i}"
        out.append((f, g.kind == "exact"))
    return out


def _list_sizes(f: QueryFunction, space: CodewordSpace, eps) -> tuple[list[dict], bool]:
    out, ok = [], True
    for e in eps:
        try:
            rep = list_decode(f, space, e)
        except Unsupported as exc:
            out.append({"eps": ft(e), "size": None, "reason": str(exc)})
            continue
        out.append({
            "eps": ft(e),
            "size": {"value": len(rep.codewords), "tag": "exact"},
            "bound": exact_num(rep.bound),
            "bound_id": rep.bound_id,
            "satisfied": rep.satisfied,
        })
        ok &= rep.satisfied
    return out, ok


def run_row(row: ExperimentRow, index: int, timings: bool = False) -> dict:
    """Evaluate one config row.  Library errors become a per-row error entry."""
    t0 = time.perf_counter()
    out: dict = {"index": index, "line": row.line, "name": row.name, "space": row.space, "test": row.test}
    rng = RngStream(row.seed, (index,))
    try:
        with row_cap(row.cap):
            space = parse_space(row.space)
            fs = build_functions(row, space, rng.split(0))
            entries = []
            for fi, (f, is_codeword) in enumerate(fs):
                for k in row.k:
                    entries.append(_entry(row, space, f, is_codeword, k, rng.split(1).split(fi).split(k)))
            out["entries"] = entries
            out["ok"] = all(e["ok"] for e in entries)
    except HomtestError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
        out["entries"] = []
        out["ok"] = True
    if timings:
        out["elapsed_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return out


def _entry(row: ExperimentRow, space: CodewordSpace, f: QueryFunction, is_codeword: bool, k: int, rng: RngStream) -> dict:
    spec = TestSpec(row.test, space, k, relaxed=row.relaxed)
    e: dict = {"function": f.label, "k": k}
    checks: dict[str, bool] = {}
    if row.mode == "exact":
        est = delta_exact(spec, f, method="auto")
        delta = Fraction(est.value)
        e["delta"] = {**exact_num(delta), "method": est.method}
        if is_codeword:
            checks["completeness"] = delta == 1
        bnd, why = theorem_bounds_or_none(spec, delta)
        mx = max_agreement(spec, f)
        e["max_agreement"] = exact_num(mx)
        if bnd is not None:
            e["bounds"] = {
                "lower": exact_num(bnd.lower),
                "upper": exact_num(bnd.upper),
                "theorem_id": bnd.theorem_id,
            }
            checks["containment"] = bnd.contains(mx)
        else:
            e["bounds"] = None
            e["bounds_unavailable"] = why
    else:
        est = delta_mc(spec, f, row.trials, rng)
        e["delta"] = {**estimated_num(est.value, (est.ci_low, est.ci_high)), "trials": est.trials, "passes": est.passes}
        if is_codeword:
            checks["completeness"] = est.passes == est.trials
        bnd, why = theorem_bounds_or_none(spec, Fraction(est.passes, est.trials))
        if bnd is not None:
            e["bounds"] = {
                "lower": estimated_num(bnd.lower),
                "upper": estimated_num(bnd.upper),
                "theorem_id": bnd.theorem_id,
            }
        else:
            e["bounds"] = None
            e["bounds_unavailable"] = why
    if row.eps:
        e["list_sizes"], checks["list_size"] = _list_sizes(f, space, row.eps)
    e["checks"] = checks
    e["ok"] = all(checks.values())
    return e


def _row_job(args):
    row, index, timings = args
    return run_row(row, index, timings)


@dataclass
class RunReport:
    config: list[dict]
    rows: list[dict]
    warnings: list[str]
    verification: dict | None = None
    elapsed_ms: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        rows_ok = all(r["ok"] for r in self.rows)
        return rows_ok and (self.verification is None or self.verification["ok"])

    def as_dict(self) -> dict:
        out = {
            "config": self.config,
            "rows": self.rows,
            "warnings": self.warnings,
            "verification": self.verification,
            "ok": self.ok,
        }
        if self.elapsed_ms is not None:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def run_campaign(cfg: ExperimentConfig, workers: int = 1, timings: bool = False, matrix_path: str | None = None) -> RunReport:
    """Run every row; optionally the oracle matrix when a row asks for it."""
    t0 = time.perf_counter()
    jobs = [(row, i, timings) for i, row in enumerate(cfg.rows)]
    if workers <= 1 or len(jobs) == 1:
        rows = [_row_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_job, jobs))
    verification = None
    vrows = [r for r in cfg.rows if r.verify == "all"]
    if vrows:
        from .suite import matrix_csv, run_suite, suite_summary

        seed = vrows[0].seed
        results = run_suite("all", None, seed, workers)
        summary = suite_summary(results, seed, None, "all")
        verification = {"ok": summary["ok"], "counts": summary["counts"], "csv": matrix_path,
                        "counterexamples": summary["counterexamples"]}
        if matrix_path:
            with open(matrix_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(matrix_csv(results))
    elapsed = round((time.perf_counter() - t0) * 1000, 3) if timings else None
    return RunReport([r.echo() for r in cfg.rows], rows, cfg.warnings, verification, elapsed)


def _cell(x) -> str:
    if x is None:
        return "-"
    if x.get("tag") == "exact":
        return f"{x['float']:.6f}"
    return f"{x['value']:.6f}~"


def summary_table(report: RunReport) -> str:
    """Aligned text table of the report (``~`` marks estimated numbers)."""
    head = ("row", "space", "test", "function", "k", "delta", "lower", "max_agr", "upper", "status")
    lines = [head]
    for r in report.rows:
        if "error" in r:
            lines.append((str(r["index"]), r["space"], r["test"], "-", "-", "-", "-", "-", "-", "ERROR " + r["error"]))
            continue
        for e in r["entries"]:
            b = e.get("bounds") or {}
            status = "ok" if e["ok"] else "FAIL " + ",".join(c for c, v in e["checks"].items() if not v)
            lines.append((
                str(r["index"]), r["space"], r["test"], e["function"], str(e["k"]), _cell(e["delta"]),
                _cell(b.get("lower")), _cell(e.get("max_agreement")), _cell(b.get("upper")), status,
            ))
    widths = [max(len(row[i]) for row in lines) for i in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in lines) + "\n"


__all__ = ["RunReport", "build_functions", "run_campaign", "run_row", "summary_table"]
