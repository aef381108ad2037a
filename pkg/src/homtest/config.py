"""Experiment configuration: the flat key-value format and space specs.

A config is UTF-8 text.  Blank lines and lines starting with ``#`` are
ignored.  A line starting with ``default`` sets keys for every later row;
any other line is one experiment row.  Both hold whitespace-separated
``key=value`` tokens::

    # cyclic sweep
    default seed=7 mode=exact
    space=Z/27->Z/9 test=ker k=4..6 gen=corrupt(mul:1,0.6) count=3
    space=V(2,5)->F2 test=vspace k=3,5 gen=random

Keys
----
space
    ``G->H`` for homomorphisms; ``D(p)`` or ``Aut(D(p))`` for dihedral
    automorphisms; ``Inn(G)`` or a bare non-abelian group for inner
    automorphisms; ``G-proj->H`` or ``G-proj(arg)->H`` for a lift along a
    named projection (``det``, ``trace``, ``mod``, ``cmod``, ``id``).
    ``GL(n,q)->X`` and ``gl(n,q)->X`` are shorthands for the det and trace
    lifts.  ``scale(H,d)`` as codomain composes with ``y -> d y``.
test
    ``ker``, ``vspace``, ``nonzero``, ``dihedral``, ``inner``,
    ``liftedvspace`` or ``auto`` (default, chosen from the space).
k
    An integer, a range ``a..b`` or a list ``a,b,c``.
gen
    ``all`` (every codeword), ``exact(h)``, ``corrupt(h,alpha)`` or
    ``corrupt(alpha)``, ``random``, ``shift(h,c)``, ``mix(h1,h2,...)``.
count
    Number of generated functions for the randomized generators (default 1).
mode
    ``exact`` or ``mc(trials)``.
seed, eps, relaxed, cap, name, verify
    RNG seed; epsilon grid for list sizes (``1/9,1/3``); the relaxed
    vector-space sampler; an enumeration cap for this row; a row label;
    ``none`` or ``all`` to run the oracle matrix with the campaign.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import ConfigError, HomtestError
from .groups import Cyclic, Dihedral, GeneralLinear, Group, LieGL, _split_top, cached_group
from .homs import (
    CodewordSpace,
    Inclusion,
    ScaleInclusion,
    aut_space,
    hom_space,
    inn_space,
    lift_space,
    make_projection,
)
from .procedures import KINDS, TestSpec, default_kind

KEYS = ("space", "test", "k", "gen", "count", "mode", "seed", "eps", "relaxed", "cap", "name", "verify")

_LIFT = re.compile(r"(?P<G>.+?)-(?P<proj>[a-z]+)(?:\((?P<arg>\d+)\))?->(?P<H>.+)")
_HOM = re.compile(r"(?P<G>.+?)->(?P<H>.+)")
_WRAP = re.compile(r"(?P<name>Aut|Inn)\((?P<body>.+)\)")
_SCALE = re.compile(r"scale\((?P<H>.+),(?P<d>\d+)\)")


class ConfigWarning(UserWarning):
    """A theorem precondition is violated; the run proceeds without bounds."""


# ---------------------------------------------------------------------------
# spaces


def _group(text: str) -> Group:
    try:
        return cached_group(text)
    except HomtestError as exc:
        raise ConfigError(str(exc)) from None


def _codomain(text: str) -> tuple[Group, Inclusion | None]:
    m = _SCALE.fullmatch(text)
    if m:
        H = _group(m["H"])
        if not isinstance(H, Cyclic):
            raise ConfigError("scale inclusions need a cyclic base codomain")
        return H, ScaleInclusion(H, int(m["d"]))
    return _group(text), None


def _lift(G: Group, proj_name: str, arg: int | None, H_text: str) -> CodewordSpace:
    H, inj = _codomain(H_text)
    try:
        proj = make_projection(proj_name, G, arg)
        return lift_space(G, proj, H, inj)
    except HomtestError as exc:
        raise ConfigError(str(exc)) from None


def parse_space(text: str) -> CodewordSpace:
    """Build a codeword space from its text form (see the module docstring)."""
    s = text.strip().replace(" ", "")
    m = _WRAP.fullmatch(s)
    if m:
        G = _group(m["body"])
        if m["name"] == "Aut":
            if not isinstance(G, Dihedral):
                raise ConfigError("Aut(...) is only available for dihedral groups D(p)")
            return aut_space(G)
        return inn_space(G)
    m = _LIFT.fullmatch(s)
    if m:
        G = _group(m["G"])
        return _lift(G, m["proj"], int(m["arg"]) if m["arg"] else None, m["H"])
    m = _HOM.fullmatch(s)
    if m:
        G = _group(m["G"])
        if isinstance(G, GeneralLinear):
            return _lift(G, "det", None, m["H"])
        if isinstance(G, LieGL):
            return _lift(G, "trace", None, m["H"])
        H, inj = _codomain(m["H"])
        if inj is not None:
            raise ConfigError("scale(...) codomains are only meaningful for lifts")
        try:
            return hom_space(G, H)
        except HomtestError as exc:
            raise ConfigError(str(exc)) from None
    if "->" in s:
        raise ConfigError(f"cannot parse space {text!r}")
    G = _group(s)
    if isinstance(G, Dihedral):
        return aut_space(G)
    if G.abelian:
        raise ConfigError(f"{G.text()} is abelian; give a codomain as {G.text()}->H")
    return inn_space(G)


# ---------------------------------------------------------------------------
# scalar fields


def parse_k(text: str) -> tuple[int, ...]:
    t = text.strip()
    try:
        if ".." in t:
            a, b = t.split("..")
            ks = tuple(range(int(a), int(b) + 1))
        else:
            ks = tuple(int(v) for v in t.split(","))
    except ValueError:
        raise ConfigError(f"cannot parse k={text!r}") from None
    if not ks or min(ks) < 1:
        raise ConfigError(f"k={text!r} must name positive integers")
    return ks


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse number {text!r}") from None


def parse_eps(text: str) -> tuple[Fraction, ...]:
    out = tuple(parse_fraction(v) for v in text.split(","))
    if any(e <= 0 or e > 1 for e in out):
        raise ConfigError("epsilon values must lie in (0, 1]")
    return out


def parse_mode(text: str) -> tuple[str, int | None]:
    t = text.strip()
    if t == "exact":
        return "exact", None
    m = re.fullmatch(r"mc\((\d+)\)", t)
    if m and int(m[1]) > 0:
        return "mc", int(m[1])
    raise ConfigError(f"mode must be exact or mc(trials), got {text!r}")


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"cannot parse boolean {text!r}")


@dataclass(frozen=True)
class GenSpec:
    """Parsed ``gen=`` value; homs stay as text until a space is at hand."""

    kind: str
    homs: tuple[str, ...] = ()
    alpha: Fraction | None = None
    constant: str | None = None

    def text(self) -> str:
        if self.kind == "corrupt":
            base = (self.homs[0] + ",") if self.homs else ""
            return f"corrupt({base}{self.alpha})"
        if self.kind == "shift":
            return f"shift({self.homs[0]},{self.constant})"
        if self.homs:
            return f"{self.kind}({','.join(self.homs)})"
        return self.kind


def parse_gen(text: str) -> GenSpec:
    t = text.strip()
    m = re.fullmatch(r"(\w+)(?:\((.*)\))?", t)
    if not m:
        raise ConfigError(f"cannot parse generator {text!r}")
    name, body = m[1], m[2]
    args = [a.strip() for a in _split_top(body, ",")] if body else []
    if name in ("all", "random"):
        if args:
            raise ConfigError(f"gen={name} takes no arguments")
        return GenSpec(name)
    if name == "exact":
        if len(args) != 1:
            raise ConfigError("gen=exact(h) needs one hom")
        return GenSpec("exact", (args[0],))
    if name == "corrupt":
        if len(args) == 1:
            return GenSpec("corrupt", (), parse_fraction(args[0]))
        if len(args) == 2:
            return GenSpec("corrupt", (args[0],), parse_fraction(args[1]))
        raise ConfigError("gen=corrupt takes (alpha) or (h,alpha)")
    if name == "shift":
        if len(args) != 2:
            raise ConfigError("gen=shift(h,c) needs a hom and a constant")
        return GenSpec("shift", (args[0],), constant=args[1])
    if name == "mix":
        if len(args) < 1:
            raise ConfigError("gen=mix needs at least one hom")
        return GenSpec("mix", tuple(args))
    raise ConfigError(f"unknown generator {name!r}")


# ---------------------------------------------------------------------------
# rows


@dataclass(frozen=True)
class ExperimentRow:
    space: str
    test: str = "auto"
    k: tuple[int, ...] = (3,)
    gen: GenSpec = GenSpec("random")
    count: int = 1
    mode: str = "exact"
    trials: int | None = None
    seed: int = 0
    eps: tuple[Fraction, ...] = ()
    relaxed: bool = False
    cap: int | None = None
    name: str = ""
    verify: str = "none"
    line: int = 0
    warnings: tuple[str, ...] = ()

    def echo(self) -> dict:
        return {
            "space": self.space,
            "test": self.test,
            "k": list(self.k),
            "gen": self.gen.text(),
            "count": self.count,
            "mode": self.mode if self.trials is None else f"mc({self.trials})",
            "seed": self.seed,
            "eps": [str(e) for e in self.eps],
            "relaxed": self.relaxed,
            "cap": self.cap,
            "name": self.name,
            "verify": self.verify,
        }


@dataclass
class ExperimentConfig:
    rows: list[ExperimentRow] = field(default_factory=list)
    source: str = ""

    @property
    def warnings(self) -> list[str]:
        return [w for r in self.rows for w in r.warnings]


def _tokens(line: str, lineno: int):
    """``(key, value, column)`` triples, splitting on whitespace outside brackets."""
    col, depth, start = 0, 0, None
    out = []
    for i, ch in enumerate(line + " "):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch.isspace() and depth == 0:
            if start is not None:
                out.append((line[start:i], start + 1))
                start = None
        elif start is None:
            start = i
    if depth != 0:
        raise ConfigError("unbalanced brackets", lineno, len(line))
    for tok, col in out:
        key, eq, value = tok.partition("=")
        if not eq or not key:
            raise ConfigError(f"expected key=value, got {tok!r}", lineno, col)
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, col)
        yield key, value, col


def _apply(fields_: dict, key: str, value: str) -> None:
    if key == "space":
        fields_["space"] = value
    elif key == "test":
        if value != "auto" and value not in KINDS:
            raise ConfigError(f"unknown test {value!r}")
        fields_["test"] = value
    elif key == "k":
        fields_["k"] = parse_k(value)
    elif key == "gen":
        fields_["gen"] = parse_gen(value)
    elif key == "count":
        try:
            fields_["count"] = int(value)
        except ValueError:
            raise ConfigError(f"count must be an integer, got {value!r}") from None
        if fields_["count"] < 1:
            raise ConfigError("count must be positive")
    elif key == "mode":
        fields_["mode"], fields_["trials"] = parse_mode(value)
    elif key == "seed":
        try:
            fields_["seed"] = int(value)
        except ValueError:
            raise ConfigError(f"seed must be an integer, got {value!r}") from None
    elif key == "eps":
        fields_["eps"] = parse_eps(value)
    elif key == "relaxed":
        fields_["relaxed"] = parse_bool(value)
    elif key == "cap":
        try:
            fields_["cap"] = int(value)
        except ValueError:
            raise ConfigError(f"cap must be an integer, got {value!r}") from None
    elif key == "name":
        fields_["name"] = value
    elif key == "verify":
        if value not in ("none", "all"):
            raise ConfigError("verify must be none or all")
        fields_["verify"] = value


def theorem_warnings(space: CodewordSpace, kind: str, ks) -> list[str]:
    """Precondition problems that only remove the bounds, not the run."""
    out = []
    if kind == "vspace":
        bad = [k for k in ks if k < 3 or k % 2 == 0]
        if bad:
            out.append(f"k must be odd >= 3 for theorem bounds (got k={','.join(map(str, bad))})")
    if kind == "ker" and space.kind == "hom" and not isinstance(space.domain, Cyclic):
        out.append("no soundness theorem for the kernel test on a non-cyclic domain; bounds absent")
    return out


def validate_row(row: ExperimentRow) -> ExperimentRow:
    """Construct the space and test once so errors surface at parse time."""
    space = parse_space(row.space)
    kind = default_kind(space) if row.test == "auto" else row.test
    for k in row.k:
        try:
            TestSpec(kind, space, k, relaxed=row.relaxed)
        except HomtestError as exc:
            raise ConfigError(str(exc)) from None
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if kind not in ("vspace", "liftedvspace") and row.relaxed:
        raise ConfigError("relaxed=true only applies to the vector-space tests")
    notes = tuple(theorem_warnings(space, kind, row.k))
    for w in notes:
        warnings.warn(w, ConfigWarning, stacklevel=3)
    return replace(row, test=kind, warnings=notes)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config.  Errors carry line and column."""
    defaults: dict = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        body = line.lstrip()
        indent = len(line) - len(body)
        is_default = body.startswith("default ") or body == "default"
        if is_default:
            body = body[len("default") :]
            indent += len("default")
        target = defaults if is_default else dict(defaults)
        for key, value, col in _tokens(body, lineno):
            try:
                _apply(target, key, value)
            except ConfigError as exc:
                raise ConfigError(str(exc), lineno, col + indent) from None
        if is_default:
            continue
        if "space" not in target:
            raise ConfigError("row has no space=", lineno, 1)
        try:
            row = validate_row(ExperimentRow(line=lineno, **target))
        except ConfigError as exc:
            if exc.line is not None:
                raise
            raise ConfigError(str(exc), lineno, 1) from None
        rows.append(row)
    if not rows:
        raise ConfigError("config defines no rows")
    return ExperimentConfig(rows, text)


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


__all__ = [
    "ConfigWarning",
    "ExperimentConfig",
    "ExperimentRow",
    "GenSpec",
    "load_config",
    "parse_config",
    "parse_eps",
    "parse_gen",
    "parse_k",
    "parse_mode",
    "parse_space",
    "theorem_warnings",
]
