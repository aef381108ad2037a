import warnings
from fractions import Fraction

import pytest

from homtest.config import (
    ConfigWarning,
    parse_config,
    parse_eps,
    parse_gen,
    parse_k,
    parse_mode,
    parse_space,
)
from homtest.errors import ConfigError


def test_parse_k():
    assert parse_k("3") == (3,)
    assert parse_k("2..5") == (2, 3, 4, 5)
    assert parse_k("3,5") == (3, 5)
    with pytest.raises(ConfigError):
        parse_k("x")


def test_parse_eps_and_mode():
    assert parse_eps("1/9,1/3") == (Fraction(1, 9), Fraction(1, 3))
    assert parse_mode("exact") == ("exact", None)
    assert parse_mode("mc(500)") == ("mc", 500)
    with pytest.raises(ConfigError):
        parse_mode("mc(x)")


def test_parse_gen():
    g = parse_gen("corrupt(mul:1,0.6)")
    assert g.kind == "corrupt" and g.homs == ("mul:1",) and g.alpha == Fraction(3, 5)
    g = parse_gen("mix(dih:(1,0),dih:(2,1))")
    assert g.homs == ("dih:(1,0)", "dih:(2,1)")
    assert parse_gen("shift(mul:1,2)").constant == "2"
    with pytest.raises(ConfigError):
        parse_gen("frobnicate")


@pytest.mark.parametrize("text,kind,size", [
    ("Z/27->Z/9", "hom", 9),
    ("D(5)", "aut", 20),
    ("Aut(D(7))", "aut", 42),
    ("Inn(S(3))", "inn", 6),
    ("S(4)", "inn", 24),
    ("Inn(H(3))", "inn", 9),
    ("GL(2,3)->F3*", "lift", 2),
    ("gl(2,3)->F3", "lift", 3),
    ("V(2,3)->F2", "hom", 8),
    ("Z/9-mod(3)->Z/3", "lift", 3),
])
def test_parse_space(text, kind, size):
    sp = parse_space(text)
    assert sp.kind == kind and sp.size == size


def test_config_defaults_and_rows():
    cfg = parse_config(
        "# header\n"
        "default seed=7 mode=exact\n"
        "space=Z/27->Z/9 k=4..5 gen=corrupt(mul:1,0.6) count=3\n"
        "space=D(5) k=3 seed=2  # inline comment\n"
    )
    a, b = cfg.rows
    assert (a.seed, a.k, a.count, a.test, a.line) == (7, (4, 5), 3, "ker", 3)
    assert (b.seed, b.test) == (2, "dihedral")
    assert a.echo()["gen"] == "corrupt(mul:1,3/5)"


@pytest.mark.parametrize("text,line,col", [
    ("space=Z/4->Z/4 k=2 bogus=1\n", 1, 20),
    ("\nspace=Z/4->Z/4 k=x\n", 2, 16),
    ("space=Z/4->Z/4 k=2\nspace=Q(8)->Z/2\n", 2, 1),
    ("k=3\n", 1, 1),
    ("default seed=1\n", None, None),
    ("space=V(2,2)->F2 test=vspace k=4\n", 1, 1),
    ("space=D(5) relaxed=true k=3\n", 1, 1),
])
def test_config_errors(text, line, col):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.line == line
    assert exc.value.column == col


def test_even_k_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConfigWarning)
        cfg = parse_config("space=V(2,4)->F2 test=vspace k=2..4\n")
    assert any("odd" in str(w.message) for w in caught)
    assert cfg.warnings and "k=2,4" in cfg.warnings[0]
