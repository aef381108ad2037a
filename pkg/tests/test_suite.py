from fractions import Fraction

import pytest

from homtest.suite import (
    IDENTITIES,
    REGISTRY,
    check_binomial,
    check_census,
    check_shifted_linear,
    check_shifted_trend,
    check_sym_slack,
    check_tv,
    matrix_csv,
    run_suite,
    select_tasks,
    shifted_residuals,
    suite_summary,
)


def test_registry_covers_identities():
    assert len(IDENTITIES) == 17
    assert {t.identity for t in REGISTRY} == set(IDENTITIES)


def test_select_tasks():
    assert len(select_tasks("all")) == len(REGISTRY)
    small = select_tasks("all", max_order=10)
    assert 0 < len(small) < len(REGISTRY)
    with pytest.raises(ValueError):
        select_tasks("nope")


def test_small_checks():
    assert check_binomial().ok
    assert check_census(2, 3, 3).ok
    assert check_tv(2, 3, 3).ok
    assert check_shifted_linear(2, 4, 3).ok
    assert check_sym_slack((4, 5, 6), (2, 3)).ok


def test_shifted_trend_witness_values():
    res = shifted_residuals(2, range(3, 8), 3)
    assert res == [Fraction(11, 28), Fraction(23, 140), Fraction(47, 620), Fraction(95, 2604), Fraction(191, 10668)]
    assert check_shifted_trend(2, range(3, 8), 3).ok


def test_full_suite_passes_and_is_deterministic():
    a = run_suite("all", None, 0, 1)
    assert all(r.status == "PASS" for r in a), [r.instance for r in a if r.status != "PASS"]
    b = run_suite("all", None, 0, 3)
    assert matrix_csv(a) == matrix_csv(b)
    s = suite_summary(a, 0, None, "all")
    assert s["ok"] and s["counts"]["PASS"] == len(REGISTRY)
