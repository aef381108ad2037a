"""Shared fixtures and the acceptance summary printed after the run."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from homtest.samplers import RngStream

settings.register_profile(
    "homtest",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("homtest")

# criterion number -> (status, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return RngStream(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
