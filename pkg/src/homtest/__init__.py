"""Exact homomorphism testing over small finite groups.

Groups, codeword spaces, the evaluation-map constants, the test
distributions and procedures, brute-force oracles and a batch CLI.
"""

from .errors import ConfigError, HomtestError, InvalidElement, OutOfTheoremRange, TooLarge, Unsupported
from .groups import cached_group, parse_group

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "HomtestError",
    "InvalidElement",
    "OutOfTheoremRange",
    "TooLarge",
    "Unsupported",
    "cached_group",
    "parse_group",
]
