"""Runtime caps and backend selection, read from the environment.

``HOMTEST_CAP``
    Maximum number of elements, codewords or tuples any single enumeration
    may visit (default ``10**6``).  Tuple scans compiled with numba are
    allowed ``TUPLE_CAP_FACTOR`` times more, because they never materialize
    the tuples.
``HOMTEST_FIELD_CAP``
    Largest field order for which lookup tables are built (default 64).
``HOMTEST_NO_NUMBA``
    When set to a non-empty value other than ``0``, the pure-numpy kernels
    are used instead of the compiled ones.
"""

from __future__ import annotations

import os

from .errors import TooLarge

DEFAULT_CAP = 10**6
DEFAULT_FIELD_CAP = 64
TUPLE_CAP_FACTOR = 1000


def enumeration_cap() -> int:
    return int(os.environ.get("HOMTEST_CAP", DEFAULT_CAP))


def tuple_cap() -> int:
    return enumeration_cap() * TUPLE_CAP_FACTOR


def field_cap() -> int:
    return int(os.environ.get("HOMTEST_FIELD_CAP", DEFAULT_FIELD_CAP))


def numba_disabled() -> bool:
    flag = os.environ.get("HOMTEST_NO_NUMBA", "")
    return flag not in ("", "0")


def check_cap(size: int, what: str, cap: int | None = None) -> None:
    """Raise :class:`TooLarge` when ``size`` exceeds ``cap``."""
    limit = enumeration_cap() if cap is None else cap
    if size > limit:
        raise TooLarge(f"{what}: {size} exceeds enumeration cap {limit}")
