"""Enumeration caps.

Every exhaustive sweep checks its size against a cap before starting. The
default is 10**6 and can be overridden per call, through the ``LAB_CAP``
environment variable, or by :func:`set_default_cap` (used by ``--cap``).
"""

from __future__ import annotations

import os

from .errors import SizeLimitError

DEFAULT_CAP = 10**6

_override: int | None = None


def set_default_cap(cap: int | None) -> None:
    global _override
    if cap is not None and cap < 1:
        raise ValueError("cap must be positive")
    _override = cap


def resolve_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    if _override is not None:
        return _override
    env = os.environ.get("LAB_CAP")
    if env:
        return int(env)
    return DEFAULT_CAP


def check_cap(what: str, size: int, cap: int | None = None) -> None:
    limit = resolve_cap(cap)
    if size > limit:
        raise SizeLimitError(what, size, limit)
