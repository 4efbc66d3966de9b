"""Verified-inequality records and exact comparison helpers.

A :class:`BoundReport` records one instance of an inequality ``lhs <= rhs``.
Both sides are exact rationals.  When the true right-hand side is irrational
(square or cube roots), the comparison is decided exactly in integer
arithmetic and ``rhs`` holds a rational endpoint of an enclosure that sits on
the same side of ``lhs`` as the true value.  ``holds == (lhs <= rhs)`` always.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

BLOCKING = "blocking"
TRACKED = "tracked"


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot of negative number")
    if n < 2:
        return n
    if k == 1:
        return n
    if k == 2:
        import math

        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def root_bracket(x: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= x**(1/k) <= hi`` with ``hi - lo <= 2**-bits``; equal when exact."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    a, b = x.numerator, x.denominator
    # x^(1/k) = (a * b^(k-1))^(1/k) / b
    m = a * b ** (k - 1)
    r = iroot(m, k)
    if r**k == m:
        v = Fraction(r, b)
        return v, v
    scale = 1 << bits
    s = iroot(m * scale**k, k)
    return Fraction(s, b * scale), Fraction(s + 1, b * scale)


def decide(lhs: Fraction, bracket: Callable[[int], tuple[Fraction, Fraction]]) -> tuple[bool, Fraction]:
    """Decide ``lhs <= value`` for a value known through rational brackets.

    Returns ``(holds, rhs)`` where ``rhs`` is exact when the bracket collapses,
    otherwise the bracket endpoint that keeps ``holds == (lhs <= rhs)``.
    """
    bits = 32
    while True:
        lo, hi = bracket(bits)
        if lo == hi:
            return lhs <= lo, lo
        if lhs <= lo:
            return True, lo
        if lhs > hi:
            return False, hi
        bits *= 2
        if bits > 1 << 16:
            raise ArithmeticError("bracket failed to separate from lhs")


def _jsonable(v: Any) -> Any:
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    anchor: str
    lhs: Fraction
    rhs: Fraction
    constant: Fraction
    holds: bool
    params: dict = field(default_factory=dict)
    tier: str = TRACKED

    def __post_init__(self):
        object.__setattr__(self, "lhs", Fraction(self.lhs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        object.__setattr__(self, "constant", Fraction(self.constant))
        if self.holds != (self.lhs <= self.rhs):
            raise AssertionError(f"{self.bound_id}: holds flag inconsistent with lhs={self.lhs} rhs={self.rhs}")
        if self.tier not in (BLOCKING, TRACKED):
            raise ValueError(f"unknown tier {self.tier!r}")

    @property
    def ratio(self) -> Fraction | None:
        return self.lhs / self.rhs if self.rhs > 0 else None

    @property
    def blocking(self) -> bool:
        return self.tier == BLOCKING

    def to_dict(self) -> dict:
        params = dict(self.params)
        params["tier"] = self.tier
        params["constant"] = self.constant
        params["ratio"] = self.ratio
        return {
            "bound_id": self.bound_id,
            "anchor": self.anchor,
            "lhs": _jsonable(self.lhs),
            "rhs_num": self.rhs.numerator,
            "rhs_den": self.rhs.denominator,
            "holds": self.holds,
            "params": _jsonable(params),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def make_report(
    bound_id: str,
    anchor: str,
    lhs,
    rhs,
    *,
    constant=1,
    tier: str = TRACKED,
    **params,
) -> BoundReport:
    """Build a report from exact rational sides, computing ``holds``."""
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    return BoundReport(bound_id, anchor, lhs, rhs, Fraction(constant), lhs <= rhs, params, tier)


def lower_bound_report(
    bound_id: str,
    anchor: str,
    bound_bracket: Callable[[int], tuple[Fraction, Fraction]],
    count: int,
    *,
    constant=1,
    tier: str = TRACKED,
    **params,
) -> BoundReport:
    """Report ``bound <= count`` for a possibly irrational lower bound.

    ``lhs`` is a bracket endpoint of the bound on the side matching the exact
    decision, so the stored sides stay consistent.
    """
    count_f = Fraction(count)
    # holds iff bound <= count iff not (count < bound)
    bits = 32
    while True:
        lo, hi = bound_bracket(bits)
        if lo == hi:
            return BoundReport(bound_id, anchor, lo, count_f, Fraction(constant), lo <= count_f, params, tier)
        if hi <= count_f:
            return BoundReport(bound_id, anchor, hi, count_f, Fraction(constant), True, params, tier)
        if lo > count_f:
            return BoundReport(bound_id, anchor, lo, count_f, Fraction(constant), False, params, tier)
        bits *= 2
        if bits > 1 << 16:
            raise ArithmeticError("bracket failed to separate from count")


class ReportList(list):
    """A list of reports plus free-form notes (e.g. skipped report families)."""

    def __init__(self, reports=(), notes=()):
        super().__init__(reports)
        self.notes: list[str] = list(notes)

    def extend_from(self, other: "ReportList") -> None:
        self.extend(other)
        self.notes.extend(getattr(other, "notes", []))

    @property
    def violations(self) -> list[BoundReport]:
        return [r for r in self if not r.holds]
