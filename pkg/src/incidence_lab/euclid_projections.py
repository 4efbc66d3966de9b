"""Direction sets and discrete orthogonal projections of planar point sets.

A direction class is a projective direction (v and -v identified).  The
projection of X orthogonal to a direction theta is counted as the number of
lines parallel to theta needed to cover X.  Only directions spanned by X can
shrink that count below |X|, so exceptional sets are found by sweeping the
direction set alone.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .corpus import is_collinear
from .errors import DomainError, PreconditionError
from .euclid_core import RatLine, RatPoint, connecting_line_members, normalize_direction
from .reports import BLOCKING, TRACKED, ReportList, make_report

PRODUCT_SET_ID = "exceptional_product_set"
CS_DIR_ID = "exceptional_cauchy_schwarz"
ST_DIR_ID = "exceptional_szemeredi_trotter"
UNGAR_ID = "ungar_directions"
SG_ID = "sylvester_gallai"

# constants that the covering arguments give explicitly (see module tests)
CS_DIR_CONSTANT = 4
ST_DIR_CONSTANT = 1728


@dataclass(frozen=True, order=True)
class DirectionClass:
    vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "vector", normalize_direction(self.vector))

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.vector) + "]"


class NotedSet(set):
    """A set with attached notes."""

    def __init__(self, items=(), notes=()):
        super().__init__(items)
        self.notes = list(notes)


def direction_set(X: Iterable[RatPoint]) -> set[DirectionClass]:
    X = sorted(set(X))
    if len(X) < 2:
        raise DomainError("direction set needs at least 2 points")
    return {DirectionClass(y - x) for i, x in enumerate(X) for y in X[i + 1:]}


def covering_count(X: Iterable[RatPoint], theta: DirectionClass) -> int:
    """Number of lines parallel to theta needed to cover X."""
    return len({RatLine.through_direction(x, theta.vector).base for x in X})


def covering_profile(X: Iterable[RatPoint], members: dict | None = None) -> dict[DirectionClass, int]:
    """covering_count for every spanned direction; unspanned directions give |X|.

    A connecting line with k points in direction theta merges k points into
    one covering line, so the count is |X| minus the sum of (k - 1) over the
    connecting lines in that direction.
    """
    X = set(X)
    if len(X) < 2:
        raise DomainError("direction set needs at least 2 points")
    if members is None:
        members = connecting_line_members(X)
    prof: dict[DirectionClass, int] = {}
    for l, pts in members.items():
        d = DirectionClass(l.direction)
        prof[d] = prof.get(d, len(X)) - (len(pts) - 1)
    return prof


def exceptional_directions(X: Iterable[RatPoint], s: int, profile: dict | None = None):
    """Spanned directions whose covering count is below s, plus three bound reports.

    (a) at most one direction can be covered by fewer than |X|^(1/2) lines;
    (b) |E_s| <= 4 s and (c) |E_s| <= 1728 max(s^2/|X|, 1) for s <= |X|/2.
    (b) and (c) record the empirical ratio and are tracked.
    """
    X = set(X)
    m = len(X)
    if not 1 <= s <= m:
        raise DomainError(f"need 1 <= s <= |X| = {m}, got s={s}")
    if profile is None:
        profile = covering_profile(X) if m >= 2 else {}
    E = {d for d, c in profile.items() if c < s}
    reports = ReportList()
    # covering by c lines with c^2 < |X| is the strict form of c < |X|^(1/2)
    small = sum(1 for c in profile.values() if c * c < m)
    floor_small = sum(1 for c in profile.values() if c < math.isqrt(m))
    reports.append(
        make_report(
            PRODUCT_SET_ID, "product-set exceptional direction bound", small, 1,
            tier=BLOCKING, size=m, floor_threshold_count=floor_small,
        )
    )
    if 2 * s <= m:
        reports.append(
            make_report(
                CS_DIR_ID, "Cauchy-Schwarz exceptional direction bound", len(E),
                CS_DIR_CONSTANT * s, constant=CS_DIR_CONSTANT, tier=TRACKED, size=m, s=s,
            )
        )
        reports.append(
            make_report(
                ST_DIR_ID, "Szemeredi-Trotter exceptional direction bound", len(E),
                ST_DIR_CONSTANT * max(Fraction(s * s, m), Fraction(1)), constant=ST_DIR_CONSTANT,
                tier=TRACKED, size=m, s=s,
            )
        )
    else:
        reports.notes.append(f"s={s} > |X|/2: Cauchy-Schwarz and Szemeredi-Trotter forms not evaluated")
    return E, reports


def ordinary_lines(X: Iterable[RatPoint]) -> NotedSet:
    """Spanned lines with exactly two points of X."""
    X = set(X)
    if len(X) < 3:
        raise DomainError("ordinary lines need at least 3 points")
    members = connecting_line_members(X)
    out = NotedSet(l for l, pts in members.items() if len(pts) == 2)
    if len(members) == 1:
        out.notes.append("collinear input")
    elif not out:
        raise AssertionError("noncollinear set without an ordinary line")
    return out


def sylvester_gallai_report(X: Iterable[RatPoint], members: dict | None = None):
    """A noncollinear set spans at least one ordinary line."""
    X = set(X)
    if len(X) < 3 or is_collinear(X):
        raise PreconditionError("ordinary line existence needs a noncollinear set")
    if members is None:
        members = connecting_line_members(X)
    count = sum(1 for pts in members.values() if len(pts) == 2)
    return make_report(SG_ID, "ordinary line existence", 1, count, tier=BLOCKING, size=len(X))


def ungar_report(X: Iterable[RatPoint], members: dict | None = None):
    """|S(X)| >= |X| - 1 for noncollinear planar X."""
    X = set(X)
    if any(x.n != 2 for x in X):
        raise DomainError("the direction bound is planar")
    if len(X) < 3 or is_collinear(X):
        raise PreconditionError("direction bound needs a noncollinear set")
    if members is None:
        S = direction_set(X)
    else:
        S = {DirectionClass(l.direction) for l in members}
    return make_report(UNGAR_ID, "Ungar direction bound", len(X) - 1, len(S), tier=BLOCKING,
                       size=len(X), directions=len(S))


def richness_histogram(X: Iterable[RatPoint]) -> Counter:
    """Counter of |X cap l| over connecting lines."""
    return Counter(len(p) for p in connecting_line_members(X).values())
