"""Exact rational incidence geometry in R^n.

Points and lines carry Fraction coordinates; every predicate is an exact
equality test.  Lines are stored in a canonical form so they can be hashed
and deduplicated.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInputError, DomainError, NotRepresentableError, RetryLimitError
from .reports import BLOCKING, decide, make_report, root_bracket, BoundReport

CS_ID = "cauchy_schwarz_incidences"
ST_ID = "szemeredi_trotter"


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True, order=True)
class RatPoint:
    coords: tuple

    def __post_init__(self):
        c = tuple(_frac(v) for v in self.coords)
        if len(c) < 1:
            raise DomainError("points need at least one coordinate")
        object.__setattr__(self, "coords", c)

    @classmethod
    def of(cls, *coords) -> "RatPoint":
        return cls(tuple(coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __sub__(self, other: "RatPoint") -> tuple:
        return tuple(a - b for a, b in zip(self.coords, other.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def normalize_direction(d: Sequence) -> tuple:
    """Scale so the first nonzero coordinate is 1."""
    d = tuple(_frac(v) for v in d)
    lead = next((v for v in d if v != 0), None)
    if lead is None:
        raise DegenerateInputError("zero direction vector")
    return tuple(v / lead for v in d)


@dataclass(frozen=True, order=True)
class RatLine:
    """Line ``base + t*direction``; base is the foot of the perpendicular from 0."""

    direction: tuple
    base: RatPoint

    @classmethod
    def through_direction(cls, point: RatPoint, direction: Sequence) -> "RatLine":
        if len(direction) == 2 == point.n:
            # planar fast path: direction (1, m) or (0, 1)
            dx, dy = _frac(direction[0]), _frac(direction[1])
            x, y = point.coords
            if dx:
                m = dy / dx
                t = (x + y * m) / (1 + m * m)
                return cls((Fraction(1), m), RatPoint((x - t, y - t * m)))
            if not dy:
                raise DegenerateInputError("zero direction vector")
            return cls((Fraction(0), Fraction(1)), RatPoint((x, Fraction(0))))
        d = normalize_direction(direction)
        if len(d) != point.n:
            raise DomainError("direction and point dimensions differ")
        a = point.coords
        t = _dot(a, d) / _dot(d, d)
        return cls(d, RatPoint(tuple(x - t * y for x, y in zip(a, d))))

    @property
    def n(self) -> int:
        return len(self.direction)

    @staticmethod
    def _offset_along(d: tuple, x: RatPoint) -> Fraction:
        """y - m x for direction (1, m), x for the vertical direction."""
        if d[0]:
            return x.coords[1] - d[1] * x.coords[0]
        return x.coords[0]

    def _offset(self, x: RatPoint) -> Fraction:
        return self._offset_along(self.direction, x)

    def contains(self, x: RatPoint) -> bool:
        if x.n != self.n:
            raise DomainError(f"point of dimension {x.n} tested against line in R^{self.n}")
        if self.n == 2:
            return self._offset(x) == self._offset(self.base)
        diff = x - self.base
        i = next(j for j, v in enumerate(self.direction) if v != 0)
        t = diff[i] / self.direction[i]
        return all(dv == t * v for dv, v in zip(diff, self.direction))

    def point_at(self, t) -> RatPoint:
        return RatPoint(tuple(b + t * d for b, d in zip(self.base.coords, self.direction)))

    def is_vertical(self) -> bool:
        return self.n == 2 and self.direction[0] == 0

    def __str__(self) -> str:
        return f"{self.base} + t({', '.join(str(c) for c in self.direction)})"


def line_through(x: RatPoint, y: RatPoint) -> RatLine:
    if x.n != y.n:
        raise DomainError("points of different dimensions")
    if x == y:
        raise DegenerateInputError(f"line_through needs distinct points, got {x} twice")
    return RatLine.through_direction(x, y - x)


def line_y_eq(m, b) -> RatLine:
    """The planar line y = m x + b."""
    return RatLine.through_direction(RatPoint.of(0, b), (1, m))


def intersection(l1: RatLine, l2: RatLine) -> RatPoint | None:
    """Common point of two lines, or None when they are parallel, equal, or skew."""
    if l1.n != l2.n:
        raise DomainError("lines of different dimensions")
    if l1.direction == l2.direction:
        return None
    if l1.n == 2:
        if l2.is_vertical():
            l1, l2 = l2, l1
        c1, c2 = l1._offset(l1.base), l2._offset(l2.base)
        m2 = l2.direction[1]
        if l1.is_vertical():
            return RatPoint((c1, m2 * c1 + c2))
        x = (c2 - c1) / (l1.direction[1] - m2)
        return RatPoint((x, m2 * x + c2))
    a, d, b, e = l1.base.coords, l1.direction, l2.base.coords, l2.direction
    # solve a + t d = b + u e on a pair of coordinates with nonzero determinant
    for i, j in itertools.combinations(range(l1.n), 2):
        det = -d[i] * e[j] + d[j] * e[i]
        if det != 0:
            ri, rj = b[i] - a[i], b[j] - a[j]
            t = (-ri * e[j] + rj * e[i]) / det
            pt = l1.point_at(t)
            return pt if l2.contains(pt) else None
    return None


# incidences -------------------------------------------------------------------


@dataclass
class IncidenceTally:
    total: int = 0
    per_line: dict = field(default_factory=dict)
    per_point: dict = field(default_factory=dict)


def _check_dims(P, L):
    dims = {x.n for x in P} | {l.n for l in L}
    if len(dims) > 1:
        raise DomainError(f"mixed ambient dimensions {sorted(dims)}")


def incidences(P: Iterable[RatPoint], L: Iterable[RatLine]) -> IncidenceTally:
    """Exact incidence tally.

    Lines are grouped by direction; for each direction every point is mapped
    to the canonical line through it, so the cost is (#directions) x |P|.
    """
    P, L = set(P), set(L)
    _check_dims(P, L)
    tally = IncidenceTally(per_line={l: 0 for l in L}, per_point={x: 0 for x in P})
    by_dir = defaultdict(dict)
    for l in L:
        by_dir[l.direction][l.base if l.n != 2 else l._offset(l.base)] = l
    for d, lines in by_dir.items():
        for x in P:
            if x.n == 2:
                # parallel planar lines are told apart by one scalar offset
                l = lines.get(RatLine._offset_along(d, x))
            else:
                l = lines.get(RatLine.through_direction(x, d).base)
            if l is not None:
                tally.total += 1
                tally.per_line[l] += 1
                tally.per_point[x] += 1
    return tally


def _min_bracket(*brackets):
    def br(bits):
        ends = [b(bits) for b in brackets]
        return min(lo for lo, _ in ends), min(hi for _, hi in ends)

    return br


def bound_report_cs_st(P, L, tally: IncidenceTally | None = None) -> tuple[BoundReport, BoundReport]:
    """Incidence count against the Cauchy-Schwarz and Szemeredi-Trotter bounds."""
    P, L = set(P), set(L)
    if tally is None:
        tally = incidences(P, L)
    I, np_, nl = Fraction(tally.total), len(P), len(L)

    def cs_a(bits):
        lo, hi = root_bracket(Fraction(nl), 2, bits)
        return np_ * lo + nl, np_ * hi + nl

    def cs_b(bits):
        lo, hi = root_bracket(Fraction(np_), 2, bits)
        return nl * lo + np_, nl * hi + np_

    holds, rhs = decide(I, _min_bracket(cs_a, cs_b))
    cs = make_report(CS_ID, "Cauchy-Schwarz incidence bound", I, rhs, tier=BLOCKING, points=np_, lines=nl)
    assert cs.holds == holds

    def st(bits):
        lo, hi = root_bracket(Fraction((np_ * nl) ** 2), 3, bits)
        return 4 * (lo + np_ + nl), 4 * (hi + np_ + nl)

    holds, rhs = decide(I, st)
    tr = make_report(ST_ID, "Szemeredi-Trotter incidence bound", I, rhs, constant=4, tier=BLOCKING,
                     points=np_, lines=nl)
    assert tr.holds == holds
    return cs, tr


# rich objects -----------------------------------------------------------------


def rich_points(L: Iterable[RatLine], r: int) -> set[RatPoint]:
    """Intersection points lying on at least r lines of L."""
    if r < 2:
        raise DomainError("r must be at least 2")
    L = sorted(set(L))
    on = defaultdict(set)
    for i, j in itertools.combinations(range(len(L)), 2):
        pt = intersection(L[i], L[j])
        if pt is not None:
            on[pt].update((i, j))
    return {pt for pt, ls in on.items() if len(ls) >= r}


def connecting_line_members(P: Iterable[RatPoint]) -> dict[RatLine, set[RatPoint]]:
    """Every line spanned by two points of P, with the points of P on it."""
    P = sorted(set(P))
    members = defaultdict(set)
    for x, y in itertools.combinations(P, 2):
        l = line_through(x, y)
        members[l].update((x, y))
    return members


def rich_lines(P: Iterable[RatPoint], r: int) -> set[RatLine]:
    """Spanned lines carrying at least r points of P."""
    if r < 2:
        raise DomainError("r must be at least 2")
    return {l for l, pts in connecting_line_members(P).items() if len(pts) >= r}


# duality ------------------------------------------------------------------------


def dualize(p: RatPoint) -> RatLine:
    """Point (a, b) to the line y = a x - b."""
    if p.n != 2:
        raise DomainError("duality is planar")
    a, b = p.coords
    return line_y_eq(a, -b)


def slope_intercept(l: RatLine) -> tuple[Fraction, Fraction]:
    if l.n != 2:
        raise DomainError("slope form is planar")
    if l.is_vertical():
        raise NotRepresentableError(f"vertical line {l} has no slope form; shear first")
    m = l.direction[1] / l.direction[0]
    x0, y0 = l.base.coords
    return m, y0 - m * x0


def dualize_line(l: RatLine) -> RatPoint:
    """Line y = m x + b to the point (m, -b)."""
    m, b = slope_intercept(l)
    return RatPoint.of(m, -b)


def rich_points_via_duality(L: Iterable[RatLine], r: int) -> set[RatPoint]:
    """rich_points computed through the dual picture.

    Parallel lines of L dualize to points on a common vertical line, which
    would be a rich line with no affine dual point, so vertical rich lines
    are dropped.  L must contain no vertical lines (shear first).
    """
    duals = {dualize_line(l) for l in L}
    return {dualize_line(l) for l in rich_lines(duals, r) if not l.is_vertical()}


def shear_point(p: RatPoint, lam) -> RatPoint:
    x, y = p.coords
    return RatPoint.of(x + lam * y, y)


def shear_line(l: RatLine, lam) -> RatLine:
    dx, dy = l.direction
    return RatLine.through_direction(shear_point(l.base, lam), (dx + lam * dy, dy))


def shear_nonvertical(P, L, seed: int = 0, max_retries: int = 100):
    """Apply (x, y) -> (x + lam*y, y) with a seeded small lam so no line is vertical.

    Returns (lam, sheared points, sheared lines); lam = 0 when nothing is vertical.
    """
    P, L = list(P), list(L)
    if not any(l.is_vertical() for l in L):
        return Fraction(0), P, L
    # direction (1, m) turns vertical exactly when lam = -1/m
    bad = {-1 / l.direction[1] for l in L if not l.is_vertical() and l.direction[1] != 0}
    rng = random.Random(seed)
    for _ in range(max_retries):
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice((1, -1))
        if lam not in bad:
            return lam, [shear_point(p, lam) for p in P], [shear_line(l, lam) for l in L]
    raise RetryLimitError("could not find a shear removing vertical lines")


# projection to the plane ---------------------------------------------------------


def _apply(M, v):
    return tuple(_dot(row, v) for row in M)


def generic_project(P, L, seed: int = 0, max_retries: int = 200, rng: random.Random | None = None):
    """Map a configuration in R^n to R^2 by a seeded rational linear map.

    The map is resampled until point count, line count and the incidence total
    are all preserved.  Returns (points, lines, matrix); planar input is
    returned unchanged with matrix None.
    """
    P, L = sorted(set(P)), sorted(set(L))
    _check_dims(P, L)
    dims = {x.n for x in P} | {l.n for l in L}
    n = dims.pop() if dims else 2
    if n == 2:
        return set(P), set(L), None
    if n < 2:
        raise DomainError("need dimension at least 2")
    target = incidences(P, L).total
    rng = rng or random.Random(seed)
    for _ in range(max_retries):
        M = [tuple(Fraction(rng.randint(-9, 9)) for _ in range(n)) for _ in range(2)]
        P2 = {RatPoint(_apply(M, x.coords)) for x in P}
        if len(P2) != len(P):
            continue
        try:
            L2 = {RatLine.through_direction(RatPoint(_apply(M, l.base.coords)), _apply(M, l.direction)) for l in L}
        except DegenerateInputError:
            continue
        if len(L2) != len(L):
            continue
        if incidences(P2, L2).total != target:
            continue
        return P2, L2, M
    raise RetryLimitError(f"no collision-free projection after {max_retries} tries")


# named configurations -------------------------------------------------------------


def transplanted_grid(p: int) -> tuple[set[RatPoint], set[RatLine]]:
    """[0,p) x [0,p^2) against the p^2 lines y = m x + b, m, b in [0, p).

    Every line meets the point set at x = 0..p-1, giving p^3 incidences.
    """
    P = {RatPoint.of(x, y) for x in range(p) for y in range(p * p)}
    L = {line_y_eq(m, b) for m in range(p) for b in range(p)}
    return P, L
