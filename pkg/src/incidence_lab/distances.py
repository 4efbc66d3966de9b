"""Distance sets and pinned dot-product sets with exact arithmetic.

Distances are handled as squared distances, which are rational for rational
points; squaring is injective on nonnegative reals so counts are unchanged.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .caps import check_cap
from .errors import DomainError
from .euclid_core import RatPoint
from .reports import BLOCKING, make_report

LATTICE_ID = "lattice_distances"
DOT_SCALING_ID = "dot_scaling"


@dataclass(frozen=True)
class SquaredDistanceSet:
    values: tuple
    include_zero: bool

    def __post_init__(self):
        vals = tuple(sorted(set(Fraction(v) for v in self.values)))
        if vals and vals[0] < 0:
            raise DomainError("squared distances are nonnegative")
        object.__setattr__(self, "values", vals)
        if self.include_zero != (bool(vals) and vals[0] == 0):
            raise DomainError("include_zero flag disagrees with the values")

    def __len__(self) -> int:
        return len(self.values)


def sq_dist(x: RatPoint, y: RatPoint) -> Fraction:
    return sum(((a - b) ** 2 for a, b in zip(x.coords, y.coords)), Fraction(0))


def distance_set(X: Iterable[RatPoint], pin: RatPoint | None = None, zero: bool = True) -> SquaredDistanceSet:
    """Squared distances over all pairs of X, or from ``pin`` to each point of X.

    With ``zero`` the pair x = y is allowed, so 0 belongs to the set whenever
    such a pair exists.
    """
    X = sorted(set(X))
    if not X:
        raise DomainError("distance set of an empty set")
    if pin is not None:
        vals = {sq_dist(pin, y) for y in X}
        if not zero:
            vals.discard(Fraction(0))
    else:
        vals = {sq_dist(x, y) for x, y in itertools.combinations(X, 2)}
        if zero:
            vals.add(Fraction(0))
    return SquaredDistanceSet(tuple(vals), Fraction(0) in vals)


def lattice_distances(p: int, n: int, cap: int | None = None) -> set[int]:
    """Distinct squared distances of the lattice [0, p]^n.

    Differences of lattice points range over [-p, p]^n, so these are exactly
    the sums of n squares of integers in [0, p].
    """
    check_cap(f"lattice [0,{p}]^{n}", (p + 1) ** n, cap)
    squares = [i * i for i in range(p + 1)]
    vals = {0}
    for _ in range(n):
        vals = {v + s for v in vals for s in squares}
    return vals


def lattice_report(p: int, n: int, cap: int | None = None):
    """|Delta([0,p]^n)| <= n p^2 + 1 (0 counted)."""
    if p < 1 or n < 1:
        raise DomainError("need p, n >= 1")
    count = len(lattice_distances(p, n, cap))
    return make_report(
        LATTICE_ID, "lattice distance count", count, n * p * p + 1, tier=BLOCKING,
        p=p, n=n, without_zero=count - 1, bound_without_zero=n * p * p,
    )


class GKRatio(NamedTuple):
    distances: int
    baseline: str
    ratio: str


def gk_ratio(X: Iterable[RatPoint]) -> GKRatio:
    """|Delta(X)| against |X| / log|X|; tracking data only."""
    X = set(X)
    if len(X) < 2:
        raise DomainError("need at least 2 points")
    if any(x.n != 2 for x in X):
        raise DomainError("planar sets only")
    d = len(distance_set(X))
    base = len(X) / math.log(len(X))
    return GKRatio(d, f"{base:.6f}", f"{d / base:.6f}")


def dot_product_set(a: RatPoint, A: Iterable[RatPoint]) -> set[Fraction]:
    vals = set()
    for y in A:
        if y.n != a.n:
            raise DomainError("dimension mismatch")
        vals.add(sum((u * v for u, v in zip(a.coords, y.coords)), Fraction(0)))
    return vals


def dot_scaling_check(a: RatPoint, lam, A: Iterable[RatPoint]):
    """Pi^(lam a)(A) = lam Pi^a(A); lhs counts mismatches and must be 0."""
    lam = Fraction(lam)
    if lam == 0:
        raise DomainError("scaling factor must be nonzero")
    A = list(A)
    base = dot_product_set(a, A)
    scaled = dot_product_set(RatPoint(tuple(lam * c for c in a.coords)), A)
    mismatch = len(scaled ^ {lam * v for v in base}) + abs(len(scaled) - len(base))
    return make_report(
        DOT_SCALING_ID, "pinned dot-product scaling invariance", mismatch, 0, tier=BLOCKING,
        lam=lam, size=len(base), scaled_size=len(scaled),
    )
