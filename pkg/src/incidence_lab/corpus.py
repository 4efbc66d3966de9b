"""Seeded configuration generators.

Every generator is a pure function of its arguments and seed.  Corpora of
many items derive one seed per item from (master seed, index) with
:func:`item_seed`, so items can be generated in any order or in parallel.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import DomainError
from .euclid_core import RatLine, RatPoint, line_through
from .ff_core import FieldSpec, FpVec

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def item_seed(master: int, index: int) -> int:
    """Seed for corpus item ``index``: splitmix64(splitmix64(master) ^ index)."""
    return splitmix64(splitmix64(master & MASK64) ^ index)


# finite-field sets ---------------------------------------------------------------


def uniform_random_fp(p: int, n: int, size: int, seed: int) -> list[FpVec]:
    """``size`` distinct uniform points of F_p^n, sorted."""
    field = FieldSpec(p)
    if size > p**n:
        raise DomainError(f"cannot draw {size} distinct points from {p ** n}")
    rng = random.Random(seed)
    idx = rng.sample(range(p**n), size)
    out = []
    for i in idx:
        c = []
        for _ in range(n):
            i, r = divmod(i, p)
            c.append(r)
        out.append(FpVec(tuple(reversed(c)), field))
    return sorted(out)


# Euclidean sets ---------------------------------------------------------------


def uniform_random_lattice(size: int, seed: int, extent: int = 20, n: int = 2) -> list[RatPoint]:
    """``size`` distinct integer points of [0, extent)^n, sorted."""
    if size > extent**n:
        raise DomainError(f"cannot draw {size} distinct points from a lattice of {extent ** n}")
    rng = random.Random(seed)
    pts: set[RatPoint] = set()
    while len(pts) < size:
        pts.add(RatPoint(tuple(rng.randrange(extent) for _ in range(n))))
    return sorted(pts)


def grid(w: int, h: int | None = None) -> list[RatPoint]:
    h = w if h is None else h
    return [RatPoint.of(x, y) for x in range(w) for y in range(h)]


def line_plus_noise(size: int, frac, seed: int, extent: int = 40) -> list[RatPoint]:
    """round(frac*size) points on a random line plus the rest off it.

    The line is y = m x + b with small integer m, b; the off-line points are
    uniform lattice points avoiding the line.
    """
    frac = Fraction(frac)
    on = round(frac * size)
    rng = random.Random(seed)
    m, b = rng.randint(-2, 2), rng.randint(0, 5)
    xs = rng.sample(range(-extent, extent), on)
    pts = {RatPoint.of(x, m * x + b) for x in xs}
    while len(pts) < size:
        x, y = rng.randrange(-extent, extent), rng.randrange(-extent, extent)
        if y != m * x + b:
            pts.add(RatPoint.of(x, y))
    return sorted(pts)


def is_collinear(X) -> bool:
    X = list(X)
    if len(X) < 3:
        return True
    l = line_through(X[0], next(x for x in X if x != X[0]))
    return all(l.contains(x) for x in X)


def random_noncollinear(size: int, seed: int, extent: int = 12) -> list[RatPoint]:
    """Random lattice set of ``size`` >= 3 points, resampled until noncollinear."""
    if size < 3:
        raise DomainError("noncollinear sets need at least 3 points")
    s = seed
    while True:
        X = uniform_random_lattice(size, s, extent)
        if not is_collinear(X):
            return X
        s = splitmix64(s)


NAMED = {
    "triangle": [(0, 0), (1, 0), (0, 1)],
    "unit_square": [(0, 0), (1, 0), (0, 1), (1, 1)],
    # five lattice points near a circle of radius 5, no three collinear
    "near_pentagon": [(5, 0), (2, 5), (-4, 3), (-4, -3), (2, -5)],
    "general4": [(0, 0), (3, 1), (1, 4), (5, 5)],
}


def named(name: str) -> list[RatPoint]:
    try:
        return [RatPoint(c) for c in NAMED[name]]
    except KeyError:
        raise DomainError(f"unknown named configuration {name!r}; known: {sorted(NAMED)}") from None


def incidence_config(seed: int, max_points: int = 60, max_lines: int = 60, extent: int = 8):
    """Random planar point/line configuration with many incidences.

    Points are lattice points in a small box, so lines through pairs of them
    often pick up extra points.  Lines are a mix of spanned lines and random
    lines y = m x + b.
    """
    rng = random.Random(seed)
    npts = rng.randint(1, max_points)
    P = uniform_random_lattice(npts, rng.getrandbits(32), extent)
    nlines = rng.randint(0, max_lines)
    L: set[RatLine] = set()
    attempts = 0
    while len(L) < nlines and attempts < 20 * nlines:
        attempts += 1
        if len(P) >= 2 and rng.random() < 0.7:
            a, b = rng.sample(P, 2)
            L.add(line_through(a, b))
        else:
            m = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            L.add(RatLine.through_direction(RatPoint.of(0, rng.randint(0, extent)), (1, m)))
    return set(P), L
