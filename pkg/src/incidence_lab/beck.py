"""Connecting lines, Beck-type dichotomies and pinned radial projections in the plane."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .corpus import is_collinear
from .errors import DomainError, PreconditionError
from .euclid_core import RatLine, RatPoint, connecting_line_members, line_through, rich_points
from .euclid_projections import DirectionClass
from .reports import BLOCKING, TRACKED, ReportList, _jsonable, lower_bound_report, make_report, root_bracket

BECK_ID = "beck_dichotomy"
BECK2_ID = "beck_bivariate"
ERDOS_BECK_ID = "erdos_beck"
PINNED_I_ID = "pinned_radial_noncollinear"
PINNED_II_ID = "pinned_radial_concentration"
PINNED_III_ID = "pinned_radial_mixed"
CONTAINMENT_ID = "radial_containment"
TWO_DIRECTIONS_ID = "pinned_two_directions"

MINIMAL_C_BITS = 16


def connecting_lines(X: Iterable[RatPoint], Y: Iterable[RatPoint] | None = None) -> set[RatLine]:
    """Lines through two points of X, or through x in X and y in Y with x != y."""
    X = set(X)
    if Y is None:
        if len(X) < 2:
            raise DomainError("connecting lines need at least 2 points")
        return set(connecting_line_members(X))
    Y = set(Y)
    out = {line_through(x, y) for x in X for y in Y if x != y}
    if not out:
        raise DomainError("no pair of distinct points (x, y) in X x Y")
    return out


def max_collinear(X: Iterable[RatPoint]) -> int:
    X = set(X)
    if len(X) < 2:
        return len(X)
    return max(len(p) for p in connecting_line_members(X).values())


class Nonconcentration(NamedTuple):
    max_collinear: int
    c: Fraction
    note: str | None = None


def nonconcentration(Y: Iterable[RatPoint]) -> Nonconcentration:
    """max_collinear(Y) and c(Y) = (|Y| - max_collinear) / |Y|."""
    Y = set(Y)
    if len(Y) < 3:
        raise DomainError("nonconcentration needs at least 3 points")
    mc = max_collinear(Y)
    c = Fraction(len(Y) - mc, len(Y))
    if mc == len(Y):
        return Nonconcentration(mc, c, "collinear input")
    assert Fraction(1, len(Y)) <= c <= Fraction(len(Y) - 2, len(Y))
    return Nonconcentration(mc, c)


@dataclass
class BeckDiagnostics:
    max_collinear: int
    nonconcentration_c: Fraction
    connecting_count: int
    dyadic_profile: dict = field(default_factory=dict)
    branch: str = "spread"
    minimal_C: Fraction = Fraction(1)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def dyadic_profile(richness: Iterable[int]) -> dict[int, int]:
    """j -> number of lines with richness in [2^j, 2^(j+1))."""
    prof = Counter(r.bit_length() - 1 for r in richness)
    return dict(sorted(prof.items()))


def _spread_threshold(product: int, lines: int) -> Fraction | None:
    """Least dyadic C = k / 2^16 with 2 C^2 lines >= product, or None if lines = 0."""
    if lines == 0:
        return None
    scale = 1 << MINIMAL_C_BITS
    # k^2 >= product * scale^2 / (2 lines)
    num, den = product * scale * scale, 2 * lines
    need = -(-num // den)
    k = math.isqrt(need)
    if k * k < need:
        k += 1
    return Fraction(k, scale)


def beck_report(X: Iterable[RatPoint], C, Y: Iterable[RatPoint] | None = None):
    """Beck dichotomy at constant C, with diagnostics.

    Holds when some line carries at least |X|/C points (concentrated) or X
    spans at least |X|^2/(2 C^2) lines (spread).  With Y given, the bivariate
    form is checked: a line rich in both sets, or |L(X, Y)| >= |X||Y|/(2C^2).
    """
    C = Fraction(C)
    if C < 1:
        raise DomainError("C must be at least 1")
    X = set(X)
    if Y is None:
        return _beck_single(X, C)
    return _beck_bivariate(X, set(Y), C)


def _beck_single(X: set, C: Fraction):
    m = len(X)
    members = connecting_line_members(X) if m >= 2 else {}
    nlines = len(members)
    mc = max((len(p) for p in members.values()), default=min(m, 1))
    concentrated = C * mc >= m
    spread_lhs = Fraction(m * m) / (2 * C * C)
    conc_C = Fraction(m, mc) if mc else None
    spread_C = _spread_threshold(m * m, nlines)
    minimal = min(c for c in (conc_C, spread_C) if c is not None) if (conc_C or spread_C) else Fraction(1)
    diag = BeckDiagnostics(
        max_collinear=mc,
        nonconcentration_c=Fraction(m - mc, m) if m else Fraction(0),
        connecting_count=nlines,
        dyadic_profile=dyadic_profile(len(p) for p in members.values()),
        branch="concentrated" if concentrated else "spread",
        minimal_C=max(Fraction(1), minimal),
    )
    params = {"size": m, "C": C, "branch": diag.branch, "minimal_C": diag.minimal_C}
    if concentrated:
        rep = make_report(BECK_ID, "Beck dichotomy", Fraction(m) / C, mc, constant=C, tier=TRACKED, **params)
    else:
        rep = make_report(BECK_ID, "Beck dichotomy", spread_lhs, nlines, constant=C, tier=TRACKED, **params)
        if not rep.holds:
            rep.params["witness"] = [[str(c) for c in x.coords] for x in sorted(X)]
    return rep, diag


def _beck_bivariate(X: set, Y: set, C: Fraction):
    lines = connecting_lines(X, Y)
    both = X | Y
    members = connecting_line_members(both)
    best = None  # least C making some line jointly rich
    for pts in members.values():
        a, b = len(pts & X), len(pts & Y)
        if a and b:
            need = max(Fraction(len(X), a), Fraction(len(Y), b))
            best = need if best is None else min(best, need)
    concentrated = best is not None and best <= C
    spread_C = _spread_threshold(len(X) * len(Y), len(lines))
    cands = [c for c in (best, spread_C) if c is not None]
    mc = max((len(p & X) for p in members.values()), default=len(X))
    diag = BeckDiagnostics(
        max_collinear=mc,
        nonconcentration_c=Fraction(len(X) - mc, len(X)) if X else Fraction(0),
        connecting_count=len(lines),
        dyadic_profile=dyadic_profile(len(p) for p in members.values() if len(p) >= 2),
        branch="concentrated" if concentrated else "spread",
        minimal_C=max(Fraction(1), min(cands)) if cands else Fraction(1),
    )
    params = {"size_x": len(X), "size_y": len(Y), "C": C, "branch": diag.branch, "minimal_C": diag.minimal_C}
    if concentrated:
        rep = make_report(BECK2_ID, "bivariate Beck dichotomy", best, C, constant=C, tier=TRACKED, **params)
    else:
        lhs = Fraction(len(X) * len(Y)) / (2 * C * C)
        rep = make_report(BECK2_ID, "bivariate Beck dichotomy", lhs, len(lines), constant=C, tier=TRACKED, **params)
    return rep, diag


def erdos_beck_report(X: Iterable[RatPoint], c=Fraction(1, 4)):
    """|L(X)| >= c |X| t with t = |X| - max_collinear(X); the ratio is recorded."""
    X = set(X)
    if len(X) < 3:
        raise DomainError("Erdos-Beck needs at least 3 points")
    c = Fraction(c)
    members = connecting_line_members(X)
    mc = max(len(p) for p in members.values())
    t = len(X) - mc
    nlines = len(members)
    empirical = Fraction(nlines, len(X) * t) if t else None
    return make_report(
        ERDOS_BECK_ID, "Erdos-Beck connecting line bound", c * len(X) * t, nlines, constant=c, tier=TRACKED,
        size=len(X), t=t, empirical_constant=empirical,
    )


# pinned radial projections -------------------------------------------------------


def pinned_count(x: RatPoint, Y: Iterable[RatPoint]) -> int:
    """Projective directions from x to the points of Y other than x."""
    return len({DirectionClass(y - x) for y in Y if y != x})


def pinned_radial_report(X: Iterable[RatPoint], Y: Iterable[RatPoint]) -> ReportList:
    """max over pins x in X of the directions seen in Y, against three lower bounds.

    (i) |Y|^(1/2) / 2 for noncollinear X (proved; blocking);
    (ii) min(|X|, |Y|) / (2 C) and (iii) (12 C)^(-3/2) min((|X||Y|)^(1/2), |Y|)
    with C = max_collinear(X) (tracked).
    """
    X, Y = sorted(set(X)), set(Y)
    if not X:
        raise DomainError("need at least one pin")
    counts = {x: pinned_count(x, Y) for x in X}
    best = max(counts.values())
    mc = max_collinear(X)
    degenerate = best == 0
    extra = {"pins": len(X), "size": len(Y), "max_pinned": best}
    if degenerate:
        extra["degenerate"] = True
    out = ReportList()
    if len(X) >= 3 and not is_collinear(X):
        out.append(lower_bound_report(
            PINNED_I_ID, "pinned radial bound for noncollinear pins",
            lambda bits: tuple(v / 2 for v in root_bracket(Fraction(len(Y)), 2, bits)),
            best, constant=Fraction(1, 2), tier=BLOCKING, **extra,
        ))
    else:
        out.notes.append(f"{PINNED_I_ID}: precondition error, pins are collinear")
    out.append(make_report(
        PINNED_II_ID, "pinned radial bound for concentrated pins",
        Fraction(min(len(X), len(Y)), 2 * mc), best, constant=Fraction(1, 2 * mc), tier=TRACKED,
        concentration=mc, **extra,
    ))

    def br3(bits):
        # (12C)^(-3/2) min(sqrt(|X||Y|), |Y|) = min(sqrt(|X||Y|), |Y|) / sqrt((12C)^3)
        base = Fraction(12 * mc) ** 3
        dlo, dhi = root_bracket(base, 2, bits)
        if len(X) >= len(Y):
            nlo = nhi = Fraction(len(Y))
        else:
            nlo, nhi = root_bracket(Fraction(len(X) * len(Y)), 2, bits)
        return nlo / dhi, nhi / dlo

    out.append(lower_bound_report(
        PINNED_III_ID, "pinned radial mixed bound", br3, best,
        constant=1 / root_bracket(Fraction(12 * mc) ** 3, 2, 32)[1], tier=TRACKED,
        concentration=mc, **extra,
    ))
    return out


def _require_noncollinear(Y) -> Nonconcentration:
    if len(Y) < 3 or is_collinear(Y):
        raise PreconditionError("needs a noncollinear set")
    return nonconcentration(Y)


def two_point_set(Y: Iterable[RatPoint]) -> set[RatPoint]:
    """Points lying on at least two connecting lines of Y."""
    return rich_points(connecting_lines(set(Y)), 2)


def _random_pin(rng: random.Random, lo: Fraction, hi: Fraction) -> RatPoint:
    def coord():
        den = rng.randint(1, 97)
        return Fraction(rng.randint(math.floor(lo * den) - den, math.ceil(hi * den) + den), den)

    return RatPoint.of(coord(), coord())


def radial_containment_check(Y: Iterable[RatPoint], s: int, seed: int = 0, samples: int = 100):
    """Pins seeing fewer than s directions of Y all lie on two connecting lines.

    Every candidate pin (two-line points and Y itself) is swept; then seeded
    random rational pins off the two-line set are checked to see at least s
    directions.  lhs counts violations of either statement.
    """
    Y = set(Y)
    nc = _require_noncollinear(Y)
    limit = len(Y) - nc.max_collinear  # c(Y)|Y|
    if not 1 <= s <= limit:
        raise PreconditionError(f"need 1 <= s <= c(Y)|Y| = {limit}, got s={s}")
    P2 = two_point_set(Y)
    candidates = P2 | Y
    small = {x for x in candidates if pinned_count(x, Y) < s}
    inside_bad = len(small - P2)
    rng = random.Random(seed)
    xs = [c for x in Y for c in x.coords]
    lo, hi = min(xs), max(xs)
    outside_bad = 0
    min_outside = None
    drawn = 0
    while drawn < samples:
        pin = _random_pin(rng, lo, hi)
        if pin in P2:
            continue
        drawn += 1
        c = pinned_count(pin, Y)
        min_outside = c if min_outside is None else min(min_outside, c)
        outside_bad += c < s
    return make_report(
        CONTAINMENT_ID, "radial exceptional set lies in the two-line set", inside_bad + outside_bad, 0,
        tier=BLOCKING, size=len(Y), s=s, candidates=len(candidates), exceptional_candidates=len(small),
        samples=samples, min_outside_count=min_outside,
    )


def two_directions_check(Y: Iterable[RatPoint]):
    """Every pin sees at least two projective directions of a noncollinear Y.

    Pins off the two-line set see at least |Y| - max_collinear + 1 >= 2
    directions, so sweeping the candidates is exhaustive.
    """
    Y = set(Y)
    _require_noncollinear(Y)
    candidates = two_point_set(Y) | Y
    worst = min(pinned_count(x, Y) for x in candidates)
    return make_report(TWO_DIRECTIONS_ID, "two directions from every pin", 2, worst, tier=BLOCKING,
                       size=len(Y), candidates=len(candidates))
