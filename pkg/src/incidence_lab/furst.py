"""Discrete Furstenberg configurations and their lower bounds.

A primal (s, t) configuration is a point set F and at least t lines, each
containing at least s points of F.  A dual one is a family of lines and at
least t pins, each pin lying on at least s of the lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import ConfigInvalidError
from .euclid_core import RatLine, RatPoint, incidences, line_y_eq
from .reports import BLOCKING, TRACKED, ReportList, lower_bound_report, make_report, root_bracket

PRIMAL_EXACT_ID = "furstenberg_exact"
PRIMAL_CS_ID = "furstenberg_cauchy_schwarz"
PRIMAL_ST_ID = "furstenberg_szemeredi_trotter"
DUAL_LOWER_ID = "dual_furstenberg_j_lower"
DUAL_UPPER_ID = "dual_furstenberg_j_upper"
DUAL_LINES_ID = "dual_furstenberg_lines"


@dataclass
class FurstConfig:
    points: set = field(default_factory=set)
    lines: set = field(default_factory=set)
    s: int = 2
    t: int = 1
    pins: set = field(default_factory=set)

    def validate(self) -> None:
        """Check the primal hypotheses; raises ConfigInvalidError naming the first bad line."""
        if self.s < 2 or self.t < 1:
            raise ConfigInvalidError(f"need s >= 2 and t >= 1, got s={self.s}, t={self.t}")
        if len(self.lines) < self.t:
            raise ConfigInvalidError(f"{len(self.lines)} lines < t = {self.t}")
        per_line = incidences(self.points, self.lines).per_line
        for l in sorted(self.lines):
            k = per_line[l]
            if k < self.s:
                raise ConfigInvalidError(f"line {l} carries {k} < s = {self.s} points")


def furst_verify(cfg: FurstConfig) -> ReportList:
    """|F| against (s-1) t^(1/2), min(s^2, st)/2 and 12^(-3/2) min(st, s^(3/2) t^(1/2)).

    Only the first form is blocking.  The constant 1/2 in the second comes
    from counting new points on the first min(s, t) lines; the constant in
    the third is what Szemeredi-Trotter gives once s >= 13.  Both are
    tracked and their ratios recorded.
    """
    cfg.validate()
    s, t, F = cfg.s, cfg.t, len(cfg.points)
    out = ReportList()
    common = {"s": s, "t": t, "points": F, "lines": len(cfg.lines)}

    def exact(bits):
        lo, hi = root_bracket(Fraction(t), 2, bits)
        return (s - 1) * lo, (s - 1) * hi

    out.append(lower_bound_report(PRIMAL_EXACT_ID, "Furstenberg bound via Cauchy-Schwarz, exact constant",
                                  exact, F, constant=s - 1, tier=BLOCKING, **common))
    out.append(make_report(PRIMAL_CS_ID, "Furstenberg Cauchy-Schwarz form", Fraction(min(s * s, s * t), 2), F,
                           constant=Fraction(1, 2), tier=TRACKED, **common))

    def st_form(bits):
        # 12^(-3/2) min(st, s^(3/2) t^(1/2)) = s min(t, sqrt(s t)) / sqrt(1728)
        dlo, dhi = root_bracket(Fraction(1728), 2, bits)
        if t <= s:
            nlo = nhi = Fraction(s * t)
        else:
            lo, hi = root_bracket(Fraction(s * t), 2, bits)
            nlo, nhi = s * lo, s * hi
        return nlo / dhi, nhi / dlo

    out.append(lower_bound_report(PRIMAL_ST_ID, "Furstenberg Szemeredi-Trotter form", st_form, F,
                                  constant=1 / root_bracket(Fraction(1728), 2, 32)[1], tier=TRACKED,
                                  asserted_regime=s >= 13, **common))
    return out


def sharpness_ratio(cfg: FurstConfig) -> float:
    """|F| / (s^(3/2) t^(1/2))."""
    return len(cfg.points) / (cfg.s**1.5 * math.sqrt(cfg.t))


# dual form ----------------------------------------------------------------------


def _pin_counts(lines, pins) -> dict:
    return incidences(pins, lines).per_line


def j_count(lines: Iterable[RatLine], pins: Iterable[RatPoint]) -> int:
    """Sum over lines of (pins on the line)^2."""
    return sum(n * n for n in _pin_counts(set(lines), set(pins)).values())


def j_count_triples(lines: Iterable[RatLine], pins: Iterable[RatPoint]) -> int:
    """Number of triples (x, x', l) with both pins on l, by direct enumeration."""
    pins = sorted(set(pins))
    return sum(1 for l in set(lines) for x in pins for y in pins if l.contains(x) and l.contains(y))


def dual_furst_verify(lines: Iterable[RatLine], pins: Iterable[RatPoint], s: int, t: int):
    """Check the triple-count chain and record |lines| against min(s^2, st).

    Returns (reports, J).
    """
    lines, pins = set(lines), set(pins)
    if s < 1 or t < 1:
        raise ConfigInvalidError(f"need s, t >= 1, got s={s}, t={t}")
    if len(pins) < t:
        raise ConfigInvalidError(f"{len(pins)} pins < t = {t}")
    tally = incidences(pins, lines)
    through = tally.per_point
    for x in sorted(pins):
        if through[x] < s:
            raise ConfigInvalidError(f"pin {x} lies on {through[x]} < s = {s} lines")
    J = sum(n * n for n in tally.per_line.values())
    n = len(pins)
    smax = max(through.values())
    common = {"s": s, "t": t, "pins": n, "lines": len(lines)}
    out = ReportList()
    out.append(make_report(DUAL_LOWER_ID, "triple count lower bound", Fraction((n * s) ** 2, len(lines)), J,
                           tier=BLOCKING, **common))
    out.append(make_report(DUAL_UPPER_ID, "triple count upper bound", J, n * smax + n * n,
                           tier=BLOCKING, s_max=smax, **common))
    out.append(make_report(DUAL_LINES_ID, "dual Furstenberg line count", min(s * s, s * t), len(lines),
                           tier=TRACKED, **common))
    return out, J


# grid example ---------------------------------------------------------------------


def grid_example(s: int, t: int) -> FurstConfig:
    """Integer (s, t) configuration with |F| of order s^(3/2) t^(1/2).

    With m = ceil(sqrt(t / s)) take the lines y = a x + b for slopes
    a in [0, m) and intercepts b in [0, s m), ordered by intercept then slope,
    and keep the first t.  F is the set of points (x, a x + b) with
    x in [0, s) on the kept lines, so every line carries exactly s points of
    F and F sits inside [0, s) x [0, 2 s m).
    """
    if s < 2 or t < 1:
        raise ConfigInvalidError(f"need s >= 2 and t >= 1, got s={s}, t={t}")
    m = math.isqrt(-(-t // s))
    if m * m * s < t:
        m += 1
    pairs = [(a, b) for b in range(s * m) for a in range(m)][:t]
    lines = {line_y_eq(a, b) for a, b in pairs}
    points = {RatPoint.of(x, a * x + b) for a, b in pairs for x in range(s)}
    cfg = FurstConfig(points, lines, s, t)
    cfg.validate()
    return cfg
