"""Exceptional sets of orthogonal and radial projections over finite fields.

Orthogonal exceptional sets are found by sweeping the whole Grassmannian;
radial ones by sweeping every pin of F_p^n.  Both are checked against the
high-low style bounds with their explicit constants.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .caps import check_cap
from .errors import DomainError
from .ff_core import (
    FieldSpec,
    FpLine,
    FpSubspace,
    FpVec,
    all_points,
    enumerate_subspaces,
    projection_size,
    radial_lines,
)
from .reports import BLOCKING, TRACKED, ReportList, make_report

FALCONER_ID = "ff_falconer"
RADIAL_8N_ID = "ff_radial_highlow"
RADIAL_12_ID = "ff_radial_lpv"


def _space_of(X: Sequence[FpVec], field: FieldSpec | None, n: int | None) -> tuple[FieldSpec, int]:
    if X:
        f0, n0 = X[0].field, X[0].n
        for x in X:
            if x.field != f0 or x.n != n0:
                raise DomainError("points live in different spaces")
        if (field is not None and field != f0) or (n is not None and n != n0):
            raise DomainError("explicit field/dimension disagree with the points")
        return f0, n0
    if field is None or n is None:
        raise DomainError("field and n are required for an empty set")
    return field, n


def _as_array(X: Sequence[FpVec], n: int) -> np.ndarray:
    return np.array([x.coords for x in X], dtype=np.int64).reshape(len(X), n)


# orthogonal projections ---------------------------------------------------------


def projection_profile(X: Iterable[FpVec], k: int, cap: int | None = None) -> list[tuple[FpSubspace, int]]:
    """Every k-subspace V paired with |P_V(X)|, in canonical subspace order."""
    X = sorted(set(X))
    if not X:
        raise DomainError("X must be nonempty")
    field, n = _space_of(X, None, None)
    if not 1 <= k <= n - 1:
        raise DomainError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    subs = enumerate_subspaces(field, n, k, cap=cap)
    if field.r != 1:
        return [(V, projection_size(V, X)) for V in subs]
    p = field.p
    pts = _as_array(X, n)
    weights = p ** np.arange(k, dtype=np.int64)
    out = []
    for V in subs:
        B = np.array(V.basis, dtype=np.int64)
        codes = ((pts @ B.T) % p) @ weights
        out.append((V, int(np.unique(codes).size)))
    return out


def orth_exceptional_set(X: Iterable[FpVec], k: int, s: int, cap: int | None = None) -> set[FpSubspace]:
    """k-subspaces V whose projection of X has fewer than s cosets."""
    return {V for V, size in projection_profile(X, k, cap) if size < s}


def falconer_ff_report(X: Iterable[FpVec], k: int, C=2, cap: int | None = None) -> ReportList:
    """Check |E_s(X)| <= C p^{k(n-k)} s / |X| for every integer s in range.

    The constant 2 is proved for k = 1 and those reports are blocking.  For
    k >= 2 the constant is a calibration guess and violations are tracked.
    """
    X = sorted(set(X))
    field, n = _space_of(X, None, None)
    if field.r != 1:
        raise DomainError("Falconer reports need a prime field")
    p, m = field.p, len(X)
    profile = projection_profile(X, k, cap)
    smax = min(m, p**k // 2)
    C = Fraction(C)
    blocking = k == 1 and C == 2
    out = ReportList()
    for s in range(1, smax + 1):
        exc = [V for V, size in profile if size < s]
        rhs = C * p ** (k * (n - k)) * s / m
        params = {"p": p, "n": n, "k": k, "s": s, "size": m}
        if not blocking:
            params["calibration"] = "empirical"
        if len(exc) > rhs:
            # keep the evidence alongside the failed claim
            params["counterexample"] = {
                "points": [list(x.coords) for x in X],
                "exceptional": [[list(b) for b in V.basis] for V in exc],
            }
        out.append(
            make_report(
                FALCONER_ID,
                "finite-field Falconer exceptional set bound",
                len(exc),
                rhs,
                constant=C,
                tier=BLOCKING if blocking else TRACKED,
                **params,
            )
        )
    if smax < 1:
        out.notes.append(f"{FALCONER_ID}: no admissible s for |X|={m}, p^k={p ** k}")
    return out


# radial projections ---------------------------------------------------------


def radial_counts(
    Y: Iterable[FpVec], field: FieldSpec | None = None, n: int | None = None, cap: int | None = None
) -> dict[FpVec, int]:
    """For every pin x of F_p^n, the number of lines through x meeting Y minus {x}."""
    Y = sorted(set(Y))
    field, n = _space_of(Y, field, n)
    if field.r != 1:
        raise DomainError("radial sweeps need a prime field")
    p = field.p
    check_cap(f"radial pin sweep over {field}^{n}", p**n * max(len(Y), 1), cap)
    pts = _as_array(Y, n)
    inv = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
    weights = p ** np.arange(n, dtype=np.int64)
    out = {}
    for x in all_points(field, n):
        D = (pts - np.array(x.coords, dtype=np.int64)) % p
        D = D[D.any(axis=1)]
        if D.shape[0] == 0:
            out[x] = 0
            continue
        lead = D[np.arange(D.shape[0]), np.argmax(D != 0, axis=1)]
        D = (D * inv[lead][:, None]) % p
        out[x] = int(np.unique(D @ weights).size)
    return out


def radial_exceptional_set(
    Y: Iterable[FpVec], s: int, field: FieldSpec | None = None, n: int | None = None, cap: int | None = None
) -> set[FpVec]:
    """Pins x of F_p^n seeing fewer than s lines through the rest of Y."""
    return {x for x, c in radial_counts(Y, field, n, cap).items() if c < s}


def radial_exceptional_set_pairwise(
    Y: Iterable[FpVec], s: int, field: FieldSpec | None = None, n: int | None = None
) -> set[FpVec]:
    """Slow second implementation built on canonical lines from line_through."""
    Y = set(Y)
    field, n = _space_of(sorted(Y), field, n)
    return {x for x in all_points(field, n) if len(radial_lines(x, Y)) < s}


def _floor_div_sqrt2(a: int) -> int:
    # largest m with m <= a / sqrt(2), i.e. 2 m^2 <= a^2
    return math.isqrt(a * a // 2)


def radial_bound_report(
    Y: Iterable[FpVec], field: FieldSpec | None = None, n: int | None = None, cap: int | None = None
) -> ReportList:
    """Both radial exceptional-set bounds, each gated on its size hypothesis."""
    Y = sorted(set(Y))
    field, n = _space_of(Y, field, n)
    p, m = field.p, len(Y)
    base = p ** (n - 1)
    out = ReportList()
    counts = None

    def exc_size(s):
        return sum(1 for c in counts.values() if c < s)

    if m > 8 * n * base:
        counts = radial_counts(Y, field, n, cap)
        for s in range(1, min(m, _floor_div_sqrt2(base)) + 1):
            out.append(
                make_report(
                    RADIAL_8N_ID,
                    "high-low radial exceptional set bound",
                    exc_size(s),
                    Fraction(8 * n * base * s, m),
                    constant=8 * n,
                    tier=BLOCKING,
                    p=p, n=n, s=s, size=m,
                )
            )
    else:
        out.notes.append(f"{RADIAL_8N_ID}: precondition unmet, |Y|={m} <= 8n p^(n-1)={8 * n * base}")

    if m >= 6 * base:
        if counts is None:
            counts = radial_counts(Y, field, n, cap)
        for s in range(1, base // 4 + 1):
            out.append(
                make_report(
                    RADIAL_12_ID,
                    "Lund-Pham-Vu radial exceptional set bound",
                    exc_size(s),
                    Fraction(12 * base * s, m),
                    constant=12,
                    tier=BLOCKING,
                    p=p, n=n, s=s, size=m,
                )
            )
    else:
        out.notes.append(f"{RADIAL_12_ID}: precondition unmet, |Y|={m} < 6 p^(n-1)={6 * base}")
    return out


# named examples -------------------------------------------------------------


def example_fullgrid(p: int, cap: int | None = None):
    """All of F_p^2 against the p^2 lines in the p smallest canonical directions."""
    field = FieldSpec(p)
    check_cap("full-grid example", p**3, cap)
    P = set(all_points(field, 2))
    dirs = sorted({FpVec(field.normalize(d.coords), field) for d in P if not d.is_zero()})[:p]
    L = {FpLine.through_direction(FpVec((0, t), field) if d.coords[0] else FpVec((t, 0), field), d)
         for d in dirs for t in range(p)}
    incidences = sum(1 for line in L for x in line.points() if x in P)
    report = make_report(
        "fullgrid_incidences",
        "full-grid incidence count",
        incidences,
        len(L) * p,
        tier=BLOCKING,
        p=p, points=len(P), lines=len(L),
    )
    return P, L, report


def example_subfield(p: int, cap: int | None = None):
    """The copy of F_p^2 inside F_{p^2}^2 and its count of small-projection directions."""
    field = FieldSpec(p, 2)
    check_cap("subfield example", field.q**2, cap)
    sub = field.subfield()
    X = {FpVec((a, b), field) for a in sub for b in sub}
    small = [V for V, size in projection_profile(X, 1, cap) if size <= p]
    report = make_report(
        "subfield_exceptional_count",
        "subfield sharpness example for finite-field Falconer",
        len(small),
        p + 1,
        tier=TRACKED,
        p=p, q=field.q, size=len(X), threshold=p,
        directions=[list(V.basis[0]) for V in small],
    )
    return X, report
