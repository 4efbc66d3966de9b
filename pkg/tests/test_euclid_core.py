import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from incidence_lab.corpus import incidence_config, uniform_random_lattice
from incidence_lab.errors import DegenerateInputError, DomainError, NotRepresentableError
from incidence_lab.euclid_core import (
    RatLine,
    RatPoint,
    bound_report_cs_st,
    dualize,
    dualize_line,
    generic_project,
    incidences,
    intersection,
    line_through,
    line_y_eq,
    rich_lines,
    rich_points,
    rich_points_via_duality,
    shear_nonvertical,
    transplanted_grid,
)

P_ = RatPoint.of


def on_line_oracle(x, l):
    """Cross-product test against two points of the line, independent of canonical form."""
    a = l.base.coords
    b = tuple(u + v for u, v in zip(a, l.direction))
    u = tuple(p - q for p, q in zip(b, a))
    w = tuple(p - q for p, q in zip(x.coords, a))
    return all(u[i] * w[j] == u[j] * w[i] for i, j in itertools.combinations(range(len(u)), 2))


def cs_oracle(I, P, L):
    def le_root(lhs, a, b):  # lhs <= a*sqrt(b)
        return lhs <= 0 or lhs * lhs <= a * a * b

    return le_root(I - L, P, L) and le_root(I - P, L, P)


def st_oracle(I, P, L):
    d = I - 4 * P - 4 * L
    return d <= 0 or d**3 <= 64 * (P * L) ** 2


# lines -------------------------------------------------------------------------


def test_canonical_form_is_point_independent():
    l1 = line_through(P_(0, 1), P_(2, 5))
    l2 = line_through(P_(2, 5), P_(-1, -1))
    assert l1 == l2
    assert l1.direction == (1, 2)
    assert sum(b * d for b, d in zip(l1.base.coords, l1.direction)) == 0


def test_vertical_and_3d_lines():
    v = line_through(P_(3, 0), P_(3, 7))
    assert v.direction == (0, 1) and v.base == P_(3, 0) and v.is_vertical()
    l = line_through(P_(1, 1, 1), P_(2, 3, 4))
    assert l.contains(P_(3, 5, 7)) and not l.contains(P_(3, 5, 8))
    with pytest.raises(DegenerateInputError):
        line_through(P_(1, 1), P_(1, 1))
    with pytest.raises(DomainError):
        l.contains(P_(1, 1))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6)), min_size=3, max_size=3, unique=True))
def test_membership_matches_cross_product(triple):
    a, b, c = (RatPoint(t) for t in triple)
    l = line_through(a, b)
    assert l.contains(a) and l.contains(b)
    assert l.contains(c) == on_line_oracle(c, l)


def test_intersection():
    assert intersection(line_y_eq(1, 0), line_y_eq(-1, 2)) == P_(1, 1)
    assert intersection(line_y_eq(1, 0), line_y_eq(1, 2)) is None
    skew1 = line_through(P_(0, 0, 0), P_(1, 0, 0))
    skew2 = line_through(P_(0, 1, 1), P_(0, 2, 1))
    assert intersection(skew1, skew2) is None
    meet = line_through(P_(0, 1, 0), P_(0, 2, 0))
    assert intersection(skew1, meet) == P_(0, 0, 0)


# incidences ------------------------------------------------------------------------


def test_incidence_examples():
    pts = [P_(0, 0), P_(1, 1), P_(2, 2)]
    assert incidences(pts, [line_through(pts[0], pts[1])]).total == 3
    P = {P_(x, y) for x in range(3) for y in range(9)}
    L = {line_y_eq(m, b) for m in range(3) for b in range(3)}
    t = incidences(P, L)
    assert len(P) == 27 and len(L) == 9 and t.total == 27
    assert incidences(P, set()).total == 0
    with pytest.raises(DomainError):
        incidences({P_(0, 0, 0)}, L)


@pytest.mark.parametrize("seed", range(40))
def test_tally_consistent_with_oracle(seed):
    P, L = incidence_config(seed)
    t = incidences(P, L)
    assert t.total == sum(t.per_line.values()) == sum(t.per_point.values())
    assert t.total == sum(on_line_oracle(x, l) for x in P for l in L)


@pytest.mark.parametrize("seed", range(60))
def test_incidence_bounds_on_random_configs(seed):
    P, L = incidence_config(seed)
    cs, st_ = bound_report_cs_st(P, L)
    I = incidences(P, L).total
    assert cs.lhs == st_.lhs == I
    assert cs.holds == cs_oracle(I, len(P), len(L)) is True
    assert st_.holds == st_oracle(I, len(P), len(L)) is True
    assert cs.blocking and st_.blocking


def test_incidence_bounds_trivial_and_grid():
    p = P_(0, 0)
    cs, st_ = bound_report_cs_st({p}, {line_y_eq(0, 0)})
    assert cs.lhs == 1 and cs.holds and st_.holds
    for q in (3, 5):
        P, L = transplanted_grid(q)
        assert incidences(P, L).total == q**3
        cs, st_ = bound_report_cs_st(P, L)
        assert cs.holds and st_.holds


def test_bound_report_decides_exact_cases():
    # |P| = 4, |L| = 4: CS bound = min(4*2+4, 4*2+4) = 12 exactly
    pts = [P_(x, 0) for x in range(4)]
    lines = [line_y_eq(m, 0) for m in range(4)]
    cs, _ = bound_report_cs_st(pts, lines)
    assert cs.rhs == 12


def test_report_oracle_on_synthetic_counts():
    # the decision logic must agree with the integer oracle for arbitrary tallies
    from incidence_lab.euclid_core import IncidenceTally

    rng = random.Random(0)
    for _ in range(300):
        np_, nl = rng.randint(1, 60), rng.randint(1, 60)
        I = rng.randint(0, np_ * nl)
        P = {P_(i, 0) for i in range(np_)}
        L = {line_y_eq(0, j) for j in range(nl)}
        cs, st_ = bound_report_cs_st(P, L, IncidenceTally(total=I))
        assert cs.holds == cs_oracle(I, np_, nl)
        assert st_.holds == st_oracle(I, np_, nl)


# rich objects -------------------------------------------------------------------


def test_rich_examples():
    assert rich_points([line_y_eq(1, 0), line_y_eq(-1, 0)], 2) == {P_(0, 0)}
    assert rich_points([line_y_eq(1, 0), line_y_eq(1, 3)], 2) == set()
    grid = [P_(x, y) for x in range(3) for y in range(3)]
    assert len(rich_lines(grid, 3)) == 8
    with pytest.raises(DomainError):
        rich_lines(grid, 1)


@pytest.mark.parametrize("seed", range(10))
def test_line_axioms_on_corpus(seed):
    P, L = incidence_config(seed, max_points=20, max_lines=20)
    L = sorted(L)
    for a, b in itertools.combinations(L, 2):
        assert sum(1 for x in P if a.contains(x) and b.contains(x)) <= 1
    for x, y in itertools.combinations(sorted(P), 2):
        spanned = [l for l in L if l.contains(x) and l.contains(y)]
        assert len(spanned) <= 1
        assert line_through(x, y) == line_through(y, x)
    assert len(rich_points(L, 2)) <= len(L) * (len(L) - 1) // 2


# duality ----------------------------------------------------------------------


def test_duality_examples():
    l = dualize(P_(1, 0))
    assert l == line_y_eq(1, 0)
    assert dualize_line(l) == P_(1, 0)
    p = P_(2, 3)
    l = line_y_eq(2, -1)
    assert l.contains(p)
    assert dualize_line(l) == P_(2, 1)
    assert dualize(p) == line_y_eq(2, -3)
    assert dualize(p).contains(dualize_line(l))
    with pytest.raises(NotRepresentableError):
        dualize_line(line_through(P_(0, 0), P_(0, 1)))


@pytest.mark.parametrize("seed", range(20))
def test_duality_involution_and_incidence(seed):
    P, L = incidence_config(seed, max_points=25, max_lines=25)
    _, P, L = shear_nonvertical(P, L, seed)
    for x in P:
        assert dualize_line(dualize(x)) == x
    for l in L:
        assert dualize(dualize_line(l)) == l
        for x in P:
            assert l.contains(x) == dualize(x).contains(dualize_line(l))


@pytest.mark.parametrize("seed", range(8))
def test_rich_points_dual_to_rich_lines(seed):
    P, L = incidence_config(seed, max_points=15, max_lines=15)
    _, _, L = shear_nonvertical(P, L, seed)
    duals = {dualize_line(l) for l in L}
    for r in (2, 3):
        rp = rich_points(L, r)
        rl = rich_lines(duals, r)
        # vertical rich dual lines are the parallel classes of L (meeting at infinity)
        assert {dualize(x) for x in rp} == {l for l in rl if not l.is_vertical()}
        assert rich_points_via_duality(L, r) == rp


def test_shear_removes_vertical_lines():
    L = [line_through(P_(0, 0), P_(0, 1)), line_y_eq(1, 0)]
    P = [P_(0, 0), P_(0, 1)]
    lam, P2, L2 = shear_nonvertical(P, L, seed=3)
    assert lam != 0 and not any(l.is_vertical() for l in L2)
    assert incidences(P2, L2).total == incidences(P, L).total


# projection ---------------------------------------------------------------------


def test_generic_project_examples():
    curve = {P_(t, t * t, t**3) for t in range(1, 6)}
    P2, L2, M = generic_project(curve, set(), seed=1)
    assert len(P2) == 5 and all(x.n == 2 for x in P2)
    a, b, c = P_(0, 0, 0), P_(1, 2, 3), P_(5, 5, 5)
    L = {line_through(a, b)}
    P2, L2, _ = generic_project({a, b, c}, L, seed=2)
    assert incidences(P2, L2).total == 2
    planar = {P_(0, 0), P_(1, 1)}
    assert generic_project(planar, set())[0] == planar


@pytest.mark.parametrize("seed", range(5))
def test_generic_project_preserves_tally(seed):
    rng = random.Random(seed)
    pts = uniform_random_lattice(15, seed, extent=4, n=3)
    L = {line_through(*rng.sample(pts, 2)) for _ in range(10)}
    before = incidences(pts, L).total
    P2, L2, _ = generic_project(pts, L, seed=seed)
    assert len(P2) == len(pts) and len(L2) == len(L)
    assert incidences(P2, L2).total == before
