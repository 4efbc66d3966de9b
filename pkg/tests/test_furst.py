import math
import random
from fractions import Fraction

import pytest

from incidence_lab.corpus import item_seed
from incidence_lab.errors import ConfigInvalidError
from incidence_lab.euclid_core import RatPoint, line_through, line_y_eq
from incidence_lab.furst import (
    FurstConfig,
    dual_furst_verify,
    furst_verify,
    grid_example,
    j_count,
    j_count_triples,
    sharpness_ratio,
)

P_ = RatPoint.of


def axis_grid():
    pts = {P_(x, y) for x in range(3) for y in range(3)}
    lines = {line_y_eq(0, b) for b in range(3)} | {line_through(P_(a, 0), P_(a, 1)) for a in range(3)}
    return FurstConfig(pts, lines, 3, 6)


def test_axis_grid_example():
    reps = furst_verify(axis_grid())
    exact = reps[0]
    assert exact.rhs == 9 and exact.holds and exact.blocking
    assert 4.89 < float(exact.lhs) < 4.91
    assert all(r.holds for r in reps)
    assert [r.blocking for r in reps] == [True, False, False]


@pytest.mark.parametrize("s", [2, 3, 7])
def test_single_line(s):
    cfg = FurstConfig({P_(i, i) for i in range(s)}, {line_y_eq(1, 0)}, s, 1)
    reps = furst_verify(cfg)
    assert reps[0].lhs == s - 1 and reps[0].rhs == s and reps[0].holds


def test_validator_rejects():
    cfg = axis_grid()
    cfg.s = 4
    with pytest.raises(ConfigInvalidError, match="carries 3 < s = 4"):
        furst_verify(cfg)
    cfg = axis_grid()
    cfg.t = 7
    with pytest.raises(ConfigInvalidError):
        furst_verify(cfg)


def test_grid_example_cases():
    cfg = grid_example(3, 3)
    assert len(cfg.lines) == 3 and len(cfg.points) == 9
    assert all(l.direction == (1, 0) for l in cfg.lines)
    cfg = grid_example(2, 1)
    assert len(cfg.lines) == 1 and len(cfg.points) == 2
    cfg = grid_example(4, 8)
    assert all(r.holds for r in furst_verify(cfg))
    assert 0 < sharpness_ratio(cfg) < 4


def test_grid_example_sharpness_sweep():
    worst = 0.0
    for s in range(2, 17):
        for t in sorted({s, (s + s * s) // 2, s * s}):
            cfg = grid_example(s, t)
            assert len(cfg.lines) == t
            reps = furst_verify(cfg)
            assert reps[0].holds
            worst = max(worst, sharpness_ratio(cfg))
    # |F| <= s * 2 s m with m <= 2 sqrt(t/s) when t >= s
    assert worst <= 4


@pytest.mark.parametrize("i", range(20))
def test_random_primal_configs(i):
    rng = random.Random(item_seed(11, i))
    s = rng.randint(2, 5)
    lines = set()
    while len(lines) < rng.randint(1, 8):
        lines.add(line_y_eq(Fraction(rng.randint(-3, 3)), rng.randint(-5, 5)))
    pts = {l.point_at(rng.randint(-6, 6)) for l in lines for _ in range(3 * s)}
    keep = {l for l in lines if sum(l.contains(x) for x in pts) >= s}
    if not keep:
        pytest.skip("no line reached s points")
    cfg = FurstConfig(pts, keep, s, len(keep))
    assert furst_verify(cfg)[0].holds


# dual -------------------------------------------------------------------------


def two_pin_example():
    a, b = P_(0, 0), P_(4, 0)
    common = line_y_eq(0, 0)
    lines = {common}
    for k in (1, 2, 3):
        lines.add(line_through(a, P_(k, 1)))
        lines.add(line_through(b, P_(k, 1)))
    return lines, {a, b}


def test_dual_two_pins():
    lines, pins = two_pin_example()
    assert len(lines) == 7
    reps, J = dual_furst_verify(lines, pins, 4, 2)
    assert J == j_count_triples(lines, pins) == 4 + 6
    assert reps[0].holds and reps[1].holds
    # 7 lines against min(s^2, st) = 8: the tracked line-count ratio dips below 1
    assert reps[2].lhs == 8 and reps[2].rhs == 7 and not reps[2].blocking


def test_dual_single_pin():
    x = P_(0, 0)
    for s in (1, 3, 6):
        lines = {line_y_eq(m, 0) for m in range(s)}
        reps, J = dual_furst_verify(lines, {x}, s, 1)
        assert J == s
        assert reps[2].rhs == s and reps[2].lhs == s and reps[2].holds


@pytest.mark.parametrize("t,s", [(2, 2), (3, 3), (4, 2), (5, 3)])
def test_dual_pencil(t, s):
    pins = {P_(i, 0) for i in range(t)}
    lines = set()
    for i in range(t):
        for k in range(1, s + 1):
            lines.add(line_through(P_(i, 0), P_(i + k, 7)))
    reps, J = dual_furst_verify(lines, pins, s, t)
    assert J == j_count_triples(lines, pins)
    assert reps[0].holds and reps[1].holds


def test_dual_validator():
    lines, pins = two_pin_example()
    with pytest.raises(ConfigInvalidError):
        dual_furst_verify(lines, pins, 5, 2)
    with pytest.raises(ConfigInvalidError):
        dual_furst_verify(lines, pins, 4, 3)
