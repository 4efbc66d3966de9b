from fractions import Fraction

import pytest

from incidence_lab import geomio
from incidence_lab.errors import ConfigError
from incidence_lab.euclid_core import RatPoint, line_through, line_y_eq
from incidence_lab.ff_core import FieldSpec, FpVec, line_through as ff_line_through
from incidence_lab.furst import FurstConfig, furst_verify, grid_example


def test_round_trip_rational():
    pts = [RatPoint.of(Fraction(1, 3), 2), RatPoint.of(0, 0)]
    lines = [line_through(*pts), line_y_eq(Fraction(-2, 5), 1)]
    cfg = geomio.from_points(pts, lines, pins=[RatPoint.of(5, 5)], params={"s": 3, "note": "x"})
    text = geomio.dumps(cfg)
    back = geomio.loads(text)
    assert sorted(back.points) == sorted(pts)
    assert set(back.lines) == set(lines)
    assert back.pins == [RatPoint.of(5, 5)]
    assert back.params == {"s": 3, "note": "x"}
    assert geomio.dumps(back) == text
    assert "point 1/3 2" in text


def test_round_trip_finite_field(tmp_path):
    F = FieldSpec(3, 2)
    a, b = FpVec((0, 1), F), FpVec((4, 7), F)
    cfg = geomio.from_points([a, b], [ff_line_through(a, b)], field=F)
    path = tmp_path / "ff.txt"
    geomio.write(path, cfg)
    back = geomio.read(path)
    assert back.field == F and set(back.points) == {a, b}
    assert back.lines == [ff_line_through(a, b)]


def test_furst_config_round_trip():
    cfg = grid_example(3, 5)
    g = geomio.from_points(cfg.points, cfg.lines, params={"s": cfg.s, "t": cfg.t})
    back = geomio.loads(geomio.dumps(g))
    cfg2 = FurstConfig(set(back.points), set(back.lines), back.params["s"], back.params["t"])
    assert cfg2.points == cfg.points and cfg2.lines == cfg.lines
    assert [r.to_json() for r in furst_verify(cfg2)] == [r.to_json() for r in furst_verify(cfg)]


@pytest.mark.parametrize(
    "text,msg",
    [
        ("point 1 2\n", "missing 'dim'"),
        ("dim 2\npoint 1\n", "expected 2 coordinates"),
        ("dim 2\nbogus 1\n", "unknown record"),
        ("dim 2\npoint 1 x\n", "malformed"),
        ("dim 2\nline 0 0 0 0\n", None),
    ],
)
def test_errors(text, msg):
    with pytest.raises(Exception) as e:
        geomio.loads(text, "cfg.txt")
    if msg:
        assert isinstance(e.value, ConfigError) and msg in str(e.value)
        assert "cfg.txt" in str(e.value)
