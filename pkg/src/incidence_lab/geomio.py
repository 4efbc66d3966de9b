"""Plain-text geometry configuration files.

One record per line, ``#`` starts a comment::

    dim 2
    field 5 1            # optional; points are then residues in F_q
    point 1 2/3
    line 0 0 1 1         # two distinct points of the line, 2n numbers
    pin 1/2 0
    param s 3

Rational coordinates are written as ``num/den`` (or plain integers).
Writing is deterministic: records are sorted, so equal configurations give
byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import ConfigError
from .euclid_core import RatLine, RatPoint, line_through
from .ff_core import FieldSpec, FpLine, FpVec, format_vec, line_through as ff_line_through, parse_vec


@dataclass
class GeometryConfig:
    dim: int = 2
    points: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    pins: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    field: FieldSpec | None = None


def _fmt(v: Fraction) -> str:
    return str(v)


def _parse_param(v: str):
    try:
        return int(v)
    except ValueError:
        pass
    try:
        return Fraction(v)
    except ValueError:
        return v


def dumps(cfg: GeometryConfig) -> str:
    out = [f"dim {cfg.dim}"]
    if cfg.field is not None:
        out.append(f"field {cfg.field.p} {cfg.field.r}")
    for k in sorted(cfg.params):
        out.append(f"param {k} {cfg.params[k]}")

    def pt(x):
        if isinstance(x, FpVec):
            return format_vec(x)
        return " ".join(_fmt(c) for c in x.coords)

    for x in sorted(cfg.points):
        out.append("point " + pt(x))
    for x in sorted(cfg.pins):
        out.append("pin " + pt(x))
    for l in sorted(cfg.lines, key=lambda l: (l.direction, l.base) if isinstance(l, RatLine) else (l.direction.coords, l.base.coords)):
        if isinstance(l, FpLine):
            a, b = l.base, l.base + l.direction
        else:
            a, b = l.base, l.point_at(1)
        out.append("line " + pt(a) + " " + pt(b))
    return "\n".join(out) + "\n"


def loads(text: str, source: str = "<config>") -> GeometryConfig:
    cfg = GeometryConfig()
    dim_seen = False
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        where = f"{source}:{lineno}"
        try:
            if key == "dim":
                cfg.dim = int(rest[0])
                dim_seen = True
            elif key == "field":
                cfg.field = FieldSpec(int(rest[0]), int(rest[1]) if len(rest) > 1 else 1)
            elif key == "param":
                cfg.params[rest[0]] = _parse_param(" ".join(rest[1:]))
            elif key in ("point", "pin", "line"):
                pending.append((key, rest, where))
            else:
                raise ConfigError(where, f"unknown record {key!r}")
        except (IndexError, ValueError) as e:
            raise ConfigError(where, f"malformed {key!r} record: {e}") from None
    if not dim_seen:
        raise ConfigError(source, "missing 'dim' record")
    for key, rest, where in pending:
        try:
            if key == "line":
                half = len(rest) // 2
                a, b = _point(cfg, rest[:half], where), _point(cfg, rest[half:], where)
                cfg.lines.append(ff_line_through(a, b) if cfg.field else line_through(a, b))
            else:
                (cfg.points if key == "point" else cfg.pins).append(_point(cfg, rest, where))
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(where, f"malformed {key!r} record: {e}") from None
    return cfg


def _point(cfg: GeometryConfig, tokens, where):
    if cfg.field is not None:
        v = parse_vec(cfg.field, " ".join(tokens))
        if v.n != cfg.dim:
            raise ConfigError(where, f"expected {cfg.dim} coordinates")
        return v
    if len(tokens) != cfg.dim:
        raise ConfigError(where, f"expected {cfg.dim} coordinates, got {len(tokens)}")
    return RatPoint(tuple(Fraction(t) for t in tokens))


def read(path) -> GeometryConfig:
    with open(path) as fh:
        return loads(fh.read(), str(path))


def write(path, cfg: GeometryConfig) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(cfg))


def from_points(points: Iterable, lines: Iterable = (), pins: Iterable = (), params=None, field=None) -> GeometryConfig:
    points, lines, pins = list(points), list(lines), list(pins)
    sample = points or pins
    dim = sample[0].n if sample else (lines[0].n if lines else 2)
    return GeometryConfig(dim, points, lines, pins, dict(params or {}), field)
