"""Fourier analysis on F_p^n.

Functions and spectra are stored as flat complex arrays indexed by points
(or frequencies) in lexicographic order, so index ``i`` of a function and of
its spectrum refer to the same tuple of residues.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .caps import check_cap
from .errors import DomainError
from .ff_core import FieldSpec, FpFlat, FpSubspace, FpVec, all_points, orthogonal_complement


def point_index(coords, p: int) -> int:
    i = 0
    for c in coords:
        i = i * p + c
    return i


def index_point(i: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        i, c = divmod(i, p)
        out.append(c)
    return tuple(reversed(out))


@dataclass(frozen=True, eq=False)
class FpFunction:
    """A complex-valued function on F_p^n."""

    field: FieldSpec
    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.field.r != 1:
            raise DomainError("Fourier analysis is only supported over prime fields")
        vals = np.asarray(self.values, dtype=complex).reshape(-1)
        if vals.size != self.field.p**self.n:
            raise DomainError(f"expected {self.field.p ** self.n} values, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("function values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, field: FieldSpec, n: int, fn: Callable[[tuple], complex]) -> "FpFunction":
        vals = [fn(x.coords) for x in all_points(field, n)]
        return cls(field, n, np.array(vals, dtype=complex))

    @classmethod
    def indicator(cls, field: FieldSpec, n: int, points: Iterable) -> "FpFunction":
        vals = np.zeros(field.p**n, dtype=complex)
        for x in points:
            coords = x.coords if isinstance(x, FpVec) else tuple(x)
            vals[point_index(coords, field.p)] = 1
        return cls(field, n, vals)

    @property
    def p(self) -> int:
        return self.field.p

    def __call__(self, x) -> complex:
        coords = x.coords if isinstance(x, FpVec) else tuple(x)
        return complex(self.values[point_index(coords, self.p)])

    def __add__(self, other: "FpFunction") -> "FpFunction":
        return FpFunction(self.field, self.n, self.values + other.values)

    def __sub__(self, other: "FpFunction") -> "FpFunction":
        return FpFunction(self.field, self.n, self.values - other.values)

    def scaled(self, c: complex) -> "FpFunction":
        return FpFunction(self.field, self.n, self.values * c)

    def translate(self, v) -> "FpFunction":
        """The function ``x -> f(x + v)``."""
        v = v.coords if isinstance(v, FpVec) else tuple(v)
        grid = self.values.reshape((self.p,) * self.n)
        shifted = np.roll(grid, shift=[-c for c in v], axis=tuple(range(self.n)))
        return FpFunction(self.field, self.n, shifted.reshape(-1))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def tolerance(self) -> float:
        return 1e-9 * self.p**self.n * max(self.max_abs(), 1.0)


class Spectrum(FpFunction):
    """Transform values indexed by frequency, same layout as :class:`FpFunction`."""


def _characters(p: int, n: int) -> np.ndarray:
    """Matrix of x.xi mod p over all (x, xi) pairs."""
    pts = np.array([index_point(i, p, n) for i in range(p**n)], dtype=np.int64).reshape(p**n, n)
    return (pts @ pts.T) % p


def dft(f: FpFunction, cap: int | None = None) -> Spectrum:
    """Reference transform by direct summation over all (x, xi)."""
    p, n = f.p, f.n
    check_cap("dft", p**n, cap)
    phase = np.exp(-2j * np.pi * _characters(p, n) / p)
    return Spectrum(f.field, n, phase @ f.values)


def inverse_dft(F: FpFunction, cap: int | None = None) -> FpFunction:
    p, n = F.p, F.n
    check_cap("inverse_dft", p**n, cap)
    phase = np.exp(2j * np.pi * _characters(p, n) / p)
    return FpFunction(F.field, n, (phase @ F.values) / p**n)


def dft_fast(f: FpFunction, cap: int | None = None) -> Spectrum:
    """Dimension-factored transform (n successive length-p FFTs)."""
    p, n = f.p, f.n
    check_cap("dft", p**n, cap)
    grid = np.fft.fftn(f.values.reshape((p,) * n))
    return Spectrum(f.field, n, grid.reshape(-1))


def plancherel_gap(f: FpFunction, F: FpFunction | None = None) -> float:
    """|sum |f|^2 - p^-n sum |f^|^2|."""
    if F is None:
        F = dft(f)
    lhs = float(np.sum(np.abs(f.values) ** 2))
    rhs = float(np.sum(np.abs(F.values) ** 2)) / f.p**f.n
    return abs(lhs - rhs)


def flat_spectrum_expected(W: FpFlat | FpSubspace) -> Spectrum:
    """Closed-form transform of the indicator of a flat.

    For W = V + b this is p^k e^{-2 pi i b.xi / p} on the orthogonal
    complement of V and zero elsewhere.
    """
    if isinstance(W, FpSubspace):
        W = FpFlat(W, FpVec((0,) * W.n, W.field))
    V = W.subspace
    field, n, p = V.field, V.n, V.field.p
    if field.r != 1:
        raise DomainError("closed-form spectra are only supported over prime fields")
    b = W.translate.coords
    vals = np.zeros(p**n, dtype=complex)
    for xi in orthogonal_complement(V).elements():
        phase = sum(bi * xj for bi, xj in zip(b, xi.coords)) % p
        vals[point_index(xi.coords, p)] = p**V.k * cmath.exp(-2j * cmath.pi * phase / p)
    return Spectrum(field, n, vals)


def high_low_split(f: FpFunction) -> tuple[FpFunction, FpFunction]:
    """Split f into its mean (the zero-frequency part) and the remainder."""
    mean = complex(np.mean(f.values))
    low = FpFunction(f.field, f.n, np.full(f.values.size, mean, dtype=complex))
    high = FpFunction(f.field, f.n, f.values - mean)
    return high, low
