"""Exact arithmetic and enumerative geometry over F_q^n, q = p or p**2.

Field elements are stored as integer codes in ``range(q)``.  For ``r == 1``
the code is the residue itself; for ``r == 2`` the element ``a0 + a1*t`` of
``F_p[t]/(m(t))`` has code ``a0 + a1*p``.  Vectors are tuples of codes, and
lexicographic order on codes is the canonical order everywhere (code 0 is the
zero element, so "lexicographically smallest" always means "most zeros first").

Canonical forms:

* :class:`FpLine` -- direction scaled so its first nonzero coordinate is 1,
  base point the lexicographically smallest point of the line.
* :class:`FpSubspace` -- basis in reduced row-echelon form.
* :class:`FpFlat` -- RREF subspace plus the lexicographically smallest point
  of the coset, which is the translate reduced to zero at every pivot column.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .caps import check_cap
from .errors import DegenerateInputError, DomainError

Vec = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _has_root(p: int, c0: int, c1: int) -> bool:
    return any((x * x + c1 * x + c0) % p == 0 for x in range(p))


def first_irreducible_quadratic(p: int) -> tuple[int, int]:
    """Lexicographically first monic irreducible ``t^2 + c1*t + c0``; returns ``(c0, c1)``."""
    for c1 in range(p):
        for c0 in range(p):
            if not _has_root(p, c0, c1):
                return c0, c1
    raise AssertionError("no irreducible quadratic")  # impossible for prime p


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q, q = p**r, r in {1, 2}.

    ``modulus`` is ``(c0, c1)`` for ``m(t) = t^2 + c1*t + c0`` when ``r == 2``.
    """

    p: int
    r: int = 1
    modulus: tuple[int, int] | None = None

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise DomainError(f"p={self.p!r} is not prime")
        if self.r not in (1, 2):
            raise DomainError(f"extension degree r={self.r} not supported (only 1 or 2)")
        if self.r == 1:
            if self.modulus is not None:
                raise DomainError("modulus only applies to r=2")
        else:
            if self.modulus is None:
                object.__setattr__(self, "modulus", first_irreducible_quadratic(self.p))
            c0, c1 = (int(c) % self.p for c in self.modulus)
            object.__setattr__(self, "modulus", (c0, c1))
            if _has_root(self.p, c0, c1):
                raise DomainError(f"t^2 + {c1}t + {c0} has a root in F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.r

    def __str__(self) -> str:
        return f"F_{self.q}"

    # scalar arithmetic ---------------------------------------------------

    @cached_property
    def _mul_table(self) -> list[list[int]]:
        p = self.p
        c0, c1 = self.modulus
        q = p * p
        table = [[0] * q for _ in range(q)]
        for a in range(q):
            a0, a1 = a % p, a // p
            row = table[a]
            for b in range(q):
                b0, b1 = b % p, b // p
                hi = a1 * b1
                # t^2 = -c1 t - c0
                r0 = (a0 * b0 - hi * c0) % p
                r1 = (a0 * b1 + a1 * b0 - hi * c1) % p
                row[b] = r0 + r1 * p
        return table

    @cached_property
    def _inv_table(self) -> list[int]:
        q = self.q
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul(a, b) == 1:
                    inv[a] = b
                    break
        return inv

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        p = self.p
        return (a % p + b % p) % p + ((a // p + b // p) % p) * p

    def neg(self, a: int) -> int:
        if self.r == 1:
            return -a % self.p
        p = self.p
        return (-(a % p)) % p + ((-(a // p)) % p) * p

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        return self._mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.r == 1:
            return pow(a, -1, self.p)
        return self._inv_table[a]

    def residues(self, a: int) -> tuple[int, ...]:
        """Residue tuple of a scalar: ``(a,)`` or ``(a0, a1)``."""
        if self.r == 1:
            return (a,)
        return (a % self.p, a // self.p)

    def from_residues(self, res: Sequence[int]) -> int:
        if len(res) != self.r:
            raise DomainError(f"expected {self.r} residues, got {len(res)}")
        if self.r == 1:
            return res[0] % self.p
        return res[0] % self.p + (res[1] % self.p) * self.p

    def subfield(self) -> list[int]:
        """Codes of the prime subfield F_p."""
        return list(range(self.p))

    # vector helpers on raw tuples --------------------------------------

    def vadd(self, x: Vec, y: Vec) -> Vec:
        return tuple(self.add(a, b) for a, b in zip(x, y))

    def vsub(self, x: Vec, y: Vec) -> Vec:
        return tuple(self.sub(a, b) for a, b in zip(x, y))

    def vscale(self, c: int, x: Vec) -> Vec:
        return tuple(self.mul(c, a) for a in x)

    def dot(self, x: Vec, y: Vec) -> int:
        if self.r == 1:
            return sum(a * b for a, b in zip(x, y)) % self.p
        acc = 0
        for a, b in zip(x, y):
            acc = self.add(acc, self.mul(a, b))
        return acc

    def normalize(self, d: Vec) -> Vec:
        """Scale a nonzero vector so that its first nonzero coordinate is 1."""
        for a in d:
            if a:
                return self.vscale(self.inv(a), d)
        raise DegenerateInputError("zero vector has no direction")


@dataclass(frozen=True, order=True)
class FpVec:
    """A point of F_q^n."""

    coords: Vec
    field: FieldSpec

    def __post_init__(self):
        if len(self.coords) < 1:
            raise DomainError("vectors need n >= 1")
        q = self.field.q
        if any(not 0 <= c < q for c in self.coords):
            raise DomainError(f"coordinates {self.coords} not canonical codes of {self.field}")

    @classmethod
    def of(cls, field: FieldSpec, coords: Iterable[int]) -> "FpVec":
        """Vector from residues mod p (r=1) or from raw codes (r=2)."""
        coords = tuple(coords)
        if field.r == 1:
            coords = tuple(c % field.p for c in coords)
        return cls(coords, field)

    @property
    def n(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "FpVec") -> "FpVec":
        _same_space(self, other)
        return FpVec(self.field.vadd(self.coords, other.coords), self.field)

    def __sub__(self, other: "FpVec") -> "FpVec":
        _same_space(self, other)
        return FpVec(self.field.vsub(self.coords, other.coords), self.field)

    def scale(self, c: int) -> "FpVec":
        return FpVec(self.field.vscale(c, self.coords), self.field)

    def dot(self, other: "FpVec") -> int:
        _same_space(self, other)
        return self.field.dot(self.coords, other.coords)

    def __str__(self) -> str:
        return format_vec(self)


def _same_space(x: FpVec, y: FpVec) -> None:
    if x.field != y.field or len(x.coords) != len(y.coords):
        raise DomainError(f"vectors live in different spaces: {x.field}^{x.n} vs {y.field}^{y.n}")


def all_points(field: FieldSpec, n: int, cap: int | None = None) -> Iterator[FpVec]:
    """Every point of F_q^n in lexicographic order."""
    check_cap(f"points of {field}^{n}", field.q**n, cap)
    for c in itertools.product(range(field.q), repeat=n):
        yield FpVec(c, field)


# lines --------------------------------------------------------------------


@dataclass(frozen=True)
class FpLine:
    """Affine line {base + t*direction} in canonical form."""

    direction: FpVec
    base: FpVec

    @classmethod
    def through_direction(cls, point: FpVec, direction: FpVec) -> "FpLine":
        _same_space(point, direction)
        f = point.field
        d = f.normalize(direction.coords)
        i = next(j for j, a in enumerate(d) if a)
        # d[i] == 1, so subtracting point[i]*d zeroes coordinate i; earlier
        # coordinates are constant along the line.
        base = f.vsub(point.coords, f.vscale(point.coords[i], d))
        return cls(FpVec(d, f), FpVec(base, f))

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    def points(self) -> list[FpVec]:
        f = self.field
        return [FpVec(f.vadd(self.base.coords, f.vscale(t, self.direction.coords)), f) for t in range(f.q)]

    def contains(self, x: FpVec) -> bool:
        f = self.field
        diff = f.vsub(x.coords, self.base.coords)
        i = next(j for j, a in enumerate(self.direction.coords) if a)
        return f.vscale(diff[i], self.direction.coords) == diff

    def __str__(self) -> str:
        return format_line(self)


def line_through(x: FpVec, y: FpVec) -> FpLine:
    """The unique affine line through two distinct points."""
    _same_space(x, y)
    if x == y:
        raise DegenerateInputError(f"line_through needs distinct points, got {x} twice")
    return FpLine.through_direction(x, y - x)


def radial_lines(x: FpVec, Y: Iterable[FpVec]) -> set[FpLine]:
    """Lines through the pin ``x`` and each other point of ``Y``."""
    return {line_through(x, y) for y in Y if y != x}


# subspaces ------------------------------------------------------------------


def rref(field: FieldSpec, rows: Iterable[Vec], n: int) -> tuple[tuple[Vec, ...], tuple[int, ...]]:
    """Reduced row-echelon form over the field, zero rows dropped."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, a) for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


@dataclass(frozen=True)
class FpSubspace:
    """k-dimensional linear subspace of F_q^n with an RREF basis."""

    field: FieldSpec
    n: int
    basis: tuple[Vec, ...]

    def __post_init__(self):
        canon, _ = rref(self.field, self.basis, self.n)
        if canon != tuple(self.basis):
            raise DomainError("basis is not in reduced row-echelon form; use FpSubspace.span")

    @classmethod
    def span(cls, field: FieldSpec, n: int, vectors: Iterable[Vec | FpVec]) -> "FpSubspace":
        rows = [v.coords if isinstance(v, FpVec) else tuple(v) for v in vectors]
        if any(len(r) != n for r in rows):
            raise DomainError("spanning vectors must have length n")
        basis, _ = rref(field, rows, n)
        return cls(field, n, basis)

    @property
    def k(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, a in enumerate(row) if a) for row in self.basis)

    def reduce(self, x: Vec) -> Vec:
        """Zero out the pivot coordinates of ``x`` using the basis (lex-min coset rep)."""
        f = self.field
        x = tuple(x)
        for row, c in zip(self.basis, self.pivots):
            if x[c]:
                x = f.vsub(x, f.vscale(x[c], row))
        return x

    def contains(self, x: Vec | FpVec) -> bool:
        coords = x.coords if isinstance(x, FpVec) else x
        return not any(self.reduce(coords))

    def elements(self) -> Iterator[FpVec]:
        f = self.field
        for cs in itertools.product(range(f.q), repeat=self.k):
            v = (0,) * self.n
            for c, row in zip(cs, self.basis):
                v = f.vadd(v, f.vscale(c, row))
            yield FpVec(v, f)

    def sort_key(self):
        return self.basis

    def __str__(self) -> str:
        return format_subspace(self)


@dataclass(frozen=True)
class FpFlat:
    """Affine flat ``subspace + translate`` with the lex-min translate."""

    subspace: FpSubspace
    translate: FpVec

    def __post_init__(self):
        if self.subspace.reduce(self.translate.coords) != self.translate.coords:
            raise DomainError("translate is not the canonical coset representative")

    @classmethod
    def from_point(cls, subspace: FpSubspace, x: FpVec) -> "FpFlat":
        return cls(subspace, FpVec(subspace.reduce(x.coords), x.field))

    @property
    def k(self) -> int:
        return self.subspace.k

    def contains(self, x: FpVec) -> bool:
        return self.subspace.reduce(x.coords) == self.translate.coords

    def elements(self) -> Iterator[FpVec]:
        for v in self.subspace.elements():
            yield v + self.translate

    def sort_key(self):
        return (self.subspace.basis, self.translate.coords)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over F_q."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    return num // den


def enumerate_subspaces(
    field: FieldSpec, n: int, k: int, affine: bool = False, cap: int | None = None
) -> list[FpSubspace] | list[FpFlat]:
    """All k-dimensional linear subspaces (or affine flats) of F_q^n, sorted canonically."""
    if n < 1 or not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n and n >= 1, got n={n}, k={k}")
    q = field.q
    check_cap(f"G({field}^{n}, {k}) sweep", q ** (k * (n - k) + n), cap)
    subs: list[FpSubspace] = []
    for pivots in itertools.combinations(range(n), k):
        pivset = set(pivots)
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivset]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            subs.append(FpSubspace(field, n, tuple(tuple(r) for r in rows)))
    subs.sort(key=FpSubspace.sort_key)
    if not affine:
        return subs
    flats: list[FpFlat] = []
    for V in subs:
        nonpiv = [j for j in range(n) if j not in V.pivots]
        for values in itertools.product(range(q), repeat=len(nonpiv)):
            t = [0] * n
            for j, v in zip(nonpiv, values):
                t[j] = v
            flats.append(FpFlat(V, FpVec(tuple(t), field)))
    flats.sort(key=FpFlat.sort_key)
    return flats


def orthogonal_complement(V: FpSubspace) -> FpSubspace:
    """``{x : x.v = 0 for all v in V}`` under the standard bilinear dot product."""
    f, n = V.field, V.n
    pivots = V.pivots
    vectors = []
    for fcol in (j for j in range(n) if j not in pivots):
        x = [0] * n
        x[fcol] = 1
        for row, c in zip(V.basis, pivots):
            x[c] = f.neg(row[fcol])
        vectors.append(tuple(x))
    return FpSubspace.span(f, n, vectors)


def coset_project(V: FpSubspace, X: Iterable[FpVec]) -> set[FpFlat]:
    """Distinct cosets of V^perp meeting X; their number is |P_V(X)|."""
    W = orthogonal_complement(V)
    out = set()
    for x in X:
        if x.field != V.field or x.n != V.n:
            raise DomainError(f"point {x} not in {V.field}^{V.n}")
        out.add(FpFlat.from_point(W, x))
    return out


def projection_size(V: FpSubspace, X: Iterable[FpVec | Vec]) -> int:
    """|P_V(X)| via the signature ``x -> (x.b for b in basis(V))``, whose kernel is V^perp."""
    f = V.field
    sig = set()
    for x in X:
        c = x.coords if isinstance(x, FpVec) else x
        sig.add(tuple(f.dot(c, b) for b in V.basis))
    return len(sig)


# serialization ----------------------------------------------------------------


def format_vec(v: FpVec) -> str:
    """Whitespace-delimited residues; each F_{p^2} scalar contributes two residues."""
    return " ".join(str(r) for c in v.coords for r in v.field.residues(c))


def parse_vec(field: FieldSpec, text: str) -> FpVec:
    res = [int(t) for t in text.split()]
    if len(res) % field.r:
        raise DomainError(f"cannot split {len(res)} residues into scalars of {field}")
    coords = tuple(field.from_residues(res[i : i + field.r]) for i in range(0, len(res), field.r))
    return FpVec(coords, field)


def format_line(line: FpLine) -> str:
    return f"{format_vec(line.direction)} @ {format_vec(line.base)}"


def parse_line(field: FieldSpec, text: str) -> FpLine:
    d, b = text.split("@")
    return FpLine.through_direction(parse_vec(field, b), parse_vec(field, d))


def format_subspace(V: FpSubspace) -> str:
    if not V.basis:
        return f"0^{V.n}"
    return " | ".join(format_vec(FpVec(row, V.field)) for row in V.basis)


def format_flat(W: FpFlat) -> str:
    return f"{format_subspace(W.subspace)} @ {format_vec(W.translate)}"
