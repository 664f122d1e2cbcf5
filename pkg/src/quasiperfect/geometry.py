"""Points and lines of the affine space AG(m, q).

Point ``i`` has coordinates ``(x_1, ..., x_m)`` given by the base-q digits
of ``i`` with ``x_1`` least significant.  Directions are normalized so that
their last nonzero coordinate is 1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .field import FieldSpec
from .linalg import decode_digits, encode_digits


def q_analog(m: int, q: int) -> int:
    """``[m]_q = 1 + q + ... + q^(m-1)``."""
    return (q**m - 1) // (q - 1)


@dataclass(frozen=True, order=True)
class Line:
    """A line of AG(m, q) in canonical form.

    ``base`` is the smallest point index on the line and ``points`` lists
    ``base + t*direction`` for ``t`` in field-index order.
    """

    points: tuple[int, ...]
    base: int
    direction: tuple[int, ...]

    @property
    def point_set(self) -> frozenset[int]:
        return frozenset(self.points)

    def __contains__(self, point: int) -> bool:
        return point in self.points

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in sorted(self.points)) + "}"


class AffineSpace:
    def __init__(self, field: FieldSpec, m: int):
        if m < 1:
            raise ValueError(f"dimension must be >= 1, got {m}")
        self.field = field
        self.m = m
        self.q = field.q
        self.n = self.q**m
        self.points = decode_digits(self.q, np.arange(self.n), m, field.dtype)
        self.points.setflags(write=False)

    def __repr__(self) -> str:
        return f"AffineSpace(q={self.q}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AffineSpace) and other.field == self.field and other.m == self.m

    def __hash__(self) -> int:
        return hash((self.field, self.m))

    def coords(self, index: int) -> np.ndarray:
        return self.points[index]

    def index(self, coords) -> int:
        return int(encode_digits(self.q, np.asarray(coords)))

    def _check(self, *indices: int) -> None:
        for a in indices:
            if not 0 <= a < self.n:
                raise IndexError(f"point index {a} outside [0, {self.n})")

    @functools.cached_property
    def directions(self) -> list[tuple[int, ...]]:
        """Normalized nonzero directions, one per parallel class, in index order."""
        out = []
        for v in self.points[1:]:
            nz = np.flatnonzero(v)
            if v[nz[-1]] == 1:
                out.append(tuple(int(x) for x in v))
        return out

    def _normalize(self, d: np.ndarray) -> tuple[int, ...]:
        nz = np.flatnonzero(d)
        if nz.size == 0:
            raise ValueError("zero direction")
        lead = int(d[nz[-1]])
        if lead != 1:
            d = self.field.mul(self.field.inv(lead), d)
        return tuple(int(x) for x in d)

    def _line(self, a: int, direction: tuple[int, ...]) -> Line:
        F = self.field
        d = np.asarray(direction, dtype=F.dtype)
        ts = np.arange(self.q, dtype=F.dtype)
        pts = F.add(self.points[a][None, :], F.mul(ts[:, None], d[None, :]))
        idx = encode_digits(self.q, pts)
        base = int(idx.min())
        pts = F.add(self.points[base][None, :], F.mul(ts[:, None], d[None, :]))
        ordered = tuple(int(x) for x in encode_digits(self.q, pts))
        return Line(ordered, base, tuple(direction))

    def line_through(self, a: int, b: int) -> Line:
        self._check(a, b)
        if a == b:
            raise ValueError(f"a line needs two distinct points, got {a} twice")
        d = self.field.sub(self.points[b], self.points[a])
        return self._line(a, self._normalize(d))

    def lines_through_point(self, a: int) -> list[Line]:
        self._check(a)
        return sorted((self._line(a, d) for d in self.directions), key=_canonical_key)

    def collinear(self, a: int, b: int, c: int) -> bool:
        self._check(a, b, c)
        if a == b or a == c or b == c:
            return True
        return c in self.line_through(a, b).points

    @functools.cached_property
    def _all_lines(self) -> tuple[Line, ...]:
        seen: dict[tuple[int, ...], Line] = {}
        for d in self.directions:
            covered = np.zeros(self.n, dtype=bool)
            for a in range(self.n):
                if covered[a]:
                    continue
                line = self._line(a, d)
                covered[list(line.points)] = True
                seen[_canonical_key(line)] = line
        return tuple(sorted(seen.values(), key=_canonical_key))

    def lines(self) -> list[Line]:
        """All lines of the space, sorted by their sorted point lists."""
        return list(self._all_lines)


def _canonical_key(line: Line) -> tuple[int, ...]:
    return tuple(sorted(line.points))


# Re-exported names with the spelling used throughout the package.
def line_through(space: AffineSpace, a: int, b: int) -> Line:
    return space.line_through(a, b)


def lines_through_point(space: AffineSpace, a: int) -> list[Line]:
    return space.lines_through_point(a)


def collinear(space: AffineSpace, a: int, b: int, c: int) -> bool:
    return space.collinear(a, b, c)
