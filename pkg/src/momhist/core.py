"""Exact scalars, datasets, bin grids, shapes and the (t0, h) parameter domain.

Every value that takes part in binning is a :class:`fractions.Fraction`
parsed from decimal text, so half-open bin membership never depends on a
floating-point tolerance.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Scalar = Fraction
Point = tuple[Fraction, Fraction]

AT_MOST = "at-most"
EXACTLY = "exactly"
MODES = (AT_MOST, EXACTLY)

_NUMERAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_TOKEN = re.compile(r"[^,\s]+")


class MomhistError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MomhistError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class DegenerateDataError(MomhistError):
    """Raised when the data have no spread (x_max == x_min)."""


class GridError(MomhistError):
    """Raised when a bin grid violates the first-bin or K-bin constraint."""


class MomentError(MomhistError):
    """Raised when a moment is undefined for the given data or shape."""


def to_scalar(value: object) -> Fraction:
    """Convert decimal text, an int or a Fraction into an exact Fraction.

    Floats are rejected: their binary value is almost never the decimal the
    user meant, and a silent conversion would break boundary exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _NUMERAL.fullmatch(text):
            raise ParseError(f"not a finite decimal numeral: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar; pass decimal text")


def format_scalar(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


@dataclass(frozen=True)
class Dataset:
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ParseError("dataset is empty")
        ordered = tuple(sorted(to_scalar(v) for v in self.values))
        object.__setattr__(self, "values", ordered)

    @classmethod
    def of(cls, values: Iterable[object]) -> "Dataset":
        return cls(tuple(to_scalar(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def x_min(self) -> Fraction:
        return self.values[0]

    @property
    def x_max(self) -> Fraction:
        return self.values[-1]

    @property
    def spread(self) -> Fraction:
        return self.x_max - self.x_min

    @cached_property
    def distinct(self) -> tuple[Fraction, ...]:
        return tuple(sorted(set(self.values)))

    @cached_property
    def mean(self) -> Fraction:
        return sum(self.values, Fraction(0)) / self.n

    @cached_property
    def variance(self) -> Fraction:
        """Sample variance with divisor n - 1."""
        if self.n < 2:
            raise MomentError("variance needs at least two observations")
        m = self.mean
        return sum(((x - m) ** 2 for x in self.values), Fraction(0)) / (self.n - 1)

    @cached_property
    def digest(self) -> str:
        text = ",".join(format_scalar(v) for v in self.values)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def reflected(self) -> "Dataset":
        """The data mirrored about their mean."""
        m2 = 2 * self.mean
        return Dataset(tuple(m2 - x for x in self.values))

    def __repr__(self) -> str:
        shown = ", ".join(str(float(v)) for v in self.values[:6])
        more = ", ..." if self.n > 6 else ""
        return f"Dataset(n={self.n}, [{shown}{more}])"


def parse_dataset(text: str) -> Dataset:
    """Parse decimal numerals separated by newlines, commas or blanks.

    Lines whose first non-blank character is ``#`` are comments.
    """
    values: list[Fraction] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("#"):
            continue
        for m in _TOKEN.finditer(line):
            token = m.group()
            if not _NUMERAL.fullmatch(token):
                raise ParseError(f"not a finite decimal numeral: {token!r}", lineno, m.start() + 1)
            values.append(Fraction(token))
    if not values:
        raise ParseError("no data values found")
    return Dataset(tuple(values))


@dataclass(frozen=True)
class Shape:
    """Bin counts with trailing empty bins removed."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError(f"negative bin count in {counts}")
        end = len(counts)
        while end and counts[end - 1] == 0:
            end -= 1
        counts = counts[:end]
        if not counts:
            raise ValueError("a shape needs at least one observation")
        if counts[0] == 0:
            raise ValueError(f"first bin must hold the data minimum: {counts}")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def of(cls, *counts: int) -> "Shape":
        if len(counts) == 1 and not isinstance(counts[0], int):
            return cls(tuple(counts[0]))
        return cls(tuple(counts))

    @property
    def n_bins(self) -> int:
        return len(self.counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.n_bins, self.counts)

    def reversed(self) -> "Shape":
        return Shape(self.counts[::-1])

    def is_palindrome(self) -> bool:
        return self.counts == self.counts[::-1]

    def __iter__(self):
        return iter(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, i):
        return self.counts[i]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.counts)) + ")"


@dataclass(frozen=True)
class BinGrid:
    t0: Fraction
    h: Fraction
    K: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "t0", to_scalar(self.t0))
        object.__setattr__(self, "h", to_scalar(self.h))
        if self.h <= 0:
            raise GridError(f"bin width must be positive, got {self.h}")
        if self.K < 1:
            raise GridError(f"K must be at least 1, got {self.K}")

    def edge(self, k: int) -> Fraction:
        return self.t0 + k * self.h

    def midpoint(self, k: int) -> Fraction:
        return self.t0 + (k - Fraction(1, 2)) * self.h

    def check(self, d: Dataset) -> None:
        if not (self.t0 <= d.x_min < self.t0 + self.h):
            raise GridError("data minimum is not in the first bin")
        if not d.x_max < self.edge(self.K):
            raise GridError(f"data maximum lies beyond {self.K} bins")


def bin_index(x: Fraction, t0: Fraction, h: Fraction) -> int:
    """1-based index k of the half-open bin [t0+(k-1)h, t0+kh) holding x."""
    return math.floor((x - t0) / h) + 1


def bin_counts(d: Dataset, g: BinGrid) -> Shape:
    g.check(d)
    counts = [0] * g.K
    for x in d.values:
        counts[bin_index(x, g.t0, g.h) - 1] += 1
    return Shape(tuple(counts))


@dataclass(frozen=True)
class HalfPlane:
    """a*t0 + b*h <= c, or < c when strict."""

    a: Fraction
    b: Fraction
    c: Fraction
    strict: bool
    label: str = ""

    def value(self, t0: Fraction, h: Fraction) -> Fraction:
        return self.a * t0 + self.b * h - self.c

    def holds(self, t0: Fraction, h: Fraction) -> bool:
        v = self.value(t0, h)
        return v < 0 if self.strict else v <= 0


def clip_polygon(poly: Sequence[Point], a: Fraction, b: Fraction, c: Fraction) -> list[Point]:
    """Keep the part of a convex polygon with a*t0 + b*h <= c (exact)."""
    out: list[Point] = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        vp = a * p[0] + b * p[1] - c
        vq = a * q[0] + b * q[1] - c
        if vp <= 0:
            out.append(p)
        if (vp < 0 < vq) or (vq < 0 < vp):
            s = vp / (vp - vq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return tidy_polygon(out)


def signed_area2(poly: Sequence[Point]) -> Fraction:
    total = Fraction(0)
    m = len(poly)
    for i in range(m):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % m]
        total += x0 * y1 - x1 * y0
    return total


def tidy_polygon(poly: Sequence[Point]) -> list[Point]:
    """Drop repeated and collinear vertices from a convex polygon."""
    pts: list[Point] = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) == 0:
                del pts[i]
                changed = True
                break
    return pts


def canonical_order(poly: Sequence[Point]) -> tuple[Point, ...]:
    """Counterclockwise, starting at the lowest-h vertex (leftmost on ties)."""
    pts = list(poly)
    if signed_area2(pts) < 0:
        pts.reverse()
    start = min(range(len(pts)), key=lambda i: (pts[i][1], pts[i][0]))
    return tuple(pts[start:] + pts[:start])


@dataclass(frozen=True)
class Domain:
    K: int
    mode: str
    delta: Fraction
    h_cap: Fraction
    halfplanes: tuple[HalfPlane, ...]
    vertices: tuple[Point, ...]

    def contains(self, t0: Fraction, h: Fraction) -> bool:
        return all(hp.holds(t0, h) for hp in self.halfplanes)

    @property
    def area(self) -> Fraction:
        return abs(signed_area2(self.vertices)) / 2


def build_domain(d: Dataset, K: int, mode: str = AT_MOST, delta: object | None = None) -> Domain:
    """Bounded (t0, h) region where x_min is in bin 1 and the data fit in K bins."""
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if d.x_max == d.x_min:
        raise DegenerateDataError("all data values are equal; no bounded (t0, h) domain exists")
    delta = d.spread if delta is None else to_scalar(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    cap = d.spread + delta
    one, zero = Fraction(1), Fraction(0)
    planes = [
        HalfPlane(one, zero, d.x_min, False, "t0 <= x_min"),
        HalfPlane(-one, -one, -d.x_min, True, "t0 + h > x_min"),
        HalfPlane(-one, -Fraction(K), -d.x_max, True, f"t0 + {K}h > x_max"),
        HalfPlane(zero, one, cap, False, "h <= cap"),
    ]
    if mode == EXACTLY:
        planes.append(HalfPlane(one, Fraction(K - 1), d.x_max, False, f"t0 + {K - 1}h <= x_max"))
    lo = d.x_min - cap
    poly: list[Point] = [(lo, zero), (d.x_min, zero), (d.x_min, cap), (lo, cap)]
    for hp in planes:
        poly = clip_polygon(poly, hp.a, hp.b, hp.c)
    if len(poly) < 3 or signed_area2(poly) == 0:
        raise DegenerateDataError(f"empty parameter domain for K={K}, mode={mode}")
    return Domain(K, mode, delta, cap, tuple(planes), canonical_order(poly))
