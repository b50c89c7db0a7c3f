"""Shape level sets: the faces of the bin-edge line arrangement inside D0.

Each line ``t0 + k*h = x`` marks where a bin edge crosses a datum.  Every
intersection of two such lines has coordinates whose denominators divide
``lcm(1..K)`` times the data denominators, so the arrangement is computed on
an integer lattice and mapped back to Fractions at the end.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator

import numpy as np

from .core import (
    AT_MOST,
    BinGrid,
    Dataset,
    Domain,
    Point,
    Shape,
    bin_counts,
    build_domain,
    canonical_order,
    signed_area2,
)

IntPoint = tuple[int, int]


@dataclass(frozen=True, order=True)
class BoundaryLine:
    """The line t0 + k*h = x in the (t0, h) plane."""

    k: int
    x: Fraction

    @property
    def vertical(self) -> bool:
        return self.k == 0

    def value(self, t0: Fraction, h: Fraction) -> Fraction:
        return t0 + self.k * h - self.x


def boundary_lines(d: Dataset, K: int) -> list[BoundaryLine]:
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    return [BoundaryLine(k, x) for k in range(K + 1) for x in d.distinct]


@dataclass(frozen=True)
class LevelSet:
    shape: Shape
    vertices: tuple[Point, ...]
    convex: bool = True
    pieces: int = 1

    @property
    def h_min(self) -> Fraction:
        return min(v[1] for v in self.vertices)

    @property
    def h_max(self) -> Fraction:
        return max(v[1] for v in self.vertices)

    @property
    def centroid(self) -> Point:
        m = len(self.vertices)
        return (
            sum((v[0] for v in self.vertices), Fraction(0)) / m,
            sum((v[1] for v in self.vertices), Fraction(0)) / m,
        )

    @property
    def area(self) -> Fraction:
        return abs(signed_area2(self.vertices)) / 2

    def edges(self) -> Iterator[tuple[Point, Point]]:
        m = len(self.vertices)
        for i in range(m):
            yield self.vertices[i], self.vertices[(i + 1) % m]


@dataclass(frozen=True)
class Catalog:
    dataset: Dataset
    K: int
    mode: str
    domain: Domain
    level_sets: tuple[LevelSet, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {ls.shape: ls for ls in self.level_sets})

    @property
    def digest(self) -> str:
        return self.dataset.digest

    @property
    def S(self) -> int:
        return len(self.level_sets)

    @property
    def shapes(self) -> list[Shape]:
        return [ls.shape for ls in self.level_sets]

    def __iter__(self) -> Iterator[LevelSet]:
        return iter(self.level_sets)

    def __len__(self) -> int:
        return len(self.level_sets)

    def __contains__(self, s: object) -> bool:
        return lookup(self, s) is not None

    def restricted(self, max_bins: int) -> list[LevelSet]:
        return [ls for ls in self.level_sets if ls.shape.n_bins <= max_bins]


def lookup(c: Catalog, s: Shape | Iterable[int]) -> LevelSet | None:
    if not isinstance(s, Shape):
        try:
            s = Shape(tuple(s))
        except ValueError:
            return None
    return c._index.get(s)


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _split(poly: list[IntPoint], k: int, x: int):
    """Cut a convex integer polygon by t + k*g = x; None when not crossed."""
    sides = [t + k * g - x for t, g in poly]
    if min(sides) >= 0 or max(sides) <= 0:
        return None
    below: list[IntPoint] = []
    above: list[IntPoint] = []
    m = len(poly)
    for i in range(m):
        p, sp = poly[i], sides[i]
        q, sq = poly[(i + 1) % m], sides[(i + 1) % m]
        if sp <= 0:
            below.append(p)
        if sp >= 0:
            above.append(p)
        if (sp < 0 < sq) or (sq < 0 < sp):
            num_t = p[0] * sq - q[0] * sp
            num_g = p[1] * sq - q[1] * sp
            den = sq - sp
            if num_t % den or num_g % den:
                raise AssertionError("arrangement vertex off the integer lattice")
            cut = (num_t // den, num_g // den)
            below.append(cut)
            above.append(cut)
    return below, above


def _arrangement_faces(d: Dataset, domain: Domain) -> tuple[int, list[list[IntPoint]]]:
    K = domain.K
    scale = _lcm([v.denominator for v in d.distinct] + [domain.h_cap.denominator]) * _lcm(range(1, K + 1))
    faces: list[list[IntPoint]] = []
    start = []
    for t0, h in domain.vertices:
        t, g = t0 * scale, h * scale
        assert t.denominator == 1 and g.denominator == 1
        start.append((int(t), int(g)))
    faces.append(start)
    xs = [int(v * scale) for v in d.distinct]
    # Lines with k = 0 or k = K never cross the interior of D0.
    for k in range(1, K):
        for x in xs:
            nxt: list[list[IntPoint]] = []
            for poly in faces:
                parts = _split(poly, k, x)
                if parts is None:
                    nxt.append(poly)
                else:
                    nxt.extend(parts)
            faces = nxt
    return scale, faces


def _convex_hull(points: list[Point]) -> list[Point]:
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def enumerate_level_sets(d: Dataset, K: int, mode: str = AT_MOST, delta: object | None = None) -> Catalog:
    """All shapes attainable with at most (or exactly) K bins, with their level sets."""
    domain = build_domain(d, K, mode, delta)
    scale, faces = _arrangement_faces(d, domain)
    grouped: dict[Shape, list[tuple[Point, ...]]] = defaultdict(list)
    for poly in faces:
        verts = tuple((Fraction(t, scale), Fraction(g, scale)) for t, g in poly)
        m = len(verts)
        ct = sum((v[0] for v in verts), Fraction(0)) / m
        ch = sum((v[1] for v in verts), Fraction(0)) / m
        shape = bin_counts(d, BinGrid(ct, ch, K))
        grouped[shape].append(canonical_order(verts))

    level_sets = []
    for shape, polys in grouped.items():
        if len(polys) == 1:
            level_sets.append(LevelSet(shape, polys[0]))
            continue
        # Never observed in practice; kept so a split level set is reported, not hidden.
        hull = canonical_order(_convex_hull([v for p in polys for v in p]))
        total = sum(abs(signed_area2(p)) for p in polys)
        level_sets.append(LevelSet(shape, hull, convex=abs(signed_area2(hull)) == total, pieces=len(polys)))
    level_sets.sort(key=lambda ls: ls.shape.sort_key)
    return Catalog(d, K, mode, domain, tuple(level_sets))


def group_by_bins(c: Catalog) -> dict[int, list[LevelSet]]:
    out: dict[int, list[LevelSet]] = defaultdict(list)
    for ls in c:
        out[ls.shape.n_bins].append(ls)
    return dict(out)


def at_width(c: Catalog, h: object) -> list[LevelSet]:
    """Level sets whose interior meets the horizontal line at width h."""
    h = Fraction(h) if not isinstance(h, Fraction) else h
    return [ls for ls in c if ls.h_min < h < ls.h_max]


def grid_sample_oracle(
    d: Dataset, K: int, resolution: int, mode: str = AT_MOST, delta: object | None = None
) -> set[Shape]:
    """Shapes seen on a (resolution+1) x resolution rational grid over D0.

    t0 runs over x_min - cap*i/r and h over cap*j/r.  All arithmetic is on
    integers scaled by r and the data denominators, so membership tests are
    exact.  Independent of the arrangement code; used as a test oracle.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    domain = build_domain(d, K, mode, delta)
    r = resolution
    den = _lcm([v.denominator for v in d.distinct] + [domain.h_cap.denominator])
    X = np.array([int(v * den) * r for v in d.values], dtype=np.int64)
    cap = int(domain.h_cap * den)
    g = cap * np.arange(1, r + 1, dtype=np.int64)
    # Bin indices are nondecreasing in the sorted data, so one base-(K+1)
    # integer per grid point identifies its shape.
    weights = (K + 1) ** np.arange(d.n, dtype=np.int64)
    keys: set[int] = set()
    rows = max(1, 2_000_000 // (r * d.n))
    for start in range(0, r + 1, rows):
        i = np.arange(start, min(start + rows, r + 1), dtype=np.int64)
        t = np.repeat(X[0] - cap * i, g.size)
        gg = np.tile(g, i.size)
        ok = (t <= X[0]) & (X[0] < t + gg) & (X[-1] < t + K * gg)
        if mode != AT_MOST:
            ok &= t + (K - 1) * gg <= X[-1]
        t, gg = t[ok], gg[ok]
        idx = (X[None, :] - t[:, None]) // gg[:, None]
        keys.update(np.unique(idx @ weights).tolist())
    shapes = set()
    for key in keys:
        counts = [0] * K
        for _ in range(d.n):
            key, b = divmod(key, K + 1)
            counts[b] += 1
        shapes.add(Shape(tuple(counts)))
    return shapes


def shapes_at_width(d: Dataset, K: int, h: object, mode: str = AT_MOST) -> set[Shape]:
    """Every shape attainable at width h, by an exact sweep over the anchor.

    Breakpoints in t0 are x_i - k*h; between consecutive breakpoints the
    counts are constant, so one midpoint per open interval suffices.
    """
    h = h if isinstance(h, Fraction) else Fraction(h)
    lo = max(d.x_min - h, d.x_max - K * h)
    hi = d.x_min
    if mode != AT_MOST:
        hi = min(hi, d.x_max - (K - 1) * h)
    if lo >= hi:
        return set()
    cuts = {lo, hi}
    for x in d.distinct:
        for k in range(K + 1):
            c = x - k * h
            if lo < c < hi:
                cuts.add(c)
    pts = sorted(cuts)
    return {bin_counts(d, BinGrid((a + b) / 2, h, K)) for a, b in zip(pts, pts[1:])}
