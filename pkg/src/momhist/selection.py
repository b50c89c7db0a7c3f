"""Bin-width stability cells, minimum-width likelihood ranking, exact-moment grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .core import BinGrid, Dataset, GridError, Shape, bin_counts
from .levelset import Catalog, LevelSet
from .moments import grouped_raw_moment, grouped_variance, DENSITY, FREQUENCY


@dataclass(frozen=True)
class StabilityCell:
    h_lo: Fraction
    h_hi: Fraction
    shapes: tuple[Shape, ...]

    @property
    def count(self) -> int:
        return len(self.shapes)


@dataclass(frozen=True)
class StabilityReport:
    K: int
    breakpoints: tuple[Fraction, ...]
    cells: tuple[StabilityCell, ...]

    @property
    def most_stable(self) -> list[StabilityCell]:
        fewest = min(c.count for c in self.cells)
        return [c for c in self.cells if c.count == fewest]


def stability_cells(c: Catalog) -> StabilityReport:
    """Partition the width axis into open intervals with a constant set of shapes.

    The breakpoints are the distinct minimum and maximum widths over all
    level sets; a shape is attainable across a whole cell exactly when its
    width range covers that cell.
    """
    if not c.level_sets:
        raise ValueError("empty catalog")
    points = sorted({ls.h_min for ls in c} | {ls.h_max for ls in c})
    cells = []
    for lo, hi in zip(points, points[1:]):
        shapes = tuple(ls.shape for ls in c if ls.h_min <= lo and hi <= ls.h_max)
        cells.append(StabilityCell(lo, hi, shapes))
    return StabilityReport(c.K, tuple(points), tuple(cells))


@dataclass(frozen=True)
class MLScore:
    shape: Shape
    h_min: Fraction
    score: float
    open: bool


def _owns(c: Catalog, ls: LevelSet, p) -> bool:
    if not c.domain.contains(*p):
        return False
    try:
        return bin_counts(c.dataset, BinGrid(p[0], p[1], c.K)) == ls.shape
    except GridError:
        return False


def ml_score(counts, n: int, h: Fraction) -> float:
    """log of prod (v_k / (n h))**v_k; empty bins contribute nothing."""
    log_h = math.log(h.numerator) - math.log(h.denominator)
    return sum(v * math.log(v) for v in counts if v) - n * (math.log(n) + log_h)


def ml_rank(c: Catalog, n: int | None = None) -> list[MLScore]:
    """Histogram-density log-likelihood of each shape at its minimum width.

    The minimum width is an infimum; ``open`` marks shapes whose lowest
    vertex belongs to a neighbouring level set.
    """
    n = c.dataset.n if n is None else n
    out = []
    for ls in c:
        lows = [v for v in ls.vertices if v[1] == ls.h_min]
        is_open = not any(_owns(c, ls, v) for v in lows)
        out.append(MLScore(ls.shape, ls.h_min, ml_score(ls.shape, n, ls.h_min), is_open))
    out.sort(key=lambda s: (-s.score, s.shape.sort_key))
    return out


@dataclass(frozen=True)
class ExactMomentGrid:
    m: int
    Q: int
    grid: BinGrid
    shape: Shape

    @property
    def h(self) -> Fraction:
        return self.grid.h

    @property
    def t0(self) -> Fraction:
        return self.grid.t0

    def grouped_moment(self, r: int) -> Fraction:
        return grouped_raw_moment(self.grid, self.shape, r)

    def grouped_variance(self, flavor: str = FREQUENCY) -> Fraction:
        return grouped_variance(self.grid, self.shape, flavor)

    def density_excess(self) -> Fraction:
        return self.grouped_variance(DENSITY) - self.grouped_variance(FREQUENCY)


def data_raw_moment(d: Dataset, r: int) -> Fraction:
    return sum((x**r for x in d.values), Fraction(0)) / d.n


def exact_moment_grid(d: Dataset, m: int = 1) -> ExactMomentGrid:
    """Bins of width 1/(mQ) centred on the data, Q the lcm of the denominators."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    Q = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in d.values), 1)
    h = Fraction(1, m * Q)
    t0 = d.x_min - h / 2
    K = int(d.spread / h) + 1
    grid = BinGrid(t0, h, K)
    return ExactMomentGrid(m, Q, grid, bin_counts(d, grid))
