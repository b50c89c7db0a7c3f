"""Symmetry, shape reversal, mode inversion and skewness-sign audits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import BinGrid, Dataset, Point, Shape, bin_counts
from .consistency import (
    ConsistencyClass,
    MomSolution,
    classify_catalog,
    skew_rank,
)
from .levelset import Catalog, enumerate_level_sets, lookup
from .moments import FREQUENCY, GroupedMoments, sample_moments


def is_exactly_symmetric(d: Dataset) -> bool:
    two_mean = 2 * d.mean
    v = d.values
    return all(v[i] + v[-1 - i] == two_mean for i in range((d.n + 1) // 2))


@dataclass(frozen=True)
class ReversalPair:
    shape: Shape
    reversed: Shape
    witness: Point
    reversed_witness: Point

    @property
    def palindrome(self) -> bool:
        return self.shape == self.reversed


def reversal_pairs(c: Catalog) -> list[ReversalPair]:
    """Unordered pairs {s, reverse(s)} that are both attainable.

    Palindromic shapes pair with themselves.  Witnesses are level-set centroids.
    """
    out = []
    for ls in c:
        rev = ls.shape.reversed()
        if rev.sort_key < ls.shape.sort_key:
            continue
        other = lookup(c, rev)
        if other is not None:
            out.append(ReversalPair(ls.shape, rev, ls.centroid, other.centroid))
    return out


def unpaired_shapes(c: Catalog) -> list[Shape]:
    return [ls.shape for ls in c if lookup(c, ls.shape.reversed()) is None]


def modal_bins(s: Shape) -> frozenset[int]:
    top = max(s.counts)
    return frozenset(k for k, v in enumerate(s.counts, 1) if v == top)


def _mode_position(s: Shape) -> str | None:
    """'interior', 'boundary' or None when the modes straddle both."""
    ends = {1, s.n_bins}
    modes = modal_bins(s)
    if modes <= ends:
        return "boundary"
    if not modes & ends:
        return "interior"
    return None


def mode_inversion_report(c: Catalog, shapes: Iterable[Shape] | None = None) -> list[tuple[Shape, Shape]]:
    """Pairs of equal-length shapes whose modes swap between centre and ends.

    One shape has all of its modal bins in the interior, the other has all
    of them at the first and last bins.  Pairs are (interior, boundary).
    Passing ``shapes`` restricts the search, e.g. to one consistency class.
    """
    pool = [ls.shape for ls in c] if shapes is None else [s if isinstance(s, Shape) else Shape(tuple(s)) for s in shapes]
    by_bins: dict[int, dict[str, list[Shape]]] = {}
    for s in pool:
        if s.n_bins < 3:
            continue
        pos = _mode_position(s)
        if pos is not None:
            by_bins.setdefault(s.n_bins, {"interior": [], "boundary": []})[pos].append(s)
    out = []
    for nb in sorted(by_bins):
        groups = by_bins[nb]
        for a in groups["interior"]:
            for b in groups["boundary"]:
                out.append((a, b))
    return out


@dataclass(frozen=True)
class AuditVerdict:
    grid: BinGrid
    shape: Shape
    fps_g: float | None
    fps_x: float
    sign_conflict: bool
    consistency: ConsistencyClass | None
    alternative: MomSolution | None


def audit(
    d: Dataset,
    g: BinGrid,
    catalog: Catalog | None = None,
    flavor: str = FREQUENCY,
) -> AuditVerdict:
    """Check a user's histogram against the data skewness and MOM consistency.

    ``alternative`` is the shape in the 10% skewness band that is jointly
    consistent and closest to the data skewness, when there is one.
    """
    shape = bin_counts(d, g)
    sm = sample_moments(d)
    gm = GroupedMoments(shape)
    fps_g = float(gm.skew) if gm.occupied > 1 else None
    conflict = fps_g is not None and sm.skew.sign != 0 and gm.skew.sign != 0 and sm.skew.sign != gm.skew.sign

    if catalog is None:
        catalog = enumerate_level_sets(d, g.K)
    report = classify_catalog(d, catalog, flavor)
    entry = report.get(shape)
    ranks = skew_rank(d, catalog, report=report)
    best = None
    pool = [r for r in ranks if r.in_T_and_Jg]
    if pool:
        r = min(pool, key=lambda r: (abs(r.fps - sm.fps), r.shape.sort_key))
        best = report.get(r.shape).solution
    return AuditVerdict(g, shape, fps_g, sm.fps, conflict, entry.cls if entry else None, best)


def edge_collisions(d: Dataset, g: BinGrid) -> list[tuple[Fraction, int]]:
    """Data values lying exactly on a bin edge, with the edge index."""
    hits = []
    for x in d.distinct:
        q = (x - g.t0) / g.h
        if q.denominator == 1 and 0 <= q <= g.K:
            hits.append((x, int(q)))
    return hits
