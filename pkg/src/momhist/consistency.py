"""Method-of-moments bin parameters and mean/variance consistency of shapes.

The MOM width is s_x / sqrt(C), an irrational number in general.  Points of
the form a + b*sqrt(r) with rational a, b, r have exactly decidable signs, so
recomputing bin counts at the MOM grid and testing membership in a level set
never rounds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import BinGrid, Dataset, GridError, MomentError, Point, Shape, bin_counts
from .levelset import Catalog, LevelSet, lookup
from .moments import FREQUENCY, ConstraintFunctions, GroupedMoments, constraint_fns, sample_moments

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Surd:
    """The real number a + b*sqrt(r), r >= 0."""

    a: Fraction
    b: Fraction
    r: Fraction

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or self.r == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs, rhs = self.a * self.a, self.b * self.b * self.r
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.r)


class ConsistencyClass(enum.Enum):
    JOINT = "joint"
    BOTH = "both"
    MEAN_ONLY = "mean-only"
    VAR_ONLY = "var-only"
    NEITHER = "neither"

    @property
    def mean_consistent(self) -> bool:
        return self in (ConsistencyClass.JOINT, ConsistencyClass.BOTH, ConsistencyClass.MEAN_ONLY)

    @property
    def var_consistent(self) -> bool:
        return self in (ConsistencyClass.JOINT, ConsistencyClass.BOTH, ConsistencyClass.VAR_ONLY)


@dataclass(frozen=True)
class MomSolution:
    shape: Shape
    flavor: str
    h_squared: Fraction
    mean: Fraction
    kbar: Fraction
    recomputed: tuple[int, ...]
    first_bin: int
    grid_valid: bool

    @property
    def h_mom(self) -> float:
        return math.sqrt(self.h_squared)

    @property
    def t0_mom(self) -> float:
        return float(self.t0_surd)

    @property
    def t0_surd(self) -> Surd:
        return Surd(self.mean, -(self.kbar - HALF), self.h_squared)

    @property
    def h_surd(self) -> Surd:
        return Surd(Fraction(0), Fraction(1), self.h_squared)

    @property
    def jointly_consistent(self) -> bool:
        return self.grid_valid and self.recomputed == self.shape.counts


def _edge_at_or_below(x: Fraction, j: int, mean: Fraction, kbar: Fraction, r: Fraction) -> bool:
    """True when the j-th bin edge t0 + j*h of the MOM grid is <= x."""
    return Surd(x - mean, -(j - kbar + HALF), r).sign() >= 0


def solve_mom(d: Dataset, s: Shape, flavor: str = FREQUENCY, K: int | None = None) -> MomSolution:
    """Solve the variance then the mean constraint for (t0, h) and recount.

    ``recomputed`` lists counts from bin ``first_bin`` onward (1 when the
    data minimum lands in the first bin).  With K given, a grid needing more
    than K bins is marked invalid.
    """
    if d.n < 2:
        raise MomentError("MOM solving needs n >= 2")
    if d.variance == 0:
        raise MomentError("zero sample variance")
    cf = constraint_fns(d, s, flavor)
    r = cf.h_root_squared
    if r is None:
        raise MomentError(f"shape {s} has a single occupied bin; the variance constraint has no root")
    mean, kbar = cf.mean, cf.kbar
    h = math.sqrt(r)
    t0 = float(mean) - float(kbar - HALF) * h
    idx = []
    for x in d.values:
        j = math.floor((float(x) - t0) / h)
        while _edge_at_or_below(x, j + 1, mean, kbar, r):
            j += 1
        while not _edge_at_or_below(x, j, mean, kbar, r):
            j -= 1
        idx.append(j + 1)
    lo, hi = min(idx), max(idx)
    counts = [0] * (hi - lo + 1)
    for i in idx:
        counts[i - lo] += 1
    first = min(lo, 1)
    recomputed = tuple([0] * (lo - first) + counts)
    valid = lo == 1 and (K is None or hi <= K)
    return MomSolution(s, flavor, r, mean, kbar, recomputed, first, valid)


def _owned(ls: LevelSet, p: Point, d: Dataset, catalog: Catalog) -> bool:
    if not catalog.domain.contains(*p):
        return False
    try:
        return bin_counts(d, BinGrid(p[0], p[1], catalog.K)) == ls.shape
    except GridError:
        return False


def _crosses(ls: LevelSet, values: Sequence[Fraction], d: Dataset, catalog: Catalog) -> bool:
    """Does the zero set of an affine-in-vertex function meet the level set?"""
    if any(v > 0 for v in values) and any(v < 0 for v in values):
        return True
    verts = ls.vertices
    m = len(verts)
    candidates = [verts[i] for i in range(m) if values[i] == 0]
    for i in range(m):
        if values[i] == 0 and values[(i + 1) % m] == 0:
            a, b = verts[i], verts[(i + 1) % m]
            candidates.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
    return any(_owned(ls, p, d, catalog) for p in candidates)


def mean_consistent(d: Dataset, ls: LevelSet, cf: ConstraintFunctions, catalog: Catalog) -> bool:
    return _crosses(ls, [cf.f_m(t, h) for t, h in ls.vertices], d, catalog)


def variance_consistent(d: Dataset, ls: LevelSet, cf: ConstraintFunctions, catalog: Catalog) -> bool:
    return _crosses(ls, [cf.f_v(t, h) for t, h in ls.vertices], d, catalog)


def point_in_level_set(ls: LevelSet, t0: Surd, h: Surd) -> bool:
    """Half-open point-in-polygon test for a point with surd coordinates.

    An edge on the line t0 + k*h = c belongs to the polygon when the polygon
    lies on the side t0 + k*h < c (a datum on a bin edge goes to the upper
    bin); the top edge h = cap is closed.  ``t0`` and ``h`` must share r.
    """
    if t0.r != h.r and t0.b and h.b:
        raise ValueError("surd coordinates must share the same radicand")
    r = t0.r if t0.b else h.r
    ct, ch = ls.centroid
    for (at, ah), (bt, bh) in ls.edges():
        dt, dh = bt - at, bh - ah
        # cross((B - A), (P - A)) as a + b*sqrt(r)
        cross = Surd(
            dt * (h.a - ah) - dh * (t0.a - at),
            dt * h.b - dh * t0.b,
            r,
        )
        sgn = cross.sign()
        if sgn > 0:
            continue
        if sgn < 0:
            return False
        if dh == 0:
            if ch > ah:
                return False
            continue
        k = -dt / dh
        if not (ct + k * ch < at + k * ah):
            return False
    return True


@dataclass(frozen=True)
class ShapeConsistency:
    shape: Shape
    cls: ConsistencyClass
    solution: MomSolution | None

    @property
    def mean_consistent(self) -> bool:
        return self.cls.mean_consistent

    @property
    def var_consistent(self) -> bool:
        return self.cls.var_consistent


def classify_shape(d: Dataset, ls: LevelSet, catalog: Catalog, flavor: str = FREQUENCY) -> ShapeConsistency:
    cf = constraint_fns(d, ls.shape, flavor)
    sol = solve_mom(d, ls.shape, flavor, catalog.K) if cf.h_root_squared is not None else None
    if sol is not None and sol.jointly_consistent:
        return ShapeConsistency(ls.shape, ConsistencyClass.JOINT, sol)
    m = mean_consistent(d, ls, cf, catalog)
    v = variance_consistent(d, ls, cf, catalog)
    if m and v:
        cls = ConsistencyClass.BOTH
    elif m:
        cls = ConsistencyClass.MEAN_ONLY
    elif v:
        cls = ConsistencyClass.VAR_ONLY
    else:
        cls = ConsistencyClass.NEITHER
    return ShapeConsistency(ls.shape, cls, sol)


@dataclass(frozen=True)
class ConsistencyReport:
    flavor: str
    entries: tuple[ShapeConsistency, ...]

    def of(self, cls: ConsistencyClass) -> list[Shape]:
        return [e.shape for e in self.entries if e.cls is cls]

    def counts(self) -> dict[str, int]:
        out = {c.value: 0 for c in ConsistencyClass}
        for e in self.entries:
            out[e.cls.value] += 1
        return out

    @property
    def mean_or_var(self) -> int:
        return sum(1 for e in self.entries if e.cls is not ConsistencyClass.NEITHER)

    def get(self, s: Shape | Iterable[int]) -> ShapeConsistency | None:
        s = s if isinstance(s, Shape) else Shape(tuple(s))
        for e in self.entries:
            if e.shape == s:
                return e
        return None

    def restricted(self, max_bins: int) -> "ConsistencyReport":
        return ConsistencyReport(self.flavor, tuple(e for e in self.entries if e.shape.n_bins <= max_bins))


def classify_catalog(d: Dataset, c: Catalog, flavor: str = FREQUENCY) -> ConsistencyReport:
    return ConsistencyReport(flavor, tuple(classify_shape(d, ls, c, flavor) for ls in c))


@dataclass(frozen=True)
class SkewRank:
    shape: Shape
    fps: float | None
    signed_rank: int | None
    tied: bool
    in_T: bool
    in_F: bool
    in_T_and_Jg: bool | None


def band_size(pct: float, S: int) -> int:
    """pct * S rounded half-up."""
    return int(math.floor(Fraction(str(pct)) * S + HALF))


def skew_rank(
    d: Dataset,
    c: Catalog,
    band_pcts: tuple[float, float] = (0.10, 0.05),
    report: ConsistencyReport | None = None,
) -> list[SkewRank]:
    """Signed competition ranks of grouped skewness around the data skewness.

    Shapes at or above the data value rank +1, +2, ... outward; shapes below
    rank -1, -2, ....  Equal skewness gives equal rank.  The single-bin shape
    has no skewness and no rank.
    """
    data_skew = sample_moments(d).skew
    T = band_size(band_pcts[0], c.S)
    F = band_size(band_pcts[1], c.S)
    skews = {}
    for ls in c:
        gm = GroupedMoments(ls.shape)
        skews[ls.shape] = gm.skew if gm.occupied > 1 else None
    above = sorted({v for v in skews.values() if v is not None and v >= data_skew})
    below = sorted({v for v in skews.values() if v is not None and v < data_skew}, reverse=True)
    multiplicity: dict = {}
    for v in skews.values():
        multiplicity[v] = multiplicity.get(v, 0) + 1

    rank_of = {}
    seen = 0
    for v in above:
        rank_of[v] = seen + 1
        seen += multiplicity[v]
    seen = 0
    for v in below:
        rank_of[v] = -(seen + 1)
        seen += multiplicity[v]

    out = []
    for ls in c:
        v = skews[ls.shape]
        if v is None:
            out.append(SkewRank(ls.shape, None, None, False, False, False, None))
            continue
        rank = rank_of[v]
        jg = None
        if report is not None:
            e = report.get(ls.shape)
            jg = abs(rank) <= T and e is not None and e.cls is ConsistencyClass.JOINT
        out.append(SkewRank(ls.shape, float(v), rank, multiplicity[v] > 1, abs(rank) <= T, abs(rank) <= F, jg))
    return out


def rank_lookup(ranks: Sequence[SkewRank], s: Shape | Iterable[int]) -> SkewRank | None:
    s = s if isinstance(s, Shape) else Shape(tuple(s))
    for r in ranks:
        if r.shape == s:
            return r
    return None


def find_level_set(c: Catalog, s) -> LevelSet:
    ls = lookup(c, s)
    if ls is None:
        raise KeyError(f"shape {s} is not attainable for this catalog")
    return ls
