"""Sample and grouped moments, Fisher-Pearson skewness, constraint functions."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering

from .core import BinGrid, Dataset, MomentError, Shape

FREQUENCY = "frequency"
DENSITY = "density"
FLAVORS = (FREQUENCY, DENSITY)


@total_ordering
@dataclass(frozen=True)
class ExactSkew:
    """A skewness value sign * sqrt(square), compared exactly.

    Standardized third moments are irrational in general, but their squares
    are rational, which is enough to order them without rounding.
    """

    sign: int
    square: Fraction

    @classmethod
    def from_moments(cls, m2: Fraction, m3: Fraction) -> "ExactSkew":
        if m2 <= 0:
            raise MomentError("skewness is undefined without spread")
        sign = (m3 > 0) - (m3 < 0)
        return cls(sign, m3 * m3 / (m2 * m2 * m2))

    def __float__(self) -> float:
        return self.sign * math.sqrt(self.square)

    def __neg__(self) -> "ExactSkew":
        return ExactSkew(-self.sign, self.square)

    def __lt__(self, other: "ExactSkew") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign >= 0:
            return self.square < other.square
        return self.square > other.square


def fpas_factor(n: int) -> float:
    """Ratio of adjusted to unadjusted Fisher-Pearson skewness."""
    if n < 3:
        raise MomentError("adjusted skewness needs n >= 3")
    return math.sqrt(n * (n - 1)) / (n - 2)


@dataclass(frozen=True)
class SampleMoments:
    n: int
    mean: Fraction
    variance: Fraction
    m2: Fraction
    m3: Fraction
    skew: ExactSkew

    @property
    def fps(self) -> float:
        return float(self.skew)

    @property
    def fpas(self) -> float | None:
        return self.fps * fpas_factor(self.n) if self.n >= 3 else None

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


def sample_moments(d: Dataset) -> SampleMoments:
    if d.n < 2:
        raise MomentError(f"need at least two observations, got {d.n}")
    mean = d.mean
    m2 = sum(((x - mean) ** 2 for x in d.values), Fraction(0)) / d.n
    m3 = sum(((x - mean) ** 3 for x in d.values), Fraction(0)) / d.n
    if m2 == 0:
        raise MomentError("zero sample variance; skewness undefined")
    return SampleMoments(d.n, mean, d.variance, m2, m3, ExactSkew.from_moments(m2, m3))


@dataclass(frozen=True)
class GroupedMoments:
    """Moments of a shape in bin-index units (independent of t0 and h)."""

    shape: Shape

    @property
    def n(self) -> int:
        return self.shape.n

    @cached_property
    def kbar(self) -> Fraction:
        return Fraction(sum(k * v for k, v in enumerate(self.shape, 1)), self.n)

    def _central(self, r: int) -> Fraction:
        kb = self.kbar
        return sum((v * (k - kb) ** r for k, v in enumerate(self.shape, 1)), Fraction(0))

    @cached_property
    def sum_sq(self) -> Fraction:
        return self._central(2)

    @cached_property
    def T3(self) -> Fraction:
        return self._central(3)

    @property
    def C(self) -> Fraction:
        if self.n < 2:
            raise MomentError("grouped variance needs n >= 2")
        return self.sum_sq / (self.n - 1)

    @property
    def occupied(self) -> int:
        return sum(1 for v in self.shape if v)

    @cached_property
    def skew(self) -> ExactSkew:
        if self.n < 2 or self.occupied < 2:
            raise MomentError(f"skewness of {self.shape} is undefined: a single occupied bin")
        return ExactSkew.from_moments(self.sum_sq / self.n, self.T3 / self.n)


def grouped_mean(g: BinGrid, s: Shape) -> Fraction:
    """Mean of bin midpoints weighted by counts: t0 + h*(kbar - 1/2)."""
    return g.t0 + g.h * (GroupedMoments(s).kbar - Fraction(1, 2))


def grouped_variance(g: BinGrid, s: Shape, flavor: str = FREQUENCY) -> Fraction:
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    var = g.h * g.h * GroupedMoments(s).C
    if flavor == DENSITY:
        var += g.h * g.h / 12
    return var


def fps_grouped(s: Shape) -> float:
    return float(GroupedMoments(s).skew)


def fpas_grouped(s: Shape) -> float:
    return fps_grouped(s) * fpas_factor(s.n)


def grouped_raw_moment(g: BinGrid, s: Shape, r: int) -> Fraction:
    """(1/n) * sum of v_k * midpoint_k**r, exact."""
    return sum((v * g.midpoint(k) ** r for k, v in enumerate(s, 1)), Fraction(0)) / s.n


@dataclass(frozen=True)
class ConstraintFunctions:
    """f_m(t0, h) = grouped mean - sample mean; f_v(t0, h) = grouped variance - s^2."""

    kbar: Fraction
    C: Fraction
    mean: Fraction
    variance: Fraction
    flavor: str = FREQUENCY

    @property
    def width_coef(self) -> Fraction:
        """Coefficient c with grouped variance = c * h**2."""
        return self.C + (Fraction(1, 12) if self.flavor == DENSITY else 0)

    def f_m(self, t0, h):
        return t0 + h * (self.kbar - Fraction(1, 2)) - self.mean

    def f_v(self, t0, h):
        return h * h * self.width_coef - self.variance

    @property
    def h_root_squared(self) -> Fraction | None:
        """Square of the positive root of f_v, or None when f_v < 0 everywhere."""
        c = self.width_coef
        return self.variance / c if c > 0 else None

    @property
    def h_root(self) -> float | None:
        sq = self.h_root_squared
        return None if sq is None else math.sqrt(sq)


def constraint_fns(d: Dataset, s: Shape, flavor: str = FREQUENCY) -> ConstraintFunctions:
    if d.n < 2:
        raise MomentError("constraint functions need n >= 2")
    gm = GroupedMoments(s)
    return ConstraintFunctions(gm.kbar, gm.C, d.mean, d.variance, flavor)


def group_by_skewness(shapes) -> dict[ExactSkew | None, list[Shape]]:
    """Shapes sharing an exact grouped skewness; None collects undefined ones."""
    out: dict[ExactSkew | None, list[Shape]] = defaultdict(list)
    for s in shapes:
        s = getattr(s, "shape", s)
        gm = GroupedMoments(s)
        out[gm.skew if gm.occupied > 1 else None].append(s)
    return dict(out)

