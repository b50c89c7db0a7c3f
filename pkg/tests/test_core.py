from fractions import Fraction as F

import pytest

from momhist.core import (
    EXACTLY,
    BinGrid,
    Dataset,
    DegenerateDataError,
    GridError,
    ParseError,
    Shape,
    bin_counts,
    bin_index,
    build_domain,
    canonical_order,
    clip_polygon,
    parse_dataset,
    to_scalar,
)


def test_to_scalar_is_exact():
    assert to_scalar("0.1") == F(1, 10)
    assert to_scalar("-2.5e-1") == F(-1, 4)
    assert to_scalar(3) == F(3)
    with pytest.raises(TypeError):
        to_scalar(0.1)
    with pytest.raises(ParseError):
        to_scalar("nan")


def test_parse_dataset_mixed_separators():
    d = parse_dataset("# header\n5, 1\n  2\n")
    assert d.values == (F(1), F(2), F(5))
    assert d.n == 3


def test_parse_dataset_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_dataset("1 2\n3 x4\n")
    assert exc.value.line == 2
    assert exc.value.column == 3


def test_parse_dataset_empty():
    with pytest.raises(ParseError):
        parse_dataset("# only a comment\n\n")


def test_dataset_stats(data3):
    assert data3.n == 12
    assert data3.x_min == F("0.37") and data3.x_max == F("5.61")
    assert data3.mean == F(961, 300)
    assert data3.distinct == data3.values


def test_digest_ignores_input_order():
    assert Dataset.of(["5", "1", "2"]).digest == Dataset.of(["1", "2", "5"]).digest


def test_shape_trims_and_validates():
    assert Shape((2, 0, 1, 0, 0)).counts == (2, 0, 1)
    assert Shape.of(1, 2) == Shape((1, 2))
    with pytest.raises(ValueError):
        Shape((0, 3))
    with pytest.raises(ValueError):
        Shape((1, -1))
    assert str(Shape.of(1, 1, 0, 1)) == "(1,1,0,1)"
    assert Shape.of(1, 2, 3).reversed() == Shape.of(3, 2, 1)


def test_bin_index_half_open():
    assert bin_index(F(2), F(1), F(1)) == 2
    assert bin_index(F(1), F(1), F(1)) == 1
    assert bin_index(F(199, 100), F(1), F(1)) == 1


def test_bin_counts_tiny(tiny):
    assert bin_counts(tiny, BinGrid(F(1), F(1), 5)) == Shape.of(1, 1, 0, 0, 1)
    assert bin_counts(tiny, BinGrid(F(0), F(2), 3)) == Shape.of(1, 1, 1)


def test_bin_counts_rejects_bad_grids(tiny):
    with pytest.raises(GridError):
        bin_counts(tiny, BinGrid(F(2), F(1), 4))
    with pytest.raises(GridError):
        bin_counts(tiny, BinGrid(F(1), F(1), 4))
    with pytest.raises(GridError):
        BinGrid(F(0), F(0), 3)


def test_domain_tiny(tiny):
    dom = build_domain(tiny, 4)
    assert set(dom.vertices) == {(F(1), F(1)), (F(1), F(8)), (F(-7), F(8)), (F(-1, 3), F(4, 3))}
    assert dom.contains(F(1), F(2))
    assert not dom.contains(F(1), F(1))  # t0 + 4h > 5 fails at equality
    assert dom.contains(F(1), F(8))


def test_domain_exactly_k_is_smaller(tiny):
    assert build_domain(tiny, 4, EXACTLY).area < build_domain(tiny, 4).area


def test_domain_degenerate():
    with pytest.raises(DegenerateDataError):
        build_domain(Dataset.of(["2", "2"]), 3)


def test_clip_and_canonical_order():
    square = [(F(0), F(0)), (F(2), F(0)), (F(2), F(2)), (F(0), F(2))]
    half = clip_polygon(square, F(1), F(0), F(1))
    assert canonical_order(half) == ((F(0), F(0)), (F(1), F(0)), (F(1), F(2)), (F(0), F(2)))
    assert canonical_order(list(reversed(square)))[0] == (F(0), F(0))
