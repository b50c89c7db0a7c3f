"""Acceptance criteria 1-11, one recorded PASS/FAIL line each.

The lines are printed in the pytest terminal summary under
"acceptance criteria".  A criterion that fails stays failing here; the
analysis of why lives in the project's decisions ledger.
"""

import random
from fractions import Fraction as F

import pytest

from momhist.consistency import ConsistencyClass, classify_catalog, point_in_level_set, rank_lookup, skew_rank, solve_mom
from momhist.core import BinGrid, Dataset, Shape, bin_counts
from momhist.diagnostics import edge_collisions, is_exactly_symmetric, mode_inversion_report, unpaired_shapes
from momhist.levelset import enumerate_level_sets, grid_sample_oracle, lookup
from momhist.moments import GroupedMoments, fpas_grouped, fps_grouped, sample_moments
from momhist.selection import data_raw_moment, exact_moment_grid, ml_rank, stability_cells

TINY_LEVEL_SETS = {
    (3,): ([(1, 4), (1, 8), (-3, 8)], 4, 8),
    (1, 2): ([(-1, 3), (-6, 8), (-7, 8), (-3, 4)], 3, 8),
    (2, 1): ([(1, 2), (1, 4), (-3, 8), (-6, 8), (-1, 3)], 2, 8),
    (1, 1, 1): ([("1/2", "3/2"), (-1, 3), (-3, 4), (-1, 2)], "3/2", 4),
    (2, 0, 1): ([(1, "4/3"), (1, 2), (-1, 3), ("1/2", "3/2")], "4/3", 3),
    (1, 1, 0, 1): ([(1, 1), ("1/2", "3/2"), (-1, 2), ("-1/3", "4/3")], 1, 2),
    (2, 0, 0, 1): ([(1, 1), (1, "4/3"), ("1/2", "3/2")], 1, "3/2"),
}


def _check(record, label, checks):
    """checks: list of (name, ok, observed)."""
    bad = [f"{name}: got {obs}" for name, ok, obs in checks if not ok]
    detail = "; ".join(bad) if bad else f"{len(checks)}/{len(checks)} checks"
    record(label, not bad, detail)
    assert not bad, detail


@pytest.fixture(scope="module")
def d3_report(data3, data3_catalog):
    return classify_catalog(data3, data3_catalog)


def test_c01_catalog_fidelity(record, tiny_catalog):
    checks = [("S", tiny_catalog.S == 7, tiny_catalog.S)]
    for counts, (verts, lo, hi) in TINY_LEVEL_SETS.items():
        ls = lookup(tiny_catalog, counts)
        if ls is None:
            checks.append((str(counts), False, "missing"))
            continue
        want = {(F(t), F(h)) for t, h in verts}
        checks.append((f"{counts} vertices", set(ls.vertices) == want, ls.vertices))
        checks.append((f"{counts} h range", (ls.h_min, ls.h_max) == (F(lo), F(hi)), (ls.h_min, ls.h_max)))
    _check(record, "C1  catalog fidelity {1,2,5} K=4", checks)


def test_c02_shape_count(record, data3_catalog):
    _check(record, "C2  Data#3 K=6 has 123 shapes", [("S", data3_catalog.S == 123, data3_catalog.S)])


def test_c03_consistency_tallies(record, d3_report):
    small = d3_report.restricted(3).counts()
    want = {"joint": 8, "both": 11, "mean-only": 10, "var-only": 2}
    checks = [(f"K_s<=3 {k}", small[k] == v, small[k]) for k, v in want.items()]
    total = sum(small[k] for k in want)
    checks.append(("K_s<=3 total", total == 31, total))
    checks.append(("|M u V| over 123", d3_report.mean_or_var == 79, d3_report.mean_or_var))
    spot = {
        (4, 4, 4): ConsistencyClass.VAR_ONLY,
        (3, 8, 1): ConsistencyClass.MEAN_ONLY,
        (5, 3, 4): ConsistencyClass.JOINT,
        (5, 4, 3): ConsistencyClass.BOTH,
        (3, 2, 1, 1, 2, 3): ConsistencyClass.NEITHER,
        (1, 2, 3, 1, 2, 3): ConsistencyClass.JOINT,
    }
    for counts, cls in spot.items():
        got = d3_report.get(counts).cls
        checks.append((f"{counts} class", got is cls, got.value))
    _check(record, "C3  consistency tallies Data#3", checks)


def test_c04_mom_solver(record, data3):
    a = solve_mom(data3, Shape.of(5, 3, 4), K=6)
    b = solve_mom(data3, Shape.of(1, 2, 3, 1, 2, 3), K=6)
    c = solve_mom(data3, Shape.of(5, 4, 3), K=6)
    e = solve_mom(data3, Shape.of(1, 2, 3, 3, 2, 1), K=6)
    checks = [
        ("(5,3,4) t0", abs(a.t0_mom - 0.3159) <= 1e-3, round(a.t0_mom, 4)),
        ("(5,3,4) h", abs(a.h_mom - 2.0382) <= 1e-3, round(a.h_mom, 4)),
        ("(5,3,4) joint", a.jointly_consistent, a.recomputed),
        ("(1,2,3,1,2,3) t0", abs(b.t0_mom + 0.2931) <= 1e-3, round(b.t0_mom, 4)),
        ("(1,2,3,1,2,3) h", abs(b.h_mom - 1.0489) <= 1e-3, round(b.h_mom, 4)),
        ("(5,4,3) recount", Shape(c.recomputed) == Shape.of(3, 3, 1, 4, 1), c.recomputed),
        ("(1,2,3,3,2,1) recount", Shape(e.recomputed) == Shape.of(1, 2, 3, 3, 3, 0), e.recomputed),
    ]
    _check(record, "C4  MOM solver Data#3", checks)


def test_c05_skewness_and_ranks(record, data3, data3_catalog, d3_report):
    fps_x = sample_moments(data3).fps
    ranks = skew_rank(data3, data3_catalog, report=d3_report)
    checks = [("FPS_x", abs(fps_x + 0.0288) <= 5e-4, round(fps_x, 5))]
    table = {
        (2, 7, 3): (-0.075, -8),
        (3, 8, 1): (-0.0548, -4),
        (1, 2, 3, 1, 2, 3): (-0.0552, -6),
        (3, 3, 2, 4): (-0.0491, -3),
        (1, 2, 3, 1, 3, 2): (-0.0859, -11),
    }
    for counts, (fps, rank) in table.items():
        got = fps_grouped(Shape(counts))
        checks.append((f"FPS_g{counts}", abs(got - fps) <= 5e-4, round(got, 5)))
        r = rank_lookup(ranks, counts).signed_rank
        checks.append((f"rank{counts}", r == rank, r))
    tj = {r.shape.counts for r in ranks if r.in_T_and_Jg}
    for counts in [(6, 6), (1, 5, 1, 5), (1, 5, 5, 1), (3, 3, 3, 3), (1, 4, 2, 4, 1), (1, 2, 3, 1, 2, 3)]:
        checks.append((f"T&Jg {counts}", counts in tj, sorted(tj)))
    _check(record, "C5  skewness values and ranks Data#3", checks)


def test_c06_stability(record, tiny_catalog):
    st = stability_cells(tiny_catalog)
    want_points = tuple(F(x) for x in (1, "4/3", "3/2", 2, 3, 4, 8))
    cells = {(c.h_lo, c.h_hi): set(c.shapes) for c in st.cells}
    want = {
        (1, "4/3"): [(2, 0, 0, 1), (1, 1, 0, 1)],
        ("4/3", "3/2"): [(2, 0, 0, 1), (1, 1, 0, 1), (2, 0, 1)],
        ("3/2", 2): [(1, 1, 0, 1), (2, 0, 1), (1, 1, 1)],
        (2, 3): [(2, 0, 1), (1, 1, 1), (2, 1)],
        (3, 4): [(1, 1, 1), (2, 1), (1, 2)],
        (4, 8): [(2, 1), (1, 2), (3,)],
    }
    checks = [("breakpoints", st.breakpoints == want_points, st.breakpoints)]
    for (lo, hi), shapes in want.items():
        got = cells.get((F(lo), F(hi)))
        checks.append((f"cell ({lo},{hi})", got == {Shape(s) for s in shapes}, got))
    best = [(c.h_lo, c.h_hi) for c in st.most_stable]
    checks.append(("most stable", best == [(F(1), F(4, 3))], best))
    _check(record, "C6  stability cells {1,2,5} K=4", checks)


def test_c07_ml_ranking(record, data3_catalog):
    ranked = ml_rank(data3_catalog)
    best3 = next(m.shape for m in ranked if m.shape.n_bins == 3)
    checks = [
        ("top shape", ranked[0].shape == Shape.of(3, 0, 3, 1, 2, 3), ranked[0].shape),
        ("best K_s=3", best3 == Shape.of(3, 4, 5), best3),
    ]
    _check(record, "C7  ML ranking Data#3", checks)


def test_c08_histograms_a_b(record, data1):
    a = BinGrid(F("0.9355"), F("0.0326"), 7)
    b = BinGrid(F("0.96"), F("0.03"), 6)
    sa, sb = bin_counts(data1, a), bin_counts(data1, b)
    checks = [
        ("histogram A", sa == Shape.of(1, 5, 9, 12, 1, 2), sa),
        ("histogram B", sb == Shape.of(2, 12, 9, 4, 2, 1), sb),
        ("A edge-free", edge_collisions(data1, a) == [], edge_collisions(data1, a)),
        ("B edge-free", edge_collisions(data1, b) == [], edge_collisions(data1, b)),
    ]
    _check(record, "C8  histograms A and B reproduction Data#1", checks)


# G and H are printed at width 1.9060; the shapes occur at 1.1906 (digit transposition).
REVERSAL_WITNESSES = [
    ((10, 9, 1), "1.4250", "3.2075"),
    ((1, 9, 10), "-1.048", "3.2075"),
    ((8, 4, 7, 1), "1.9767", "1.9789"),
    ((1, 7, 4, 8), "0.1078", "1.9789"),
    ((6, 4, 4, 5, 1), "1.9829", "1.4750"),
    ((1, 5, 4, 4, 6), "0.6421", "1.4750"),
    ((4, 6, 0, 5, 4, 1), "1.9619", "1.1906"),
    ((1, 4, 5, 0, 6, 4), "0.8944", "1.1906"),
]


def test_c09_symmetry_and_reversals(record, sym20, data3_catalog):
    checks = [("symmetric", is_exactly_symmetric(sym20), False)]
    cats = {K: enumerate_level_sets(sym20, K) for K in (4, 5, 6)}
    for counts, t0, h in REVERSAL_WITNESSES:
        got = bin_counts(sym20, BinGrid(F(t0), F(h), 6))
        checks.append((f"witness {counts}", got == Shape(counts), got))
        checks.append((f"catalog has {counts}", counts in cats[6], "missing"))
    for K, c in cats.items():
        lonely = unpaired_shapes(c)
        checks.append((f"K={K} reversal coverage", not lonely, lonely[:3]))
    inv3 = mode_inversion_report(data3_catalog)
    checks.append(("Data#3 (1,2,3,3,2,1)/(3,2,1,1,2,3)", (Shape.of(1, 2, 3, 3, 2, 1), Shape.of(3, 2, 1, 1, 2, 3)) in inv3, len(inv3)))
    for K, c in cats.items():
        inv = mode_inversion_report(c)
        checks.append((f"K={K} (1,9,9,1)/(6,4,4,6)", (Shape.of(1, 9, 9, 1), Shape.of(6, 4, 4, 6)) in inv, len(inv)))
    _check(record, "C9  symmetry, reversals, mode inversion", checks)


def test_c10_exact_moment_grid(record, data3):
    checks = []
    for m in (1, 2, 3):
        g = exact_moment_grid(data3, m)
        for r in range(1, 7):
            diff = g.grouped_moment(r) - data_raw_moment(data3, r)
            checks.append((f"m={m} order {r}", diff == 0, diff))
        checks.append((f"m={m} density excess", g.density_excess() == g.h**2 / 12, g.density_excess()))
    _check(record, "C10 exact all-moment grid Data#3", checks)


def _random_datasets(count=100, seed=20261016):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 8)
        vals = [rng.randint(0, 500) for _ in range(n)]
        if len(set(vals)) < 2:
            continue
        out.append((Dataset.of(F(v, 100) for v in vals), rng.randint(1, 5)))
    return out


RESOLUTIONS = (100, 400, 1600, 6400)


def test_c11_property_suite(record):
    checks = []
    unsaturated = []
    leaks = []
    for i, (d, K) in enumerate(_random_datasets()):
        c = enumerate_level_sets(d, K)
        want = set(c.shapes)
        for r in RESOLUTIONS:
            seen = grid_sample_oracle(d, K, r)
            if not seen <= want:
                leaks.append(i)
                break
            if seen == want:
                break
        else:
            unsaturated.append(i)

        report = classify_catalog(d, c)
        cover = sorted(s.sort_key for cls in ConsistencyClass for s in report.of(cls))
        if cover != sorted(s.sort_key for s in want):
            checks.append((f"dataset {i} partition", False, report.counts()))
        for ls, e in zip(c, report.entries):
            if e.solution is None:
                continue
            pip = point_in_level_set(ls, e.solution.t0_surd, e.solution.h_surd)
            if pip != e.solution.jointly_consistent:
                checks.append((f"dataset {i} {ls.shape} joint vs point-in-polygon", False, pip))
        multi = [s for s in want if GroupedMoments(s).occupied > 1]
        for s in multi:
            if GroupedMoments(s.reversed()).skew != -GroupedMoments(s).skew:
                checks.append((f"dataset {i} {s} reversal skew", False, fps_grouped(s)))
        if d.n >= 3:
            # FPAS is FPS times a positive constant, so the exact FPS order must not invert
            by_fps = sorted(multi, key=lambda s: GroupedMoments(s).skew)
            if any(fpas_grouped(a) > fpas_grouped(b) for a, b in zip(by_fps, by_fps[1:])):
                checks.append((f"dataset {i} FPS vs FPAS order", False, "inverted"))
    checks.append(("oracle subset of catalog", not leaks, leaks))
    checks.append((f"saturation by resolution {RESOLUTIONS[-1]}", not unsaturated, unsaturated))
    if len(checks) == 2:
        checks.append(("partition, joint/PIP, reversal, FPS/FPAS", True, None))
    _check(record, "C11 property suite (100 random datasets)", checks)
