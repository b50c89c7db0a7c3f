"""JSON documents for catalogs and reports.

Rationals are written as {"exact": "p/q", "decimal": x}; the string is
canonical and the decimal (12 significant digits) is for reading only.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .consistency import ConsistencyReport, SkewRank
from .core import Dataset, Shape, build_domain
from .diagnostics import AuditVerdict, ReversalPair
from .levelset import Catalog, LevelSet
from .selection import ExactMomentGrid, MLScore, StabilityReport

SCHEMA_VERSION = 1


def rational(q: Fraction | int) -> dict[str, Any]:
    q = Fraction(q)
    return {"exact": f"{q.numerator}/{q.denominator}", "decimal": float(f"{float(q):.12g}")}


def parse_rational(obj: Any) -> Fraction:
    if isinstance(obj, dict):
        obj = obj["exact"]
    if isinstance(obj, float):
        raise TypeError("floats are not exact; use a 'p/q' string")
    return Fraction(obj)


def _point(p) -> list[dict[str, Any]]:
    return [rational(p[0]), rational(p[1])]


def _round(x: float | None) -> float | None:
    return None if x is None else float(f"{x:.12g}")


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=True) + "\n"


def dataset_json(d: Dataset) -> dict[str, Any]:
    return {"n": d.n, "digest": d.digest, "values": [rational(v) for v in d.values]}


def level_set_json(ls: LevelSet) -> dict[str, Any]:
    return {
        "K_s": ls.shape.n_bins,
        "counts": list(ls.shape.counts),
        "V_s": len(ls.vertices),
        "vertices": [_point(v) for v in ls.vertices],
        "h_min": rational(ls.h_min),
        "h_max": rational(ls.h_max),
        "convex": ls.convex,
        "pieces": ls.pieces,
    }


def catalog_json(c: Catalog) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "catalog",
        "dataset": dataset_json(c.dataset),
        "K": c.K,
        "mode": c.mode,
        "delta": rational(c.domain.delta),
        "domain": [_point(v) for v in c.domain.vertices],
        "S": c.S,
        "level_sets": [level_set_json(ls) for ls in c],
    }


def catalog_from_json(doc: dict[str, Any] | str) -> Catalog:
    """Rebuild a Catalog from catalog_json output."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    d = Dataset.of(parse_rational(v) for v in doc["dataset"]["values"])
    domain = build_domain(d, doc["K"], doc["mode"], parse_rational(doc["delta"]))
    level_sets = tuple(
        LevelSet(
            Shape(tuple(e["counts"])),
            tuple((parse_rational(t), parse_rational(h)) for t, h in e["vertices"]),
            e.get("convex", True),
            e.get("pieces", 1),
        )
        for e in doc["level_sets"]
    )
    return Catalog(d, doc["K"], doc["mode"], domain, level_sets)


def classification_json(
    c: Catalog, report: ConsistencyReport, ranks: list[SkewRank], fps_x: float, bands: tuple[float, float]
) -> dict[str, Any]:
    by_shape = {r.shape: r for r in ranks}
    shapes = []
    for e in report.entries:
        r = by_shape[e.shape]
        sol = e.solution
        shapes.append({
            "counts": list(e.shape.counts),
            "class": e.cls.value,
            "h_mom": _round(sol.h_mom) if sol else None,
            "t0_mom": _round(sol.t0_mom) if sol else None,
            "recomputed": list(sol.recomputed) if sol else None,
            "recomputed_first_bin": sol.first_bin if sol else None,
            "FPS_g": _round(r.fps),
            "signed_rank": r.signed_rank,
            "in_T": r.in_T,
            "in_F": r.in_F,
            "in_T_and_Jg": r.in_T_and_Jg,
        })
    return {
        "schema": SCHEMA_VERSION,
        "kind": "classification",
        "dataset": {"n": c.dataset.n, "digest": c.digest},
        "K": c.K,
        "mode": c.mode,
        "flavor": report.flavor,
        "bands": list(bands),
        "FPS_x": _round(fps_x),
        "S": c.S,
        "counts": report.counts(),
        "mean_or_var": report.mean_or_var,
        "shapes": shapes,
    }


def stability_json(c: Catalog, st: StabilityReport, ml: list[MLScore]) -> dict[str, Any]:
    cell = lambda x: {  # noqa: E731
        "h_lo": rational(x.h_lo),
        "h_hi": rational(x.h_hi),
        "shapes": [list(s.counts) for s in x.shapes],
        "count": x.count,
    }
    return {
        "schema": SCHEMA_VERSION,
        "kind": "stability",
        "dataset": {"n": c.dataset.n, "digest": c.digest},
        "K": c.K,
        "mode": c.mode,
        "breakpoints": [rational(b) for b in st.breakpoints],
        "cells": [cell(x) for x in st.cells],
        "most_stable": [cell(x) for x in st.most_stable],
        "ml_ranking": [
            {"counts": list(m.shape.counts), "h_min": rational(m.h_min), "score": _round(m.score), "open": m.open}
            for m in ml
        ],
    }


def reversals_json(
    c: Catalog,
    symmetric: bool,
    pairs: list[ReversalPair],
    unpaired: list[Shape],
    inversions: list[tuple[Shape, Shape]],
) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "reversals",
        "dataset": {"n": c.dataset.n, "digest": c.digest},
        "K": c.K,
        "mode": c.mode,
        "symmetric": symmetric,
        "pairs": [
            {
                "shape": list(p.shape.counts),
                "reversed": list(p.reversed.counts),
                "witness": _point(p.witness),
                "reversed_witness": _point(p.reversed_witness),
            }
            for p in pairs
        ],
        "unpaired": [list(s.counts) for s in unpaired],
        "mode_inversions": [{"interior": list(a.counts), "boundary": list(b.counts)} for a, b in inversions],
    }


def dotplot_json(d: Dataset, g: ExactMomentGrid, orders: int = 6) -> dict[str, Any]:
    from .selection import data_raw_moment

    return {
        "schema": SCHEMA_VERSION,
        "kind": "dotplot",
        "dataset": {"n": d.n, "digest": d.digest},
        "m": g.m,
        "Q": g.Q,
        "t0": rational(g.t0),
        "h": rational(g.h),
        "K": g.grid.K,
        "counts": list(g.shape.counts),
        "moments": [
            {"order": r, "grouped": rational(g.grouped_moment(r)), "data": rational(data_raw_moment(d, r))}
            for r in range(1, orders + 1)
        ],
        "density_excess": rational(g.density_excess()),
    }


def audit_json(d: Dataset, v: AuditVerdict, collisions: list[tuple[Fraction, int]]) -> dict[str, Any]:
    alt = v.alternative
    return {
        "schema": SCHEMA_VERSION,
        "kind": "audit",
        "dataset": {"n": d.n, "digest": d.digest},
        "grid": {"t0": rational(v.grid.t0), "h": rational(v.grid.h), "K": v.grid.K},
        "shape": list(v.shape.counts),
        "FPS_g": _round(v.fps_g),
        "FPS_x": _round(v.fps_x),
        "sign_conflict": v.sign_conflict,
        "class": v.consistency.value if v.consistency else None,
        "edge_collisions": [{"x": rational(x), "edge": k} for x, k in collisions],
        "alternative": None if alt is None else {
            "counts": list(alt.shape.counts),
            "t0_mom": _round(alt.t0_mom),
            "h_mom": _round(alt.h_mom),
        },
    }
