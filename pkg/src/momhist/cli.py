"""momhist command-line interface.

Exit codes: 0 success, 1 usage, 2 input or parse error, 3 degenerate data,
4 any other computation error (invalid grid, undefined moments).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import report as rep
from . import svg
from .consistency import ConsistencyClass, classify_catalog, skew_rank
from .core import (
    AT_MOST,
    EXACTLY,
    BinGrid,
    Dataset,
    DegenerateDataError,
    MomhistError,
    ParseError,
    bin_index,
    format_scalar,
    parse_dataset,
    to_scalar,
)
from .diagnostics import (
    audit,
    edge_collisions,
    is_exactly_symmetric,
    mode_inversion_report,
    reversal_pairs,
    unpaired_shapes,
)
from .levelset import Catalog, enumerate_level_sets
from .moments import FLAVORS, FREQUENCY, sample_moments
from .selection import exact_moment_grid, ml_rank, stability_cells

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_COMPUTE = 4

DEFAULT_K = 6
COMMANDS = ("enumerate", "classify", "rank", "stability", "reversals", "dotplot", "audit")

CLASS_COLORS = {
    ConsistencyClass.JOINT: "#2a9d8f",
    ConsistencyClass.BOTH: "#8ac926",
    ConsistencyClass.MEAN_ONLY: "#48cae4",
    ConsistencyClass.VAR_ONLY: "#ffb703",
    ConsistencyClass.NEITHER: "#d9d9d9",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    K: int | None
    mode: str
    flavor: str
    bands: tuple[float, float]
    format: str
    svg: str | None
    t0: Fraction | None
    h: Fraction | None
    m: int
    delta: Fraction | None

    @property
    def max_bins(self) -> int:
        return DEFAULT_K if self.K is None else self.K


def _bands(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two percentages, e.g. 10,5")
    try:
        vals = tuple(float(p) / 100 for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad percentages: {text!r}") from None
    if not all(0 < v <= 0.5 for v in vals):
        raise argparse.ArgumentTypeError("band percentages must lie in (0, 50]")
    return vals  # type: ignore[return-value]


def _rational(text: str) -> Fraction:
    try:
        return to_scalar(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="data file ('-' for stdin)")
    common.add_argument("--max-bins", dest="K", type=_positive, default=None, help=f"K, the bin limit (default {DEFAULT_K})")
    common.add_argument("--exactly-k", action="store_true", help="require exactly K bins instead of at most K")
    common.add_argument("--flavor", choices=FLAVORS, default=FREQUENCY)
    common.add_argument("--bands", type=_bands, default=(0.10, 0.05), help="skewness band percentages (default 10,5)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--svg", default=None, metavar="PATH", help="also write an SVG plot")
    common.add_argument("--delta", type=_rational, default=None, help="width slack above the data range (default: the range)")
    common.add_argument("--t0", type=_rational, default=None)
    common.add_argument("--h", type=_rational, default=None)
    common.add_argument("--m", type=_positive, default=1, help="dot-plot refinement factor")

    parser = _Parser(prog="momhist", description="Exact histogram shape enumeration and moment consistency.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "enumerate": "list every attainable shape with its level set",
        "classify": "mean/variance consistency classes and MOM solutions",
        "rank": "signed skewness ranks around the data skewness",
        "stability": "bin-width stability cells and likelihood ranking",
        "reversals": "symmetry, reversal pairs and mode inversions",
        "dotplot": "exact all-moment grid",
        "audit": "check one histogram grid (needs --t0 and --h)",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.command == "audit" and (ns.t0 is None or ns.h is None):
        raise UsageError("momhist audit: error: --t0 and --h are required")
    if ns.h is not None and ns.h <= 0:
        raise UsageError("momhist: error: --h must be positive")
    return RunConfig(
        command=ns.command,
        input=ns.input,
        K=ns.K,
        mode=EXACTLY if ns.exactly_k else AT_MOST,
        flavor=ns.flavor,
        bands=ns.bands,
        format=ns.format,
        svg=ns.svg,
        t0=ns.t0,
        h=ns.h,
        m=ns.m,
        delta=ns.delta,
    )


def load_input(path: str) -> Dataset:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse_dataset(text)


# Text rendering ----------------------------------------------------------


def _table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(h) for h in headers]] + [["-" if v is None else str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _counts(c) -> str:
    return ",".join(str(v) for v in c)


def _pt(p) -> str:
    return f"({format_scalar(p[0])}, {format_scalar(p[1])})"


def _f(x: float | None, digits: int = 4) -> str | None:
    return None if x is None else f"{x:.{digits}f}"


def _header(c: Catalog) -> str:
    return f"n={c.dataset.n} digest={c.digest} K={c.K} mode={c.mode} S={c.S}\n\n"


# Commands ----------------------------------------------------------------


def _catalog(d: Dataset, cfg: RunConfig) -> Catalog:
    return enumerate_level_sets(d, cfg.max_bins, cfg.mode, cfg.delta)


def cmd_enumerate(d: Dataset, cfg: RunConfig):
    c = _catalog(d, cfg)
    if cfg.format == "json":
        out = rep.dumps(rep.catalog_json(c))
    else:
        rows = [
            (_counts(ls.shape), ls.shape.n_bins, len(ls.vertices), format_scalar(ls.h_min), format_scalar(ls.h_max),
             " ".join(_pt(v) for v in ls.vertices))
            for ls in c
        ]
        out = _header(c) + _table(("counts", "K_s", "V_s", "h_min", "h_max", "vertices"), rows)
    return out, (lambda: svg.level_set_svg(c))


def cmd_classify(d: Dataset, cfg: RunConfig):
    c = _catalog(d, cfg)
    report = classify_catalog(d, c, cfg.flavor)
    ranks = skew_rank(d, c, cfg.bands, report)
    fps_x = sample_moments(d).fps
    doc = rep.classification_json(c, report, ranks, fps_x, cfg.bands)
    if cfg.format == "json":
        out = rep.dumps(doc)
    else:
        tally = " ".join(f"{k}={v}" for k, v in doc["counts"].items())
        rows = [
            (_counts(e["counts"]), e["class"], _f(e["t0_mom"]), _f(e["h_mom"]),
             _counts(e["recomputed"]) if e["recomputed"] else None, _f(e["FPS_g"]), e["signed_rank"])
            for e in doc["shapes"]
        ]
        out = (
            _header(c)
            + f"flavor={cfg.flavor} FPS_x={fps_x:.4f} {tally} mean_or_var={report.mean_or_var}\n\n"
            + _table(("counts", "class", "t0_mom", "h_mom", "recomputed", "FPS_g", "rank"), rows)
        )
    colors = {e.shape: CLASS_COLORS[e.cls] for e in report.entries}
    return out, (lambda: svg.level_set_svg(c, colors=colors))


def cmd_rank(d: Dataset, cfg: RunConfig):
    c = _catalog(d, cfg)
    report = classify_catalog(d, c, cfg.flavor)
    ranks = skew_rank(d, c, cfg.bands, report)
    fps_x = sample_moments(d).fps
    ranked = sorted((r for r in ranks if r.signed_rank is not None), key=lambda r: (abs(r.signed_rank), -r.signed_rank, r.shape.sort_key))
    if cfg.format == "json":
        doc = rep.classification_json(c, report, ranks, fps_x, cfg.bands)
        order = {tuple(r.shape.counts): i for i, r in enumerate(ranked)}
        doc["kind"] = "rank"
        doc["shapes"] = sorted((e for e in doc["shapes"] if e["signed_rank"] is not None), key=lambda e: order[tuple(e["counts"])])
        out = rep.dumps(doc)
    else:
        rows = [
            (r.signed_rank, _counts(r.shape), _f(r.fps), "T" if r.in_T else "", "F" if r.in_F else "", "J" if r.in_T_and_Jg else "")
            for r in ranked
        ]
        out = _header(c) + f"FPS_x={fps_x:.4f}\n\n" + _table(("rank", "counts", "FPS_g", "T", "F", "T&Jg"), rows)
    return out, (lambda: svg.level_set_svg(c))


def cmd_stability(d: Dataset, cfg: RunConfig):
    c = _catalog(d, cfg)
    st = stability_cells(c)
    ml = ml_rank(c)
    if cfg.format == "json":
        out = rep.dumps(rep.stability_json(c, st, ml))
    else:
        best = {(x.h_lo, x.h_hi) for x in st.most_stable}
        rows = [
            (format_scalar(x.h_lo), format_scalar(x.h_hi), x.count, "*" if (x.h_lo, x.h_hi) in best else "",
             " ".join(f"({_counts(s)})" for s in x.shapes))
            for x in st.cells
        ]
        ml_rows = [(i, _counts(m.shape), format_scalar(m.h_min), f"{m.score:.4f}", "open" if m.open else "")
                   for i, m in enumerate(ml[:20], 1)]
        out = (
            _header(c)
            + _table(("h_lo", "h_hi", "count", "best", "shapes"), rows)
            + "\nlikelihood at minimum width (top 20)\n\n"
            + _table(("#", "counts", "h_min", "score", ""), ml_rows)
        )
    return out, (lambda: svg.level_set_svg(c))


def cmd_reversals(d: Dataset, cfg: RunConfig):
    c = _catalog(d, cfg)
    sym = is_exactly_symmetric(d)
    pairs = reversal_pairs(c)
    unpaired = unpaired_shapes(c)
    inversions = mode_inversion_report(c)
    if cfg.format == "json":
        out = rep.dumps(rep.reversals_json(c, sym, pairs, unpaired, inversions))
    else:
        rows = [(_counts(p.shape), _counts(p.reversed), _pt(p.witness), _pt(p.reversed_witness)) for p in pairs]
        out = (
            _header(c)
            + f"symmetric={str(sym).lower()} pairs={len(pairs)} unpaired={len(unpaired)} mode_inversions={len(inversions)}\n\n"
            + _table(("shape", "reversed", "witness", "reversed witness"), rows)
        )
        if unpaired:
            out += "\n" + _table(("unpaired",), [(_counts(s),) for s in unpaired])
        if inversions:
            out += "\n" + _table(("interior modes", "boundary modes"), [(_counts(a), _counts(b)) for a, b in inversions])
    return out, (lambda: svg.level_set_svg(c))


def cmd_dotplot(d: Dataset, cfg: RunConfig):
    g = exact_moment_grid(d, cfg.m)
    doc = rep.dotplot_json(d, g)
    if cfg.format == "json":
        out = rep.dumps(doc)
    else:
        rows = [(e["order"], e["grouped"]["exact"], e["data"]["exact"]) for e in doc["moments"]]
        out = (
            f"n={d.n} digest={d.digest} m={g.m} Q={g.Q} t0={format_scalar(g.t0)} h={format_scalar(g.h)} K={g.grid.K}\n"
            f"density variance excess={format_scalar(g.density_excess())}\n\n"
            + _table(("order", "grouped moment", "data moment"), rows)
        )
    edges = [float(g.grid.edge(k)) for k in range(g.shape.n_bins + 1)]
    return out, (lambda: svg.bar_chart_svg(g.shape.counts, edges, title=f"Exact-moment grid, h = 1/{g.m * g.Q}"))


def cmd_audit(d: Dataset, cfg: RunConfig):
    t0, h = cfg.t0, cfg.h
    K = cfg.K if cfg.K is not None else bin_index(d.x_max, t0, h)
    g = BinGrid(t0, h, K)
    v = audit(d, g, enumerate_level_sets(d, K, cfg.mode, cfg.delta), cfg.flavor)
    collisions = edge_collisions(d, g)
    doc = rep.audit_json(d, v, collisions)
    if cfg.format == "json":
        out = rep.dumps(doc)
    else:
        alt = doc["alternative"]
        lines = [
            f"grid t0={format_scalar(t0)} h={format_scalar(h)} K={K}",
            f"shape ({_counts(v.shape)})",
            f"FPS_g {_f(v.fps_g)}  FPS_x {_f(v.fps_x)}",
            f"sign_conflict {str(v.sign_conflict).lower()}",
            f"class {doc['class']}",
            f"edge_collisions {len(collisions)}",
            "alternative " + ("none" if alt is None else f"({_counts(alt['counts'])}) at t0={alt['t0_mom']:.4f} h={alt['h_mom']:.4f}"),
        ]
        out = "\n".join(lines) + "\n"
    edges = [float(g.edge(k)) for k in range(v.shape.n_bins + 1)]
    return out, (lambda: svg.bar_chart_svg(v.shape.counts, edges, title=f"Histogram at t0 = {float(t0):g}, h = {float(h):g}"))


HANDLERS: dict[str, Callable] = {
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "rank": cmd_rank,
    "stability": cmd_stability,
    "reversals": cmd_reversals,
    "dotplot": cmd_dotplot,
    "audit": cmd_audit,
}


def run(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        d = load_input(cfg.input)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"momhist: cannot read {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"momhist: {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        out, draw = HANDLERS[cfg.command](d, cfg)
        image = draw() if cfg.svg else None
    except DegenerateDataError as exc:
        print(f"momhist: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (MomhistError, ValueError) as exc:
        print(f"momhist: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    if image is not None:
        try:
            svg.write_svg(image, cfg.svg)
        except OSError as exc:
            print(f"momhist: cannot write {cfg.svg}: {exc}", file=sys.stderr)
            return EXIT_PARSE
    sys.stdout.write(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
