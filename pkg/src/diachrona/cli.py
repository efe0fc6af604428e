"""Command-line interface: index building plus TSV/SVG query commands.

Subcommands: ``index`` (build, synth), ``freq`` (count, table, ratio, rank,
share, series), ``cooc`` (top, pair, adj), ``evolve``, ``map``.  Data goes
to stdout or ``--out`` as tab-separated text; ``--svg`` writes charts.
Exit codes: 0 success, 1 domain error, 2 usage error.

``--filter`` restricts queries to a document subset and may be repeated
(conjunction).  Accepted forms: ``date=LO..HI`` (midpoint within the
interval), ``typology=TAG``, ``dated``.  The environment variable
``DIACHRONA_THREADS`` caps counting parallelism (0 = auto).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import cooc as cooc_mod
from . import frequency as freq_mod
from .corpus import CorpusError, CorpusIndex, dated_within, has_typology, is_dated, subcorpus
from .diachrony import evolving_cooccurrents, make_tranches
from .indexio import load_index, save_index
from .ingest import Lexicon, lemmatize, parse_vertical, tokenize_plain, index_from_documents
from .corpus import DateSpec
from .semfield import semantic_map
from .svgplot import PlotSpec, emit_svg
from .synth import synthetic_index

__all__ = ["run_cli", "entry", "build_parser"]


def _num(value: float) -> str:
    return f"{value:.6g}"


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _worker_count() -> int:
    raw = os.environ.get("DIACHRONA_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise CorpusError(f"DIACHRONA_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise CorpusError("DIACHRONA_THREADS must be >= 0")
    return (os.cpu_count() or 1) if value == 0 else value


def _parse_filter(expr: str):
    if expr == "dated":
        return is_dated
    key, sep, value = expr.partition("=")
    if key == "date" and sep:
        lo, dots, hi = value.partition("..")
        if not dots or not lo or not hi:
            raise CorpusError(f"bad date filter (expected date=LO..HI): {expr!r}")
        try:
            return dated_within(int(lo), int(hi))
        except ValueError:
            raise CorpusError(f"bad date filter (years must be integers): {expr!r}") from None
    if key == "typology" and sep:
        return has_typology(value)
    raise CorpusError(f"unknown filter: {expr!r}")


def _docset_from_filters(index: CorpusIndex, filters: list[str] | None):
    if not filters:
        return None
    predicates = [_parse_filter(f) for f in filters]
    return subcorpus(index, lambda doc: all(p(doc) for p in predicates))


def _load(args) -> CorpusIndex:
    return load_index(args.index)


def _comma_set(raw: str | None) -> frozenset[str] | None:
    if raw is None:
        return None
    return frozenset(part for part in raw.split(",") if part)


# --------------------------------------------------------------------------
# index
# --------------------------------------------------------------------------


def _cmd_index_build(args) -> int:
    if args.plain:
        lex = Lexicon()
        if args.lexicon:
            with open(args.lexicon, encoding="utf-8") as fh:
                lex = Lexicon.from_tsv(fh)
        docs = []
        for path in args.input:
            text = Path(path).read_text(encoding="utf-8")
            records = lemmatize(tokenize_plain(text), lex)
            docs.append((Path(path).stem, DateSpec.undated(), None, records))
        index = index_from_documents(docs)
    else:
        drop = _comma_set(args.drop_pos) or frozenset()

        def lines():
            for path in args.input:
                with open(path, encoding="utf-8") as fh:
                    yield from fh

        index = parse_vertical(lines(), drop_pos=drop)
    save_index(index, args.out)
    sys.stderr.write(
        f"indexed {index.total_tokens} tokens in {len(index.documents)} documents "
        f"({len(index.lemmas)} lemmas) -> {args.out}\n"
    )
    return 0


def _cmd_index_synth(args) -> int:
    index = synthetic_index(
        args.tokens,
        args.vocab,
        args.docs,
        seed=args.seed,
        dated_fraction=args.dated_fraction,
    )
    save_index(index, args.out)
    sys.stderr.write(f"synthesized {index.total_tokens} tokens -> {args.out}\n")
    return 0


# --------------------------------------------------------------------------
# freq
# --------------------------------------------------------------------------


def _cmd_freq_count(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    count = freq_mod.lemma_count(index, docset, args.lemma)
    _write_text(f"{args.lemma}\t{count}\n", args.out)
    return 0


def _cmd_freq_table(args) -> int:
    index = _load(args)
    lemmas = [part for part in args.lemmas.split(",") if part]
    labels = []
    docsets = []
    for spec in args.slice or []:
        label, sep, expr = spec.partition(":")
        if not sep:
            raise CorpusError(f"bad slice (expected LABEL:FILTER): {spec!r}")
        labels.append(label)
        docsets.append(_docset_from_filters(index, expr.split(";")))
    if not docsets:
        labels = ["all"]
        docsets = [None]
    table = freq_mod.count_table(index, lemmas, docsets, labels)
    lines = ["lemma\t" + "\t".join(table.labels) + "\tsum"]
    for i, lemma in enumerate(table.lemmas):
        row = "\t".join(str(int(v)) for v in table.counts[i])
        lines.append(f"{lemma}\t{row}\t{int(table.row_sums[i])}")
    cols = "\t".join(str(int(v)) for v in table.col_sums)
    lines.append(f"sum\t{cols}\t{table.grand_total}")
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_freq_ratio(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    count_a = freq_mod.lemma_count(index, docset, args.a)
    count_b = freq_mod.lemma_count(index, docset, args.b)
    result = freq_mod.ratio(count_a, count_b)
    _write_text(f"{args.a}\t{result.a}\t{args.b}\t{result.b}\t{_num(result.value)}\n", args.out)
    return 0


def _cmd_freq_rank(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    rank = freq_mod.lemma_rank(index, docset, args.lemma)
    if rank is None:
        raise CorpusError(f"lemma {args.lemma!r} not present in docset")
    _write_text(f"{args.lemma}\t{rank}\n", args.out)
    return 0


def _cmd_freq_share(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    forms = _comma_set(args.forms) or frozenset()
    share = freq_mod.form_share(index, docset, args.lemma, forms)
    _write_text(f"{args.lemma}\t{_num(share)}\n", args.out)
    return 0


def _cmd_freq_series(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    series = freq_mod.time_series(index, args.lemma, args.bin, docset=docset)
    header = "start_year\tcount\ttoken_mass\tper_million"
    smoothed = None
    if args.ma:
        smoothed = freq_mod.moving_average([b.per_million for b in series.bins], args.ma)
        header += "\tma"
    lines = [header]
    for i, b in enumerate(series.bins):
        pm = _num(b.per_million) if b.per_million is not None else "NA"
        line = f"{b.start_year}\t{b.count}\t{b.token_mass}\t{pm}"
        if smoothed is not None:
            line += "\t" + (_num(smoothed[i]) if smoothed[i] is not None else "NA")
        lines.append(line)
    _write_text("\n".join(lines) + "\n", args.out)
    if args.svg:
        curves = [(args.lemma, [(float(b.start_year), float(b.count)) for b in series.bins])]
        spec = PlotSpec(
            kind="series",
            title=f"{args.lemma} per {args.bin}-year bin",
            x_label="year",
            y_label="occurrences",
            curves=curves,
        )
        _write_text(emit_svg(spec), args.svg)
    return 0


# --------------------------------------------------------------------------
# cooc
# --------------------------------------------------------------------------


def _cmd_cooc_top(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    ranked = cooc_mod.top_cooccurrents(
        index,
        docset,
        args.pivot,
        args.window,
        k=args.k,
        pos_filter=_comma_set(args.pos),
        min_count=args.min,
        shards=_worker_count(),
    )
    lines = ["lemma\tpair_count\tfreq\tdice"]
    for entry_ in ranked:
        lines.append(
            f"{entry_.lemma}\t{entry_.pair_count}\t{entry_.freq}\t{_num(entry_.dice * args.scale)}"
        )
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_cooc_pair(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    bins = cooc_mod.pair_evolution(index, args.a, args.b, args.window, args.bin, docset=docset)
    lines = ["start_year\tpair_count\tdice"]
    for b in bins:
        lines.append(f"{b.start_year}\t{b.pair_count}\t{_num(b.dice * args.scale)}")
    _write_text("\n".join(lines) + "\n", args.out)
    if args.svg:
        spec = PlotSpec(
            kind="series",
            title=f"{args.a} + {args.b} (window {args.window})",
            x_label="year",
            y_label="pairs / scaled dice",
            curves=[
                ("pairs", [(float(b.start_year), float(b.pair_count)) for b in bins]),
                ("dice", [(float(b.start_year), b.dice * args.scale) for b in bins]),
            ],
        )
        _write_text(emit_svg(spec), args.svg)
    return 0


def _cmd_cooc_adj(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    count = cooc_mod.adjacency_count(index, docset, args.a, args.b)
    _write_text(f"{args.a}\t{args.b}\t{count}\n", args.out)
    return 0


# --------------------------------------------------------------------------
# evolve / map
# --------------------------------------------------------------------------


def _cmd_evolve(args) -> int:
    index = _load(args)
    tranches = make_tranches(index, args.k)
    report = evolving_cooccurrents(
        index,
        tranches,
        args.pivot,
        args.window,
        pos_filter=_comma_set(args.pos),
        min_count=args.min,
        top_n=args.top,
    )
    header = "lemma\t" + "\t".join(f"d_{t + 1}" for t in range(args.k)) + "\ttotal\tscore\tdirection"
    lines = [header]
    for e in report.entries:
        dice_cols = "\t".join(_num(v) for v in e.dice_by_tranche)
        lines.append(f"{e.lemma}\t{dice_cols}\t{e.total_pairs}\t{_num(e.score)}\t{e.direction}")
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_map(args) -> int:
    index = _load(args)
    docset = _docset_from_filters(index, args.filter)
    result = semantic_map(
        index,
        docset,
        args.pivot,
        args.window,
        args.terms,
        pos_filter=_comma_set(args.pos),
        min_count=args.min,
        include_pivot=not args.no_pivot,
        weight=args.weight,
    )
    lines = [
        f"# axis1_inertia\t{_num(result.inertia_fractions[0])}",
        f"# axis2_inertia\t{_num(result.inertia_fractions[1])}",
        f"# total_inertia\t{_num(result.total_inertia)}",
        "lemma\tx\ty",
    ]
    for point in result.points:
        lines.append(f"{point.lemma}\t{_num(point.x)}\t{_num(point.y)}")
    text = "\n".join(lines) + "\n"
    _write_text(text, args.tsv or args.out)
    if args.svg:
        spec = PlotSpec(
            kind="scatter",
            title=f"semantic field of {args.pivot}",
            x_label=f"axis 1 ({100 * result.inertia_fractions[0]:.1f}% of inertia)",
            y_label=f"axis 2 ({100 * result.inertia_fractions[1]:.1f}% of inertia)",
            points=[(p.x, p.y) for p in result.points],
            labels=[p.lemma for p in result.points],
        )
        _write_text(emit_svg(spec), args.svg)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_common(sub, index_required: bool = True) -> None:
    if index_required:
        sub.add_argument("--index", required=True, help="path to a .csem index file")
        sub.add_argument(
            "--filter",
            action="append",
            metavar="EXPR",
            help="restrict to documents matching EXPR (date=LO..HI, typology=TAG, dated); repeatable",
        )
    sub.add_argument("--out", help="write TSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diachrona",
        description="Corpus semantics over lemmatized diachronic corpora.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    index_cmd = commands.add_parser("index", help="build or synthesize an index")
    index_sub = index_cmd.add_subparsers(dest="subcommand", required=True)

    build = index_sub.add_parser("build", help="index vertical (or plain) text files")
    build.add_argument("--input", nargs="+", required=True, help="input files")
    build.add_argument("--out", required=True, help="output .csem path")
    build.add_argument(
        "--drop-pos",
        default="PUN,SENT",
        help="comma-separated POS tags dropped at ingestion (default PUN,SENT)",
    )
    build.add_argument("--plain", action="store_true", help="treat inputs as plain text")
    build.add_argument("--lexicon", help="form/lemma/POS TSV used with --plain")
    build.set_defaults(func=_cmd_index_build)

    synth = index_sub.add_parser("synth", help="generate a seeded synthetic corpus")
    synth.add_argument("--tokens", type=int, required=True)
    synth.add_argument("--vocab", type=int, default=1000)
    synth.add_argument("--docs", type=int, default=100)
    synth.add_argument("--seed", type=int, default=0, help="fixes the generated data")
    synth.add_argument("--dated-fraction", type=float, default=1.0)
    synth.add_argument("--out", required=True)
    synth.set_defaults(func=_cmd_index_synth)

    freq = commands.add_parser("freq", help="lemma frequency queries")
    freq_sub = freq.add_subparsers(dest="subcommand", required=True)

    count = freq_sub.add_parser("count", help="occurrences of one lemma")
    count.add_argument("--lemma", required=True)
    _add_common(count)
    count.set_defaults(func=_cmd_freq_count)

    table = freq_sub.add_parser("table", help="lemma x slice count table with sums")
    table.add_argument("--lemmas", required=True, help="comma-separated lemma list")
    table.add_argument(
        "--slice",
        action="append",
        metavar="LABEL:FILTER",
        help="named docset column; FILTER may join filters with ';'",
    )
    _add_common(table)
    table.set_defaults(func=_cmd_freq_table)

    ratio_cmd = freq_sub.add_parser("ratio", help="count ratio of two lemmas")
    ratio_cmd.add_argument("--a", required=True)
    ratio_cmd.add_argument("--b", required=True)
    _add_common(ratio_cmd)
    ratio_cmd.set_defaults(func=_cmd_freq_ratio)

    rank = freq_sub.add_parser("rank", help="frequency rank of a lemma (1 = most frequent)")
    rank.add_argument("--lemma", required=True)
    _add_common(rank)
    rank.set_defaults(func=_cmd_freq_rank)

    share = freq_sub.add_parser("share", help="share of a lemma's tokens with given surface forms")
    share.add_argument("--lemma", required=True)
    share.add_argument("--forms", required=True, help="comma-separated surface forms")
    _add_common(share)
    share.set_defaults(func=_cmd_freq_share)

    series = freq_sub.add_parser("series", help="dated time series of a lemma")
    series.add_argument("--lemma", required=True)
    series.add_argument("--bin", type=int, default=50, help="bin width in years")
    series.add_argument("--ma", type=int, help="odd moving-average window (extra column)")
    series.add_argument("--svg", help="also render a series chart here")
    _add_common(series)
    series.set_defaults(func=_cmd_freq_series)

    cooc = commands.add_parser("cooc", help="windowed cooccurrence queries")
    cooc_sub = cooc.add_subparsers(dest="subcommand", required=True)

    top = cooc_sub.add_parser("top", help="Dice-ranked collocates of a pivot")
    top.add_argument("--pivot", required=True)
    top.add_argument("--window", type=int, default=5)
    top.add_argument("--k", type=int, default=50)
    top.add_argument("--pos", help="comma-separated allowed POS tags (majority rule)")
    top.add_argument("--min", type=int, default=1, help="minimum pair count")
    top.add_argument("--scale", type=float, default=1.0, help="display multiplier for dice")
    _add_common(top)
    top.set_defaults(func=_cmd_cooc_top)

    pair = cooc_sub.add_parser("pair", help="association of two lemmas over time")
    pair.add_argument("--a", required=True)
    pair.add_argument("--b", required=True)
    pair.add_argument("--window", type=int, default=5)
    pair.add_argument("--bin", type=int, default=50)
    pair.add_argument("--scale", type=float, default=1.0)
    pair.add_argument("--svg", help="also render the evolution chart here")
    _add_common(pair)
    pair.set_defaults(func=_cmd_cooc_pair)

    adj = cooc_sub.add_parser("adj", help="directly adjacent pairs of two lemmas")
    adj.add_argument("--a", required=True)
    adj.add_argument("--b", required=True)
    _add_common(adj)
    adj.set_defaults(func=_cmd_cooc_adj)

    evolve = commands.add_parser("evolve", help="strongest-evolving collocates across tranches")
    evolve.add_argument("--pivot", required=True)
    evolve.add_argument("--k", type=int, default=10, help="tranche count")
    evolve.add_argument("--window", type=int, default=5)
    evolve.add_argument("--min", type=int, default=1, help="minimum total pair count")
    evolve.add_argument("--top", type=int, default=20)
    evolve.add_argument("--pos", help="comma-separated allowed POS tags")
    evolve.add_argument("--index", required=True)
    evolve.add_argument("--out", help="write TSV here instead of stdout")
    evolve.set_defaults(func=_cmd_evolve)

    map_cmd = commands.add_parser("map", help="correspondence-analysis semantic field map")
    map_cmd.add_argument("--pivot", required=True)
    map_cmd.add_argument("--terms", type=int, default=30, help="total terms on the map")
    map_cmd.add_argument("--window", type=int, default=5)
    map_cmd.add_argument("--pos", help="comma-separated allowed POS tags")
    map_cmd.add_argument("--min", type=int, default=1)
    map_cmd.add_argument("--weight", choices=("raw", "dice"), default="raw")
    map_cmd.add_argument("--no-pivot", action="store_true", help="exclude the pivot itself")
    map_cmd.add_argument("--svg", help="render the map here")
    map_cmd.add_argument("--tsv", help="write coordinates here")
    _add_common(map_cmd)
    map_cmd.set_defaults(func=_cmd_map)

    return parser


def run_cli(argv=None) -> int:
    """Parse and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except CorpusError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def entry() -> None:
    raise SystemExit(run_cli())
