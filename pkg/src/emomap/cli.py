"""Command-line front end; every pipeline stage is one subcommand.

Exit codes: 0 success, 1 usage error, 2 data error, 3 degenerate statistics
under strict mode.  The resolved configuration is echoed to stderr before
any computation; data goes to files or stdout only.  Relative input paths
that do not exist are retried under $EMOMAP_DATA_DIR.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, plots
from .build import build, cross_corr, describe, describe_text, top_k, top_k_text
from .errors import (
    DataError,
    DegenerateStatisticsError,
    EmomapError,
)
from .evaluate import EvalConfig, eval_cross_bagged, eval_cross_pair, eval_mono
from .knn import fit, load_model, map_lexicon, save_model
from .lexicon import (
    PRESETS,
    FormatDescriptor,
    MatchPolicy,
    ParseOptions,
    detect_format,
    intersect,
    parse_lexicon,
    parse_merged,
    peek_header_dims,
    rescale,
    sha256_hex,
    write_lexicon,
    write_merged,
)
from .stats import isr

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DEGENERATE = 3


class UsageError(Exception):
    """Bad flags or flag values; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures through our exit codes
        raise UsageError(message)


def _echo_config(command: str, pairs: dict) -> None:
    rendered = " ".join(f"{key}={value}" for key, value in pairs.items())
    print(f"emomap {command}: {rendered}", file=sys.stderr)


def _resolve_input(path_str: str) -> Path:
    path = Path(path_str)
    if path.exists():
        return path
    data_dir = os.environ.get("EMOMAP_DATA_DIR")
    if data_dir and not path.is_absolute():
        candidate = Path(data_dir) / path
        if candidate.exists():
            return candidate
    raise DataError(f"input file not found: {path_str}")


def _write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp~")
    try:
        tmp.write_bytes(data)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def _emit_data(out: str | None, data: bytes) -> None:
    if out:
        _write_bytes(Path(out), data)
        return
    buffer = getattr(sys.stdout, "buffer", None)  # absent under captured stdout
    if buffer is not None:
        buffer.write(data)
        buffer.flush()
    else:
        sys.stdout.write(data.decode("utf-8"))


def _emit_report(args, text: str, json_bytes: bytes, figures: dict[str, bytes]) -> None:
    if args.out:
        _write_bytes(Path(args.out), text.encode("utf-8"))
    else:
        sys.stdout.write(text)
    if args.json:
        _write_bytes(Path(args.json), json_bytes)
    if args.out and not args.no_figures:
        stem = Path(args.out).with_suffix("")
        for name, png in figures.items():
            suffix = f"-{name}.png" if name else ".png"
            _write_bytes(stem.with_name(stem.name + suffix), png)


def _parse_scale(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return float(lo), float(hi)
    except ValueError:
        raise UsageError(f"scale must look like MIN:MAX, got {text!r}") from None


def _resolve_format(
    spec: str, header_dims: list[str], scale: str | None
) -> FormatDescriptor:
    name = spec.strip().casefold()
    if name in PRESETS:
        return PRESETS[name]
    if name == "header":
        if not scale:
            raise UsageError("--format header requires --scale MIN:MAX")
        lo, hi = _parse_scale(scale)
        return FormatDescriptor("custom", tuple(header_dims), lo, hi)
    if name == "auto":
        fmt = detect_format(header_dims)
        if fmt is None:
            raise DataError(
                f"cannot auto-detect a format from header dimensions "
                f"{header_dims!r}; pass --format"
            )
        return fmt
    raise UsageError(
        f"unknown format {spec!r} (expected auto, vad, va, be5, or header)"
    )


def _parse_options(args) -> ParseOptions:
    return ParseOptions(
        clamp=getattr(args, "clamp", False),
        dedup_mean=getattr(args, "dedup", None) == "mean",
    )


def _load_lexicon(path_str: str, format_spec: str, scale: str | None, options: ParseOptions):
    path = _resolve_input(path_str)
    data = path.read_bytes()
    fmt = _resolve_format(format_spec, peek_header_dims(data), scale)
    return parse_lexicon(
        data, fmt, options, provenance=f"{path_str} sha256={sha256_hex(data)[:12]}"
    )


def _load_merged(path_str: str, formats_spec: str):
    path = _resolve_input(path_str)
    data = path.read_bytes()
    formats = None
    spec = formats_spec.strip().casefold()
    if spec != "auto":
        names = [part.strip() for part in spec.split(",")]
        if len(names) != 2 or any(name not in PRESETS for name in names):
            raise UsageError(
                f"--formats expects two preset names like vad,be5; got {formats_spec!r}"
            )
        formats = (PRESETS[names[0]], PRESETS[names[1]])
    return parse_merged(
        data, formats, provenance=f"{path_str} sha256={sha256_hex(data)[:12]}"
    )


def _parse_floors(entries: list[str] | None) -> dict[str, float] | None:
    if not entries:
        return None
    floors: dict[str, float] = {}
    for entry in entries:
        dim, sep, value = entry.partition("=")
        if not sep:
            raise UsageError(f"--floor expects DIM=VALUE, got {entry!r}")
        try:
            floors[dim.strip().casefold()] = float(value)
        except ValueError:
            raise UsageError(f"--floor value {value!r} is not a number") from None
    return floors


def _policy(args) -> MatchPolicy:
    return MatchPolicy.CASEFOLD if getattr(args, "fold_case", False) else MatchPolicy.EXACT


def _eval_config(args) -> EvalConfig:
    return EvalConfig(
        k=args.k,
        folds=getattr(args, "folds", 10),
        seed=getattr(args, "seed", 42),
        direction=getattr(args, "direction", "both"),
        jobs=getattr(args, "jobs", 1),
        floors=_parse_floors(getattr(args, "floor", None)),
    )


def _degenerate_exit(args, degenerate: bool) -> int:
    if degenerate and not args.allow_degenerate:
        print(
            "degenerate statistics present; exiting 3 under strict mode "
            "(pass --allow-degenerate to keep exit code 0)",
            file=sys.stderr,
        )
        return EXIT_DEGENERATE
    return EXIT_OK


# --------------------------------------------------------------------------
# subcommands


def cmd_rescale(args) -> int:
    _echo_config(
        "rescale",
        {
            "input": args.input,
            "format": args.format,
            "scale": args.scale,
            "to_scale": args.to_scale,
            "precision": args.precision,
            "clamp": args.clamp,
            "dedup": args.dedup,
            "out": args.out,
        },
    )
    lo, hi = _parse_scale(args.to_scale)
    lex = _load_lexicon(args.input, args.format, args.scale, _parse_options(args))
    target = lex.format.with_bounds(lo, hi)
    _emit_data(args.out, write_lexicon(rescale(lex, target), args.precision))
    return EXIT_OK


def cmd_intersect(args) -> int:
    _echo_config(
        "intersect",
        {
            "a": args.a,
            "b": args.b,
            "format_a": args.format_a,
            "format_b": args.format_b,
            "fold_case": args.fold_case,
            "clamp": args.clamp,
            "dedup": args.dedup,
            "precision": args.precision,
            "out": args.out,
        },
    )
    options = _parse_options(args)
    lex_a = _load_lexicon(args.a, args.format_a, args.scale_a, options)
    lex_b = _load_lexicon(args.b, args.format_b, args.scale_b, options)
    merged = intersect(lex_a, lex_b, _policy(args))
    print(f"overlap: {len(merged)} words", file=sys.stderr)
    _emit_data(args.out, write_merged(merged, args.precision))
    return EXIT_OK


def cmd_train(args) -> int:
    _echo_config(
        "train",
        {
            "gold": args.gold,
            "formats": args.formats,
            "direction": args.direction,
            "k": args.k,
            "out": args.out,
        },
    )
    gold = _load_merged(args.gold, args.formats)
    model = fit(gold, args.direction, args.k)
    _emit_data(args.out, save_model(model))
    return EXIT_OK


def cmd_map(args) -> int:
    _echo_config(
        "map",
        {
            "model": args.model,
            "input": args.input,
            "precision": args.precision,
            "out": args.out,
        },
    )
    model = load_model(_resolve_input(args.model).read_bytes())
    lex = _load_lexicon(args.input, model.source_format.name, None, _parse_options(args))
    _emit_data(args.out, write_lexicon(map_lexicon(model, lex), args.precision))
    return EXIT_OK


def cmd_eval_mono(args) -> int:
    cfg = _eval_config(args)
    _echo_config("eval-mono", {"gold": args.gold, **cfg.echo(), "out": args.out})
    gold = _load_merged(args.gold, args.formats)
    report = eval_mono(gold, cfg, label=Path(args.gold).stem)
    figures = {"": plots.eval_report_figure(report)} if args.out and not args.no_figures else {}
    _emit_report(args, report.to_text(), report.to_json_bytes(), figures)
    return _degenerate_exit(args, report.has_degenerate_scores())


def cmd_eval_cross(args) -> int:
    cfg = _eval_config(args)
    _echo_config(
        "eval-cross",
        {"train": args.train, "test": args.test, **cfg.echo(), "out": args.out},
    )
    train = _load_merged(args.train, args.formats)
    test = _load_merged(args.test, args.formats)
    label = f"{Path(args.train).stem}2{Path(args.test).stem}"
    report = eval_cross_pair(train, test, cfg, label=label)
    figures = {"": plots.eval_report_figure(report)} if args.out and not args.no_figures else {}
    _emit_report(args, report.to_text(), report.to_json_bytes(), figures)
    return _degenerate_exit(args, report.has_degenerate_scores())


def _parse_gold_specs(entries: list[str]) -> dict[str, str]:
    gold: dict[str, str] = {}
    for entry in entries:
        name, sep, path = entry.partition("=")
        if not sep or not name or not path:
            raise UsageError(f"--gold expects NAME=PATH, got {entry!r}")
        if name in gold:
            raise UsageError(f"--gold name {name!r} given twice")
        gold[name] = path
    return gold


def _parse_bag_sizes(text: str) -> list[int]:
    lo, sep, hi = text.partition(":")
    try:
        low = int(lo)
        high = int(hi) if sep else low
    except ValueError:
        raise UsageError(f"--bag-sizes expects N or MIN:MAX, got {text!r}") from None
    return list(range(low, high + 1))


def cmd_eval_bag(args) -> int:
    cfg = _eval_config(args)
    specs = _parse_gold_specs(args.gold)
    targets = (
        [t.strip() for t in args.targets.split(",") if t.strip()]
        if args.targets
        else list(specs)
    )
    bag_sizes = _parse_bag_sizes(args.bag_sizes or f"2:{len(specs)}")
    _echo_config(
        "eval-bag",
        {
            "gold": ",".join(f"{k}={v}" for k, v in specs.items()),
            "targets": ",".join(targets),
            "bag_sizes": args.bag_sizes or f"2:{len(specs)}",
            **cfg.echo(),
            "out": args.out,
        },
    )
    gold_sets = {name: _load_merged(path, args.formats) for name, path in specs.items()}
    report = eval_cross_bagged(gold_sets, targets, bag_sizes, cfg)
    figures = (
        {"": plots.bag_report_figure(report)} if args.out and not args.no_figures else {}
    )
    _emit_report(args, report.to_text(), report.to_json_bytes(), figures)
    degenerate = any(
        cell.has_degenerate_scores()
        for targets_map in report.cells.values()
        for cell in targets_map.values()
    )
    return _degenerate_exit(args, degenerate)


def cmd_isr(args) -> int:
    _echo_config(
        "isr",
        {
            "a": args.a,
            "b": args.b,
            "fold_case": args.fold_case,
            "out": args.out,
        },
    )
    options = _parse_options(args)
    lex_a = _load_lexicon(args.a, args.format_a, args.scale_a, options)
    lex_b = _load_lexicon(args.b, args.format_b, args.scale_b, options)
    results = isr(lex_a, lex_b, _policy(args))
    overlap = next(iter(results.values())).n
    lines = [f"inter-study reliability over {overlap} overlapping words:"]
    lines.extend(f"  {dim}  {res.r:.3f}" for dim, res in results.items())
    text = "\n".join(lines) + "\n"
    doc = {
        "schema_version": 1,
        "kind": "isr-report",
        "overlap": overlap,
        "r": {dim: res.r for dim, res in results.items()},
    }
    json_bytes = (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    figures = {"": plots.isr_figure(results)} if args.out and not args.no_figures else {}
    _emit_report(args, text, json_bytes, figures)
    return EXIT_OK


def cmd_build(args) -> int:
    _echo_config(
        "build",
        {
            "model": args.model,
            "input": args.input,
            "exclude_gold": args.exclude_gold,
            "precision": args.precision,
            "out": args.out,
        },
    )
    model = load_model(_resolve_input(args.model).read_bytes())
    lex = _load_lexicon(args.input, model.source_format.name, None, _parse_options(args))
    exclude = None
    if args.exclude_gold:
        exclude = list(_load_merged(args.exclude_gold, "auto").words)
    mapped, manifest = build(
        lex, model, exclude, input_path=args.input, output_path=args.out
    )
    _write_bytes(Path(args.out), write_lexicon(mapped, args.precision))
    _write_bytes(Path(args.out + ".manifest.json"), manifest.to_json_bytes())
    print(
        f"built {manifest.counts['rows']} rows "
        f"({manifest.counts['newly_rated']} newly rated)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_report_stats(args) -> int:
    _echo_config(
        "report-stats", {"input": args.input, "format": args.format, "out": args.out}
    )
    lex = _load_lexicon(args.input, args.format, args.scale, _parse_options(args))
    summaries = describe(lex)
    doc = {
        "schema_version": 1,
        "kind": "descriptive-statistics",
        "rows": len(lex),
        "dimensions": {dim: s.to_dict() for dim, s in summaries.items()},
        "stdev_convention": "unbiased (n-1)",
    }
    json_bytes = (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    figures = (
        {"": plots.describe_figure(summaries)} if args.out and not args.no_figures else {}
    )
    _emit_report(args, describe_text(summaries), json_bytes, figures)
    return EXIT_OK


def cmd_report_topk(args) -> int:
    _echo_config(
        "report-topk",
        {
            "input": args.input,
            "dimension": args.dimension,
            "top": args.top,
            "out": args.out,
        },
    )
    lex = _load_lexicon(args.input, args.format, args.scale, _parse_options(args))
    dims = [args.dimension.casefold()] if args.dimension else list(
        lex.format.canonical_dimensions
    )
    ranked = {dim: top_k(lex, dim, args.top) for dim in dims}
    text = top_k_text(lex, args.top, dims)
    row_of = {word: i for i, word in enumerate(lex.words)}
    doc = {
        "schema_version": 1,
        "kind": "top-k",
        "k": args.top,
        "dimensions": {
            dim: [
                {"word": word, "rating": float(lex.column(dim)[row_of[word]])}
                for word in words
            ]
            for dim, words in ranked.items()
        },
    }
    json_bytes = (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    figures = {}
    if args.out and not args.no_figures:
        columns = {
            dim: [(e["word"], e["rating"]) for e in doc["dimensions"][dim]]
            for dim in dims
        }
        figures = {"": plots.topk_figure(columns)}
    _emit_report(args, text, json_bytes, figures)
    return EXIT_OK


def cmd_report_corr(args) -> int:
    _echo_config(
        "report-corr",
        {"a": args.a, "b": args.b, "fold_case": args.fold_case, "out": args.out},
    )
    options = _parse_options(args)
    lex_a = _load_lexicon(args.a, args.format_a, args.scale_a, options)
    lex_b = _load_lexicon(args.b, args.format_b, args.scale_b, options)
    corr = cross_corr(lex_a, lex_b, _policy(args))
    figures = (
        {"": plots.corr_matrix_figure(corr)} if args.out and not args.no_figures else {}
    )
    _emit_report(args, corr.to_text(), corr.to_json_bytes(), figures)
    return _degenerate_exit(args, bool(corr.notes))


# --------------------------------------------------------------------------
# parser assembly


def _add_report_flags(sub) -> None:
    sub.add_argument("--out", help="write the text report here (default: stdout)")
    sub.add_argument("--json", help="also write a machine-readable JSON report")
    sub.add_argument(
        "--no-figures",
        action="store_true",
        help="skip the PNG figure normally written alongside --out",
    )


def _add_lexicon_flags(sub, *, letter: str = "") -> None:
    tag = f"-{letter}" if letter else ""
    sub.add_argument(
        f"--format{tag}",
        default="auto",
        help="emotion format: auto, vad, va, be5, or header (default: auto)",
    )
    sub.add_argument(
        f"--scale{tag}",
        help="MIN:MAX bounds when --format is 'header'",
    )


def _add_strictness_flags(sub) -> None:
    sub.add_argument(
        "--clamp",
        action="store_true",
        help="clamp out-of-range ratings instead of failing (default: strict)",
    )
    sub.add_argument(
        "--dedup",
        choices=["mean"],
        help="average duplicate words instead of failing (default: strict)",
    )


def _add_eval_flags(sub, *, folds: bool) -> None:
    sub.add_argument("--k", type=int, default=20, help="neighbour count (default: 20)")
    if folds:
        sub.add_argument(
            "--folds", type=int, default=10, help="cross-validation folds (default: 10)"
        )
        sub.add_argument(
            "--seed", type=int, default=42, help="shuffle seed (default: 42)"
        )
    sub.add_argument(
        "--direction",
        default="both",
        help="both, or a '<src>2<tgt>' pair like vad2be5 (default: both)",
    )
    sub.add_argument(
        "--jobs", type=int, default=1, help="parallel work units (default: 1)"
    )
    sub.add_argument(
        "--floor",
        action="append",
        metavar="DIM=VALUE",
        help="override a reliability floor (repeatable; default: shipped constants)",
    )
    sub.add_argument(
        "--allow-degenerate",
        action="store_true",
        help="exit 0 even when degenerate statistics were flagged",
    )
    sub.add_argument(
        "--formats",
        default="auto",
        help="merged-file format pair like vad,be5 (default: auto-detect)",
    )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="emomap",
        description="Map emotion lexicons between VAD and BE5 with kNN regression.",
    )
    parser.add_argument("--version", action="version", version=f"emomap {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub = commands.add_parser("rescale", help="linearly map ratings onto new bounds")
    sub.add_argument("input", help="lexicon TSV")
    _add_lexicon_flags(sub)
    _add_strictness_flags(sub)
    sub.add_argument("--to-scale", required=True, metavar="MIN:MAX",
                     help="target bounds")
    sub.add_argument("--precision", type=int, default=6,
                     help="output decimals (default: 6)")
    sub.add_argument("--out", help="output TSV (default: stdout)")
    sub.set_defaults(func=cmd_rescale)

    sub = commands.add_parser(
        "intersect", help="merge two complementary lexicons over common words"
    )
    sub.add_argument("a", help="lexicon TSV in format A")
    sub.add_argument("b", help="lexicon TSV in format B")
    _add_lexicon_flags(sub, letter="a")
    _add_lexicon_flags(sub, letter="b")
    _add_strictness_flags(sub)
    sub.add_argument("--fold-case", action="store_true",
                     help="match words case-insensitively (default: exact bytes)")
    sub.add_argument("--precision", type=int, default=6,
                     help="output decimals (default: 6)")
    sub.add_argument("--out", help="merged gold TSV (default: stdout)")
    sub.set_defaults(func=cmd_intersect)

    sub = commands.add_parser("train", help="fit a kNN mapping model on gold data")
    sub.add_argument("--gold", required=True, help="merged gold TSV")
    sub.add_argument("--formats", default="auto",
                     help="merged-file format pair like vad,be5 (default: auto-detect)")
    sub.add_argument("--direction", required=True,
                     help="'<src>2<tgt>' pair, e.g. vad2be5")
    sub.add_argument("--k", type=int, default=20,
                     help="neighbour count (default: 20)")
    sub.add_argument("--out", required=True, help="model file")
    sub.set_defaults(func=cmd_train)

    sub = commands.add_parser("map", help="apply a trained model to a lexicon")
    sub.add_argument("--model", required=True, help="model file from 'train'")
    sub.add_argument("input", help="lexicon TSV in the model's source format")
    _add_strictness_flags(sub)
    sub.add_argument("--precision", type=int, default=6,
                     help="output decimals (default: 6)")
    sub.add_argument("--out", help="output TSV (default: stdout)")
    sub.set_defaults(func=cmd_map)

    sub = commands.add_parser(
        "eval-mono", help="k-fold cross-validated mapping quality on one gold set"
    )
    sub.add_argument("--gold", required=True, help="merged gold TSV")
    _add_eval_flags(sub, folds=True)
    _add_report_flags(sub)
    sub.set_defaults(func=cmd_eval_mono)

    sub = commands.add_parser(
        "eval-cross", help="fixed train/test crosslingual transfer"
    )
    sub.add_argument("--train", required=True, help="training merged gold TSV")
    sub.add_argument("--test", required=True, help="test merged gold TSV")
    _add_eval_flags(sub, folds=False)
    _add_report_flags(sub)
    sub.set_defaults(func=cmd_eval_cross)

    sub = commands.add_parser(
        "eval-bag", help="bagged crosslingual training with best-bag selection"
    )
    sub.add_argument(
        "--gold",
        action="append",
        required=True,
        metavar="NAME=PATH",
        help="named gold set (repeat; at least two)",
    )
    sub.add_argument("--targets", help="comma-separated target names (default: all)")
    sub.add_argument("--bag-sizes", metavar="MIN:MAX",
                     help="bag sizes to try (default: 2:<number of gold sets>)")
    _add_eval_flags(sub, folds=False)
    _add_report_flags(sub)
    sub.set_defaults(func=cmd_eval_bag)

    sub = commands.add_parser(
        "isr", help="inter-study reliability between two overlapping lexicons"
    )
    sub.add_argument("a", help="lexicon TSV")
    sub.add_argument("b", help="lexicon TSV sharing dimensions with A")
    _add_lexicon_flags(sub, letter="a")
    _add_lexicon_flags(sub, letter="b")
    _add_strictness_flags(sub)
    sub.add_argument("--fold-case", action="store_true",
                     help="match words case-insensitively (default: exact bytes)")
    _add_report_flags(sub)
    sub.set_defaults(func=cmd_isr)

    sub = commands.add_parser(
        "build", help="construct a new lexicon resource plus manifest"
    )
    sub.add_argument("--model", required=True, help="model file from 'train'")
    sub.add_argument("input", help="lexicon TSV in the model's source format")
    _add_strictness_flags(sub)
    sub.add_argument("--exclude-gold", metavar="PATH",
                     help="merged gold TSV whose words are excluded from the "
                          "newly-rated count")
    sub.add_argument("--precision", type=int, default=6,
                     help="output decimals (default: 6)")
    sub.add_argument("--out", required=True,
                     help="output TSV; manifest lands at OUT.manifest.json")
    sub.set_defaults(func=cmd_build)

    sub = commands.add_parser(
        "report-stats", help="descriptive statistics per dimension"
    )
    sub.add_argument("input", help="lexicon TSV")
    _add_lexicon_flags(sub)
    _add_strictness_flags(sub)
    _add_report_flags(sub)
    sub.set_defaults(func=cmd_report_stats)

    sub = commands.add_parser("report-topk", help="highest-rated words per dimension")
    sub.add_argument("input", help="lexicon TSV")
    _add_lexicon_flags(sub)
    _add_strictness_flags(sub)
    sub.add_argument("--dimension", help="single dimension (default: all)")
    sub.add_argument("--top", type=int, default=10,
                     help="entries per dimension (default: 10)")
    _add_report_flags(sub)
    sub.set_defaults(func=cmd_report_topk)

    sub = commands.add_parser(
        "report-corr", help="cross-format correlation matrix of two lexicons"
    )
    sub.add_argument("a", help="lexicon TSV")
    sub.add_argument("b", help="lexicon TSV")
    _add_lexicon_flags(sub, letter="a")
    _add_lexicon_flags(sub, letter="b")
    _add_strictness_flags(sub)
    sub.add_argument("--fold-case", action="store_true",
                     help="match words case-insensitively (default: exact bytes)")
    sub.add_argument("--allow-degenerate", action="store_true",
                     help="exit 0 even when constant columns were flagged")
    _add_report_flags(sub)
    sub.set_defaults(func=cmd_report_corr)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateStatisticsError as exc:
        print(f"degenerate statistics: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except EmomapError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
