"""Command-line front end.

    pming index <corpus-path> -o <index-file>
    pming score <x> <y> --terms w1,w2,... (--table F | --index F | --http-config F)
    pming matrix --terms ...
    pming topk <query> -k N --terms ...
    pming counts <x> [y]

Exit status: 0 on success, 1 on usage errors, 2 on data or provider errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sqlite3
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .analysis import distance_matrix, top_k
from .context import Context, build_context
from .errors import PairError, PmingError
from .measures import DEFAULT_RHO, ScoreReport, Variant
from .providers import (
    CachedProvider,
    CorpusIndex,
    CountCache,
    HttpCountProvider,
    as_term,
    index_path,
    load_count_table,
    load_http_config,
    lookup_counts,
)
from .providers.cache import DEFAULT_TTL
from .serialize import json_real, text_real

logger = logging.getLogger("pming")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

SCORE_KEYS = ("x", "y", "f_x", "f_y", "f_xy", "M", "pmi", "spread", "component_pmi",
              "component_spread", "mu1", "mu2", "rho", "variant", "pming", "flags")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    provider: Optional[str]
    source: Optional[str]
    rho: Optional[float]
    variant: Optional[Variant]
    cache: bool
    cache_ttl: float
    output_format: str
    parallelism: int


def _rho(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"rho must lie in [0, 1], got {text}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _term_list(text):
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of terms")
    return items


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_argument_group("count source")
    src.add_argument("--provider", choices=["corpus", "table", "http"],
                     help="count source (inferred from --table/--index/--http-config when omitted)")
    src.add_argument("--table", metavar="PATH", help="JSON count table")
    src.add_argument("--index", metavar="PATH",
                     help="index file from 'pming index', or a corpus directory / JSON-lines file")
    src.add_argument("--http-config", metavar="PATH", help="HTTP provider config (JSON)")
    src.add_argument("--cache", action="store_true", help="cache pair counts (file from $PMING_CACHE)")
    src.add_argument("--cache-ttl", type=float, default=DEFAULT_TTL / 86400, metavar="DAYS",
                     help="cache entry lifetime in days (default: %(default)s)")
    src.add_argument("--parallelism", type=_positive_int, default=1, metavar="N",
                     help="concurrent pair fetches while building a context")
    measure = common.add_argument_group("measure")
    measure.add_argument("--rho", type=_rho, default=None, help=f"component weight (default {DEFAULT_RHO})")
    measure.add_argument("--variant", choices=[v.value for v in Variant], default=None,
                         help="spread-term numerator (default paper)")
    ctx = common.add_argument_group("context")
    ctx.add_argument("--terms", type=_term_list, metavar="W1,W2,...", help="context term set")
    ctx.add_argument("--context", metavar="PATH", help="load a frozen context instead of fetching")
    ctx.add_argument("--freeze-context", metavar="PATH", help="write the context used to PATH")
    common.add_argument("--format", choices=["json", "tsv"], default="json", dest="output_format")

    parser = _Parser(prog="pming", description="PMING semantic distance from document hit counts.")
    parser.add_argument("--version", action="version", version=f"pming {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("index", help="build a corpus index file")
    p.add_argument("corpus", help="directory of .txt files or JSON-lines file with id/text")
    p.add_argument("-o", "--output", required=True, metavar="INDEX_FILE")

    p = sub.add_parser("score", parents=[common], help="score one pair within a context")
    p.add_argument("x")
    p.add_argument("y")

    sub.add_parser("matrix", parents=[common], help="pairwise distance matrix of the context")

    p = sub.add_parser("topk", parents=[common], help="nearest context terms to a query")
    p.add_argument("query")
    p.add_argument("-k", type=_positive_int, required=True)
    p.add_argument("--candidates", type=_term_list, metavar="C1,C2,...",
                   help="rank these instead of the other context terms")

    p = sub.add_parser("counts", parents=[common], help="raw counts for a term or pair")
    p.add_argument("x")
    p.add_argument("y", nargs="?")
    return parser


# ---------------------------------------------------------------------------
# providers


def _run_config(args) -> RunConfig:
    sources = {"table": args.table, "corpus": args.index, "http": args.http_config}
    given = [name for name, path in sources.items() if path]
    if args.provider:
        if not sources[args.provider]:
            flag = {"table": "--table", "corpus": "--index", "http": "--http-config"}[args.provider]
            raise UsageError(f"--provider {args.provider} requires {flag}")
        if len(given) > 1:
            raise UsageError("give exactly one of --table, --index, --http-config")
        provider = args.provider
    elif len(given) > 1:
        raise UsageError("give exactly one of --table, --index, --http-config")
    else:
        provider = given[0] if given else None
    return RunConfig(
        provider=provider,
        source=sources[provider] if provider else None,
        rho=args.rho,
        variant=Variant(args.variant) if args.variant else None,
        cache=args.cache,
        cache_ttl=args.cache_ttl * 86400.0,
        output_format=args.output_format,
        parallelism=args.parallelism,
    )


def _open_provider(config: RunConfig):
    if config.provider is None:
        return None
    path = Path(config.source)
    if config.provider == "table":
        provider = load_count_table(path)
    elif config.provider == "corpus":
        if path.is_dir() or path.suffix in {".jsonl", ".ndjson"}:
            provider = index_path(path)
        else:
            provider = CorpusIndex.load(path)
    else:
        provider = HttpCountProvider(load_http_config(path))
    if config.cache:
        try:
            cache = CountCache(ttl=config.cache_ttl)
        except (sqlite3.Error, OSError) as exc:
            logger.warning("count cache unavailable (%s); continuing without it", exc)
        else:
            provider = CachedProvider(provider, cache)
    return provider


def _context(args, config: RunConfig, provider) -> Context:
    if args.context:
        ctx = Context.load(args.context, provider=provider)
        if args.terms and [as_term(t).key for t in args.terms] != list(ctx.keys):
            raise UsageError("--terms disagrees with the terms of --context")
        if config.rho is not None or config.variant is not None:
            ctx = ctx.with_params(rho=config.rho, variant=config.variant)
    else:
        if not args.terms:
            raise UsageError("a context is required: give --terms or --context")
        if provider is None:
            raise UsageError("a count source is required: give --table, --index or --http-config")
        ctx = build_context(
            args.terms,
            provider,
            rho=DEFAULT_RHO if config.rho is None else config.rho,
            variant=config.variant or Variant.PAPER,
            parallelism=config.parallelism,
        )
    if args.freeze_context:
        ctx.save(args.freeze_context)
    return ctx


# ---------------------------------------------------------------------------
# output


def score_record(report: ScoreReport) -> dict:
    c, p = report.counts, report.params
    return {
        "x": report.x,
        "y": report.y,
        "f_x": c.f_x,
        "f_y": c.f_y,
        "f_xy": c.f_xy,
        "M": c.m,
        "pmi": json_real(report.pmi),
        "spread": json_real(report.spread),
        "component_pmi": json_real(report.component_pmi),
        "component_spread": json_real(report.component_spread),
        "mu1": json_real(p.mu1),
        "mu2": json_real(p.mu2),
        "rho": json_real(p.rho),
        "variant": p.variant.value,
        "pming": json_real(report.pming),
        "flags": sorted(report.flags),
    }


def _tsv_cell(value):
    if isinstance(value, list):
        return ",".join(value)
    if isinstance(value, float):
        return text_real(value)
    return str(value)


def _records_tsv(records: Sequence[dict]) -> str:
    keys = list(records[0])
    lines = ["\t".join(keys)]
    lines += ["\t".join(_tsv_cell(r[k]) for k in keys) for r in records]
    return "\n".join(lines) + "\n"


def _emit(out, payload, fmt: str, tsv: Optional[str] = None):
    if fmt == "tsv":
        out.write(tsv if tsv is not None else _records_tsv(payload if isinstance(payload, list) else [payload]))
    else:
        out.write(json.dumps(payload, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# commands


def _cmd_index(args, out):
    index = index_path(args.corpus)
    index.save(args.output)
    logger.info("wrote %s", args.output)
    return EXIT_OK


def _cmd_score(args, config, provider, out):
    ctx = _context(args, config, provider)
    _emit(out, score_record(ctx.score(args.x, args.y)), config.output_format)
    return EXIT_OK


def _cmd_matrix(args, config, provider, out):
    ctx = _context(args, config, provider)
    matrix = distance_matrix(ctx)
    _emit(out, matrix.to_json(), config.output_format, tsv=matrix.to_tsv())
    return EXIT_OK


def _cmd_topk(args, config, provider, out):
    ctx = _context(args, config, provider)
    ranked = top_k(ctx, args.query, args.k, candidates=args.candidates)
    _emit(out, ranked.to_json(), config.output_format, tsv=ranked.to_tsv())
    return EXIT_OK


def _cmd_counts(args, config, provider, out):
    if provider is None:
        raise UsageError("a count source is required: give --table, --index or --http-config")
    if args.y is None:
        x = as_term(args.x)
        record = {"x": x.key, "f_x": provider.occurrence(x), "M": provider.corpus_size()}
    else:
        x, y = as_term(args.x), as_term(args.y)
        c = lookup_counts(provider, x, y)
        record = {"x": x.key, "y": y.key, "f_x": c.f_x, "f_y": c.f_y, "f_xy": c.f_xy, "M": c.m}
    _emit(out, record, config.output_format)
    return EXIT_OK


_COMMANDS = {"score": _cmd_score, "matrix": _cmd_matrix, "topk": _cmd_topk, "counts": _cmd_counts}


def run_cli(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    handler = logging.StreamHandler(err)
    handler.setFormatter(logging.Formatter("pming: %(levelname)s: %(message)s"))
    root = logging.getLogger("pming")
    root.handlers[:] = [handler]
    root.setLevel(logging.INFO if args.verbose else logging.WARNING)
    root.propagate = False

    config = None
    try:
        if args.command == "index":
            return _cmd_index(args, out)
        config = _run_config(args)
        provider = _open_provider(config)
        return _COMMANDS[args.command](args, config, provider, out)
    except UsageError as exc:
        err.write(f"pming {args.command}: {exc}\n")
        return EXIT_USAGE
    except (PmingError, OSError) as exc:
        message = f"pming {args.command}: error: {exc}"
        if config is not None and config.source and not isinstance(exc, PairError):
            message += f" (source: {config.provider} {config.source})"
        err.write(message + "\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
