"""Command line interface: ``energia <subcommand> ...``.

Exit codes: 0 success (for ``check``: the graph is a counterexample),
1 clean negative (``check`` only), 2 usage, input or IO error.
"""

from __future__ import annotations

import argparse
import csv
import gzip
import json
import logging
import math
import shlex
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator, Sequence

from . import __version__
from .ce_search import run_search
from .conjecture import DEFAULT_TOL, score_to_json, verdict, verdict_record
from .enumeration import (
    DATA_DIR_ENV,
    ScanError,
    ScanReport,
    default_resolver,
    generate_connected_bounded,
    scan_counts_table,
    scan_stream,
)
from .graph_core import Graph6Error, GraphError, decode_graph6, encode_graph6, max_degree
from .matching import matching_number
from .spectral import energy
from .wineglass import (
    WineGlassSpec,
    build_wineglass,
    energy_closed,
    limit_L,
    ratio_convergence,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

log = logging.getLogger("energia")


class CliError(Exception):
    pass


# --- config provenance ----------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Subcommand plus its fully resolved flags, in parser order."""

    command: str
    args: tuple[tuple[str, object], ...]

    @classmethod
    def from_namespace(cls, parser: argparse.ArgumentParser, ns: argparse.Namespace) -> "RunConfig":
        sub = _subparsers(parser)[ns.command]
        items = []
        for action in sub._actions:
            if action.dest in ("help", "command"):
                continue
            items.append((action.dest, getattr(ns, action.dest)))
        return cls(ns.command, tuple(items))

    def argv(self, parser: argparse.ArgumentParser) -> list[str]:
        sub = _subparsers(parser)[self.command]
        by_dest = {a.dest: a for a in sub._actions}
        positional, optional = [], []
        for dest, value in self.args:
            action = by_dest[dest]
            if not action.option_strings:
                if isinstance(value, list):
                    positional += [_fmt_value(v) for v in value]
                elif value is not None:
                    positional.append(_fmt_value(value))
                continue
            if value is None:
                continue
            optional += [action.option_strings[-1], _fmt_value(value)]
        return [self.command, *optional, *positional]

    def flag_string(self, parser: argparse.ArgumentParser) -> str:
        return shlex.join(self.argv(parser))


def _fmt_value(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _subparsers(parser: argparse.ArgumentParser) -> dict[str, argparse.ArgumentParser]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices
    raise RuntimeError("parser has no subcommands")


def header_line(config: RunConfig, parser: argparse.ArgumentParser) -> str:
    return f"energia {__version__} {config.flag_string(parser)}"


def json_header(config: RunConfig, parser: argparse.ArgumentParser) -> str:
    return json.dumps({"header": {"tool": "energia", "version": __version__,
                                  "config": config.flag_string(parser)}})


# --- IO helpers -----------------------------------------------------------------


@contextmanager
def open_input(path: str | None) -> Iterator[IO[bytes]]:
    if path is None or path == "-":
        yield sys.stdin.buffer
        return
    p = Path(path)
    opener = gzip.open if p.suffix == ".gz" else open
    try:
        fh = opener(p, "rb")
    except OSError as exc:
        raise CliError(f"cannot open {path}: {exc}") from exc
    with fh:
        yield fh


@contextmanager
def open_output(path: str | None) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from exc
    with fh:
        yield fh


def _write_csv(out: IO[str], header: str, fieldnames: Sequence[str], rows) -> None:
    out.write(f"# {header}\n")
    w = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def _write_jsonl(out: IO[str], header: str, records) -> None:
    out.write(header + "\n")
    for rec in records:
        out.write(json.dumps(rec) + "\n")


SUMMARY_FIELDS = ("n", "total_scanned", "raw_hits", "conjecture_hits", "skipped")


def _summary_rows(report: ScanReport) -> list[dict]:
    return [] if report.n is None else [report.summary_row()]


# --- subcommands ----------------------------------------------------------------


def cmd_check(args, config, parser) -> int:
    try:
        g = decode_graph6(args.g6)
    except Graph6Error as exc:
        raise CliError(f"invalid graph6 {args.g6!r}: {exc}") from exc
    if g.n < 1:
        raise CliError("graph has no vertices")
    rec = verdict_record(g, args.tol)
    rec["config"] = config.flag_string(parser)
    print(json.dumps(rec))
    return EXIT_OK if rec["is_conjecture_counterexample"] else EXIT_NEGATIVE


def cmd_scan(args, config, parser) -> int:
    with open_input(args.path) as fh:
        try:
            report = scan_stream(fh, args.delta_max, args.tol, args.jobs, args.on_error)
        except ScanError as exc:
            raise CliError(str(exc)) from exc
    head = header_line(config, parser)
    hits = [h.to_json() for h in report.hit_records]
    if args.hits_out:
        with open_output(args.hits_out) as out:
            _write_jsonl(out, json_header(config, parser), hits)
    if args.summary_out:
        with open_output(args.summary_out) as out:
            _write_csv(out, head, SUMMARY_FIELDS, _summary_rows(report))
    if args.format == "jsonl":
        _write_jsonl(sys.stdout, json_header(config, parser), hits)
    else:
        _write_csv(sys.stdout, head, SUMMARY_FIELDS, _summary_rows(report))
    return EXIT_OK


def _wineglass_metrics(spec: WineGlassSpec) -> dict:
    g = build_wineglass(spec)
    direct = energy(g)
    closed = energy_closed(spec)
    v = verdict(g)
    return {
        "kind": spec.kind,
        "k": spec.k,
        "n": g.n,
        "edges": g.num_edges,
        "energy_direct": direct,
        "energy_closed": closed,
        "difference": direct - closed,
        "mu": matching_number(g),
        "delta": max_degree(g),
        "score": score_to_json(v.score),
        "is_conjecture_counterexample": v.is_conjecture_counterexample,
    }


def cmd_wineglass(args, config, parser) -> int:
    try:
        specs = [WineGlassSpec(args.kind, k) for k in args.k]
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if args.emit == "graph6":
        # raw graph6 stays header-free so it can be piped into other nauty tools
        for spec in specs:
            print(encode_graph6(build_wineglass(spec)).decode("ascii"))
        return EXIT_OK
    if args.emit == "metrics":
        rows = [_wineglass_metrics(s) for s in specs]
    else:
        rows = [{"kind": args.kind, "k": k, "ratio": r}
                for k, r in ratio_convergence(args.kind, [s.k for s in specs])]
    if args.format == "jsonl":
        _write_jsonl(sys.stdout, json_header(config, parser), rows)
    else:
        _write_csv(sys.stdout, header_line(config, parser), list(rows[0]), rows)
    return EXIT_OK


def cmd_limit(args, config, parser) -> int:
    res = limit_L(args.quad_tol)
    rec = {
        "L": res.L,
        "L_cos_form": res.L_cos_form,
        "two_sqrt3": 2 * math.sqrt(3),
        "L_minus_two_sqrt3": res.L - 2 * math.sqrt(3),
        "alpha_m2": res.alpha_m2,
        "alpha_p2": res.alpha_p2,
        "beta_p2": res.beta_p2,
        "quadrature_error_estimate": res.quadrature_error_estimate,
    }
    if args.format == "jsonl":
        _write_jsonl(sys.stdout, json_header(config, parser), [rec])
    else:
        out = sys.stdout
        out.write(f"# {header_line(config, parser)}\n")
        out.write(f"L = {res.L:.10f}\n")
        out.write(f"L (cosine form) = {res.L_cos_form:.10f}\n")
        out.write(f"2*sqrt(3) = {2 * math.sqrt(3):.10f}\n")
        out.write(f"quadrature error estimate = {res.quadrature_error_estimate:.3e}\n")
    return EXIT_OK


def cmd_generate(args, config, parser) -> int:
    try:
        graphs = generate_connected_bounded(args.n, args.delta_max)
        for g in graphs:
            sys.stdout.write(encode_graph6(g).decode("ascii") + "\n")
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return EXIT_OK


def cmd_search(args, config, parser) -> int:
    try:
        trace = run_search(
            args.n, args.generations, args.population, args.elite_frac, args.smoothing,
            args.seed, args.delta_penalty, args.init_prob, jobs=args.jobs, tol=args.tol,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    rows = [
        {"generation": r.generation, "elite_mean": score_to_json(r.elite_mean),
         "finite_mean": score_to_json(r.finite_mean),
         "gen_best": score_to_json(r.gen_best), "best": score_to_json(r.best),
         "best_g6": r.best_g6}
        for r in trace.records
    ]
    head = header_line(config, parser)
    if args.trace_out:
        with open_output(args.trace_out) as out:
            _write_csv(out, head, list(rows[0]), rows)
    bests = []
    if trace.best_g6:
        rec = verdict_record(decode_graph6(trace.best_g6), args.tol)
        rec["kind"] = "best"
        bests.append(rec)
    for g6 in trace.counterexamples:
        rec = verdict_record(decode_graph6(g6), args.tol)
        rec["kind"] = "counterexample"
        bests.append(rec)
    if args.bests_out:
        with open_output(args.bests_out) as out:
            _write_jsonl(out, json_header(config, parser), bests)
    if args.format == "jsonl":
        _write_jsonl(sys.stdout, json_header(config, parser), bests)
    else:
        _write_csv(sys.stdout, head, list(rows[0]), rows)
    return EXIT_OK


def cmd_table(args, config, parser) -> int:
    lo, _, hi = args.n_range.partition("-")
    try:
        ns = range(int(lo), int(hi or lo) + 1)
    except ValueError as exc:
        raise CliError(f"bad --n-range {args.n_range!r}") from exc
    try:
        rows = scan_counts_table(ns, default_resolver(args.data_dir), args.delta_max, args.tol,
                                 args.jobs)
    except (FileNotFoundError, ScanError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    dicts = [r.__dict__ for r in rows]
    if args.format == "jsonl":
        _write_jsonl(sys.stdout, json_header(config, parser), dicts)
    else:
        _write_csv(sys.stdout, header_line(config, parser),
                   ("n", "delta_max", "total_scanned", "raw_hits", "conjecture_hits"), dicts)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="energia",
        description="Check and search for counterexamples to E(G) <= 2 mu(G) sqrt(Delta).",
    )
    parser.add_argument("--version", action="version", version=f"energia {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verdict for one graph6 string")
    p.add_argument("--tol", type=_nonneg_float, default=DEFAULT_TOL)
    p.add_argument("g6")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="scan a graph6 file (or stdin) for counterexamples")
    p.add_argument("--delta-max", type=int, default=None)
    p.add_argument("--tol", type=_nonneg_float, default=DEFAULT_TOL)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--on-error", choices=("abort", "skip"), default="abort")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--hits-out", default=None, help="also write hits as JSONL here")
    p.add_argument("--summary-out", default=None, help="also write the CSV summary here")
    p.add_argument("path", nargs="?", default="-")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("wineglass", help="wine glass path/cycle graphs, metrics and ratios")
    p.add_argument("--emit", choices=("graph6", "metrics", "ratio"), default="metrics")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("kind", choices=("path", "cycle"))
    p.add_argument("k", type=int, nargs="+")
    p.set_defaults(func=cmd_wineglass)

    p = sub.add_parser("limit", help="the limit constant L of E/mu for wine glass graphs")
    p.add_argument("--quad-tol", type=float, default=1e-11)
    p.add_argument("--format", choices=("text", "jsonl"), default="text")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("generate", help="connected graphs with bounded degree, as graph6")
    p.add_argument("--delta-max", type=int, default=3)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("search", help="cross-entropy search for high-score graphs")
    p.add_argument("--n", type=_positive_int, default=19)
    p.add_argument("--generations", type=_positive_int, default=100)
    p.add_argument("--population", type=int, default=1000)
    p.add_argument("--elite-frac", type=float, default=0.10)
    p.add_argument("--smoothing", type=float, default=0.7)
    p.add_argument("--init-prob", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta-penalty", type=int, default=None)
    p.add_argument("--tol", type=_nonneg_float, default=DEFAULT_TOL)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--trace-out", default=None, help="also write the per-generation CSV here")
    p.add_argument("--bests-out", default=None, help="also write final bests as JSONL here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", help="per-n counterexample counts (built-in n<=9, files beyond)")
    p.add_argument("--n-range", default="6-9")
    p.add_argument("--delta-max", type=int, default=3)
    p.add_argument("--tol", type=_nonneg_float, default=DEFAULT_TOL)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--data-dir", default=None, help=f"graph6 corpus directory (default ${DATA_DIR_ENV})")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    config = RunConfig.from_namespace(parser, args)
    try:
        return args.func(args, config, parser)
    except BrokenPipeError:
        return EXIT_OK
    except (CliError, GraphError, OSError) as exc:
        print(f"energia: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
