"""Counterexample scanning over graph6 streams and a small-n graph generator.

The scanner reads one graph6 record per line, evaluates the verdict for each
graph and keeps only hits. Work is split into chunks; each chunk yields a
partial :class:`ScanReport` and partials are merged with a commutative fold,
so the result does not depend on chunking or on the number of workers.
"""

from __future__ import annotations

import gzip
import logging
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, islice
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .conjecture import DEFAULT_TOL, bound, score_to_json, verdict_from_metrics
from .graph_core import (
    Graph,
    Graph6Error,
    canonical_code,
    decode_graph6,
    encode_graph6,
    is_connected,
    read_graph6_lines,
)
from .matching import greedy_matching_size, matching_number
from .spectral import energies_batch

log = logging.getLogger(__name__)

GENERATOR_MAX_N = 9
CHUNK_SIZE = 4096
DATA_DIR_ENV = "ENERGIA_DATA_DIR"


class ScanError(ValueError):
    """Malformed or out-of-contract record in a scanned stream."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Hit:
    n: int
    g6: str
    energy: float
    mu: int
    delta: int
    score: float
    conjecture: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g6": self.g6,
            "energy": self.energy,
            "mu": self.mu,
            "delta": self.delta,
            "score": score_to_json(self.score),
            "conjecture": self.conjecture,
        }


@dataclass
class ScanReport:
    n: int | None = None
    total_scanned: int = 0
    raw_hits: int = 0
    conjecture_hits: int = 0
    skipped: int = 0
    hit_records: list[Hit] = field(default_factory=list)

    def merge(self, other: "ScanReport") -> "ScanReport":
        if self.n is not None and other.n is not None and self.n != other.n:
            raise ValueError(f"cannot merge reports for n={self.n} and n={other.n}")
        return ScanReport(
            n=self.n if self.n is not None else other.n,
            total_scanned=self.total_scanned + other.total_scanned,
            raw_hits=self.raw_hits + other.raw_hits,
            conjecture_hits=self.conjecture_hits + other.conjecture_hits,
            skipped=self.skipped + other.skipped,
            hit_records=sorted(self.hit_records + other.hit_records, key=lambda h: (h.n, h.g6)),
        )

    def summary_row(self) -> dict:
        return {
            "n": self.n,
            "total_scanned": self.total_scanned,
            "raw_hits": self.raw_hits,
            "conjecture_hits": self.conjecture_hits,
            "skipped": self.skipped,
        }


# --- scanning -----------------------------------------------------------------


def _scan_chunk(
    chunk: list[tuple[int, bytes]], delta_max: int | None, tol: float, on_error: str
) -> ScanReport:
    report = ScanReport()
    graphs: dict[int, list[Graph]] = {}
    for lineno, rec in chunk:
        try:
            g = decode_graph6(rec)
        except Graph6Error as exc:
            if on_error == "skip":
                log.warning("skipping line %d: %s", lineno, exc)
                report.skipped += 1
                continue
            raise ScanError(lineno, str(exc)) from exc
        if g.n < 1:
            if on_error == "skip":
                report.skipped += 1
                continue
            raise ScanError(lineno, "graph has no vertices")
        if delta_max is not None and max(g.degrees()) > delta_max:
            msg = f"maximum degree {max(g.degrees())} exceeds delta_max={delta_max}"
            if on_error == "skip":
                log.warning("skipping line %d: %s", lineno, msg)
                report.skipped += 1
                continue
            raise ScanError(lineno, msg)
        graphs.setdefault(g.n, []).append(g)

    for n, gs in graphs.items():
        if report.n is None:
            report.n = n
        elif report.n != n:
            raise ScanError(chunk[0][0], f"mixed vertex counts {report.n} and {n} in one stream")
        energies = energies_batch(np.stack([g.adjacency() for g in gs]))
        for g, e in zip(gs, energies):
            report.total_scanned += 1
            if not is_connected(g):
                continue
            delta = max(g.degrees())
            # a maximal matching bounds mu from below, so this rejects most graphs cheaply
            if e <= bound(greedy_matching_size(g), delta) + tol:
                continue
            v = verdict_from_metrics(g, float(e), matching_number(g), delta, True, tol)
            if v.raw_exceeds:
                report.raw_hits += 1
                report.conjecture_hits += v.is_conjecture_counterexample
                report.hit_records.append(
                    Hit(n, encode_graph6(g).decode("ascii"), v.energy, v.mu, v.delta, v.score,
                        v.is_conjecture_counterexample)
                )
    report.hit_records.sort(key=lambda h: (h.n, h.g6))
    return report


def _chunks(source: Iterable[bytes | str], size: int) -> Iterator[list[tuple[int, bytes]]]:
    it = read_graph6_lines(source)
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def scan_stream(
    source: Iterable[bytes | str],
    delta_max: int | None = None,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
    on_error: str = "abort",
    chunk_size: int = CHUNK_SIZE,
) -> ScanReport:
    """Evaluate every graph6 record of ``source`` and collect the hits."""
    if on_error not in ("abort", "skip"):
        raise ValueError(f"on_error must be 'abort' or 'skip', got {on_error!r}")
    if tol < 0:
        raise ValueError("tol must be non-negative")
    report = ScanReport()
    chunks = _chunks(source, chunk_size)
    if jobs <= 1:
        partials: Iterable[ScanReport] = (
            _scan_chunk(c, delta_max, tol, on_error) for c in chunks
        )
        for part in partials:
            report = report.merge(part)
        return report
    # bounded number of chunks in flight so huge geng files stream in constant memory
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        pending: deque = deque()
        for c in chunks:
            pending.append(pool.submit(_scan_chunk, c, delta_max, tol, on_error))
            if len(pending) >= 2 * jobs:
                report = report.merge(pending.popleft().result())
        while pending:
            report = report.merge(pending.popleft().result())
    return report


def scan_graphs(graphs: Iterable[Graph], delta_max: int | None = None, tol: float = DEFAULT_TOL,
                jobs: int = 1) -> ScanReport:
    return scan_stream((encode_graph6(g) for g in graphs), delta_max, tol, jobs)


# --- generation ---------------------------------------------------------------


def generate_connected_bounded(n: int, delta_max: int) -> Iterator[Graph]:
    """One graph per isomorphism class of connected graphs on ``n`` vertices with Delta <= delta_max.

    Every connected graph has a vertex whose removal leaves it connected, so
    all classes on ``m + 1`` vertices arise by attaching a new vertex to a
    nonempty set of unsaturated vertices of some class on ``m`` vertices.
    Duplicates are removed by canonical code; output is in code order.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > GENERATOR_MAX_N:
        raise ValueError(f"built-in generator is limited to n <= {GENERATOR_MAX_N}; use geng")
    if delta_max < 0:
        raise ValueError("delta_max must be non-negative")
    level: dict[bytes, Graph] = {}
    single = Graph(1, (0,))
    level[canonical_code(single)] = single
    for m in range(1, n):
        nxt: dict[bytes, Graph] = {}
        for g in level.values():
            free = [v for v in range(m) if g.degree(v) < delta_max]
            for size in range(1, min(delta_max, len(free)) + 1):
                for nbrs in combinations(free, size):
                    mask = 0
                    rows = list(g.rows)
                    for v in nbrs:
                        rows[v] |= 1 << m
                        mask |= 1 << v
                    h = Graph(m + 1, tuple(rows) + (mask,))
                    code = canonical_code(h)
                    if code not in nxt:
                        nxt[code] = h
        level = nxt
    for code in sorted(level):
        yield level[code]


# --- counts table -------------------------------------------------------------

SourceResolver = Callable[[int, int], "Iterable[bytes | str] | None"]


def external_graph6_path(n: int, delta_max: int, data_dir: str | os.PathLike | None = None) -> Path:
    """Where an external geng file for (n, delta_max) is expected.

    ``subcubic{n}.g6`` for delta_max = 3 (the name geng output is usually
    given), ``maxdeg{delta_max}_{n}.g6`` otherwise. A gzipped copy with a
    ``.gz`` suffix is accepted by the resolver.
    """
    base = Path(data_dir if data_dir is not None else os.environ.get(DATA_DIR_ENV, "."))
    name = f"subcubic{n}.g6" if delta_max == 3 else f"maxdeg{delta_max}_{n}.g6"
    return base / name


def default_resolver(data_dir: str | os.PathLike | None = None) -> SourceResolver:
    """Built-in generation for n <= 9, external files under the data directory beyond."""

    def resolve(n: int, delta_max: int):
        path = external_graph6_path(n, delta_max, data_dir)
        if path.exists():
            return path.open("rb")
        gz = path.with_name(path.name + ".gz")
        if gz.exists():
            return gzip.open(gz, "rb")
        if n <= GENERATOR_MAX_N:
            return (encode_graph6(g) for g in generate_connected_bounded(n, delta_max))
        return None

    return resolve


@dataclass(frozen=True)
class CountsRow:
    n: int
    delta_max: int
    total_scanned: int
    raw_hits: int
    conjecture_hits: int


def scan_counts_table(
    n_range: Iterable[int],
    source_resolver: SourceResolver | None = None,
    delta_max: int = 3,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
) -> list[CountsRow]:
    resolver = source_resolver or default_resolver()
    rows = []
    for n in n_range:
        src = resolver(n, delta_max)
        if src is None:
            raise FileNotFoundError(
                f"no graph6 source for n={n}, delta_max={delta_max}: "
                f"expected {external_graph6_path(n, delta_max)}"
            )
        try:
            rep = scan_stream(src, delta_max, tol, jobs)
        finally:
            close = getattr(src, "close", None)
            if close is not None:
                close()
        rows.append(CountsRow(n, delta_max, rep.total_scanned, rep.raw_hits, rep.conjecture_hits))
    return rows
