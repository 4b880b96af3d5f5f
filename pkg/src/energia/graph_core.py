"""Simple undirected graphs as adjacency bit-rows, the graph6 codec and small-n
canonical forms.

A :class:`Graph` stores row ``v`` as an int whose bit ``u`` is set when ``u``
and ``v`` are adjacent. Graphs are immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

CANONICAL_LIMIT = 16
GRAPH6_HEADER = b">>graph6<<"

# Short-form graph6 covers n <= 62; the 4-byte form reaches 258047.
_SHORT_MAX = 62
_LONG_MAX = 258047


class GraphError(ValueError):
    """Invalid graph construction or query."""


class Graph6Error(ValueError):
    """Malformed graph6 record."""


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.rows) != self.n:
            raise GraphError("row count does not match n")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def neighbors(self, v: int) -> list[int]:
        row, out = self.rows[v], []
        while row:
            low = row & -row
            out.append(low.bit_length() - 1)
            row ^= low
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in self.neighbors(v) if u < v]

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def adjacency(self, dtype=float) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph on ``n`` vertices; repeated edges are idempotent."""
    if n < 0:
        raise GraphError(f"negative vertex count {n}")
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def from_adjacency(a) -> Graph:
    a = np.asarray(a)
    n = a.shape[0]
    return from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if a[u, v]])


# --- graph6 -------------------------------------------------------------------


def _encode_n(n: int) -> bytes:
    if n <= _SHORT_MAX:
        return bytes([n + 63])
    if n <= _LONG_MAX:
        return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise GraphError(f"n={n} too large for graph6")


def encode_graph6(g: Graph) -> bytes:
    """Encode ``g`` as a graph6 record (no header, no newline)."""
    out = bytearray(_encode_n(g.n))
    acc = nbits = 0
    for v in range(1, g.n):
        row = g.rows[v]
        for u in range(v):
            acc = acc << 1 | (row >> u & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def decode_graph6(line: bytes | str) -> Graph:
    """Decode one graph6 record. Trailing newline/whitespace is ignored."""
    if isinstance(line, str):
        line = line.encode("ascii")
    data = line.strip()
    if data.startswith(GRAPH6_HEADER):
        data = data[len(GRAPH6_HEADER):]
    if not data:
        raise Graph6Error("empty record")
    for b in data:
        if not 63 <= b <= 126:
            raise Graph6Error(f"byte {b} outside [63, 126]")
    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            raise Graph6Error("8-byte size form not supported")
        if len(data) < 4:
            raise Graph6Error("truncated size field")
        n = (data[1] - 63) << 12 | (data[2] - 63) << 6 | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise Graph6Error(f"expected {(nbits + 5) // 6} data bytes for n={n}, got {len(body)}")
    rows = [0] * n
    k = 0
    u, v = 0, 1
    for byte in body:
        x = byte - 63
        for shift in range(5, -1, -1):
            bit = x >> shift & 1
            if k >= nbits:
                if bit:
                    raise Graph6Error("nonzero padding bits")
                continue
            if bit:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            k += 1
            u += 1
            if u == v:
                u, v = 0, v + 1
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[bytes | str]) -> Iterator[tuple[int, bytes]]:
    """Yield ``(line_number, record)`` for non-blank lines, dropping a header."""
    for lineno, raw in enumerate(lines, start=1):
        if isinstance(raw, str):
            raw = raw.encode("ascii", errors="replace")
        rec = raw.strip()
        if rec.startswith(GRAPH6_HEADER):
            rec = rec[len(GRAPH6_HEADER):]
        if rec:
            yield lineno, rec


# --- queries ------------------------------------------------------------------


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = frontier = 1
    full = (1 << g.n) - 1
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= g.rows[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def max_degree(g: Graph) -> int:
    return max((r.bit_count() for r in g.rows), default=0)


def is_cycle_of_length(g: Graph, m: int) -> bool:
    return g.n == m and m >= 3 and all(d == 2 for d in g.degrees()) and is_connected(g)


# --- canonical form -----------------------------------------------------------


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement: split cells by neighbour counts into earlier cells.

    Splitting is by a label computed from the current ordered partition only,
    so the result commutes with relabelling of the graph.
    """
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {v: tuple((g.rows[v] & m).bit_count() for m in masks) for v in cell}
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) > 1:
                changed = True
                for key in sorted(groups):
                    new_cells.append(groups[key])
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells


def _code_for_order(g: Graph, order: Sequence[int]) -> bytes:
    pos = {v: i for i, v in enumerate(order)}
    n = g.n
    rows = [0] * n
    for v in range(n):
        pv = pos[v]
        r = g.rows[v]
        acc = 0
        while r:
            low = r & -r
            acc |= 1 << (n - 1 - pos[low.bit_length() - 1])
            r ^= low
        rows[pv] = acc
    width = max(1, (n + 7) // 8)
    return bytes([n]) + b"".join(r.to_bytes(width, "big") for r in rows)


def canonical_code(g: Graph, limit: int = CANONICAL_LIMIT) -> bytes:
    """Return a relabelling-invariant code; equal codes iff isomorphic.

    Individualisation-refinement search: vertices start partitioned by degree,
    the partition is refined to equitable form, and the first non-singleton
    cell is branched on. The code is the maximum adjacency string over leaves.
    """
    if g.n > limit:
        raise GraphError(f"canonical_code limited to n <= {limit}, got {g.n}")
    if g.n == 0:
        return b"\x00"
    by_deg: dict[int, list[int]] = {}
    for v in range(g.n):
        by_deg.setdefault(g.degree(v), []).append(v)
    start = _refine(g, [by_deg[d] for d in sorted(by_deg)])
    best: bytes | None = None
    stack = [start]
    while stack:
        cells = stack.pop()
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            code = _code_for_order(g, [c[0] for c in cells])
            if best is None or code > best:
                best = code
            continue
        cell = cells[target]
        for v in cell:
            rest = [u for u in cell if u != v]
            stack.append(_refine(g, cells[:target] + [[v], rest] + cells[target + 1:]))
    assert best is not None
    return best


def graph_from_canonical_code(code: bytes) -> Graph:
    n = code[0]
    if n == 0:
        return Graph(0, ())
    width = max(1, (n + 7) // 8)
    rows = []
    for i in range(n):
        r = int.from_bytes(code[1 + i * width:1 + (i + 1) * width], "big")
        rows.append(sum(1 << (n - 1 - j) for j in range(n) if r >> j & 1))
    return Graph(n, tuple(rows))


# --- named graphs used throughout the tests and CLI ---------------------------


def cycle_graph(m: int) -> Graph:
    return from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def path_graph(m: int) -> Graph:
    return from_edges(m, [(i, i + 1) for i in range(m - 1)])


def complete_graph(m: int) -> Graph:
    return from_edges(m, combinations(range(m), 2))


def star_graph(leaves: int) -> Graph:
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
