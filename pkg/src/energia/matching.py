"""Maximum cardinality matching in general graphs.

``maximum_matching`` is Edmonds' blossom algorithm (BFS from each exposed
vertex, odd cycles shrunk by relabelling their vertices to a common base).
``matching_number_bruteforce`` is an exponential branch-and-bound used only
as a test oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph_core import Graph

BRUTEFORCE_EDGE_BUDGET = 24


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.edges)


def _augment_from(root: int, adj: list[list[int]], match: list[int]) -> bool:
    n = len(adj)
    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    q = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
        while base[v] != b:
            in_blossom[base[v]] = in_blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while q:
        v = q.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                # odd cycle: contract into a blossom with base `cur`
                cur = lca(v, to)
                in_blossom = [False] * n
                mark_path(v, cur, to, in_blossom)
                mark_path(to, cur, v, in_blossom)
                for i in range(n):
                    if in_blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            q.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    # augmenting path found; flip it back to the root
                    while to != -1:
                        pv = parent[to]
                        nxt = match[pv]
                        match[to] = pv
                        match[pv] = to
                        to = nxt
                    return True
                used[match[to]] = True
                q.append(match[to])
    return False


def maximum_matching(g: Graph) -> Matching:
    n = g.n
    adj = [g.neighbors(v) for v in range(n)]
    match = [-1] * n
    # greedy warm start; the blossom phase below makes it maximum
    for v in range(n):
        if match[v] == -1:
            for u in adj[v]:
                if match[u] == -1:
                    match[u], match[v] = v, u
                    break
    for v in range(n):
        if match[v] == -1:
            _augment_from(v, adj, match)
    edges = tuple((v, match[v]) for v in range(n) if match[v] > v)
    return Matching(edges)


def matching_number(g: Graph) -> int:
    return maximum_matching(g).size


def greedy_matching_size(g: Graph) -> int:
    """Size of a maximal matching; a cheap lower bound on the matching number."""
    free = (1 << g.n) - 1
    size = 0
    for v in range(g.n):
        if free >> v & 1:
            avail = g.rows[v] & free
            if avail:
                u = (avail & -avail).bit_length() - 1
                free &= ~(1 << u | 1 << v)
                size += 1
    return size


def matching_number_bruteforce(g: Graph, edge_budget: int = BRUTEFORCE_EDGE_BUDGET) -> int:
    edges = g.edges()
    if len(edges) > edge_budget:
        raise ValueError(f"{len(edges)} edges exceeds brute-force budget {edge_budget}")
    cap = g.n // 2
    best = 0

    def search(i: int, used: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if best == cap or i == len(edges):
            return
        # bound: even taking every remaining edge cannot beat best
        if size + min(len(edges) - i, cap - size) <= best:
            return
        u, v = edges[i]
        if not (used >> u & 1 or used >> v & 1):
            search(i + 1, used | 1 << u | 1 << v, size + 1)
        search(i + 1, used, size)

    search(0, 0, 0)
    return best


def is_valid_matching(g: Graph, m: Matching) -> bool:
    seen: set[int] = set()
    for u, v in m.edges:
        if u in seen or v in seen or not g.has_edge(u, v):
            return False
        seen.update((u, v))
    return True
