"""Cross-entropy search for graphs with a large ``E(G) - 2 mu(G) sqrt(Delta)``.

The sampling distribution is one independent Bernoulli probability per vertex
pair. Each generation draws a population of graphs, keeps the top fraction
of finite-scored ones, and moves every edge probability toward the elites'
edge frequency.

Every candidate draws from its own RNG stream keyed by
``(seed, generation, index)``, so a run is reproducible independent of how
scoring is spread over worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .conjecture import NEG_INF, DEFAULT_TOL, bound, verdict
from .graph_core import Graph, decode_graph6, encode_graph6, is_connected, max_degree
from .matching import matching_number
from .spectral import energies_batch, energy


@dataclass
class CePolicy:
    n: int
    edge_probs: np.ndarray
    p_floor: float = 0.01
    p_ceil: float = 0.99

    @classmethod
    def uniform(cls, n: int, p: float = 0.5, p_floor: float = 0.01, p_ceil: float = 0.99) -> "CePolicy":
        probs = np.full(n * (n - 1) // 2, float(p))
        return cls(n, np.clip(probs, p_floor, p_ceil), p_floor, p_ceil)

    def sample(self, rng: np.random.Generator) -> Graph:
        bits = rng.random(self.edge_probs.size) < self.edge_probs
        return _graph_from_bits(self.n, bits)

    def update(self, elites: list[Graph], smoothing: float) -> None:
        if not elites:
            return
        freq = np.mean([_bits_from_graph(g) for g in elites], axis=0)
        probs = smoothing * freq + (1 - smoothing) * self.edge_probs
        self.edge_probs = np.clip(probs, self.p_floor, self.p_ceil)


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for v in range(1, n) for u in range(v)]


def _graph_from_bits(n: int, bits: np.ndarray) -> Graph:
    rows = [0] * n
    for (u, v), b in zip(_pairs(n), bits):
        if b:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def _bits_from_graph(g: Graph) -> np.ndarray:
    return np.array([g.has_edge(u, v) for u, v in _pairs(g.n)], dtype=float)


def score_with_penalty(g: Graph, delta_penalty: int | None = None) -> float:
    if not is_connected(g):
        return NEG_INF
    d = max_degree(g)
    if delta_penalty is not None and d > delta_penalty:
        return NEG_INF
    return energy(g) - bound(matching_number(g), d)


def _score_batch(records: list[bytes], delta_penalty: int | None) -> list[float]:
    graphs = [decode_graph6(r) for r in records]
    scores = [NEG_INF] * len(graphs)
    live = []
    for i, g in enumerate(graphs):
        if is_connected(g) and (delta_penalty is None or max_degree(g) <= delta_penalty):
            live.append(i)
    if live:
        es = energies_batch(np.stack([graphs[i].adjacency() for i in live]))
        for i, e in zip(live, es):
            g = graphs[i]
            scores[i] = float(e) - bound(matching_number(g), max_degree(g))
    return scores


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    elite_mean: float
    finite_mean: float  # over all finite-scored candidates of the generation
    gen_best: float
    best: float  # best so far
    best_g6: str


@dataclass
class SearchTrace:
    n: int
    records: list[GenerationRecord] = field(default_factory=list)
    best_score: float = NEG_INF
    best_g6: str = ""
    counterexamples: list[str] = field(default_factory=list)


def _validate(n: int, generations: int, population: int, elite_frac: float, smoothing: float) -> None:
    if n < 2:
        raise ValueError("n must be at least 2")
    if generations < 1:
        raise ValueError("generations must be positive")
    if population < 10:
        raise ValueError("population must be at least 10")
    if not 0 < elite_frac < 1:
        raise ValueError("elite_frac must lie in (0, 1)")
    if not 0 <= smoothing <= 1:
        raise ValueError("smoothing must lie in [0, 1]")


def run_search(
    n: int,
    generations: int,
    population: int = 1000,
    elite_frac: float = 0.10,
    smoothing: float = 0.7,
    seed: int = 0,
    delta_penalty: int | None = None,
    init_prob: float = 0.5,
    p_floor: float = 0.01,
    p_ceil: float = 0.99,
    jobs: int = 1,
    tol: float = DEFAULT_TOL,
) -> SearchTrace:
    _validate(n, generations, population, elite_frac, smoothing)
    policy = CePolicy.uniform(n, init_prob, p_floor, p_ceil)
    n_elite = math.ceil(elite_frac * population)
    trace = SearchTrace(n)
    cache: dict[bytes, float] = {}
    found: set[str] = set()
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for gen in range(generations):
            graphs = [
                policy.sample(np.random.default_rng([seed, gen, i])) for i in range(population)
            ]
            codes = [encode_graph6(g) for g in graphs]
            todo = sorted({c for c in codes if c not in cache})
            if pool is None:
                scored = _score_batch(todo, delta_penalty)
            else:
                size = max(1, math.ceil(len(todo) / jobs))
                parts = [todo[i:i + size] for i in range(0, len(todo), size)]
                scored = [s for part in pool.map(_score_batch, parts, [delta_penalty] * len(parts))
                          for s in part]
            cache.update(zip(todo, scored))
            scores = [cache[c] for c in codes]

            finite = [i for i, s in enumerate(scores) if s != NEG_INF]
            # stable on index, so ties resolve the same way every run
            finite.sort(key=lambda i: -scores[i])
            elite_idx = finite[:n_elite]
            elite_mean = (
                math.fsum(scores[i] for i in elite_idx) / len(elite_idx) if elite_idx else NEG_INF
            )
            finite_mean = (
                math.fsum(scores[i] for i in finite) / len(finite) if finite else NEG_INF
            )
            gen_best = scores[elite_idx[0]] if elite_idx else NEG_INF
            if elite_idx and gen_best > trace.best_score:
                trace.best_score = gen_best
                trace.best_g6 = codes[elite_idx[0]].decode("ascii")
            for i in elite_idx:
                if scores[i] <= tol:
                    break
                g6 = codes[i].decode("ascii")
                if g6 not in found and verdict(graphs[i], tol).is_conjecture_counterexample:
                    found.add(g6)
                    trace.counterexamples.append(g6)
            trace.records.append(
                GenerationRecord(gen, elite_mean, finite_mean, gen_best, trace.best_score,
                                 trace.best_g6)
            )
            policy.update([graphs[i] for i in elite_idx], smoothing)
    finally:
        if pool is not None:
            pool.shutdown()
    return trace
