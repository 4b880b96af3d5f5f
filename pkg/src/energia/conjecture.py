"""Score ``E(G) - 2 mu(G) sqrt(Delta)`` and the counterexample predicates.

Two predicates are exposed. ``raw_exceeds`` is the plain threshold test
``E > 2 mu sqrt(Delta) + tol`` on connected graphs. The conjecture-aware
flag additionally requires ``2 <= Delta <= 5`` and that the graph is not one
of the excluded odd cycles C3, C5, C7.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .graph_core import Graph, encode_graph6, is_connected, is_cycle_of_length, max_degree
from .matching import matching_number
from .spectral import energy

DEFAULT_TOL = 1e-7
NEG_INF = float("-inf")
EXCLUDED_CYCLES = (3, 5, 7)
DELTA_RANGE = (2, 5)


@dataclass(frozen=True)
class ConjectureVerdict:
    energy: float
    mu: int
    delta: int
    connected: bool
    score: float  # NEG_INF when disconnected
    raw_exceeds: bool
    is_conjecture_counterexample: bool

    def to_json(self) -> dict:
        d = asdict(self)
        d["score"] = score_to_json(self.score)
        return d


def score_to_json(score: float) -> float | str:
    """JSON has no infinities; the disconnected sentinel is written as "-inf"."""
    return "-inf" if score == NEG_INF else score


def score_from_json(value: float | str) -> float:
    return NEG_INF if value == "-inf" else float(value)


def bound(mu: int, delta: int) -> float:
    return 2 * mu * math.sqrt(delta)


def score(g: Graph) -> float:
    if not is_connected(g):
        return NEG_INF
    return energy(g) - bound(matching_number(g), max_degree(g))


def raw_exceeds(g: Graph, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if not is_connected(g):
        return False
    return energy(g) > bound(matching_number(g), max_degree(g)) + tol


def is_excluded_cycle(g: Graph) -> bool:
    return any(is_cycle_of_length(g, m) for m in EXCLUDED_CYCLES)


def verdict_from_metrics(
    g: Graph, e: float, mu: int, delta: int, connected: bool, tol: float = DEFAULT_TOL
) -> ConjectureVerdict:
    """Assemble a verdict from already computed metrics (used by the scanner)."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    s = e - bound(mu, delta) if connected else NEG_INF
    raw = connected and e > bound(mu, delta) + tol
    lo, hi = DELTA_RANGE
    conj = raw and lo <= delta <= hi and not is_excluded_cycle(g)
    return ConjectureVerdict(e, mu, delta, connected, s, raw, conj)


def verdict(g: Graph, tol: float = DEFAULT_TOL) -> ConjectureVerdict:
    return verdict_from_metrics(
        g, energy(g), matching_number(g), max_degree(g), is_connected(g), tol
    )


def verdict_record(g: Graph, tol: float = DEFAULT_TOL) -> dict:
    """Verdict plus graph6 and vertex count, as printed by ``energia check``."""
    rec = {"n": g.n, "g6": encode_graph6(g).decode("ascii")}
    rec.update(verdict(g, tol).to_json())
    return rec
