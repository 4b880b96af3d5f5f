"""Counterexamples to the graph energy bound E(G) <= 2 mu(G) sqrt(Delta)."""

__version__ = "0.1.0"

from .conjecture import ConjectureVerdict, raw_exceeds, score, verdict
from .graph_core import Graph, decode_graph6, encode_graph6, from_edges
from .matching import maximum_matching
from .spectral import eigenvalues_symmetric, energy
from .wineglass import WineGlassSpec, build_wineglass, limit_L, roots

__all__ = [
    "ConjectureVerdict",
    "Graph",
    "WineGlassSpec",
    "build_wineglass",
    "decode_graph6",
    "eigenvalues_symmetric",
    "encode_graph6",
    "energy",
    "from_edges",
    "limit_L",
    "maximum_matching",
    "raw_exceeds",
    "roots",
    "score",
    "verdict",
]
