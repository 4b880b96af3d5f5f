"""Adjacency spectra and graph energy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph_core import Graph

DEFAULT_CLUSTER_TOL = 1e-6


class EigenError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: tuple[float, ...]  # descending
    energy: float


def _symmetrized(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi eigenvalues of a real symmetric matrix, sorted descending.

    Slow but self-contained; used as an independent check on LAPACK.
    """
    a = _symmetrized(a).copy()
    n = a.shape[0]
    scale = max(np.abs(a).max(), 1.0)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off <= tol * scale:
            return np.sort(np.diag(a))[::-1]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    raise EigenError(f"Jacobi failed to converge after {max_sweeps} sweeps")


def eigenvalues_symmetric(g: Graph, method: str = "lapack") -> SpectralSummary:
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    a = _symmetrized(g.adjacency())
    if method == "lapack":
        try:
            ev = np.linalg.eigvalsh(a)[::-1]
        except np.linalg.LinAlgError as exc:
            raise EigenError(str(exc)) from exc
    elif method == "jacobi":
        ev = jacobi_eigenvalues(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    ev = tuple(float(x) for x in ev)
    return SpectralSummary(ev, math.fsum(abs(x) for x in ev))


def energy(g: Graph) -> float:
    return eigenvalues_symmetric(g).energy


def energies_batch(adjs: np.ndarray) -> np.ndarray:
    """Energies of a stack of same-order adjacency matrices, shape (m, n, n)."""
    if adjs.shape[0] == 0:
        return np.zeros(0)
    ev = np.linalg.eigvalsh(adjs)
    return np.abs(ev).sum(axis=1)


def eigenvalue_multiplicity(
    s: SpectralSummary, target: float, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> int:
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    return sum(1 for x in s.eigenvalues if abs(x - target) <= cluster_tol)
