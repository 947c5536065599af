"""Canonical example tensors and seeded random generators used by tests,
demos, and the benchmark."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .decomp import OdecoDecomp, reconstruct
from .hypergraph import Hypergraph
from .tensor import symmetrize


def stable_cubic_odeco() -> OdecoDecomp:
    """Exact orthogonal decomposition of the reference 2-state cubic system.

    Values (-2, -1) on the orthonormal pair u1 = (sqrt(7)/3, -sqrt(2)/3),
    u2 = (sqrt(2)/3, sqrt(7)/3). The resulting degree-3 vector field is
    asymptotically stable; its Kronecker square has all-positive eigenvalues
    (unstable) and its Kronecker cube is asymptotically stable again.
    """
    a = math.sqrt(7.0) / 3.0
    b = math.sqrt(2.0) / 3.0
    vectors = np.array([[a, b], [-b, a]])
    return OdecoDecomp(np.array([-2.0, -1.0]), vectors, 0.0, 4, True)


def stable_cubic_tensor() -> np.ndarray:
    """The 2×2×2×2 tensor of the reference cubic system (entries like -34/27,
    4*sqrt(14)/27, ... whose 4-decimal roundings are the usual citation)."""
    return reconstruct(stable_cubic_odeco())


def random_supersymmetric(n: int, order: int, rng, low: float = 0.0, high: float = 1.0) -> np.ndarray:
    """Symmetrized uniform(low, high) tensor with dims n^order."""
    return symmetrize(rng.uniform(low, high, size=(n,) * order))


def random_odeco(n: int, order: int, rng, values=None, rank: int | None = None) -> OdecoDecomp:
    """Planted orthogonal decomposition with known values and vectors.

    Vectors are the leading columns of a random orthogonal matrix; values
    default to magnitudes in [0.5, 2] with random signs. rank defaults to n.
    """
    rank = n if rank is None else rank
    if rank > n:
        raise ValueError(f"rank {rank} exceeds dimension {n}")
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))
    if values is None:
        values = rng.uniform(0.5, 2.0, size=rank) * rng.choice([-1.0, 1.0], size=rank)
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (rank,):
        raise ValueError(f"expected {rank} values, got shape {values.shape}")
    return OdecoDecomp(values, q[:, :rank], 0.0, order, True)


def random_hypergraph(n: int, k: int, m: int, rng) -> Hypergraph:
    """m distinct random k-edges on n vertices (m must not exceed C(n, k))."""
    if m > math.comb(n, k):
        raise ValueError(f"cannot place {m} distinct {k}-edges on {n} vertices")
    edges: set[tuple[int, ...]] = set()
    while len(edges) < m:
        edges.add(tuple(sorted(rng.choice(n, size=k, replace=False).tolist())))
    return Hypergraph(k, n, sorted(edges))


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    """All C(n, k) edges; regular, since every vertex lies in C(n-1, k-1) of them."""
    return Hypergraph(k, n, list(itertools.combinations(range(n), k)))
