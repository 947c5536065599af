"""k-uniform hypergraphs, their adjacency tensors, and the Kronecker product.

Two tensors are associated with a Kronecker product of hypergraphs and they
differ by an exact factor of (k-1)!: the product of the factor adjacency
tensors (kron_adjacency, the form the spectral and dynamics identities are
stated for) and the adjacency tensor of the combinatorial edge set
(adjacency_tensor of kron_hypergraph). Both are exposed; nothing here picks
one silently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import tensor as tn
from .errors import BudgetError, NoConvergenceError, ShapeError
from .kron import element_budget, kron, kron_index
from .spectral import EigenKind, SolverOptions, h_eigen_power, z_eigen_sshopm


@dataclass(frozen=True)
class Hypergraph:
    """A simple k-uniform hypergraph on vertices 0..n-1."""

    k: int
    n: int
    edges: frozenset[tuple[int, ...]]

    def __init__(self, k: int, n: int, edges):
        k = int(k)
        n = int(n)
        if k < 1:
            raise ValueError(f"uniformity must be >= 1, got {k}")
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        normalized = []
        for e in edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != k:
                raise ValueError(f"edge {e} has {len(e)} vertices, expected {k}")
            if len(set(e)) != k:
                raise ValueError(f"edge {e} repeats a vertex")
            if e[0] < 0 or e[-1] >= n:
                raise ValueError(f"edge {e} has a vertex outside 0..{n - 1}")
            normalized.append(e)
        if len(set(normalized)) != len(normalized):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(normalized))

    @property
    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class ProductVertex:
    """Vertex (u, v) of a product hypergraph; flat id is u*n2 + v."""

    u: int
    v: int
    n2: int

    @property
    def flat(self) -> int:
        return self.u * self.n2 + self.v

    @classmethod
    def from_flat(cls, flat: int, n2: int) -> "ProductVertex":
        u, v = divmod(int(flat), int(n2))
        return cls(u, v, n2)


def adjacency_tensor(h: Hypergraph) -> np.ndarray:
    """Supersymmetric n^k tensor with 1/(k-1)! on every ordered edge tuple."""
    count = h.n ** h.k
    if count > element_budget():
        raise BudgetError(
            f"adjacency tensor would need {count} elements, budget is {element_budget()}"
        )
    a = np.zeros((h.n,) * h.k)
    w = 1.0 / math.factorial(h.k - 1)
    for e in h.sorted_edges:
        for p in itertools.permutations(e):
            a[p] = w
    return a


def degree_vector(h: Hypergraph) -> np.ndarray:
    """Per-vertex edge membership count.

    Under the 1/(k-1)! adjacency weighting this equals the tensor contraction
    A(H) 1^{k-1}: each edge containing v contributes (k-1)! ordered tuples of
    weight 1/(k-1)!.
    """
    d = np.zeros(h.n)
    for e in h.edges:
        for v in e:
            d[v] += 1.0
    return d


def clique_expansion(h: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    """(count matrix, tensor-contracted matrix) of the clique expansion.

    The count matrix holds |{e : u, v ∈ e}| off-diagonal. The tensor view is
    A(H) contracted with ones on all but two modes; it equals count/(k-1)
    exactly (each containing edge leaves (k-2)! ordered completions weighted
    1/(k-1)!), which is verified on every call.
    """
    if h.k < 2:
        raise ShapeError("clique expansion needs k >= 2")
    counts = np.zeros((h.n, h.n))
    for e in h.edges:
        for u, v in itertools.combinations(e, 2):
            counts[u, v] += 1.0
            counts[v, u] += 1.0
    a = adjacency_tensor(h)
    weighted = a.sum(axis=tuple(range(2, h.k)))
    np.fill_diagonal(counts, 0.0)
    expect = counts / (h.k - 1)
    diag = np.diag(weighted).copy()
    if np.max(np.abs(diag)) > 1e-12:
        raise AssertionError("tensor clique expansion has a nonzero diagonal")
    if np.max(np.abs(weighted - expect)) > 1e-12:
        raise AssertionError("tensor clique expansion is not count/(k-1)")
    return counts, weighted


def centrality(h: Hypergraph, kind=EigenKind.Z, opts: SolverOptions | None = None) -> np.ndarray:
    """Positive unit eigenvector of the adjacency tensor (H- or Z-kind).

    Meaningful for connected hypergraphs. Among converged eigenpairs with a
    strictly positive vector, the one with the largest eigenvalue is returned,
    normalized to unit 2-norm. Raises NoConvergenceError when no positive
    eigenvector is found.
    """
    if opts is None:
        opts = SolverOptions()
    kind = kind if isinstance(kind, EigenKind) else EigenKind(str(kind).upper())
    a = adjacency_tensor(h)
    if kind is EigenKind.Z:
        pairs = z_eigen_sshopm(a, opts)
    elif kind is EigenKind.H:
        pairs = h_eigen_power(a, opts)
    else:
        raise ValueError(f"centrality is defined for H or Z kinds, got {kind}")
    # strict positivity: components at solver-noise scale (an isolated
    # vertex's coordinate decays to ~tol/lambda, not to exact zero) don't count
    positive = [p for p in pairs if np.min(p.vector) > 1e-8]
    if not positive:
        raise NoConvergenceError("no strictly positive eigenvector found")
    best = max(positive, key=lambda p: p.value)
    return best.vector / np.linalg.norm(best.vector)


def kron_hypergraph(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """Kronecker product hypergraph on vertex pairs (flat id u*n2 + v).

    Edges are all alignments of an edge of H1 with an edge of H2: one edge of
    paired vertices per bijection, |E1|·|E2|·k! in total. The edge support is
    verified against the support of the factor adjacency tensors' Kronecker
    product on every call (an exact index-set identity, no tensors built).
    """
    if h1.k != h2.k:
        raise ShapeError(f"uniformity mismatch: {h1.k} vs {h2.k}")
    k = h1.k
    n2 = h2.n
    edges = []
    for e1 in h1.sorted_edges:
        for e2 in h2.sorted_edges:
            for perm in itertools.permutations(e2):
                edges.append(tuple(sorted(u * n2 + v for u, v in zip(e1, perm))))
    result = Hypergraph(k, h1.n * h2.n, edges)
    expected = len(h1.edges) * len(h2.edges) * math.factorial(k)
    if len(result.edges) != expected:
        raise AssertionError(
            f"product has {len(result.edges)} edges, expected {expected}"
        )
    sup1 = {p for e in h1.edges for p in itertools.permutations(e)}
    sup2 = {p for e in h2.edges for p in itertools.permutations(e)}
    m = (n2,) * k
    s_kron = {kron_index(s, t, m) for s in sup1 for t in sup2}
    s_result = {p for e in result.edges for p in itertools.permutations(e)}
    if s_result != s_kron:
        raise AssertionError("product edge support differs from tensor Kronecker support")
    return result


def kron_adjacency(h1: Hypergraph, h2: Hypergraph) -> np.ndarray:
    """A(H1) ⊗ A(H2), the tensor the Kronecker spectral identities refer to.

    Its nonzero entries are 1/(k-1)!², i.e. adjacency_tensor(kron_hypergraph(
    h1, h2)) divided by (k-1)!.
    """
    if h1.k != h2.k:
        raise ShapeError(f"uniformity mismatch: {h1.k} vs {h2.k}")
    return kron(adjacency_tensor(h1), adjacency_tensor(h2))


def kron_isomorphism_witness(h1: Hypergraph, h2: Hypergraph) -> np.ndarray:
    """Vertex permutation mapping H1⊗H2 onto H2⊗H1: (u, v) to (v, u) in flat ids."""
    if h1.k != h2.k:
        raise ShapeError(f"uniformity mismatch: {h1.k} vs {h2.k}")
    n1, n2 = h1.n, h2.n
    perm = np.empty(n1 * n2, dtype=np.int64)
    for u in range(n1):
        for v in range(n2):
            perm[u * n2 + v] = v * n1 + u
    return perm


def relabel(h: Hypergraph, perm) -> Hypergraph:
    """Apply a vertex permutation (perm[old] = new) to every edge."""
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (h.n,) or sorted(perm.tolist()) != list(range(h.n)):
        raise ValueError(f"not a permutation of 0..{h.n - 1}")
    return Hypergraph(h.k, h.n, [tuple(int(perm[v]) for v in e) for e in h.edges])
