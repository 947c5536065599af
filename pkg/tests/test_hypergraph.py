"""Uniform hypergraphs, adjacency bridge, Kronecker product, statistics."""

import itertools
import math

import numpy as np
import pytest

import kronten as kt
from kronten.errors import NoConvergenceError, ShapeError

import oracles


def path_like() -> kt.Hypergraph:
    return kt.Hypergraph(3, 4, [(0, 1, 2), (1, 2, 3)])


def single_edge(n=3, k=3) -> kt.Hypergraph:
    return kt.Hypergraph(k, n, [tuple(range(k))])


class TestHypergraphType:
    def test_normalizes_edges(self):
        h = kt.Hypergraph(3, 4, [(2, 0, 1)])
        assert h.sorted_edges == [(0, 1, 2)]

    def test_rejects_bad_edges(self):
        with pytest.raises(ValueError):
            kt.Hypergraph(3, 4, [(0, 1)])
        with pytest.raises(ValueError):
            kt.Hypergraph(3, 4, [(0, 1, 1)])
        with pytest.raises(ValueError):
            kt.Hypergraph(3, 4, [(0, 1, 4)])
        with pytest.raises(ValueError):
            kt.Hypergraph(3, 4, [(0, 1, 2), (2, 1, 0)])

    def test_product_vertex_bijection(self):
        for flat in range(12):
            pv = kt.ProductVertex.from_flat(flat, 4)
            assert pv.flat == flat


class TestAdjacency:
    def test_empty(self):
        h = kt.Hypergraph(3, 2, [])
        assert np.array_equal(kt.adjacency_tensor(h), np.zeros((2, 2, 2)))

    def test_single_edge_entries(self):
        a = kt.adjacency_tensor(single_edge())
        nz = np.nonzero(a)
        assert len(nz[0]) == 6
        assert np.all(a[nz] == 0.5)
        for perm in itertools.permutations((0, 1, 2)):
            assert a[perm] == 0.5

    def test_matches_oracle(self):
        h = path_like()
        a = kt.adjacency_tensor(h)
        want = oracles.adjacency_oracle(h.sorted_edges, 3, 4)
        assert np.array_equal(a, want)

    def test_supersymmetric_with_counted_support(self):
        rng = np.random.default_rng(70)
        h = kt.random_hypergraph(5, 3, 4, rng)
        a = kt.adjacency_tensor(h)
        assert kt.structure_check(a, kt.StructureKind.SUPERSYMMETRIC, tol=0.0)
        nz = np.nonzero(a)
        assert len(nz[0]) == len(h.edges) * math.factorial(3)
        assert np.all(a[nz] == 1.0 / math.factorial(2))


class TestDegree:
    def test_single_edge(self):
        assert np.array_equal(kt.degree_vector(single_edge()), np.ones(3))

    def test_regular(self):
        h = kt.complete_hypergraph(4, 3)
        d = kt.degree_vector(h)
        assert np.all(d == 3.0)  # each vertex in C(3,2) edges

    def test_equals_tensor_contraction_and_counts(self):
        rng = np.random.default_rng(71)
        h = kt.random_hypergraph(5, 3, 4, rng)
        d = kt.degree_vector(h)
        a = kt.adjacency_tensor(h)
        assert np.max(np.abs(d - kt.apply_polynomial(a, np.ones(5)))) <= 1e-12
        counts = oracles.degree_oracle(h.sorted_edges, 5)
        assert np.max(np.abs(d - counts)) <= 1e-12

    def test_kron_degree_separates(self):
        h1 = single_edge()
        h2 = path_like()
        big = kt.kron_adjacency(h1, h2)
        d = kt.apply_polynomial(big, np.ones(12))
        want = np.kron(kt.degree_vector(h1), kt.degree_vector(h2))
        assert np.max(np.abs(d - want)) <= 1e-12

    def test_regular_kron_regular(self):
        h1 = kt.complete_hypergraph(4, 3)  # 3-regular
        h2 = single_edge()  # 1-regular
        d = kt.apply_polynomial(kt.kron_adjacency(h1, h2), np.ones(12))
        assert np.max(np.abs(d - 3.0)) <= 1e-12


class TestCliqueExpansion:
    def test_single_edge(self):
        counts, weighted = kt.clique_expansion(single_edge())
        want = np.zeros((3, 3))
        for u, v in [(0, 1), (0, 2), (1, 2)]:
            want[u, v] = want[v, u] = 1.0
        assert np.array_equal(counts, want)
        assert np.max(np.abs(weighted - want / 2)) <= 1e-12

    def test_empty(self):
        counts, weighted = kt.clique_expansion(kt.Hypergraph(3, 2, []))
        assert not counts.any()
        assert not weighted.any()

    def test_count_matches_oracle(self):
        rng = np.random.default_rng(72)
        h = kt.random_hypergraph(5, 3, 4, rng)
        counts, weighted = kt.clique_expansion(h)
        want = oracles.clique_count_oracle(h.sorted_edges, 5)
        assert np.array_equal(counts, want)
        assert np.max(np.abs(weighted - want / 2)) <= 1e-12

    def test_kron_identity_on_tensor_view(self):
        h1, h2 = single_edge(), path_like()
        _, w1 = kt.clique_expansion(h1)
        _, w2 = kt.clique_expansion(h2)
        big = kt.kron_adjacency(h1, h2)
        contracted = big.sum(axis=tuple(range(2, 3)))
        assert np.max(np.abs(contracted - np.kron(w1, w2))) <= 1e-12


class TestKronHypergraph:
    def test_single_edge_pair_count(self):
        h = kt.kron_hypergraph(single_edge(), single_edge())
        assert len(h.edges) == 6
        assert h.n == 9
        assert h.k == 3

    def test_edge_count_formula(self):
        h1 = kt.Hypergraph(3, 4, [(0, 1, 2), (1, 2, 3)])
        h2 = kt.Hypergraph(3, 5, [(0, 1, 2), (1, 2, 3), (2, 3, 4)])
        h = kt.kron_hypergraph(h1, h2)
        assert len(h.edges) == 2 * 3 * math.factorial(3)  # 36

    def test_randomized_edge_counts(self):
        rng = np.random.default_rng(73)
        for _ in range(10):
            k = int(rng.integers(2, 5))
            h1 = kt.random_hypergraph(k + 2, k, int(rng.integers(1, 4)), rng)
            h2 = kt.random_hypergraph(k + 1, k, int(rng.integers(1, 4)), rng)
            h = kt.kron_hypergraph(h1, h2)
            assert len(h.edges) == len(h1.edges) * len(h2.edges) * math.factorial(k)

    def test_support_equals_tensor_kron(self):
        h1, h2 = single_edge(), path_like()
        h = kt.kron_hypergraph(h1, h2)
        a = kt.adjacency_tensor(h)
        big = kt.kron_adjacency(h1, h2)
        assert np.array_equal(a != 0, big != 0)
        # entries differ by exactly (k-1)! between the two conventions
        nz = big != 0
        assert np.max(np.abs(a[nz] / big[nz] - math.factorial(2))) <= 1e-12

    def test_k2_reduces_to_graph_rule(self):
        g1 = kt.Hypergraph(2, 3, [(0, 1), (1, 2)])
        g2 = kt.Hypergraph(2, 2, [(0, 1)])
        h = kt.kron_hypergraph(g1, g2)
        a1 = np.zeros((3, 3))
        for u, v in g1.sorted_edges:
            a1[u, v] = a1[v, u] = 1.0
        a2 = np.zeros((2, 2))
        for u, v in g2.sorted_edges:
            a2[u, v] = a2[v, u] = 1.0
        want = np.kron(a1, a2) != 0
        got = kt.adjacency_tensor(h) != 0
        assert np.array_equal(got, want)

    def test_uniformity_mismatch(self):
        with pytest.raises(ShapeError):
            kt.kron_hypergraph(single_edge(k=3), kt.Hypergraph(2, 3, [(0, 1)]))


class TestIsomorphismWitness:
    def test_swapped_factors_match(self):
        h1 = single_edge(n=3)
        h2 = single_edge(n=4)
        perm = kt.kron_isomorphism_witness(h1, h2)
        left = kt.relabel(kt.kron_hypergraph(h1, h2), perm)
        right = kt.kron_hypergraph(h2, h1)
        assert left.edges == right.edges

    def test_same_factor_automorphism(self):
        h = path_like()
        perm = kt.kron_isomorphism_witness(h, h)
        prod = kt.kron_hypergraph(h, h)
        assert kt.relabel(prod, perm).edges == prod.edges

    def test_trivial_factor_gives_identity(self):
        h1 = single_edge()
        h2 = kt.Hypergraph(3, 1, [])
        perm = kt.kron_isomorphism_witness(h1, h2)
        assert np.array_equal(perm, np.arange(3))

    def test_relabel_validates(self):
        with pytest.raises(ValueError):
            kt.relabel(single_edge(), [0, 0, 1])


def zeigen_apply(edges, x):
    """A(H) x^{k-1} at each vertex: sum over containing edges of the product
    of the other vertices' coordinates (the 1/(k-1)! weights cancel)."""
    out = np.zeros(len(x))
    for e in edges:
        for v in e:
            prod = 1.0
            for u in e:
                if u != v:
                    prod *= x[u]
            out[v] += prod
    return out


def centrality_oracle(edges, n):
    """Positive unit Z-eigenvector by dense grid search plus pattern refinement."""

    def resid(x):
        g = zeigen_apply(edges, x)
        lam = float(x @ g)
        return float(np.linalg.norm(g - lam * x))

    best = None
    grid = np.linspace(0.05, 1.0, 8)
    for raw in itertools.product(grid, repeat=n):
        x = np.array(raw)
        x /= np.linalg.norm(x)
        r = resid(x)
        if best is None or r < best[0]:
            best = (r, x)
    r_best, x = best
    step = 0.2
    for _ in range(400):
        improved = False
        for i in range(n):
            for sgn in (1.0, -1.0):
                cand = x.copy()
                cand[i] = max(cand[i] + sgn * step, 1e-9)
                cand /= np.linalg.norm(cand)
                r = resid(cand)
                if r < r_best:
                    r_best, x = r, cand
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-14:
                break
    return x


class TestCentrality:
    def test_regular_is_uniform(self):
        h = kt.complete_hypergraph(4, 3)
        c = kt.centrality(h, "z", kt.SolverOptions(starts=6, seed=74))
        assert np.max(np.abs(c - 0.5)) <= 1e-8  # 1/sqrt(4)

    def test_path_like_matches_polynomial_solve(self):
        h = path_like()
        c = kt.centrality(h, "z", kt.SolverOptions(starts=8, seed=75))
        want = centrality_oracle(h.sorted_edges, 4)
        assert np.linalg.norm(c - want) <= 1e-6

    def test_h_kind_positive(self):
        h = path_like()
        c = kt.centrality(h, "h", kt.SolverOptions(starts=6, seed=76))
        assert np.min(c) > 0
        assert abs(np.linalg.norm(c) - 1.0) <= 1e-10

    def test_kron_centrality_separates(self):
        h1 = single_edge()
        h2 = path_like()
        opts = kt.SolverOptions(starts=8, seed=77, shift="frobenius")
        c1 = kt.centrality(h1, "z", opts)
        c2 = kt.centrality(h2, "z", opts)
        composed = np.kron(c1, c2)
        # composed vector solves the eigen equation on the canonical product tensor
        big = kt.kron_adjacency(h1, h2)
        g = kt.apply_polynomial(big, composed)
        lam = float(composed @ g)
        assert np.linalg.norm(g - lam * composed) <= 1e-8
        direct = kt.centrality(kt.kron_hypergraph(h1, h2), "z", opts)
        assert np.linalg.norm(direct - composed) <= 1e-6

    def test_no_positive_vector_is_explicit(self):
        # isolated vertex 3: any eigenpair with nonzero value has x_3 = 0,
        # so no strictly positive eigenvector exists
        h = kt.Hypergraph(3, 4, [(0, 1, 2)])
        with pytest.raises(NoConvergenceError):
            kt.centrality(h, "z", kt.SolverOptions(starts=4, seed=78))

    def test_rejects_other_kinds(self):
        with pytest.raises(ValueError):
            kt.centrality(single_edge(), "u")
