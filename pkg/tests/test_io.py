"""Text formats: TNS1 tensors, HG1 hypergraphs, decomposition bundles,
trajectory CSV."""

import numpy as np
import pytest

import kronten as kt
from kronten.errors import ParseError


def parse_error_line(tmp_path, text, reader=kt.read_tensor, name="bad.tns"):
    p = tmp_path / name
    p.write_text(text)
    with pytest.raises(ParseError) as ei:
        reader(p)
    return ei.value.line


class TestTensorRoundtrip:
    def test_dense_bit_exact(self, tmp_path):
        rng = np.random.default_rng(90)
        t = rng.standard_normal((3, 4, 2))
        t[0, 0, 0] = 1.0 / 3.0
        t[1, 2, 1] = 1e-300
        p = tmp_path / "t.tns"
        kt.write_tensor(t, p)
        back = kt.read_tensor(p)
        assert back.shape == t.shape
        assert np.array_equal(back, t)

    def test_vector_roundtrip(self, tmp_path):
        p = tmp_path / "v.tns"
        kt.write_tensor([1.0, -2.5, 0.125], p)
        assert np.array_equal(kt.read_tensor(p), [1.0, -2.5, 0.125])

    def test_sparse_roundtrip(self, tmp_path):
        h = kt.Hypergraph(3, 3, [(0, 1, 2)])
        a = kt.adjacency_tensor(h)
        p = tmp_path / "a.tns"
        kt.write_tensor(a, p, form="sparse")
        text = p.read_text()
        assert text.splitlines()[0] == "TNS1 sparse"
        assert "nnz 6" in text
        assert np.array_equal(kt.read_tensor(p), a)

    def test_forms_agree(self, tmp_path):
        rng = np.random.default_rng(91)
        t = rng.standard_normal((2, 3))
        t[t < 0] = 0.0
        kt.write_tensor(t, tmp_path / "d.tns", form="dense")
        kt.write_tensor(t, tmp_path / "s.tns", form="sparse")
        assert np.array_equal(kt.read_tensor(tmp_path / "d.tns"),
                              kt.read_tensor(tmp_path / "s.tns"))

    def test_write_rejects_bad_input(self, tmp_path):
        with pytest.raises(ValueError):
            kt.format_tensor(np.array(3.0))
        with pytest.raises(ValueError):
            kt.format_tensor(np.array([1.0, np.inf]))
        with pytest.raises(ValueError):
            kt.format_tensor(np.ones(2), form="binary")


class TestTensorParseErrors:
    def test_bad_header(self, tmp_path):
        assert parse_error_line(tmp_path, "TNS2 dense\norder 1\ndims 1\n0\n") == 1

    def test_bad_order_line(self, tmp_path):
        assert parse_error_line(tmp_path, "TNS1 dense\nrank 1\ndims 1\n0\n") == 2

    def test_dims_count_mismatch(self, tmp_path):
        assert parse_error_line(tmp_path, "TNS1 dense\norder 2\ndims 3\n0\n") == 3

    def test_zero_dim_rejected(self, tmp_path):
        assert parse_error_line(tmp_path, "TNS1 dense\norder 2\ndims 2 0\n") == 3

    def test_too_few_values(self, tmp_path):
        text = "TNS1 dense\norder 1\ndims 3\n1 2\n"
        assert parse_error_line(tmp_path, text) == 4

    def test_too_many_values(self, tmp_path):
        text = "TNS1 dense\norder 1\ndims 2\n1 2\n3\n"
        assert parse_error_line(tmp_path, text) == 5

    def test_non_finite_value(self, tmp_path):
        text = "TNS1 dense\norder 1\ndims 2\n1 inf\n"
        assert parse_error_line(tmp_path, text) == 4

    def test_bad_number(self, tmp_path):
        text = "TNS1 dense\norder 1\ndims 2\n1 two\n"
        assert parse_error_line(tmp_path, text) == 4

    def test_sparse_missing_nnz(self, tmp_path):
        assert parse_error_line(tmp_path, "TNS1 sparse\norder 1\ndims 2\n0 1\n") == 4

    def test_sparse_index_out_of_range(self, tmp_path):
        text = "TNS1 sparse\norder 2\ndims 2 2\nnnz 1\n0 5 1.0\n"
        assert parse_error_line(tmp_path, text) == 5

    def test_sparse_duplicate_index(self, tmp_path):
        text = "TNS1 sparse\norder 2\ndims 2 2\nnnz 2\n0 1 1.0\n0 1 2.0\n"
        assert parse_error_line(tmp_path, text) == 6

    def test_sparse_count_mismatch(self, tmp_path):
        text = "TNS1 sparse\norder 2\ndims 2 2\nnnz 2\n0 1 1.0\n"
        assert parse_error_line(tmp_path, text) == 5


class TestHypergraphIO:
    def test_roundtrip(self, tmp_path):
        h = kt.Hypergraph(3, 4, [(0, 1, 2), (1, 2, 3)])
        p = tmp_path / "h.hg"
        kt.write_hypergraph(h, p)
        back = kt.read_hypergraph(p)
        assert back.k == h.k and back.n == h.n
        assert back.sorted_edges == h.sorted_edges

    def test_no_edges(self, tmp_path):
        p = tmp_path / "h.hg"
        kt.write_hypergraph(kt.Hypergraph(2, 3, []), p)
        assert len(kt.read_hypergraph(p).sorted_edges) == 0

    def test_kron_product_roundtrips(self, tmp_path):
        h1 = kt.Hypergraph(3, 3, [(0, 1, 2)])
        h2 = kt.Hypergraph(3, 4, [(0, 1, 2), (1, 2, 3)])
        prod = kt.kron_hypergraph(h1, h2)
        p = tmp_path / "prod.hg"
        kt.write_hypergraph(prod, p)
        back = kt.read_hypergraph(p)
        assert back.sorted_edges == prod.sorted_edges
        assert back.n == prod.n

    def test_errors_carry_line_numbers(self, tmp_path):
        rd = kt.read_hypergraph
        assert parse_error_line(tmp_path, "", rd, "e.hg") == 0
        assert parse_error_line(tmp_path, "HG 3 4\n", rd, "e.hg") == 1
        assert parse_error_line(tmp_path, "HG1 3 4\n0 1\n", rd, "e.hg") == 2
        assert parse_error_line(tmp_path, "HG1 3 4\n0 1 9\n", rd, "e.hg") == 2
        assert parse_error_line(tmp_path, "HG1 3 4\n0 1 1\n", rd, "e.hg") == 2
        assert parse_error_line(tmp_path, "HG1 3 4\n0 2 1\n", rd, "e.hg") == 2
        assert parse_error_line(
            tmp_path, "HG1 3 4\n0 1 2\n0 1 2\n", rd, "e.hg") == 3


class TestDecompBundles:
    def test_hosvd_bundle(self, tmp_path):
        rng = np.random.default_rng(92)
        d = kt.hosvd(rng.standard_normal((3, 3, 3)))
        kt.write_decomp(d, tmp_path / "hosvd")
        back = kt.read_decomp(tmp_path / "hosvd")
        assert back.flavor is kt.TuckerFlavor.HOSVD
        assert np.array_equal(back.core, d.core)
        for u, v in zip(back.factors, d.factors):
            assert np.array_equal(u, v)
        for s, w in zip(back.mode_singular_values, d.mode_singular_values):
            assert np.array_equal(s, w)

    def test_cp_bundle_drops_diagnostics(self, tmp_path):
        rng = np.random.default_rng(93)
        u = rng.standard_normal((3, 1))
        t = kt.reconstruct(kt.TuckerDecomp(np.full((1, 1, 1), 2.0), (u, u, u),
                                           kt.TuckerFlavor.CP))
        d = kt.cpd_als(t, 1, kt.SolverOptions(seed=5))
        assert d.fit is not None
        kt.write_decomp(d, tmp_path / "cp")
        back = kt.read_decomp(tmp_path / "cp")
        assert back.flavor is kt.TuckerFlavor.CP
        assert back.fit is None and back.error_history is None
        assert np.array_equal(back.core, d.core)
        assert np.array_equal(kt.reconstruct(back), kt.reconstruct(d))

    def test_tt_bundle(self, tmp_path):
        rng = np.random.default_rng(94)
        d = kt.ttd(rng.standard_normal((2, 3, 2, 3)), 0.0)
        kt.write_decomp(d, tmp_path / "tt")
        back = kt.read_decomp(tmp_path / "tt")
        assert back.ranks == d.ranks
        for a, b in zip(back.cores, d.cores):
            assert np.array_equal(a, b)

    def test_odeco_bundle(self, tmp_path):
        d = kt.odeco(kt.stable_cubic_tensor())
        kt.write_decomp(d, tmp_path / "od")
        back = kt.read_decomp(tmp_path / "od")
        assert back.is_odeco == d.is_odeco
        assert back.order == d.order
        assert back.residual == d.residual
        assert np.array_equal(back.values, d.values)
        assert np.array_equal(back.vectors, d.vectors)

    def test_empty_odeco_bundle(self, tmp_path):
        d = kt.odeco(np.zeros((2, 2, 2)))
        kt.write_decomp(d, tmp_path / "od0")
        back = kt.read_decomp(tmp_path / "od0")
        assert back.values.size == 0
        assert back.is_odeco

    def test_bundle_errors(self, tmp_path):
        with pytest.raises(TypeError):
            kt.write_decomp("not a decomposition", tmp_path / "x")
        with pytest.raises(ParseError):
            kt.read_decomp(tmp_path)  # no meta file
        bad = tmp_path / "bad"
        bad.mkdir()
        (bad / "meta").write_text("KDEC1 wavelet\n")
        with pytest.raises(ParseError):
            kt.read_decomp(bad)


class TestTrajectoryCsv:
    def test_header_and_precision(self):
        t = np.zeros((1, 1, 1))
        t[0, 0, 0] = 2.0 / 3.0
        traj = kt.simulate_discrete(t, [1.0], 2)
        text = kt.format_trajectory_csv(traj)
        lines = text.splitlines()
        assert lines[0] == "t,x_0"
        assert len(lines) == 4
        # 17 significant digits reparse to the identical double
        for line, t_want, x_want in zip(lines[1:], traj.times, traj.states[:, 0]):
            t_tok, x_tok = line.split(",")
            assert float(t_tok) == t_want
            assert float(x_tok) == x_want

    def test_multi_component_header(self, tmp_path):
        rng = np.random.default_rng(95)
        b = kt.stable_cubic_tensor()
        traj = kt.simulate_continuous(b, rng.standard_normal(2), 0.1, dt=0.05)
        p = tmp_path / "traj.csv"
        kt.write_trajectory_csv(traj, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "t,x_0,x_1"
        assert len(lines) == 1 + traj.times.size
