"""Command line behaviour: exit codes, output shapes, determinism."""

import subprocess

import numpy as np
import pytest

import kronten as kt
from kronten.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def tensors(tmp_path):
    rng = np.random.default_rng(70)
    b = rng.standard_normal((2, 2, 2))
    c = rng.standard_normal((2, 2, 2))
    kt.write_tensor(b, tmp_path / "b.tns")
    kt.write_tensor(c, tmp_path / "c.tns")
    return b, c


class TestKronCommand:
    def test_writes_product(self, tmp_path, tensors, capsys):
        b, c = tensors
        out = tmp_path / "a.tns"
        code, _, err = run(capsys, "kron", str(tmp_path / "b.tns"),
                           str(tmp_path / "c.tns"), "-o", str(out))
        assert code == 0 and err == ""
        assert np.array_equal(kt.read_tensor(out), kt.kron(b, c))

    def test_stdout_parses(self, tmp_path, tensors, capsys):
        b, c = tensors
        code, text, _ = run(capsys, "kron", str(tmp_path / "b.tns"),
                            str(tmp_path / "c.tns"))
        assert code == 0
        echo = tmp_path / "echo.tns"
        echo.write_text(text)
        assert np.array_equal(kt.read_tensor(echo), kt.kron(b, c))


class TestDecompCommand:
    def test_ttd_ranks_multiply(self, tmp_path, tensors, capsys):
        b, c = tensors
        a = tmp_path / "a.tns"
        run(capsys, "kron", str(tmp_path / "b.tns"), str(tmp_path / "c.tns"),
            "-o", str(a))
        code, out, _ = run(capsys, "decomp", str(a), "--method", "ttd", "--tol", "0")
        assert code == 0
        ranks_line = next(l for l in out.splitlines() if l.startswith("ranks "))
        got = tuple(int(r) for r in ranks_line.split()[1:])
        rb, rc = kt.ttd(b, 0.0).ranks, kt.ttd(c, 0.0).ranks
        assert got == tuple(x * y for x, y in zip(rb, rc))

    def test_hosvd_report(self, tmp_path, tensors, capsys):
        code, out, _ = run(capsys, "decomp", str(tmp_path / "b.tns"),
                           "--method", "hosvd")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "method hosvd"
        assert lines[1].startswith("core dims ")
        assert sum(l.startswith("sv") for l in lines) == 3

    def test_odeco_bundle_output(self, tmp_path, capsys):
        t = tmp_path / "stable.tns"
        kt.write_tensor(kt.stable_cubic_tensor(), t)
        bundle = tmp_path / "bundle"
        code, out, _ = run(capsys, "decomp", str(t), "--method", "odeco",
                           "--seed", "0", "-o", str(bundle))
        assert code == 0
        assert "is_odeco 1" in out
        back = kt.read_decomp(bundle)
        assert np.array_equal(np.sort(np.round(back.values, 6)), [-2.0, -1.0])

    def test_cpd_needs_rank(self, tmp_path, tensors, capsys):
        code, _, err = run(capsys, "decomp", str(tmp_path / "b.tns"),
                           "--method", "cpd")
        assert code == 1
        assert err.startswith("error:")


class TestEigCommand:
    def test_deterministic_output(self, tmp_path, capsys):
        rng = np.random.default_rng(71)
        t = kt.symmetrize(rng.standard_normal((3, 3, 3)))
        p = tmp_path / "t.tns"
        kt.write_tensor(t, p)
        code, first, _ = run(capsys, "eig", str(p), "--seed", "3")
        assert code == 0
        code, second, _ = run(capsys, "eig", str(p), "--seed", "3")
        assert code == 0
        assert first == second
        assert first.splitlines()[0].startswith("lambda=")

    def test_u_type(self, tmp_path, capsys):
        rng = np.random.default_rng(72)
        p = tmp_path / "t.tns"
        kt.write_tensor(rng.standard_normal((2, 2, 3, 3)), p)
        code, out, _ = run(capsys, "eig", str(p), "--type", "u")
        assert code == 0
        assert len(out.splitlines()) == 6


class TestHgCommand:
    @pytest.fixture
    def graphs(self, tmp_path):
        h1 = kt.Hypergraph(3, 3, [(0, 1, 2)])
        h2 = kt.Hypergraph(3, 4, [(0, 1, 2), (1, 2, 3)])
        kt.write_hypergraph(h1, tmp_path / "h1.hg")
        kt.write_hypergraph(h2, tmp_path / "h2.hg")
        return h1, h2

    def test_degree(self, tmp_path, graphs, capsys):
        code, out, _ = run(capsys, "hg", "degree", str(tmp_path / "h2.hg"))
        assert code == 0
        assert out.split() == ["1", "2", "2", "1"]

    def test_kron(self, tmp_path, graphs, capsys):
        h1, h2 = graphs
        out_path = tmp_path / "prod.hg"
        code, _, _ = run(capsys, "hg", "kron", str(tmp_path / "h1.hg"),
                         str(tmp_path / "h2.hg"), "-o", str(out_path))
        assert code == 0
        back = kt.read_hypergraph(out_path)
        assert back.sorted_edges == kt.kron_hypergraph(h1, h2).sorted_edges

    def test_adjacency_stdout(self, tmp_path, graphs, capsys):
        h1, _ = graphs
        code, text, _ = run(capsys, "hg", "adj", str(tmp_path / "h1.hg"))
        assert code == 0
        echo = tmp_path / "adj.tns"
        echo.write_text(text)
        assert np.array_equal(kt.read_tensor(echo), kt.adjacency_tensor(h1))

    def test_centrality_complete(self, tmp_path, capsys):
        h = kt.complete_hypergraph(4, 3)
        kt.write_hypergraph(h, tmp_path / "k4.hg")
        code, out, _ = run(capsys, "hg", "centrality", str(tmp_path / "k4.hg"),
                           "--seed", "0")
        assert code == 0
        vals = np.array([float(v) for v in out.split()])
        assert np.max(np.abs(vals - 0.5)) <= 1e-6


class TestDynCommand:
    def test_stability_verdict_first_line(self, tmp_path, capsys):
        t = tmp_path / "stable.tns"
        kt.write_tensor(kt.stable_cubic_tensor(), t)
        x0 = tmp_path / "x0.txt"
        x0.write_text("0.6 0.8\n")
        code, out, _ = run(capsys, "dyn", "stability", str(t), "--x0", str(x0),
                           "--mode", "cont", "--seed", "0")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "AsymptoticallyStable"
        assert lines[1] == "mode continuous"
        assert lines[2].startswith("component 0:")
        assert "boundary=0" in lines[2]

    def test_discrete_zero_tensor(self, tmp_path, capsys):
        t = tmp_path / "zero.tns"
        kt.write_tensor(np.zeros((2, 2, 2)), t)
        x0 = tmp_path / "x0.txt"
        x0.write_text("1.0\n0.0\n")
        code, out, _ = run(capsys, "dyn", "stability", str(t), "--x0", str(x0),
                           "--mode", "disc")
        assert code == 0
        assert out.splitlines()[0] == "Stable"
        assert out.splitlines()[1] == "mode discrete"

    def test_simulate_writes_csv(self, tmp_path, capsys):
        t = tmp_path / "sq.tns"
        one = np.zeros((1, 1, 1))
        one[0, 0, 0] = 1.0
        kt.write_tensor(one, t)
        x0 = tmp_path / "x0.txt"
        x0.write_text("0.5\n")
        out_csv = tmp_path / "traj.csv"
        code, _, err = run(capsys, "dyn", "simulate", str(t), "--x0", str(x0),
                           "--mode", "disc", "--steps", "3", "-o", str(out_csv))
        assert code == 0 and err == ""
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "t,x_0"
        assert [float(l.split(",")[1]) for l in lines[1:]] == [0.5, 0.25, 0.0625, 0.0625 ** 2]

    def test_divergence_warns_on_stderr(self, tmp_path, capsys):
        t = tmp_path / "cube.tns"
        grow = np.zeros((1, 1, 1, 1))
        grow[0, 0, 0, 0] = 1.0
        kt.write_tensor(grow, t)
        x0 = tmp_path / "x0.txt"
        x0.write_text("1.0\n")
        code, out, err = run(capsys, "dyn", "simulate", str(t), "--x0", str(x0),
                             "--mode", "cont", "--t-end", "1.0", "--dt", "0.001")
        assert code == 0
        assert "diverged" in err
        assert out.splitlines()[0] == "t,x_0"


class TestBenchCommand:
    def test_small_run(self, tmp_path, capsys):
        csv_path = tmp_path / "bench.csv"
        code, out, _ = run(capsys, "bench", "--op", "ttd", "--n-min", "2",
                           "--n-max", "2", "--trials", "2", "-o", str(csv_path))
        assert code == 0
        lines = out.splitlines()
        assert any(l.startswith("ttd n=2 direct") for l in lines)
        assert any(l.startswith("ttd n=2 kronecker") for l in lines)
        from kronten.bench import read_bench_csv
        assert len(read_bench_csv(csv_path)) == 4

    def test_bad_range(self, capsys):
        code, _, err = run(capsys, "bench", "--n-min", "1", "--n-max", "0")
        assert code == 1
        assert err.startswith("error:")


class TestExitCodes:
    def test_usage_error_is_two(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2
        assert run(capsys, "decomp")[0] == 2

    def test_missing_file_is_one(self, tmp_path, capsys):
        code, _, err = run(capsys, "decomp", str(tmp_path / "absent.tns"),
                           "--method", "hosvd")
        assert code == 1
        assert err.startswith("error:")

    def test_malformed_file_is_one(self, tmp_path, capsys):
        p = tmp_path / "bad.tns"
        p.write_text("TNS1 dense\norder 1\ndims 2\n1\n")
        code, _, err = run(capsys, "decomp", str(p), "--method", "hosvd")
        assert code == 1
        assert "error:" in err and "line" in err

    def test_console_script_installed(self):
        proc = subprocess.run(["kronten", "--help"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "kron" in proc.stdout
