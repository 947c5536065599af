"""Command line front end.

Subcommands: kron, decomp, eig, hg, dyn, bench. Exit status is 0 on
success, 1 on a domain error (malformed file, infeasible request, failed
convergence), 2 on a usage error. All randomized commands are deterministic
for a fixed --seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import tensor as tn
from . import tensorio as tio
from .decomp import cpd_als, hosvd, odeco, reconstruct, ttd
from .dynamics import (classify_stability_continuous, classify_stability_discrete,
                       simulate_continuous, simulate_discrete)
from .errors import KrontenError
from .hypergraph import (adjacency_tensor, centrality, clique_expansion,
                         degree_vector, kron_hypergraph)
from .kron import kron
from .spectral import (SolverOptions, h_eigen_power, m_eigen_alternating,
                       u_eigen, z_eigen_sshopm)


def _write_or_print(text: str, output) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _read_vector(path) -> np.ndarray:
    v = np.loadtxt(path, dtype=float, ndmin=1)
    return np.asarray(v, dtype=float).ravel()


def _fmt_value(v) -> str:
    if isinstance(v, complex) or np.iscomplexobj(np.asarray(v)):
        v = complex(v)
        if v.imag == 0.0:
            return f"{v.real:.12g}"
        return f"{v.real:.12g}{v.imag:+.12g}j"
    return f"{float(v):.12g}"


def _fmt_vector(x) -> str:
    return "[" + " ".join(_fmt_value(v) for v in np.ravel(x)) + "]"


def _parse_shift(text: str):
    if text in ("adaptive", "frobenius"):
        return text
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"--shift must be a number, 'adaptive', or 'frobenius', got {text!r}") from None


def _solver_options(args, **overrides) -> SolverOptions:
    kw = {
        "tol": getattr(args, "tol", None),
        "max_iter": getattr(args, "max_iter", None),
        "starts": getattr(args, "starts", None),
        "seed": getattr(args, "seed", None),
        "shift": getattr(args, "shift", None),
    }
    kw = {k: v for k, v in kw.items() if v is not None}
    kw.update(overrides)
    return SolverOptions(**kw)


def _cmd_kron(args) -> int:
    a = kron(tio.read_tensor(args.b), tio.read_tensor(args.c))
    _write_or_print(tio.format_tensor(a, args.form), args.output)
    return 0


def _cmd_decomp(args) -> int:
    t = tio.read_tensor(args.tensor)
    if args.method == "hosvd":
        d = hosvd(t)
        print("method hosvd")
        print("core dims " + " ".join(str(s) for s in d.core.shape))
        for p, s in enumerate(d.mode_singular_values):
            print(f"sv{p} " + " ".join(_fmt_value(v) for v in s))
    elif args.method == "ttd":
        tol = 1e-10 if args.tol is None else args.tol
        d = ttd(t, tol)
        err = tn.frobenius_norm(t - reconstruct(d)) / max(tn.frobenius_norm(t), 1.0)
        print("method ttd")
        print("ranks " + " ".join(str(r) for r in d.ranks))
        print(f"relative_error {err:.6g}")
    elif args.method == "cpd":
        if args.rank is None:
            raise ValueError("cpd requires --rank")
        opts = _solver_options(args, starts=args.starts if args.starts is not None else 3,
                               max_iter=args.max_iter if args.max_iter is not None else 500)
        d = cpd_als(t, args.rank, opts)
        idx = np.arange(args.rank)
        weights = d.core[(idx,) * t.ndim]
        print("method cpd")
        print(f"fit {_fmt_value(d.fit)}")
        print(f"converged {int(bool(d.converged))}")
        print("weights " + " ".join(_fmt_value(w) for w in weights))
    else:
        opts = None
        if args.seed is not None or args.tol is not None:
            opts = SolverOptions(tol=args.tol if args.tol is not None else 1e-10,
                                 max_iter=2000, starts=6, shift="frobenius",
                                 seed=args.seed if args.seed is not None else 0)
        d = odeco(t, opts)
        print("method odeco")
        print(f"is_odeco {int(d.is_odeco)}")
        print(f"residual {d.residual:.6g}")
        print("values " + " ".join(_fmt_value(v) for v in d.values))
    if args.output is not None:
        tio.write_decomp(d, args.output)
    return 0


def _cmd_eig(args) -> int:
    t = tio.read_tensor(args.tensor)
    if args.type == "u":
        pairs = u_eigen(t)
    elif args.type == "m":
        for trip in m_eigen_alternating(t, _solver_options(args)):
            print(f"sigma={_fmt_value(trip.value)} residual={trip.residual:.3e} "
                  f"x={_fmt_vector(trip.x)} y={_fmt_vector(trip.y)}")
        return 0
    elif args.type == "h":
        pairs = h_eigen_power(t, _solver_options(args))
    else:
        pairs = z_eigen_sshopm(t, _solver_options(args))
    for p in pairs:
        print(f"lambda={_fmt_value(p.value)} residual={p.residual:.3e} "
              f"x={_fmt_vector(p.vector)}")
    return 0


def _cmd_hg(args) -> int:
    if args.hg_command == "kron":
        g = kron_hypergraph(tio.read_hypergraph(args.g1), tio.read_hypergraph(args.g2))
        _write_or_print(tio.format_hypergraph(g), args.output)
        return 0
    h = tio.read_hypergraph(args.graph)
    if args.hg_command == "degree":
        print(" ".join(f"{v:g}" for v in degree_vector(h)))
    elif args.hg_command == "centrality":
        c = centrality(h, opts=_solver_options(args, shift="frobenius"))
        print(" ".join(_fmt_value(v) for v in c))
    elif args.hg_command == "clique":
        counts, weighted = clique_expansion(h)
        m = counts if args.counts else weighted
        _write_or_print(tio.format_tensor(m), args.output)
    else:
        _write_or_print(tio.format_tensor(adjacency_tensor(h), args.form), args.output)
    return 0


def _cmd_dyn(args) -> int:
    t = tio.read_tensor(args.tensor)
    x0 = _read_vector(args.x0)
    continuous = args.mode == "cont"
    if args.dyn_command == "simulate":
        if continuous:
            traj = simulate_continuous(t, x0, args.t_end, args.dt)
        else:
            traj = simulate_discrete(t, x0, args.steps)
        _write_or_print(tio.format_trajectory_csv(traj), args.output)
        if traj.diverged:
            print(f"warning: trajectory diverged at t={traj.blowup_time:g}", file=sys.stderr)
        return 0
    opts = None
    if args.seed is not None:
        opts = SolverOptions(tol=1e-10, max_iter=2000, starts=6,
                             shift="frobenius", seed=args.seed)
    if continuous:
        result = classify_stability_continuous(t, x0, opts)
    else:
        result = classify_stability_discrete(t, x0, opts)
    # verdict goes first so scripts can read just the first line
    print(result.verdict.value)
    print(f"mode {result.mode.value}")
    for j, ev in enumerate(result.evidence):
        print(f"component {j}: value={_fmt_value(ev.value)} alpha={_fmt_value(ev.alpha)} "
              f"test={_fmt_value(ev.test)} boundary={int(ev.boundary)}")
    return 0


def _cmd_bench(args) -> int:
    if args.n_min < 2 or args.n_min > args.n_max:
        raise ValueError(f"need 2 <= n-min <= n-max, got {args.n_min}..{args.n_max}")
    ops = bench_mod.OPERATIONS if args.op == "all" else (args.op,)
    records = []
    for op in ops:
        records.extend(bench_mod.run_benchmark(
            op, range(args.n_min, args.n_max + 1), trials=args.trials,
            seed=args.seed, parallel_trials=args.parallel_trials))
    for (op, n, approach), s in bench_mod.summarize(records).items():
        print(f"{op} n={n} {approach:<9s} median={s['median']:.6g}s "
              f"mean={s['mean']:.6g}s stderr={s['stderr']:.2g}s")
    if args.output is not None:
        bench_mod.write_bench_csv(records, args.output)
    return 0


def _add_solver_flags(p, default_tol=None, default_starts=None) -> None:
    p.add_argument("--tol", type=float, default=default_tol)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--starts", type=int, default=default_starts)
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kronten",
        description="Kronecker products of tensors and the calculus around them: "
                    "spectra, decompositions, hypergraph products, polynomial dynamics.")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kron", help="Kronecker product of two tensor files")
    k.add_argument("b", help="left factor (.tns)")
    k.add_argument("c", help="right factor (.tns)")
    k.add_argument("-o", "--output", default=None, help="output .tns (stdout if omitted)")
    k.add_argument("--form", choices=["dense", "sparse"], default="dense")
    k.set_defaults(func=_cmd_kron)

    d = sub.add_parser("decomp", help="decompose a tensor")
    d.add_argument("tensor", help="input .tns")
    d.add_argument("--method", choices=["hosvd", "cpd", "ttd", "odeco"], required=True)
    d.add_argument("--rank", type=int, default=None, help="CP rank (cpd only)")
    d.add_argument("-o", "--output", default=None, help="bundle directory to write")
    _add_solver_flags(d)
    d.set_defaults(func=_cmd_decomp)

    e = sub.add_parser("eig", help="tensor eigenpairs")
    e.add_argument("tensor", help="input .tns")
    e.add_argument("--type", choices=["z", "h", "m", "u"], default="z")
    e.add_argument("--shift", type=_parse_shift, default=None)
    _add_solver_flags(e)
    e.set_defaults(func=_cmd_eig)

    h = sub.add_parser("hg", help="uniform hypergraph operations")
    hsub = h.add_subparsers(dest="hg_command", required=True)
    hk = hsub.add_parser("kron", help="Kronecker product of two hypergraphs")
    hk.add_argument("g1")
    hk.add_argument("g2")
    hk.add_argument("-o", "--output", default=None)
    hd = hsub.add_parser("degree", help="vertex degrees")
    hd.add_argument("graph")
    hc = hsub.add_parser("centrality", help="nonnegative eigenvector centrality")
    hc.add_argument("graph")
    _add_solver_flags(hc)
    hq = hsub.add_parser("clique", help="clique-expansion matrix")
    hq.add_argument("graph")
    hq.add_argument("--counts", action="store_true", help="raw co-occurrence counts")
    hq.add_argument("-o", "--output", default=None)
    ha = hsub.add_parser("adj", help="adjacency tensor")
    ha.add_argument("graph")
    ha.add_argument("--form", choices=["dense", "sparse"], default="sparse")
    ha.add_argument("-o", "--output", default=None)
    h.set_defaults(func=_cmd_hg)

    y = sub.add_parser("dyn", help="homogeneous polynomial dynamics")
    ysub = y.add_subparsers(dest="dyn_command", required=True)
    ys = ysub.add_parser("simulate", help="integrate or iterate a trajectory")
    ys.add_argument("tensor")
    ys.add_argument("--x0", required=True, help="initial state file (whitespace floats)")
    ys.add_argument("--mode", choices=["cont", "disc"], required=True)
    ys.add_argument("--steps", type=int, default=100, help="iterations (disc)")
    ys.add_argument("--t-end", type=float, default=10.0, help="horizon (cont)")
    ys.add_argument("--dt", type=float, default=1e-3, help="step size (cont)")
    ys.add_argument("-o", "--output", default=None, help="trajectory CSV")
    yt = ysub.add_parser("stability", help="classify the origin")
    yt.add_argument("tensor")
    yt.add_argument("--x0", required=True)
    yt.add_argument("--mode", choices=["cont", "disc"], required=True)
    yt.add_argument("--seed", type=int, default=None)
    y.set_defaults(func=_cmd_dyn)

    b = sub.add_parser("bench", help="direct vs kronecker benchmark")
    b.add_argument("--op", choices=list(bench_mod.OPERATIONS) + ["all"], default="all")
    b.add_argument("--n-min", type=int, default=4)
    b.add_argument("--n-max", type=int, default=8)
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--parallel-trials", action="store_true")
    b.add_argument("-o", "--output", default=None, help="records CSV")
    b.set_defaults(func=_cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (KrontenError, ValueError, OSError, np.linalg.LinAlgError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
