"""Direct-vs-Kronecker runtime benchmark.

For each factor dimension n, two random 3rd-order tensors B and C are drawn
uniform(0,1) (symmetrized for the eigenvalue op) and A = B⊗C is materialized.
The "direct" approach runs the algorithm on A; the "kronecker" approach runs
it on B and C and composes the results. Both approaches call the same solver
code; for CP the factor pair is decomposed jointly (batched sweeps), which is
the point of having two independent small problems. Wall-clock timing wraps
only the algorithm-plus-composition work: sampling, materializing A, and
quality metrics are outside the timers, and the garbage collector is paused
so its pauses do not land inside them. Trials are independently seeded, so
results are identical whether trials run sequentially or in parallel.
"""

from __future__ import annotations

import csv
import gc
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import tensor as tn
from .decomp import cpd_als, cpd_als_many, kron_compose_tt, kron_compose_tucker, reconstruct, ttd
from .kron import element_budget, kron
from .spectral import (EigenKind, SolverOptions, compose_eigen, residual, z_eigen_many,
                       z_eigen_sshopm)

OPERATIONS = ("cpd", "ttd", "zeig")
_OP_CODE = {op: i for i, op in enumerate(OPERATIONS)}

CPD_RANK_DIRECT = 4
CPD_RANK_FACTOR = 2  # 2 per factor composes to the direct rank, 2*2 = 4
TTD_TOL = 1e-10


@dataclass(frozen=True)
class BenchRecord:
    operation: str
    n: int
    approach: str
    trial: int
    seconds: float
    fit_or_residual: float


def _cpd_opts(seed: int) -> SolverOptions:
    # classic ALS stopping protocol (fit change 1e-4, 50 sweeps); identical
    # for both approaches
    return SolverOptions(tol=1e-4, max_iter=50, starts=1, seed=seed)


def _zeig_opts(seed: int) -> SolverOptions:
    # descent runs on these nonnegative instances never reach tol and would
    # burn any budget; 500 leaves the useful (ascent) runs ample headroom
    return SolverOptions(tol=1e-8, max_iter=500, starts=1, shift="frobenius", seed=seed)


def _dominant(pairs):
    return max(pairs, key=lambda p: abs(p.value))


def _rel_err(a: np.ndarray, rec: np.ndarray) -> float:
    return tn.frobenius_norm(a - rec) / tn.frobenius_norm(a)


def _trial(op: str, n: int, seed: int, trial: int) -> list[BenchRecord]:
    rng = np.random.default_rng([seed, _OP_CODE[op], n, trial])
    b = rng.uniform(0.0, 1.0, size=(n, n, n))
    c = rng.uniform(0.0, 1.0, size=(n, n, n))
    seeds = [int(s) for s in rng.integers(2 ** 31, size=3)]
    if op == "zeig":
        b = tn.symmetrize(b)
        c = tn.symmetrize(c)
    a = kron(b, c)

    if op == "ttd":
        t0 = time.perf_counter()
        direct = ttd(a, TTD_TOL)
        direct_s = time.perf_counter() - t0
        t0 = time.perf_counter()
        composed = kron_compose_tt(ttd(b, TTD_TOL), ttd(c, TTD_TOL))
        kron_s = time.perf_counter() - t0
        direct_m = _rel_err(a, reconstruct(direct))
        kron_m = _rel_err(a, reconstruct(composed))
    elif op == "cpd":
        t0 = time.perf_counter()
        direct = cpd_als(a, CPD_RANK_DIRECT, _cpd_opts(seeds[0]))
        direct_s = time.perf_counter() - t0
        t0 = time.perf_counter()
        fb, fc = cpd_als_many([b, c], CPD_RANK_FACTOR, _cpd_opts(seeds[1]))
        composed = kron_compose_tucker(fb, fc)
        kron_s = time.perf_counter() - t0
        direct_m = 1.0 - _rel_err(a, reconstruct(direct))
        kron_m = 1.0 - _rel_err(a, reconstruct(composed))
    else:
        t0 = time.perf_counter()
        direct = _dominant(z_eigen_sshopm(a, _zeig_opts(seeds[0])))
        direct_s = time.perf_counter() - t0
        t0 = time.perf_counter()
        pbs, pcs = z_eigen_many([b, c], _zeig_opts(seeds[1]))
        composed = compose_eigen(_dominant(pbs), _dominant(pcs), EigenKind.Z)
        kron_s = time.perf_counter() - t0
        direct_m = residual(a, direct)
        kron_m = residual(a, composed)

    return [
        BenchRecord(op, n, "direct", trial, max(direct_s, 1e-9), float(direct_m)),
        BenchRecord(op, n, "kronecker", trial, max(kron_s, 1e-9), float(kron_m)),
    ]


def run_benchmark(op: str, n_range=range(4, 9), trials: int = 5, seed: int = 0,
                  parallel_trials: bool = False) -> list[BenchRecord]:
    """Time the direct and kronecker approaches for one operation.

    Composite tensors beyond the materialization budget are skipped with a
    warning. Parallel trials change only the wall-clock numbers, never the
    computed metrics.
    """
    if op not in OPERATIONS:
        raise ValueError(f"unknown operation {op!r}, expected one of {OPERATIONS}")
    records: list[BenchRecord] = []
    was_enabled = gc.isenabled()
    gc.disable()  # collector pauses would land inside the timers
    try:
        for n in n_range:
            if (n * n) ** 3 > element_budget():
                warnings.warn(f"skipping n={n}: composite tensor exceeds element budget", stacklevel=2)
                continue
            if parallel_trials:
                with ThreadPoolExecutor(max_workers=min(trials, 4)) as pool:
                    results = list(pool.map(lambda t: _trial(op, n, seed, t), range(trials)))
            else:
                results = [_trial(op, n, seed, t) for t in range(trials)]
            for pair in results:
                records.extend(pair)
    finally:
        if was_enabled:
            gc.enable()
    return records


def write_bench_csv(records, path) -> None:
    """CSV schema: op,n,approach,trial,seconds,metric (header included)."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["op", "n", "approach", "trial", "seconds", "metric"])
        for r in records:
            w.writerow([r.operation, r.n, r.approach, r.trial,
                        f"{r.seconds:.17g}", f"{r.fit_or_residual:.17g}"])


def read_bench_csv(path) -> list[BenchRecord]:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows or rows[0] != ["op", "n", "approach", "trial", "seconds", "metric"]:
        raise ValueError(f"{path} is not a benchmark CSV")
    return [BenchRecord(op, int(n), approach, int(trial), float(sec), float(metric))
            for op, n, approach, trial, sec, metric in rows[1:]]


def summarize(records) -> dict[tuple[str, int, str], dict[str, float]]:
    """Per (op, n, approach): mean, standard error, and median of seconds."""
    groups: dict[tuple[str, int, str], list[float]] = {}
    for r in records:
        groups.setdefault((r.operation, r.n, r.approach), []).append(r.seconds)
    out = {}
    for key, secs in sorted(groups.items()):
        arr = np.array(secs)
        stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
        out[key] = {"mean": float(arr.mean()), "stderr": stderr,
                    "median": float(np.median(arr)), "trials": float(arr.size)}
    return out
