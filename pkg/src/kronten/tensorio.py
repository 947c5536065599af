"""File formats: TNS1 tensors, HG1 hypergraphs, trajectory CSV, and
decomposition bundle directories.

All numbers are printed with 17 significant digits, so write-then-read
roundtrips are bit-exact for finite doubles. Non-finite values are rejected
in both directions.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np

from . import tensor as tn
from .decomp import OdecoDecomp, TTDecomp, TuckerDecomp, TuckerFlavor
from .dynamics import Trajectory
from .errors import ParseError
from .hypergraph import Hypergraph


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _require_finite(t: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(t)):
        raise ValueError(f"{what} contains non-finite values")


def _parse_float(tok: str, line: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"bad number {tok!r}", line=line) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {tok!r}", line=line)
    return v


def _parse_int(tok: str, line: int, what: str = "integer") -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", line=line) from None


def format_tensor(t, form: str = "dense") -> str:
    """Render a tensor as TNS1 text ("dense" or "sparse")."""
    t = tn.as_tensor(t)
    if t.ndim < 1:
        raise ValueError("TNS1 stores tensors of order >= 1")
    _require_finite(t, "tensor")
    if form not in ("dense", "sparse"):
        raise ValueError(f"form must be 'dense' or 'sparse', got {form!r}")
    lines = [
        f"TNS1 {form}",
        f"order {t.ndim}",
        "dims " + " ".join(str(d) for d in t.shape),
    ]
    if form == "dense":
        for row in t.reshape(-1, t.shape[-1]):
            lines.append(" ".join(_fmt(v) for v in row))
    else:
        nz = np.argwhere(t != 0.0)
        lines.append(f"nnz {nz.shape[0]}")
        for idx in nz:
            key = tuple(int(i) for i in idx)
            lines.append(" ".join(str(i) for i in key) + " " + _fmt(t[key]))
    return "\n".join(lines) + "\n"


def write_tensor(t, path, form: str = "dense") -> None:
    Path(path).write_text(format_tensor(t, form))


def read_tensor(path) -> np.ndarray:
    """Read a TNS1 file (dense or sparse; sparse entries are densified).

    Malformed headers, dimension or count mismatches, out-of-range or
    duplicate sparse indices, and non-finite literals raise ParseError with
    the offending line number.
    """
    lines = Path(path).read_text().splitlines()
    if len(lines) < 3:
        raise ParseError("truncated file, expected at least 3 header lines", line=len(lines))
    head = lines[0].split()
    if len(head) != 2 or head[0] != "TNS1" or head[1] not in ("dense", "sparse"):
        raise ParseError(f"bad header {lines[0]!r}, expected 'TNS1 dense|sparse'", line=1)
    form = head[1]
    order_line = lines[1].split()
    if len(order_line) != 2 or order_line[0] != "order":
        raise ParseError(f"expected 'order k', got {lines[1]!r}", line=2)
    k = _parse_int(order_line[1], 2, "order")
    if k < 1:
        raise ParseError(f"order must be >= 1, got {k}", line=2)
    dims_line = lines[2].split()
    if len(dims_line) != k + 1 or dims_line[0] != "dims":
        raise ParseError(f"expected 'dims' with {k} sizes, got {lines[2]!r}", line=3)
    dims = tuple(_parse_int(tok, 3, "dimension") for tok in dims_line[1:])
    if any(d < 1 for d in dims):
        raise ParseError(f"dims must be positive, got {dims}", line=3)
    if form == "dense":
        count = math.prod(dims)
        values = np.empty(count)
        pos = 0
        for lineno, line in enumerate(lines[3:], start=4):
            for tok in line.split():
                if pos >= count:
                    raise ParseError(f"more than {count} values", line=lineno)
                values[pos] = _parse_float(tok, lineno)
                pos += 1
        if pos != count:
            raise ParseError(f"expected {count} values, got {pos}", line=len(lines))
        return values.reshape(dims)
    if len(lines) < 4:
        raise ParseError("sparse file missing 'nnz m' line", line=len(lines))
    nnz_line = lines[3].split()
    if len(nnz_line) != 2 or nnz_line[0] != "nnz":
        raise ParseError(f"expected 'nnz m', got {lines[3]!r}", line=4)
    m = _parse_int(nnz_line[1], 4, "entry count")
    t = np.zeros(dims)
    seen = set()
    entries = 0
    for lineno, line in enumerate(lines[4:], start=5):
        toks = line.split()
        if not toks:
            continue
        if len(toks) != k + 1:
            raise ParseError(f"expected {k} indices and a value, got {len(toks)} fields", line=lineno)
        idx = tuple(_parse_int(tok, lineno, "index") for tok in toks[:k])
        for p, (i, d) in enumerate(zip(idx, dims)):
            if not 0 <= i < d:
                raise ParseError(f"index {i} out of range for mode {p} (size {d})", line=lineno)
        if idx in seen:
            raise ParseError(f"duplicate index {idx}", line=lineno)
        seen.add(idx)
        t[idx] = _parse_float(toks[k], lineno)
        entries += 1
    if entries != m:
        raise ParseError(f"expected {m} entries, got {entries}", line=len(lines))
    return t


def format_hypergraph(h: Hypergraph) -> str:
    """Render HG1 text: header 'HG1 k n', then one ascending edge per line."""
    lines = [f"HG1 {h.k} {h.n}"]
    for e in h.sorted_edges:
        lines.append(" ".join(str(v) for v in e))
    return "\n".join(lines) + "\n"


def write_hypergraph(h: Hypergraph, path) -> None:
    Path(path).write_text(format_hypergraph(h))


def read_hypergraph(path) -> Hypergraph:
    """Read HG1; rejects non-uniform, unsorted, repeated-vertex, out-of-range,
    and duplicate edge lines."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ParseError("empty file", line=0)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "HG1":
        raise ParseError(f"bad header {lines[0]!r}, expected 'HG1 k n'", line=1)
    k = _parse_int(head[1], 1, "uniformity")
    n = _parse_int(head[2], 1, "vertex count")
    if k < 1 or n < 1:
        raise ParseError(f"need k >= 1 and n >= 1, got k={k} n={n}", line=1)
    edges = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        toks = line.split()
        if not toks:
            continue
        if len(toks) != k:
            raise ParseError(f"edge line has {len(toks)} vertices, expected {k}", line=lineno)
        e = tuple(_parse_int(tok, lineno, "vertex") for tok in toks)
        if any(not 0 <= v < n for v in e):
            raise ParseError(f"vertex out of range 0..{n - 1} in {e}", line=lineno)
        if any(a >= b for a, b in zip(e, e[1:])):
            if len(set(e)) != k:
                raise ParseError(f"edge {e} repeats a vertex", line=lineno)
            raise ParseError(f"edge {e} is not in ascending order", line=lineno)
        if e in seen:
            raise ParseError(f"duplicate edge {e}", line=lineno)
        seen.add(e)
        edges.append(e)
    return Hypergraph(k, n, edges)


def format_trajectory_csv(traj: Trajectory) -> str:
    """CSV with header t,x_0,...,x_{n-1}, one row per sample."""
    n = traj.states.shape[1]
    lines = ["t," + ",".join(f"x_{i}" for i in range(n))]
    for t, state in zip(traj.times, traj.states):
        lines.append(_fmt(float(t)) + "," + ",".join(_fmt(v) for v in state))
    return "\n".join(lines) + "\n"


def write_trajectory_csv(traj: Trajectory, path) -> None:
    Path(path).write_text(format_trajectory_csv(traj))


def write_decomp(d, dirpath) -> None:
    """Write a decomposition bundle: a directory holding a `meta` text file
    plus one TNS1 file per core/factor. Solver diagnostics (fit, error
    history) are not part of the bundle."""
    dirpath = Path(dirpath)
    os.makedirs(dirpath, exist_ok=True)
    if isinstance(d, TuckerDecomp):
        meta = [
            "KDEC1 tucker",
            f"flavor {d.flavor.value}",
            f"order {d.order}",
            f"singular_values {1 if d.mode_singular_values is not None else 0}",
        ]
        write_tensor(d.core, dirpath / "core.tns")
        for p, u in enumerate(d.factors):
            write_tensor(u, dirpath / f"factor{p}.tns")
        if d.mode_singular_values is not None:
            for p, s in enumerate(d.mode_singular_values):
                write_tensor(s, dirpath / f"sv{p}.tns")
    elif isinstance(d, TTDecomp):
        meta = [
            "KDEC1 tt",
            f"order {d.order}",
            "ranks " + " ".join(str(r) for r in d.ranks),
        ]
        for p, core in enumerate(d.cores):
            write_tensor(core, dirpath / f"core{p}.tns")
    elif isinstance(d, OdecoDecomp):
        meta = [
            "KDEC1 odeco",
            f"order {d.order}",
            f"residual {_fmt(d.residual)}",
            f"is_odeco {1 if d.is_odeco else 0}",
            f"rank {d.values.shape[0]}",
        ]
        if d.values.shape[0] > 0:
            write_tensor(d.values, dirpath / "values.tns")
            write_tensor(d.vectors, dirpath / "vectors.tns")
    else:
        raise TypeError(f"cannot serialize {type(d).__name__}")
    (dirpath / "meta").write_text("\n".join(meta) + "\n")


def _meta_dict(lines: list[str]) -> dict[str, str]:
    out = {}
    for line in lines[1:]:
        if line.strip():
            key, _, rest = line.partition(" ")
            out[key] = rest.strip()
    return out


def read_decomp(dirpath):
    """Read a decomposition bundle written by write_decomp."""
    dirpath = Path(dirpath)
    meta_path = dirpath / "meta"
    if not meta_path.exists():
        raise ParseError(f"no meta file in {dirpath}", line=0)
    lines = meta_path.read_text().splitlines()
    if not lines or not lines[0].startswith("KDEC1 "):
        raise ParseError("bad bundle header, expected 'KDEC1 <kind>'", line=1)
    kind = lines[0].split()[1]
    meta = _meta_dict(lines)
    if kind == "tucker":
        order = int(meta["order"])
        core = read_tensor(dirpath / "core.tns")
        factors = tuple(read_tensor(dirpath / f"factor{p}.tns") for p in range(order))
        svals = None
        if meta.get("singular_values") == "1":
            svals = tuple(read_tensor(dirpath / f"sv{p}.tns") for p in range(order))
        return TuckerDecomp(core, factors, TuckerFlavor(meta["flavor"]), svals)
    if kind == "tt":
        order = int(meta["order"])
        ranks = tuple(int(r) for r in meta["ranks"].split())
        cores = tuple(read_tensor(dirpath / f"core{p}.tns") for p in range(order))
        return TTDecomp(cores, ranks)
    if kind == "odeco":
        order = int(meta["order"])
        rank = int(meta.get("rank", "0"))
        if rank > 0:
            values = read_tensor(dirpath / "values.tns")
            vectors = read_tensor(dirpath / "vectors.tns")
        else:
            values = np.zeros(0)
            vectors = np.zeros((0, 0))
        return OdecoDecomp(values, vectors, float(meta["residual"]),
                           order, meta["is_odeco"] == "1")
    raise ParseError(f"unknown bundle kind {kind!r}", line=1)
