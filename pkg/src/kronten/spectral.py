"""Tensor eigensolvers (Z, H, M, U), eigenpair composition, and residuals.

Z-pairs come from shifted symmetric higher-order power iteration, H-pairs from
the nonnegative power method, M-triples from alternating shifted power steps,
and U-pairs from the exact bijection with matrix eigenpairs of the square
unfolding. All solvers are deterministic for a fixed seed.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from . import tensor as tn
from .errors import NoConvergenceError, ShapeError
from .kron import _kron_generic


class EigenKind(enum.Enum):
    H = "H"
    Z = "Z"
    U = "U"
    M = "M"


def _as_kind(kind) -> EigenKind:
    if isinstance(kind, EigenKind):
        return kind
    return EigenKind(str(kind).upper())


@dataclass(frozen=True)
class Eigenpair:
    kind: EigenKind
    value: float | complex
    vector: np.ndarray
    residual: float
    iterations: int


@dataclass(frozen=True)
class Eigentriple:
    value: float
    x: np.ndarray
    y: np.ndarray
    residual: float


@dataclass(frozen=True)
class SolverOptions:
    """Iteration controls shared by the power-type solvers.

    shift may be a number, "adaptive" (1 + l1 norm of the tensor, the
    conservative convexity bound), or "frobenius" (1 + (k-1)·Frobenius norm,
    also convexity-safe and much smaller for tensors with many modest entries,
    so convergence takes far fewer iterations).
    """

    tol: float = 1e-10
    max_iter: int = 1000
    starts: int = 10
    shift: float | str = "adaptive"
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if not self.max_iter > 0:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")
        if not self.starts >= 1:
            raise ValueError(f"starts must be >= 1, got {self.starts}")
        if isinstance(self.shift, str) and self.shift not in ("adaptive", "frobenius"):
            raise ValueError(f"shift must be a number, 'adaptive' or 'frobenius', got {self.shift!r}")


def _resolve_shift(t: np.ndarray, shift) -> float:
    if shift == "adaptive":
        return 1.0 + tn.l1_norm(t)
    if shift == "frobenius":
        return 1.0 + (t.ndim - 1) * tn.frobenius_norm(t)
    return float(shift)


def _require_supersymmetric(t: np.ndarray, tol: float = 1e-8) -> None:
    if not tn.structure_check(t, tn.StructureKind.SUPERSYMMETRIC, tol=tol):
        raise ShapeError("tensor is not supersymmetric within 1e-8")


def _canonical_sign(x: np.ndarray) -> int:
    """+1/-1 making the first non-negligible component positive.

    Negligible means below 1e-6 of the largest magnitude, so solver noise in
    leading components never decides the sign.
    """
    m = np.max(np.abs(x))
    if m <= 0:
        return 1
    for v in x:
        if abs(v) > 1e-6 * m:
            return 1 if v > 0 else -1
    return 1


def _vec_key(x: np.ndarray) -> tuple:
    return tuple(np.round(np.asarray(x, dtype=np.float64).ravel(), 9))


def _dedup_pairs(found: list[Eigenpair], signed: bool) -> list[Eigenpair]:
    kept: list[Eigenpair] = []
    for cand in found:
        replaced = False
        for i, old in enumerate(kept):
            d = np.linalg.norm(cand.vector - old.vector)
            if signed:
                d = min(d, np.linalg.norm(cand.vector + old.vector))
            if d < 1e-6:
                if cand.residual < old.residual:
                    kept[i] = cand
                replaced = True
                break
        if not replaced:
            kept.append(cand)
    kept.sort(key=lambda p: (p.value, _vec_key(p.vector)))
    return kept


def _sshopm_batch(mats, k: int, alphas: np.ndarray, runs, opts: SolverOptions, basis):
    """One power iteration driving every run as a row of a matrix.

    runs are (tensor_index, direction, start_vector) triples ordered so rows
    of the same tensor are contiguous; mats holds each tensor reshaped to
    (n, n^{k-1}). Rows drop out of the batch as they converge or die, so a
    long-running row never pays for finished ones. Returns per run the
    iteration it converged at (0 when it did not) and the iterate frozen at
    convergence.
    """
    n = mats[0].shape[0]
    total = len(runs)
    conv_at = np.zeros(total, dtype=np.int64)
    out: list[np.ndarray | None] = [None] * total
    x = np.stack([r[2] for r in runs]).astype(np.float64)
    if basis is not None:
        x = x - (x @ basis) @ basis.T
    norms = np.linalg.norm(x, axis=1)
    keep = norms >= 1e-13
    pos = np.nonzero(keep)[0]
    x = x[keep] / norms[keep][:, None]
    row_tensor = np.array([r[0] for r in runs])[keep]
    sign = np.array([r[1] for r in runs], dtype=np.float64)[keep]
    coef = sign * alphas[row_tensor]
    counts = [int(np.sum(row_tensor == m)) for m in range(len(mats))]
    for it in range(1, opts.max_iter + 1):
        if x.shape[0] == 0:
            break
        v = x
        for _ in range(k - 2):
            v = (v[:, :, None] * x[:, None, :]).reshape(x.shape[0], -1)
        g = np.empty_like(x)
        lo = 0
        for m, mat in enumerate(mats):
            hi = lo + counts[m]
            if counts[m]:
                g[lo:hi] = v[lo:hi] @ mat.T
            lo = hi
        if basis is not None:
            g = g - (g @ basis) @ basis.T
        lam = np.einsum("ri,ri->r", x, g)
        res = np.linalg.norm(g - lam[:, None] * x, axis=1)
        done = res <= opts.tol * np.maximum(1.0, np.abs(lam))
        u = (g + coef[:, None] * x) * sign[:, None]
        nu = np.linalg.norm(u, axis=1)
        dead = ~done & (nu < 1e-13)
        xn = u / np.where(nu > 0, nu, 1.0)[:, None]
        if basis is not None:
            xn = xn - (xn @ basis) @ basis.T
            nx = np.linalg.norm(xn, axis=1)
            dead |= ~done & (nx < 1e-13)
            xn = xn / np.where(nx > 0, nx, 1.0)[:, None]
        if done.any() or dead.any():
            for r in np.nonzero(done)[0]:
                conv_at[pos[r]] = it
                out[pos[r]] = x[r].copy()
            stay = ~(done | dead)
            x, pos, sign, coef, row_tensor = (
                xn[stay], pos[stay], sign[stay], coef[stay], row_tensor[stay])
            counts = [int(np.sum(row_tensor == m)) for m in range(len(mats))]
        else:
            x = xn
    return conv_at, out


def _collect_z_pairs(t, runs, conv_at, out, project=None) -> list[Eigenpair]:
    found: list[Eigenpair] = []
    for r in range(len(runs)):
        if conv_at[r] == 0:
            continue
        x = _canonical_sign(out[r]) * out[r]
        g = tn.apply_polynomial(t, x)
        if project is not None:
            g = project(g)
        lam = float(x @ g)
        res = float(np.linalg.norm(g - lam * x))
        found.append(Eigenpair(EigenKind.Z, lam, x, res, int(conv_at[r])))
    return found


def z_eigen_sshopm(t, opts: SolverOptions = SolverOptions(), *, orthogonal_to=None) -> list[Eigenpair]:
    """Z-eigenpairs (Tx^{k-1} = λx, ‖x‖=1) via shifted symmetric power iteration.

    Runs both ascent (+shift) and descent (-shift) from each start so positive
    and negative eigenvalues are reachable; all runs iterate jointly as one
    batch. The first start is the normalized ones vector (for nonnegative
    tensors the iteration then stays in the positive cone, so Perron-like
    dominant pairs are reliably reached); opts.starts random unit starts
    follow. Results are deduplicated up to sign, canonically signed (first
    nonzero component positive), and sorted by value. Raises
    NoConvergenceError if no start converges.

    orthogonal_to: optional list of unit vectors; iterates and gradients are
    projected into their orthogonal complement, so the solve targets the
    compressed problem P T (Px)^{k-1} = λ x (used by deflation-based
    decompositions, where noise in already-extracted directions would
    otherwise put a floor under the residual).
    """
    t = tn.as_tensor(t)
    n = tn.require_cubical(t)
    if t.ndim < 2:
        raise ShapeError("Z-eigenpairs need order >= 2")
    _require_supersymmetric(t)
    alpha = _resolve_shift(t, opts.shift)
    basis = None
    if orthogonal_to is not None and len(orthogonal_to) > 0:
        basis = np.column_stack([np.asarray(u, dtype=np.float64) for u in orthogonal_to])

    def project(v):
        if basis is None:
            return v
        return v - basis @ (basis.T @ v)

    rng = np.random.default_rng(opts.seed)
    start_vectors = [np.ones(n)]
    start_vectors.extend(rng.standard_normal(n) for _ in range(opts.starts))
    runs = [(0, s, x0) for x0 in start_vectors for s in (1.0, -1.0)]
    conv_at, out = _sshopm_batch([t.reshape(n, -1)], t.ndim, np.array([alpha]), runs, opts, basis)
    found = _collect_z_pairs(t, runs, conv_at, out, project)
    if not found:
        raise NoConvergenceError(
            f"no Z-eigenpair converged in {opts.max_iter} iterations from {opts.starts} starts"
        )
    return _dedup_pairs(found, signed=True)


def z_eigen_many(tensors, opts: SolverOptions = SolverOptions()) -> list[list[Eigenpair]]:
    """Z-eigenpairs of several same-shaped supersymmetric tensors at once.

    Every tensor's runs (each start crossed with both shift directions) join
    a single batched iteration, so the per-step overhead is shared across the
    whole group; the run schedule for each tensor is the same one
    `z_eigen_sshopm` uses, with every tensor seeing identical start vectors.
    Raises NoConvergenceError if any tensor ends up with no converged pair.
    """
    ts = [tn.as_tensor(t) for t in tensors]
    if not ts:
        return []
    n = tn.require_cubical(ts[0])
    k = ts[0].ndim
    if k < 2:
        raise ShapeError("Z-eigenpairs need order >= 2")
    for t in ts:
        if t.shape != ts[0].shape:
            raise ShapeError(f"joint solve needs equal shapes, got {t.shape} vs {ts[0].shape}")
        _require_supersymmetric(t)
    alphas = np.array([_resolve_shift(t, opts.shift) for t in ts])
    rng = np.random.default_rng(opts.seed)
    start_vectors = [np.ones(n)]
    start_vectors.extend(rng.standard_normal(n) for _ in range(opts.starts))
    runs = [(m, s, x0) for m in range(len(ts)) for x0 in start_vectors for s in (1.0, -1.0)]
    conv_at, out = _sshopm_batch([t.reshape(n, -1) for t in ts], k, alphas, runs, opts, None)
    per_tensor = len(start_vectors) * 2
    results: list[list[Eigenpair]] = []
    for m in range(len(ts)):
        sl = slice(m * per_tensor, (m + 1) * per_tensor)
        found = _collect_z_pairs(ts[m], runs[sl], conv_at[sl], out[sl])
        if not found:
            raise NoConvergenceError(
                f"no Z-eigenpair of tensor {m} converged in {opts.max_iter} iterations"
            )
        results.append(_dedup_pairs(found, signed=True))
    return results


def h_eigen_power(t, opts: SolverOptions = SolverOptions()) -> list[Eigenpair]:
    """H-eigenpairs (Tx^{k-1} = λ x^{[k-1]}) via the nonnegative power method.

    Convergence is guaranteed only for entrywise-nonnegative tensors; negative
    entries trigger a warning and best-effort behavior. Vectors are normalized
    so that ‖x‖_{k-1} = 1. Starts include the ones vector and every axis
    vector (reducible tensors such as diagonals converge per-axis) plus random
    nonnegative directions.
    """
    t = tn.as_tensor(t)
    n = tn.require_cubical(t)
    if t.ndim < 2:
        raise ShapeError("H-eigenpairs need order >= 2")
    _require_supersymmetric(t)
    if np.min(t) < 0:
        warnings.warn("tensor has negative entries; H power iteration is best-effort", stacklevel=2)
    k = t.ndim
    p = k - 1

    def knorm(v):
        return float(np.sum(np.abs(v) ** p) ** (1.0 / p))

    rng = np.random.default_rng(opts.seed)
    starts = [np.ones(n)]
    starts.extend(np.eye(n)[i] for i in range(n))
    starts.extend(rng.uniform(0.1, 1.0, size=n) for _ in range(opts.starts))
    found: list[Eigenpair] = []
    for x0 in starts:
        x = x0 / knorm(x0)
        converged_at = None
        for it in range(1, opts.max_iter + 1):
            g = tn.apply_polynomial(t, x)
            xp = x ** p
            denom = float(xp @ xp)
            lam = float(g @ xp) / denom if denom > 0 else 0.0
            if np.linalg.norm(g - lam * xp) <= opts.tol:
                converged_at = it
                break
            if np.min(g) < -1e-13:
                break  # left the nonnegative cone, this start is hopeless
            g = np.maximum(g, 0.0)
            total = float(g.sum())
            if total <= 0:
                break
            x = g ** (1.0 / p)
            x /= total ** (1.0 / p)
        if converged_at is None:
            continue
        res = float(np.linalg.norm(tn.apply_polynomial(t, x) - lam * x ** p))
        found.append(Eigenpair(EigenKind.H, lam, x, res, converged_at))
    if not found:
        raise NoConvergenceError(
            f"no H-eigenpair converged in {opts.max_iter} iterations"
        )
    return _dedup_pairs(found, signed=False)


def _m_contract_x(t, x, y, k):
    # T y^k x^{k-1}: free index is mode 0
    out = t
    for _ in range(k):
        out = np.tensordot(out, y, axes=(out.ndim - 1, 0))
    for _ in range(k - 1):
        out = np.tensordot(out, x, axes=(out.ndim - 1, 0))
    return out


def _m_contract_y(t, x, y, k):
    # T x^k y^{k-1}: free index is the last mode
    out = t
    for _ in range(k):
        out = np.tensordot(out, x, axes=(0, 0))
    for _ in range(k - 1):
        out = np.tensordot(out, y, axes=(0, 0))
    return out


def m_eigen_alternating(t, opts: SolverOptions = SolverOptions()) -> list[Eigentriple]:
    """M-eigentriples of an order-2k tensor: Tx^k y^{k-1} = λy, Ty^k x^{k-1} = λx.

    The first k modes pair with x, the last k with y. Updates alternate
    shifted power steps on x and y; a triple converges when both equation
    residuals fall below tol·max(1,|λ|).
    """
    t = tn.as_tensor(t)
    n = tn.require_cubical(t)
    if t.ndim < 2 or t.ndim % 2 != 0:
        raise ShapeError(f"M-eigentriples need even order >= 2, got {t.ndim}")
    k = t.ndim // 2
    alpha = _resolve_shift(t, opts.shift)
    rng = np.random.default_rng(opts.seed)
    found: list[Eigentriple] = []
    for _ in range(opts.starts):
        x0 = rng.standard_normal(n)
        y0 = rng.standard_normal(n)
        for s in (alpha, -alpha):
            x = x0 / np.linalg.norm(x0)
            y = y0 / np.linalg.norm(y0)
            converged_at = None
            for it in range(1, opts.max_iter + 1):
                fx = _m_contract_x(t, x, y, k)
                fy = _m_contract_y(t, x, y, k)
                lam = float(x @ fx)
                bound = opts.tol * max(1.0, abs(lam))
                if (np.linalg.norm(fx - lam * x) <= bound
                        and np.linalg.norm(fy - lam * y) <= bound):
                    converged_at = it
                    break
                u = fx + s * x
                if s < 0:
                    u = -u
                nu = np.linalg.norm(u)
                if nu < 1e-13:
                    break
                x = u / nu
                v = _m_contract_y(t, x, y, k) + s * y
                if s < 0:
                    v = -v
                nv = np.linalg.norm(v)
                if nv < 1e-13:
                    break
                y = v / nv
            if converged_at is None:
                continue
            x = _canonical_sign(x) * x
            y = _canonical_sign(y) * y
            fx = _m_contract_x(t, x, y, k)
            fy = _m_contract_y(t, x, y, k)
            lam = float(x @ fx)
            res = float(max(np.linalg.norm(fx - lam * x), np.linalg.norm(fy - lam * y)))
            found.append(Eigentriple(lam, x, y, res))
    if not found:
        raise NoConvergenceError(
            f"no M-eigentriple converged in {opts.max_iter} iterations from {opts.starts} starts"
        )
    kept: list[Eigentriple] = []
    for cand in found:
        hit = False
        for i, old in enumerate(kept):
            if (np.linalg.norm(cand.x - old.x) + np.linalg.norm(cand.y - old.y)) < 1e-6:
                if cand.residual < old.residual:
                    kept[i] = cand
                hit = True
                break
        if not hit:
            kept.append(cand)
    kept.sort(key=lambda tr: (tr.value, _vec_key(tr.x), _vec_key(tr.y)))
    return kept


def square_unfolding(t) -> np.ndarray:
    """Square matrix of an order-2k tensor with interleaved paired dims.

    Rows flatten the even-position modes, columns the odd-position modes; the
    Einstein product T * X becomes this matrix times vec(X).
    """
    t = tn.as_tensor(t)
    if t.ndim % 2 != 0 or t.ndim == 0:
        raise ShapeError(f"square unfolding needs even order, got {t.ndim}")
    k = t.ndim // 2
    for p in range(k):
        if t.shape[2 * p] != t.shape[2 * p + 1]:
            raise ShapeError(
                f"dims must pair up: mode {2 * p} has size {t.shape[2 * p]}, "
                f"mode {2 * p + 1} has size {t.shape[2 * p + 1]}"
            )
    order = list(range(0, 2 * k, 2)) + list(range(1, 2 * k, 2))
    m = int(np.prod(t.shape[0::2]))
    return np.transpose(t, order).reshape(m, m)


def u_eigen(t, opts: SolverOptions = SolverOptions()) -> list[Eigenpair]:
    """U-eigenpairs (T * X = λX under the Einstein product).

    These are exactly the matrix eigenpairs of the square unfolding, so they
    are computed directly rather than iteratively. Complex pairs are kept
    complex; each X has unit Frobenius norm and its largest-magnitude entry is
    made real and positive.
    """
    t = tn.as_tensor(t)
    mat = square_unfolding(t)
    dims = t.shape[0::2]
    values, vectors = np.linalg.eig(mat)
    pairs: list[Eigenpair] = []
    for idx in range(values.shape[0]):
        lam = values[idx]
        x = vectors[:, idx].reshape(dims)
        pivot = x.ravel()[np.argmax(np.abs(x))]
        if abs(pivot) > 0:
            x = x * (np.conj(pivot) / abs(pivot))
        x = x / np.linalg.norm(x.ravel())
        if abs(lam.imag) <= 1e-12 * max(1.0, abs(lam.real)) and np.max(np.abs(x.imag)) <= 1e-12:
            lam = float(lam.real)
            x = np.ascontiguousarray(x.real)
        res = float(np.linalg.norm(tn.einstein_product(t, x) - lam * x))
        pairs.append(Eigenpair(EigenKind.U, lam, x, res, 0))
    pairs.sort(key=lambda p: (np.real(p.value), np.imag(p.value)))
    return pairs


def residual(t, pair, kind=None) -> float:
    """Defining-equation residual of an eigenpair or eigentriple on tensor t.

    Z: ‖Tx^{k-1} - λx‖; H: ‖Tx^{k-1} - λx^{[k-1]}‖; M: max of the two
    equation residuals; U: ‖T*X - λX‖_F.
    """
    t = tn.as_tensor(t)
    if isinstance(pair, Eigentriple):
        kind = EigenKind.M if kind is None else _as_kind(kind)
        if kind is not EigenKind.M:
            raise ValueError(f"eigentriples carry M-kind residuals, got {kind}")
        k = t.ndim // 2
        fx = _m_contract_x(t, pair.x, pair.y, k)
        fy = _m_contract_y(t, pair.x, pair.y, k)
        return float(max(np.linalg.norm(fx - pair.value * pair.x),
                         np.linalg.norm(fy - pair.value * pair.y)))
    kind = pair.kind if kind is None else _as_kind(kind)
    if kind is EigenKind.Z:
        g = tn.apply_polynomial(t, pair.vector)
        return float(np.linalg.norm(g - pair.value * pair.vector))
    if kind is EigenKind.H:
        g = tn.apply_polynomial(t, pair.vector)
        return float(np.linalg.norm(g - pair.value * pair.vector ** (t.ndim - 1)))
    if kind is EigenKind.U:
        return float(np.linalg.norm((tn.einstein_product(t, pair.vector)
                                     - pair.value * pair.vector).ravel()))
    raise ValueError(f"unknown eigen kind {kind}")


def compose_eigen(pair_b, pair_c, kind, *, on=None):
    """Kronecker composition of eigenpairs: values multiply, vectors kron.

    For H/Z pairs of B and C the result (αβ, x⊗y) is an eigenpair of B⊗C;
    for M, (αβ, x_B⊗x_C, y_B⊗y_C); for U, (αβ, X_B⊗X_C). The residual field
    is evaluated on `on` when given (a dense tensor, typically kron(B, C)),
    otherwise it is NaN since the composed tensor is not materialized here.
    """
    kind = _as_kind(kind)
    if kind is EigenKind.M:
        if not (isinstance(pair_b, Eigentriple) and isinstance(pair_c, Eigentriple)):
            raise ValueError("M composition needs two eigentriples")
        value = pair_b.value * pair_c.value
        x = np.kron(pair_b.x, pair_c.x)
        y = np.kron(pair_b.y, pair_c.y)
        out = Eigentriple(value, x, y, float("nan"))
        if on is not None:
            out = Eigentriple(value, x, y, residual(on, out))
        return out
    if not (isinstance(pair_b, Eigenpair) and isinstance(pair_c, Eigenpair)):
        raise ValueError(f"{kind.value} composition needs two eigenpairs")
    if pair_b.kind is not kind or pair_c.kind is not kind:
        raise ValueError(
            f"kind mismatch: composing as {kind.value} but inputs are "
            f"{pair_b.kind.value} and {pair_c.kind.value}"
        )
    value = pair_b.value * pair_c.value
    if kind is EigenKind.U:
        vec = _kron_generic(np.asarray(pair_b.vector), np.asarray(pair_c.vector))
    else:
        vec = np.kron(pair_b.vector, pair_c.vector)
    out = Eigenpair(kind, value, vec, float("nan"), 0)
    if on is not None:
        out = Eigenpair(kind, value, vec, residual(on, out), 0)
    return out
