"""Tucker/HOSVD, CP-ALS, orthogonal, and tensor-train decompositions,
with Kronecker composition paths for each.

Every decomposition reconstructs via `reconstruct`; the compose functions
build the decomposition of B⊗C from decompositions of B and C without ever
decomposing the large tensor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import tensor as tn
from .errors import NoConvergenceError, ShapeError
from .kron import kron
from .spectral import SolverOptions, z_eigen_sshopm


class TuckerFlavor(enum.Enum):
    GENERAL = "general"
    HOSVD = "hosvd"
    CP = "cp"
    ODECO = "odeco"


@dataclass(frozen=True)
class TuckerDecomp:
    core: np.ndarray
    factors: tuple[np.ndarray, ...]
    flavor: TuckerFlavor
    mode_singular_values: tuple[np.ndarray, ...] | None = None
    fit: float | None = None
    converged: bool | None = None
    error_history: tuple[float, ...] | None = None

    @property
    def order(self) -> int:
        return self.core.ndim


@dataclass(frozen=True)
class TTDecomp:
    cores: tuple[np.ndarray, ...]
    ranks: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.cores)


@dataclass(frozen=True)
class OdecoDecomp:
    """T = sum_j values[j] * u_j outer^k, u_j = orthonormal columns of vectors.

    residual is relative: ‖T - reconstruction‖_F / ‖T‖_F. is_odeco records
    whether that fell below the acceptance threshold; callers that require an
    orthogonal decomposition must check it.
    """

    values: np.ndarray
    vectors: np.ndarray
    residual: float
    order: int
    is_odeco: bool


def _fix_column_signs(u: np.ndarray) -> np.ndarray:
    # deterministic convention: largest-magnitude entry of each column positive
    u = u.copy()
    for j in range(u.shape[1]):
        col = u[:, j]
        pivot = col[np.argmax(np.abs(col))]
        if pivot < 0:
            u[:, j] = -col
    return u


def hosvd(t) -> TuckerDecomp:
    """Higher-order SVD: orthonormal mode factors and an all-orthogonal core.

    Factor p holds the left singular vectors of the mode-p unfolding at the
    numerical p-rank (sigma >= 1e-8 * sigma_max), so the core has the
    multilinear-rank dims and a rank-1 input yields a 1x...x1 core. At full
    numerical rank the reconstruction is exact to rounding. Per-mode singular
    values are kept for rank decisions and composition reordering.
    """
    t = tn.as_tensor(t)
    factors = []
    svals = []
    for p in range(t.ndim):
        u, s, _ = np.linalg.svd(tn.unfold(t, p), full_matrices=False)
        r = max(int(np.sum(s >= 1e-8 * s[0])), 1) if s.size and s[0] > 0 else 1
        factors.append(_fix_column_signs(u[:, :r]))
        svals.append(s[:r])
    core = t
    for p, u in enumerate(factors):
        core = tn.mode_product(core, u.T, p)
    return TuckerDecomp(core, tuple(factors), TuckerFlavor.HOSVD, tuple(svals))


def p_mode_singular_values(t, p: int) -> np.ndarray:
    return np.linalg.svd(tn.unfold(t, p), compute_uv=False)


def p_mode_rank(t, p: int, rel_tol: float = 1e-8) -> int:
    s = p_mode_singular_values(t, p)
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.sum(s >= rel_tol * s[0]))


def validate_hosvd(d: TuckerDecomp, tol: float = 1e-8) -> bool:
    """Check factor orthonormality plus core all-orthogonality and ordering.

    All-orthogonality: distinct mode-p sub-tensors of the core are mutually
    orthogonal (off-diagonal Gram entries ≤ tol·‖core‖_F²). Ordering: their
    norms are nonincreasing along every mode, with tol·‖core‖_F slack.
    """
    scale = tn.frobenius_norm(d.core)
    for u in d.factors:
        if np.max(np.abs(u.T @ u - np.eye(u.shape[1]))) > 1e-10:
            return False
    for p in range(d.core.ndim):
        m = tn.unfold(d.core, p)
        gram = m @ m.T
        off = gram - np.diag(np.diag(gram))
        if off.size and np.max(np.abs(off)) > tol * max(scale ** 2, 1e-300):
            return False
        norms = np.sqrt(np.maximum(np.diag(gram), 0.0))
        if np.any(np.diff(norms) > tol * max(scale, 1e-300)):
            return False
    return True


def _khatri_rao(mats: list[np.ndarray]) -> np.ndarray:
    # columnwise Kronecker; first factor varies slowest, matching unfold
    # columns. Leading batch axes pass through untouched.
    out = mats[0]
    for m in mats[1:]:
        r = m.shape[-1]
        out = (out[..., :, None, :] * m[..., None, :, :]).reshape(out.shape[:-2] + (-1, r))
    return out


def _diagonal_tensor(values: np.ndarray, order: int) -> np.ndarray:
    r = values.shape[0]
    core = np.zeros((r,) * order)
    idx = np.arange(r)
    core[(idx,) * order] = values
    return core


def cpd_als(t, rank: int, opts: SolverOptions | None = None) -> TuckerDecomp:
    """CP decomposition by alternating least squares.

    opts.max_iter is the sweep budget per trial, opts.tol the fit-change
    stopping threshold, opts.starts the number of trials (the first starts
    from leading HOSVD vectors, the rest from seeded random factors); the best
    trial is returned. Weights live on the diagonal core, factors have unit
    columns, and `fit` is 1 - ‖T - reconstruction‖_F/‖T‖_F.
    """
    return cpd_als_many([t], rank, opts)[0]


def _solve_or_pinv(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(v, w.T)
    except np.linalg.LinAlgError:
        return (w @ np.linalg.pinv(v)).T  # collinear columns make v singular


def cpd_als_many(tensors, rank: int, opts: SolverOptions | None = None) -> list[TuckerDecomp]:
    """CP decomposition of several same-shaped tensors by joint ALS sweeps.

    Small CP problems spend most of their wall time in per-call overhead
    rather than arithmetic, so the members are stacked and every solver step
    runs once on the whole stack. Members converge individually; sweeping
    continues until the last one is done, and a member that finishes early
    keeps riding along (its fit can only improve, and its error history stops
    at its own convergence). `cpd_als` is the single-member case.
    """
    ts = [tn.as_tensor(t) for t in tensors]
    if not ts:
        return []
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    dims = ts[0].shape
    for t in ts[1:]:
        if t.shape != dims:
            raise ShapeError(f"joint ALS needs equal shapes, got {t.shape} vs {dims}")
    if len(dims) < 2:
        raise ShapeError("CP decomposition needs order >= 2")
    if opts is None:
        opts = SolverOptions(tol=1e-10, max_iter=500, starts=3, seed=0)
    k = len(dims)
    results: list[TuckerDecomp | None] = [None] * len(ts)
    live = []
    for j, t in enumerate(ts):
        if tn.frobenius_norm(t) == 0.0:
            factors = tuple(np.eye(n, rank) if n >= rank else _pad_columns(np.eye(n, n), rank, np.random.default_rng(opts.seed)) for n in dims)
            results[j] = TuckerDecomp(_diagonal_tensor(np.zeros(rank), k), factors,
                                      TuckerFlavor.CP, fit=1.0, converged=True, error_history=(0.0,))
        else:
            live.append(j)
    if not live:
        return results
    m = len(live)
    stack = np.stack([ts[j] for j in live])
    norms_t = np.sqrt(np.sum(stack.reshape(m, -1) ** 2, axis=1))
    norms_sq = norms_t ** 2
    hos = [hosvd(ts[j]) for j in live]
    unfolds = [np.moveaxis(stack, p + 1, 1).reshape(m, dims[p], -1) for p in range(k)]
    best: list[tuple | None] = [None] * m
    for trial in range(opts.starts):
        per_member = []
        for i, j in enumerate(live):
            rng = np.random.default_rng([opts.seed, trial, j])
            if trial == 0:
                per_member.append([_pad_columns(hos[i].factors[p][:, :rank], rank, rng) for p in range(k)])
            else:
                per_member.append([_unit_columns(rng.standard_normal((n, rank))) for n in dims])
        factors = [np.stack([fs[p] for fs in per_member]) for p in range(k)]
        grams = [np.swapaxes(f, 1, 2) @ f for f in factors]
        histories: list[list[float]] = [[] for _ in range(m)]
        conv = np.zeros(m, dtype=bool)
        prev_fit = None
        # columns stay unnormalized between sweeps; each solve absorbs the
        # others' scale, so the fit sequence is unchanged and the per-sweep
        # normalize/divide work disappears
        for _ in range(opts.max_iter):
            for p in range(k):
                v = grams[p - 1].copy()
                for q in range(k):
                    if q != p and q != (p - 1) % k:
                        v *= grams[q]
                kr = _khatri_rao([factors[q] for q in range(k) if q != p])
                w = unfolds[p] @ kr
                try:
                    sol = np.linalg.solve(v, np.swapaxes(w, 1, 2))
                except np.linalg.LinAlgError:
                    sol = np.stack([_solve_or_pinv(v[i], w[i]) for i in range(m)])
                mp = np.swapaxes(sol, 1, 2)
                factors[p] = mp
                grams[p] = sol @ mp
            # gram trick: error without materializing the reconstruction
            gram = grams[0].copy()
            for q in range(1, k):
                gram *= grams[q]
            rec_sq = np.sum(gram, axis=(1, 2))
            dot = np.sum(w * factors[k - 1], axis=(1, 2))
            err = np.sqrt(np.maximum(norms_sq - 2.0 * dot + rec_sq, 0.0)) / norms_t
            for i in range(m):
                if not conv[i]:
                    histories[i].append(float(err[i]))
            fit = 1.0 - err
            if prev_fit is not None:
                conv |= np.abs(fit - prev_fit) < opts.tol
                if conv.all():
                    break
            prev_fit = fit
        for i in range(m):
            if best[i] is None or histories[i][-1] < best[i][0]:
                snap = [factors[p][i].copy() for p in range(k)]
                best[i] = (histories[i][-1], snap, histories[i], bool(conv[i]))
    for i, j in enumerate(live):
        _, facs, history, converged = best[i]
        lam = np.ones(rank)
        for p in range(k):
            norms = np.linalg.norm(facs[p], axis=0)
            lam *= norms
            facs[p] = facs[p] / np.where(norms > 0, norms, 1.0)
        order = np.argsort(-lam, kind="stable")
        lam = lam[order]
        facs = tuple(f[:, order] for f in facs)
        core = _diagonal_tensor(lam, k)
        # the gram-trick error bottoms out near sqrt(eps); report an exact fit
        rec = core
        for p, u in enumerate(facs):
            rec = tn.mode_product(rec, u, p)
        err = tn.frobenius_norm(ts[j] - rec) / norms_t[i]
        results[j] = TuckerDecomp(core, facs, TuckerFlavor.CP,
                                  fit=1.0 - err, converged=converged, error_history=tuple(history))
    return results


def _pad_columns(u: np.ndarray, rank: int, rng) -> np.ndarray:
    if u.shape[1] >= rank:
        return u[:, :rank]
    extra = _unit_columns(rng.standard_normal((u.shape[0], rank - u.shape[1])))
    return np.hstack([u, extra])


def _unit_columns(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=0)
    return m / np.where(norms > 0, norms, 1.0)


def _rank_one_sym(u: np.ndarray, order: int) -> np.ndarray:
    out = u
    for _ in range(order - 1):
        out = np.multiply.outer(out, u)
    return out


def odeco(t, opts: SolverOptions | None = None, *,
          stop_tol: float = 1e-8, accept_tol: float = 1e-6) -> OdecoDecomp:
    """Greedy orthogonal decomposition by Z-eigenpair deflation.

    Repeatedly extracts the largest-magnitude Z-eigenpair of the remainder,
    orthogonalizes against the vectors found so far, and subtracts the rank-1
    symmetric term. Stops after n vectors, when the relative remainder drops
    below stop_tol, or when nothing of significant magnitude is left. The
    result is flagged not-odeco when the final relative residual exceeds
    accept_tol; callers that require an orthogonal decomposition must check.
    """
    t = tn.as_tensor(t)
    n = tn.require_cubical(t)
    k = t.ndim
    if k < 2:
        raise ShapeError("orthogonal decomposition needs order >= 2")
    if opts is None:
        opts = SolverOptions(tol=1e-10, max_iter=2000, starts=6, shift="frobenius", seed=0)
    norm_t = tn.frobenius_norm(t)
    values: list[float] = []
    us: list[np.ndarray] = []
    remaining = t.copy()
    if norm_t > 0:
        for _ in range(n):
            rel = tn.frobenius_norm(remaining) / norm_t
            if rel <= stop_tol:
                break
            try:
                pairs = z_eigen_sshopm(remaining, opts, orthogonal_to=us)
            except NoConvergenceError:
                break
            best = max(pairs, key=lambda p: abs(p.value))
            if abs(best.value) <= 1e-8 * max(1.0, norm_t):
                break
            u = best.vector.copy()
            for w in us:
                u -= (w @ u) * w
            nu = np.linalg.norm(u)
            if nu < 1e-8:
                break
            u /= nu
            lam = float(u @ tn.apply_polynomial(remaining, u))
            values.append(lam)
            us.append(u)
            remaining -= lam * _rank_one_sym(u, k)
    rel = tn.frobenius_norm(remaining) / norm_t if norm_t > 0 else 0.0
    vectors = np.column_stack(us) if us else np.zeros((n, 0))
    return OdecoDecomp(np.array(values), vectors, float(rel), k, bool(rel <= accept_tol))


def ttd(t, tol: float = 1e-10) -> TTDecomp:
    """Tensor-train decomposition by sequential truncated SVDs.

    Each step truncates at the largest rank whose discarded tail energy stays
    below tol·‖T‖_F/sqrt(k-1), so the total reconstruction error is at most
    tol·‖T‖_F. The threshold is floored at 1e-14·‖T‖_F: singular values at
    rounding-noise level stand in for exact zeros, so tol=0 recovers the
    exact TT-ranks of structured inputs instead of the dimension caps.
    """
    t = tn.as_tensor(t)
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    k = t.ndim
    dims = t.shape
    if k == 1:
        return TTDecomp((t.reshape(1, dims[0], 1),), (1, 1))
    norm_t = tn.frobenius_norm(t)
    delta = max(tol * norm_t / math.sqrt(k - 1), 1e-14 * norm_t)
    cores = []
    ranks = [1]
    c = t.reshape(dims[0], -1)
    for p in range(k - 1):
        m = c.reshape(ranks[p] * dims[p], -1)
        u, s, vt = np.linalg.svd(m, full_matrices=False)
        tails = np.sqrt(np.cumsum(s[::-1] ** 2))[::-1]  # tails[r] = energy of s[r:]
        r = s.shape[0]
        while r > 1 and tails[r - 1] <= delta:
            r -= 1
        cores.append(u[:, :r].reshape(ranks[p], dims[p], r))
        ranks.append(r)
        c = s[:r, None] * vt[:r]
    cores.append(c.reshape(ranks[-1], dims[-1], 1))
    ranks.append(1)
    return TTDecomp(tuple(cores), tuple(ranks))


def reconstruct(d) -> np.ndarray:
    """Evaluate a decomposition back to a dense tensor."""
    if isinstance(d, TuckerDecomp):
        out = d.core
        for p, u in enumerate(d.factors):
            out = tn.mode_product(out, u, p)
        return out
    if isinstance(d, TTDecomp):
        out = d.cores[0][0]  # leading rank is 1
        for core in d.cores[1:]:
            out = np.tensordot(out, core, axes=(out.ndim - 1, 0))
        return np.ascontiguousarray(out[..., 0])
    if isinstance(d, OdecoDecomp):
        n = d.vectors.shape[0]
        out = np.zeros((n,) * d.order)
        for lam, u in zip(d.values, d.vectors.T):
            out += lam * _rank_one_sym(u, d.order)
        return out
    raise TypeError(f"cannot reconstruct {type(d).__name__}")


def odeco_as_tucker(d: OdecoDecomp) -> TuckerDecomp:
    """View an orthogonal decomposition as a diagonal-core Tucker form."""
    core = _diagonal_tensor(np.asarray(d.values, dtype=np.float64), d.order)
    return TuckerDecomp(core, (d.vectors,) * d.order, TuckerFlavor.ODECO)


def tucker_as_odeco(d: TuckerDecomp, source=None, accept_tol: float = 1e-6) -> OdecoDecomp:
    """Extract (values, vectors) from a diagonal-core Tucker decomposition.

    The residual is evaluated against `source` when given, else left NaN with
    odeco status decided by factor orthonormality alone.
    """
    if d.flavor not in (TuckerFlavor.ODECO, TuckerFlavor.CP):
        raise ValueError(f"need a diagonal-core flavor, got {d.flavor.value}")
    if not tn.structure_check(d.core, tn.StructureKind.DIAGONAL):
        raise ValueError("core is not diagonal")
    r = d.core.shape[0]
    values = d.core[(np.arange(r),) * d.order].copy()
    vectors = d.factors[0]
    ortho = np.max(np.abs(vectors.T @ vectors - np.eye(vectors.shape[1]))) <= 1e-10
    out = OdecoDecomp(values, vectors, float("nan"), d.order, bool(ortho))
    if source is not None:
        src = tn.as_tensor(source)
        rel = tn.frobenius_norm(src - reconstruct(out)) / max(tn.frobenius_norm(src), 1e-300)
        out = OdecoDecomp(values, vectors, float(rel), d.order, bool(ortho and rel <= accept_tol))
    return out


def kron_compose_tucker(db: TuckerDecomp, dc: TuckerDecomp, reorder: bool = True) -> TuckerDecomp:
    """Tucker decomposition of B⊗C from decompositions of B and C.

    Core and factors compose per-mode by Kronecker products; the flavor is
    preserved (diagonal cores stay diagonal, orthonormal factors stay
    orthonormal). For HOSVD inputs the composed per-mode singular values are
    products, which may break the nonincreasing-norm ordering; with
    reorder=True any violated mode is permuted (stable sort, ties by original
    position) consistently across core indices, factor columns, and the
    stored singular values, restoring a valid HOSVD.
    """
    if db.order != dc.order:
        raise ShapeError(f"order mismatch: {db.order} vs {dc.order}")
    if db.flavor is not dc.flavor:
        raise ValueError(f"flavor mismatch: {db.flavor.value} vs {dc.flavor.value}")
    core = kron(db.core, dc.core)
    factors = [np.kron(u, v) for u, v in zip(db.factors, dc.factors)]
    svals = None
    if db.flavor is TuckerFlavor.HOSVD:
        if db.mode_singular_values is None or dc.mode_singular_values is None:
            raise ValueError("HOSVD composition needs per-mode singular values on both inputs")
        svals = [np.outer(sb, sc).ravel()
                 for sb, sc in zip(db.mode_singular_values, dc.mode_singular_values)]
        if reorder:
            for p in range(len(svals)):
                v = svals[p]
                if np.any(np.diff(v) > 0):
                    perm = np.argsort(-v, kind="stable")
                    svals[p] = v[perm]
                    factors[p] = factors[p][:, perm]
                    core = np.take(core, perm, axis=p)
        svals = tuple(svals)
    return TuckerDecomp(core, tuple(factors), db.flavor, svals)


def kron_compose_tt(db: TTDecomp, dc: TTDecomp) -> TTDecomp:
    """TT decomposition of B⊗C: per-position Kronecker products of cores.

    Each order-3 core pair combines over all three modes, so TT-ranks
    multiply and the middle mode carries the composite index convention.
    """
    if db.order != dc.order:
        raise ShapeError(f"order mismatch: {db.order} vs {dc.order}")
    cores = tuple(kron(gb, gc) for gb, gc in zip(db.cores, dc.cores))
    ranks = tuple(rb * rc for rb, rc in zip(db.ranks, dc.ranks))
    return TTDecomp(cores, ranks)


def kron_compose_odeco(db: OdecoDecomp, dc: OdecoDecomp, source=None,
                       accept_tol: float = 1e-6) -> OdecoDecomp:
    """Orthogonal decomposition of B⊗C: value products and vector krons."""
    if db.order != dc.order:
        raise ShapeError(f"order mismatch: {db.order} vs {dc.order}")
    composed = kron_compose_tucker(odeco_as_tucker(db), odeco_as_tucker(dc))
    return tucker_as_odeco(composed, source=source, accept_tol=accept_tol)
