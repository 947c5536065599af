"""Dense k-order tensors and the multilinear primitives everything else builds on.

Tensors are plain numpy float64 arrays, C-ordered (last index fastest), with
0-based indices and 0-based modes throughout.
"""

from __future__ import annotations

import enum
import itertools
import math

import numpy as np

from .errors import ShapeError


def as_tensor(a) -> np.ndarray:
    """Coerce to a C-contiguous float64 array (0-d arrays represent scalars)."""
    t = np.asarray(a, dtype=np.float64)
    if t.ndim > 0:
        t = np.ascontiguousarray(t)  # ascontiguousarray would lift 0-d to 1-d
    if t.size == 0:
        raise ShapeError("tensor has a zero-length dimension")
    return t


def require_cubical(t: np.ndarray) -> int:
    """Return the common dimension n of a cubical tensor, or raise ShapeError."""
    if t.ndim == 0:
        raise ShapeError("expected a tensor of order >= 1")
    n = t.shape[0]
    if any(d != n for d in t.shape):
        raise ShapeError(f"expected a cubical tensor, got dims {t.shape}")
    return n


class StructureKind(enum.Enum):
    DIAGONAL = "diagonal"
    SUPERSYMMETRIC = "supersymmetric"
    UPPER_TRIANGULAR = "upper_triangular"
    LOWER_TRIANGULAR = "lower_triangular"
    STOCHASTIC = "stochastic"


def mode_product(t, m, p: int) -> np.ndarray:
    """Mode-p product T x_p M.

    Parameters
    ----------
    t : array, order k
    m : matrix, r x n_p
    p : mode, 0-based

    Returns
    -------
    array with dims of t, except dims[p] replaced by r.
    """
    t = as_tensor(t)
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError(f"mode_product needs a matrix, got order {m.ndim}")
    if not 0 <= p < t.ndim:
        raise ShapeError(f"mode {p} out of range for order-{t.ndim} tensor")
    if m.shape[1] != t.shape[p]:
        raise ShapeError(
            f"matrix has {m.shape[1]} columns, mode {p} has size {t.shape[p]}"
        )
    out = np.tensordot(t, m, axes=(p, 1))
    return np.ascontiguousarray(np.moveaxis(out, -1, p))


def apply_polynomial(t, x) -> np.ndarray:
    """Contract modes 1..k-1 with x, i.e. the vector T x^{k-1}.

    Entry i equals sum over j_2..j_k of T[i, j_2, .., j_k] x[j_2] .. x[j_k],
    the homogeneous polynomial map associated with a cubical tensor.
    """
    t = as_tensor(t)
    n = require_cubical(t)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != n:
        raise ShapeError(f"vector length {x.shape[0]} does not match dim {n}")
    if t.ndim < 2:
        return t.reshape(n)
    # one matmul against x⊗..⊗x instead of k-1 mode products; same flops to
    # first order, far fewer array-call round trips on small tensors
    v = x
    for _ in range(t.ndim - 2):
        v = np.multiply.outer(v, x).reshape(-1)
    return t.reshape(n, -1) @ v


def inner(a, b) -> float:
    """Tensor inner product: sum of elementwise products."""
    a = as_tensor(a)
    b = as_tensor(b)
    if a.shape != b.shape:
        raise ShapeError(f"inner product needs equal dims, got {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def outer(a, b) -> np.ndarray:
    """Tensor outer product; orders add, scalars (order 0) just scale."""
    a = as_tensor(a)
    b = as_tensor(b)
    return np.ascontiguousarray(np.tensordot(a, b, axes=0))


def einstein_product(t, x) -> np.ndarray:
    """Einstein product T * X for T of order 2k with interleaved dims n1,m1,..,nk,mk.

    Contracts every odd mode of T (sizes m_p) against X (dims m1..mk); the
    result has dims n1..nk. Complex X is accepted (used by U-eigen residuals).
    """
    t = as_tensor(t)
    x = np.asarray(x)
    if x.dtype.kind != "c":
        x = np.asarray(x, dtype=np.float64)
    if t.ndim % 2 != 0 or t.ndim == 0:
        raise ShapeError(f"Einstein product needs even order, got {t.ndim}")
    k = t.ndim // 2
    if x.ndim != k:
        raise ShapeError(f"expected order-{k} operand, got order {x.ndim}")
    if tuple(t.shape[1::2]) != x.shape:
        raise ShapeError(
            f"interleaved dims {t.shape[1::2]} do not match operand dims {x.shape}"
        )
    out = np.tensordot(t, x, axes=(list(range(1, 2 * k, 2)), list(range(k))))
    return np.ascontiguousarray(out)


def l1_norm(t) -> float:
    return float(np.sum(np.abs(as_tensor(t))))


def frobenius_norm(t) -> float:
    return float(np.sqrt(np.sum(as_tensor(t) ** 2)))


def norms(t) -> tuple[float, float]:
    """Return (l1, frobenius)."""
    t = as_tensor(t)
    return l1_norm(t), frobenius_norm(t)


def subview(t, fixed: dict[int, int]) -> np.ndarray:
    """Copy the sub-tensor obtained by fixing some modes at given indices.

    `fixed` maps mode -> index. Fixing one mode gives a slice, fixing all but
    one gives a fiber, fixing all gives a 0-d scalar tensor.
    """
    t = as_tensor(t)
    idx = []
    for p in range(t.ndim):
        if p in fixed:
            j = fixed[p]
            if not 0 <= j < t.shape[p]:
                raise ShapeError(f"index {j} out of range for mode {p} (size {t.shape[p]})")
            idx.append(j)
        else:
            idx.append(slice(None))
    for p in fixed:
        if not 0 <= p < t.ndim:
            raise ShapeError(f"mode {p} out of range for order-{t.ndim} tensor")
    return np.array(t[tuple(idx)])  # np.array copies and keeps 0-d results 0-d


def fiber(t, p: int, rest: tuple[int, ...]) -> np.ndarray:
    """Mode-p fiber: all other modes fixed at `rest` (in ascending mode order)."""
    t = as_tensor(t)
    others = [q for q in range(t.ndim) if q != p]
    if len(rest) != len(others):
        raise ShapeError(f"expected {len(others)} fixed indices, got {len(rest)}")
    return subview(t, dict(zip(others, rest)))


def slice_at(t, p: int, index: int) -> np.ndarray:
    """Order k-1 sub-tensor with mode p fixed."""
    return subview(t, {p: index})


def unfold(t, p: int) -> np.ndarray:
    """Mode-p unfolding: rows are mode-p fibers, columns ordered lexicographically
    over the remaining modes in ascending mode order (last fastest)."""
    t = as_tensor(t)
    if not 0 <= p < t.ndim:
        raise ShapeError(f"mode {p} out of range for order-{t.ndim} tensor")
    return np.moveaxis(t, p, 0).reshape(t.shape[p], -1)


def fold(m, p: int, dims) -> np.ndarray:
    """Inverse of unfold for the stated column ordering."""
    dims = tuple(int(d) for d in dims)
    m = np.asarray(m, dtype=np.float64)
    rest = dims[:p] + dims[p + 1:]
    return np.ascontiguousarray(np.moveaxis(m.reshape((dims[p],) + rest), 0, p))


def _index_grids(shape):
    return np.indices(shape)


def structure_check(t, kind, tol: float = 1e-10) -> bool:
    """True iff t has the given structure within absolute tolerance tol.

    Diagonal / Supersymmetric / Triangular kinds require a cubical tensor.
    Stochastic means nonnegative entries with every mode-0 row (contraction of
    all remaining modes with ones) summing to 1.
    """
    t = as_tensor(t)
    if isinstance(kind, str):
        kind = StructureKind(kind.lower())
    if kind in (StructureKind.DIAGONAL, StructureKind.SUPERSYMMETRIC,
                StructureKind.UPPER_TRIANGULAR, StructureKind.LOWER_TRIANGULAR):
        require_cubical(t)
    if kind is StructureKind.SUPERSYMMETRIC:
        for perm in itertools.permutations(range(t.ndim)):
            if np.max(np.abs(t - np.transpose(t, perm))) > tol:
                return False
        return True
    if kind is StructureKind.STOCHASTIC:
        if np.min(t) < -tol:
            return False
        sums = t.sum(axis=tuple(range(1, t.ndim))) if t.ndim > 1 else t
        return bool(np.max(np.abs(sums - 1.0)) <= tol)
    grids = _index_grids(t.shape)
    if kind is StructureKind.DIAGONAL:
        off = np.zeros(t.shape, dtype=bool)
        for g in grids[1:]:
            off |= g != grids[0]
    elif kind is StructureKind.UPPER_TRIANGULAR:
        off = np.zeros(t.shape, dtype=bool)
        for a, b in zip(grids, grids[1:]):
            off |= a > b
    elif kind is StructureKind.LOWER_TRIANGULAR:
        off = np.zeros(t.shape, dtype=bool)
        for a, b in zip(grids, grids[1:]):
            off |= a < b
    else:
        raise ValueError(f"unknown structure kind {kind!r}")
    if not off.any():
        return True
    return bool(np.max(np.abs(t[off])) <= tol)


def symmetrize(t) -> np.ndarray:
    """Average over all k! index permutations; result is supersymmetric.

    The average is accumulated once per index orbit and broadcast back to
    every member, so the output is exactly supersymmetric and a second
    application reproduces it bit for bit (already-symmetric input is
    returned as a plain copy).
    """
    t = as_tensor(t)
    require_cubical(t)
    k = t.ndim
    transposes = [np.transpose(t, perm) for perm in itertools.permutations(range(k))]
    if all(np.array_equal(tp, t) for tp in transposes):
        return t.copy()
    acc = np.zeros_like(t)
    for tp in transposes:
        acc += tp
    # Gather each entry from its orbit representative (sorted index tuple).
    grids = np.indices(t.shape).reshape(k, -1)
    flat = np.ravel_multi_index(tuple(np.sort(grids, axis=0)), t.shape)
    out = acc.reshape(-1)[flat].reshape(t.shape) / math.factorial(k)
    return np.ascontiguousarray(out)
