"""Tensor Kronecker product, its index calculus, and factored fast paths.

The composite index convention is 0-based: mode p of B⊗C ranges over
i_p * m_p + j_p where i indexes B and j indexes C. KronFactored keeps a chain
of factors unmaterialized; materialization is explicit and refuses to allocate
past a configurable element budget.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import tensor as tn
from .errors import BudgetError, ShapeError

DEFAULT_BUDGET = 2 ** 27
BUDGET_ENV = "KRONTEN_BUDGET"


def element_budget() -> int:
    """Max element count materialize() will allocate; override via KRONTEN_BUDGET."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive, got {value}")
    return value


def _kron_generic(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    # dtype-agnostic core shared with the complex U-eigen composition path
    if b.ndim != c.ndim:
        raise ShapeError(f"order mismatch: {b.ndim} vs {c.ndim}")
    if b.ndim == 0:
        return np.ascontiguousarray(b * c)
    k = b.ndim
    out = np.tensordot(b, c, axes=0)
    # axes are (i_1..i_k, j_1..j_k); interleave to (i_1,j_1,..,i_k,j_k)
    order = [None] * (2 * k)
    order[0::2] = range(k)
    order[1::2] = range(k, 2 * k)
    out = np.transpose(out, order)
    dims = tuple(b.shape[p] * c.shape[p] for p in range(k))
    return np.ascontiguousarray(out.reshape(dims))


def kron(b, c) -> np.ndarray:
    """Tensor Kronecker product of two equal-order tensors.

    Entry of the result at composite index (i_p * m_p + j_p)_p is B[i] * C[j].
    Equivalently each entry of B scales a full copy of C.
    """
    return _kron_generic(tn.as_tensor(b), tn.as_tensor(c))


def kron_index(i, j, m) -> tuple[int, ...]:
    """Composite multi-index of B⊗C for index i of B and j of C (m = dims of C)."""
    i = tuple(int(v) for v in i)
    j = tuple(int(v) for v in j)
    m = tuple(int(v) for v in m)
    if not len(i) == len(j) == len(m):
        raise ShapeError(f"index lengths differ: {len(i)}, {len(j)}, {len(m)}")
    for p, (jp, mp) in enumerate(zip(j, m)):
        if not 0 <= jp < mp:
            raise ShapeError(f"mode {p}: index {jp} out of range for size {mp}")
        if i[p] < 0:
            raise ShapeError(f"mode {p}: negative index {i[p]}")
    return tuple(ip * mp + jp for ip, jp, mp in zip(i, j, m))


def kron_inverse_index(c, m) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Recover (i, j) from a composite index; inverse of kron_index."""
    c = tuple(int(v) for v in c)
    m = tuple(int(v) for v in m)
    if len(c) != len(m):
        raise ShapeError(f"index length {len(c)} does not match {len(m)} modes")
    i = []
    j = []
    for p, (cp, mp) in enumerate(zip(c, m)):
        if cp < 0:
            raise ShapeError(f"mode {p}: negative composite index {cp}")
        q, r = divmod(cp, mp)
        i.append(q)
        j.append(r)
    return tuple(i), tuple(j)


@dataclass(frozen=True)
class KronFactored:
    """A Kronecker chain factor_1 ⊗ … ⊗ factor_r held without materialization.

    All factors must share order k; by associativity any number >= 2 of factors
    represents the same object as nested pairwise products.
    """

    factors: tuple[np.ndarray, ...]
    virtual_dims: tuple[int, ...] = field(init=False)

    def __init__(self, factors):
        factors = tuple(tn.as_tensor(f) for f in factors)
        if len(factors) < 2:
            raise ShapeError("KronFactored needs at least two factors")
        k = factors[0].ndim
        if any(f.ndim != k for f in factors):
            orders = [f.ndim for f in factors]
            raise ShapeError(f"factors must share order, got {orders}")
        dims = tuple(
            math.prod(f.shape[p] for f in factors) for p in range(k)
        )
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "virtual_dims", dims)

    @property
    def order(self) -> int:
        return self.factors[0].ndim

    def materialize(self) -> np.ndarray:
        """Dense equivalent; raises BudgetError above the element budget."""
        count = math.prod(self.virtual_dims) if self.virtual_dims else 1
        budget = element_budget()
        if count > budget:
            raise BudgetError(
                f"materializing {self.virtual_dims} needs {count} elements, "
                f"budget is {budget} (set {BUDGET_ENV} to raise it)"
            )
        out = self.factors[0]
        for f in self.factors[1:]:
            out = kron(out, f)
        return out


def factored_mode_product(f: KronFactored, ms, p: int) -> KronFactored:
    """Mode-p product against a Kronecker-factored matrix, factor by factor.

    Materializing the result equals mode_product(f.materialize(), kron(Ms), p).
    """
    ms = [np.asarray(m, dtype=np.float64) for m in ms]
    if len(ms) != len(f.factors):
        raise ShapeError(f"expected {len(f.factors)} matrices, got {len(ms)}")
    if not 0 <= p < f.order:
        raise ShapeError(f"mode {p} out of range for order-{f.order} product")
    new = [tn.mode_product(t, m, p) for t, m in zip(f.factors, ms)]
    return KronFactored(new)


def factored_polynomial(f: KronFactored, xs) -> KronFactored:
    """Polynomial map of a factored tensor at a separable point.

    With x = x_1 ⊗ … ⊗ x_r the vector F x^{k-1} separates into per-factor
    polynomial applications; the result is returned factored (order-1 factors)
    and can be materialized like any KronFactored.
    """
    xs = [np.asarray(x, dtype=np.float64).reshape(-1) for x in xs]
    if len(xs) != len(f.factors):
        raise ShapeError(f"expected {len(f.factors)} vectors, got {len(xs)}")
    parts = [tn.apply_polynomial(t, x) for t, x in zip(f.factors, xs)]
    return KronFactored(parts)


def factored_norms(f: KronFactored) -> tuple[float, float]:
    """(l1, frobenius) of the virtual tensor via per-factor norm products."""
    l1 = 1.0
    fro = 1.0
    for t in f.factors:
        a, b = tn.norms(t)
        l1 *= a
        fro *= b
    return l1, fro
