"""Simulation and stability classification of homogeneous polynomial dynamics.

The systems are x(t+1) = T x(t)^{k-1} (discrete) and dx/dt = T x^{k-1}
(continuous) for a cubical supersymmetric T. When T is orthogonally
decomposable the dynamics decouple along the decomposition directions, which
is what the analytic classifiers exploit; simulation only corroborates, it
never overrides the analytic verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import tensor as tn
from .decomp import odeco
from .errors import ShapeError
from .spectral import SolverOptions, _require_supersymmetric

BOUNDARY_BAND = 1e-12


class Verdict(enum.Enum):
    STABLE = "Stable"
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    UNSTABLE = "Unstable"
    UNDECIDABLE = "Undecidable"


class DynamicsMode(enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class ModeTest:
    """One decomposition direction: eigenvalue, x0 coefficient, test value."""

    value: float
    alpha: float
    test: float
    boundary: bool


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    diverged: bool = False
    blowup_time: float | None = None


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: Verdict
    evidence: tuple[ModeTest, ...]
    mode: DynamicsMode


def _check_system(t, x0):
    t = tn.as_tensor(t)
    n = tn.require_cubical(t)
    if t.ndim < 2:
        raise ShapeError("dynamics need a tensor of order >= 2")
    _require_supersymmetric(t)
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    if x0.shape[0] != n:
        raise ShapeError(f"x0 has length {x0.shape[0]}, tensor dimension is {n}")
    return t, x0, n


def simulate_discrete(t, x0, steps: int) -> Trajectory:
    """Iterate x(t+1) = T x(t)^{k-1} exactly for `steps` steps.

    The trajectory is truncated at the first non-finite state, with the
    divergence flag set and blowup_time holding that step index.
    """
    t, x, _ = _check_system(t, x0)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    states = [x]
    diverged = False
    blowup = None
    for step in range(1, steps + 1):
        x = tn.apply_polynomial(t, x)
        if not np.all(np.isfinite(x)):
            diverged = True
            blowup = float(step)
            break
        states.append(x)
    return Trajectory(np.arange(len(states)), np.array(states), diverged, blowup)


def simulate_continuous(t, x0, t_end: float, dt: float = 1e-3) -> Trajectory:
    """Integrate dx/dt = T x^{k-1} with classic fixed-step 4th-order Runge-Kutta.

    The step is adjusted to the nearest value dividing t_end exactly, so the
    sample grid always ends on t_end. A non-finite state truncates the
    trajectory with the divergence flag set and blowup_time at the step where
    it appeared.
    """
    t, x, _ = _check_system(t, x0)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    nsteps = max(1, round(t_end / dt)) if t_end > 0 else 0
    h = t_end / nsteps if nsteps else 0.0
    times = [0.0]
    states = [x]
    diverged = False
    blowup = None
    for i in range(1, nsteps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = tn.apply_polynomial(t, x)
            k2 = tn.apply_polynomial(t, x + 0.5 * h * k1)
            k3 = tn.apply_polynomial(t, x + 0.5 * h * k2)
            k4 = tn.apply_polynomial(t, x + h * k3)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            diverged = True
            blowup = i * h
            break
        times.append(i * h)
        states.append(x)
    return Trajectory(np.array(times), np.array(states), diverged, blowup)


def _verdict_continuous(tests: np.ndarray) -> tuple[Verdict, np.ndarray]:
    boundary = np.abs(tests) <= BOUNDARY_BAND
    if np.any(tests > BOUNDARY_BAND):
        return Verdict.UNSTABLE, boundary
    if np.any(boundary) or tests.size == 0:
        return Verdict.STABLE, boundary
    return Verdict.ASYMPTOTICALLY_STABLE, boundary


def _verdict_discrete(taus: np.ndarray) -> tuple[Verdict, np.ndarray]:
    boundary = np.abs(taus - 1.0) <= BOUNDARY_BAND
    if np.any(taus > 1.0 + BOUNDARY_BAND):
        return Verdict.UNSTABLE, boundary
    if np.any(boundary) or taus.size == 0:
        return Verdict.STABLE, boundary
    return Verdict.ASYMPTOTICALLY_STABLE, boundary


def _decompose(t, x0, opts):
    # k=2 is the linear case: exact symmetric eigendecomposition
    if t.ndim == 2:
        values, vectors = np.linalg.eigh(0.5 * (t + t.T))
        return values, vectors, True
    d = odeco(t, opts)
    return d.values, d.vectors, d.is_odeco

def classify_stability_continuous(t, x0, opts: SolverOptions | None = None) -> StabilityVerdict:
    """Stability of the origin of dx/dt = T x^{k-1} via orthogonal decomposition.

    Each decomposition direction u_j evolves independently as a scalar ODE on
    α_j = ⟨x0, u_j⟩ with test value λ_j α_j^{k-2}: any positive test is
    unstable growth, all strictly negative is asymptotic decay, and a test
    within 1e-12 of zero is a flagged boundary mode capping the verdict at
    Stable. For k=2 the tests reduce to the eigenvalue signs of the matrix.
    The verdict describes the dynamics within the span of the returned
    decomposition; when the tensor is not orthogonally decomposable within
    tolerance the verdict is Undecidable.
    """
    t, x0, _ = _check_system(t, x0)
    k = t.ndim
    values, vectors, ok = _decompose(t, x0, opts)
    alphas = vectors.T @ x0
    tests = np.asarray(values) * alphas ** (k - 2)
    verdict, boundary = _verdict_continuous(tests)
    if not ok:
        verdict = Verdict.UNDECIDABLE
    evidence = tuple(
        ModeTest(float(v), float(a), float(s), bool(b))
        for v, a, s, b in zip(values, alphas, tests, boundary)
    )
    return StabilityVerdict(verdict, evidence, DynamicsMode.CONTINUOUS)


def classify_stability_discrete(t, x0, opts: SolverOptions | None = None) -> StabilityVerdict:
    """Stability of the origin of x(t+1) = T x(t)^{k-1}.

    Per decomposition direction the test is |α_j|·|λ_j|^{1/(k-2)} compared
    against 1 (magnitudes taken before the root, so negative eigenvalues are
    well-defined): any test above 1 is Unstable, a test within 1e-12 of 1 is
    a flagged boundary capping at Stable, all below is AsymptoticallyStable.
    For k=2 the test is the spectral radius contribution |λ_j| and x0 plays
    no role. Undecidable when the tensor is not orthogonally decomposable.
    """
    t, x0, _ = _check_system(t, x0)
    k = t.ndim
    values, vectors, ok = _decompose(t, x0, opts)
    alphas = vectors.T @ x0
    values = np.asarray(values)
    if k == 2:
        taus = np.abs(values)
    else:
        taus = np.abs(alphas) * np.abs(values) ** (1.0 / (k - 2))
    verdict, boundary = _verdict_discrete(taus)
    if not ok:
        verdict = Verdict.UNDECIDABLE
    evidence = tuple(
        ModeTest(float(v), float(a), float(s), bool(b))
        for v, a, s, b in zip(values, alphas, taus, boundary)
    )
    return StabilityVerdict(verdict, evidence, DynamicsMode.DISCRETE)
