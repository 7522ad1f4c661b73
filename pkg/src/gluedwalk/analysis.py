"""Long-run position statistics of the path walk and localization bounds.

The time-averaged occupation distribution is computed two ways: exactly from
the walk spectrum (with all eigenphases distinct, only the diagonal spectral
terms survive the running average) and empirically as a Cesaro mean of
evolved distributions.  Keeping just the +1/-1 spectral terms already yields
closed-form lower bounds, which is the localization statement this module
certifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .jacobi import EigensystemError, WalkParams, eigen_pm1, full_eigensystem
from .walk import _coin_array, _shift_array, _vertex_marginals, arc_count, lift_eigenpairs

__all__ = [
    "TimeAveragedDist",
    "BoundReport",
    "time_avg_spectral",
    "time_avg_empirical",
    "lower_bound",
    "lower_bound_generic",
    "limit_bound",
    "bound_report",
    "symmetry_errors",
]

PHASE_GAP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TimeAveragedDist:
    """Matrix of time-averaged occupation probabilities.

    values[i-1, x-1] is the long-run probability of finding the walker at
    vertex x when started from vertex i with evenly mixed initial chirality
    (single-arc starts at the two ends).
    """

    n: int
    values: np.ndarray
    method: Literal["spectral", "empirical"]
    horizon: int | None = None


@dataclass(frozen=True, eq=False)
class BoundReport:
    """A bound matrix, the spectral time average it bounds, the entrywise
    margin, and (when requested) the applicable large-n limit value."""

    bound: np.ndarray
    dist: TimeAveragedDist
    margin: np.ndarray
    limit_p_gt_q: float | None = None
    limit_p_lt_q: float | None = None


def _endpoint_scale(size: int) -> np.ndarray:
    """Per-start-vertex weight of the spectral sum: 1 at the single-arc ends,
    1/2 at interior vertices (the chirality average)."""
    scale = np.full(size, 0.5)
    scale[0] = scale[-1] = 1.0
    return scale


def _require_distinct_phases(pairs) -> None:
    """Time averaging keeps only diagonal terms by *index*; that is sound
    only if all eigenphases are pairwise distinct, so check it up front
    instead of comparing phases with a tolerance later."""
    phases = np.sort(np.mod([pair.phi for pair in pairs], 2.0 * math.pi))
    gaps = np.diff(phases)
    wrap = 2.0 * math.pi - (phases[-1] - phases[0])
    smallest = float(min(np.min(gaps), wrap))
    if smallest <= PHASE_GAP_TOL:
        raise EigensystemError(
            f"eigenphases too close for time averaging: min gap {smallest:.3e}"
        )


def time_avg_spectral(params: WalkParams) -> TimeAveragedDist:
    """Exact time average from the spectral decomposition of the walk."""
    pairs = lift_eigenpairs(full_eigensystem(params), params)
    _require_distinct_phases(pairs)
    weights = np.stack([_vertex_marginals(pair.u) for pair in pairs])
    overlap = weights.T @ weights
    scale = _endpoint_scale(2 * params.n)
    return TimeAveragedDist(params.n, scale[:, None] * overlap, "spectral")


def time_avg_empirical(params: WalkParams, horizon: int) -> TimeAveragedDist:
    """Cesaro mean over times 0..horizon-1 of the evolved distributions.

    The expectation over the initial chirality is an exact half-half average
    of the two pure runs (no sampling); all 4n-2 arc starts are evolved as
    one batch.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    n = params.n
    states = np.eye(arc_count(n), dtype=complex)
    acc = np.zeros((2 * n, arc_count(n)))
    for t in range(horizon):
        acc += _vertex_marginals(states)
        if t < horizon - 1:
            states = _shift_array(_coin_array(states, n, params.p))
    acc /= horizon
    values = np.empty((2 * n, 2 * n))
    values[0] = acc[:, 0]
    values[-1] = acc[:, -1]
    values[1:-1] = 0.5 * (acc[:, 1:-1:2] + acc[:, 2::2]).T
    return TimeAveragedDist(n, values, "empirical", horizon)


def _mirror_quadrant(quad: np.ndarray) -> np.ndarray:
    """Extend an n-by-n first-quadrant matrix to the full 2n-by-2n matrix via
    the two mirror symmetries of the time average.  This is the one place
    symmetry is used as a computation device; the symmetries themselves are
    certified on the spectral result."""
    n = quad.shape[0]
    full = np.empty((2 * n, 2 * n))
    full[:n, :n] = quad
    full[n:, :n] = quad[::-1, :]
    full[:n, n:] = quad[:, ::-1]
    full[n:, n:] = quad[::-1, ::-1]
    return full


def lower_bound(params: WalkParams) -> np.ndarray:
    """Closed-form localization lower bound on the time average, as a full
    2n x 2n matrix.

    The closed form is indeterminate at p = q (both displayed factors
    vanish); that case is routed to the generic +1/-1 eigenterm bound, which
    stays well defined through the symmetric-point norm.
    """
    n, p, q = params.n, params.p, params.q
    if p == q:
        return lower_bound_generic(params)
    r = q / p
    edge = 2.0 * p - r ** (n - 1)
    idx = np.arange(1, n + 1, dtype=float)
    start_weight = np.where(idx == 1.0, 1.0, 2.0 * q)
    row = (p - q) ** 2 * r ** (idx - 1.0) / (2.0 * start_weight * edge * edge)
    col = np.where(idx == 1.0, 1.0, r ** (idx - 1.0) / q)
    return _mirror_quadrant(np.outer(row, col))


def lower_bound_generic(params: WalkParams) -> np.ndarray:
    """Lower bound as the +1/-1 partial sum of the spectral time average.

    Works for every p including p = q.  Being a partial sum of nonnegative
    spectral terms it can never exceed the full time average.
    """
    plus, minus = eigen_pm1(params)
    w_plus = plus.vector**2 / plus.norm_sq
    w_minus = minus.vector**2 / minus.norm_sq
    overlap = np.outer(w_plus, w_plus) + np.outer(w_minus, w_minus)
    scale = _endpoint_scale(2 * params.n)
    return scale[:, None] * overlap


def limit_bound(
    p: float, i: int | None = None, x: int | None = None, k: int | None = None
) -> float:
    """Large-n limit of the localization lower bound.

    For p > 1/2 the limit is taken at fixed finite (i, x); pass None for an
    index diverging with n, where the limit is 0.  For p < 1/2 the limit is
    controlled by k = lim (2n - (i + x)); omit k for the divergent case,
    where the limit is again 0.  Undefined at p = 1/2.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly inside (0, 1), got {p}")
    q = 1.0 - p
    if p == q:
        raise ValueError("the limit bound is defined only for p != 1/2")
    if p > q:
        if k is not None:
            raise ValueError("k applies only to the p < 1/2 case")
        if i is None or x is None:
            return 0.0
        if i < 1 or x < 1:
            raise ValueError("vertex indices must be >= 1")
        r = q / p
        start_weight = 1.0 if i == 1 else 2.0 * q
        pos_weight = 1.0 if x == 1 else q
        return r ** (i + x - 2) / (2.0 * start_weight * pos_weight) * ((1.0 - r) / 2.0) ** 2
    if k is None:
        return 0.0
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    r = p / q
    return r**k * ((1.0 - r) / 2.0) ** 2


def bound_report(
    params: WalkParams,
    i: int | None = None,
    x: int | None = None,
    k: int | None = None,
) -> BoundReport:
    """Bound, spectral distribution and margin in one record, with the
    applicable limit value when the corresponding indices are supplied."""
    dist = time_avg_spectral(params)
    bound = lower_bound(params)
    limit_gt = limit_lt = None
    if params.p > params.q and i is not None and x is not None:
        limit_gt = limit_bound(params.p, i=i, x=x)
    if params.p < params.q and k is not None:
        limit_lt = limit_bound(params.p, i=i, x=x, k=k)
    return BoundReport(
        bound=bound,
        dist=dist,
        margin=dist.values - bound,
        limit_p_gt_q=limit_gt,
        limit_p_lt_q=limit_lt,
    )


def symmetry_errors(dist: TimeAveragedDist) -> tuple[float, float]:
    """Max deviations from the start-vertex mirror symmetry and the position
    mirror symmetry."""
    v = dist.values
    return (
        float(np.max(np.abs(v - v[::-1, :]))),
        float(np.max(np.abs(v - v[:, ::-1]))),
    )
