"""Shared oracle builders for the test suite.

Everything here is deliberately independent of the library's fast paths:
dense matrices, brute-force determinants and step-by-step evolution, used to
cross-check the closed forms.
"""

from __future__ import annotations

import math

import numpy as np

from gluedwalk.jacobi import JacobiSpec, WalkParams
from gluedwalk.walk import WalkState, arc_count, step


def dense_step_matrix(params: WalkParams) -> np.ndarray:
    """The walk operator as a dense matrix, column by column via step()."""
    dim = arc_count(params.n)
    cols = []
    for j in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[j] = 1.0
        cols.append(step(WalkState(amps), params).amplitudes)
    return np.stack(cols, axis=1)


def random_mirror_spec(rng: np.random.Generator, n: int) -> JacobiSpec:
    """Random mirror-symmetric spec with weights bounded away from zero."""
    alphas = tuple(rng.uniform(-1.0, 1.0, n))
    weights = tuple(rng.uniform(0.05, 1.0, n))
    return JacobiSpec(alphas=alphas, weights=weights)


def dense_trailing_minor(spec: JacobiSpec, k: int, lam: float) -> np.ndarray:
    """The (n-k+1) x (n-k+1) matrix whose determinant det_minor_e computes:
    diagonal lam - a_j for j = n..k, off-diagonal -sqrt(w_j) for j = n-1..k."""
    n = spec.half
    diag = [lam - spec.alphas[j - 1] for j in range(n, k - 1, -1)]
    off = [-math.sqrt(spec.weights[j]) for j in range(n - 1, k - 1, -1)]
    m = np.diag(diag)
    if off:
        m += np.diag(off, 1) + np.diag(off, -1)
    return m


def dense_center_minor(k: int, lam: float, p: float) -> np.ndarray:
    """k x k tridiagonal with lam on the diagonal and -sqrt(pq) off it."""
    q = 1.0 - p
    off = [-math.sqrt(p * q)] * (k - 1)
    m = np.diag([lam] * k)
    if off:
        m += np.diag(off, 1) + np.diag(off, -1)
    return m
