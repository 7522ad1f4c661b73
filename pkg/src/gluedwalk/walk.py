"""Coined walk on the 2n-path with biased two-region coins.

States live on the directed arcs (vertex, L/R) with the two nonexistent end
arcs removed, 4n-2 in total, stored vertex-major:

    (1,R), (2,L), (2,R), ..., (2n-1,L), (2n-1,R), (2n,L).

The coin reflects each interior vertex's (L, R) pair about (sqrt(p), sqrt(q))
on the first half and (sqrt(q), sqrt(p)) on the second half, leaving the two
end arcs untouched; the shift swaps amplitudes along each edge.  One step is
shift(coin(state)).  The complete eigensystem of the step operator lifts
from the path-matrix eigensystem: every interior matrix eigenvalue cos(phi)
yields the conjugate eigenphase pair exp(+/- i phi).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .jacobi import Eigenpair, WalkParams

__all__ = [
    "Chirality",
    "ArcIndex",
    "WalkState",
    "UnitaryEigenpair",
    "arc_count",
    "apply_coin",
    "apply_shift",
    "step",
    "position_distribution",
    "lift_eigenpairs",
    "unitary_residual",
]

Chirality = Literal["L", "R"]


def arc_count(n: int) -> int:
    """Number of valid arcs on the 2n-path."""
    return 4 * n - 2


@dataclass(frozen=True)
class ArcIndex:
    """A directed arc: the walker sits at `vertex` moving in direction
    `chirality` (L toward vertex 1, R toward vertex 2n).  The arcs (1, L)
    and (2n, R) do not exist because the ends reflect."""

    vertex: int
    chirality: Chirality

    def flat(self, n: int) -> int:
        """Index of this arc in the vertex-major layout of length 4n - 2."""
        v, c = self.vertex, self.chirality
        if c not in ("L", "R"):
            raise ValueError(f"chirality must be 'L' or 'R', got {c!r}")
        if not 1 <= v <= 2 * n:
            raise ValueError(f"vertex must lie in 1..{2 * n}, got {v}")
        if (v == 1 and c == "L") or (v == 2 * n and c == "R"):
            raise ValueError(f"arc ({v}, {c}) does not exist: the ends reflect")
        return 2 * v - 3 if c == "L" else 2 * v - 2


@dataclass(frozen=True, eq=False)
class WalkState:
    """Complex amplitude vector over the 4n-2 arcs; treated as immutable
    (operators return new states)."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 6 or (amps.size + 2) % 4 != 0:
            raise ValueError(
                f"amplitude vector of length 4n-2 (n >= 2) expected, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return (self.amplitudes.size + 2) // 4

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def point_mass(cls, n: int, vertex: int, chirality: Chirality) -> "WalkState":
        amps = np.zeros(arc_count(n), dtype=complex)
        amps[ArcIndex(vertex, chirality).flat(n)] = 1.0
        return cls(amps)


@dataclass(frozen=True, eq=False)
class UnitaryEigenpair:
    """Eigenpair of the one-step operator: eigenvalue mu = exp(i*phi) on the
    unit circle, unit-norm eigenvector u, and the path-matrix eigenvalue
    cos(phi) it was lifted from."""

    mu: complex
    phi: float
    u: np.ndarray
    source_lambda: float


@lru_cache(maxsize=None)
def _coin_tables(n: int, p: float) -> tuple[np.ndarray, float, np.ndarray]:
    """Diagonal and off-diagonal coin entries per interior vertex 2..2n-1."""
    q = 1.0 - p
    off = 2.0 * math.sqrt(p * q)
    top = np.empty(2 * n - 2)
    bot = np.empty(2 * n - 2)
    top[: n - 1] = 2.0 * p - 1.0
    top[n - 1 :] = 2.0 * q - 1.0
    bot[: n - 1] = 2.0 * q - 1.0
    bot[n - 1 :] = 2.0 * p - 1.0
    return top, off, bot


def _coin_array(amps: np.ndarray, n: int, p: float) -> np.ndarray:
    """Coin on a 1-D state or on a (4n-2, m) batch of states (axis 0)."""
    top, off, bot = _coin_tables(n, p)
    if amps.ndim == 2:
        top = top[:, None]
        bot = bot[:, None]
    left = amps[1:-1:2]
    right = amps[2::2]
    out = amps.copy()
    out[1:-1:2] = top * left + off * right
    out[2::2] = off * left + bot * right
    return out


def _shift_array(amps: np.ndarray) -> np.ndarray:
    """Shift as the swap of the 2n-1 adjacent arc pairs ((i,R), (i+1,L))."""
    paired = amps.reshape((amps.shape[0] // 2, 2) + amps.shape[1:])
    return paired[:, ::-1].reshape(amps.shape).copy()


def _vertex_marginals(amps: np.ndarray) -> np.ndarray:
    """Per-vertex probability mass of a state (or batch), shape (2n, ...)."""
    prob = amps.real * amps.real + amps.imag * amps.imag
    mid = prob[1:-1].reshape((prob.shape[0] // 2 - 1, 2) + prob.shape[1:]).sum(axis=1)
    out = np.empty((mid.shape[0] + 2,) + prob.shape[1:])
    out[0] = prob[0]
    out[-1] = prob[-1]
    out[1:-1] = mid
    return out


def _check_dims(state: WalkState, params: WalkParams) -> None:
    if state.amplitudes.size != arc_count(params.n):
        raise ValueError(
            f"state has {state.amplitudes.size} arcs, parameters require {arc_count(params.n)}"
        )


def apply_coin(state: WalkState, params: WalkParams) -> WalkState:
    """Apply the per-vertex coin; an involution and norm-preserving."""
    _check_dims(state, params)
    return WalkState(_coin_array(state.amplitudes, params.n, params.p))


def apply_shift(state: WalkState) -> WalkState:
    """Move amplitudes along their arcs: (i,R) -> (i+1,L), (i,L) -> (i-1,R)."""
    return WalkState(_shift_array(state.amplitudes))


def step(state: WalkState, params: WalkParams) -> WalkState:
    """One walk step: coin then shift."""
    _check_dims(state, params)
    return WalkState(_shift_array(_coin_array(state.amplitudes, params.n, params.p)))


def position_distribution(state: WalkState) -> np.ndarray:
    """Occupation probabilities per vertex of a unit-norm state."""
    nrm = state.norm()
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"state must be normalised, got |psi| = {nrm!r}")
    return _vertex_marginals(state.amplitudes)


def _embed(pair: Eigenpair, params: WalkParams) -> np.ndarray:
    """Arc-space embedding of a normalised path-matrix eigenvector: endpoint
    components sit on the single end arcs, interior components spread over
    (L, R) with the coin weights of their region."""
    n, p, q = params.n, params.p, params.q
    vt = pair.vector / np.linalg.norm(pair.vector)
    rp, rq = math.sqrt(p), math.sqrt(q)
    a = np.zeros(arc_count(n), dtype=complex)
    a[0] = vt[0]
    a[-1] = vt[-1]
    a[1:-1:2] = np.concatenate([rp * vt[1:n], rq * vt[n : 2 * n - 1]])
    a[2::2] = np.concatenate([rq * vt[1:n], rp * vt[n : 2 * n - 1]])
    return a


def lift_eigenpairs(
    jacobi_pairs: list[Eigenpair], params: WalkParams
) -> list[UnitaryEigenpair]:
    """Lift a complete 2n-point path-matrix eigensystem to all 4n-2
    eigenpairs of the step operator.

    The +1 and -1 pairs lift directly (their embeddings are fixed points of
    coin and shift up to sign); each interior eigenvalue cos(phi) yields the
    conjugate pair a - exp(+/- i phi) * shift(a), normalised numerically.
    Output order: +1 first, interior pairs by descending source eigenvalue
    with the + phase before the - phase, then -1.
    """
    n = params.n
    if len(jacobi_pairs) != 2 * n:
        raise ValueError(
            f"need the complete eigensystem of {2 * n} pairs, got {len(jacobi_pairs)}"
        )
    plus = [pr for pr in jacobi_pairs if pr.kind == "plus_one"]
    minus = [pr for pr in jacobi_pairs if pr.kind == "minus_one"]
    interior = [pr for pr in jacobi_pairs if pr.kind == "interior"]
    if len(plus) != 1 or len(minus) != 1 or len(interior) != 2 * n - 2:
        raise ValueError("eigensystem must hold one +1, one -1 and 2n-2 interior pairs")
    escaped = [pr.eigenvalue for pr in interior if not abs(pr.eigenvalue) < 1.0]
    if escaped:
        raise ValueError(f"interior eigenvalues must lie strictly inside (-1, 1): {escaped}")
    interior = sorted(interior, key=lambda pr: -pr.eigenvalue)

    out: list[UnitaryEigenpair] = []
    a_plus = _embed(plus[0], params)
    out.append(
        UnitaryEigenpair(1.0 + 0.0j, 0.0, a_plus / np.linalg.norm(a_plus), 1.0)
    )
    for pair in interior:
        a = _embed(pair, params)
        b = _shift_array(a)
        phi = math.acos(pair.eigenvalue)
        for s in (1.0, -1.0):
            mu = cmath.exp(1j * s * phi)
            u = a - mu * b
            out.append(
                UnitaryEigenpair(mu, s * phi, u / np.linalg.norm(u), pair.eigenvalue)
            )
    a_minus = _embed(minus[0], params)
    out.append(
        UnitaryEigenpair(-1.0 + 0.0j, math.pi, a_minus / np.linalg.norm(a_minus), -1.0)
    )
    return out


def unitary_residual(pair: UnitaryEigenpair, params: WalkParams) -> float:
    """Sup-norm residual |U u - mu u| measured through the step operator."""
    stepped = _shift_array(_coin_array(pair.u, params.n, params.p))
    return float(np.max(np.abs(stepped - pair.mu * pair.u)))
