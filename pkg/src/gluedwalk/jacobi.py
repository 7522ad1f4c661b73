"""Mirror-symmetric Jacobi matrices and the spectrum of the biased path walk.

The random walk on the 2n-path with reflecting ends induces the symmetric
tridiagonal matrix with entries sqrt(p_ij * p_ji).  Its characteristic
polynomial splits into two factors built from trailing principal minors; one
factor carries the mirror-symmetric eigenvectors, the other the
antisymmetric ones.  The eigenvalues +1 and -1 and all eigenvector
components have closed forms; the remaining 2n-2 eigenvalues are the roots
of two fixed Chebyshev conditions and are located here by Sturm-count
bisection, then polished on their condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .chebyshev import partial_sum_squares, u_sequence

__all__ = [
    "EigensystemError",
    "WalkParams",
    "JacobiSpec",
    "Eigenpair",
    "build_j2n",
    "det_minor_e",
    "characteristic_factors",
    "eigenvector_from_minors",
    "eigen_pm1",
    "eigen_interior",
    "full_eigensystem",
    "tridiagonal_eigenvalues",
    "residual_inf",
]

# Tolerances fixed by the artifact contract: +/-1 anchor detection and the
# minimum admissible within-family eigenvalue gap before the spectrum counts
# as degenerate.
PM1_COLLISION_TOL = 1e-9
GAP_TOL = 1e-12


class EigensystemError(RuntimeError):
    """Numerically degenerate spectrum: missing, colliding or escaped roots."""


@dataclass(frozen=True)
class WalkParams:
    """Half-length n and transition bias p of the walk on the 2n-path.

    q is always the stored complement 1 - p.  n = 1 is rejected because it
    leaves no interior band structure.
    """

    n: int
    p: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie strictly inside (0, 1), got {self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def size(self) -> int:
        """Path length / matrix dimension 2n."""
        return 2 * self.n

    @classmethod
    def from_arity(cls, n: int, k: int) -> "WalkParams":
        """Parameters of the path walk induced by a glued k-ary tree."""
        if k < 2:
            raise ValueError(f"arity k must be >= 2, got {k}")
        return cls(n=n, p=1.0 / (k + 1))


@dataclass(frozen=True)
class JacobiSpec:
    """Mirror-symmetric tridiagonal matrix of order 2n.

    alphas holds the diagonal values (a_1, ..., a_n) from the centre
    outwards and weights the squared couplings (w_0, ..., w_{n-1}) with w_0
    at the centre, so the realised matrix has diagonal
    (a_n, ..., a_1, a_1, ..., a_n) and off-diagonal
    (sqrt(w_{n-1}), ..., sqrt(w_1), sqrt(w_0), sqrt(w_1), ..., sqrt(w_{n-1})).
    """

    alphas: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.alphas) != len(self.weights):
            raise ValueError("alphas and weights must have equal length n")
        if len(self.alphas) < 2:
            raise ValueError("need n >= 2 diagonal parameters")
        if any(not w > 0.0 for w in self.weights):
            raise ValueError("all weights must be strictly positive")

    @property
    def half(self) -> int:
        return len(self.alphas)

    @property
    def dim(self) -> int:
        return 2 * len(self.alphas)

    def diagonal(self) -> np.ndarray:
        left = np.array(self.alphas[::-1], dtype=float)
        right = np.array(self.alphas, dtype=float)
        return np.concatenate([left, right])

    def offdiagonal(self) -> np.ndarray:
        roots = np.sqrt(np.array(self.weights, dtype=float))
        return np.concatenate([roots[:0:-1], roots])

    def to_dense(self) -> np.ndarray:
        e = self.offdiagonal()
        return np.diag(self.diagonal()) + np.diag(e, 1) + np.diag(e, -1)


@dataclass(frozen=True, eq=False)
class Eigenpair:
    """Eigenvalue, unnormalised eigenvector with first component 1, the
    closed-form squared norm, and the spectral family tag."""

    eigenvalue: float
    vector: np.ndarray
    norm_sq: float
    kind: Literal["plus_one", "minus_one", "interior"]


def build_j2n(params: WalkParams) -> JacobiSpec:
    """Tridiagonal matrix of the biased 2n-path walk: zero diagonal, centre
    coupling q^2, bulk couplings p*q, edge couplings p."""
    n, p, q = params.n, params.p, params.q
    weights = (q * q,) + (p * q,) * (n - 2) + (p,)
    return JacobiSpec(alphas=(0.0,) * n, weights=weights)


def det_minor_e(spec: JacobiSpec, k: int, lam: float) -> float:
    """Determinant of the trailing principal minor spanning a_n .. a_k.

    Evaluated by the backward recurrence
        det(E_k) = (lam - a_k) * det(E_{k+1}) - w_k * det(E_{k+2})
    seeded with det(E_{n+1}) = 1 and det(E_{n+2}) = 0, so k = n + 1 is a
    valid argument returning the empty-matrix determinant 1.
    """
    n = spec.half
    if not 2 <= k <= n + 1:
        raise IndexError(f"k must lie in [2, {n + 1}], got {k}")
    older, newer = 0.0, 1.0
    for j in range(n, k - 1, -1):
        w_j = spec.weights[j] if j < n else 0.0
        older, newer = newer, (lam - spec.alphas[j - 1]) * newer - w_j * older
    return newer


def characteristic_factors(spec: JacobiSpec, lam: float) -> tuple[float, float]:
    """The two factors whose product is det(lam*I - J).

    The first factor (minus branch) vanishes exactly on the eigenvalues with
    mirror-symmetric eigenvectors, the second on the antisymmetric ones.
    """
    e2 = det_minor_e(spec, 2, lam)
    e3 = det_minor_e(spec, 3, lam)
    a1 = spec.alphas[0]
    s0 = math.sqrt(spec.weights[0])
    w1 = spec.weights[1]
    f_minus = (lam - a1 - s0) * e2 - w1 * e3
    f_plus = (lam - a1 + s0) * e2 - w1 * e3
    return f_minus, f_plus


def eigenvector_from_minors(
    spec: JacobiSpec, lam: float, antisymmetric: bool = False
) -> np.ndarray:
    """Closed-form eigenvector assembled from the minor determinants.

    Component j of the first half is det(E_{n-j+2}) divided by the root
    product sqrt(w_{n-j+1} ... w_{n-1}); the second half mirrors the first
    with sign +1 (symmetric family) or -1 (antisymmetric family).  Valid
    when lam is a root of the matching characteristic factor.
    """
    n = spec.half
    half = np.empty(n)
    half[0] = 1.0
    denom = 1.0
    for j in range(2, n + 1):
        denom *= math.sqrt(spec.weights[n - j + 1])
        half[j - 1] = det_minor_e(spec, n - j + 2, lam) / denom
    sign = -1.0 if antisymmetric else 1.0
    return np.concatenate([half, sign * half[::-1]])


def eigen_pm1(params: WalkParams) -> tuple[Eigenpair, Eigenpair]:
    """The closed-form eigenpairs of the path-walk matrix at +1 and -1."""
    return _pm1_pair(params, 1.0), _pm1_pair(params, -1.0)


def _pm1_pair(params: WalkParams, sign: float) -> Eigenpair:
    n, p, q = params.n, params.p, params.q
    sq = math.sqrt(q)
    t = sign * math.sqrt(q / p)
    v = np.empty(2 * n)
    v[0] = 1.0
    for i in range(2, n + 1):
        v[i - 1] = t ** (i - 1) / sq
    for i in range(n + 1, 2 * n):
        v[i - 1] = sign * t ** (2 * n - i) / sq
    v[2 * n - 1] = sign
    if p == q:
        norm_sq = 2.0 * (2 * n - 1)
    else:
        # Cancels badly for p ~ q; callers near the symmetric point should
        # expect the p == q branch only at exact equality.
        norm_sq = 2.0 / (p - q) * (2.0 * p - (q / p) ** (n - 1))
    kind = "plus_one" if sign > 0 else "minus_one"
    return Eigenpair(eigenvalue=sign, vector=v, norm_sq=norm_sq, kind=kind)


def tridiagonal_eigenvalues(diag: np.ndarray, offdiag: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix, ascending.

    Sturm-count bisection from Gershgorin bounds: derivative-free and
    count-correct even for clustered spectra, which is why it is used for
    root isolation instead of a packaged QR solver (the packaged solver
    stays available as an independent cross-check).
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    if d.ndim != 1 or e.shape != (d.size - 1,):
        raise ValueError("need diagonal of length m and off-diagonal of length m - 1")
    m = d.size
    if m == 1:
        return d.copy()
    e2 = e * e
    radius = np.zeros(m)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo = np.full(m, float(np.min(d - radius)))
    hi = np.full(m, float(np.max(d + radius)))
    scale = max(1.0, float(np.max(np.abs(d) + radius)))
    pivmin = max(float(np.max(e2)), 1.0) * 1e-250
    target = np.arange(m)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = _sturm_count_below(d, e2, mid, pivmin)
        go_up = below <= target
        lo = np.where(go_up, mid, lo)
        hi = np.where(go_up, hi, mid)
        if float(np.max(hi - lo)) <= 1e-16 * scale:
            break
    return 0.5 * (lo + hi)


def _sturm_count_below(
    d: np.ndarray, e2: np.ndarray, x: np.ndarray, pivmin: float
) -> np.ndarray:
    """Number of eigenvalues below each shift in x (zero pivots are forced
    negative before counting, so exact hits count as crossed)."""
    q = d[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0.0).astype(np.int64)
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0.0
    return count


def _condition(x: float, params: WalkParams, antisymmetric: bool) -> float:
    """sqrt(q)*u_{n-1}(x) +/- sqrt(p)*u_{n-2}(x); the plus branch pins the
    symmetric eigenvector family."""
    seq = u_sequence(params.n - 1, x)
    sgn = -1.0 if antisymmetric else 1.0
    return math.sqrt(params.q) * seq[-1] + sgn * math.sqrt(params.p) * seq[-2]


def _half_matrix(spec: JacobiSpec, antisymmetric: bool) -> tuple[np.ndarray, np.ndarray]:
    """The n x n block the full matrix decouples into on the symmetric
    (inner corner a_1 + sqrt(w_0)) or antisymmetric (a_1 - sqrt(w_0))
    subspace.  Its characteristic polynomial is exactly the matching factor
    of characteristic_factors."""
    n = spec.half
    corner = math.sqrt(spec.weights[0])
    diag = np.array(spec.alphas[::-1], dtype=float)
    diag[-1] += -corner if antisymmetric else corner
    off = np.sqrt(np.array(spec.weights[:0:-1], dtype=float))
    return diag, off


def _polish_root(lam: float, antisymmetric: bool, params: WalkParams) -> float:
    """Refine an isolated root of the matching Chebyshev condition by
    bisection; returns the input unchanged when no sign change brackets it
    (already at the floating-point root)."""
    root_pq = math.sqrt(params.p * params.q)

    def g(val: float) -> float:
        return _condition(val / root_pq, params, antisymmetric)

    a = b = lam
    fa = fb = 0.0
    delta = 1e-13
    bracketed = False
    while delta <= 1e-6:
        a, b = lam - delta, lam + delta
        fa, fb = g(a), g(b)
        if fa == 0.0:
            return a
        if fb == 0.0:
            return b
        if (fa < 0.0) != (fb < 0.0):
            bracketed = True
            break
        delta *= 10.0
    if not bracketed:
        return lam
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid == a or mid == b or b - a <= 1e-15:
            break
        fm = g(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (fa < 0.0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    polished = 0.5 * (a + b)
    # The bracket may end an ulp past +/-1 for roots exponentially close to
    # the edge; the exact root is strictly inside, so project back.
    if 1.0 < abs(polished) <= 1.0 + 1e-14:
        polished = math.copysign(1.0, polished)
    return polished


def _interior_vector(params: WalkParams, x: float, antisymmetric: bool) -> np.ndarray:
    """Closed-form interior eigenvector at x = lam / sqrt(pq).

    First-half component i carries Chebyshev degree i - 1:
    (q*u_{i-1}(x) - p*u_{i-3}(x)) / sqrt(q); the second half mirrors with the
    family sign.  For edge-localised roots (|x| > 2 with the growing modes
    cancelling, which happens when the eigenvalue sits exponentially close
    to +/-1) the direct difference is evaluated in its decaying-mode form,
    with the growing-mode coefficient eliminated through the family's own
    root condition; otherwise forward recurrence is stable.
    """
    n, p, q = params.n, params.p, params.q
    sq = math.sqrt(q)
    sign = -1.0 if antisymmetric else 1.0
    half = np.empty(n)
    half[0] = 1.0
    hyperbolic = abs(x) > 2.0 + 1e-9
    if hyperbolic:
        rho = 0.5 * (x + math.copysign(math.sqrt(x * x - 4.0), x))
        cancelling = abs(q * rho * rho - p) < 1e-2 * (q * rho * rho + p)
    if hyperbolic and cancelling:
        rp = math.sqrt(p)
        lead = (sq + sign * rp * rho) / (rho - 1.0 / rho)
        degree = np.arange(1, n)
        grown = (sq * rho - sign * rp) * np.power(rho, degree - 2 * n)
        decayed = (sq - sign * rp * rho) * np.power(rho, -degree - 1)
        half[1:] = lead * (grown - decayed) / sq
    else:
        seq = u_sequence(n - 1, x)
        for j in range(1, n):
            below = seq[j - 2] if j >= 2 else 0.0
            half[j] = (q * seq[j] - p * below) / sq
    return np.concatenate([half, sign * half[::-1]])


def eigen_interior(params: WalkParams) -> list[Eigenpair]:
    """The 2n-2 eigenpairs away from +1/-1, in descending eigenvalue order.

    The full matrix decouples into one n x n half-block per eigenvector
    family, so each family is isolated by Sturm bisection on its own block:
    +1 is the top of the symmetric block and -1 the bottom of the
    antisymmetric one, dropped by position rather than by tolerance.  This
    keeps the families resolvable even when an interior eigenvalue sits
    exponentially close to +1 or -1 (which happens for p > q at large n,
    where the whole-matrix spectrum is numerically degenerate).  Roots are
    then polished by bisection on their family's Chebyshev condition, and
    eigenvectors and squared norms use the closed forms, never inverse
    iteration, so any drift surfaces in the residuals.  The norm closed form
    loses relative accuracy once a root is within about 1e-7 of +/-1 (the
    1 - lam^2 factor amplifies the eigenvalue's representation error); the
    eigenvectors and residuals are unaffected.

    Raises EigensystemError when a family's roots are not isolated, a
    family's extreme misses its +1/-1 anchor, or a polished root escapes
    [-1, 1].
    """
    n, p, q = params.n, params.p, params.q
    spec = build_j2n(params)
    tagged: list[tuple[float, bool]] = []
    for antisymmetric in (False, True):
        diag, off = _half_matrix(spec, antisymmetric)
        evals = tridiagonal_eigenvalues(diag, off)
        min_gap = float(np.min(np.diff(evals)))
        if min_gap <= GAP_TOL:
            raise EigensystemError(
                f"family eigenvalues not isolated: min gap {min_gap:.3e}"
            )
        if antisymmetric:
            anchor, interior = evals[0], evals[1:]
            expected = -1.0
        else:
            anchor, interior = evals[-1], evals[:-1]
            expected = 1.0
        if abs(anchor - expected) > PM1_COLLISION_TOL:
            raise EigensystemError(
                f"family anchor {anchor!r} missed the closed-form eigenvalue {expected}"
            )
        tagged.extend((float(lam), antisymmetric) for lam in interior)
    if len(tagged) != 2 * n - 2:
        raise EigensystemError(f"isolated {len(tagged)} interior roots, expected {2 * n - 2}")
    root_pq = math.sqrt(p * q)
    pairs = []
    for raw, antisymmetric in tagged:
        lam = _polish_root(raw, antisymmetric, params)
        if abs(lam) > 1.0:
            raise EigensystemError(f"interior eigenvalue {lam!r} escaped [-1, 1]")
        x = lam / root_pq
        vector = _interior_vector(params, x, antisymmetric)
        norm_sq = 2.0 * (1.0 - lam * lam) * partial_sum_squares(n - 1, x) / q
        pairs.append(Eigenpair(eigenvalue=lam, vector=vector, norm_sq=norm_sq, kind="interior"))
    pairs.sort(key=lambda pair: -pair.eigenvalue)
    return pairs


def full_eigensystem(params: WalkParams) -> list[Eigenpair]:
    """All 2n eigenpairs in descending order: +1 first, -1 last."""
    plus, minus = eigen_pm1(params)
    return [plus, *eigen_interior(params), minus]


def residual_inf(spec: JacobiSpec, pair: Eigenpair) -> float:
    """Relative sup-norm residual |J v - lam v| / |v| of an eigenpair."""
    d = spec.diagonal()
    e = spec.offdiagonal()
    v = pair.vector
    jv = d * v
    jv[:-1] += e * v[1:]
    jv[1:] += e * v[:-1]
    return float(np.max(np.abs(jv - pair.eigenvalue * v)) / np.max(np.abs(v)))
