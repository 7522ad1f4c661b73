"""Monic Chebyshev polynomials of the second kind.

The family generated by u_0 = 1, u_1 = x, u_k = x*u_{k-1} - u_{k-2}.  All
spectral quantities of the biased path walk reduce to these polynomials and
their partial sums, so they get a tiny dedicated module.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ChebEval",
    "eval_monic_u",
    "u_sequence",
    "partial_sum_s",
    "partial_sum_squares",
]


@dataclass(frozen=True)
class ChebEval:
    """One evaluation of the degree-k polynomial at argument x."""

    k: int
    x: float
    value: float

    @classmethod
    def at(cls, k: int, x: float) -> "ChebEval":
        return cls(k=k, x=x, value=eval_monic_u(k, x))


def eval_monic_u(k: int, x: float) -> float:
    """Evaluate the monic second-kind Chebyshev polynomial of degree k at x.

    Forward recurrence in double precision; k = -1 is accepted as a sentinel
    and yields 0.  Intended range is k <= 512 and |x| <= 8 (the recurrence is
    stable in the growth direction for |x| >= 2 and adequate below it at
    these degrees); outside that range the result is unspecified.
    """
    if k < -1:
        raise ValueError(f"degree must be >= -1, got {k}")
    prev, cur = 0.0, 1.0  # u_{-1}, u_0
    if k == -1:
        return prev
    for _ in range(k):
        prev, cur = cur, x * cur - prev
    return cur


def u_sequence(k: int, x: float) -> list[float]:
    """Values [u_0(x), ..., u_k(x)] from a single recurrence pass."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    vals = [1.0]
    prev, cur = 0.0, 1.0
    for _ in range(k):
        prev, cur = cur, x * cur - prev
        vals.append(cur)
    return vals


def partial_sum_s(k: int, x: float) -> float:
    """Partial sum u_0(x) + ... + u_{k-1}(x); the empty sum for k = 0."""
    if k < 0:
        raise ValueError(f"number of terms must be >= 0, got {k}")
    total = 0.0
    prev, cur = 0.0, 1.0
    for _ in range(k):
        total += cur
        prev, cur = cur, x * cur - prev
    return total


def partial_sum_squares(k: int, x: float) -> float:
    """Partial sum u_0(x)^2 + ... + u_{k-1}(x)^2; the empty sum for k = 0.

    This squared variant is what enters the closed-form squared norm of the
    interior eigenvectors.
    """
    if k < 0:
        raise ValueError(f"number of terms must be >= 0, got {k}")
    total = 0.0
    prev, cur = 0.0, 1.0
    for _ in range(k):
        total += cur * cur
        prev, cur = cur, x * cur - prev
    return total
