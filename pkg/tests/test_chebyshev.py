import math

import numpy as np
import pytest

from gluedwalk.chebyshev import (
    ChebEval,
    eval_monic_u,
    partial_sum_s,
    partial_sum_squares,
    u_sequence,
)


def test_base_cases():
    assert eval_monic_u(0, 0.37) == 1.0
    assert eval_monic_u(1, 0.37) == 0.37
    assert eval_monic_u(-1, 123.0) == 0.0
    assert eval_monic_u(2, 2.0) == 3.0  # x^2 - 1


def test_rejects_degree_below_sentinel():
    with pytest.raises(ValueError):
        eval_monic_u(-2, 0.0)


def test_trig_closed_form_single_point():
    theta = math.pi / 7
    expected = math.sin(6 * theta) / math.sin(theta)
    assert abs(eval_monic_u(5, 2 * math.cos(theta)) - expected) < 1e-12


def test_trig_closed_form_random_points():
    rng = np.random.default_rng(20240901)
    for _ in range(1000):
        k = int(rng.integers(0, 101))
        theta = rng.uniform(0.01, math.pi - 0.01)
        got = eval_monic_u(k, 2 * math.cos(theta))
        expected = math.sin((k + 1) * theta) / math.sin(theta)
        assert abs(got - expected) <= 1e-9


def test_recurrence_residual_exact():
    # Recomputation shares the forward recurrence prefix, so the residual is
    # bitwise zero, not merely small.
    for x in np.linspace(-4.0, 4.0, 41):
        for k in (2, 3, 10, 57, 200):
            residual = eval_monic_u(k, x) - (
                x * eval_monic_u(k - 1, x) - eval_monic_u(k - 2, x)
            )
            assert residual == 0.0


def test_hyperbolic_regime_sign_and_growth():
    for x in (2.05, 2.5, 3.0, 5.0, 8.0):
        values = u_sequence(100, x)
        assert all(v > 0 for v in values)
        assert all(b > a for a, b in zip(values, values[1:]))
        mirrored = u_sequence(100, -x)
        for k, v in enumerate(mirrored):
            assert math.copysign(1.0, v) == (-1.0) ** k


def test_u_sequence_matches_pointwise():
    seq = u_sequence(12, 1.7)
    for k, v in enumerate(seq):
        assert v == eval_monic_u(k, 1.7)


def test_partial_sum_basics():
    assert partial_sum_s(0, 42.0) == 0.0
    assert partial_sum_s(2, 0.5) == 1.5  # 1 + 0.5


def test_partial_sum_against_termwise_loop():
    # Independent termwise oracle with its own recurrence state.
    x = 1.8
    prev, cur = 0.0, 1.0
    total = total_sq = 0.0
    for _ in range(6):
        total += cur
        total_sq += cur * cur
        prev, cur = cur, x * cur - prev
    assert abs(partial_sum_s(6, x) - total) < 1e-12
    assert abs(partial_sum_squares(6, x) - total_sq) < 1e-12


def test_partial_sum_squares_empty():
    assert partial_sum_squares(0, 3.0) == 0.0


def test_chebeval_record():
    rec = ChebEval.at(4, 0.3)
    assert rec.k == 4 and rec.x == 0.3
    assert rec.value == eval_monic_u(4, 0.3)
