import cmath
import math

import numpy as np
import pytest

from helpers import dense_step_matrix

from gluedwalk.jacobi import Eigenpair, WalkParams, full_eigensystem
from gluedwalk.walk import (
    ArcIndex,
    WalkState,
    apply_coin,
    apply_shift,
    arc_count,
    lift_eigenpairs,
    position_distribution,
    step,
    unitary_residual,
)


def random_state(rng, n):
    amps = rng.normal(size=arc_count(n)) + 1j * rng.normal(size=arc_count(n))
    return WalkState(amps / np.linalg.norm(amps))


# ---------------------------------------------------------------- arc layout


def test_arc_index_layout():
    n = 3
    order = [(1, "R"), (2, "L"), (2, "R"), (3, "L"), (3, "R"),
             (4, "L"), (4, "R"), (5, "L"), (5, "R"), (6, "L")]
    for flat, (v, c) in enumerate(order):
        assert ArcIndex(v, c).flat(n) == flat


def test_arc_index_rejects_reflecting_ends():
    with pytest.raises(ValueError):
        ArcIndex(1, "L").flat(3)
    with pytest.raises(ValueError):
        ArcIndex(6, "R").flat(3)
    with pytest.raises(ValueError):
        ArcIndex(7, "R").flat(3)
    with pytest.raises(ValueError):
        ArcIndex(2, "X").flat(3)


def test_state_validation():
    with pytest.raises(ValueError):
        WalkState(np.zeros(7))
    state = WalkState.point_mass(3, 4, "L")
    assert state.n == 3 and state.norm() == 1.0


# ---------------------------------------------------------------- coin


def _dense_coin(params):
    dim = arc_count(params.n)
    cols = []
    for j in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[j] = 1.0
        cols.append(apply_coin(WalkState(amps), params).amplitudes)
    return np.stack(cols, axis=1)


def test_coin_block_values():
    # vertex 2 sits in the first region: 2|phi><phi| - I with phi = (sqrt p, sqrt q)
    params = WalkParams(n=3, p=1 / 3)
    coin = _dense_coin(params).real
    il, ir = ArcIndex(2, "L").flat(3), ArcIndex(2, "R").flat(3)
    block = coin[np.ix_([il, ir], [il, ir])]
    s = 2 * math.sqrt(2) / 3
    np.testing.assert_allclose(block, [[-1 / 3, s], [s, 1 / 3]], atol=1e-15)
    # the mirrored region swaps the diagonal
    il, ir = ArcIndex(4, "L").flat(3), ArcIndex(4, "R").flat(3)
    block = coin[np.ix_([il, ir], [il, ir])]
    np.testing.assert_allclose(block, [[1 / 3, s], [s, -1 / 3]], atol=1e-15)


def test_coin_balanced_interior_is_swap():
    params = WalkParams(n=2, p=0.5)
    coin = _dense_coin(params).real
    il, ir = ArcIndex(2, "L").flat(2), ArcIndex(2, "R").flat(2)
    np.testing.assert_allclose(coin[np.ix_([il, ir], [il, ir])], [[0, 1], [1, 0]], atol=1e-15)


def test_coin_endpoints_pass_through():
    params = WalkParams(n=3, p=0.25)
    coin = _dense_coin(params)
    assert coin[0, 0] == 1.0 and coin[-1, -1] == 1.0
    assert np.all(coin[0, 1:] == 0) and np.all(coin[:-1, -1] == 0)


def test_coin_is_involution():
    rng = np.random.default_rng(42)
    for p in (1 / 3, 0.7):
        params = WalkParams(n=5, p=p)
        state = random_state(rng, 5)
        twice = apply_coin(apply_coin(state, params), params)
        np.testing.assert_allclose(twice.amplitudes, state.amplitudes, atol=1e-14)


# ---------------------------------------------------------------- shift


def test_shift_moves_single_arc():
    state = WalkState.point_mass(3, 1, "R")
    moved = apply_shift(state)
    expect = WalkState.point_mass(3, 2, "L")
    np.testing.assert_array_equal(moved.amplitudes, expect.amplitudes)


def test_shift_is_permutation_and_involution():
    n = 3
    dim = arc_count(n)
    cols = []
    for j in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[j] = 1.0
        cols.append(apply_shift(WalkState(amps)).amplitudes)
    s = np.stack(cols, axis=1).real
    assert np.all(s.sum(axis=0) == 1) and np.all(s.sum(axis=1) == 1)
    assert np.all((s == 0) | (s == 1))
    np.testing.assert_array_equal(s @ s, np.eye(dim))


# ---------------------------------------------------------------- step


def test_step_preserves_norm():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 17))
        params = WalkParams(n=n, p=float(rng.uniform(0.05, 0.95)))
        state = random_state(rng, n)
        stepped = step(state, params)
        assert abs(stepped.norm() ** 2 - 1.0) <= 1e-13


def test_dense_step_is_unitary():
    params = WalkParams(n=2, p=1 / 3)
    u = dense_step_matrix(params)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(arc_count(2)), atol=1e-13)


def test_first_step_from_left_end():
    # the end coin is the identity, so the walker moves deterministically
    params = WalkParams(n=2, p=0.5)
    state = step(WalkState.point_mass(2, 1, "R"), params)
    np.testing.assert_allclose(
        state.amplitudes, WalkState.point_mass(2, 2, "L").amplitudes, atol=1e-15
    )


def test_step_dimension_mismatch():
    with pytest.raises(ValueError):
        step(WalkState.point_mass(3, 1, "R"), WalkParams(n=4, p=0.5))


# ------------------------------------------------------- distributions


def test_position_distribution_point_masses():
    dist = position_distribution(WalkState.point_mass(3, 3, "L"))
    np.testing.assert_array_equal(dist, np.eye(6)[2])
    amps = np.zeros(arc_count(3), dtype=complex)
    amps[ArcIndex(2, "L").flat(3)] = 1 / math.sqrt(2)
    amps[ArcIndex(2, "R").flat(3)] = 1 / math.sqrt(2)
    dist = position_distribution(WalkState(amps))
    np.testing.assert_allclose(dist, np.eye(6)[1], atol=1e-15)


def test_position_distribution_requires_unit_norm():
    with pytest.raises(ValueError):
        position_distribution(WalkState(np.full(arc_count(2), 0.5 + 0j)))


def test_evolution_matches_dense_oracle():
    params = WalkParams(n=3, p=1 / 3)
    u = dense_step_matrix(params)
    state = WalkState.point_mass(3, 1, "R")
    dense = state.amplitudes.copy()
    for _ in range(25):
        state = step(state, params)
        dense = u @ dense
    np.testing.assert_allclose(
        position_distribution(state),
        position_distribution(WalkState(dense)),
        atol=1e-10,
    )


# ---------------------------------------------------------------- lift


def test_lift_counts_and_phases():
    for n in (2, 3, 6):
        params = WalkParams(n=n, p=2 / 3)
        pairs = lift_eigenpairs(full_eigensystem(params), params)
        assert len(pairs) == 4 * n - 2
        for pair in pairs:
            assert abs(abs(pair.mu) - 1.0) <= 1e-13
            assert abs(pair.mu - cmath.exp(1j * pair.phi)) <= 1e-13
            assert abs(math.cos(pair.phi) - pair.source_lambda) <= 1e-12
            assert abs(np.linalg.norm(pair.u) - 1.0) <= 1e-13


def test_lift_residuals():
    for n in (2, 4, 8):
        for p in (1 / 3, 0.5, 0.9):
            params = WalkParams(n=n, p=p)
            pairs = lift_eigenpairs(full_eigensystem(params), params)
            assert max(unitary_residual(pair, params) for pair in pairs) <= 1e-10


def test_lift_plus_one_is_fixed_point():
    params = WalkParams(n=4, p=1 / 3)
    pairs = lift_eigenpairs(full_eigensystem(params), params)
    top = pairs[0]
    assert top.mu == 1.0 + 0.0j
    assert unitary_residual(top, params) <= 1e-12


def test_lift_completeness():
    for n in (2, 5, 8):
        params = WalkParams(n=n, p=1 / 3)
        pairs = lift_eigenpairs(full_eigensystem(params), params)
        basis = np.stack([pair.u for pair in pairs], axis=1)
        resolved = basis @ basis.conj().T
        assert np.max(np.abs(resolved - np.eye(4 * n - 2))) <= 1e-9


def test_lift_phases_nondegenerate():
    for n in (2, 5, 8):
        for p in (1 / 3, 0.5, 0.9):
            params = WalkParams(n=n, p=p)
            pairs = lift_eigenpairs(full_eigensystem(params), params)
            phases = np.sort(np.mod([pair.phi for pair in pairs], 2 * math.pi))
            gaps = np.diff(phases)
            wrap = 2 * math.pi - (phases[-1] - phases[0])
            assert min(np.min(gaps), wrap) > 1e-10


def test_lift_eigenphase_multiset():
    params = WalkParams(n=4, p=0.7)
    system = full_eigensystem(params)
    pairs = lift_eigenpairs(system, params)
    expected = [0.0, math.pi]
    for pair in system:
        if pair.kind == "interior":
            expected.extend([math.acos(pair.eigenvalue), -math.acos(pair.eigenvalue)])
    got = sorted(pair.phi for pair in pairs)
    np.testing.assert_allclose(got, sorted(expected), atol=1e-13)


def test_spectral_evolution_matches_stepping():
    rng = np.random.default_rng(99)
    params = WalkParams(n=3, p=1 / 3)
    pairs = lift_eigenpairs(full_eigensystem(params), params)
    basis = np.stack([pair.u for pair in pairs], axis=1)
    mus = np.array([pair.mu for pair in pairs])
    psi = random_state(rng, 3)
    coeff = basis.conj().T @ psi.amplitudes
    t = 1000
    by_phase = basis @ (mus**t * coeff)
    state = psi
    for _ in range(t):
        state = step(state, params)
    np.testing.assert_allclose(state.amplitudes, by_phase, atol=1e-8)


def test_lift_input_validation():
    params = WalkParams(n=3, p=0.5)
    system = full_eigensystem(params)
    with pytest.raises(ValueError):
        lift_eigenpairs(system[:-1], params)
    bad = list(system)
    bad[1] = Eigenpair(1.5, bad[1].vector, bad[1].norm_sq, "interior")
    with pytest.raises(ValueError):
        lift_eigenpairs(bad, params)
    doubled = [system[0]] + system[:-1]
    with pytest.raises(ValueError):
        lift_eigenpairs(doubled, params)
