from math import cos, sin

import numpy as np
import pytest

from walkqca.qca import (
    CellLattice,
    apply_shift,
    build_local_coin,
    faulty_local_coin,
    locality_check,
    localized_particle_state,
    occupation_expectations,
    one_particle_sector_isomorphism,
    qca_shift_permutation,
    qca_step,
    qca_step_operator,
    type_number_expectations,
)
from walkqca.walk1d import walk_matrix_1d

TOL = 1e-12

CELL_NUMBER = np.diag([0.0, 1.0, 1.0, 2.0])


def test_local_coin_action():
    theta = 0.3
    coin = build_local_coin(theta).matrix
    np.testing.assert_array_equal(coin[:, 0], [1, 0, 0, 0])  # empty cell untouched
    # one particle in the R slot mixes into the L slot with the walk phases
    np.testing.assert_allclose(coin[:, 1], [0, cos(theta), 1j * sin(theta), 0], atol=TOL)
    np.testing.assert_array_equal(coin[:, 3], [0, 0, 0, 1])  # doubly occupied fixed


def test_local_coin_is_unitary_and_number_conserving():
    for theta in (0.0, 0.3, 1.4):
        coin = build_local_coin(theta).matrix
        assert np.max(np.abs(coin.conj().T @ coin - np.eye(4))) < TOL
        assert np.max(np.abs(coin @ CELL_NUMBER - CELL_NUMBER @ coin)) < TOL


def test_local_coin_one_particle_block_matches_walk_coin():
    theta = 0.77
    coin = build_local_coin(theta).matrix
    walk_coin = np.array([[cos(theta), 1j * sin(theta)], [1j * sin(theta), cos(theta)]])
    np.testing.assert_allclose(coin[1:3, 1:3], walk_coin, atol=TOL)


def test_shift_moves_single_occupations():
    lattice = CellLattice(n_sites=4, n_types=1)
    state = localized_particle_state(lattice, 0, 0)
    shifted = apply_shift(lattice, state)
    expected = localized_particle_state(lattice, 1, 0)
    np.testing.assert_array_equal(shifted, expected)

    left = localized_particle_state(lattice, 0, 1)
    shifted_left = apply_shift(lattice, left)
    np.testing.assert_array_equal(shifted_left, localized_particle_state(lattice, 3, 1))


def test_shift_fixes_vacuum_and_moves_pairs_independently():
    lattice = CellLattice(n_sites=4, n_types=1)
    vac = np.zeros(lattice.dim, dtype=complex)
    vac[0] = 1.0
    np.testing.assert_array_equal(apply_shift(lattice, vac), vac)

    two = np.zeros(lattice.dim, dtype=complex)
    two[(1 << lattice.slot(0, 0, 0)) | (1 << lattice.slot(0, 1, 1))] = 1.0
    out = apply_shift(lattice, two)
    expected = np.zeros(lattice.dim, dtype=complex)
    expected[(1 << lattice.slot(0, 1, 0)) | (1 << lattice.slot(0, 0, 1))] = 1.0
    np.testing.assert_array_equal(out, expected)


def test_shift_permutation_is_bijective():
    lattice = CellLattice(n_sites=3, n_types=2)
    perm = qca_shift_permutation(lattice)
    assert sorted(perm.tolist()) == list(range(lattice.dim))


def test_qca_step_unitary_and_vacuum_invariant():
    lattice = CellLattice(n_sites=3, n_types=1)
    coin = build_local_coin(0.3)
    op = qca_step_operator(lattice, coin)
    assert np.max(np.abs(op.conj().T @ op - np.eye(lattice.dim))) < TOL
    vac = np.zeros(lattice.dim, dtype=complex)
    vac[0] = 1.0
    np.testing.assert_array_equal(qca_step(lattice, coin, vac), vac)


def test_qca_step_conserves_type_numbers():
    lattice = CellLattice(n_sites=3, n_types=2)
    coin = build_local_coin(0.3)
    rng = np.random.default_rng(11)
    for _ in range(5):
        state = rng.standard_normal(lattice.dim) + 1j * rng.standard_normal(lattice.dim)
        state /= np.linalg.norm(state)
        before = type_number_expectations(lattice, state)
        after = type_number_expectations(lattice, qca_step(lattice, coin, state))
        np.testing.assert_allclose(before, after, atol=TOL)


@pytest.mark.parametrize("n_sites,n_types", [(3, 1), (2, 2), (3, 2), (4, 1)])
def test_sector_isomorphism(n_sites, n_types):
    assert one_particle_sector_isomorphism(n_sites, n_types, 0.3) < TOL


def test_sector_isomorphism_insensitive_to_pair_phase():
    # the doubly occupied cell state is outside the <=1-per-type sector,
    # so any phase on it leaves the isomorphism exact
    for phase in (1.0, np.exp(0.7j), -1.0):
        coin = build_local_coin(0.3, pair_phase=phase)
        assert one_particle_sector_isomorphism(3, 2, 0.3, coin=coin) < TOL


def test_one_particle_matches_walk_directly():
    # single type, single particle: step the embedded walk basis states
    n, theta = 4, 0.45
    lattice = CellLattice(n_sites=n, n_types=1)
    coin = build_local_coin(theta)
    walk = walk_matrix_1d(n, theta)
    for v in range(2 * n):
        state = localized_particle_state(lattice, v // 2, v % 2)
        stepped = qca_step(lattice, coin, state)
        expected = np.zeros(lattice.dim, dtype=complex)
        for w in range(2 * n):
            expected[1 << lattice.slot(0, w // 2, w % 2)] = walk[w, v]
        np.testing.assert_allclose(stepped, expected, atol=TOL)


def test_locality_report():
    report = locality_check(6, 1, 0.3, steps=3)
    assert report.shift_nearest_neighbor
    assert report.coin_conjugation_residual < TOL
    assert report.light_cone_radius_per_step == 1
    assert report.spread_within_cone


def test_two_steps_spread_at_most_two_sites():
    lattice = CellLattice(n_sites=8, n_types=1)
    coin = build_local_coin(0.9)
    state = localized_particle_state(lattice, 4, 0)
    for _ in range(2):
        state = qca_step(lattice, coin, state)
    occ = occupation_expectations(lattice, state).sum(axis=(0, 2))
    support = {x for x in range(8) if occ[x] > 1e-12}
    assert support <= {2, 3, 4, 5, 6}
    assert max(abs(x - 4) for x in support) == 2


def test_faulty_coins_break_the_right_invariants():
    bad_number = faulty_local_coin("coin-nonconserving", 0.3).matrix
    assert np.max(np.abs(bad_number.conj().T @ bad_number - np.eye(4))) < TOL  # still unitary
    assert np.max(np.abs(bad_number @ CELL_NUMBER - CELL_NUMBER @ bad_number)) > 0.5

    bad_unitary = faulty_local_coin("coin-nonunitary", 0.3).matrix
    assert np.max(np.abs(bad_unitary.conj().T @ bad_unitary - np.eye(4))) > 0.5
    with pytest.raises(ValueError):
        faulty_local_coin("unknown", 0.3)


def test_cell_lattice_caps():
    with pytest.raises(ValueError):
        CellLattice(n_sites=12, n_types=1)  # 24 qubits over the cap
    with pytest.raises(ValueError):
        CellLattice(n_sites=1, n_types=1)
    lattice = CellLattice(n_sites=3, n_types=2)
    with pytest.raises(ValueError):
        qca_step_operator(lattice, build_local_coin(0.3))  # 4096 > dense cap
    with pytest.raises(ValueError):
        qca_step(lattice, build_local_coin(0.3), np.zeros(7, dtype=complex))
