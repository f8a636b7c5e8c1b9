import itertools
from math import sqrt

import numpy as np
import pytest

from walkqca.lattice import EnergyModeLabel, energy_labels, make_lattice, momentum_mode
from walkqca.multiparticle import (
    MultiState,
    PhysicalBasisLabel,
    antisymmetrize,
    eigenphase_check,
    load_state,
    ordered_product_state,
    physical_basis_state,
    physical_subspace_projector_residual,
    product_state,
    random_physical_state,
    save_state,
    total_evolution_apply,
    vacuum_state,
)
from walkqca.walk1d import build_walk_unitary_1d, walk_eigenstate_1d

TOL = 1e-12

SPEC = make_lattice(1, 2, 1.0, 1.0, 0.3)
SPEC2D = make_lattice(2, 2, 1.0, 1.0, 0.3)


def random_walk_vector(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def test_vacuum_is_invariant():
    vac = vacuum_state(SPEC.walk_dim, 3)
    out = total_evolution_apply(SPEC, 3, vac)
    np.testing.assert_array_equal(out.amplitudes, vac.amplitudes)


def test_single_particle_factor_evolves_by_walk():
    rng = np.random.default_rng(1)
    psi = random_walk_vector(rng, SPEC.walk_dim)
    state = product_state([psi, None, None], SPEC.walk_dim)
    out = total_evolution_apply(SPEC, 3, state)
    u = build_walk_unitary_1d(SPEC).matrix
    expected = product_state([u @ psi, None, None], SPEC.walk_dim)
    np.testing.assert_allclose(out.amplitudes, expected.amplitudes, atol=TOL)


def test_norm_preserved_on_random_states():
    rng = np.random.default_rng(2)
    for spec, n_max in ((SPEC, 2), (SPEC2D, 2)):
        dim = (spec.walk_dim + 1) ** n_max
        raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        raw /= np.linalg.norm(raw)
        state = MultiState(raw, spec.walk_dim, n_max)
        out = total_evolution_apply(spec, n_max, state)
        assert out.norm() == pytest.approx(1.0, abs=TOL)


def test_dimension_mismatch_rejected():
    state = vacuum_state(SPEC.walk_dim, 2)
    with pytest.raises(ValueError):
        total_evolution_apply(SPEC, 3, state)
    with pytest.raises(ValueError):
        total_evolution_apply(SPEC2D, 2, state)


def test_antisymmetrize_two_factors():
    rng = np.random.default_rng(3)
    d = SPEC.walk_dim
    psi, chi = random_walk_vector(rng, d), random_walk_vector(rng, d)
    state = product_state([psi, chi, None], d)
    out = antisymmetrize(state, 2)
    expected = 0.5 * (
        product_state([psi, chi, None], d).amplitudes
        - product_state([chi, psi, None], d).amplitudes
    )
    np.testing.assert_allclose(out.amplitudes, expected, atol=TOL)

    # idempotence
    again = antisymmetrize(out, 2)
    np.testing.assert_allclose(again.amplitudes, out.amplitudes, atol=TOL)

    # equal factors annihilate
    zero = antisymmetrize(product_state([psi, psi, None], d), 2)
    assert zero.norm() < TOL


def test_antisymmetrize_rejects_wrong_support():
    rng = np.random.default_rng(4)
    d = SPEC.walk_dim
    psi = random_walk_vector(rng, d)
    state = product_state([psi, None, psi], d)  # occupied factors are 0 and 2
    with pytest.raises(ValueError):
        antisymmetrize(state, 2)


def test_physical_basis_state_vacuum_and_single():
    vac = physical_basis_state(SPEC, [], 3)
    np.testing.assert_array_equal(vac.amplitudes, vacuum_state(SPEC.walk_dim, 3).amplitudes)

    label = EnergyModeLabel(momentum_mode(SPEC, 1), 1)
    single = physical_basis_state(SPEC, [label], 3)
    expected = product_state([walk_eigenstate_1d(SPEC, label), None, None], SPEC.walk_dim)
    np.testing.assert_allclose(single.amplitudes, expected.amplitudes, atol=TOL)


def test_swapped_labels_flip_sign():
    labels = energy_labels(SPEC)
    a, b = labels[0], labels[2]
    ordered = ordered_product_state(SPEC, [a, b], 2)
    swapped = ordered_product_state(SPEC, [b, a], 2)
    np.testing.assert_allclose(swapped.amplitudes, -ordered.amplitudes, atol=TOL)


def test_physical_basis_state_requires_canonical_order():
    labels = energy_labels(SPEC)
    with pytest.raises(ValueError):
        physical_basis_state(SPEC, [labels[2], labels[0]], 2)
    with pytest.raises(ValueError):
        physical_basis_state(SPEC, [labels[0], labels[0]], 2)
    with pytest.raises(ValueError):
        physical_basis_state(SPEC, labels[:3], 2)  # more labels than factors


def test_physical_basis_label_validates_on_construction():
    labels = energy_labels(SPEC)
    good = PhysicalBasisLabel((labels[0], labels[2]))
    assert len(good) == 2 and list(good) == [labels[0], labels[2]]
    with pytest.raises(ValueError):
        PhysicalBasisLabel((labels[2], labels[0]))
    state = physical_basis_state(SPEC, good, 2)
    direct = physical_basis_state(SPEC, [labels[0], labels[2]], 2)
    np.testing.assert_array_equal(state.amplitudes, direct.amplitudes)


def test_energy_basis_is_orthonormal():
    labels = energy_labels(SPEC)
    states = []
    for n in range(3):
        for combo in itertools.combinations(labels, n):
            states.append(physical_basis_state(SPEC, combo, 2).amplitudes)
    gram = np.array([[np.vdot(a, b) for b in states] for a in states])
    np.testing.assert_allclose(gram, np.eye(len(states)), atol=TOL)


def test_eigenphase_examples():
    assert eigenphase_check(SPEC, [], 3) < TOL
    labels4 = energy_labels(make_lattice(1, 4, 1.0, 1.0, 0.3))
    spec4 = make_lattice(1, 4, 1.0, 1.0, 0.3)
    assert eigenphase_check(spec4, [labels4[0]], 1) < TOL
    pair = [labels4[1], labels4[4]]
    assert eigenphase_check(spec4, pair, 2) < TOL


def test_eigenphase_all_small_labels():
    labels = energy_labels(SPEC)
    worst = 0.0
    for n in range(4):
        for combo in itertools.combinations(labels, n):
            worst = max(worst, eigenphase_check(SPEC, combo, 3))
    assert worst < TOL


def test_projector_keeps_basis_states():
    labels = energy_labels(SPEC)
    for combo in ([], [labels[0]], [labels[0], labels[3]]):
        state = physical_basis_state(SPEC, combo, 2)
        assert physical_subspace_projector_residual(state) < TOL


def test_projector_residual_of_unsymmetrized_product():
    # two-factor decomposition: the residual of psi (x) chi is the norm of
    # its symmetric part, sqrt((1 + |<psi|chi>|^2) / 2)
    rng = np.random.default_rng(5)
    d = SPEC.walk_dim
    psi, chi = random_walk_vector(rng, d), random_walk_vector(rng, d)
    state = product_state([psi, chi], d)
    overlap = np.vdot(psi, chi)
    expected = sqrt((1.0 + abs(overlap) ** 2) / 2.0)
    assert physical_subspace_projector_residual(state) == pytest.approx(expected, abs=1e-10)


def test_projector_rejects_wrong_factor_pattern():
    # a particle in factor 1 with factor 0 empty is outside the physical
    # subspace by construction
    rng = np.random.default_rng(6)
    psi = random_walk_vector(rng, SPEC.walk_dim)
    state = product_state([None, psi], SPEC.walk_dim)
    assert physical_subspace_projector_residual(state) == pytest.approx(1.0, abs=TOL)


@pytest.mark.parametrize("spec,n_max", [(SPEC, 3), (SPEC2D, 2)])
def test_evolution_preserves_physical_subspace(spec, n_max):
    rng = np.random.default_rng(7)
    for _ in range(20):
        state = random_physical_state(spec.walk_dim, n_max, rng)
        evolved = total_evolution_apply(spec, n_max, state)
        assert physical_subspace_projector_residual(evolved) < TOL


def occupied_weight(state, factor):
    tensor = state.tensor()
    axes = tuple(a for a in range(state.n_factors) if a != factor)
    weights = np.sum(np.abs(tensor) ** 2, axis=axes)
    return float(np.sum(weights[: state.walk_dim]))


def test_type_number_conservation():
    # the evolution never moves weight between a factor's occupied and
    # vacuum components
    rng = np.random.default_rng(8)
    d = SPEC.walk_dim
    dim = (d + 1) ** 2
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    raw /= np.linalg.norm(raw)
    state = MultiState(raw, d, 2)
    evolved = total_evolution_apply(SPEC, 2, state)
    for factor in range(2):
        assert occupied_weight(state, factor) == pytest.approx(
            occupied_weight(evolved, factor), abs=TOL
        )


def test_sector_equivalence_across_type_choices():
    # a two-particle block evolves identically whether it occupies factors
    # (0, 1) or factors (0, 2)
    rng = np.random.default_rng(9)
    d = SPEC.walk_dim
    psi, chi = random_walk_vector(rng, d), random_walk_vector(rng, d)
    in_01 = product_state([psi, chi, None], d)
    in_02 = product_state([psi, None, chi], d)
    out_01 = total_evolution_apply(SPEC, 3, in_01).tensor()[:d, :d, d]
    out_02 = total_evolution_apply(SPEC, 3, in_02).tensor()[:d, d, :d]
    np.testing.assert_allclose(out_01, out_02, atol=TOL)


def test_amplitude_cap_enforced():
    with pytest.raises(ValueError):
        vacuum_state(128, 4)  # 129**4 > 2e6


def test_state_dump_round_trip(tmp_path):
    rng = np.random.default_rng(10)
    state = random_physical_state(SPEC.walk_dim, 2, rng)
    path = tmp_path / "state.txt"
    save_state(path, state)
    loaded = load_state(path)
    assert loaded.walk_dim == state.walk_dim
    assert loaded.n_factors == state.n_factors
    np.testing.assert_allclose(loaded.amplitudes, state.amplitudes, atol=0)
