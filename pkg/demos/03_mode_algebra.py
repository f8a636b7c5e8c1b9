"""Fermionic mode operators over the walk's energy modes.

Occupation bitstrings over the ordered mode list carry standard
creation/annihilation matrices; one walk step is a diagonal phase, and
conjugating the coin-axis creation pair reproduces the momentum block.
"""

import numpy as np

from walkqca import (
    annihilation_op,
    anticommutator,
    creation_op,
    energy_labels,
    evolution_diagonal,
    fock_basis,
    make_lattice,
    momentum_block_1d,
    momentum_mode_ops,
)

spec = make_lattice(dimension=1, N=4, dx=1.0, dt=1.0, theta=0.3)
basis = fock_basis(energy_labels(spec)[:4])
print(f"{len(basis.modes)} modes, occupation space dimension {basis.dim}")

# canonical anticommutation relations
eye = np.eye(basis.dim)
worst = 0.0
for la in basis.modes:
    for lb in basis.modes:
        c_a = creation_op(basis, la).matrix
        c_b = creation_op(basis, lb).matrix
        ann_a = annihilation_op(basis, la).matrix
        delta = eye if la == lb else 0.0 * eye
        worst = max(
            worst,
            np.max(np.abs(anticommutator(c_a, c_b))),
            np.max(np.abs(anticommutator(ann_a, c_b) - delta)),
        )
print(f"max anticommutation defect: {worst:.2e}")

# one step is a diagonal phase over bitstrings
evo = evolution_diagonal(basis, spec).matrix
phases = np.angle(np.diag(evo))
print("per-bitstring phases of one step (first 8):",
      np.array2string(phases[:8], precision=4))

# the coin-axis pair conjugates by the momentum block (transposed on the
# operator column)
mode = basis.modes[0].mode
block = momentum_block_1d(spec, mode)
a_r, a_l = momentum_mode_ops(basis, spec, mode)
pair = (a_r.matrix, a_l.matrix)
recovered = np.zeros((2, 2), dtype=complex)
for i in range(2):
    conj = evo @ pair[i] @ evo.conj().T
    for j in range(2):
        # project the conjugated operator onto pair[j]
        recovered[j, i] = np.trace(pair[j].conj().T @ conj) / np.trace(
            pair[j].conj().T @ pair[j]
        )
print("block recovered from operator conjugation:")
print(np.array2string(recovered, precision=6, suppress_small=True))
print("closed-form block:")
print(np.array2string(block.matrix, precision=6, suppress_small=True))
print("agreement:", np.allclose(recovered, block.matrix, atol=1e-12))
