"""The strictly local occupation-number automaton behind the walk.

One two-level system per (site, direction, type); a step is a global
one-site shift followed by an identical per-site coin.  Restricted to at
most one particle per type it reproduces the multiparticle walk exactly,
and a localized particle spreads at exactly one site per step.
"""

import numpy as np

from walkqca import CellLattice, build_local_coin, one_particle_sector_isomorphism, qca_step
from walkqca.qca import localized_particle_state, occupation_expectations

theta = 0.35
lattice = CellLattice(n_sites=10, n_types=1)
coin = build_local_coin(theta)
state = localized_particle_state(lattice, site=5, direction=0)

print(f"{lattice.n_sites} sites, {lattice.n_qubits} qubits, step = shift then coin")
print("\nper-site occupation <n_R + n_L> (x10, rounded); the front moves one site/step")
for step in range(7):
    occ = occupation_expectations(lattice, state).sum(axis=(0, 2))
    cells = "".join(f"{10 * x:4.0f}" for x in occ)
    print(f"  step {step}: {cells}")
    state = qca_step(lattice, coin, state)

print("\nagreement with the factor-wise walk evolution:")
for sites, types in ((3, 1), (3, 2), (4, 1)):
    residual = one_particle_sector_isomorphism(sites, types, theta)
    print(f"  {sites} sites, {types} type(s): max residual {residual:.2e}")
