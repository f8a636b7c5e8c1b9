"""Distinguishable-particle tensor space, antisymmetrizer, and physical states.

Each of the n_factors tensor factors is the one-particle walk space
extended by one extra "absent" basis element (the factor vacuum, indexed
last).  Physical states occupy the first n factors antisymmetrically and
leave the rest in the vacuum; the total evolution applies the
vacuum-extended walk step independently to every factor.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import factorial, sqrt

import numpy as np

from .lattice import EnergyModeLabel, LatticeSpec, mode_ordering_key
from .walk1d import build_walk_unitary_1d, walk_eigenstate_1d
from .walk2d import build_walk_unitary_2d, walk_eigenstate_2d

# Hard cap on dense amplitude counts; larger configurations belong in the
# occupation-number (fock) representation.
AMPLITUDE_CAP = 2_000_000

SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalBasisLabel:
    """A strictly increasing (canonical order) tuple of energy labels.

    Construction validates the order, so holding one is proof of a
    well-formed energy-basis index.
    """

    modes: tuple[EnergyModeLabel, ...]

    def __post_init__(self):
        keys = [mode_ordering_key(m) for m in self.modes]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("labels must be strictly increasing in the canonical order")

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)


@dataclass(frozen=True)
class MultiState:
    """Dense amplitudes over (walk_dim + 1)**n_factors basis states.

    Factor-local index walk_dim is the vacuum; factor 0 is the major axis
    of the flattened vector.
    """

    amplitudes: np.ndarray
    walk_dim: int
    n_factors: int

    def __post_init__(self):
        dim = self.factor_dim ** self.n_factors
        if dim > AMPLITUDE_CAP:
            raise ValueError(
                f"state with {dim} amplitudes exceeds the dense cap {AMPLITUDE_CAP}"
            )
        if self.amplitudes.shape != (dim,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, expected ({dim},)"
            )

    @property
    def factor_dim(self) -> int:
        return self.walk_dim + 1

    @property
    def vacuum_index(self) -> int:
        return self.walk_dim

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.factor_dim,) * self.n_factors)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def default_n_max(walk_dim: int) -> int:
    """Factor count giving full walk capacity, clipped to the dense cap.

    With one slot per walk state, saturation (creating past capacity
    yields zero) follows from antisymmetry alone; smaller walk spaces
    get all walk_dim slots, larger ones as many as fit under the cap.
    """
    n = 1
    while n < walk_dim and (walk_dim + 1) ** (n + 1) <= AMPLITUDE_CAP:
        n += 1
    return n


def vacuum_state(walk_dim: int, n_factors: int) -> MultiState:
    amps = np.zeros((walk_dim + 1) ** n_factors, dtype=complex)
    amps[-1] = 1.0  # all factors at the vacuum index
    return MultiState(amps, walk_dim, n_factors)


def product_state(factors, walk_dim: int) -> MultiState:
    """Tensor product of per-factor walk vectors; None means the factor vacuum."""
    factors = list(factors)
    acc = np.array([1.0], dtype=complex)
    for vec in factors:
        ext = np.zeros(walk_dim + 1, dtype=complex)
        if vec is None:
            ext[-1] = 1.0
        else:
            if len(vec) != walk_dim:
                raise ValueError(f"factor vector has length {len(vec)}, expected {walk_dim}")
            ext[:walk_dim] = vec
        acc = np.kron(acc, ext)
    return MultiState(acc, walk_dim, len(factors))


def extended_unitary(u: np.ndarray) -> np.ndarray:
    """Walk unitary extended to act as the identity on the factor vacuum."""
    d = u.shape[0]
    ext = np.zeros((d + 1, d + 1), dtype=complex)
    ext[:d, :d] = u
    ext[d, d] = 1.0
    return ext


def apply_per_factor(u_ext: np.ndarray, state: MultiState) -> MultiState:
    """Apply the same single-factor operator to every tensor factor."""
    f = state.factor_dim
    if u_ext.shape != (f, f):
        raise ValueError(f"operator has shape {u_ext.shape}, expected ({f}, {f})")
    arr = state.tensor()
    for axis in range(state.n_factors):
        arr = np.moveaxis(np.tensordot(u_ext, arr, axes=(1, axis)), 0, axis)
    return MultiState(arr.reshape(-1), state.walk_dim, state.n_factors)


def _walk_matrix(spec: LatticeSpec) -> np.ndarray:
    if spec.dimension == 1:
        return build_walk_unitary_1d(spec).matrix
    return build_walk_unitary_2d(spec).matrix


def total_evolution_apply(spec: LatticeSpec, n_max: int, state: MultiState) -> MultiState:
    """One step of the n_max-fold vacuum-extended walk."""
    if state.n_factors != n_max:
        raise ValueError(f"state has {state.n_factors} factors, expected {n_max}")
    if state.walk_dim != spec.walk_dim:
        raise ValueError(
            f"state walk dimension {state.walk_dim} does not match lattice ({spec.walk_dim})"
        )
    return apply_per_factor(extended_unitary(_walk_matrix(spec)), state)


def _permutation_parity(perm) -> int:
    inversions = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return inversions % 2


def _antisymmetrize_tensor(block: np.ndarray, n: int) -> np.ndarray:
    """Project a (d,)*n tensor onto its totally antisymmetric part."""
    if n <= 1:
        return block.copy()
    out = np.zeros_like(block)
    for perm in itertools.permutations(range(n)):
        sign = -1.0 if _permutation_parity(perm) else 1.0
        out += sign * block.transpose(perm)
    out /= factorial(n)
    return out


def _occupied_block_index(n: int, n_factors: int, walk_dim: int):
    return (slice(0, walk_dim),) * n + (walk_dim,) * (n_factors - n)


def antisymmetrize(state: MultiState, n: int) -> MultiState:
    """Antisymmetrize over the first n factors (the remaining must be vacuum).

    Idempotent; raises if the state has weight outside the configurations
    where exactly the first n factors are occupied.
    """
    if not 0 <= n <= state.n_factors:
        raise ValueError(f"n must lie in 0..{state.n_factors}, got {n}")
    arr = state.tensor()
    idx = _occupied_block_index(n, state.n_factors, state.walk_dim)
    block = arr[idx]
    outside = sqrt(max(state.norm() ** 2 - float(np.linalg.norm(block) ** 2), 0.0))
    if outside > SUPPORT_TOL:
        raise ValueError(
            f"state has weight {outside:.3e} outside the first-{n}-occupied block"
        )
    out = np.zeros_like(arr)
    out[idx] = _antisymmetrize_tensor(np.asarray(block), n)
    return MultiState(out.reshape(-1), state.walk_dim, state.n_factors)


def _walk_eigenstate(spec: LatticeSpec, label: EnergyModeLabel) -> np.ndarray:
    if spec.dimension == 1:
        return walk_eigenstate_1d(spec, label)
    return walk_eigenstate_2d(spec, label)


def ordered_product_state(spec: LatticeSpec, labels, n_max: int) -> MultiState:
    """Antisymmetrized product of walk eigenstates in the given creation order.

    The labels must be distinct but may be in any order; swapping two of
    them flips the overall sign.
    """
    labels = list(labels)
    n = len(labels)
    if n > n_max:
        raise ValueError(f"{n} labels exceed n_max = {n_max}")
    if len(set(labels)) != n:
        raise ValueError("labels must be distinct (a repeat antisymmetrizes to zero)")
    if n == 0:
        return vacuum_state(spec.walk_dim, n_max)
    d = spec.walk_dim
    parts = [_walk_eigenstate(spec, label) for label in labels]
    block = np.zeros((d,) * n, dtype=complex)
    for perm in itertools.permutations(range(n)):
        sign = -1.0 if _permutation_parity(perm) else 1.0
        term = parts[perm[0]]
        for j in perm[1:]:
            term = np.multiply.outer(term, parts[j])
        block += sign * term
    block /= sqrt(factorial(n))
    out = np.zeros((d + 1,) * n_max, dtype=complex)
    out[_occupied_block_index(n, n_max, d)] = block
    return MultiState(out.reshape(-1), d, n_max)


def physical_basis_state(spec: LatticeSpec, labels, n_max: int) -> MultiState:
    """Energy-basis state for a strictly increasing label list (canonical order)."""
    if not isinstance(labels, PhysicalBasisLabel):
        labels = PhysicalBasisLabel(tuple(labels))
    return ordered_product_state(spec, labels.modes, n_max)


def eigenphase_check(spec: LatticeSpec, labels, n_max: int) -> float:
    """Residual of U_total psi = exp(i * sum(branch * phi)) psi for an energy-basis state."""
    from .walk1d import momentum_block_1d
    from .walk2d import momentum_block_2d

    labels = list(labels)
    state = physical_basis_state(spec, labels, n_max)
    block_of = momentum_block_1d if spec.dimension == 1 else momentum_block_2d
    total_phase = sum(label.branch * block_of(spec, label.mode).phi for label in labels)
    evolved = total_evolution_apply(spec, n_max, state)
    return float(
        np.linalg.norm(evolved.amplitudes - np.exp(1j * total_phase) * state.amplitudes)
    )


def project_physical(state: MultiState) -> MultiState:
    """Orthogonal projection onto vacuum + antisymmetric first-n-occupied sectors."""
    arr = state.tensor()
    out = np.zeros_like(arr)
    for n in range(state.n_factors + 1):
        idx = _occupied_block_index(n, state.n_factors, state.walk_dim)
        out[idx] = _antisymmetrize_tensor(np.asarray(arr[idx]), n)
    return MultiState(out.reshape(-1), state.walk_dim, state.n_factors)


def physical_subspace_projector_residual(state: MultiState) -> float:
    """Norm of the component of `state` outside the physical subspace.

    Computed as ||psi - P psi|| directly; the difference of squared norms
    would lose half the available precision for nearly-physical states.
    """
    projected = project_physical(state)
    return float(np.linalg.norm(state.amplitudes - projected.amplitudes))


def random_physical_state(walk_dim: int, n_factors: int, rng: np.random.Generator) -> MultiState:
    """Seeded random unit vector inside the physical subspace."""
    dim = (walk_dim + 1) ** n_factors
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    projected = project_physical(MultiState(raw, walk_dim, n_factors))
    nrm = projected.norm()
    if nrm < 1e-12:
        raise ValueError("random draw projected to (numerically) zero; reseed")
    return MultiState(projected.amplitudes / nrm, walk_dim, n_factors)


def save_state(path, state: MultiState) -> None:
    """Textual dump: one JSON header line, then `index real imag` per amplitude."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {
            "walk_dim": state.walk_dim,
            "n_factors": state.n_factors,
            "vacuum_index": state.vacuum_index,
        }
        fh.write(json.dumps(header) + "\n")
        for idx, amp in enumerate(state.amplitudes):
            if amp != 0:
                fh.write(f"{idx} {float(amp.real)!r} {float(amp.imag)!r}\n")


def load_state(path) -> MultiState:
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        amps = np.zeros((header["walk_dim"] + 1) ** header["n_factors"], dtype=complex)
        for line in fh:
            idx, re, im = line.split()
            amps[int(idx)] = float(re) + 1j * float(im)
    return MultiState(amps, header["walk_dim"], header["n_factors"])
