"""Fermionic mode algebra over an ordered list of energy labels.

Basis states are occupation bitstrings: bit i of the basis index is the
occupation of the i-th mode in the basis order.  Creation operators carry
the parity sign over the occupied modes that precede them; the one-step
evolution is diagonal, multiplying each bitstring by the accumulated
branch-signed eigenphases of its occupied modes.
"""

from __future__ import annotations

from cmath import exp as cexp
from dataclasses import dataclass
from math import cos, sin, sqrt

import numpy as np

from .blocks import DEGENERACY_TOL, FORM_SWITCH_TOL
from .lattice import (
    EnergyModeLabel,
    LatticeSpec,
    MomentumMode,
    mode_ordering_key,
)
from .multiparticle import MultiState, ordered_product_state
from .walk1d import momentum_block_1d, pauli_coefficients_1d
from .walk2d import momentum_block_2d

MODE_CAP = 20


class DegenerateModeError(ValueError):
    """The momentum-mode decomposition is undefined at this mode."""


@dataclass(frozen=True)
class FockBasis:
    """Ordered energy modes; the state space is the 2**M occupation strings."""

    modes: tuple[EnergyModeLabel, ...]

    def __post_init__(self):
        if len(self.modes) > MODE_CAP:
            raise ValueError(f"{len(self.modes)} modes exceed the cap {MODE_CAP}")

    @property
    def dim(self) -> int:
        return 1 << len(self.modes)

    def index(self, label: EnergyModeLabel) -> int:
        try:
            return self.modes.index(label)
        except ValueError:
            raise ValueError(f"label {label} is not in this basis") from None


def fock_basis(labels, key=mode_ordering_key) -> FockBasis:
    """Basis over the given labels, sorted by `key` (canonical by default)."""
    modes = sorted(labels, key=key)
    keys = [key(m) for m in modes]
    if any(a == b for a, b in zip(keys, keys[1:])):
        raise ValueError("duplicate energy labels in basis")
    return FockBasis(tuple(modes))


def full_fock_basis(spec: LatticeSpec) -> FockBasis:
    from .lattice import energy_labels

    return fock_basis(energy_labels(spec))


@dataclass(frozen=True)
class FockOperator:
    """Dense operator on the occupation space, tagged with its role."""

    matrix: np.ndarray
    role: str

    @property
    def dagger(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T, self.role)


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def _parity_below(bits: int, position: int) -> int:
    return bin(bits & ((1 << position) - 1)).count("1") & 1


def creation_op(basis: FockBasis, label: EnergyModeLabel) -> FockOperator:
    """Fermionic creation matrix with the parity-string sign convention."""
    pos = basis.index(label)
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for bits in range(basis.dim):
        if not (bits >> pos) & 1:
            sign = -1.0 if _parity_below(bits, pos) else 1.0
            mat[bits | (1 << pos), bits] = sign
    return FockOperator(mat, "creation")


def annihilation_op(basis: FockBasis, label: EnergyModeLabel) -> FockOperator:
    return FockOperator(creation_op(basis, label).matrix.conj().T, "annihilation")


def number_op(basis: FockBasis, label: EnergyModeLabel) -> FockOperator:
    pos = basis.index(label)
    diag = np.array([(bits >> pos) & 1 for bits in range(basis.dim)], dtype=float)
    return FockOperator(np.diag(diag).astype(complex), "composite")


def _block(spec: LatticeSpec, mode: MomentumMode):
    return momentum_block_1d(spec, mode) if spec.dimension == 1 else momentum_block_2d(spec, mode)


def mode_phases(basis: FockBasis, spec: LatticeSpec) -> np.ndarray:
    """Branch-signed eigenphase of each basis mode."""
    return np.array(
        [label.branch * _block(spec, label.mode).phi for label in basis.modes]
    )


def evolution_diagonal(basis: FockBasis, spec: LatticeSpec) -> FockOperator:
    """One-step evolution: each bitstring gains exp(i * sum of occupied branch-phases)."""
    phases = mode_phases(basis, spec)
    diag = np.empty(basis.dim, dtype=complex)
    for bits in range(basis.dim):
        total = sum(phases[i] for i in range(len(basis.modes)) if (bits >> i) & 1)
        diag[bits] = cexp(1j * total)
    return FockOperator(np.diag(diag), "diagonal-evolution")


def momentum_mode_coefficients_1d(spec: LatticeSpec, mode: MomentumMode):
    """(alpha_R, beta_R, alpha_L, beta_L) expanding the coin axes over v_plus, v_minus.

    Closed forms; undefined (raises) on degenerate blocks and, for the L
    pair, at sin(theta) = 0 where its normalization vanishes.
    """
    block = momentum_block_1d(spec, mode)
    if block.degenerate:
        raise DegenerateModeError(f"mode {mode.ell} is degenerate; decomposition is arbitrary")
    k_dx = mode.k[0] * spec.dx
    st = sin(spec.theta)
    if abs(st) < DEGENERACY_TOL:
        raise DegenerateModeError("left coefficients are undefined at sin(theta) = 0")
    s = sqrt(1.0 - (cos(k_dx) * cos(spec.theta)) ** 2)
    r3 = sin(k_dx) * cos(spec.theta)
    if min(s - r3, s + r3) <= FORM_SWITCH_TOL * s:
        raise DegenerateModeError(f"mode {mode.ell} sits at an eigenvector pole")
    norm_plus = sqrt((r3 + s) ** 2 + st * st)
    norm_minus = sqrt((r3 - s) ** 2 + st * st)
    norm_r = 2.0 * s
    norm_l = 2.0 * st * s
    phase = cexp(-1j * k_dx)
    return (
        norm_plus / norm_r,
        -norm_minus / norm_r,
        phase * norm_plus * (s - r3) / norm_l,
        phase * norm_minus * (s + r3) / norm_l,
    )


def momentum_mode_coefficients_2d(spec: LatticeSpec, mode: MomentumMode):
    """2D analogue of the coefficient closed forms.

    beta_R carries a minus sign: with the eigenvector conventions used
    here (first component of v_minus real and non-positive) the pair
    (alpha_R, beta_R) must reconstruct (1, 0) exactly.
    """
    block = momentum_block_2d(spec, mode)
    if block.degenerate:
        raise DegenerateModeError(f"mode {mode.ell} is degenerate; decomposition is arbitrary")
    _, r1, r2, r3 = block.r
    s = sqrt(r1 * r1 + r2 * r2 + r3 * r3)
    if min(s - r3, s + r3) <= FORM_SWITCH_TOL * s:
        raise DegenerateModeError(f"mode {mode.ell} sits at an eigenvector pole")
    w = r1 - 1j * r2
    return (
        sqrt((s + r3) / (2.0 * s)),
        -sqrt((s - r3) / (2.0 * s)),
        w / sqrt(2.0 * s * (s + r3)),
        w / sqrt(2.0 * s * (s - r3)),
    )


def momentum_mode_coefficients(spec: LatticeSpec, mode: MomentumMode):
    if spec.dimension == 1:
        return momentum_mode_coefficients_1d(spec, mode)
    return momentum_mode_coefficients_2d(spec, mode)


def momentum_mode_ops(
    basis: FockBasis, spec: LatticeSpec, mode: MomentumMode
) -> tuple[FockOperator, FockOperator]:
    """Creation operators for the coin-axis (R, L) states of one momentum.

    Conjugating the pair by the diagonal evolution mixes them with the
    transpose of the mode's block: the column (a_R+, a_L+) maps by M^T,
    equivalently the row vector maps by right-multiplication with M.
    """
    alpha_r, beta_r, alpha_l, beta_l = momentum_mode_coefficients(spec, mode)
    plus = creation_op(basis, EnergyModeLabel(mode, 1)).matrix
    minus = creation_op(basis, EnergyModeLabel(mode, -1)).matrix
    return (
        FockOperator(alpha_r * plus + beta_r * minus, "creation"),
        FockOperator(alpha_l * plus + beta_l * minus, "creation"),
    )


def occupied_labels(basis: FockBasis, bits: int) -> list[EnergyModeLabel]:
    return [label for i, label in enumerate(basis.modes) if (bits >> i) & 1]


def fock_to_firstquantized(
    basis: FockBasis, bits: int, spec: LatticeSpec, n_max: int
) -> MultiState:
    """Map an occupation bitstring to its antisymmetrized tensor-space state.

    The creation order is the basis order, so the map intertwines the
    diagonal evolution with the factor-wise walk evolution.
    """
    if not 0 <= bits < basis.dim:
        raise ValueError(f"bitstring {bits} out of range for {len(basis.modes)} modes")
    labels = occupied_labels(basis, bits)
    if len(labels) > n_max:
        raise ValueError(f"{len(labels)} occupied modes exceed n_max = {n_max}")
    return ordered_product_state(spec, labels, n_max)


def save_operator_csv(path, op: FockOperator) -> None:
    """Nonzero entries as `row,col,real,imag` lines under a header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("row,col,real,imag\n")
        rows, cols = np.nonzero(op.matrix)
        for r, c in zip(rows, cols):
            val = op.matrix[r, c]
            fh.write(f"{r},{c},{float(val.real)!r},{float(val.imag)!r}\n")
