"""Model Hamiltonian, its exact spectrum, and the nine transition channels.

The machine is three qubits H (hot), R (room) and C (cold) with transition
frequencies ``omega_h``, ``omega_r = omega_c + omega_h`` and ``omega_c``,
coupled by a three-body exchange of strength ``g``:

    H_S = sum_a (omega_a / 2) sigma_a^z
          + g (|101><010| + |010><101|)        (basis |q_H q_R q_C>)

The computational basis is ordered |111>, |110>, ..., |000> (descending
binary).  Because the exchange only mixes |101> and |010>, the full 8x8
eigensystem is closed form: six product states plus the symmetric and
antisymmetric combinations of |101> and |010>.  All operators built here use
those closed-form kets, so their entries are exact up to the float value of
1/sqrt(2); no numerical diagonalization enters.

Each qubit couples to its reservoir through three lowering eigen-operators
("channels") at frequencies ``omega_a`` and ``omega_a +- g``, each satisfying
``[H_S, A] = -omega A`` with ``A(omega)^dag = A(-omega)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrixcore import dagger

__all__ = [
    "QUBITS",
    "DIM",
    "SystemParams",
    "EigenSystem",
    "TransitionChannel",
    "DegenerateChannelsError",
    "build_hamiltonian",
    "eigensystem",
    "transition_channels",
    "channel_frequency",
    "channel_commutator_check",
    "degenerate_frequency_pairs",
    "check_nondegenerate",
]

QUBITS = ("H", "R", "C")
DIM = 8

_SQ2 = 1.0 / np.sqrt(2.0)

# Channel frequency = omega_qubit + offset * g, keyed by (qubit, index).
_FREQ_OFFSET = {
    ("H", 1): 0, ("H", 2): -1, ("H", 3): +1,
    ("R", 1): -1, ("R", 2): 0, ("R", 3): +1,
    ("C", 1): -1, ("C", 2): +1, ("C", 3): 0,
}

# Lowering-operator matrix elements in the energy eigenbasis:
# (qubit, index) -> ((to_level, from_level, coefficient), ...).
# Levels are 0-based, ordered by the fixed energy list of `eigensystem`.
_CHANNEL_ELEMENTS = {
    ("H", 1): ((4, 0, 1.0), (7, 3, 1.0)),
    ("H", 2): ((2, 1, _SQ2), (6, 5, _SQ2)),
    ("H", 3): ((6, 2, _SQ2), (5, 1, -_SQ2)),
    ("R", 1): ((2, 0, _SQ2), (7, 5, -_SQ2)),
    ("R", 2): ((3, 1, 1.0), (6, 4, 1.0)),
    ("R", 3): ((7, 2, _SQ2), (5, 0, _SQ2)),
    ("C", 1): ((2, 4, _SQ2), (3, 5, _SQ2)),
    ("C", 2): ((3, 2, _SQ2), (5, 4, -_SQ2)),
    ("C", 3): ((1, 0, 1.0), (7, 6, 1.0)),
}

# 2 |coefficient|^2, the exact rate weight of each level pair; kept as exact
# integers-in-float so population rate matrices carry no sqrt(2) rounding.
_CHANNEL_PAIR_WEIGHT = {
    key: 2.0 if elements[0][2] in (1.0, -1.0) else 1.0
    for key, elements in _CHANNEL_ELEMENTS.items()
}


class DegenerateChannelsError(ValueError):
    """Two channel frequencies coincide, breaking the secular treatment."""


@dataclass(frozen=True)
class SystemParams:
    """The five model numbers, in natural units (hbar = k_B = 1).

    ``omega_r`` is always the derived sum ``omega_c + omega_h``.
    ``unit_scale`` is the physical angular frequency (rad/s) of one natural
    frequency unit; it only matters when converting I/O values and has no
    effect on the dynamics.
    """

    omega_c: float
    omega_h: float
    g: float
    gamma: float
    unit_scale: float | None = None

    def __post_init__(self):
        if not (self.omega_c > 0 and self.omega_h > self.omega_c):
            raise ValueError(
                f"need omega_h > omega_c > 0, got "
                f"omega_c={self.omega_c}, omega_h={self.omega_h}"
            )
        if not (0 < self.g < self.omega_c):
            raise ValueError(
                f"need 0 < g < omega_c (all channel frequencies positive), "
                f"got g={self.g}, omega_c={self.omega_c}"
            )
        if not self.gamma > 0:
            raise ValueError(f"need gamma > 0, got {self.gamma}")
        if self.unit_scale is not None and not self.unit_scale > 0:
            raise ValueError(f"unit_scale must be positive, got {self.unit_scale}")

    @property
    def omega_r(self) -> float:
        return self.omega_c + self.omega_h


@dataclass(frozen=True)
class EigenSystem:
    """Exact eigensystem of the three-qubit Hamiltonian.

    ``energies[k]`` and column ``vectors[:, k]`` belong together; the level
    order is the fixed list ``[w_R, w_H, g, -w_C, w_C, -g, -w_H, -w_R]``, not
    ascending energy.
    """

    energies: np.ndarray
    vectors: np.ndarray

    def to_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        return dagger(self.vectors) @ op @ self.vectors

    def from_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        return self.vectors @ op @ dagger(self.vectors)

    def diagonal_state(self, populations: np.ndarray) -> np.ndarray:
        """Density matrix (computational basis) with the given level
        populations and no coherences."""
        return self.from_eigenbasis(np.diag(np.asarray(populations, dtype=complex)))


@dataclass(frozen=True)
class TransitionChannel:
    """One lowering eigen-operator A with [H_S, A] = -frequency * A.

    ``operator`` is the 8x8 matrix in the computational basis;
    ``elements`` lists the same operator as (to_level, from_level, coeff)
    triples in the eigenbasis, which is what the population dynamics uses.
    ``pair_weight`` is 2 |coeff|^2 (exactly 1 or 2), the rate weight every
    level pair of this channel carries in the population picture.
    """

    qubit: str
    index: int
    frequency: float
    operator: np.ndarray = field(repr=False)
    elements: tuple[tuple[int, int, float], ...] = field(repr=False)
    pair_weight: float = 1.0

    @property
    def key(self) -> tuple[str, int]:
        return (self.qubit, self.index)

    def __str__(self) -> str:
        return f"{self.qubit}{self.index}"


def _basis_index(qh: int, qr: int, qc: int) -> int:
    # |111> -> 0 ... |000> -> 7
    return (1 - qh) * 4 + (1 - qr) * 2 + (1 - qc)


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """8x8 Hamiltonian in the computational basis |q_H q_R q_C>."""
    h = np.zeros((DIM, DIM), dtype=complex)
    for qh in (0, 1):
        for qr in (0, 1):
            for qc in (0, 1):
                i = _basis_index(qh, qr, qc)
                h[i, i] = 0.5 * (
                    params.omega_h * (2 * qh - 1)
                    + params.omega_r * (2 * qr - 1)
                    + params.omega_c * (2 * qc - 1)
                )
    i101 = _basis_index(1, 0, 1)
    i010 = _basis_index(0, 1, 0)
    h[i101, i010] = params.g
    h[i010, i101] = params.g
    return h


def eigensystem(params: SystemParams) -> EigenSystem:
    """Closed-form eigensystem; no numerical diagonalization involved."""
    wc, wh, g = params.omega_c, params.omega_h, params.g
    wr = params.omega_r
    energies = np.array([wr, wh, g, -wc, wc, -g, -wh, -wr])

    i101 = _basis_index(1, 0, 1)
    i010 = _basis_index(0, 1, 0)
    vectors = np.zeros((DIM, DIM), dtype=complex)
    vectors[_basis_index(1, 1, 1), 0] = 1.0
    vectors[_basis_index(1, 1, 0), 1] = 1.0
    vectors[i101, 2] = _SQ2
    vectors[i010, 2] = _SQ2
    vectors[_basis_index(1, 0, 0), 3] = 1.0
    vectors[_basis_index(0, 1, 1), 4] = 1.0
    vectors[i101, 5] = _SQ2
    vectors[i010, 5] = -_SQ2
    vectors[_basis_index(0, 0, 1), 6] = 1.0
    vectors[_basis_index(0, 0, 0), 7] = 1.0
    return EigenSystem(energies=energies, vectors=vectors)


def channel_frequency(params: SystemParams, qubit: str, index: int) -> float:
    """Frequency of channel (qubit, index); always positive for valid params."""
    base = {"H": params.omega_h, "R": params.omega_r, "C": params.omega_c}[qubit]
    return base + _FREQ_OFFSET[(qubit, index)] * params.g


def transition_channels(params: SystemParams) -> list[TransitionChannel]:
    """All nine channels, ordered H1..H3, R1..R3, C1..C3."""
    eig = eigensystem(params)
    channels = []
    for qubit in QUBITS:
        for index in (1, 2, 3):
            elements = _CHANNEL_ELEMENTS[(qubit, index)]
            op = np.zeros((DIM, DIM), dtype=complex)
            for to, frm, coeff in elements:
                op += coeff * np.outer(eig.vectors[:, to], eig.vectors[:, frm].conj())
            channels.append(
                TransitionChannel(
                    qubit=qubit,
                    index=index,
                    frequency=channel_frequency(params, qubit, index),
                    operator=op,
                    elements=elements,
                    pair_weight=_CHANNEL_PAIR_WEIGHT[(qubit, index)],
                )
            )
    return channels


def channel_commutator_check(params: SystemParams) -> float:
    """Max over channels of ||[H_S, A] + omega A|| (spectral norm)."""
    h = build_hamiltonian(params)
    worst = 0.0
    for ch in transition_channels(params):
        a = ch.operator
        resid = h @ a - a @ h + ch.frequency * a
        worst = max(worst, float(np.linalg.norm(resid, 2)))
    return worst


def degenerate_frequency_pairs(
    params: SystemParams,
    keys: list[tuple[str, int]] | None = None,
    rtol: float | None = None,
) -> list[tuple[tuple[str, int], tuple[str, int]]]:
    """Pairs of channels (restricted to ``keys`` if given) whose frequencies
    coincide within ``rtol * omega_c`` (default 1e3 * machine epsilon)."""
    if rtol is None:
        rtol = 1e3 * np.finfo(float).eps
    if keys is None:
        keys = list(_FREQ_OFFSET)
    tol = rtol * params.omega_c
    pairs = []
    for i, ka in enumerate(keys):
        for kb in keys[i + 1:]:
            if abs(channel_frequency(params, *ka) - channel_frequency(params, *kb)) < tol:
                pairs.append((ka, kb))
    return pairs


def check_nondegenerate(
    params: SystemParams,
    keys: list[tuple[str, int]] | None = None,
) -> None:
    """Raise :class:`DegenerateChannelsError` if any two of the given
    channels share a frequency.  The secular form of the dynamics assumes the
    participating frequencies are distinct."""
    pairs = degenerate_frequency_pairs(params, keys)
    if pairs:
        listing = ", ".join(f"{a[0]}{a[1]}~{b[0]}{b[1]}" for a, b in pairs)
        raise DegenerateChannelsError(
            f"coinciding channel frequencies: {listing} "
            f"(pass allow_degenerate=True to proceed anyway)"
        )
