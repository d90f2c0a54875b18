"""Closed-form dynamics of the 2x2 blocks of the oracle+ancilla Hamiltonian.

The joint Hamiltonian couples |n-1, e> only to |n, g>, so it splits into
two-level blocks indexed by the ground-ancilla state n.  Every block is
stored in the basis (|n-1 mod N, e>, |n, g>): the first component is the
"upper" (excited-ancilla) one, the second the "lower" (ground-ancilla) one.
A freshly prepared block therefore has density diag(0, 1).

Units: epsilon = hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# Below this value of Omega*t, sin(Omega t)/Omega is taken from its Taylor series.
SMALL_PHASE = 1e-8


class BlockType(Enum):
    ANSWER = "answer"  # g-state is the solution |w>
    NEIGHBOR = "neighbor"  # g-state is |w+1>, e-state carries |w>
    GENERIC = "generic"  # the N-2 remaining blocks


@dataclass(frozen=True)
class TwoLevelBlock:
    """Real-symmetric block [[e_upper, coupling], [coupling, e_lower]]."""

    e_upper: float
    e_lower: float
    coupling: float

    @property
    def mean(self) -> float:
        return 0.5 * (self.e_upper + self.e_lower)

    @property
    def half_splitting(self) -> float:
        return 0.5 * (self.e_upper - self.e_lower)

    @property
    def rabi(self) -> float:
        return math.hypot(self.half_splitting, self.coupling)

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.e_upper, self.coupling], [self.coupling, self.e_lower]], dtype=float
        )


def block_for_type(block_type: BlockType, gamma: float, delta: float) -> TwoLevelBlock:
    """Block of the degenerate oracle for the given class.

    Answer holds (|w-1,e>, |w,g>), Neighbor (|w,e>, |w+1,g>), Generic any
    other pair; the oracle energies are 0 on |w> and 1 elsewhere.
    """
    if delta < 0:
        raise ValueError(f"coupling must be nonnegative, got {delta}")
    block_type = BlockType(block_type)
    if block_type is BlockType.ANSWER:
        return TwoLevelBlock(1.0 - gamma, gamma, delta)
    if block_type is BlockType.NEIGHBOR:
        return TwoLevelBlock(-gamma, 1.0 + gamma, delta)
    return TwoLevelBlock(1.0 - gamma, 1.0 + gamma, delta)


def generalized_block(
    e_left: float, e_right: float, gamma: float, delta: float
) -> TwoLevelBlock:
    """Block pairing |n-1, e> (oracle energy e_left) with |n, g> (e_right)."""
    if delta < 0:
        raise ValueError(f"coupling must be nonnegative, got {delta}")
    return TwoLevelBlock(e_left - gamma, e_right + gamma, delta)


def _sinc_t(omega: float, t: float) -> float:
    """sin(omega t) / omega, continuous at omega -> 0."""
    x = omega * t
    if abs(x) < SMALL_PHASE:
        return t * (1.0 - x * x / 6.0)
    return math.sin(x) / omega


def propagator(block: TwoLevelBlock, t: float) -> np.ndarray:
    """exp(-i h t) for one block, from h = c I + a sigma_z + delta sigma_x.

    Returns a 2x2 complex array in the (upper, lower) basis.
    """
    if t < 0:
        raise ValueError(f"evolution time must be nonnegative, got {t}")
    c, a, d = block.mean, block.half_splitting, block.coupling
    omega = block.rabi
    cos = math.cos(omega * t)
    s = _sinc_t(omega, t)
    phase = complex(math.cos(c * t), -math.sin(c * t))
    return phase * np.array(
        [[cos - 1j * a * s, -1j * d * s], [-1j * d * s, cos + 1j * a * s]],
        dtype=complex,
    )


def survival_prob(block: TwoLevelBlock, t: float) -> float:
    """Probability that a block started in |n, g> is found with the ancilla in g.

    Equal to |U_gg|^2 = 1 - delta^2 sin^2(Omega t) / Omega^2, exactly 1 when
    the coupling vanishes.
    """
    if t < 0:
        raise ValueError(f"evolution time must be nonnegative, got {t}")
    leak = block.coupling * _sinc_t(block.rabi, t)
    return min(1.0, max(0.0, 1.0 - leak * leak))
