"""Teleportation and dense-coding figures of merit for a shared two-qutrit state."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .entanglement import fef_basis
from .errors import DomainError
from .matcore import DensityMatrix, partial_trace, von_neumann_entropy

LOG2_3 = math.log2(3)
CLASSICAL_FEF = 1.0 / 3.0
# rounding slack on the strict thresholds; FEF is exactly 1/3 at mu = 1/2
THRESHOLD_SLACK = 1e-12


def teleportation_fidelity(fef: float) -> float:
    """Optimal qutrit teleportation fidelity ``(3F + 1) / 4``."""
    if not (-1e-9 <= fef <= 1 + 1e-9):
        raise DomainError(f"fully entangled fraction must lie in [0, 1], got {fef!r}")
    return (3.0 * fef + 1.0) / 4.0


def entropy_gap(rho: DensityMatrix) -> float:
    """``S(rho_b) - S(rho_ab)`` in bits."""
    return von_neumann_entropy(partial_trace(rho, keep=1)) - von_neumann_entropy(rho)


def dense_coding_capacity(rho: DensityMatrix) -> float:
    return LOG2_3 + entropy_gap(rho)


@dataclass(frozen=True)
class ProtocolVerdict:
    fef: float
    teleportation_fidelity: float
    useful_for_teleportation: bool
    entropy_gap: float
    capacity: float
    useful_for_dense_coding: bool


def verdict(rho: DensityMatrix, fef: float | None = None) -> ProtocolVerdict:
    """Evaluate both protocols; thresholds are strict (equality, up to rounding, is not useful)."""
    f = fef_basis(rho) if fef is None else fef
    gap = entropy_gap(rho)
    return ProtocolVerdict(
        fef=f,
        teleportation_fidelity=teleportation_fidelity(f),
        useful_for_teleportation=f > CLASSICAL_FEF + THRESHOLD_SLACK,
        entropy_gap=gap,
        capacity=LOG2_3 + gap,
        useful_for_dense_coding=gap > THRESHOLD_SLACK,
    )
