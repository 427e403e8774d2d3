"""Buzek-Hillery universal cloner for qutrits.

The machine maps ``|i>_a |0>_b |X>_x`` to

    lam |i,i>|X_i> + mu * sum_{j != i} (|i,j> + |j,i>) |X_j>

with ``lam**2 + 4*mu**2 = 1``. Machine states ``X_0, X_1, X_2`` are the
computational basis of a third qutrit register, ordered last (a, b, x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BadDimension, DomainError
from .matcore import DensityMatrix, ket, partial_trace

D = 3
OPTIMAL_MU = 1.0 / (2.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class MachineParams:
    mu: float
    lam: float = field(init=False)

    def __post_init__(self):
        mu = float(self.mu)
        if not (0.0 < mu <= 0.5):
            raise DomainError(f"mu must lie in (0, 1/2], got {mu!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "lam", math.sqrt(max(0.0, 1.0 - 4.0 * mu * mu)))

    @property
    def is_optimal(self) -> bool:
        return math.isclose(self.mu * self.mu, 0.125, rel_tol=0.0, abs_tol=1e-12)

    @classmethod
    def optimal(cls) -> "MachineParams":
        return cls(OPTIMAL_MU)


def _params(p) -> MachineParams:
    return p if isinstance(p, MachineParams) else MachineParams(p)


def uniform_input() -> np.ndarray:
    """The equal superposition ``(|0> + |1> + |2>)/sqrt(3)`` fed to the cloner."""
    return np.ones(D, dtype=complex) / math.sqrt(D)


def _basis_image(i: int, p: MachineParams) -> np.ndarray:
    out = p.lam * ket(i, i, i)
    for j in range(D):
        if j != i:
            out = out + p.mu * (ket(i, j, j) + ket(j, i, j))
    return out


def clone(psi, params) -> np.ndarray:
    """Tripartite a-b-x output vector (length 27) for input amplitudes ``psi``."""
    p = _params(params)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (D,):
        raise BadDimension(f"input must be a qutrit, got {psi.shape[0]} amplitudes")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
        raise BadDimension("input state is not normalized")
    return sum(psi[i] * _basis_image(i, p) for i in range(D))


def copies_state(psi, params) -> DensityMatrix:
    """Two-copy state on a, b with the machine register traced out."""
    v = clone(psi, params).reshape(D * D, D)
    rho = v @ np.conj(v).T
    return DensityMatrix(0.5 * (rho + np.conj(rho).T), (D, D))


def output_state(params) -> DensityMatrix:
    """rho_ab(mu) for the uniform superposition input."""
    return _output_state(_params(params).mu)


@lru_cache(maxsize=512)
def _output_state(mu: float) -> DensityMatrix:
    return copies_state(uniform_input(), mu)


def output_state_literal(params, modulus: int = 2) -> np.ndarray:
    """The printed closed form of rho_ab, kept only as a transcription check.

    The last summand shifts indices by one and reduces them with
    ``modulus``; the printed text says mod 2, mod 3 is the other natural
    reading. Neither yields the cloner output, and the mod-2 form is not
    even Hermitian, so a bare array is returned instead of a DensityMatrix.
    """
    p = _params(params)
    mu, lam = p.mu, p.lam
    kk = lambda i, j: ket(i % D, j % D)
    rho = np.zeros((D * D, D * D), dtype=complex)
    for i in range(D):
        rho += (1.0 - 4.0 * mu * mu) / 3.0 * np.outer(kk(i, i), kk(i, i))
    for i in range(D):
        for j in range(D):
            if i == j:
                continue
            rho += 2.0 / 3.0 * mu * mu * np.outer(kk(i, j), kk(i, j) + kk(j, i))
            rho += lam * mu / 3.0 * np.outer(kk(i, i), kk(i, j) + kk(j, i))
            rho += lam * mu / 3.0 * np.outer(kk(i, j), kk(i, i) + kk(j, j))
            i1, j1 = (i + 1) % modulus, (j + 1) % modulus
            bra = kk(i, j1) + kk(j1, i) + kk(i1, j1) + kk(j1, i1)
            rho += mu * mu / 3.0 * np.outer(kk(i, j), bra)
    return rho


def reduced_b_literal(params) -> DensityMatrix:
    """Printed single-copy state: 1/3 on the diagonal, mu(2 lam + mu)/3 elsewhere."""
    p = _params(params)
    off = p.mu * (2.0 * p.lam + p.mu) / 3.0
    m = np.full((D, D), off, dtype=complex)
    np.fill_diagonal(m, 1.0 / 3.0)
    return DensityMatrix(m, (D,))


def single_copy_fidelity(psi, params) -> float:
    """<psi| rho_a |psi> for the clone on subsystem a."""
    psi = np.asarray(psi, dtype=complex)
    rho_a = partial_trace(copies_state(psi, params), keep=0)
    return rho_a.expectation(psi)
