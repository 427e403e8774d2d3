import math

import numpy as np
import pytest

from qutritlab.cloner import (
    OPTIMAL_MU,
    MachineParams,
    clone,
    output_state,
    output_state_literal,
    reduced_b_literal,
    single_copy_fidelity,
    uniform_input,
)
from qutritlab.errors import BadDimension, DomainError
from qutritlab.matcore import DensityMatrix, ket, partial_trace
from qutritlab.report import reference_grid

from conftest import random_ket

SWAP = np.zeros((9, 9))
for _i in range(3):
    for _j in range(3):
        SWAP[3 * _j + _i, 3 * _i + _j] = 1
CYCLE = np.zeros((9, 9))
for _i in range(3):
    for _j in range(3):
        CYCLE[3 * ((_i + 1) % 3) + (_j + 1) % 3, 3 * _i + _j] = 1


def oracle_state(mu):
    """Independent construction: amplitudes psi[a, b, x] written out by hand."""
    lam = math.sqrt(1 - 4 * mu * mu)
    psi = np.zeros((3, 3, 3), dtype=complex)
    for i in range(3):
        psi[i, i, i] += lam / math.sqrt(3)
        for j in range(3):
            if j != i:
                psi[i, j, j] += mu / math.sqrt(3)
                psi[j, i, j] += mu / math.sqrt(3)
    return np.einsum("abx,cdx->abcd", psi, psi.conj()).reshape(9, 9)


def test_machine_params():
    p = MachineParams(0.3)
    assert p.lam == pytest.approx(0.8, abs=1e-15)
    assert abs(p.lam**2 + 4 * p.mu**2 - 1) < 1e-12
    assert MachineParams.optimal().is_optimal
    assert not p.is_optimal
    for bad in (0.0, -0.1, 0.51, float("nan")):
        with pytest.raises(DomainError):
            MachineParams(bad)


def test_clone_basis_input():
    mu = OPTIMAL_MU
    lam = math.sqrt(1 - 4 * mu * mu)
    expected = lam * ket(0, 0, 0) + mu * (ket(0, 1, 1) + ket(1, 0, 1)) + mu * (ket(0, 2, 2) + ket(2, 0, 2))
    assert np.allclose(clone([1, 0, 0], mu), expected, atol=1e-15)


def test_clone_normalized(rng):
    for mu in (1e-8, 0.1, OPTIMAL_MU, 0.42, 0.5):
        for _ in range(5):
            assert abs(np.linalg.norm(clone(random_ket(rng), mu)) - 1) < 1e-12


def test_clone_rejects_bad_input():
    with pytest.raises(BadDimension):
        clone([1, 0], 0.3)
    with pytest.raises(BadDimension):
        clone([1, 1, 0], 0.3)


@pytest.mark.parametrize("mu", [1e-8, 0.1, 0.25, OPTIMAL_MU, 0.45, 0.5])
def test_output_state_matches_oracle(mu):
    assert np.max(np.abs(output_state(mu).matrix - oracle_state(mu))) < 1e-14


def test_small_mu_limit():
    target = sum(np.outer(ket(i, i), ket(i, i)) for i in range(3)) / 3
    assert np.max(np.abs(output_state(1e-8).matrix - target)) < 1e-6


def test_output_valid_and_symmetric_on_grid():
    for mu in reference_grid():
        rho = output_state(mu)  # construction validates hermiticity, trace and PSD
        m = rho.matrix
        assert rho.spectrum[0] >= -1e-10
        assert np.max(np.abs(SWAP @ m @ SWAP.T - m)) < 1e-12
        assert np.max(np.abs(CYCLE @ m @ CYCLE.T - m)) < 1e-12


def test_optimal_cloner_is_universal(rng):
    fids = [single_copy_fidelity(random_ket(rng), OPTIMAL_MU) for _ in range(60)]
    assert np.var(fids) < 1e-10
    assert np.mean(fids) == pytest.approx(0.75, abs=1e-12)


def test_nonoptimal_cloner_is_not_universal():
    assert single_copy_fidelity([1, 0, 0], 0.3) == pytest.approx(0.82, abs=1e-12)
    assert single_copy_fidelity(uniform_input(), 0.3) == pytest.approx(0.71333333333333, abs=1e-12)


@pytest.mark.parametrize("mu", [0.1, 0.3, 0.45])
def test_reduced_b_literal_matches(mu):
    num = partial_trace(output_state(mu), keep=1).matrix
    assert np.max(np.abs(reduced_b_literal(mu).matrix - num)) < 1e-12


def test_reduced_b_literal_examples():
    assert np.allclose(reduced_b_literal(1e-12).matrix, np.eye(3) / 3, atol=1e-11)
    off = (1 / 3) * 0.45 * (2 * math.sqrt(1 - 0.81) + 0.45)
    assert reduced_b_literal(0.45).matrix[0, 1] == pytest.approx(off, abs=1e-15)


def test_literal_diagonal_and_traces():
    for modulus in (2, 3):
        lit = output_state_literal(0.2, modulus)
        for i in range(3):
            assert lit[4 * i, 4 * i] == pytest.approx((1 - 4 * 0.04) / 3, abs=1e-15)
    assert np.trace(output_state_literal(0.2, 3)) == pytest.approx(1, abs=1e-12)
    # the printed mod-2 index rule adds weight to the diagonal
    assert np.trace(output_state_literal(0.2, 2)) == pytest.approx(1 + 2 * 0.04 / 3, abs=1e-12)


def test_literal_disagrees_with_cloner():
    for modulus in (2, 3):
        dev = max(np.max(np.abs(output_state_literal(mu, modulus) - output_state(mu).matrix)) for mu in (0.1, 0.3, 0.5))
        assert dev > 1e-3
    lit2 = output_state_literal(0.3, 2)
    assert not np.allclose(lit2, lit2.conj().T)
