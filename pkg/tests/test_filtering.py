import math
import warnings

import numpy as np
import pytest

from qutritlab import filtering
from qutritlab.cloner import OPTIMAL_MU, output_state
from qutritlab.entanglement import NONOPT_MU_MIN, basis_state, fef_basis, reduction_report
from qutritlab.errors import DomainError, RankDeficientWarning, ZeroSuccessProbability
from qutritlab.matcore import DensityMatrix, tensor
from qutritlab.report import distill_quietly, reference_grid

from conftest import random_density, random_unitary

NONOPT_GRID = [mu for mu in reference_grid() if mu > NONOPT_MU_MIN]


def test_identity_and_scalar_filters(rng):
    rho = random_density(rng)
    for a in (np.eye(3), (2 - 3j) * np.eye(3)):
        out = filtering.apply_filter(rho, a)
        assert np.max(np.abs(out.state.matrix - rho.matrix)) < 1e-12


def test_scale_phase_invariance(rng):
    for _ in range(10):
        rho = random_density(rng)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        c = complex(*rng.normal(size=2)) * 10 ** rng.uniform(-2, 2)
        s1 = filtering.apply_filter(rho, a).state.matrix
        s2 = filtering.apply_filter(rho, c * a).state.matrix
        assert np.max(np.abs(s1 - s2)) < 1e-12


def test_operator_ordering_against_direct_formula(rng):
    rho = random_density(rng)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    big = np.kron(a, np.eye(3))
    num = big.conj().T @ rho.matrix @ big
    out = filtering.apply_filter(rho, a)
    p = np.trace(rho.matrix @ np.kron(a @ a.conj().T, np.eye(3))).real
    assert out.success_probability == pytest.approx(p, rel=1e-12)
    assert np.max(np.abs(out.state.matrix - num / p)) < 1e-12


def test_filtered_states_positive(rng):
    for _ in range(20):
        rho = random_density(rng, rank=int(rng.integers(1, 10)))
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        out = filtering.apply_filter(rho, a)
        assert np.linalg.eigvalsh(out.state.matrix)[0] >= -1e-10
        assert abs(np.trace(out.state.matrix) - 1) < 1e-12
        assert 0 < out.success_probability < np.inf


def test_zero_success_probability():
    rho = DensityMatrix(tensor(np.diag([1, 0, 0]), np.eye(3) / 3), (3, 3))
    with pytest.raises(ZeroSuccessProbability):
        filtering.apply_filter(rho, np.diag([0, 1, 1]))


def test_filter_validation():
    with pytest.raises(ValueError):
        filtering.Filter(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        filtering.Filter(np.eye(2))


def test_from_eigenvector_identity():
    f = filtering.filter_from_eigenvector(basis_state(0, 0))
    assert f.proportional_to(np.eye(3))
    assert f.provenance == "from_eigenvector"


def test_from_eigenvector_reproduces_literal_opt():
    v = reduction_report(output_state(OPTIMAL_MU)).min_eigenvector
    with pytest.warns(RankDeficientWarning):
        f = filtering.filter_from_eigenvector(v)
    assert f.proportional_to(filtering.literal_opt(), tol=1e-9)


def test_literal_opt_entries():
    m = filtering.literal_opt().matrix
    assert m[0, 0] == pytest.approx(math.sqrt(3) * (1.5 - math.sqrt(29) / 2), abs=1e-15)
    assert m[2, 2] == 0
    assert np.sum(m[:, 0]) == pytest.approx(-np.sum(m[:, 1]), abs=1e-12)


def test_literal_opt_reproduces_published_numbers():
    out = filtering.apply_filter(output_state(OPTIMAL_MU), filtering.literal_opt())
    assert fef_basis(out.state) == pytest.approx(0.38789, abs=1e-4)


def test_literal_nonopt_structure():
    m = filtering.literal_nonopt(0.45, "corrected").matrix
    assert np.allclose(m, m.T)
    assert np.allclose(np.diag(m), math.sqrt(3))
    assert m[0, 1] == pytest.approx(-math.sqrt(3) * 2.281385091487, abs=1e-9)
    with pytest.raises(DomainError):
        filtering.literal_nonopt(0.3)


@pytest.mark.parametrize("mu", [0.45, 0.47, 0.5])
def test_eigenvector_filter_selects_corrected_k(mu):
    f = distill_quietly(mu, "nonoptimal").filter_used
    assert f.proportional_to(filtering.literal_nonopt(mu, "corrected"), tol=1e-9)
    assert not f.proportional_to(filtering.literal_nonopt(mu, "printed"), tol=1e-3)


def test_printed_k_radicand_goes_negative_in_range():
    with pytest.raises(DomainError):
        filtering.literal_nonopt(0.44, "printed")


def test_pipeline_optimal():
    out = distill_quietly(OPTIMAL_MU)
    f = fef_basis(out.state)
    assert f == pytest.approx(0.3877901403, abs=1e-9)
    assert (3 * f + 1) / 4 == pytest.approx(0.5409, abs=1e-4)
    assert out.source_mu == OPTIMAL_MU


def test_pipeline_optimal_warns_rank_deficient():
    with pytest.warns(RankDeficientWarning):
        filtering.distill_pipeline(OPTIMAL_MU)


def test_pipeline_nonoptimal_no_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        filtering.distill_pipeline(0.45)


def test_pipeline_domain_errors():
    with pytest.raises(DomainError):
        filtering.distill_pipeline(0.2, "nonoptimal")
    with pytest.raises(DomainError):
        filtering.distill_pipeline(0.2)
    with pytest.raises(DomainError):
        filtering.distill_pipeline(0.45, "optimal")
    with pytest.raises(ValueError):
        filtering.distill_pipeline(0.45, "sideways")


def test_filter_availability():
    assert filtering.filter_available(OPTIMAL_MU)
    assert filtering.filter_available(0.44)
    assert not filtering.filter_available(0.43)
    assert not filtering.filter_available(0.2)


def test_distillation_raises_fef_across_range():
    for mu in NONOPT_GRID:
        raw = fef_basis(output_state(mu))
        out = distill_quietly(mu, "nonoptimal")
        assert fef_basis(out.state) > raw + 1e-6
        assert fef_basis(out.state) > 1 / 3


def test_filter_provenance_is_unitary_invariant(rng):
    # a local unitary in front of a filter changes nothing observable on subsystem b
    rho = random_density(rng)
    a = rng.normal(size=(3, 3))
    u = random_unitary(rng, 3)
    s1 = filtering.apply_filter(rho, a).state
    s2 = filtering.apply_filter(rho, a @ u).state
    from qutritlab.matcore import partial_trace

    assert np.allclose(partial_trace(s1, 1).matrix, partial_trace(s2, 1).matrix, atol=1e-12)
