"""Local filters on subsystem a and the distillation pipeline built on them.

A filter ``A`` maps ``rho`` to ``(A^dag x I) rho (A x I)`` followed by
renormalization. Filters are read off reduction-criterion eigenvectors
``v = sum_ij M_ij |i,j>`` as ``A = sqrt(3) M``, so that
``(A x I)|phi_00> = v``. This is the convention under which the
eigenvector of the optimal state reproduces the published optimal filter.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .cloner import MachineParams, output_state
from .entanglement import (
    NONOPT_MU_MIN,
    _check_nonopt_mu,
    k_corrected,
    k_printed,
    reduction_report,
)
from .errors import DomainError, NotDistillable, RankDeficientWarning, ZeroSuccessProbability
from .matcore import DensityMatrix, dagger, tensor

D = 3
PROVENANCES = ("from_eigenvector", "literal_opt", "literal_nonopt", "custom")


@dataclass(frozen=True)
class Filter:
    matrix: np.ndarray
    provenance: str = "custom"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (D, D):
            raise ValueError(f"filter must be 3x3, got {m.shape}")
        if np.max(np.abs(m)) <= 1e-12:
            raise ValueError("filter matrix is zero")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def proportional_to(self, other: "Filter | np.ndarray", tol: float = 1e-9) -> bool:
        """True when the two matrices agree up to one complex scale factor."""
        a = self.matrix.reshape(-1)
        b = np.asarray(getattr(other, "matrix", other), dtype=complex).reshape(-1)
        c = np.vdot(a, b) / np.vdot(a, a)
        return bool(np.max(np.abs(c * a - b)) <= tol * np.max(np.abs(b)))


@dataclass(frozen=True)
class FilteredState:
    state: DensityMatrix
    source_mu: float | None
    filter_used: Filter
    success_probability: float


def apply_filter(rho: DensityMatrix, a: Filter | np.ndarray, source_mu: float | None = None) -> FilteredState:
    if not isinstance(a, Filter):
        a = Filter(a)
    left = tensor(dagger(a.matrix), np.eye(rho.dims[1]))
    right = tensor(a.matrix, np.eye(rho.dims[1]))
    num = left @ rho.matrix @ right
    p = float(np.real(np.trace(rho.matrix @ tensor(a.matrix @ dagger(a.matrix), np.eye(rho.dims[1])))))
    if p <= 1e-14:
        raise ZeroSuccessProbability(f"Tr(rho A A^dag x I) = {p:.3e}")
    out = num / p
    out = 0.5 * (out + dagger(out))
    return FilteredState(DensityMatrix(out, rho.dims), source_mu, a, p)


def filter_from_eigenvector(v) -> Filter:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (D * D,):
        raise ValueError("eigenvector must have 9 components")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("eigenvector is not normalized")
    m = math.sqrt(D) * v.reshape(D, D)
    if abs(np.linalg.det(m)) < 1e-10:
        warnings.warn("coefficient matrix is singular; filter is rank deficient", RankDeficientWarning, stacklevel=2)
    return Filter(m, "from_eigenvector")


def literal_opt() -> Filter:
    """The published optimal-state filter."""
    r = math.sqrt(29.0) / 2.0
    m = math.sqrt(3.0) * np.array(
        [
            [1.5 - r, -3.5 + r, -1.0],
            [3.5 - r, -1.5 + r, 1.0],
            [2.5 - r, -2.5 + r, 0.0],
        ]
    )
    return Filter(m, "literal_opt")


def literal_nonopt(mu: float, k_variant: str = "printed") -> Filter:
    """``sqrt(3) * [[1,-k,-k],[-k,1,-k],[-k,-k,1]]``.

    ``k_variant="printed"`` uses k as typeset; ``"corrected"`` uses the
    form that matches the reduction eigenvector.
    """
    mu = _check_nonopt_mu(mu)
    if k_variant == "printed":
        k = k_printed(mu)
    elif k_variant == "corrected":
        k = k_corrected(mu)
    else:
        raise ValueError(f"unknown k variant {k_variant!r}")
    m = math.sqrt(3.0) * np.array([[1, -k, -k], [-k, 1, -k], [-k, -k, 1]], dtype=float)
    return Filter(m, "literal_nonopt")


def in_nonopt_range(mu: float) -> bool:
    return NONOPT_MU_MIN < mu <= 0.5


def filter_available(mu: float) -> bool:
    """Whether a distilled state is defined at ``mu`` (nonoptimal range or the optimal point)."""
    return in_nonopt_range(mu) or MachineParams(mu).is_optimal


def distill_pipeline(mu: float, mode: str = "auto") -> FilteredState:
    """rho_ab(mu) -> reduction eigenvector -> filter -> filtered state.

    ``mode="optimal"`` needs mu^2 = 1/8, ``mode="nonoptimal"`` needs mu in
    ((6+sqrt2)/17, 1/2]; ``"auto"`` takes whichever applies.
    """
    params = MachineParams(mu)
    if mode == "auto":
        if params.is_optimal:
            mode = "optimal"
        elif in_nonopt_range(params.mu):
            mode = "nonoptimal"
        else:
            raise DomainError(f"no distillation filter defined at mu={params.mu!r}")
    if mode == "optimal" and not params.is_optimal:
        raise DomainError(f"optimal mode needs mu^2 = 1/8, got mu={params.mu!r}")
    if mode == "nonoptimal":
        _check_nonopt_mu(params.mu)
    elif mode != "optimal":
        raise ValueError(f"unknown mode {mode!r}")

    rho = output_state(params)
    report = reduction_report(rho)
    if not report.violated:
        raise NotDistillable(f"reduction criterion holds at mu={params.mu!r}")
    return apply_filter(rho, filter_from_eigenvector(report.min_eigenvector), source_mu=params.mu)
