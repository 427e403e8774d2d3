"""Entanglement diagnostics for two-qutrit states."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceWarning, DomainError
from .matcore import (
    DensityMatrix,
    _fix_phase,
    dagger,
    eigvalsh,
    hermitian_eigensystem,
    partial_trace,
    partial_transpose,
    tensor,
)

D = 3
XI = np.exp(2j * np.pi / 3)
NONOPT_MU_MIN = (6.0 + math.sqrt(2.0)) / 17.0
DEGENERACY_TOL = 1e-9


def _sqrt_checked(x: float, what: str) -> float:
    if x < -1e-12:
        raise DomainError(f"{what} radicand is negative ({x:.3e})")
    return math.sqrt(max(x, 0.0))


def _lam(mu: float) -> float:
    # printed as sqrt(-(2mu-1)(2mu+1))
    return _sqrt_checked(-(2 * mu - 1) * (2 * mu + 1), "sqrt(1-4mu^2)")


def _check_mu(mu: float) -> float:
    mu = float(mu)
    if not (0.0 < mu <= 0.5):
        raise DomainError(f"mu must lie in (0, 1/2], got {mu!r}")
    return mu


def _check_nonopt_mu(mu: float) -> float:
    mu = float(mu)
    if not (NONOPT_MU_MIN < mu <= 0.5):
        raise DomainError(f"mu must lie in ((6+sqrt2)/17, 1/2], got {mu!r}")
    return mu


@dataclass(frozen=True)
class MaxEntBasisState:
    x: int
    y: int
    vector: np.ndarray


@lru_cache(maxsize=1)
def _basis() -> tuple[MaxEntBasisState, ...]:
    states = []
    for x in range(D):
        for y in range(D):
            v = np.zeros(D * D, dtype=complex)
            for j in range(D):
                v[D * j + (j + x) % D] += XI ** (j * y) / math.sqrt(D)
            v.setflags(write=False)
            states.append(MaxEntBasisState(x, y, v))
    return tuple(states)


def max_entangled_basis() -> tuple[MaxEntBasisState, ...]:
    """The nine states ``(1/sqrt3) sum_j xi^(j*y) |j, j+x>``, ordered by (x, y)."""
    return _basis()


def basis_state(x: int, y: int) -> np.ndarray:
    return _basis()[D * x + y].vector


def basis_overlaps(rho: DensityMatrix) -> np.ndarray:
    """3x3 array of ``<phi_xy|rho|phi_xy>`` indexed by (x, y)."""
    return np.array([rho.expectation(s.vector) for s in _basis()]).reshape(D, D)


def npt_min_eigenvalue(rho: DensityMatrix) -> float:
    """Smallest eigenvalue of the partial transpose on subsystem a; negative means NPT."""
    return float(eigvalsh(partial_transpose(rho, 0))[0])


def closed_form_E1(mu: float) -> float:
    mu = _check_mu(mu)
    lam = _lam(mu)
    rad = 1 + 24 * mu**2 - 104 * mu**4 + 32 * lam * mu**3
    return (1 + 4 * mu**2) / 6 - _sqrt_checked(rad, "E1") / 6


def closed_form_E2(mu: float) -> float:
    mu = _check_mu(mu)
    lam = _lam(mu)
    rad = 1 - 6 * mu**2 + 25 * mu**4 - 16 * lam * mu**3
    return (1 - 5 * mu**2) / 6 - _sqrt_checked(rad, "E2") / 6


def reduction_radicand(mu: float) -> float:
    """``1 - 18mu^2 + 4 lam mu + 113mu^4 - 44 lam mu^3``, shared by E, k and t1."""
    lam = _lam(mu)
    return 1 - 18 * mu**2 + 4 * lam * mu + 113 * mu**4 - 44 * lam * mu**3


def k_printed(mu: float) -> float:
    """Off-diagonal filter weight as typeset, with ``-1`` inside the radical."""
    mu = _check_nonopt_mu(mu)
    lam = _lam(mu)
    root = _sqrt_checked(reduction_radicand(mu) - 1, "printed k")
    return (11 * mu**2 - 2 * lam * mu + root) / (4 * mu**2)


def k_corrected(mu: float) -> float:
    """Off-diagonal filter weight with ``-1`` moved outside the radical.

    Equals ``2 mu^2 / (1 - 11 mu^2 + 2 lam mu + sqrt(R))``, the ratio read
    off the symmetric eigenvector of the reduction operator.
    """
    mu = _check_nonopt_mu(mu)
    lam = _lam(mu)
    root = _sqrt_checked(reduction_radicand(mu), "k")
    return (11 * mu**2 - 2 * lam * mu - 1 + root) / (4 * mu**2)


def closed_form_reduction_eigenvalue(mu: float, d: float | None = None) -> float:
    """Negative eigenvalue of ``rho_a x I - rho_ab`` in the symmetric sector.

    The printed expression carries an undefined factor ``d`` after
    ``sqrt(1-4mu^2)/3``. ``d=None`` substitutes ``mu``, which reproduces the
    numeric spectrum; pass an explicit number to evaluate other readings.
    """
    mu = _check_mu(mu)
    lam = _lam(mu)
    d = mu if d is None else d
    root = _sqrt_checked(reduction_radicand(mu), "E")
    return (1 - 3 * mu**2) / 6 + lam * d / 3 - root / 6


def fef_basis(rho: DensityMatrix) -> float:
    """Fully entangled fraction restricted to the nine basis states."""
    return float(np.max(basis_overlaps(rho)))


def _overlap(u: np.ndarray, rho: np.ndarray) -> float:
    # (U x I)|phi_00> has coefficient matrix U/sqrt3
    v = u.reshape(-1)
    return float(np.real(np.conj(v) @ rho @ v)) / D


def _rotate(u: np.ndarray, p: int, q: int, theta: float, imaginary: bool = False) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    out = u.copy()
    if imaginary:
        out[p] = c * u[p] + 1j * s * u[q]
        out[q] = 1j * s * u[p] + c * u[q]
    else:
        out[p] = c * u[p] - s * u[q]
        out[q] = s * u[p] + c * u[q]
    return out


def _rephase(u: np.ndarray, p: int, alpha: float) -> np.ndarray:
    out = u.copy()
    out[p] = np.exp(1j * alpha) * u[p]
    return out


# one-parameter subgroups spanning su(3): real and imaginary Givens
# rotations per plane plus two relative row phases
_MOVES = tuple(
    [(lambda u, t, p=p, q=q: _rotate(u, p, q, t)) for p, q in ((0, 1), (0, 2), (1, 2))]
    + [(lambda u, t, p=p, q=q: _rotate(u, p, q, t, True)) for p, q in ((0, 1), (0, 2), (1, 2))]
    + [(lambda u, t, p=p: _rephase(u, p, t)) for p in (1, 2)]
)
_NODES = 2 * np.pi * np.arange(5) / 5
_GRID = np.linspace(-np.pi, np.pi, 64, endpoint=False)


def _trig_argmax(samples: np.ndarray) -> float:
    """Maximizer of the degree-2 trigonometric polynomial through five equispaced samples."""
    a1, b1, a2, b2 = (
        2 / 5 * samples @ fn(k * _NODES) for k in (1, 2) for fn in (np.cos, np.sin)
    )

    def d1(t):
        return -a1 * math.sin(t) + b1 * math.cos(t) - 2 * a2 * math.sin(2 * t) + 2 * b2 * math.cos(2 * t)

    def d2(t):
        return -a1 * math.cos(t) - b1 * math.sin(t) - 4 * a2 * math.cos(2 * t) - 4 * b2 * math.sin(2 * t)

    g = a1 * np.cos(_GRID) + b1 * np.sin(_GRID) + a2 * np.cos(2 * _GRID) + b2 * np.sin(2 * _GRID)
    t = float(_GRID[int(np.argmax(g))])
    for _ in range(20):
        h = d2(t)
        if h >= 0:
            break
        step = d1(t) / h
        t -= step
        if abs(step) < 1e-15:
            break
    return t


def _ascend(u: np.ndarray, rho: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int]:
    """Exact coordinate ascent over the eight generators of SU(3).

    Along each one-parameter subgroup the overlap is a trigonometric
    polynomial of degree two, so five samples determine it and its
    maximum is found without a line search.
    """
    f = _overlap(u, rho)
    it = 0
    while it < max_iter:
        start = f
        for move in _MOVES:
            trial = np.stack([move(u, t).reshape(-1) for t in _NODES[1:]])
            samples = np.empty(5)
            samples[0] = f
            samples[1:] = np.real(np.einsum("ki,ij,kj->k", np.conj(trial), rho, trial)) / D
            cand = move(u, _trig_argmax(samples))
            fc = _overlap(cand, rho)
            if fc > f:
                u, f = cand, fc
            it += 1
        if f - start < tol:
            break
    return f, u, it


def _random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _basis_unitary(x: int, y: int) -> np.ndarray:
    u = np.zeros((D, D), dtype=complex)
    for j in range(D):
        u[j, (j + x) % D] = XI ** (j * y)
    return u


@dataclass(frozen=True)
class FefSearch:
    value: float
    unitary: np.ndarray
    restarts: int
    agreeing: int


def fef_search(
    rho: DensityMatrix,
    restarts: int = 32,
    seed: int = 0,
    tol: float = 1e-9,
    max_iter: int = 10_000,
) -> FefSearch:
    """Maximize ``<phi|rho|phi>`` over ``phi = (U x I)|phi_00>``, U unitary.

    The nine basis unitaries are always tried first, so the result never
    falls below :func:`fef_basis`. ``restarts`` random Haar unitaries follow,
    drawn from a generator seeded with ``seed``.
    """
    m = np.asarray(rho.matrix)
    rng = np.random.default_rng(seed)
    starts = [_basis_unitary(x, y) for x in range(D) for y in range(D)]
    starts += [_random_unitary(rng) for _ in range(restarts)]
    results = [_ascend(u, m, tol, max_iter)[:2] for u in starts]
    best, u_best = max(results, key=lambda r: r[0])
    agreeing = sum(1 for f, _ in results if best - f <= 1e-6)
    return FefSearch(best, u_best, len(starts), agreeing)


def fef_optimized(rho: DensityMatrix, restarts: int = 32, seed: int = 0) -> float:
    """Fully entangled fraction over every maximally entangled state.

    Warns with :class:`ConvergenceWarning` when the best value was reached
    by a single start only.
    """
    res = fef_search(rho, restarts=restarts, seed=seed)
    if res.agreeing < 2:
        warnings.warn(
            f"fully entangled fraction {res.value:.9f} reached by one start only",
            ConvergenceWarning,
            stacklevel=2,
        )
    return res.value


def fef_raw_closed_form(mu: float) -> float:
    """Printed FEF of the unfiltered output, ``4 mu^2 / 3``."""
    mu = _check_mu(mu)
    return 4 * mu**2 / 3


def fef_filtered_closed_form(mu: float, variant: str = "printed") -> float:
    """Closed-form FEF of the state distilled with the symmetric filter.

    ``variant="printed"`` evaluates the expression as typeset, with the
    printed ``(1 - k)`` term and the printed k. ``variant="corrected"``
    replaces ``(1 - k)`` by ``(1 - t1)`` and restores a ``353 mu^6`` term
    in the denominator; that form agrees with the numerically filtered
    state.
    """
    mu = _check_nonopt_mu(mu)
    t2 = _lam(mu) * mu
    t1 = _sqrt_checked(1 - 18 * mu**2 + 4 * t2 + 113 * mu**4 - 44 * mu**2 * t2, "t1")
    num = 4 * (
        mu**2 * (2 * (1 - t1) + mu**2 * (22 * t1 - 31) + t2 * (10 - 110 * mu**2 - 6 * t1) + 198 * mu**4)
    )
    tail = t2 * (6 - 68 * mu**2 + 94 * mu**4 - 4 * t1 + 12 * t1 * mu**2)
    if variant == "printed":
        k = k_printed(mu)
        den = 3 * ((1 - k) + tail + mu**2 * (6 * t1 - 9 - 5 * mu**2 + 23 * t1 * mu**2))
    elif variant == "corrected":
        den = 3 * ((1 - t1) + tail + mu**2 * (6 * t1 - 9 - 5 * mu**2 + 23 * t1 * mu**2 + 353 * mu**4))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return num / den


@dataclass(frozen=True)
class ReductionReport:
    operator: np.ndarray
    eigenvalues: np.ndarray
    min_eigenvalue: float
    min_eigenvector: np.ndarray
    degeneracy: int
    violated: bool


def _canonical_vector(span: np.ndarray) -> np.ndarray:
    """Pick one vector from a degenerate eigenspace deterministically.

    Trailing coordinates are zeroed one at a time (last basis index first)
    until a single direction remains.
    """
    n, m = span.shape
    rows: list[int] = []
    for r in range(n - 1, -1, -1):
        trial = span[rows + [r], :]
        if np.linalg.matrix_rank(trial, tol=1e-9) == len(rows) + 1:
            rows.append(r)
        if len(rows) == m - 1:
            break
    _, _, vh = np.linalg.svd(span[rows, :])
    c = np.conj(vh[-1])
    v = span @ c
    return v / np.linalg.norm(v)


def reduction_operator(rho: DensityMatrix) -> np.ndarray:
    rho_a = partial_trace(rho, keep=0)
    return tensor(rho_a.matrix, np.eye(rho.dims[1])) - rho.matrix


def reduction_report(rho: DensityMatrix) -> ReductionReport:
    """Spectrum of ``rho_a x I - rho_ab`` and its most negative eigenvector.

    A degenerate lowest eigenvalue is resolved by :func:`_canonical_vector`;
    the chosen vector then has its largest coordinate made real positive.
    """
    op = reduction_operator(rho)
    op = 0.5 * (op + dagger(op))
    w, v = hermitian_eigensystem(op)
    deg = int(np.sum(w - w[0] < DEGENERACY_TOL))
    vec = v[:, 0] if deg == 1 else _canonical_vector(v[:, :deg])
    vec = _fix_phase(vec)
    return ReductionReport(op, w, float(w[0]), vec, deg, bool(w[0] < -1e-10))
