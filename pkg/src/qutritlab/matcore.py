"""Small dense complex linear algebra for bipartite qutrit states.

Matrices are plain ``numpy`` complex arrays. Two-qutrit basis states
``|i>|j>`` map to row ``3*i + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BadSubsystem, InvalidDensityMatrix, NonSquare, NotHermitian

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
JACOBI_TOL = 1e-13
ENTROPY_CUTOFF = 1e-12
_MAX_SWEEPS = 100


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def ket(*indices: int, dims: Sequence[int] | None = None) -> np.ndarray:
    """Computational basis vector ``|i, j, ...>`` (qutrits unless ``dims`` given)."""
    dims = tuple(dims) if dims is not None else (3,) * len(indices)
    if len(dims) != len(indices):
        raise ValueError("one index per subsystem required")
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[np.ravel_multi_index(indices, dims)] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, np.conj(v))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; ``(i,j) x (k,l)`` lands at ``(i*rows_b + k, j*cols_b + l)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = a[i, j] * b
    return out


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - dagger(m)), initial=0.0) < tol)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order; column ``i`` of ``eigenvectors`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # largest-magnitude coordinate (first one on ties) made real positive
    mags = np.abs(v)
    k = int(np.argmax(mags >= mags.max() - 1e-12))
    return v * (np.conj(v[k]) / mags[k])


@lru_cache(maxsize=None)
def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: ``n - 1`` rounds (``n`` even) of disjoint index pairs covering every pair once."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = [(players[i], players[n - 1 - i]) for i in range(n // 2)]
        p = np.array([min(a, b) for a, b in pairs])
        q = np.array([max(a, b) for a, b in pairs])
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def hermitian_eigensystem(h) -> EigenSystem:
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Each rotation zeroes one off-diagonal pair ``(p, q)``; the pivot phase
    is absorbed into the rotation so the 2x2 sub-problem is real
    symmetric. Pairs are visited in round-robin order, and the disjoint
    rotations of one round are applied together. Sweeps continue until
    the off-diagonal Frobenius norm drops below ``JACOBI_TOL``.

    Eigenvectors are returned with their largest coordinate real and
    positive, which makes the output deterministic.
    """
    a = as_matrix(h)
    n, m = a.shape
    if n != m:
        raise NonSquare(f"matrix is {n}x{m}")
    if not is_hermitian(a):
        raise NotHermitian(f"asymmetry {np.max(np.abs(a - dagger(a))):.3e} exceeds {HERMITIAN_TOL}")
    a = 0.5 * (a + dagger(a))
    size = n + (n % 2)
    if size != n:
        # padding index never couples to the rest, so its rotations are skipped
        a = np.pad(a, ((0, 1), (0, 1)))
    v = np.eye(size, dtype=complex)
    rounds = _round_robin(size) if size > 1 else []

    for _ in range(_MAX_SWEEPS):
        if _off_norm(a) < JACOBI_TOL:
            break
        for p, q in rounds:
            apq = a[p, q]
            r = np.abs(apq)
            live = r > 1e-300
            if not live.any():
                continue
            p, q, apq, r = p[live], q[live], apq[live], r[live]
            phase = apq / r
            tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            j = np.eye(size, dtype=complex)
            j[p, p] = c
            j[q, q] = c
            j[p, q] = s * phase
            j[q, p] = -s * np.conj(phase)
            a = dagger(j) @ a @ j
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ j

    a = a[:n, :n]
    v = v[:n, :n]
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for i in range(n):
        v[:, i] = _fix_phase(v[:, i])
    return EigenSystem(w, v)


def eigvalsh(h) -> np.ndarray:
    return hermitian_eigensystem(h).eigenvalues


class DensityMatrix:
    """Trace-one positive semidefinite matrix over subsystems of sizes ``dims``.

    Validation happens at construction; instances are treated as immutable.
    """

    __slots__ = ("_matrix", "_dims", "_spectrum")

    def __init__(self, matrix, dims: Sequence[int] | None = None, *, check: bool = True):
        m = as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise NonSquare(f"density matrix must be square, got {m.shape}")
        dims = (m.shape[0],) if dims is None else tuple(int(d) for d in dims)
        if int(np.prod(dims)) != m.shape[0]:
            raise InvalidDensityMatrix(f"dims {dims} do not multiply to {m.shape[0]}")
        spectrum = None
        if check:
            if not is_hermitian(m):
                raise InvalidDensityMatrix("matrix is not Hermitian")
            tr = np.trace(m)
            if abs(tr - 1.0) > TRACE_TOL:
                raise InvalidDensityMatrix(f"trace is {tr.real:.12g}, expected 1")
            spectrum = eigvalsh(m)
            spectrum.setflags(write=False)
            lo = spectrum[0]
            if lo < -PSD_TOL:
                raise InvalidDensityMatrix(f"minimum eigenvalue {lo:.3e} is negative")
        m.setflags(write=False)
        object.__setattr__(self, "_matrix", m)
        object.__setattr__(self, "_dims", dims)
        object.__setattr__(self, "_spectrum", spectrum)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def spectrum(self) -> np.ndarray:
        """Ascending eigenvalues, computed once."""
        if self._spectrum is None:
            w = eigvalsh(self._matrix)
            w.setflags(write=False)
            object.__setattr__(self, "_spectrum", w)
        return self._spectrum

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @classmethod
    def from_pure(cls, vector, dims: Sequence[int] | None = None) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(projector(v), dims)

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityMatrix":
        n = int(np.prod(dims))
        return cls(np.eye(n) / n, dims)

    def expectation(self, v) -> float:
        v = np.asarray(v, dtype=complex).reshape(-1)
        return float(np.real(np.conj(v) @ self._matrix @ v))

    def __array__(self, dtype=None, copy=None):
        return np.array(self._matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dims={self._dims})"


def _check_bipartite(rho: DensityMatrix, index: int) -> None:
    if len(rho.dims) != 2:
        raise BadSubsystem(f"expected a bipartite state, got dims {rho.dims}")
    if index not in (0, 1):
        raise BadSubsystem(f"subsystem index must be 0 or 1, got {index!r}")


def partial_transpose(rho: DensityMatrix, subsystem: int = 0) -> np.ndarray:
    """Transpose the indices of one factor of a bipartite state."""
    _check_bipartite(rho, subsystem)
    da, db = rho.dims
    t = rho.matrix.reshape(da, db, da, db)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db).copy()


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduced state of subsystem ``keep`` (0 for a, 1 for b)."""
    _check_bipartite(rho, keep)
    da, db = rho.dims
    t = rho.matrix.reshape(da, db, da, db)
    if keep == 0:
        red = np.einsum("ijkj->ik", t)
        dims = (da,)
    else:
        red = np.einsum("ijil->jl", t)
        dims = (db,)
    return DensityMatrix(red, dims)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits, ``-sum l log2 l``; eigenvalues below 1e-12 count as zero."""
    w = rho.spectrum
    w = w[w > ENTROPY_CUTOFF]
    return float(-np.sum(w * np.log2(w)))
