"""Quantum states: validated density matrices and the usual constructors."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .linalg import DEFAULT_TOL, as_matrix, check_tol, hermitian_eigenvalues, hermiticity_residual

TWO_PI = 2.0 * math.pi


class InvalidStateError(ValueError):
    pass


class DensityMatrix:
    """A Hermitian, positive semidefinite, unit-trace matrix.

    The wrapped array is read-only. ``tol`` is the tolerance the state was
    validated with; printed-precision fixtures carry a looser one.
    """

    __slots__ = ("mat", "tol")

    def __init__(self, mat, tol: float = DEFAULT_TOL):
        tol = check_tol(tol)
        m = as_matrix(mat, "density matrix")
        if m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
        herm = hermiticity_residual(m)
        if herm > tol:
            raise InvalidStateError(f"not Hermitian (residual {herm:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > tol:
            raise InvalidStateError(f"trace is {tr.real:.12g}, expected 1 (residual {abs(tr - 1.0):.3e})")
        lam_min = hermitian_eigenvalues(0.5 * (m + np.conj(m).T))[-1]
        if lam_min < -tol:
            raise InvalidStateError(f"not positive semidefinite (min eigenvalue {lam_min:.3e})")
        m.setflags(write=False)
        self.mat = m
        self.tol = tol

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.mat
        return self.mat.astype(dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, tol={self.tol:g})"


def basis_state(i: int, d: int) -> DensityMatrix:
    if not 0 <= i < d:
        raise IndexError(f"basis index {i} out of range for dimension {d}")
    m = np.zeros((d, d), dtype=complex)
    m[i, i] = 1.0
    return DensityMatrix(m)


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d)


def phase_vector(free_phases: Sequence[float]) -> np.ndarray:
    """Full phase vector ``(0, t_1, ..., t_{d-1})`` wrapped into [0, 2pi).

    The first phase is pinned to zero since a global phase is unobservable.
    """
    free = np.asarray(free_phases, dtype=float).ravel()
    return np.concatenate([[0.0], np.mod(free, TWO_PI)])


def max_coherent_state(phases: Sequence[float]) -> np.ndarray:
    """Amplitudes ``exp(i theta_k) / sqrt(d)`` of a maximally coherent pure state."""
    thetas = np.asarray(phases, dtype=float).ravel()
    if thetas.size < 1 or not np.all(np.isfinite(thetas)):
        raise ValueError("phases must be a non-empty finite sequence")
    return np.exp(1j * thetas) / math.sqrt(thetas.size)


def pure_density(psi, tol: float = DEFAULT_TOL) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise InvalidStateError(f"state vector has norm {norm:.12g}")
    return DensityMatrix(np.outer(psi, np.conj(psi)), tol=tol)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def bloch_to_density(x: float, y: float, z: float) -> DensityMatrix:
    """Qubit state ``(I + x X + y Y + z Z) / 2``."""
    r2 = x * x + y * y + z * z
    if r2 > 1.0 + 1e-12:
        raise InvalidStateError(f"Bloch vector has length {math.sqrt(r2):.6g} > 1")
    m = 0.5 * (np.eye(2) + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)
    return DensityMatrix(m)


def bloch_vector(rho) -> tuple[float, float, float]:
    m = np.asarray(rho)
    return tuple(float(np.real(np.trace(m @ p))) for p in (PAULI_X, PAULI_Y, PAULI_Z))


def density_from_factor(a) -> DensityMatrix:
    """``A A^dagger / tr(A A^dagger)`` for any non-zero square ``A``."""
    a = as_matrix(a, "factor")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"factor must be square, got shape {a.shape}")
    m = a @ np.conj(a).T
    tr = float(np.real(np.trace(m)))
    if tr == 0.0:
        raise ValueError("factor is identically zero")
    m = m / tr
    return DensityMatrix(0.5 * (m + np.conj(m).T))


def tensor_state(a, b) -> DensityMatrix:
    ta = a.tol if isinstance(a, DensityMatrix) else DEFAULT_TOL
    tb = b.tol if isinstance(b, DensityMatrix) else DEFAULT_TOL
    return DensityMatrix(np.kron(np.asarray(a), np.asarray(b)), tol=max(ta, tb))
