"""Small dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex arrays; the helpers here add the
validation and the handful of operations the coherence code needs
(adjoint, the induced 1->1 norm, a cyclic Jacobi Hermitian eigensolver).
"""
from __future__ import annotations

import math

import numpy as np

DEFAULT_TOL = 1e-10
# Fixture matrices printed to four decimals are checked against this instead.
PRINTED_TOL = 5e-4


class ConvergenceError(RuntimeError):
    """Raised when an iterative routine exhausts its iteration cap."""


def check_tol(tol: float) -> float:
    tol = float(tol)
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol!r}")
    return tol


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` to a finite, non-empty 2-D complex array."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def mat_product(a, b) -> np.ndarray:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(as_matrix(a)).T


def hermiticity_residual(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - np.conj(h).T)))


def is_hermitian(h, tol: float = DEFAULT_TOL) -> bool:
    h = as_matrix(h)
    return h.shape[0] == h.shape[1] and hermiticity_residual(h) <= tol


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eigenvalues(h, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, in descending order.

    Cyclic complex Jacobi: each pivot (p, q) is annihilated by the unitary
    plane rotation ``[[c, s e^{i phi}], [-s e^{-i phi}, c]]`` where ``phi`` is
    the phase of ``h[p, q]``. Sweeps stop once the Frobenius norm of the
    off-diagonal part drops below ``tol`` (relative to ``max(1, |h|_F)``).

    Raises ``ValueError`` for non-Hermitian input and ``ConvergenceError``
    after ``100 * d**2`` sweeps.
    """
    tol = check_tol(tol)
    a = as_matrix(h, "h")
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError(f"h must be square, got shape {a.shape}")
    resid = hermiticity_residual(a)
    if resid > tol:
        raise ValueError(f"h is not Hermitian (residual {resid:.3e} > {tol:.1e})")
    a = 0.5 * (a + np.conj(a).T)
    target = tol * max(1.0, float(np.linalg.norm(a)))

    for _ in range(100 * n * n):
        if _off_norm(a) < target:
            return np.sort(a.diagonal().real)[::-1]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = np.conj(g).T @ a[idx, :]
                a[q, p] = 0.0
                a[p, q] = 0.0
    raise ConvergenceError(f"Jacobi did not converge in {100 * n * n} sweeps")


def one_to_one_norm(m) -> float:
    """Induced 1->1 norm: the largest column sum of absolute entries."""
    return float(np.max(np.sum(np.abs(as_matrix(m)), axis=0)))


def unitarity_residual(m) -> float:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    return float(np.max(np.abs(np.conj(m).T @ m - np.eye(m.shape[0]))))


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    return unitarity_residual(m) <= tol


def kron(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out
