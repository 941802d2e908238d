"""Seeded random unitaries, states and channels for sweeps and tests."""
from __future__ import annotations

import numpy as np

from .channels import KrausChannel
from .states import DensityMatrix


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(2.0)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``d x d`` unitary (QR of a Ginibre matrix with the phase fix)."""
    q, r = np.linalg.qr(_ginibre(rng, (d, d)))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Random isometry ``V`` with ``V^dag V = I`` (the first ``cols`` columns of a Haar unitary)."""
    if rows < cols:
        raise ValueError(f"an isometry needs rows >= cols, got {rows}x{cols}")
    return haar_unitary(rows, rng)[:, :cols]


def random_pure_state(d: int, rng: np.random.Generator) -> DensityMatrix:
    psi = _ginibre(rng, d)
    psi /= np.linalg.norm(psi)
    m = np.outer(psi, np.conj(psi))
    return DensityMatrix(0.5 * (m + np.conj(m).T))


def random_state(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Induced-measure mixed state ``G G^dag / tr`` with ``G`` of size ``d x rank``."""
    g = _ginibre(rng, (d, rank or d))
    m = g @ np.conj(g).T
    m /= np.real(np.trace(m))
    return DensityMatrix(0.5 * (m + np.conj(m).T))


def random_channel(d: int, rank: int, rng: np.random.Generator) -> KrausChannel:
    """Channel with ``rank`` Kraus operators cut from a ``(rank d) x d`` Haar isometry."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    v = haar_isometry(rank * d, d, rng)
    return KrausChannel(v.reshape(rank, d, d))


def random_mio_channel(d: int, rng: np.random.Generator) -> KrausChannel:
    """Random channel that maps every diagonal state to a diagonal state.

    The Choi matrix ``J = sum |i><j| (x) Phi(|i><j|)`` of such a channel has
    diagonal blocks ``J_ii = Phi(|i><i|)`` that are diagonal matrices. We
    start from the block-diagonal ``J0 = sum |i><i| (x) diag(p_i)`` and add a random
    Hermitian ``H`` whose diagonal blocks vanish and whose off-diagonal
    blocks are traceless, scaled to keep ``J`` positive definite. Neither
    step changes the diagonal blocks or the partial trace over the output,
    so the result is trace preserving and maps incoherent states to
    incoherent states. Kraus operators are read off the eigendecomposition.
    """
    probs = rng.dirichlet(np.full(d, 2.0), size=d)  # row i is the diagonal of Phi(|i><i|)
    j0 = np.zeros((d, d, d, d), dtype=complex)  # indices (i, k, j, l)
    for i in range(d):
        j0[i, :, i, :] = np.diag(probs[i])
    j0 = j0.reshape(d * d, d * d)

    h = _ginibre(rng, (d, d, d, d))
    for i in range(d):
        h[i, :, i, :] = 0.0
        for j in range(d):
            h[i, :, j, :] -= np.trace(h[i, :, j, :]) / d * np.eye(d)
    h = h.reshape(d * d, d * d)
    h = 0.5 * (h + np.conj(h).T)
    floor = np.linalg.eigvalsh(j0)[0]
    scale = 0.9 * floor / max(np.linalg.norm(h, 2), 1e-300)
    choi = j0 + scale * h

    lam, vec = np.linalg.eigh(choi)
    # Choi row index i*d + k: input i, output k, hence K[k, i] = sqrt(w) v[i*d + k]
    ops = [np.sqrt(w) * v.reshape(d, d).T for w, v in zip(lam, vec.T) if w > 1e-14]
    return KrausChannel(ops)
