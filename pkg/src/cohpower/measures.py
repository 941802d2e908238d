"""Coherence quantifiers and the entropies behind them.

All logarithms are base 2. Two routes are provided: the validated scalar
functions (``c_l1``, ``c_rel_ent``, ...) that go through the Jacobi
eigensolver, and vectorized ``*_batch`` kernels over stacks of matrices
that use LAPACK and are what the optimizers call in their inner loops.
"""
from __future__ import annotations

import enum
import functools
import math

import numpy as np
from scipy.special import entr

from .linalg import DEFAULT_TOL, hermitian_eigenvalues
from .states import InvalidStateError

CLAMP_TOL = 1e-10


class CoherenceMeasure(enum.Enum):
    L1 = "l1"
    REL_ENT = "rel-ent"

    @classmethod
    def parse(cls, value) -> "CoherenceMeasure":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "-")
        aliases = {"l1": cls.L1, "rel-ent": cls.REL_ENT, "relative-entropy": cls.REL_ENT, "r": cls.REL_ENT}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown coherence measure {value!r}") from None


def max_coherence(measure: CoherenceMeasure, d: int) -> float:
    """Value attained by maximally coherent states: ``d - 1`` or ``log2 d``."""
    return float(d - 1) if measure is CoherenceMeasure.L1 else math.log2(d)


LN2 = math.log(2.0)


def _xlog2x_sum(p: np.ndarray) -> np.ndarray:
    # entr(0) == 0, which is the 0 log 0 := 0 convention
    return entr(np.asarray(p, dtype=float)).sum(axis=-1) / LN2


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or np.any(p < 0.0) or np.any(p > 1.0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"not a probability vector: {p!r}")
    return float(_xlog2x_sum(np.sort(p)[::-1]))


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    return float(_xlog2x_sum(np.array([x, 1.0 - x])))


def _clamped(values: np.ndarray, tol: float) -> np.ndarray:
    if values.min() < -tol:
        raise InvalidStateError(f"eigenvalue {values.min():.3e} below -{tol:g}")
    return np.clip(values, 0.0, None)


def _state_tol(rho) -> float:
    return max(CLAMP_TOL, getattr(rho, "tol", DEFAULT_TOL))


def von_neumann_entropy(rho) -> float:
    m = np.asarray(rho)
    lam = hermitian_eigenvalues(0.5 * (m + np.conj(m).T))
    return float(_xlog2x_sum(_clamped(lam, _state_tol(rho))))


def c_l1(rho) -> float:
    """Sum of the moduli of the off-diagonal entries."""
    m = np.asarray(rho)
    off = np.abs(m)
    np.fill_diagonal(off, 0.0)
    return float(off.sum())


def c_rel_ent(rho) -> float:
    """Entropy of the dephased state minus the entropy of the state."""
    m = np.asarray(rho)
    diag = np.sort(np.real(np.diag(m)))[::-1]
    s_diag = float(_xlog2x_sum(_clamped(diag, _state_tol(rho))))
    return s_diag - von_neumann_entropy(rho)


def coherence(measure: CoherenceMeasure, rho) -> float:
    measure = CoherenceMeasure.parse(measure)
    if measure is CoherenceMeasure.L1:
        return c_l1(rho)
    return c_rel_ent(rho)


# -- vectorized kernels -----------------------------------------------------

def c_l1_batch(mats: np.ndarray) -> np.ndarray:
    d = mats.shape[-1]
    flat = mats.reshape(mats.shape[0], d * d)
    return np.abs(flat[:, _off_diagonal_index(d)]).sum(axis=-1)


@functools.lru_cache(maxsize=None)
def _off_diagonal_index(d: int) -> np.ndarray:
    return np.flatnonzero(~np.eye(d, dtype=bool))


def _qubit_spectrum(mats: np.ndarray) -> np.ndarray:
    a = mats[:, 0, 0].real
    d = mats[:, 1, 1].real
    half = 0.5 * (a + d)
    r = np.hypot(0.5 * (a - d), np.abs(mats[:, 0, 1]))
    out = np.empty((mats.shape[0], 2))
    out[:, 0] = half - r
    out[:, 1] = half + r
    return out


def c_rel_ent_batch(mats: np.ndarray) -> np.ndarray:
    d = mats.shape[-1]
    lam = _qubit_spectrum(mats) if d == 2 else np.linalg.eigvalsh(mats)
    # one entropy pass over [dephased spectrum | spectrum], weighted +1 / -1
    p = np.concatenate([np.diagonal(mats, axis1=-2, axis2=-1).real, lam], axis=-1)
    np.maximum(p, 0.0, out=p)
    return entr(p) @ _entropy_weights(d)


@functools.lru_cache(maxsize=None)
def _entropy_weights(d: int) -> np.ndarray:
    w = np.concatenate([np.ones(d), -np.ones(d)]) / LN2
    w.setflags(write=False)
    return w


def coherence_batch(measure: CoherenceMeasure, mats: np.ndarray) -> np.ndarray:
    if measure is CoherenceMeasure.L1:
        return c_l1_batch(mats)
    return c_rel_ent_batch(mats)
