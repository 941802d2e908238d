"""Seeded multi-start maximization with Nelder-Mead refinement.

Every start owns an RNG stream derived from ``(seed, start_index)``, so the
candidates of start ``k`` do not depend on how many starts run in total and
the reported maximum is monotone in ``starts``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.optimize import minimize

SEED_ENV = "COHPOWER_SEED"

BatchObjective = Callable[[np.ndarray], np.ndarray]
Sampler = Callable[[np.random.Generator, int], np.ndarray]


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else 0


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 64
    max_iters: int = 2000
    step_tol: float = 1e-9
    value_tol: float = 1e-9
    seed: int = 0
    # random candidates screened per start; only the best one is refined
    screen: int = 32

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.max_iters < 1 or self.screen < 1:
            raise ValueError("max_iters and screen must be >= 1")
        if not (self.step_tol > 0 and self.value_tol > 0):
            raise ValueError("tolerances must be positive")

    def with_(self, **changes) -> "OptimizerConfig":
        return replace(self, **changes)


@dataclass
class OptResult:
    x: np.ndarray
    value: float
    converged: bool
    starts_used: int
    evaluations: int


def refine(batch_f: BatchObjective, x0: np.ndarray, cfg: OptimizerConfig) -> tuple[np.ndarray, float, bool, int]:
    """Local Nelder-Mead maximization of ``batch_f`` started at ``x0``."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    step = 0.05 * max(1.0, float(np.max(np.abs(x0))))
    simplex = np.vstack([x0, x0 + step * np.eye(n)])

    def neg(x):
        return -float(batch_f(x[None])[0])

    res = minimize(
        neg, x0, method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "maxiter": cfg.max_iters,
            "maxfev": 4 * cfg.max_iters,
            "xatol": cfg.step_tol,
            "fatol": cfg.value_tol,
            "adaptive": n > 2,
        },
    )
    return np.asarray(res.x), -float(res.fun), bool(res.success), int(res.nfev)


def multistart_maximize(
    batch_f: BatchObjective,
    seeds: np.ndarray,
    sample: Sampler,
    cfg: OptimizerConfig,
    refine_seeds: int = 1,
) -> OptResult:
    """Maximize over structured ``seeds`` plus ``cfg.starts`` random starts.

    All structured seeds are evaluated and the best ``refine_seeds`` of them
    are refined. Each random start screens ``cfg.screen`` samples from its
    own stream and refines the best. Ties keep the first-found point.
    """
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    best_x, best_v, best_ok = None, -math.inf, False
    nfev = 0

    def consider(x, v, ok):
        nonlocal best_x, best_v, best_ok
        if v > best_v + cfg.value_tol or best_x is None:
            best_x, best_v, best_ok = np.array(x), float(v), ok
        elif ok and not best_ok and v >= best_v - cfg.value_tol:
            best_ok = True

    if seeds.shape[0]:
        vals = batch_f(seeds)
        nfev += seeds.shape[0]
        order = np.argsort(-vals, kind="stable")
        consider(seeds[order[0]], vals[order[0]], False)
        for idx in order[:refine_seeds]:
            x, v, ok, n = refine(batch_f, seeds[idx], cfg)
            nfev += n
            consider(x, max(v, vals[idx]), ok)

    for s in range(cfg.starts):
        rng = np.random.default_rng([cfg.seed, s])
        cand = sample(rng, cfg.screen)
        vals = batch_f(cand)
        k = int(np.argmax(vals))
        x, v, ok, n = refine(batch_f, cand[k], cfg)
        nfev += cfg.screen + n
        consider(x, v, ok)

    return OptResult(best_x, best_v, best_ok, cfg.starts, nfev)


class TriangularChart:
    """Density matrices ``L L^dag / tr(L L^dag)`` with ``L`` lower triangular.

    ``d**2`` real coordinates: the real diagonal of ``L`` followed by the real
    and imaginary parts of its strictly lower entries. Every state has such a
    factor (a Cholesky factor), and the map is smooth away from ``L = 0``.
    """

    def __init__(self, d: int):
        self.d = d
        self.rows, self.cols = np.tril_indices(d, -1)
        self.nlow = self.rows.size
        self.size = d * d
        # linear map from coordinates to the row-major entries of L
        basis = np.zeros((self.size, d * d), dtype=complex)
        m = self.nlow
        basis[np.arange(d), np.arange(d) * (d + 1)] = 1.0
        flat = self.rows * d + self.cols
        basis[d + np.arange(m), flat] = 1.0
        basis[d + m + np.arange(m), flat] = 1j
        self._basis = basis

    def factors(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return (x @ self._basis).reshape(x.shape[0], self.d, self.d)

    def states(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        a = self.factors(x)
        m = a @ np.conj(np.swapaxes(a, -1, -2))
        # tr(L L^dag) is the squared Frobenius norm of L, i.e. of x
        tr = np.einsum("ij,ij->i", x, x)
        tr[tr <= 0.0] = 1.0
        m /= tr[:, None, None]
        return m

    def coords(self, rho) -> np.ndarray:
        """Coordinates of a (possibly singular) state."""
        m = np.asarray(rho, dtype=complex)
        m = 0.5 * (m + np.conj(m).T)
        lam, vec = np.linalg.eigh(m)
        b = vec * np.sqrt(np.clip(lam, 0.0, None))
        # b = L Q with L lower triangular: QR of b^dag gives b^dag = Q R, L = R^dag
        _, r = np.linalg.qr(np.conj(b).T)
        low = np.conj(r).T
        diag = np.diag(low)
        phases = np.where(np.abs(diag) > 0, diag / np.where(np.abs(diag) > 0, np.abs(diag), 1), 1.0)
        low = low * np.conj(phases)[None, :]
        return np.concatenate([
            np.real(np.diag(low)),
            np.real(low[self.rows, self.cols]),
            np.imag(low[self.rows, self.cols]),
        ])

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        """Gaussian coordinates; the first half are pure states (``L`` supported on column 0)."""
        x = rng.normal(size=(k, self.size))
        x[: k // 2] *= self._pure_mask
        return x

    @property
    def _pure_mask(self) -> np.ndarray:
        d = self.d
        col0 = (self.cols == 0).astype(float)
        diag = np.zeros(d)
        diag[0] = 1.0
        return np.concatenate([diag, col0, col0])
