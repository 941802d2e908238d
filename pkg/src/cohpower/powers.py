"""Cohering and de-cohering powers of channels.

Four functionals of a channel ``Phi`` and a coherence measure ``C``:

* cohering power: max of ``C(Phi(rho))`` over incoherent ``rho``
* generalized cohering power: max of ``C(Phi(rho)) - C(rho)`` over all states
* de-cohering power: max of ``C(psi) - C(Phi(psi))`` over maximally coherent ``psi``
* generalized de-cohering power: max of ``C(rho) - C(Phi(rho))`` over all states

The cohering power is computed exactly (the objective is convex on the
simplex of incoherent states, so the maximum sits at a basis state). The
other three are found numerically and are lower bounds on the supremum,
except the qubit de-cohering power, which is a one-dimensional search.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import KrausChannel, apply, apply_batch, unitary_channel
from .linalg import DEFAULT_TOL, adjoint, as_matrix, one_to_one_norm, unitarity_residual
from .measures import (
    CoherenceMeasure,
    binary_entropy,
    coherence,
    coherence_batch,
    max_coherence,
    shannon_entropy,
)
from .optimize import OptimizerConfig, TriangularChart, multistart_maximize
from .states import DensityMatrix, basis_state, max_coherent_state, phase_vector, pure_density

TIE_TOL = 1e-12
PHASE_GRID_QUBIT = 64
PHASE_GRID_AXIS = 32
PHASE_GRID_CAP = 4096


class PowerKind(enum.Enum):
    COHERING = "cohering"
    GEN_COHERING = "gen-cohering"
    DECOHERING = "decohering"
    GEN_DECOHERING = "gen-decohering"


@dataclass(frozen=True)
class PowerReport:
    value: float
    witness: DensityMatrix
    measure: CoherenceMeasure
    kind: PowerKind
    converged: bool
    starts_used: int

    def as_dict(self) -> dict:
        w = np.asarray(self.witness)
        return {
            "kind": self.kind.value,
            "measure": self.measure.value,
            "value": self.value,
            "converged": self.converged,
            "starts_used": self.starts_used,
            "witness": [[[float(z.real), float(z.imag)] for z in row] for row in w],
        }


@dataclass(frozen=True)
class InequalityCheck:
    holds: bool
    slack: float

    def __post_init__(self):
        # callers compute these from numpy scalars
        object.__setattr__(self, "holds", bool(self.holds))
        object.__setattr__(self, "slack", float(self.slack))

    def __bool__(self) -> bool:
        return self.holds


def _square_dim(phi: KrausChannel) -> int:
    if not phi.is_square:
        raise ValueError(f"power functionals need a square channel, got {phi.dim_out}x{phi.dim_in}")
    return phi.dim_in


def _check_unitary(u, tol: float) -> np.ndarray:
    u = as_matrix(u, "u")
    resid = unitarity_residual(u)
    if resid > tol:
        raise ValueError(f"matrix is not unitary: residual {resid:.6g} > {tol:g}")
    return u


def _check_qubit_unitary(u, tol: float) -> np.ndarray:
    u = as_matrix(u, "u")
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 unitary, got shape {u.shape}")
    return _check_unitary(u, tol)


# -- cohering power -----------------------------------------------------------

def cohering_power(phi: KrausChannel, measure) -> PowerReport:
    """Exact cohering power: the largest coherence of ``Phi(|i><i|)``."""
    measure = CoherenceMeasure.parse(measure)
    d = _square_dim(phi)
    best_i, best_v = 0, -math.inf
    for i in range(d):
        v = coherence(measure, apply(phi, basis_state(i, d)))
        if v > best_v + TIE_TOL:
            best_i, best_v = i, v
    return PowerReport(best_v, basis_state(best_i, d), measure, PowerKind.COHERING, True, d)


def unitary_cohering_power_l1(u, tol: float = DEFAULT_TOL) -> float:
    """``||U||_{1->1}^2 - 1``."""
    return one_to_one_norm(_check_unitary(u, tol)) ** 2 - 1.0


def unitary_cohering_power_rel(u, tol: float = DEFAULT_TOL) -> float:
    """Largest Shannon entropy of the squared moduli of a column of ``U``."""
    u = _check_unitary(u, tol)
    best = 0.0
    for col in np.abs(u.T) ** 2:
        best = max(best, shannon_entropy(col / col.sum()))
    return best


# -- generalized powers -------------------------------------------------------

def _state_seeds(chart: TriangularChart, states: Iterable) -> np.ndarray:
    rows = [chart.coords(np.asarray(s)) for s in states]
    return np.array(rows) if rows else np.zeros((0, chart.size))


def _gain_objective(phi: KrausChannel, measure: CoherenceMeasure, chart: TriangularChart, sign: float):
    ops = phi.ops

    def f(x):
        rho = chart.states(x)
        n = rho.shape[0]
        # one kernel call over the stacked inputs and outputs
        vals = coherence_batch(measure, np.concatenate([apply_batch(ops, rho), rho]))
        return sign * (vals[:n] - vals[n:])

    return f


def _optimize_states(phi, measure, cfg, seeds, sign, kind) -> PowerReport:
    d = _square_dim(phi)
    chart = TriangularChart(d)
    f = _gain_objective(phi, measure, chart, sign)
    res = multistart_maximize(f, _state_seeds(chart, seeds), chart.sample, cfg)
    witness = DensityMatrix(chart.states(res.x)[0])
    return PowerReport(float(res.value), witness, measure, kind, res.converged, res.starts_used)


def _mcs_seeds(d: int) -> list[DensityMatrix]:
    seeds = [pure_density(max_coherent_state(np.zeros(d)))]
    if d > 1:
        alt = np.where(np.arange(d) % 2 == 1, math.pi, 0.0)
        seeds.append(pure_density(max_coherent_state(alt)))
        seeds.append(pure_density(max_coherent_state(np.arange(d) * math.pi / 2)))
    return seeds


def generalized_cohering_power(
    phi: KrausChannel, measure, cfg: OptimizerConfig | None = None, seeds: Iterable = ()
) -> PowerReport:
    """Lower bound on ``max_rho C(Phi(rho)) - C(rho)`` by multi-start search.

    Basis states are always among the seeds, so the result is never below
    the cohering power.
    """
    measure = CoherenceMeasure.parse(measure)
    cfg = cfg or OptimizerConfig()
    d = _square_dim(phi)
    all_seeds = [basis_state(i, d) for i in range(d)] + _mcs_seeds(d) + list(seeds)
    return _optimize_states(phi, measure, cfg, all_seeds, 1.0, PowerKind.GEN_COHERING)


def generalized_decohering_power(
    phi: KrausChannel, measure, cfg: OptimizerConfig | None = None, seeds: Iterable = ()
) -> PowerReport:
    """Lower bound on ``max_rho C(rho) - C(Phi(rho))`` by multi-start search.

    Seeds include the witness of :func:`decohering_power`, so the result is
    never below the de-cohering power.
    """
    measure = CoherenceMeasure.parse(measure)
    cfg = cfg or OptimizerConfig()
    d = _square_dim(phi)
    dec = decohering_power(phi, measure, cfg)
    all_seeds = [dec.witness] + [basis_state(i, d) for i in range(d)] + _mcs_seeds(d) + list(seeds)
    return _optimize_states(phi, measure, cfg, all_seeds, -1.0, PowerKind.GEN_DECOHERING)


# -- de-cohering power ---------------------------------------------------------

def _phase_objective(phi: KrausChannel, measure: CoherenceMeasure):
    ops = phi.ops

    def coh(free):
        free = np.atleast_2d(free)
        thetas = np.concatenate([np.zeros((free.shape[0], 1)), free], axis=1)
        psi = np.exp(1j * thetas) / math.sqrt(thetas.shape[1])
        rho = psi[:, :, None] * np.conj(psi)[:, None, :]
        return coherence_batch(measure, apply_batch(ops, rho))

    return coh


def _phase_grid(d: int) -> np.ndarray:
    per_axis = max(1, min(PHASE_GRID_AXIS, int(math.floor(PHASE_GRID_CAP ** (1.0 / (d - 1)) + 1e-9))))
    axis = 2.0 * math.pi * np.arange(per_axis) / per_axis
    mesh = np.meshgrid(*([axis] * (d - 1)), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def decohering_power(phi: KrausChannel, measure, cfg: OptimizerConfig | None = None) -> PowerReport:
    """``C_max(d) - min_theta C(Phi(psi_theta))`` over maximally coherent ``psi_theta``.

    Qubits: a 64-point phase grid followed by bounded Brent refinement to a
    phase tolerance of ``min(step_tol, sqrt(value_tol))``. Higher ``d``: a phase grid of at
    most 4096 points plus random phases, the best candidates refined by
    Nelder-Mead; the minimum found is an upper bound, so the power is a
    lower bound.
    """
    measure = CoherenceMeasure.parse(measure)
    cfg = cfg or OptimizerConfig()
    d = _square_dim(phi)
    coh = _phase_objective(phi, measure)
    cmax = max_coherence(measure, d)
    if d == 1:
        return PowerReport(0.0, basis_state(0, 1), measure, PowerKind.DECOHERING, True, 0)

    if d == 2:
        grid = 2.0 * math.pi * np.arange(PHASE_GRID_QUBIT) / PHASE_GRID_QUBIT
        vals = coh(grid[:, None])
        k = int(np.argmin(vals))
        h = 2.0 * math.pi / PHASE_GRID_QUBIT
        res = minimize_scalar(
            lambda t: float(coh(np.array([[t]]))[0]),
            bounds=(grid[k] - h, grid[k] + h),
            method="bounded",
            # near a smooth minimum the value error scales like the square of the phase error
            options={"xatol": min(cfg.step_tol, math.sqrt(cfg.value_tol)), "maxiter": cfg.max_iters},
        )
        if res.fun <= vals[k]:
            best_free, best_c, ok = np.array([res.x]), float(res.fun), bool(res.success)
        else:
            best_free, best_c, ok = grid[k:k + 1], float(vals[k]), bool(res.success)
        starts = 1
    else:
        grid = _phase_grid(d)

        def neg(free):
            return -coh(free)

        def sample(rng, n):
            return rng.uniform(0.0, 2.0 * math.pi, size=(n, d - 1))

        res = multistart_maximize(neg, grid, sample, cfg, refine_seeds=min(cfg.starts, grid.shape[0]))
        best_free, best_c, ok, starts = res.x, -res.value, res.converged, res.starts_used

    witness = pure_density(max_coherent_state(phase_vector(best_free)))
    return PowerReport(cmax - best_c, witness, measure, PowerKind.DECOHERING, ok, starts)


def qubit_unitary_decohering_l1(u, tol: float = DEFAULT_TOL) -> float:
    """``1 - ||a|^2 - |b|^2|`` with ``a, b`` the first-row entries of ``U``."""
    u = _check_qubit_unitary(u, tol)
    a2, b2 = abs(u[0, 0]) ** 2, abs(u[0, 1]) ** 2
    return 1.0 - abs(a2 - b2)


def qubit_unitary_decohering_rel(u, tol: float = DEFAULT_TOL) -> float:
    """``1 - H(1/2 + |ab|)``."""
    u = _check_qubit_unitary(u, tol)
    ab = min(0.5, abs(u[0, 0]) * abs(u[0, 1]))
    return 1.0 - binary_entropy(0.5 + ab)


# -- inequality checks -----------------------------------------------------------

def check_l1_vs_rel_inequality(u, tol: float = DEFAULT_TOL) -> InequalityCheck:
    """Unitary cohering powers: ``C_l1 >= max(C_r, 2**C_r - 1)``."""
    cl1 = unitary_cohering_power_l1(u, tol)
    cr = unitary_cohering_power_rel(u, tol)
    slack = cl1 - max(cr, 2.0 ** cr - 1.0)
    return InequalityCheck(slack >= -1e-9, slack)


def channel_l1_vs_rel_probe(phi: KrausChannel) -> InequalityCheck:
    """The same inequality for a general channel, reported but not asserted.

    Whether it holds beyond unitaries is not known; a negative slack flags a
    counterexample candidate.
    """
    cl1 = cohering_power(phi, CoherenceMeasure.L1).value
    cr = cohering_power(phi, CoherenceMeasure.REL_ENT).value
    slack = cl1 - max(cr, 2.0 ** cr - 1.0)
    return InequalityCheck(slack >= -1e-9, slack)


def lemma_entropy_inequality(x: float) -> float:
    """Margin ``H(x) + H(1/2 + sqrt(x(1-x))) - 1``, which is never negative."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x!r} outside [0, 1]")
    t = min(1.0, 0.5 + math.sqrt(x * (1.0 - x)))
    return binary_entropy(x) + binary_entropy(t) - 1.0


def qubit_c_ge_d_check(u, measure, tol: float = DEFAULT_TOL) -> InequalityCheck:
    """Closed-form cohering power minus closed-form de-cohering power of a qubit unitary."""
    measure = CoherenceMeasure.parse(measure)
    u = _check_qubit_unitary(u, tol)
    if measure is CoherenceMeasure.L1:
        slack = unitary_cohering_power_l1(u, tol) - qubit_unitary_decohering_l1(u, tol)
    else:
        slack = unitary_cohering_power_rel(u, tol) - qubit_unitary_decohering_rel(u, tol)
    return InequalityCheck(slack >= -1e-9, slack)


def dim_counterexample_unitary(d: int) -> np.ndarray:
    """Rotation by pi/4 in the span of the first two basis vectors, identity elsewhere."""
    if d < 3:
        raise ValueError(f"the counterexample needs d >= 3, got {d}")
    u = np.eye(d, dtype=complex)
    r = math.sqrt(0.5)
    u[0, 0], u[0, 1], u[1, 0], u[1, 1] = r, r, -r, r
    return u


def dim_counterexample_decohering_l1(d: int) -> float:
    """Closed form ``(2 - sqrt2)(2 - (2 - sqrt2)/d)``."""
    s = 2.0 - math.sqrt(2.0)
    return s * (2.0 - s / d)


# -- set-membership probes ---------------------------------------------------------

def nio_probe(phi: KrausChannel, measure, cfg: OptimizerConfig | None = None, tol: float = 1e-6) -> InequalityCheck:
    """Numerical check that ``phi`` never increases coherence (generalized cohering power <= tol)."""
    v = generalized_cohering_power(phi, measure, cfg).value
    return InequalityCheck(v <= tol, tol - v)


def ndo_probe(phi: KrausChannel, measure, cfg: OptimizerConfig | None = None, tol: float = 1e-6) -> InequalityCheck:
    """Numerical check that ``phi`` never decreases coherence (generalized de-cohering power <= tol)."""
    v = generalized_decohering_power(phi, measure, cfg).value
    return InequalityCheck(v <= tol, tol - v)


def adjoint_unitary_channel(u, tol: float = DEFAULT_TOL) -> KrausChannel:
    return unitary_channel(adjoint(u), tol=tol)
