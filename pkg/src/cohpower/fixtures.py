"""Named channels, states and unitaries used by the reproduction harness.

Entries that are surds are built from ``math.sqrt`` so that validation
residuals sit at rounding level. The two four-decimal qubit matrices are
validated at :data:`PRINTED_TOL` instead.
"""
from __future__ import annotations

import math

import numpy as np

from .channels import KrausChannel
from .linalg import PRINTED_TOL
from .states import DensityMatrix, max_coherent_state

# Printed qubit unitary. As printed, U0[1, 1] = -0.0868 - 0.8452i makes the
# matrix non-unitary (residual ~0.09); flipping the sign of the real part
# gives residual ~9e-5 and reproduces both quoted entropy values.
U0_AS_PRINTED = np.array(
    [[0.5645 + 0.6351j, 0.4141 + 0.3264j],
     [-0.1452 + 0.5069j, -0.0868 - 0.8452j]]
)
U0 = np.array(
    [[0.5645 + 0.6351j, 0.4141 + 0.3264j],
     [-0.1452 + 0.5069j, 0.0868 - 0.8452j]]
)
RHO0 = np.array(
    [[0.7063, 0.4338 - 0.1360j],
     [0.4338 + 0.1360j, 0.2937]]
)


def fixture_dio_counterexample() -> KrausChannel:
    """A four-dimensional DIO channel that raises the l1 coherence of some states.

    None of its Kraus operators is incoherent, although the channel commutes
    with dephasing.
    """
    a = 1.0 / (2.0 * math.sqrt(3.0))
    h = 0.5
    s2 = 1.0 / math.sqrt(2.0)
    s6 = 1.0 / math.sqrt(6.0)
    m1 = [[0, h, 0, 0],
          [a, 0, 0, 0],
          [-a, 0, 0, 0],
          [a, 0, 0, 0]]
    m2 = [[a, 0, s2, s6],
          [0, h, 0, 0],
          [a, 0, 0, 0],
          [a, 0, 0, 0]]
    m3 = [[a, 0, -s2, s6],
          [a, 0, 0, 0],
          [0, h, 0, 0],
          [-a, 0, 0, 0]]
    m4 = [[a, 0, 0, -math.sqrt(6.0) / 3.0],
          [-a, 0, 0, 0],
          [-a, 0, 0, 0],
          [0, h, 0, 0]]
    return KrausChannel([m1, m2, m3, m4], tol=1e-12)


def fixture_prop2_state(rho12: float) -> DensityMatrix:
    """``diag(1/2, 1/2, 0, 0)`` with off-diagonal entry ``rho12`` in the top 2x2 block.

    Positive semidefinite exactly for ``0 < rho12 <= 1/2``.
    """
    rho12 = float(rho12)
    if not 0.0 < rho12 <= 0.5:
        raise ValueError(f"rho12 must lie in (0, 1/2] for a valid state, got {rho12!r}")
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[1, 1] = 0.5
    m[0, 1] = m[1, 0] = rho12
    return DensityMatrix(m)


def fixture_u0_rho0() -> tuple[np.ndarray, DensityMatrix]:
    """The four-decimal qubit unitary (sign-corrected) and its partner state."""
    return U0.copy(), DensityMatrix(RHO0, tol=PRINTED_TOL)


def fixture_coherence_preserving_channel(d: int) -> KrausChannel:
    """Replacement channel onto the uniform superposition: ``K_i = |Psi><i|``.

    Every input is mapped to the maximally coherent ``|Psi><Psi|``, so the
    channel never lowers coherence.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    psi = max_coherent_state(np.zeros(d))
    ops = []
    for i in range(d):
        k = np.zeros((d, d), dtype=complex)
        k[:, i] = psi
        ops.append(k)
    return KrausChannel(ops)


def plus_state() -> DensityMatrix:
    return DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
