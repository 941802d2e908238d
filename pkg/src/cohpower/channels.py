"""Kraus-represented channels and the free-operation class predicates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import DEFAULT_TOL, as_matrix, check_tol, unitarity_residual
from .states import DensityMatrix


class InvalidChannelError(ValueError):
    """Channel invariant violated; ``residual`` is the offending magnitude when known."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


def _short(x: float) -> str:
    # six significant digits, always printed as a float literal ("1.0", not "1")
    return repr(float(f"{x:.6g}"))


class KrausChannel:
    """A CPTP map given by Kraus operators ``K_n`` (each ``dim_out x dim_in``).

    Completeness ``sum K^dag K = I`` is checked on construction and serves as
    the certificate that the map is trace preserving.
    """

    __slots__ = ("ops", "tol", "completeness_residual")

    def __init__(self, kraus: Sequence, tol: float = DEFAULT_TOL):
        tol = check_tol(tol)
        mats = [as_matrix(k, f"kraus[{n}]") for n, k in enumerate(kraus)]
        if not mats:
            raise InvalidChannelError("a channel needs at least one Kraus operator")
        shape = mats[0].shape
        for n, k in enumerate(mats):
            if k.shape != shape:
                raise InvalidChannelError(f"kraus[{n}] has shape {k.shape}, expected {shape}")
        ops = np.stack(mats)
        gram = np.einsum("kji,kjl->il", np.conj(ops), ops)
        resid = float(np.max(np.abs(gram - np.eye(shape[1]))))
        if resid > tol:
            raise InvalidChannelError(
                f"Kraus completeness violated: residual {_short(resid)} > {tol:g}", residual=resid
            )
        ops.setflags(write=False)
        self.ops = ops
        self.tol = tol
        self.completeness_residual = resid

    @property
    def kraus(self) -> list[np.ndarray]:
        return list(self.ops)

    @property
    def dim_in(self) -> int:
        return self.ops.shape[2]

    @property
    def dim_out(self) -> int:
        return self.ops.shape[1]

    @property
    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    def __len__(self) -> int:
        return self.ops.shape[0]

    def __repr__(self) -> str:
        return f"KrausChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, rank={len(self)})"


def apply_matrix(phi: KrausChannel, m) -> np.ndarray:
    """``sum_n K_n m K_n^dag`` on a raw matrix (no state validation)."""
    m = np.asarray(m)
    if m.shape != (phi.dim_in, phi.dim_in):
        raise ValueError(f"input has shape {m.shape}, channel expects dimension {phi.dim_in}")
    return np.einsum("kij,jl,kml->im", phi.ops, m, np.conj(phi.ops))


def apply_batch(ops: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Apply stacked Kraus operators ``(r, do, di)`` to a stack ``(n, di, di)``."""
    if ops.shape[0] == 1:
        k = ops[0]
        return k @ mats @ np.conj(k.T)
    opsh = np.conj(np.swapaxes(ops, -1, -2))
    return np.sum(ops[None] @ mats[:, None] @ opsh[None], axis=1)


def apply(phi: KrausChannel, rho) -> DensityMatrix:
    out = apply_matrix(phi, rho)
    return DensityMatrix(0.5 * (out + np.conj(out).T), tol=max(getattr(rho, "tol", DEFAULT_TOL), phi.tol))


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel([np.eye(d)])


def dephasing_channel(d: int) -> KrausChannel:
    """The completely dephasing map with Kraus operators ``|i><i|``."""
    ops = []
    for i in range(d):
        k = np.zeros((d, d))
        k[i, i] = 1.0
        ops.append(k)
    return KrausChannel(ops)


def unitary_channel(u, tol: float = DEFAULT_TOL) -> KrausChannel:
    u = as_matrix(u, "u")
    if u.shape[0] != u.shape[1]:
        raise InvalidChannelError(f"unitary must be square, got shape {u.shape}")
    resid = unitarity_residual(u)
    if resid > tol:
        raise InvalidChannelError(f"matrix is not unitary: residual {_short(resid)} > {tol:g}", residual=resid)
    return KrausChannel([u], tol=tol)


def dephase(rho) -> DensityMatrix:
    m = np.asarray(rho)
    return DensityMatrix(np.diag(np.diag(m)), tol=getattr(rho, "tol", DEFAULT_TOL))


def tensor_with_identity(phi: KrausChannel, extra_dim: int) -> KrausChannel:
    """``phi (x) id_extra`` with Kraus operators ``K_n (x) I``."""
    if extra_dim < 1:
        raise ValueError(f"extra_dim must be >= 1, got {extra_dim}")
    eye = np.eye(extra_dim)
    return KrausChannel([np.kron(k, eye) for k in phi.ops], tol=phi.tol)


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """``second o first``."""
    if second.dim_in != first.dim_out:
        raise ValueError("dimension mismatch in composition")
    ops = [b @ a for b in second.ops for a in first.ops]
    return KrausChannel(ops, tol=max(first.tol, second.tol))


# -- free-operation classes --------------------------------------------------

@dataclass(frozen=True)
class Membership:
    """Outcome of a class test; truthy iff ``member``.

    ``violation`` is the largest offending matrix entry in absolute value.
    """

    member: bool
    violation: float

    def __bool__(self) -> bool:
        return self.member


def _require_square(phi: KrausChannel) -> int:
    if not phi.is_square:
        raise ValueError(f"class tests need a square channel, got {phi.dim_out}x{phi.dim_in}")
    return phi.dim_in


def _unit(d: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((d, d))
    e[i, j] = 1.0
    return e


def _off_diagonal_max(m: np.ndarray) -> float:
    a = np.abs(m)
    np.fill_diagonal(a, 0.0)
    return float(a.max())


def is_mio(phi: KrausChannel, tol: float = DEFAULT_TOL) -> Membership:
    """Does ``phi`` map incoherent states to incoherent states?

    The incoherent set is the convex hull of the basis projectors and
    ``phi`` is affine, so checking the ``d`` basis projectors suffices.
    """
    d = _require_square(phi)
    viol = max(_off_diagonal_max(apply_matrix(phi, _unit(d, i, i))) for i in range(d))
    return Membership(viol <= tol, viol)


def is_dio(phi: KrausChannel, tol: float = DEFAULT_TOL) -> Membership:
    """Does ``phi`` commute with complete dephasing?

    Both maps are linear, so commutation is checked on the matrix units
    ``|i><j|``: diagonal units must map to diagonal matrices and off-diagonal
    units to matrices with zero diagonal.
    """
    d = _require_square(phi)
    viol = 0.0
    for i in range(d):
        for j in range(d):
            out = apply_matrix(phi, _unit(d, i, j))
            if i == j:
                viol = max(viol, _off_diagonal_max(out))
            else:
                viol = max(viol, float(np.max(np.abs(np.diag(out)))))
    return Membership(viol <= tol, viol)


def has_incoherent_kraus(phi: KrausChannel, tol: float = DEFAULT_TOL) -> Membership:
    """Is every given Kraus operator incoherent (at most one non-zero per column)?

    This certifies IO for this particular decomposition only; a channel may
    be IO through some other Kraus set.
    """
    viol = 0.0
    for k in phi.ops:
        mags = np.sort(np.abs(k), axis=0)
        if mags.shape[0] > 1:
            viol = max(viol, float(mags[-2].max()))
    return Membership(viol <= tol, viol)


@dataclass(frozen=True)
class ChannelClassReport:
    is_mio: bool
    is_dio: bool
    has_incoherent_kraus: bool
    max_violation: dict

    def as_dict(self) -> dict:
        return {
            "is_mio": self.is_mio,
            "is_dio": self.is_dio,
            "has_incoherent_kraus": self.has_incoherent_kraus,
            "max_violation": dict(self.max_violation),
        }


def classify(phi: KrausChannel, tol: float = DEFAULT_TOL) -> ChannelClassReport:
    mio = is_mio(phi, tol)
    dio = is_dio(phi, tol)
    inc = has_incoherent_kraus(phi, tol)
    return ChannelClassReport(
        is_mio=mio.member,
        is_dio=dio.member,
        has_incoherent_kraus=inc.member,
        max_violation={"mio": mio.violation, "dio": dio.violation, "incoherent_kraus": inc.violation},
    )
