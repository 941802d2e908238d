import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohpower.channels import (
    InvalidChannelError,
    KrausChannel,
    apply,
    apply_batch,
    apply_matrix,
    classify,
    compose,
    dephase,
    dephasing_channel,
    has_incoherent_kraus,
    identity_channel,
    is_dio,
    is_mio,
    tensor_with_identity,
    unitary_channel,
)
from cohpower.fixtures import RHO0, U0, fixture_dio_counterexample, fixture_prop2_state
from cohpower.linalg import PRINTED_TOL
from cohpower.measures import c_l1
from cohpower.sampling import haar_unitary, random_channel, random_mio_channel, random_state
from cohpower.states import DensityMatrix, basis_state

from conftest import HADAMARD

PLUS = np.full((2, 2), 0.5)


def test_completeness_is_checked():
    with pytest.raises(InvalidChannelError, match="residual 1.0") as exc:
        KrausChannel([np.sqrt(2.0) * np.eye(2)])
    assert exc.value.residual == pytest.approx(1.0)
    with pytest.raises(InvalidChannelError, match="at least one"):
        KrausChannel([])
    with pytest.raises(InvalidChannelError, match="shape"):
        KrausChannel([np.eye(2), np.eye(3)])


def test_non_square_channel_and_class_tests():
    # trace-out-like map from a qubit onto a one-dimensional space
    phi = KrausChannel([[[1, 0]], [[0, 1]]])
    assert (phi.dim_in, phi.dim_out, phi.is_square) == (2, 1, False)
    np.testing.assert_allclose(apply(phi, DensityMatrix(PLUS)), [[1.0]])
    with pytest.raises(ValueError, match="square"):
        is_mio(phi)


def test_apply_examples():
    rho = random_state(3, np.random.default_rng(0))
    np.testing.assert_allclose(apply(identity_channel(3), rho), rho, atol=1e-15)
    np.testing.assert_allclose(apply(unitary_channel(HADAMARD), basis_state(0, 2)), PLUS, atol=1e-15)
    out = apply(fixture_dio_counterexample(), fixture_prop2_state(0.3))
    assert c_l1(out) == pytest.approx(4 * 0.3 / math.sqrt(3), abs=1e-12)
    with pytest.raises(ValueError, match="dimension"):
        apply(identity_channel(2), rho)


def test_apply_batch_matches_single(rng):
    phi = random_channel(3, 3, rng)
    stack = np.array([np.asarray(random_state(3, rng)) for _ in range(6)])
    np.testing.assert_allclose(apply_batch(phi.ops, stack), [apply_matrix(phi, m) for m in stack], atol=1e-14)
    u = unitary_channel(haar_unitary(3, rng))
    np.testing.assert_allclose(apply_batch(u.ops, stack), [apply_matrix(u, m) for m in stack], atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 4), rank=st.integers(1, 5))
def test_apply_preserves_trace_and_positivity(seed, d, rank):
    rng = np.random.default_rng(seed)
    out = apply(random_channel(d, rank, rng), random_state(d, rng))
    assert abs(np.trace(np.asarray(out)) - 1.0) <= 1e-9
    assert np.linalg.eigvalsh(np.asarray(out)).min() >= -1e-10


def test_unitary_channel_examples():
    np.testing.assert_array_equal(unitary_channel(np.eye(2)).ops[0], np.eye(2))
    out = apply(unitary_channel(HADAMARD), basis_state(1, 2))
    assert c_l1(out) == pytest.approx(1.0)
    assert len(unitary_channel(U0, tol=PRINTED_TOL)) == 1
    with pytest.raises(InvalidChannelError, match="not unitary"):
        unitary_channel(U0)
    with pytest.raises(InvalidChannelError, match="square"):
        unitary_channel(np.ones((2, 3)))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 5))
def test_unitary_then_adjoint_is_identity(seed, d):
    rng = np.random.default_rng(seed)
    u = haar_unitary(d, rng)
    rho = random_state(d, rng)
    back = apply(unitary_channel(np.conj(u).T), apply(unitary_channel(u), rho))
    np.testing.assert_allclose(back, rho, atol=1e-10)


def test_dephase():
    diag = DensityMatrix(np.diag([0.2, 0.8]))
    np.testing.assert_array_equal(dephase(diag), diag)
    np.testing.assert_allclose(dephase(DensityMatrix(PLUS)), np.eye(2) / 2)
    np.testing.assert_allclose(dephase(DensityMatrix(RHO0, tol=PRINTED_TOL)), np.diag([0.7063, 0.2937]))
    rho = random_state(4, np.random.default_rng(1))
    once = dephase(rho)
    np.testing.assert_array_equal(dephase(once), once)
    assert c_l1(once) == 0.0


def test_tensor_with_identity():
    phi = fixture_dio_counterexample()
    np.testing.assert_array_equal(tensor_with_identity(phi, 1).ops, phi.ops)
    ident = tensor_with_identity(identity_channel(3), 2)
    np.testing.assert_array_equal(ident.ops[0], np.eye(6))
    assert tensor_with_identity(phi, 2).completeness_residual <= 1e-12
    with pytest.raises(ValueError):
        tensor_with_identity(phi, 0)


def test_tensor_extension_gain_multiplies():
    phi = fixture_dio_counterexample()
    sigma = DensityMatrix(PLUS)
    rho = fixture_prop2_state(0.3)
    gain = c_l1(apply(phi, rho)) - c_l1(rho)
    big = np.kron(np.asarray(rho), PLUS)
    ext_gain = c_l1(apply(tensor_with_identity(phi, 2), DensityMatrix(big))) - c_l1(big)
    assert ext_gain == pytest.approx(gain * (c_l1(sigma) + 1.0), abs=1e-12)


def test_compose():
    h = unitary_channel(HADAMARD)
    np.testing.assert_allclose(compose(h, h).ops[0], np.eye(2), atol=1e-15)
    with pytest.raises(ValueError):
        compose(identity_channel(3), h)


def test_class_examples():
    assert is_mio(dephasing_channel(3))
    assert is_dio(identity_channel(3))
    h = unitary_channel(HADAMARD)
    assert not is_mio(h)
    assert is_mio(h).violation == pytest.approx(0.5)
    assert not is_dio(h)
    assert has_incoherent_kraus(dephasing_channel(4))
    perm = np.eye(4)[[2, 0, 3, 1]]
    assert has_incoherent_kraus(unitary_channel(perm))
    assert is_dio(unitary_channel(perm))


def test_class_report_for_counterexample():
    rep = classify(fixture_dio_counterexample(), tol=1e-12)
    assert rep.is_mio and rep.is_dio and not rep.has_incoherent_kraus
    assert rep.max_violation["dio"] <= 1e-12
    assert rep.max_violation["incoherent_kraus"] == pytest.approx(1 / (2 * math.sqrt(3)))
    assert set(rep.as_dict()) == {"is_mio", "is_dio", "has_incoherent_kraus", "max_violation"}


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 4), kind=st.sampled_from(["generic", "mio", "perm"]))
def test_class_inclusions(seed, d, kind):
    rng = np.random.default_rng(seed)
    if kind == "generic":
        phi = random_channel(d, int(rng.integers(1, 4)), rng)
    elif kind == "mio":
        phi = random_mio_channel(d, rng)
    else:
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, d))
        phi = unitary_channel(np.eye(d)[rng.permutation(d)] * phases)
    rep = classify(phi)
    if rep.is_dio:
        assert rep.is_mio
    if rep.has_incoherent_kraus:
        assert rep.is_mio
    if kind != "generic":
        assert rep.is_mio


def test_random_mio_channels_are_mio_but_not_trivial(rng):
    for d in (2, 3, 4):
        phi = random_mio_channel(d, rng)
        assert is_mio(phi)
        # off-diagonal inputs reach off-diagonal outputs, so outputs are not always incoherent
        e01 = np.zeros((d, d))
        e01[0, 1] = 1.0
        assert np.abs(apply_matrix(phi, e01)).max() > 1e-6
