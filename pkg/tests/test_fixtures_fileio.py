import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohpower.channels import InvalidChannelError, apply, has_incoherent_kraus, identity_channel, is_dio
from cohpower.fileio import (
    FormatError,
    channel_from_json,
    channel_to_json,
    parse_channel_file,
    parse_state_file,
    state_from_json,
    state_to_json,
    write_channel_file,
    write_state_file,
)
from cohpower.fixtures import (
    fixture_coherence_preserving_channel,
    fixture_dio_counterexample,
    fixture_prop2_state,
    fixture_u0_rho0,
)
from cohpower.linalg import PRINTED_TOL
from cohpower.measures import c_l1
from cohpower.sampling import random_channel, random_state
from cohpower.states import InvalidStateError, basis_state, max_coherent_state


def test_dio_counterexample_surds():
    phi = fixture_dio_counterexample()
    assert phi.completeness_residual <= 1e-12
    assert is_dio(phi, 1e-12)
    assert not has_incoherent_kraus(phi)
    allowed = [0.0, 0.5, 1 / (2 * math.sqrt(3)), 1 / math.sqrt(2), 1 / math.sqrt(6), math.sqrt(6) / 3]
    for k in phi.ops:
        for z in k.ravel():
            assert z.imag == 0.0
            assert min(abs(abs(z.real) - a) for a in allowed) == 0.0


@pytest.mark.parametrize("r", [0.1, 0.3, 0.5])
def test_counterexample_amplifies(r):
    rho = fixture_prop2_state(r)
    assert c_l1(rho) == pytest.approx(2 * r, abs=1e-15)
    out = c_l1(apply(fixture_dio_counterexample(), rho))
    assert out == pytest.approx(4 * r / math.sqrt(3), abs=1e-12)
    assert out > 2 * r


def test_prop2_state_range():
    assert fixture_prop2_state(0.3).dim == 4
    with pytest.raises(ValueError):
        fixture_prop2_state(0.6)
    with pytest.raises(ValueError):
        fixture_prop2_state(0.0)


def test_printed_pair():
    u0, rho0 = fixture_u0_rho0()
    assert rho0.tol == PRINTED_TOL
    assert np.trace(np.asarray(rho0)).real == pytest.approx(1.0, abs=PRINTED_TOL)
    u0[0, 0] = 0.0  # a copy: the module constant is untouched
    assert fixture_u0_rho0()[0][0, 0] != 0.0


@pytest.mark.parametrize("d", [2, 3, 5])
def test_coherence_preserving_channel(d):
    phi = fixture_coherence_preserving_channel(d)
    assert phi.completeness_residual <= 1e-12
    psi = max_coherent_state(np.zeros(d))
    np.testing.assert_allclose(apply(phi, basis_state(0, d)), np.outer(psi, psi.conj()), atol=1e-15)
    with pytest.raises(ValueError):
        fixture_coherence_preserving_channel(1)


# -- files -------------------------------------------------------------------------------

def test_identity_channel_file(tmp_path):
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}))
    phi = parse_channel_file(path)
    np.testing.assert_array_equal(phi.ops, identity_channel(2).ops)


def test_flat_pair_layout():
    phi = channel_from_json('{"dim": 2, "kraus": [[[1, 0], [0, 0], [0, 0], [1, 0]]]}')
    np.testing.assert_array_equal(phi.ops[0], np.eye(2))


def test_completeness_error_names_residual():
    text = json.dumps({"dim": 2, "kraus": [[[[math.sqrt(2), 0], [0, 0]], [[0, 0], [math.sqrt(2), 0]]]]})
    with pytest.raises(InvalidChannelError, match="completeness.*1.0") as exc:
        channel_from_json(text)
    assert exc.value.residual == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "text, field",
    [
        ('{"kraus": []}', "dim"),
        ('{"dim": 0, "kraus": []}', "dim"),
        ('{"dim": 2, "kraus": []}', "kraus"),
        ('{"dim": 2, "kraus": [[[[1, 0], [0, 0]]]]}', "kraus[0]"),
        ('{"dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, "x"]]]]}', "kraus[0][1][1]"),
        ('{"dim": 1, "matrix": [[[1, 0, 0]]]}', "matrix[0][0]"),
    ],
)
def test_malformed_fields_are_named(text, field):
    parse = state_from_json if "matrix" in text else channel_from_json
    with pytest.raises(FormatError) as exc:
        parse(text)
    assert exc.value.field == field
    assert field in str(exc.value)


def test_syntax_error_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2,\n "kraus": [\n}')
    with pytest.raises(FormatError) as exc:
        parse_channel_file(path)
    assert exc.value.line == 3
    assert f"{path}:3" in str(exc.value)


def test_relaxed_tolerance():
    u0, _ = fixture_u0_rho0()
    text = json.dumps({"dim": 2, "kraus": [[[[z.real, z.imag] for z in row] for row in u0]]})
    with pytest.raises(InvalidChannelError):
        channel_from_json(text)
    assert channel_from_json(text, relaxed=True).tol == PRINTED_TOL
    assert channel_from_json(text, tol=1e-3).tol == 1e-3


def test_state_file_validation(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"dim": 2, "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}))
    with pytest.raises(InvalidStateError, match="trace"):
        parse_state_file(path)


def test_counterexample_round_trip_bit_exact(tmp_path):
    phi = fixture_dio_counterexample()
    path = tmp_path / "dio.json"
    write_channel_file(path, phi)
    back = parse_channel_file(path)
    np.testing.assert_array_equal(back.ops, phi.ops)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 4), rank=st.integers(1, 3))
def test_round_trips(seed, d, rank):
    rng = np.random.default_rng(seed)
    phi = random_channel(d, rank, rng)
    np.testing.assert_array_equal(channel_from_json(channel_to_json(phi)).ops, phi.ops)
    rho = random_state(d, rng)
    np.testing.assert_array_equal(state_from_json(state_to_json(rho)).mat, rho.mat)


def test_state_file_round_trip(tmp_path):
    _, rho0 = fixture_u0_rho0()
    path = tmp_path / "rho0.json"
    write_state_file(path, rho0)
    np.testing.assert_array_equal(parse_state_file(path, relaxed=True).mat, rho0.mat)
