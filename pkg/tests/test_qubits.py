import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanglekit import (
    ConsistencyError,
    DegenerateInputError,
    DimensionError,
    LocalInvertible,
    LocalKind,
    ParameterError,
    PureState,
    apply_local,
    expectation,
    ghz_state,
    make_state,
    pauli_label,
    parse_pauli_label,
    pauli_operator,
    random_state,
    sample_local_group,
    white_noise_mix,
)
from tanglekit.invariants import three_tangle


def test_make_state_basis():
    s = make_state(1, [1, 0], normalize=True)
    assert s.normalized
    np.testing.assert_allclose(s.amplitudes, [1, 0])


def test_make_state_normalizes_bell():
    s = make_state(2, [1, 0, 0, 1], normalize=True)
    np.testing.assert_allclose(np.abs(s.amplitudes[[0, 3]]), 1 / np.sqrt(2))


def test_make_state_normalizes_ghz():
    s = make_state(3, [1, 0, 0, 0, 0, 0, 0, 1], normalize=True)
    np.testing.assert_allclose(np.abs(s.amplitudes[[0, 7]]), 1 / np.sqrt(2))


def test_make_state_wrong_length():
    with pytest.raises(DimensionError):
        make_state(2, [1, 0, 0])


def test_make_state_all_zero():
    with pytest.raises(DegenerateInputError):
        make_state(1, [0, 0])


def test_normalized_flag_is_checked():
    with pytest.raises(ConsistencyError):
        PureState(1, np.array([1.0, 1.0]), normalized=True)


def test_pauli_operator_identity():
    np.testing.assert_array_equal(pauli_operator((0,)), np.eye(2))


def test_pauli_operator_yy():
    # hand expansion of the 4x4 Kronecker product: anti-diagonal -1, 1, 1, -1
    # read from top-right
    expected = np.array([
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ], dtype=complex)
    np.testing.assert_allclose(pauli_operator((2, 2)), expected)


def test_pauli_operator_0yy():
    p = pauli_operator((0, 2, 2))
    assert p.shape == (8, 8)
    assert abs(np.trace(p)) == 0
    np.testing.assert_allclose(p, p.conj().T)


def test_expectation_eigenstate():
    assert expectation(make_state(1, [1, 0]), (3,)) == pytest.approx(1.0)


def test_expectation_ghz_examples(ghz):
    assert expectation(ghz, (3, 3, 0)) == pytest.approx(1.0)
    assert expectation(ghz, (1, 1, 1)) == pytest.approx(1.0)
    assert expectation(ghz, (3, 0, 0)) == pytest.approx(0.0, abs=1e-14)


def test_expectation_requires_normalized():
    with pytest.raises(ParameterError):
        expectation(PureState(1, np.array([2.0, 0.0])), (3,))


def test_apply_local_identity(ghz):
    ops = [LocalInvertible(np.eye(2), LocalKind.SU2)] * 3
    out = apply_local(ghz, ops)
    np.testing.assert_allclose(out.amplitudes, ghz.amplitudes)


def test_apply_local_bit_flip():
    # sigma_x up to phase: i*sigma_x has det 1 and flips the basis state
    isx = 1j * np.array([[0, 1], [1, 0]], dtype=complex)
    out = apply_local(make_state(1, [1, 0]), [LocalInvertible(isx, LocalKind.SU2)])
    np.testing.assert_allclose(np.abs(out.amplitudes), [0, 1])


def test_apply_local_count_mismatch(ghz):
    with pytest.raises(DimensionError):
        apply_local(ghz, [LocalInvertible(np.eye(2), LocalKind.SU2)])


def test_sl_action_preserves_tangle(ghz):
    for seed in range(5):
        ops = [sample_local_group(LocalKind.SL2C, 100 + 3 * seed + k) for k in range(3)]
        out = apply_local(ghz, ops)
        # polynomial degree-4 homogeneity: modulus on the raw vector equals
        # the original tangle exactly
        from tanglekit.invariants import tangle_polynomial
        assert abs(abs(tangle_polynomial(out)) - 1.0) < 1e-8


def test_sample_su2_unitary():
    u = sample_local_group(LocalKind.SU2, 42)
    m = u.matrix
    assert np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-12
    assert abs(np.linalg.det(m) - 1) < 1e-10


def test_sample_sl2c_det():
    m = sample_local_group(LocalKind.SL2C, 43).matrix
    assert abs(np.linalg.det(m) - 1) < 1e-10


def test_sample_sl2c_zero_squeeze_is_unitary():
    m = sample_local_group(LocalKind.SL2C, 44, s_max=0.0).matrix
    assert np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-12


def test_sampling_reproducible():
    a = sample_local_group(LocalKind.SL2C, 7).matrix
    b = sample_local_group(LocalKind.SL2C, 7).matrix
    np.testing.assert_array_equal(a, b)


def test_white_noise_limits(ghz):
    rho0 = white_noise_mix(ghz, 0.0)
    np.testing.assert_allclose(rho0.matrix, np.outer(ghz.amplitudes, ghz.amplitudes.conj()),
                               atol=1e-15)
    rho1 = white_noise_mix(ghz, 1.0)
    np.testing.assert_allclose(rho1.matrix, np.eye(8) / 8, atol=1e-15)


def test_white_noise_spectrum(ghz):
    rho = white_noise_mix(ghz, 0.1)
    vals = np.sort(np.linalg.eigvalsh(rho.matrix))
    np.testing.assert_allclose(vals[-1], 0.9 + 0.1 / 8, atol=1e-12)
    np.testing.assert_allclose(vals[:-1], [0.1 / 8] * 7, atol=1e-12)


def test_white_noise_eps_range(ghz):
    with pytest.raises(ParameterError):
        white_noise_mix(ghz, 1.5)


def test_pauli_labels_roundtrip():
    assert pauli_label((3, 3, 0)) == "ZZ0"
    assert parse_pauli_label("ZZ0") == (3, 3, 0)
    assert parse_pauli_label("0xyz") == (0, 1, 2, 3)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_pauli_involution(indices):
    s = tuple(indices)
    p = pauli_operator(s)
    np.testing.assert_allclose(p @ p, np.eye(2 ** len(s)), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_white_noise_trace_and_hermiticity(seed, eps):
    rho = white_noise_mix(random_state(2, seed), eps)
    assert abs(np.trace(rho.matrix) - 1) < 1e-12
    assert np.max(np.abs(rho.matrix - rho.matrix.conj().T)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_su2_preserves_norm(seed):
    psi = random_state(2, seed)
    ops = [sample_local_group(LocalKind.SU2, seed + k) for k in range(2)]
    assert abs(apply_local(psi, ops).norm() - 1.0) < 1e-12


def test_expectation_identity_string_on_rho(ghz):
    rho = white_noise_mix(ghz, 0.37)
    assert expectation(rho, (0, 0, 0)) == pytest.approx(1.0, abs=1e-12)
