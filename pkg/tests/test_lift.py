import itertools

import numpy as np
import pytest

from tanglekit import (
    ConsistencyError,
    concurrence,
    concurrence_sq_linear,
    coupling_tensor,
    coupling_tensor_diff_report,
    exact_correlators,
    ghz_state,
    lift_comb,
    lifted_sigma_y,
    make_state,
    p_minus_quantity,
    p_plus_identity_check,
    p_plus_quantity,
    random_state,
    sample_local_group,
    swap_operator,
    tau3_sq_linear,
    tau3_sq_linear_checked,
    three_tangle,
    apply_local,
)
from tanglekit.lift import (
    MINKOWSKI_METRIC,
    antisymmetric_projector,
    P_PLUS_BACKTRANSFORM_RATIO,
    partial_transpose_right,
)
from tanglekit.qubits import PAULIS, LocalKind, PureState


def raw_table(psi):
    """Unnormalized bilinear correlators <psi|P|psi> without state validation."""
    n = psi.n_qubits
    from tanglekit.qubits import pauli_operator
    t = np.zeros((4,) * n)
    for s in itertools.product(range(4), repeat=n):
        t[s] = (psi.amplitudes.conj() @ pauli_operator(s) @ psi.amplitudes).real
    return t


class TestSwap:
    def test_swaps_basis_vectors(self):
        p = swap_operator()
        for a, b in itertools.product(range(2), repeat=2):
            v = np.zeros(4)
            v[2 * a + b] = 1
            out = p @ v
            expect = np.zeros(4)
            expect[2 * b + a] = 1
            np.testing.assert_allclose(out, expect, atol=1e-15)

    def test_involution(self):
        p = swap_operator()
        np.testing.assert_allclose(p @ p, np.eye(4), atol=1e-15)

    def test_pauli_sum_identity(self):
        explicit = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                            dtype=complex)
        np.testing.assert_allclose(swap_operator(), explicit, atol=1e-15)


class TestLift:
    def test_lifted_sigma_y_is_twice_antisymmetric_projector(self):
        np.testing.assert_allclose(lifted_sigma_y(), 2.0 * antisymmetric_projector(),
                                   atol=1e-12)

    def test_lift_is_hermitian(self):
        for op in (PAULIS[2], np.kron(PAULIS[2], PAULIS[2])):
            lifted = lift_comb(op)
            np.testing.assert_allclose(lifted, lifted.conj().T, atol=1e-10)

    def test_comb_nullity_transported(self):
        # product copies of any single-qubit state sit in the lifted comb's kernel
        ly = lifted_sigma_y()
        for seed in range(50):
            phi = random_state(1, seed)
            v = np.kron(phi.amplitudes, phi.amplitudes)
            assert abs(v.conj() @ ly @ v) < 1e-12

    def test_p_minus_quantity_equals_concurrence_sq(self):
        for seed in range(50):
            phi = random_state(2, seed)
            assert p_minus_quantity(phi) == pytest.approx(concurrence(phi) ** 2, abs=1e-10)


class TestCouplingTensor:
    def test_derived_is_real_and_frozen_value(self):
        g = coupling_tensor("derived")
        assert g.values.dtype == float
        # trace projection of the lifted pair comb; recorded reference entry
        assert g.values[0, 0, 0, 0] == pytest.approx(0.75, abs=1e-12)

    def test_diff_report(self):
        rep = coupling_tensor_diff_report()
        assert rep["n_nonzero_derived"] == 40
        assert rep["n_nonzero_closed_form"] == 10
        assert rep["max_abs_diff"] == pytest.approx(0.5, abs=1e-12)

    def test_csv_export(self, tmp_path):
        from tanglekit.lift import write_coupling_tensor_csv
        path = tmp_path / "g.csv"
        write_coupling_tensor_csv(path, coupling_tensor("derived"))
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "kappa,lambda,mu,nu,value,provenance"
        assert len(lines) == 257


class TestConcurrenceLinear:
    def test_product_state(self):
        t = exact_correlators(make_state(2, [1, 0, 0, 0]))
        assert concurrence_sq_linear(t) == pytest.approx(0.0, abs=1e-12)

    def test_bell(self, bell):
        assert concurrence_sq_linear(exact_correlators(bell)) == pytest.approx(1.0, abs=1e-12)

    def test_random_sweep(self):
        for seed in range(200):
            phi = random_state(2, seed)
            lin = concurrence_sq_linear(exact_correlators(phi))
            assert lin == pytest.approx(concurrence(phi) ** 2, abs=1e-10)


class TestTau3Linear:
    def test_ghz(self, ghz):
        t = exact_correlators(ghz)
        assert tau3_sq_linear(t, "mixed_form") == pytest.approx(1.0, abs=1e-10)
        assert tau3_sq_linear(t, "pure_G_form") == pytest.approx(1.0, abs=1e-10)

    def test_w(self, w):
        t = exact_correlators(w)
        assert abs(tau3_sq_linear(t, "mixed_form")) <= 1e-8
        assert abs(tau3_sq_linear(t, "pure_G_form")) <= 1e-8

    def test_random_sweep_both_forms(self):
        for seed in range(100):
            chi = random_state(3, seed)
            t = exact_correlators(chi)
            t3sq = three_tangle(chi) ** 2
            mixed = tau3_sq_linear(t, "mixed_form")
            pure = tau3_sq_linear(t, "pure_G_form")
            assert mixed == pytest.approx(t3sq, abs=1e-8)
            assert pure == pytest.approx(t3sq, abs=1e-8)
            assert abs(mixed - pure) <= 1e-8

    def test_checked_consistency_raises_on_corruption(self, ghz):
        t = exact_correlators(ghz).to_array().copy()
        assert tau3_sq_linear_checked(t) == pytest.approx(1.0, abs=1e-10)
        t[1, 1, 1] += 0.05  # the forms respond differently to a corrupted entry
        with pytest.raises(ConsistencyError):
            tau3_sq_linear_checked(t)


class TestDegreeDoubling:
    def test_unnormalized_tables_scale_with_degree(self):
        lam = 1.21
        phi = random_state(2, 3)
        scaled = PureState(2, lam * phi.amplitudes)
        # raw bilinear tables scale by lam^2; the quadratic contraction by lam^4
        assert concurrence_sq_linear(raw_table(scaled)) == pytest.approx(
            lam ** 4 * concurrence_sq_linear(raw_table(phi)), rel=1e-10)
        chi = random_state(3, 3)
        scaled3 = PureState(3, lam * chi.amplitudes)
        assert tau3_sq_linear(raw_table(scaled3)) == pytest.approx(
            lam ** 8 * tau3_sq_linear(raw_table(chi)), rel=1e-10)


class TestProjectorQuantities:
    def test_p_minus_sl_invariant_p_plus_not(self):
        phi = random_state(2, 3)
        pm0, pp0 = p_minus_quantity(phi), p_plus_quantity(phi)
        pp_changed = 0
        for trial in range(20):
            ops = [sample_local_group(LocalKind.SL2C, 500 + 2 * trial + k)
                   for k in range(2)]
            phi2 = apply_local(phi, ops)
            assert abs(p_minus_quantity(phi2) - pm0) <= 1e-8 * max(1.0, abs(pm0))
            if abs(p_plus_quantity(phi2) - pp0) > 1e-3 * abs(pp0):
                pp_changed += 1
        assert pp_changed >= 1

    def test_p_plus_identity_on_basis_states(self):
        for amps in ([1, 0], [0, 1]):
            lhs, rhs = p_plus_identity_check(make_state(1, amps))
            assert lhs == pytest.approx(1.0, abs=1e-12)

    def test_p_plus_identity_constant_ratio(self):
        ratios = []
        for seed in range(50):
            lhs, rhs = p_plus_identity_check(random_state(1, seed))
            ratios.append(rhs / lhs)
        ratios = np.array(ratios)
        assert np.max(np.abs(ratios - P_PLUS_BACKTRANSFORM_RATIO)) < 1e-10


def test_partial_transpose_shape_check():
    from tanglekit import DimensionError
    with pytest.raises(DimensionError):
        partial_transpose_right(np.eye(3), 1, 1)


def test_minkowski_constant():
    np.testing.assert_array_equal(np.diag(MINKOWSKI_METRIC), [1, -1, -1, -1])
