import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanglekit import (
    DimensionError,
    FilterSpec,
    FilterSpecError,
    ParameterError,
    PureState,
    apply_local,
    comb_value_double,
    comb_value_single,
    concurrence,
    concurrence_filter_spec,
    concurrence_polynomial,
    filter_value,
    ghz_state,
    make_state,
    n_tangle,
    random_state,
    sample_local_group,
    tangle_polynomial,
    three_tangle,
    three_tangle_filter_spec,
)
from tanglekit.qubits import LocalKind


class TestCombs:
    def test_basis_states(self):
        assert comb_value_single(make_state(1, [1, 0])) == 0
        assert abs(comb_value_double(make_state(1, [1, 0]))) < 1e-12
        assert abs(comb_value_double(make_state(1, [0, 1]))) < 1e-12

    def test_plus_state(self):
        plus = make_state(1, [1, 1], normalize=True)
        assert abs(comb_value_single(plus)) < 1e-12

    def test_wrong_dimension(self):
        with pytest.raises(DimensionError):
            comb_value_single(make_state(2, [1, 0, 0, 0]))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 100_000))
    def test_nullity_random(self, seed):
        phi = random_state(1, seed)
        assert abs(comb_value_single(phi)) <= 1e-12
        assert abs(comb_value_double(phi)) <= 1e-12


class TestConcurrence:
    def test_product_state(self):
        assert concurrence(make_state(2, [1, 0, 0, 0])) == 0

    def test_bell(self, bell):
        assert concurrence(bell) == pytest.approx(1.0, abs=1e-12)

    def test_partially_entangled(self):
        phi = make_state(2, [np.sqrt(0.8), 0, 0, np.sqrt(0.2)])
        assert concurrence(phi) == pytest.approx(0.8, abs=1e-12)

    def test_against_closed_form(self, conc_oracle):
        for seed in range(100):
            phi = random_state(2, seed)
            assert concurrence(phi) == pytest.approx(conc_oracle(phi), abs=1e-12)

    def test_dimension_error(self, ghz):
        with pytest.raises(DimensionError):
            concurrence(ghz)


class TestThreeTangle:
    def test_ghz(self, ghz):
        assert three_tangle(ghz) == pytest.approx(1.0, abs=1e-10)

    def test_w(self, w):
        assert three_tangle(w) <= 1e-10

    def test_biseparable(self):
        chi = make_state(3, [1, 0, 0, 1, 0, 0, 0, 0], normalize=True)  # |0> x Bell
        assert three_tangle(chi) <= 1e-12

    def test_against_hyperdeterminant(self, tangle_oracle):
        for seed in range(100):
            chi = random_state(3, seed)
            assert three_tangle(chi) == pytest.approx(tangle_oracle(chi), abs=1e-10)

    def test_permutation_invariance(self):
        for seed in range(20):
            chi = random_state(3, seed)
            a = chi.amplitudes.reshape(2, 2, 2)
            for perm in [(1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]:
                permuted = PureState(3, a.transpose(perm).reshape(8), normalized=True)
                assert abs(three_tangle(permuted) - three_tangle(chi)) <= 1e-10

    def test_in_unit_interval(self):
        for seed in range(50):
            assert 0.0 <= three_tangle(random_state(3, seed)) <= 1.0 + 1e-12


class TestNTangle:
    def test_equals_concurrence_squared(self, bell):
        assert n_tangle(bell) == pytest.approx(concurrence(bell) ** 2, abs=1e-12)
        for seed in range(50):
            phi = random_state(2, seed)
            assert n_tangle(phi) == pytest.approx(concurrence(phi) ** 2, abs=1e-12)

    def test_ghz4(self):
        assert n_tangle(ghz_state(4)) == pytest.approx(1.0, abs=1e-12)

    def test_product(self):
        assert n_tangle(make_state(4, [1] + [0] * 15)) == 0

    def test_odd_n_rejected(self, ghz):
        with pytest.raises(ParameterError):
            n_tangle(ghz)


class TestSLInvariance:
    def test_concurrence_polynomial_invariant(self):
        for seed in range(25):
            phi = random_state(2, seed)
            ops = [sample_local_group(LocalKind.SL2C, 900 + 2 * seed + k) for k in range(2)]
            p0 = concurrence_polynomial(phi)
            p1 = concurrence_polynomial(apply_local(phi, ops))
            assert abs(p1 - p0) <= 1e-8 * max(1.0, abs(p0))

    def test_tangle_polynomial_invariant(self):
        for seed in range(25):
            chi = random_state(3, seed)
            ops = [sample_local_group(LocalKind.SL2C, 800 + 3 * seed + k) for k in range(3)]
            p0 = tangle_polynomial(chi)
            p1 = tangle_polynomial(apply_local(chi, ops))
            assert abs(p1 - p0) <= 1e-8 * max(1.0, abs(p0))

    def test_homogeneity_degrees(self):
        lam = 1.37
        phi = random_state(2, 11)
        scaled = PureState(2, lam * phi.amplitudes)
        assert concurrence_polynomial(scaled) == pytest.approx(
            lam ** 2 * concurrence_polynomial(phi), abs=1e-12)
        chi = random_state(3, 11)
        scaled3 = PureState(3, lam * chi.amplitudes)
        assert tangle_polynomial(scaled3) == pytest.approx(
            lam ** 4 * tangle_polynomial(chi), abs=1e-12)

    def test_complex_scaling_modulus(self):
        lam = 0.9 * np.exp(1.3j)
        chi = random_state(3, 5)
        scaled = PureState(3, lam * chi.amplitudes)
        assert abs(tangle_polynomial(scaled)) == pytest.approx(
            abs(lam) ** 4 * abs(tangle_polynomial(chi)), abs=1e-12)


class TestFilterValue:
    def test_tangle_spec_matches_three_tangle(self, ghz, w):
        spec = three_tangle_filter_spec()
        assert abs(filter_value(ghz, spec)) == pytest.approx(1.0, abs=1e-12)
        assert abs(filter_value(w, spec)) <= 1e-12
        for seed in range(20):
            chi = random_state(3, seed)
            assert abs(filter_value(chi, spec)) == pytest.approx(
                three_tangle(chi), abs=1e-10)

    def test_concurrence_spec(self, bell):
        spec = concurrence_filter_spec()
        assert abs(filter_value(bell, spec)) == pytest.approx(1.0, abs=1e-12)

    def test_spec_json_roundtrip(self):
        spec = three_tangle_filter_spec()
        again = FilterSpec.from_json_dict(spec.to_json_dict())
        assert again == spec

    def test_malformed_spec_rejected(self):
        with pytest.raises(FilterSpecError):
            FilterSpec(2, 1, ((None, 2),), ())  # open slot without a pair
        with pytest.raises(FilterSpecError):
            FilterSpec(2, 1, ((2, 2),), ((((0, 0)), ((0, 1))),))  # pairs fixed slots

    def test_state_spec_mismatch(self, bell):
        with pytest.raises(DimensionError):
            filter_value(bell, three_tangle_filter_spec())
