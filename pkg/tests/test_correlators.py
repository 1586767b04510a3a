"""Sequential correlations, induced orderings and permutation covers."""

from itertools import permutations
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import random_involution, random_state
from tempcert import canonical_observables
from tempcert.correlators import (
    induced_orderings,
    permutation_cover,
    pi_correlation,
    pi_correlator,
    seq_correlation,
)
from tempcert.errors import MissingObservableError, NonRealCorrelationError
from tempcert.labels import a, b, n as n_label
from tempcert.model import Realization


class TestInducedOrderings:
    def test_pair(self):
        assert induced_orderings((1, 2)) == {(1, 2), (2, 1)}

    def test_identity_triple(self):
        assert induced_orderings((1, 2, 3)) == {(1, 2, 3), (1, 3, 2), (2, 3, 1), (3, 2, 1)}

    def test_swapped_triple(self):
        # expansion of {M2,{M1,M3}}
        assert induced_orderings((2, 1, 3)) == {(2, 1, 3), (2, 3, 1), (1, 3, 2), (3, 1, 2)}

    @settings(max_examples=50, deadline=None)
    @given(k=st.integers(1, 6), seed=st.integers(0, 10**6))
    def test_count_and_reversal_closure(self, k, seed):
        rng = np.random.default_rng(seed)
        seq = tuple(rng.permutation(k) + 1)
        got = induced_orderings(seq)
        assert len(got) == 1 << (k - 1)
        assert all(tuple(reversed(o)) in got for o in got)
        assert seq in got


class TestPermutationCover:
    def test_two_measurements_need_one_sequence(self):
        assert permutation_cover(2) == ((1, 2),)

    def test_three_measurements_reproduce_the_canonical_pair(self):
        assert permutation_cover(3) == ((1, 2, 3), (2, 1, 3))

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_cover_is_complete_and_small(self, k):
        cover = permutation_cover(k)
        union = set()
        for seq in cover:
            union |= induced_orderings(seq)
        assert union == set(permutations(range(1, k + 1)))
        minimum = -(-factorial(k) // (1 << (k - 1)))
        assert minimum <= len(cover) <= 2 * minimum

    def test_first_sequence_is_identity(self):
        for k in (2, 3, 4, 5):
            assert permutation_cover(k)[0] == tuple(range(1, k + 1))

    def test_factorial_guard(self):
        with pytest.raises(ValueError):
            permutation_cover(9)

    def test_deterministic_across_cache_resets(self):
        before = permutation_cover(4)
        permutation_cover.cache_clear()
        assert permutation_cover(4) == before


class TestPiCorrelator:
    def test_cover_is_a_function_of_the_sorted_multiset(self):
        labs = [n_label(1, 2), a(1), b(3), a(2)]
        one = pi_correlator(labs)
        two = pi_correlator(list(reversed(labs)))
        assert one == two
        assert one.labels == (a(1), a(2), b(3), n_label(1, 2))

    def test_cover_size_floor(self):
        pc = pi_correlator([a(1), a(2), b(3), n_label(1, 2)])
        assert len(pc.cover) >= -(-factorial(4) // 8)

    def test_duplicate_labels_are_counted_over_positions(self):
        rng = np.random.default_rng(41)
        real = _random_realization(rng, 5, [a(1), a(2)])
        pc = pi_correlator([a(1), a(1)])
        assert len(pc.cover[0]) == 2
        # any involution twice averages to <psi|M^2|psi> = 1
        assert abs(pi_correlation(real, pc) - 1.0) < 1e-12
        mixed = pi_correlator([a(2), a(1), a(1)])
        value = pi_correlation(real, mixed)
        assert abs(value) <= 1.0 + 1e-9


def _random_realization(rng, dim, labels):
    return Realization(
        n=3,
        dim=dim,
        state=random_state(rng, dim),
        observables={lab: random_involution(rng, dim) for lab in labels},
    )


class TestSeqCorrelation:
    def test_three_a_sequence_on_canonical(self):
        real = canonical_observables(3)
        assert abs(seq_correlation(real, [a(1), a(2), a(3)]) + 1.0) < 1e-12

    def test_four_body_sequence_on_canonical(self):
        real = canonical_observables(3)
        assert abs(seq_correlation(real, [a(1), a(2), b(3), n_label(1, 2)]) - 1.0) < 1e-12

    def test_length_one_is_plain_expectation(self):
        rng = np.random.default_rng(21)
        real = _random_realization(rng, 5, [a(1)])
        m = real.observables[a(1)]
        want = np.vdot(real.state, m @ real.state).real
        assert abs(seq_correlation(real, [a(1)]) - want) < 1e-12

    def test_missing_label(self):
        real = canonical_observables(3)
        with pytest.raises(MissingObservableError):
            seq_correlation(real, [a(1), a(4)])

    def test_non_hermitian_input_flags_imaginary_value(self):
        real = Realization(
            n=3,
            dim=2,
            state=np.array([1.0, 1.0]) / np.sqrt(2),
            observables={a(1): np.array([[0.0, 1j], [0.0, 0.0]])},
        )
        with pytest.raises(NonRealCorrelationError):
            seq_correlation(real, [a(1)])

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_matches_ordering_sum_oracle(self, k):
        rng = np.random.default_rng(100 + k)
        for _ in range(15):
            dim = int(rng.integers(2, 9))
            labels = [a(i) for i in range(1, k + 1)]
            real = _random_realization(rng, dim, labels)
            got = seq_correlation(real, labels)
            oracle = _ordering_sum_value(real, labels)
            assert abs(got - oracle) < 1e-10
            assert abs(got) <= 1.0 + 1e-9

    def test_magnitude_bounded_by_one(self):
        rng = np.random.default_rng(31)
        labels = [a(1), a(2), b(1), b(2)]
        for _ in range(25):
            real = _random_realization(rng, 6, labels)
            assert abs(seq_correlation(real, labels)) <= 1.0 + 1e-9


def _ordering_sum_value(real, labels) -> float:
    total = 0.0
    for ordering in induced_orderings(tuple(labels)):
        vec = real.state
        for lab in reversed(ordering):
            vec = real.observables[lab] @ vec
        total += np.vdot(real.state, vec).real
    return total / (1 << (len(labels) - 1))


class TestPiCorrelation:
    def test_a_b_b_on_canonical(self):
        real = canonical_observables(3)
        assert abs(pi_correlation(real, pi_correlator([a(1), b(2), b(3)])) - 1.0) < 1e-12

    def test_n_pair_on_canonical(self):
        real = canonical_observables(3)
        pc = pi_correlator([n_label(2, 3), n_label(1, 3)])
        assert abs(pi_correlation(real, pc) - 1.0) < 1e-12

    def test_commuting_multiset_reduces_to_plain_expectation(self):
        rng = np.random.default_rng(17)
        dim = 6
        labels = [a(1), a(2), b(1)]
        diag = {lab: np.diag(np.where(rng.standard_normal(dim) > 0, 1.0, -1.0)).astype(complex) for lab in labels}
        real = Realization(n=3, dim=dim, state=random_state(rng, dim), observables=diag)
        product = np.eye(dim, dtype=complex)
        for lab in labels:
            product = product @ diag[lab]
        want = np.vdot(real.state, product @ real.state).real
        assert abs(pi_correlation(real, pi_correlator(labels)) - want) < 1e-12
