from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpvanish import arithmetic_sets as ar
from fpvanish.errors import CapExceededError, SearchBudgetExceededError

# Minimum sizes, frozen from the independent subset-enumeration oracle
# (acceptance criterion 4 re-derives these live on every run).
MIN_SIZES = {2: 2, 3: 3, 5: 4, 7: 5, 11: 5, 13: 6}


class TestVerifier:
    def test_fpstar_with_centered_exponent(self):
        # (11 - 3) / 2 = 4
        assert ar.is_r_arithmetic(range(1, 11), 4, 11)

    def test_whole_field_always_passes(self):
        for p in (2, 3, 5, 7):
            for r in (1, p - 1):
                assert ar.is_r_arithmetic(range(p), r, p)

    def test_empty_set_fails(self):
        check = ar.is_r_arithmetic([], 1, 5)
        assert not check
        assert check.failing is not None

    def test_failing_element_reported(self):
        check = ar.is_r_arithmetic([1, 2], 1, 7)
        assert not check
        # the reported element really has no valid difference
        a = check.failing
        members = {1, 2}
        lo = -1 if a in members else 1
        assert not any(
            all((a + i * b) % 7 in members for i in range(lo, 2)) for b in range(1, 7)
        )

    def test_r_range_validated(self):
        with pytest.raises(ValueError):
            ar.is_r_arithmetic([0], 0, 5)
        with pytest.raises(ValueError):
            ar.is_r_arithmetic([0], 5, 5)


class TestWitnessTables:
    def test_explicit_proof_witnesses_for_fpstar(self):
        # difference 1 for the missing zero, 2a for a member a
        for p in (5, 7, 11, 13):
            r = (p - 3) // 2
            table = {0: 1, **{a: (2 * a) % p for a in range(1, p)}}
            assert ar.verify_witness_table(range(1, p), r, p, table)

    def test_bad_witness_rejected(self):
        table = {a: 1 for a in range(5)}
        assert not ar.verify_witness_table([1, 2, 3, 4], 1, 5, table)

    def test_arithmetic_set_reverifies_on_construction(self):
        check = ar.is_r_arithmetic([1, 2, 3, 4], 1, 5)
        A = ar.ArithmeticSet(5, 1, frozenset([1, 2, 3, 4]), check.witnesses)
        assert A.size == 4
        broken = dict(check.witnesses)
        broken[0] = 0
        with pytest.raises(ValueError):
            ar.ArithmeticSet(5, 1, frozenset([1, 2, 3, 4]), broken)

    def test_in_out_witness_accessors(self):
        A = ar.ArithmeticSet.verified([1, 2, 3, 4], 1, 5)
        assert A.in_witness(2) != 0
        assert A.out_witness(0) != 0
        with pytest.raises(KeyError):
            A.in_witness(0)
        with pytest.raises(KeyError):
            A.out_witness(2)


class TestMinimization:
    @pytest.mark.parametrize("p,size", sorted(MIN_SIZES.items()))
    def test_frozen_minimum_sizes(self, p, size):
        A = ar.min_arithmetic_set(p)
        assert A.size == size

    def test_lexicographic_tie_break(self):
        # both {0,1,2,3} and {1,2,3,4} are arithmetic mod 5; lex-least wins
        assert ar.min_arithmetic_set(5).sorted_elements() == [0, 1, 2, 3]

    def test_log_lower_bound_holds(self):
        for p, size in MIN_SIZES.items():
            assert size >= ar.log_lower_bound(p)

    def test_cap_violation(self):
        with pytest.raises(CapExceededError):
            ar.min_arithmetic_set(37)

    def test_larger_r_needs_longer_progressions(self):
        # any r-arithmetic set has at least min(2r+1, p) elements
        A = ar.min_arithmetic_set(7, r=2)
        assert A.size >= 5
        assert ar.is_r_arithmetic(A.elements, 2, 7)


class TestTranslationInvariance:
    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([5, 7, 11]), st.integers(0, 10))
    def test_translates_stay_arithmetic(self, p, c):
        A = ar.min_arithmetic_set(p)
        shifted = A.translate(c)
        assert ar.is_r_arithmetic(shifted.elements, 1, p)

    def test_dilations_stay_arithmetic(self):
        A = ar.min_arithmetic_set(11)
        for c in range(1, 11):
            scaled = frozenset((c * a) % 11 for a in A.elements)
            assert ar.is_r_arithmetic(scaled, 1, 11)


class TestSmallSetSearch:
    def test_p5_hits_exact_minimum(self):
        A = ar.find_small_arithmetic_set(5, seed=7)
        assert A.size <= 4

    def test_no_small_set_exists_mod_7(self):
        # 2*floor(log2 7) = 4 but the true minimum is 5; the failure is
        # definitive (the whole space of candidate sizes is enumerated).
        with pytest.raises(SearchBudgetExceededError, match="no arithmetic set"):
            ar.find_small_arithmetic_set(7, seed=7)

    @pytest.mark.parametrize("p", [11, 31, 101, 199])
    def test_target_met_and_verified(self, p):
        A = ar.find_small_arithmetic_set(p, seed=7)
        assert A.size <= 2 * ar.floor_log2(p)
        assert ar.is_r_arithmetic(A.elements, 1, p)

    def test_budget_exhaustion_is_loud(self):
        with pytest.raises(SearchBudgetExceededError):
            ar.find_small_arithmetic_set(151, seed=0, budget=3)

    def test_requires_p_at_least_5(self):
        with pytest.raises(ValueError):
            ar.find_small_arithmetic_set(3)


class TestSmallestSizeDispatch:
    def test_exact_below_cap(self):
        assert ar.smallest_arithmetic_size(5) == 4
        assert ar.smallest_arithmetic_size(13) == 6

    def test_upper_bound_above_cap(self):
        s = ar.smallest_arithmetic_size(101)
        assert s <= 2 * ar.floor_log2(101)
