from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpvanish import config
from fpvanish import group_ring as gr
from fpvanish.errors import CapExceededError, PreconditionError
from fpvanish.fp_core import FpMultiset, FpVector, enumerate_vectors

from conftest import random_multiset


def elt(p, n, rng):
    return gr.GroupRingFp(p, n, rng.integers(0, p, size=p**n))


class TestRingAxioms:
    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from([(2, 2), (3, 1), (3, 2), (5, 1)]), st.integers(0, 2**31 - 1))
    def test_convolution_commutes_and_associates(self, pn, seed):
        p, n = pn
        rng = np.random.default_rng(seed)
        a, b, c = (elt(p, n, rng) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)

    def test_unit_is_identity(self, rng):
        a = elt(5, 2, rng)
        one = gr.GroupRingFp.unit(5, 2)
        assert a * one == a

    def test_binomial_matches_general_product(self, rng):
        p, n = 3, 2
        a = elt(p, n, rng)
        v = FpVector(p, (1, 2))
        factor = gr.GroupRingFp.unit(p, n) - gr.GroupRingFp.monomial(v)
        assert a.mul_binomial(v, 1) == a * factor
        assert a.mul_binomial(v, 3) == a * factor * factor * factor

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_binomial_pth_power_vanishes(self, p):
        for v in enumerate_vectors(p, 2):
            if v.is_zero():
                continue
            out = gr.GroupRingFp.unit(p, 2).mul_binomial(v, p)
            assert out.is_zero()


class TestBinomialProductFp:
    def test_p_copies_vanish(self):
        for p in (2, 3, 5):
            V = FpMultiset.from_coords(p, [[1, 0]] * p)
            assert gr.binomial_product_fp(V).is_zero()

    def test_single_factor_support(self):
        V = FpMultiset.from_coords(5, [[1, 0]])
        prod = gr.binomial_product_fp(V)
        assert prod.dump()["coeffs"] == {0: 1, 5: 4}

    def test_p_minus_one_copies_give_all_ones(self):
        V = FpMultiset.from_coords(5, [[1]] * 4)
        prod = gr.binomial_product_fp(V)
        assert np.array_equal(prod.coeffs, np.ones(5, dtype=np.int64))

    def test_r_range_validated(self):
        V = FpMultiset.from_coords(5, [[1]])
        with pytest.raises(ValueError):
            gr.binomial_product_fp(V, r=5)

    def test_cap_violation(self):
        V = FpMultiset.from_coords(2, [[1] * 6])
        with pytest.raises(CapExceededError):
            gr.binomial_product_fp(V, cap=32)


class TestVanishing:
    def test_olson_threshold(self, rng):
        for p, n in ((2, 2), (3, 2), (5, 1)):
            size = (p - 1) * n + 1
            for _ in range(20):
                V = random_multiset(rng, p, n, size)
                assert gr.is_fp_vanishing(V, 1)

    def test_power_threshold(self, rng):
        p, n, r = 5, 2, 2
        size = -(-((p - 1) * n + 1) // r)
        for _ in range(20):
            V = random_multiset(rng, p, n, size)
            assert gr.is_fp_vanishing(V, r)

    def test_single_nonzero_vector_does_not_vanish(self):
        for p in (3, 5):
            V = FpMultiset.from_coords(p, [[1, 1]])
            assert not gr.is_fp_vanishing(V)


class TestExtractIrredundant:
    def test_requires_vanishing_input(self):
        V = FpMultiset.from_coords(5, [[1, 0]])
        with pytest.raises(PreconditionError):
            gr.extract_irredundant_fp(V)

    def test_fixed_point_on_irredundant_input(self):
        V = FpMultiset.from_coords(3, [[1, 0]] * 3)
        assert gr.extract_irredundant_fp(V) == V

    def test_two_p_copies_shrink_to_p(self):
        for p in (2, 3, 5):
            V = FpMultiset.from_coords(p, [[1]] * (2 * p))
            W = gr.extract_irredundant_fp(V)
            assert W.size == p

    def test_extra_vector_removed(self):
        V = FpMultiset.from_coords(3, [[1, 0]] * 3 + [[1, 1]])
        W = gr.extract_irredundant_fp(V)
        assert [v.coords for v in W.entries] == [(1, 0)] * 3

    def test_output_is_irredundant(self, rng):
        for _ in range(15):
            p = int(rng.choice([2, 3, 5]))
            n = int(rng.integers(1, 3))
            V = random_multiset(rng, p, n, (p - 1) * n + 1, nonzero=True)
            W = gr.extract_irredundant_fp(V)
            assert gr.is_fp_irredundant(W)


class TestCyclotomicInt:
    def test_all_root_powers_sum_to_zero(self):
        for p in (2, 3, 5, 7):
            acc = gr.CyclotomicInt.zero(p)
            for t in range(p):
                acc = acc + gr.CyclotomicInt.root_power(p, t)
            assert acc.is_zero()

    def test_root_has_order_p(self):
        for p in (3, 5, 7):
            prod = gr.CyclotomicInt.one(p)
            for _ in range(p):
                prod = prod * gr.CyclotomicInt.root_power(p, 1)
            assert prod == gr.CyclotomicInt.one(p)

    def test_root_shift_is_multiplication(self, rng):
        for p in (3, 5, 7):
            for _ in range(10):
                c = gr.CyclotomicInt(p, [int(x) for x in rng.integers(-9, 10, size=p - 1)])
                t = int(rng.integers(0, p))
                assert c.root_shift(t) == c * gr.CyclotomicInt.root_power(p, t)

    def test_ring_laws(self, rng):
        p = 5
        xs = [
            gr.CyclotomicInt(p, [int(x) for x in rng.integers(-5, 6, size=p - 1)])
            for _ in range(3)
        ]
        a, b, c = xs
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    def test_exact_zero_test(self):
        c = gr.CyclotomicInt(5, (1, 1, 1, 1))
        d = gr.CyclotomicInt.root_power(5, 4)
        assert (c + d).is_zero()


class TestBinomialProductCyc:
    def test_untwisted_single_factor(self):
        V = FpMultiset.from_coords(5, [[1, 0]])
        prod = gr.binomial_product_cyc(V, (0,))
        assert prod.coefficient(FpVector(5, (0, 0))) == gr.CyclotomicInt.one(5)
        assert prod.coefficient(FpVector(5, (1, 0))) == -gr.CyclotomicInt.one(5)

    def test_p2_twisted_pair_vanishes(self):
        V = FpMultiset.from_coords(2, [[1], [1]])
        assert gr.binomial_product_cyc(V, (0, 1)).is_zero()
        assert not gr.binomial_product_cyc(V, (0, 0)).is_zero()

    def test_p3_twisted_triple_vanishes(self):
        V = FpMultiset.from_coords(3, [[1], [1], [1]])
        assert gr.binomial_product_cyc(V, (0, 1, 2)).is_zero()

    def test_twists_must_be_total(self):
        V = FpMultiset.from_coords(3, [[1], [1]])
        with pytest.raises(ValueError):
            gr.binomial_product_cyc(V, (0,))

    def test_object_promotion_stays_exact(self, monkeypatch):
        V = FpMultiset.from_coords(3, [[1], [2], [1], [2]])
        t = (0, 1, 2, 1)
        expected = gr.binomial_product_cyc(V, t, 2)
        monkeypatch.setattr(config, "INT64_SAFE_BOUND", 4)
        promoted = gr.binomial_product_cyc(V, t, 2)
        assert promoted.table.dtype == object
        assert np.array_equal(
            promoted.table.astype(np.int64), expected.table
        )


class TestComplexVanishing:
    def test_too_few_factors_never_vanish(self):
        # fewer than p nonzero factors cannot cover the p points of F_p
        for p in (3, 5):
            V = FpMultiset.from_coords(p, [[1]] * (p - 1))
            assert gr.is_c_vanishing(V) is None

    def test_empty_multiset_is_unit(self):
        V = FpMultiset(3, 1, ())
        assert gr.is_c_vanishing(V) is None

    def test_witness_found_and_least(self):
        V = FpMultiset.from_coords(3, [[1], [1], [1]])
        assert gr.is_c_vanishing(V) == (0, 1, 2)

    def test_methods_agree_exhaustively(self, rng):
        for _ in range(25):
            p = int(rng.choice([2, 3]))
            n = int(rng.integers(1, 3))
            V = random_multiset(rng, p, n, int(rng.integers(1, 4)))
            a = gr.product_twist_verdicts(V, 1)
            b = gr.cover_twist_verdicts(V)
            assert np.array_equal(a, b)
            assert gr.is_c_vanishing(V, method="both") == gr.is_c_vanishing(V, method="product")

    def test_exponent_does_not_change_complex_vanishing(self, rng):
        # the complex group algebra has no nilpotents
        for _ in range(10):
            V = random_multiset(rng, 3, 1, int(rng.integers(1, 4)))
            assert np.array_equal(
                gr.product_twist_verdicts(V, 1), gr.product_twist_verdicts(V, 2)
            )

    def test_zero_vector_entry_vanishes_with_zero_twist(self):
        V = FpMultiset.from_coords(3, [[0], [1]])
        t = gr.is_c_vanishing(V)
        assert t is not None and t[0] == 0

    def test_twist_cap(self):
        V = FpMultiset.from_coords(5, [[1]] * 6)
        with pytest.raises(CapExceededError):
            gr.is_c_vanishing(V, cap=100)


class TestComplexIrredundance:
    def test_minimal_cover_is_irredundant(self):
        V = FpMultiset.from_coords(3, [[1], [1], [1]])
        assert gr.is_c_irredundant(V) is not None

    def test_redundant_family_is_not(self):
        V = FpMultiset.from_coords(2, [[1], [1], [1]])
        # any vanishing witness leaves one hyperplane duplicated
        assert gr.is_c_vanishing(V) is not None
        assert gr.is_c_irredundant(V) is None

    def test_scaling_transport(self, rng):
        for _ in range(10):
            p = int(rng.choice([2, 3]))
            V = random_multiset(rng, p, 2, int(rng.integers(1, 4)), nonzero=True)
            scalars = [int(rng.integers(1, p)) for _ in range(V.size)]
            from fpvanish.fp_core import scale_multiset

            W = scale_multiset(V, scalars)
            t = gr.is_c_vanishing(V)
            if t is not None:
                moved = gr.transport_twists(scalars, t, p)
                assert gr.binomial_product_cyc(W, moved).is_zero()


class TestFourier:
    def test_unit_has_empty_zero_set(self):
        h = gr.GroupRingCyc.unit(3, 2)
        assert gr.fourier_zero_set(h) == ()

    def test_single_twisted_binomial_gives_hyperplane(self):
        p, n = 3, 2
        v = FpVector(p, (1, 2))
        t = 1
        h = gr.GroupRingCyc.unit(p, n).mul_binomial(v, t)
        zeros = set(gr.fourier_zero_set(h))
        expected = {x for x in enumerate_vectors(p, n) if x.dot(v) == (-t) % p}
        assert zeros == expected

    def test_product_zero_set_is_union_of_hyperplanes(self, rng):
        p, n = 3, 2
        for _ in range(10):
            size = int(rng.integers(1, 4))
            V = random_multiset(rng, p, n, size, nonzero=True)
            twists = tuple(int(x) for x in rng.integers(0, p, size=size))
            h = gr.binomial_product_cyc(V, twists)
            zeros = set(gr.fourier_zero_set(h))
            union = set()
            for v, t in zip(V.entries, twists):
                union |= {x for x in enumerate_vectors(p, n) if x.dot(v) == (-t) % p}
            assert zeros == union

    def test_transform_multiplicativity(self, rng):
        # convolution becomes pointwise product after the transform
        p, n = 3, 1
        for _ in range(5):
            t1, t2 = (int(x) for x in rng.integers(0, p, size=2))
            v1 = FpVector(p, (int(rng.integers(0, p)),))
            v2 = FpVector(p, (int(rng.integers(0, p)),))
            h1 = gr.GroupRingCyc.unit(p, n).mul_binomial(v1, t1)
            h2 = gr.GroupRingCyc.unit(p, n).mul_binomial(v2, t2)
            f1 = gr.fourier_transform(h1)
            f2 = gr.fourier_transform(h2)
            f12 = gr.fourier_transform(h1 * h2)
            for x in range(p**n):
                a = gr.CyclotomicInt(p, tuple(int(c) for c in f1[x]))
                b = gr.CyclotomicInt(p, tuple(int(c) for c in f2[x]))
                ab = gr.CyclotomicInt(p, tuple(int(c) for c in f12[x]))
                assert a * b == ab


class TestDebugDump:
    def test_dump_shapes(self):
        V = FpMultiset.from_coords(3, [[1]])
        fp = gr.binomial_product_fp(V)
        assert set(fp.dump()) == {"ring", "coeffs"}
        cyc = gr.binomial_product_cyc(V, (1,))
        dumped = cyc.dump()["coeffs"]
        assert all(isinstance(v, list) for v in dumped.values())
