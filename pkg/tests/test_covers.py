from __future__ import annotations

import pytest

from fpvanish import covers as cv
from fpvanish import group_ring as gr
from fpvanish.arithmetic_sets import smallest_arithmetic_size
from fpvanish.errors import CapExceededError, PreconditionError
from fpvanish.fp_core import FpMultiset, FpVector

from conftest import random_multiset


@pytest.fixture
def z2sq():
    return cv.AbelianGroup((2, 2))


def three_coset_cover(z2sq):
    """The classical irredundant cover of Z_2^2 by its three order-2 subgroups."""
    subs = [H for H in z2sq.subgroups() if H.order == 2]
    assert len(subs) == 3
    h1, h2, h3 = subs
    # translate the second and third so the union covers all four elements
    for y in z2sq.elements():
        for z in z2sq.elements():
            cover = cv.CosetCover(z2sq, ((h1, 0), (h2, y), (h3, z)))
            if cv.is_irredundant_cover(cover):
                return cover
    raise AssertionError("no irredundant translate combination found")


class TestAbelianGroup:
    def test_from_orders_splits_composites(self):
        g = cv.AbelianGroup.from_orders([6, 4])
        assert g.factors == (2, 3, 4)
        assert g.order == 24

    def test_rejects_non_prime_power_factor(self):
        with pytest.raises(ValueError):
            cv.AbelianGroup((6,))

    def test_element_arithmetic(self):
        g = cv.AbelianGroup((2, 4))
        a = g.encode((1, 3))
        b = g.encode((1, 2))
        assert g.decode(g.add(a, b)) == (0, 1)
        assert g.decode(g.neg(a)) == (1, 1)

    def test_subgroup_counts(self):
        assert len(cv.AbelianGroup((4,)).subgroups()) == 3
        assert len(cv.AbelianGroup((2, 2)).subgroups()) == 5
        assert len(cv.AbelianGroup((2, 2, 2)).subgroups()) == 16

    def test_maximal_subgroups(self, z2sq):
        assert len(z2sq.maximal_subgroups()) == 3
        assert len(cv.AbelianGroup((4,)).maximal_subgroups()) == 1

    def test_frattini(self, z2sq):
        assert sorted(cv.AbelianGroup((4,)).frattini().elements) == [0, 2]
        assert sorted(z2sq.frattini().elements) == [0]

    def test_subgroup_enumeration_cap(self):
        with pytest.raises(CapExceededError):
            cv.AbelianGroup((64,)).subgroups()


class TestCoverPredicates:
    def test_whole_group_single_coset(self, z2sq):
        whole = cv.Subgroup(z2sq, frozenset(z2sq.elements()))
        C = cv.CosetCover(z2sq, ((whole, 0),))
        assert cv.is_cover(C) and cv.is_irredundant_cover(C)

    def test_all_singletons(self, z2sq):
        triv = cv.Subgroup(z2sq, frozenset({0}))
        C = cv.CosetCover(z2sq, tuple((triv, x) for x in z2sq.elements()))
        assert cv.is_cover(C) and cv.is_irredundant_cover(C)

    def test_three_coset_cover(self, z2sq):
        C = three_coset_cover(z2sq)
        assert cv.is_cover(C)
        assert cv.is_irredundant_cover(C)
        assert cv.is_efficient_cover(C)
        assert cv.intersection_subgroup(C).order == 1
        assert cv.index(z2sq, cv.intersection_subgroup(C)) == 4

    def test_non_cover_detected(self, z2sq):
        triv = cv.Subgroup(z2sq, frozenset({0}))
        C = cv.CosetCover(z2sq, ((triv, 0), (triv, 1)))
        assert not cv.is_cover(C)


class TestShrink:
    def test_irredundant_input_unchanged(self, z2sq):
        C = three_coset_cover(z2sq)
        assert cv.shrink_to_irredundant(C).size == C.size

    def test_duplicate_coset_removed(self, z2sq):
        C = three_coset_cover(z2sq)
        padded = cv.CosetCover(z2sq, C.cosets + (C.cosets[0],))
        shrunk = cv.shrink_to_irredundant(padded)
        assert shrunk.size == 3
        assert cv.is_irredundant_cover(shrunk)

    def test_random_redundant_covers(self, rng):
        g = cv.AbelianGroup((2, 2, 2))
        cosets = cv._all_cosets(g, g.subgroups())
        for _ in range(10):
            picks = rng.choice(len(cosets), size=6, replace=False)
            family = tuple((cosets[i][0], cosets[i][1]) for i in picks)
            C = cv.CosetCover(g, family)
            if not cv.is_cover(C):
                continue
            shrunk = cv.shrink_to_irredundant(C)
            assert cv.is_irredundant_cover(shrunk)

    def test_requires_cover(self, z2sq):
        triv = cv.Subgroup(z2sq, frozenset({0}))
        with pytest.raises(PreconditionError):
            cv.shrink_to_irredundant(cv.CosetCover(z2sq, ((triv, 0),)))


class TestIntersectionAndClaim:
    def test_single_coset_whole_group(self, z2sq):
        whole = cv.Subgroup(z2sq, frozenset(z2sq.elements()))
        C = cv.CosetCover(z2sq, ((whole, 0),))
        assert cv.intersection_subgroup(C).order == 4
        assert cv.index(z2sq, cv.intersection_subgroup(C)) == 1
        # k = 1: the complement intersection is the whole group by convention
        assert cv.check_subcover_claim(C)

    def test_all_singletons_trivial_intersection(self, z2sq):
        triv = cv.Subgroup(z2sq, frozenset({0}))
        C = cv.CosetCover(z2sq, tuple((triv, x) for x in z2sq.elements()))
        assert cv.intersection_subgroup(C).order == 1
        assert cv.index(z2sq, cv.intersection_subgroup(C)) == 4

    def test_claim_on_all_z4_covers_up_to_size_4(self):
        g = cv.AbelianGroup((4,))
        seen = 0
        for C in cv.enumerate_irredundant_covers(g, 4):
            seen += 1
            assert cv.check_subcover_claim(C)
        assert seen > 0

    def test_claim_requires_irredundant(self, z2sq):
        triv = cv.Subgroup(z2sq, frozenset({0}))
        whole = cv.Subgroup(z2sq, frozenset(z2sq.elements()))
        C = cv.CosetCover(z2sq, ((whole, 0), (triv, 1)))
        with pytest.raises(PreconditionError):
            cv.check_subcover_claim(C)


class TestPhi:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_cyclic_prime(self, p):
        k, cover = cv.phi_exact(cv.AbelianGroup((p,)))
        assert k == p
        assert cv.is_irredundant_cover(cover)
        assert cv.intersection_subgroup(cover).order == 1

    def test_klein_four(self, z2sq):
        assert cv.phi_exact(z2sq)[0] == 3

    def test_phi_at_least_largest_prime_divisor(self):
        for factors in [(2, 3), (9,), (3, 3), (2, 5)]:
            g = cv.AbelianGroup(factors)
            k, _ = cv.phi_exact(g)
            assert k >= max(g.prime_divisors())

    def test_cap(self):
        with pytest.raises(CapExceededError):
            cv.phi_exact(cv.AbelianGroup((5, 5)))

    def test_maximal_variant(self):
        assert cv.phi_pn_maximal(2, 2)[0] == 3
        assert cv.phi_pn_maximal(2, 1)[0] == 2
        assert cv.phi_pn_maximal(3, 2)[0] == 4

    def test_maximal_bound_holds(self):
        for p, n in ((2, 2), (2, 3), (3, 2)):
            k, _ = cv.phi_pn_maximal(p, n)
            s = smallest_arithmetic_size(p)
            assert s**k >= p**n

    def test_efficient_cover_existence(self):
        assert cv.find_efficient_cover(cv.AbelianGroup((4,))) is None
        assert cv.find_efficient_cover(cv.AbelianGroup((2, 4))) is None
        got = cv.find_efficient_cover(cv.AbelianGroup((3, 3)))
        assert got is not None and cv.is_efficient_cover(got)


class TestHyperplaneInstances:
    def test_round_trip(self, rng):
        for _ in range(10):
            p = int(rng.choice([2, 3, 5]))
            n = int(rng.integers(1, 3))
            size = int(rng.integers(1, 4))
            V = random_multiset(rng, p, n, size, nonzero=True)
            t = tuple(int(x) for x in rng.integers(0, p, size=size))
            H = cv.multiset_to_hyperplane_cover(V, t)
            V2, t2 = cv.hyperplane_cover_to_multiset(H)
            assert V2 == V and t2 == t

    def test_zero_normal_rejected(self):
        V = FpMultiset.from_coords(3, [[0, 0]])
        with pytest.raises(ValueError):
            cv.multiset_to_hyperplane_cover(V, (0,))

    def test_covering_iff_product_vanishes(self, rng):
        for _ in range(20):
            p = int(rng.choice([2, 3]))
            n = int(rng.integers(1, 3))
            size = int(rng.integers(1, 5))
            V = random_multiset(rng, p, n, size, nonzero=True)
            t = tuple(int(x) for x in rng.integers(0, p, size=size))
            H = cv.multiset_to_hyperplane_cover(V, t)
            assert H.is_cover() == gr.binomial_product_cyc(V, t).is_zero()

    def test_codim_bound_on_minimal_covers(self):
        for p, n in ((2, 2), (3, 2)):
            s = smallest_arithmetic_size(p)
            for H in cv.enumerate_irredundant_hyperplane_covers(p, n, max_size=p + 1):
                assert cv.check_codim_bound(H, s)

    def test_codim_bound_requires_cover(self):
        V = FpMultiset.from_coords(3, [[1, 0]])
        H = cv.multiset_to_hyperplane_cover(V, (0,))
        with pytest.raises(PreconditionError):
            cv.check_codim_bound(H, 3)

    def test_shrink(self):
        # three parallel lines cover F_3; adding a fourth line stays a cover
        V = FpMultiset.from_coords(3, [[1], [1], [1], [2]])
        H = cv.multiset_to_hyperplane_cover(V, (0, 1, 2, 1))
        shrunk = H.shrink_to_irredundant()
        assert shrunk.is_irredundant_cover()
        assert shrunk.size == 3


class TestSerialization:
    def test_cover_roundtrip(self, z2sq):
        C = three_coset_cover(z2sq)
        data = C.to_dict()
        C2 = cv.CosetCover.from_dict(data)
        assert cv.is_irredundant_cover(C2)
        assert sorted(C2.canonical_keys()) == sorted(C.canonical_keys())


class TestGroupCatalog:
    def test_counts_match_partition_numbers(self):
        factors = cv.abelian_groups_up_to(16)
        # orders 2..16: 1,1,2,1,1,1,3,2,1,1,2,1,1,1,5 groups
        assert len(factors) == 24
        assert factors.count((2, 2, 2, 2)) == 1
        assert (4, 4) in factors
