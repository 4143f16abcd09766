import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setspectra.acceptance import saturated_fixtures, random_saturated
from setspectra.errors import BudgetError, CapacityError, ConsistencyError, ContractError
from setspectra.family import SetFamily, all_k_sets, binomial, canonical_form, is_antichain, is_intersecting, mask_of
from setspectra.spectrum import family_a, family_bp, hilton_milner, star
from setspectra.transversal import (
    TransversalBasis,
    alpha,
    berge_minimal_transversals,
    brute_force_minimal_transversals,
    covering_number,
    find_sunflower,
    full_cover_check,
    is_saturated,
    level,
    level_decomposition,
    level_upto,
    minimal_transversals,
    saturate,
    transversals,
)


def fam(n, sets, k=None):
    return SetFamily.from_sets(n, sets, k)


TRIANGLE = [[1, 2], [1, 3], [2, 3]]


def test_transversal_examples():
    assert transversals(fam(3, [[1]]), 1) == fam(3, [[1]])
    assert transversals(fam(3, [[1, 2]]), 1) == fam(3, [[1], [2]])
    out = transversals(fam(4, TRIANGLE, 2), 2)
    assert level(out, 2) == fam(4, TRIANGLE)
    assert level(out, 1) == fam(4, [])
    assert len(out) == 3


def test_transversals_of_empty_family_are_all_small_sets():
    out = transversals(fam(4, []), 2)
    assert len(out) == 1 + 4 + 6
    assert 0 in out


def test_transversals_cap():
    with pytest.raises(CapacityError) as err:
        transversals(fam(10, []), 3, cap=50)
    assert err.value.partial == 51


def test_levels():
    g = fam(3, [[1], [1, 2], [2, 3]])
    assert level(g, 2) == fam(3, [[1, 2], [2, 3]])
    assert level(fam(3, [[1], [1, 2]]), 3) == fam(3, [])
    hm = minimal_transversals(hilton_milner(9, 3))
    assert level_upto(hm.basis, 2) == fam(9, [[1, 2], [1, 3], [1, 4]])


def test_covering_number():
    assert covering_number(()) == 0
    assert covering_number(fam(3, TRIANGLE)) == 2
    assert covering_number(fam(5, [[1, 2], [3, 4], [5]])) == 3
    with pytest.raises(ContractError):
        covering_number((0, 1))


def test_covering_number_brute_force():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(2, 7)
        sets = tuple({rng.randrange(1, 1 << n) for _ in range(rng.randint(1, 6))})
        expected = next(
            s for s in range(n + 1)
            if any(all(mask_of(c) & x for x in sets) for c in itertools.combinations(range(1, n + 1), s))
        )
        assert covering_number(sets) == expected


class TestSaturation:
    def test_examples(self):
        assert is_saturated(star(5, 2))
        assert not is_saturated(fam(5, [[1, 2], [1, 3]], 2))
        assert is_saturated(family_a(9, 3))

    def test_rejects_non_intersecting(self):
        with pytest.raises(ContractError):
            is_saturated(fam(5, [[1, 2], [3, 4]], 2))
        with pytest.raises(ContractError):
            saturate(fam(5, [[1, 2], [3, 4]], 2))

    def test_rejects_empty(self):
        with pytest.raises(ContractError):
            saturate(SetFamily(5, (), 2))

    def test_greedy_order_is_colex(self):
        # colex visits {1,3} then {2,3} before {1,4}, so the triangle closes first
        assert saturate(fam(4, [[1, 2]], 2)) == fam(4, TRIANGLE, 2)
        assert saturate(fam(7, [[1, 2]], 2)) == fam(7, TRIANGLE, 2)

    def test_fixed_points(self):
        assert saturate(family_a(9, 3)) == family_a(9, 3)
        assert saturate(fam(4, TRIANGLE, 2)) == fam(4, TRIANGLE, 2)

    def test_saturate_hm_seed_from_star_side(self):
        seed = fam(7, [[1, 2, 3], [1, 4, 5]], 3)
        out = saturate(seed)
        assert set(seed.sets) <= set(out.sets)
        assert is_saturated(out)


@st.composite
def intersecting_seed(draw):
    n = draw(st.integers(5, 9))
    k = draw(st.integers(2, (n - 1) // 2))
    pool = all_k_sets(n, k)
    first = draw(st.sampled_from(pool))
    extra = draw(st.lists(st.sampled_from(pool), max_size=4))
    chosen = [first]
    for g in extra:
        if g not in chosen and all(g & f for f in chosen):
            chosen.append(g)
    return SetFamily(n, tuple(chosen), k)


@settings(max_examples=60, deadline=None)
@given(intersecting_seed())
def test_saturate_extensive_and_idempotent(seed):
    out = saturate(seed)
    assert set(seed.sets) <= set(out.sets)
    assert is_intersecting(out)
    assert is_saturated(out)
    assert saturate(out) == out


class TestBasis:
    def test_star(self):
        b = minimal_transversals(star(7, 3))
        assert b.basis == fam(7, [[1]])
        assert b.t == 1 and b.tau == 1

    def test_a(self):
        b = minimal_transversals(family_a(9, 3))
        assert b.basis == fam(9, TRIANGLE)
        assert (b.t, b.tau) == (2, 2)

    def test_b3(self):
        b = minimal_transversals(family_bp(9, 4, 3))
        assert b.basis == SetFamily(9, tuple(all_k_sets(5, 3)))
        assert b.t == 3

    def test_hm(self):
        b = minimal_transversals(hilton_milner(9, 3))
        assert b.basis == fam(9, [[1, 2], [1, 3], [1, 4], [2, 3, 4]])

    def test_json(self):
        b = minimal_transversals(family_a(9, 3))
        assert b.to_json() == {"basis": TRIANGLE, "t": 2, "tau": 2}

    def test_unsaturated_names_witness(self):
        with pytest.raises(ContractError, match=r"\{2,3\}"):
            minimal_transversals(fam(5, [[1, 2], [1, 3]], 2))

    def test_constructor_rejects_tau_mismatch(self):
        with pytest.raises(ConsistencyError, match="intersecting antichain"):
            TransversalBasis(fam(4, [[1], [2, 3]]), 3)
        with pytest.raises(ConsistencyError, match="covering number"):
            TransversalBasis(fam(4, [[1, 2], [1, 3]]), 2)

    def test_berge_matches_brute_force_on_fixtures(self):
        for label, f in saturated_fixtures(max_n=11, seeds=2):
            assert berge_minimal_transversals(f.sets, f.k) == brute_force_minimal_transversals(f, f.k), label

    def test_berge_matches_brute_force_random_families(self):
        rng = random.Random(5)
        for _ in range(40):
            n = rng.randint(3, 8)
            k = rng.randint(1, n)
            sets = [rng.randrange(1, 1 << n) for _ in range(rng.randint(1, 6))]
            g = SetFamily(n, tuple(set(sets)))
            assert berge_minimal_transversals(g.sets, k) == brute_force_minimal_transversals(g, k)

    def test_basis_guarantees_on_fixtures(self):
        for label, f in saturated_fixtures(max_n=10, seeds=2):
            b = minimal_transversals(f)
            sets = b.basis.sets
            assert is_intersecting(sets) and is_antichain(sets), label
            closure = tuple(h for h in all_k_sets(f.n, f.k) if any(x & h == x for x in sets))
            assert closure == f.sets, label
            assert find_sunflower(b.basis, f.k + 1) is None, label
            assert covering_number(sets) == b.t, label
            for ell in range(1, f.k + 1):
                lev = level(b.basis, ell)
                if lev.sets and find_sunflower(lev, f.k + 1) is None:
                    assert len(lev) <= math.factorial(ell) * f.k**ell


class TestSunflower:
    def test_examples(self):
        s = find_sunflower(fam(4, [[1, 2], [1, 3], [1, 4]]), 3)
        assert s.center == mask_of([1])
        assert find_sunflower(fam(3, TRIANGLE), 3) is None
        s = find_sunflower(fam(6, [[1, 2], [3, 4], [5, 6]]), 3)
        assert s.center == 0 and len(s.petals) == 3

    def test_petals_share_only_center(self):
        f = fam(8, [[1, 2, 3], [1, 2, 4], [1, 5, 6], [1, 7, 8], [2, 5, 7]])
        s = find_sunflower(f, 3)
        assert s is not None
        for a, b in itertools.combinations(s.petals.sets, 2):
            assert a & b == s.center
        assert is_antichain(s.petals)

    def test_brute_force_agreement(self):
        rng = random.Random(9)
        for _ in range(60):
            n = rng.randint(3, 7)
            k = rng.randint(1, 3)
            pool = all_k_sets(n, k)
            f = SetFamily(n, tuple(rng.sample(pool, rng.randint(1, min(8, len(pool))))))
            for p in (2, 3):
                exists = any(
                    len({a & b for a, b in itertools.combinations(c, 2)}) == 1
                    for c in itertools.combinations(f.sets, p)
                )
                assert (find_sunflower(f, p) is not None) == exists

    def test_budget(self):
        f = SetFamily(9, tuple(all_k_sets(9, 3)))
        with pytest.raises(BudgetError):
            find_sunflower(f, 4, max_nodes=5)


class TestLevels:
    def test_a_single_level(self):
        a = family_a(9, 3)
        blocks = level_decomposition(a, minimal_transversals(a))
        assert blocks[2] == a
        assert len(blocks[3]) == 0

    def test_star(self):
        s = star(7, 3)
        blocks = level_decomposition(s, minimal_transversals(s))
        assert blocks[1] == s

    def test_hm(self):
        h = hilton_milner(9, 3)
        blocks = level_decomposition(h, minimal_transversals(h))
        assert blocks[3] == fam(9, [[2, 3, 4]], 3)
        assert len(blocks[2]) == len(h) - 1

    def test_blocks_partition(self):
        for label, f in saturated_fixtures(max_n=10, seeds=1):
            blocks = level_decomposition(f, minimal_transversals(f))
            merged = sorted(s for blk in blocks.values() for s in blk.sets)
            assert tuple(merged) == f.sets, label

    def test_member_without_basis_set(self):
        b = minimal_transversals(family_a(9, 3))
        with pytest.raises(ContractError):
            level_decomposition(fam(9, [[4, 5, 6]], 3), b)


class TestAlpha:
    def test_examples(self):
        assert alpha(minimal_transversals(family_a(9, 3))) == 2
        assert alpha(minimal_transversals(family_bp(9, 4, 3))) == 3
        assert alpha(minimal_transversals(hilton_milner(9, 3))) == 3

    def test_triangle_at_level_two_means_a(self):
        # covering number 2 on the pair level forces the family to be A
        for label, f in saturated_fixtures(max_n=11, seeds=3):
            b = minimal_transversals(f)
            if b.t >= 2 and covering_number(level(b.basis, 2)) == 2:
                assert canonical_form(f) == canonical_form(family_a(f.n, f.k)), label

    def test_star_rejected(self):
        with pytest.raises(ContractError, match="star"):
            alpha(minimal_transversals(star(7, 3)))


def test_k2_intersecting_families_are_stars_or_triangles():
    for n in range(3, 7):
        pairs = all_k_sets(n, 2)
        for r in range(1, len(pairs) + 1):
            for combo in itertools.combinations(pairs, r):
                if not is_intersecting(combo):
                    continue
                common = combo[0]
                for c in combo:
                    common &= c
                triangle = r == 3 and bin(combo[0] | combo[1] | combo[2]).count("1") == 3
                assert common or triangle, combo


def test_random_saturated_fixtures_are_saturated():
    for seed in range(5):
        f = random_saturated(11, 4, seed)
        assert is_saturated(f)
        assert len(f) <= binomial(10, 3)


def test_full_cover_check():
    assert full_cover_check(star(7, 3)) is None
    assert full_cover_check(family_a(9, 3)) is None
    assert full_cover_check(fam(3, TRIANGLE, 2)) == {"size": 3, "bound": "4", "pass": True}
    fano = fam(7, [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]], 3)
    assert full_cover_check(fano) == {"size": 7, "bound": "27", "pass": True}
    b3 = family_bp(9, 3, 3)
    assert full_cover_check(b3)["pass"]
