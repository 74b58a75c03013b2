from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from polya.arith import squarefree_part
from polya.sqclass import IDENTITY, SquareClass, contains, sq_mul, subgroup_generated

SMALL_PRIMES = [p for p in range(2, 100) if all(p % q for q in range(2, p))]


def sc(n):
    return squarefree_part(n)


def brute_products(gens):
    out = set()
    for k in range(len(gens) + 1):
        for combo in combinations(gens, k):
            v = 1
            for g in combo:
                v *= g.value
            out.add(sc(v))
    return out


classes = st.builds(
    lambda sign, ps: SquareClass(sign, tuple(sorted(set(ps)))),
    st.sampled_from([1, -1]),
    st.lists(st.sampled_from(SMALL_PRIMES), max_size=4),
)


@pytest.mark.parametrize("a,b,want", [(2, 2, 1), (2, 3, 6), (6, 10, 15), (-3, -6, 2)])
def test_mul_examples(a, b, want):
    assert sq_mul(sc(a), sc(b)).value == want


def test_identity_and_str():
    assert IDENTITY.is_identity() and str(sc(-6)) == "[-6]"
    assert not sc(-1).is_identity()


@pytest.mark.parametrize("sign,primes", [(2, ()), (1, (3, 2)), (1, (1,)), (1, (5, 5))])
def test_invalid_classes(sign, primes):
    with pytest.raises(ValueError):
        SquareClass(sign, primes)


def test_from_squarefree():
    assert SquareClass.from_squarefree(-30, [5, 3, 2]) == SquareClass(-1, (2, 3, 5))
    with pytest.raises(ValueError):
        SquareClass.from_squarefree(30, [2, 3])


@given(classes, classes, classes)
def test_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * a == IDENTITY
    assert a * IDENTITY == a


@pytest.mark.parametrize(
    "gens,rank",
    [([1], 0), ([2, 3, 6], 2), ([2, 4097], 2), ([2, 9902449], 2), ([-1, 2, -2], 2), ([], 0)],
)
def test_subgroup_examples(gens, rank):
    S = subgroup_generated([sc(g) for g in gens])
    assert S.rank == rank and S.order == 2**rank


def test_family_generators_have_order_four():
    for P in (15, 4097, 9902449, 798729815862670961):
        S = subgroup_generated([sc(2), SquareClass(1, (17, 241, 15913, 12251291401)) if P > 10**12 else sc(P)])
        assert S.order == 4


@pytest.mark.parametrize(
    "gens,c,want", [([2, 4097], 8194, True), ([2], 3, False), ([2, 15], 30, True), ([2, 15], -30, False)]
)
def test_contains_examples(gens, c, want):
    S = subgroup_generated([sc(g) for g in gens])
    assert contains(S, sc(c)) is want
    assert (sc(c) in S) is want


@given(st.lists(classes, max_size=6), classes)
def test_rank_and_membership_match_brute_force(gens, c):
    S = subgroup_generated(gens)
    elems = brute_products(gens)
    assert 2**S.rank == len(elems)
    assert set(S.elements()) == elems
    assert contains(S, c) == (c in elems)
