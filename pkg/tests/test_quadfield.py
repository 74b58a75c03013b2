import math

import pytest
from hypothesis import given, settings, strategies as st

from polya import cf, quadfield as q
from polya.arith import is_squarefree, squarefree_part
from polya.errors import BudgetExceeded, InvalidInput
from polya.oracle import norm_pm2_oracle, smaller_unit_scan, unit_root

SQUAREFREE = [d for d in range(2, 2001) if is_squarefree(d)]


def brute_unit(d, y_cap=10**5):
    """Smallest unit > 1 by scanning y, or None past the cap."""
    den = 2 if d % 4 == 1 else 1
    for y in range(1, y_cap):
        for n in (-1, 1):
            x2 = d * y * y + n * den * den
            x = math.isqrt(x2)
            if x * x == x2 and (x - y) % den == 0:
                while den > 1 and x % 2 == 0 and y % 2 == 0:
                    x, y, den = x // 2, y // 2, den // 2
                return (x, y, den), n
    return None


@pytest.mark.parametrize(
    "d,disc,ram", [(2, 8, (2,)), (5, 5, (5,)), (-5, -20, (2, 5)), (3, 12, (2, 3)), (-1, -4, (2,)), (-3, -3, (3,))]
)
def test_make_field_examples(d, disc, ram):
    F = q.make_field(d)
    assert (F.disc, F.ramified, F.r) == (disc, ram, len(ram))
    assert F.disc % 4 in (0, 1)


@pytest.mark.parametrize("d", [0, 1, 4, 12, -8, 18])
def test_make_field_rejects(d):
    with pytest.raises(InvalidInput):
        q.make_field(d)


@pytest.mark.parametrize(
    "d,unit,norm",
    [
        (2, (1, 1, 1), -1),
        (5, (1, 1, 2), -1),
        (3, (2, 1, 1), 1),
        (10, (3, 1, 1), -1),
        (6, (5, 2, 1), 1),
        (13, (3, 1, 2), -1),
        (94, (2143295, 221064, 1), 1),
        (151, (1728148040, 140634693, 1), 1),
        (661, (1789539, 69605, 2), -1),
        (1621, (4823622127875, 119806883557, 2), -1),
    ],
)
def test_fundamental_unit_frozen(d, unit, norm):
    u = q.fundamental_unit(q.make_field(d))
    assert u.as_tuple() == unit and u.norm == norm
    x, y, den = unit
    assert x * x - d * y * y == norm * den * den


def test_units_match_brute_force_scan():
    for d in SQUAREFREE[:150]:
        found = brute_unit(d)
        if found is None:
            continue
        unit, norm = found
        u = q.fundamental_unit(q.make_field(d))
        assert (u.as_tuple(), u.norm) == (unit, norm), d


def test_units_minimal_up_to_2000():
    for d in SQUAREFREE:
        F = q.make_field(d)
        u = q.fundamental_unit(F)
        assert u.x > 0 and u.y > 0 and u.denom in (1, 2)
        assert unit_root(d, int(u.x), int(u.y), u.denom) is None, d
        if u.y < 3000:
            assert smaller_unit_scan(d, int(u.y), F.half_integral) is None, d


def test_unit_rejects_imaginary():
    with pytest.raises(InvalidInput):
        q.fundamental_unit(q.make_field(-5))


@pytest.mark.parametrize("d,a", [(2, 1), (3, 6), (6, 12), (5, 1), (7, 18), (34, 72)])
def test_a_value_examples(d, a):
    assert q.a_value(q.make_field(d)) == a


def test_a_class_matches_a_value():
    for d in SQUAREFREE[:800]:
        F = q.make_field(d)
        a = q.a_value(F)
        assert a > 0
        assert q.a_class(F) == squarefree_part(a), d


@pytest.mark.parametrize(
    "d,period,a_class,norm",
    [(4097, 3, 1, -1), (8194, 20, 2, 1), (9902449, 1197, 1, -1), (19804898, 12, 2, 1)],
)
def test_family_subfields_frozen(d, period, a_class, norm):
    F = q.make_field(d)
    assert q.cycle(F).length == period
    assert q.a_class(F).value == a_class
    assert q.unit_norm(F) == norm


def test_long_period_unit():
    F = q.make_field(9902449)
    u = q.fundamental_unit(F)
    assert u.norm == -1
    assert u.x * u.x - F.d * u.y * u.y == -(u.denom**2)


@pytest.mark.parametrize("d,h", [(2, 1), (3, 1), (-5, 2), (10, 2), (-1, 1), (-3, 1), (30, 2), (-30, 4)])
def test_hilbert_examples(d, h):
    assert q.hilbert_polya_order(q.make_field(d)) == h


@pytest.mark.parametrize(
    "d,plus2,minus2",
    [(2, True, True), (5, False, False), (7, True, False), (3, False, True), (6, False, True), (17, True, True),
     (14, True, False), (41, True, True), (73, True, True)],
)
def test_norm_pm2_examples(d, plus2, minus2):
    s = q.norm_pm2_solvable(q.make_field(d))
    assert (s.plus2, s.minus2) == (plus2, minus2)
    if s.witness is not None:
        x, y, den = s.witness
        assert x * x - d * y * y == s.witness_norm * den * den


def test_norm_pm2_witness_for_seven():
    s = q.norm_pm2_solvable(q.make_field(7))
    assert s.witness == (3, 1, 1) and s.witness_norm == 2


def test_norm_pm2_agrees_with_ideal_oracle():
    for d in SQUAREFREE[:1000]:
        F = q.make_field(d)
        s = q.norm_pm2_solvable(F)
        assert (s.plus2, s.minus2) == norm_pm2_oracle(F), d


def test_norm_pm2_agrees_with_bounded_scan():
    for d in SQUAREFREE[:300]:
        F = q.make_field(d)
        bound = q.norm_pm2_bound(F)
        if bound > 10**5:
            continue
        found = q.norm_pm2_scan(F, bound)
        s = q.norm_pm2_solvable(F)
        assert (s.plus2, s.minus2) == (found[2] is not None, found[-2] is not None), d


def test_pell_and_order_convention():
    assert q.pell_solution(q.make_field(5)) == (9, 4)
    assert q.pell_solution(q.make_field(2)) == (3, 2)
    assert q.power_in_order(q.make_field(5))[0] == 3
    for d in SQUAREFREE[:400]:
        F = q.make_field(d)
        x, y = q.pell_solution(F)
        assert x * x - d * y * y == 1
        assert q.order_convention_agrees(F), d


def test_walk_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        q.cycle(q.make_field(9902449), max_steps=100)


def test_walk_rejects_square():
    with pytest.raises(ValueError):
        cf.walk(49, 0, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10**6).filter(is_squarefree))
def test_cycle_invariants(d):
    F = q.make_field(d)
    c = q.cycle(F)
    assert 2 * c.mid in (c.length, c.length - 1)
    assert q.unit_norm(F) == (-1) ** c.length
    u = q.fundamental_unit(F)
    assert u.x * u.x - d * u.y * u.y == u.norm * u.denom**2
    assert q.hilbert_polya_order(F) in (1 << (F.r - 1), 1 << max(F.r - 2, 0))


@pytest.mark.parametrize("D,P0,Q0", [(9902449, 1, 2), (19804898, 0, 1), (8194, 0, 1), (1621, 1, 2)])
def test_matrix_path_matches_sequential(monkeypatch, D, P0, Q0):
    c = cf.walk(D, P0, Q0)
    expected = cf.convergent(D, P0, Q0, c.length - 1)
    monkeypatch.setattr(cf, "PY_FAST_STEPS", 4)
    assert cf.convergent(D, P0, Q0, c.length - 1) == expected
