"""Quadratic fields Q(sqrt d): discriminants, ramification, fundamental units,
the a-values used for H[2], norm +-2 solvability and Hilbert's formula for the
order of the Polya group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import cf
from .arith import factor, is_squarefree, squarefree_part
from .errors import InconsistencyError, InvalidInput
from .sqclass import IDENTITY, SquareClass


@dataclass(frozen=True)
class QuadraticField:
    d: int
    disc: int
    ramified: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.ramified)

    @property
    def is_real(self) -> bool:
        return self.d > 0

    @property
    def half_integral(self) -> bool:
        """True when the ring of integers is Z[(1 + sqrt d)/2]."""
        return self.d % 4 == 1


@lru_cache(maxsize=8192)
def make_field(d: int) -> QuadraticField:
    d = int(d)
    if d in (0, 1):
        raise InvalidInput(f"d = {d} does not define a quadratic field")
    if not is_squarefree(d):
        raise InvalidInput(f"d = {d} is not squarefree")
    disc = d if d % 4 == 1 else 4 * d
    return QuadraticField(d, disc, factor(disc).primes)


def _require_real(field: QuadraticField):
    if field.d <= 1:
        raise InvalidInput(f"need a real quadratic field, got d = {field.d}")


def _expansion(field: QuadraticField) -> tuple[int, int, int]:
    # (P0, Q0) = (0, 1) expands sqrt d; (1, 2) expands (1 + sqrt d)/2
    return (field.d, 1, 2) if field.half_integral else (field.d, 0, 1)


def cycle(field: QuadraticField, watch: int | None = None, max_steps: int = cf.DEFAULT_MAX_STEPS) -> cf.Cycle:
    _require_real(field)
    D, P0, Q0 = _expansion(field)
    return cf.walk(D, P0, Q0, watch, max_steps)


@dataclass(frozen=True)
class FundamentalUnit:
    """The unit (x + y sqrt d)/denom.  Huge units carry gmpy2.mpz coordinates."""

    d: int
    x: int
    y: int
    denom: int
    norm: int

    @property
    def trace(self) -> int:
        return 2 * self.x // self.denom

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.denom)


def _normalize(x, y, den):
    while den > 1 and x % 2 == 0 and y % 2 == 0:
        x, y, den = x // 2, y // 2, den // 2
    return x, y, den


def _check_unit(d, x, y, den, norm):
    if x * x - d * y * y != norm * den * den:
        raise InconsistencyError(f"({x} + {y} sqrt {d})/{den} does not have norm {norm}")


def unit_norm(field: QuadraticField, max_steps: int = cf.DEFAULT_MAX_STEPS) -> int:
    """Norm of the fundamental unit, read off the parity of the period."""
    return -1 if cycle(field, max_steps=max_steps).length % 2 else 1


@lru_cache(maxsize=4096)
def fundamental_unit(field: QuadraticField, max_steps: int = cf.DEFAULT_MAX_STEPS) -> FundamentalUnit:
    _require_real(field)
    D, P0, Q0 = _expansion(field)
    c = cf.walk(D, P0, Q0, None, max_steps)
    G, q = cf.convergent(D, P0, Q0, c.length - 1)
    norm = -1 if c.length % 2 else 1
    x, y, den = _normalize(G, q, Q0)
    _check_unit(field.d, x, y, den, norm)
    return FundamentalUnit(field.d, x, y, den, norm)


def a_value(field: QuadraticField) -> int:
    """1 when the unit has norm -1, else N(u + 1) = 2 + Tr(u)."""
    u = fundamental_unit(field)
    if u.norm == -1:
        return 1
    return 2 + u.trace


def a_class(field: QuadraticField, max_steps: int = cf.DEFAULT_MAX_STEPS) -> SquareClass:
    """Square class of :func:`a_value` without building the unit.

    For an even period 2m the convergent eta at index m-1 generates an
    ambiguous principal ideal, and the unit is +-eta/eta'.  In the + case
    N(1 + u) = Tr(eta)^2 / N(eta); in the - case it is d * (2q)^2 / -N(eta)
    up to squares.  Since a > 0 the sign of N(eta) tells the cases apart.
    """
    c = cycle(field, max_steps=max_steps)
    if c.length % 2:
        return IDENTITY
    if c.mid_q % c.Q0:
        raise InconsistencyError(f"midpoint Q = {c.mid_q} not divisible by {c.Q0}")
    n_eta = (-1) ** c.mid * (c.mid_q // c.Q0)
    target = n_eta if n_eta > 0 else field.d * -n_eta
    return squarefree_part(target, known_primes=field.ramified)


def hilbert_polya_order(field: QuadraticField) -> int:
    if field.d > 0 and unit_norm(field) == 1:
        e = field.r - 2
    else:
        e = field.r - 1
    if e < 0:
        raise InconsistencyError(f"negative exponent {e} for d = {field.d}")
    return 1 << e


def mul_units(d: int, a: tuple, b: tuple) -> tuple:
    (x1, y1, n1), (x2, y2, n2) = a, b
    return _normalize(x1 * x2 + d * y1 * y2, x1 * y2 + x2 * y1, n1 * n2)


def power_in_order(field: QuadraticField) -> tuple[int, FundamentalUnit]:
    """Smallest power u^k (k in 1, 2, 3) of the fundamental unit lying in Z[sqrt d].

    This is the fundamental unit of Z[sqrt d]: k = 1 unless the unit is
    half-integral, and then k = 3 (k = 2 never suffices).
    """
    u = fundamental_unit(field)
    cur = u.as_tuple()
    k = 1
    while cur[2] != 1:
        cur = mul_units(field.d, cur, u.as_tuple())
        k += 1
    return k, FundamentalUnit(field.d, cur[0], cur[1], 1, u.norm**k)


def pell_solution(field: QuadraticField) -> tuple[int, int]:
    """Least solution x, y > 0 of x^2 - d y^2 = 1."""
    _, v = power_in_order(field)
    if v.norm == 1:
        return v.x, v.y
    w = mul_units(field.d, v.as_tuple(), v.as_tuple())
    return w[0], w[1]


def order_convention_agrees(field: QuadraticField) -> bool:
    """Do the maximal-order unit and the Z[sqrt d] unit give the same [a]?"""
    u = fundamental_unit(field)
    _, v = power_in_order(field)
    a_u = 1 if u.norm == -1 else 2 + u.trace
    a_v = 1 if v.norm == -1 else 2 + v.trace
    return squarefree_part(a_u, field.ramified) == squarefree_part(a_v, field.ramified)


@dataclass(frozen=True)
class NormTwoSolvability:
    plus2: bool
    minus2: bool
    witness: tuple[int, int, int] | None = None
    witness_norm: int | None = None

    @property
    def solvable(self) -> bool:
        return self.plus2 or self.minus2


def norm_pm2_scan(field: QuadraticField, y_max: int) -> dict[int, tuple[int, int, int] | None]:
    """Exhaustive search for elements of norm +2 and -2 with 0 <= y <= y_max.

    In the half-integral case an element (x + y sqrt d)/2 has norm
    (x^2 - d y^2)/4, so we look for x^2 - d y^2 = +-8 with x = y (mod 2).
    """
    d = field.d
    den = 2 if field.half_integral else 1
    found: dict[int, tuple[int, int, int] | None] = {2: None, -2: None}
    for y in range(y_max + 1):
        for n in (2, -2):
            if found[n] is not None:
                continue
            x2 = d * y * y + n * den * den
            if x2 < 0:
                continue
            x = math.isqrt(x2)
            if x * x == x2 and (x - y) % den == 0:
                found[n] = _normalize(x, y, den)
        if all(found.values()):
            break
    return found


def norm_pm2_bound(field: QuadraticField) -> int:
    """Bound on y below which a solution of norm +-2 must appear if one exists.

    Nagell: if x^2 - d y^2 = N is solvable then it has a solution with
    y^2 <= y1^2 |N| / (2 (x1 + 1)) for N > 0, or y1^2 |N| / (2 (x1 - 1)) for
    N < 0, where (x1, y1) is the least Pell solution.  The half-integral scan
    works with |N| = 8.
    """
    x1, y1 = pell_solution(field)
    n = 8 if field.half_integral else 2
    return max(math.isqrt(y1 * y1 * n // (2 * (x1 + 1))), math.isqrt(y1 * y1 * n // (2 * (x1 - 1))))


SMALL_DISC_FALLBACK = 64


def norm_pm2_solvable(field: QuadraticField, with_witness: bool = True) -> NormTwoSolvability:
    """Decide whether O_K contains elements of norm +2 and of norm -2.

    An element of norm +-2 generates an ideal of norm 2.  When |N| = 2 is
    below sqrt(disc)/2 such an ideal is reduced, so it is principal exactly
    when it shows up in the principal cycle, with generator norm
    (-1)^(k+1) Q_{k+1}/Q0.  Odd periods supply both signs.  Small
    discriminants fall back to exhaustive search bounded via the unit.
    """
    _require_real(field)
    if field.disc <= SMALL_DISC_FALLBACK:
        found = norm_pm2_scan(field, norm_pm2_bound(field))
        wn = 2 if found[2] else (-2 if found[-2] else None)
        return NormTwoSolvability(found[2] is not None, found[-2] is not None, found[wn] if wn else None, wn)
    D, P0, Q0 = _expansion(field)
    c = cf.walk(D, P0, Q0, 2 * Q0)
    if c.watch_index is None:
        return NormTwoSolvability(False, False)
    sign = (-1) ** (c.watch_index + 1)
    both = c.length % 2 == 1
    witness = None
    if with_witness:
        G, q = cf.convergent(D, P0, Q0, c.watch_index)
        witness = _normalize(G, q, Q0)
        x, y, den = witness
        if x * x - field.d * y * y != 2 * sign * den * den:
            raise InconsistencyError(f"witness {witness} for d = {field.d} has wrong norm")
    return NormTwoSolvability(sign > 0 or both, sign < 0 or both, witness, 2 * sign if with_witness else None)
