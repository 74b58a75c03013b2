"""Totally real bi-quadratic fields Q(sqrt m1, sqrt m2) and the order of their
Polya group.

The order comes from Zantema's exact sequence

    0 -> H^1(G, O_K^*) -> (+)_p Z/e_p Z -> Po(K) -> 0,

so |Po(K)| = prod(e_p) / |H^1|.  |H^1| is |H[2]| times an index in {1, 2};
H[2] is the subgroup of Q*/(Q*)^2 generated by the three subfield radicands
and the three a-values, and the index is 2 exactly when 2 is totally ramified
and every subfield has an element of norm +-2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import quadfield
from .arith import is_squarefree, isqrt, squarefree_part
from .errors import InconsistencyError, InvalidInput
from .quadfield import QuadraticField, make_field
from .sqclass import SquareClass, SquareClassSubgroup, subgroup_generated


@dataclass(frozen=True)
class BiquadraticField:
    m1: int
    m2: int
    m3: int
    subfields: tuple[QuadraticField, QuadraticField, QuadraticField]
    ram: tuple[tuple[int, int], ...]  # (prime, e_p), primes increasing

    @property
    def radicands(self) -> tuple[int, int, int]:
        return self.m1, self.m2, self.m3

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self.ram)

    @property
    def exponent_product(self) -> int:
        return math.prod(e for _, e in self.ram)


def make_biquad(m1: int, m2: int) -> BiquadraticField:
    m1, m2 = int(m1), int(m2)
    if m1 <= 1 or m2 <= 1:
        raise InvalidInput(
            f"only totally real fields are supported: need m1, m2 > 1, got ({m1}, {m2})"
        )
    for m in (m1, m2):
        if not is_squarefree(m):
            raise InvalidInput(f"{m} is not squarefree")
    if m1 == m2:
        raise InvalidInput(f"m1 and m2 must be distinct, both are {m1}")
    m3 = squarefree_part(m1 * m2).value
    subs = tuple(make_field(m) for m in (m1, m2, m3))

    ram: dict[int, int] = {}
    for p in sorted({p for F in subs for p in F.ramified}):
        hits = sum(1 for F in subs if p in F.ramified)
        if p == 2:
            if hits == 1:
                raise InconsistencyError(f"2 ramifies in exactly one subfield of ({m1}, {m2})")
            ram[2] = 4 if hits == 3 else 2
        else:
            if sum(1 for m in (m1, m2, m3) if m % p == 0) != 2:
                raise InconsistencyError(f"odd prime {p} must divide exactly two radicands")
            ram[p] = 2
    return BiquadraticField(m1, m2, m3, subs, tuple(sorted(ram.items())))


def h2_generators(K: BiquadraticField) -> list[SquareClass]:
    """[Delta_1], [Delta_2], [Delta_3], [a_1], [a_2], [a_3]."""
    deltas = [squarefree_part(m, F.ramified) for m, F in zip(K.radicands, K.subfields)]
    return deltas + [quadfield.a_class(F) for F in K.subfields]


def h2_subgroup(K: BiquadraticField) -> SquareClassSubgroup:
    return subgroup_generated(h2_generators(K))


@dataclass(frozen=True)
class H1Report:
    h2: SquareClassSubgroup
    index: int
    h1_order: int
    norm_two: tuple[quadfield.NormTwoSolvability, ...] | None
    strict_index: int
    interpretations_differ: bool


def h1_order(K: BiquadraticField) -> H1Report:
    """|H^1(G, O_K^*)| = index * |H[2]|.

    The index condition is read as "each subfield represents +2 or -2".  The
    variant that requires one common sign is computed as ``strict_index`` and
    any disagreement is flagged rather than resolved.
    """
    h2 = h2_subgroup(K)
    index = strict = 1
    sols = None
    if K.exponents.get(2) == 4:
        sols = tuple(quadfield.norm_pm2_solvable(F, with_witness=True) for F in K.subfields)
        if all(s.solvable for s in sols):
            index = 2
        if all(s.plus2 for s in sols) or all(s.minus2 for s in sols):
            strict = 2
    return H1Report(h2, index, index * h2.order, sols, strict, index != strict)


@dataclass(frozen=True)
class PolyaReport:
    exponent_product: int
    h1: H1Report
    po_order: int
    rank2: int | None

    @property
    def h1_order(self) -> int:
        return self.h1.h1_order


def polya_order(K: BiquadraticField) -> PolyaReport:
    h1 = h1_order(K)
    prod = K.exponent_product
    if prod % h1.h1_order:
        raise InconsistencyError(
            f"|H^1| = {h1.h1_order} does not divide prod(e_p) = {prod} for "
            f"({K.m1}, {K.m2}): the exact sequence is violated"
        )
    po = prod // h1.h1_order
    if po & (po - 1):
        raise InconsistencyError(f"|Po(K)| = {po} is not a power of 2")
    rank2 = po.bit_length() - 1 if all(e == 2 for _, e in K.ram) else None
    return PolyaReport(prod, h1, po, rank2)


@dataclass(frozen=True)
class BetaCertificate:
    """Factorization data for a norm +1 unit z + w sqrt(2P) of Q(sqrt 2P).

    (z - 1)/2 = a^2 alpha and (z + 1)/2 = b^2 beta with alpha * beta = 2P.
    ``vacuous`` marks the norm -1 case, where nothing needs checking.
    """

    P: int
    vacuous: bool
    z: int | None = None
    w: int | None = None
    w1: int | None = None
    a: int | None = None
    b: int | None = None
    alpha_class: SquareClass | None = None
    beta_class: SquareClass | None = None
    admissible: bool = True


def beta_certificate(K: BiquadraticField, P_primes: tuple[int, ...] | None = None) -> BetaCertificate:
    """Check that [a_3] = [beta] lies in <[2], [P]> for K = Q(sqrt 2, sqrt P).

    ``P_primes`` (the prime factors of P, when known) lets the square-class
    computation strip them instead of factoring (z + 1)/2.
    """
    if K.m1 != 2:
        raise InvalidInput(f"beta certificate needs m1 = 2, got {K.m1}")
    P = K.m2
    if P % 2 == 0:
        raise InvalidInput(f"P = {P} must be odd")
    F3 = K.subfields[2]
    if F3.d != 2 * P:
        raise InconsistencyError(f"third subfield should be Q(sqrt {2 * P})")
    if quadfield.unit_norm(F3) == -1:
        return BetaCertificate(P, vacuous=True)
    u = quadfield.fundamental_unit(F3)
    if u.denom != 1:
        raise InconsistencyError(f"unit of Q(sqrt {2 * P}) cannot be half-integral")
    z, w = u.x, u.y
    if z % 2 == 0 or w % 2:
        raise InconsistencyError(f"expected z odd and w even, got z = {z}, w = {w}")
    w1 = w // 2
    lo, hi = (z - 1) // 2, (z + 1) // 2
    if lo * hi != 2 * w1 * w1 * P:
        raise InconsistencyError("((z-1)/2)((z+1)/2) != 2 w1^2 P")
    primes = (2, *(P_primes if P_primes is not None else F3.ramified))
    alpha = squarefree_part(lo, primes)
    beta = squarefree_part(hi, primes)
    if alpha * beta != squarefree_part(2 * P, primes):
        raise InconsistencyError("alpha * beta is not the class of 2P")
    a = isqrt(lo // alpha.value)
    b = isqrt(hi // beta.value)
    if a * a * alpha.value != lo or b * b * beta.value != hi:
        raise InconsistencyError("(z -+ 1)/2 is not a square times its squarefree part")
    if b * b * beta.value - a * a * alpha.value != 1 or a * b != w1:
        raise InconsistencyError("b^2 beta - a^2 alpha = 1 with ab = w1 fails")
    admissible = beta.value in (1, 2, P, 2 * P)
    return BetaCertificate(P, False, z, w, w1, a, b, alpha, beta, admissible)
