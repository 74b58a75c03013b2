"""Ideal arithmetic in quadratic orders and a direct Polya group computation.

Ideals are kept in standard form  scale * (a Z + (b + sqrt(disc))/2 Z).
Products go through the Hermite normal form of the four basis products, so
nothing here shares code with the continued-fraction unit machinery in
:mod:`polya.quadfield`; the two are meant to check each other.

Principality is wide (ordinary class group): imaginary ideals are compared
through reduced binary forms, real ones through their cycle of reduced ideals
under the rho operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import InconsistencyError, InvalidInput
from .quadfield import QuadraticField

MAX_RAMIFIED = 20


@dataclass(frozen=True)
class QuadIdeal:
    disc: int
    a: int
    b: int
    scale: Fraction = dc_field(default=Fraction(1))

    def __post_init__(self):
        if self.a <= 0:
            raise InvalidInput(f"ideal needs a > 0, got {self.a}")
        if (self.b * self.b - self.disc) % (4 * self.a):
            raise InvalidInput(f"b^2 != disc mod 4a for ({self.a}, {self.b}), disc {self.disc}")
        object.__setattr__(self, "b", _center(self.b, self.a))
        object.__setattr__(self, "scale", Fraction(self.scale))

    @property
    def norm(self) -> Fraction:
        return self.scale**2 * self.a

    @property
    def primitive(self) -> QuadIdeal:
        return QuadIdeal(self.disc, self.a, self.b)

    def __mul__(self, other: QuadIdeal) -> QuadIdeal:
        return ideal_mul(self, other)


def _center(b: int, a: int) -> int:
    """Representative of b mod 2a in (-a, a]."""
    b %= 2 * a
    return b - 2 * a if b > a else b


def unit_ideal(disc: int) -> QuadIdeal:
    return QuadIdeal(disc, 1, disc % 2)


def principal_integer(disc: int, n: int) -> QuadIdeal:
    """The ideal (n) for a nonzero integer n."""
    return QuadIdeal(disc, 1, disc % 2, Fraction(abs(n)))


def prime_ideal_above(field: QuadraticField, p: int) -> QuadIdeal:
    if field.disc % p or p not in field.ramified:
        raise InvalidInput(f"{p} does not ramify in Q(sqrt {field.d})")
    for b in range(2 * p):
        if (b * b - field.disc) % (4 * p) == 0:
            return QuadIdeal(field.disc, p, b)
    raise InconsistencyError(f"no b with b^2 = {field.disc} mod {4 * p}")


def _basis(I: QuadIdeal):
    # coordinates in the Z-basis {1, w}, w = (disc + sqrt disc)/2
    return [(I.a, 0), ((I.b - I.disc) // 2, 1)]


def _hnf2(vectors):
    """Basis (n1, 0), (m, n2) of the lattice spanned by ``vectors`` in Z^2."""
    row = (0, 0)
    flat = []
    for u, v in vectors:
        if v == 0:
            flat.append(u)
            continue
        if row[1] == 0:
            flat.append(row[0])
            row = (u, v)
            continue
        g, s, t = _xgcd(row[1], v)
        new = (s * row[0] + t * u, g)
        other = (v // g) * row[0] - (row[1] // g) * u
        flat.append(other)
        row = new
    n1 = 0
    for u in flat:
        n1 = math.gcd(n1, u)
    if row[1] < 0:
        row = (-row[0], -row[1])
    m = row[0] % n1 if n1 else row[0]
    return n1, m, row[1]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def ideal_mul(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    if I.disc != J.disc:
        raise InvalidInput(f"ideals from different fields (disc {I.disc} and {J.disc})")
    D = I.disc
    c = (D * D - D) // 4  # w^2 = D w - c
    prods = []
    for x1, y1 in _basis(I):
        for x2, y2 in _basis(J):
            prods.append((x1 * x2 - y1 * y2 * c, x1 * y2 + x2 * y1 + y1 * y2 * D))
    n1, m, n2 = _hnf2(prods)
    if n1 % n2 or m % n2:
        raise InconsistencyError(f"lattice ({n1}, {m}, {n2}) is not an ideal")
    return QuadIdeal(D, n1 // n2, 2 * (m // n2) + D, I.scale * J.scale * n2)


# -- reduction ---------------------------------------------------------------


def _reduce_form_step_bound(disc: int) -> int:
    return int(10 * math.log(abs(disc))) + 50


def _reduce_imaginary(a: int, b: int, disc: int) -> tuple[int, int, int]:
    c = (b * b - disc) // (4 * a)
    steps = 0
    bound = _reduce_form_step_bound(disc) + a.bit_length()
    while True:
        b = _center(b, a)
        c = (b * b - disc) // (4 * a)
        if a > c:
            a, b = c, -b
        elif a == c and b < 0:
            b = -b
        else:
            break
        steps += 1
        if steps > bound:
            raise InconsistencyError(f"reduction of ({a}, {b}) exceeded {bound} steps")
    return a, b, c


def _normalize_real(b: int, a: int, disc: int, s: int) -> int:
    if a <= s:
        # the unique b = b0 (mod 2a) with sqrt(disc) - 2a < b < sqrt(disc)
        return b + 2 * a * ((s - b) // (2 * a))
    return _center(b, a)


def _is_reduced_real(a: int, b: int, s: int) -> bool:
    # |sqrt(disc) - 2a| < b < sqrt(disc), disc not a square
    if not 0 < b <= s:
        return False
    return b > s - 2 * a if 2 * a <= s else 2 * a - b <= s


def _rho(a: int, b: int, disc: int, s: int) -> tuple[int, int, int]:
    """One rho step; the sign returned is that of the multiplier's norm."""
    c = (b * b - disc) // (4 * a)
    na = abs(c)
    return na, _normalize_real(-b, na, disc, s), (1 if c > 0 else -1)


def _reduce_real(a: int, b: int, disc: int) -> tuple[int, int, int]:
    s = math.isqrt(disc)
    b = _normalize_real(b, a, disc, s)
    sign = 1
    steps = 0
    bound = _reduce_form_step_bound(disc) + a.bit_length()
    while not _is_reduced_real(a, b, s):
        a, b, sg = _rho(a, b, disc, s)
        sign *= sg
        steps += 1
        if steps > bound:
            raise InconsistencyError(f"reduction exceeded {bound} steps (disc {disc})")
    return a, b, sign


def reduced_cycle(I: QuadIdeal) -> list[tuple[int, int, int]]:
    """The rho cycle of reduced ideals equivalent to I, as (a, b, sign) where
    sign is the norm sign of the element carrying I to that ideal."""
    if I.disc < 0:
        raise InvalidInput("reduced cycles are defined for real fields")
    disc = I.disc
    s = math.isqrt(disc)
    a, b, sign = _reduce_real(I.a, I.b, disc)
    start = (a, b)
    out = [(a, b, sign)]
    while True:
        a, b, sg = _rho(a, b, disc, s)
        sign *= sg
        if (a, b) == start:
            out.append((a, b, sign))  # closing entry: sign change around the cycle
            return out
        out.append((a, b, sign))


def cycle_key(I: QuadIdeal) -> tuple[int, int]:
    """Canonical rotation (lexicographically least (a, b)) of I's class."""
    if I.disc < 0:
        a, b, _ = _reduce_imaginary(I.a, I.b, I.disc)
        return a, b
    return min((a, b) for a, b, _ in reduced_cycle(I)[:-1])


def is_principal(I: QuadIdeal) -> bool:
    return cycle_key(I) == cycle_key(unit_ideal(I.disc))


def principal_norm_signs(I: QuadIdeal) -> frozenset[int]:
    """Signs of N(alpha) over all generators alpha of I (empty if not principal)."""
    if I.disc < 0:
        return frozenset({1}) if is_principal(I) else frozenset()
    cyc = reduced_cycle(I)
    around = cyc[-1][2] * cyc[0][2]
    for a, _, sign in cyc[:-1]:
        if a == 1:
            return frozenset({sign, -sign}) if around < 0 else frozenset({sign})
    return frozenset()


def ideals_of_norm_two(field: QuadraticField) -> list[QuadIdeal]:
    D = field.disc
    return [QuadIdeal(D, 2, b) for b in range(4) if (b * b - D) % 8 == 0]


def norm_pm2_oracle(field: QuadraticField) -> tuple[bool, bool]:
    """(norm +2 exists, norm -2 exists), decided by principality of the ideals
    of norm 2 rather than by searching for elements."""
    signs = set()
    for P in ideals_of_norm_two(field):
        signs |= principal_norm_signs(P)
    return 1 in signs, -1 in signs


@dataclass(frozen=True)
class PolyaDirectReport:
    d: int
    ramified: tuple[int, ...]
    order: int
    principal_subsets: tuple[int, ...]  # bitmasks over ``ramified``


def polya_direct(field: QuadraticField) -> PolyaDirectReport:
    """Order of the subgroup of Cl_K generated by the ramified prime classes.

    For a Galois field the split and inert Pi_q are principal, so only the
    ramified primes contribute.  Each of the 2^r products is tested directly.
    """
    r = field.r
    if r > MAX_RAMIFIED:
        raise InvalidInput(f"{r} ramified primes is beyond the subset-enumeration guard")
    primes = [prime_ideal_above(field, p) for p in field.ramified]
    principal = []
    for mask in range(1 << r):
        I = unit_ideal(field.disc)
        for i, P in enumerate(primes):
            if mask >> i & 1:
                I = I * P
        if is_principal(I):
            principal.append(mask)
    pset = set(principal)
    if any(x ^ y not in pset for x in principal for y in principal):
        raise InconsistencyError(f"principal subsets for d = {field.d} are not a subgroup")
    if (1 << r) % len(principal):
        raise InconsistencyError("subgroup order does not divide 2^r")
    return PolyaDirectReport(field.d, field.ramified, (1 << r) // len(principal), tuple(principal))


# -- unit minimality ----------------------------------------------------------


def smaller_unit_scan(d: int, y: int, half_integral: bool) -> tuple[int, int, int] | None:
    """Brute force: a unit (x' + y' sqrt d)/den > 1 with 0 < y' < y, or None.

    A unit with y' = 0 would be +-1, and every unit > 1 has x', y' > 0.
    """
    den = 2 if half_integral else 1
    for yy in range(1, y):
        for n in (1, -1):
            x2 = d * yy * yy + n * den * den
            if x2 <= 0:
                continue
            x = math.isqrt(x2)
            if x * x == x2 and (x - yy) % den == 0:
                return x, yy, den
    return None


def _power(d: int, u: tuple[int, int, int], k: int) -> tuple[int, int, int]:
    x, y, den = 1, 0, 1
    bx, by, bden = u
    while k:
        if k & 1:
            x, y, den = x * bx + d * y * by, x * by + y * bx, den * bden
        bx, by, bden = bx * bx + d * by * by, 2 * bx * by, bden * bden
        k >>= 1
    while den > 1 and x % 2 == 0 and y % 2 == 0:
        x, y, den = x // 2, y // 2, den // 2
    return x, y, den


def _small_primes(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, math.isqrt(p) + 1))]


def unit_root(d: int, x: int, y: int, den: int) -> tuple[int, tuple[int, int, int]] | None:
    """Find a unit e and prime k with e^k = (x + y sqrt d)/den, or None.

    Every unit > 1 of a real quadratic field is at least the golden ratio, so
    only k <= log u / log((1 + sqrt 5)/2) can occur.  For each such prime k
    the trace of the candidate root e is the integer nearest to
    u^(1/k) + N(e) u^(-1/k); the candidate is rebuilt exactly and raised to
    the k-th power.
    """
    import gmpy2

    bits = 2 * (x.bit_length() + y.bit_length() + int(d).bit_length()) + 64
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        u = (gmpy2.mpfr(x) + gmpy2.mpfr(y) * gmpy2.sqrt(gmpy2.mpfr(d))) / den
        kmax = int(gmpy2.log(u) / gmpy2.log((1 + gmpy2.sqrt(5)) / 2)) + 1
        for k in _small_primes(kmax):
            r = gmpy2.root(u, k)
            for n in (1, -1):
                approx = int(gmpy2.rint(r + n / r))
                for t in (approx - 1, approx, approx + 1):
                    if t <= 0:
                        continue
                    disc = t * t - 4 * n
                    if disc <= 0 or disc % d:
                        continue
                    s2 = disc // d
                    s = math.isqrt(s2)
                    if s * s != s2:
                        continue
                    e = (t, s, 2)
                    while e[2] > 1 and e[0] % 2 == 0 and e[1] % 2 == 0:
                        e = (e[0] // 2, e[1] // 2, e[2] // 2)
                    if e[2] == 2 and d % 4 != 1:
                        continue
                    if _power(d, e, k) == (x, y, den):
                        return k, e
    return None
