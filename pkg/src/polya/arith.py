"""Exact integer kernel: primality, factorization, Jacobi symbols, CRT,
squarefree parts and prime scanning along arithmetic progressions.

Everything works on Python ints (arbitrary precision).  ``gmpy2.mpz`` values
coming out of the unit computations are accepted wherever an int is.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInput, SearchExhausted
from .sqclass import SquareClass

# Deterministic Miller-Rabin for n < 3.3e24 (Sorenson & Webster); we only
# rely on it below 2**64.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
PROBABLE_PRIME_ROUNDS = 40
TRIAL_DIVISION_BOUND = 10**6


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise InvalidInput(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n) if n.bit_length() < 256 else int(_powmod(a, d, n))
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _powmod(a, d, n):
    import gmpy2

    return gmpy2.powmod(a, d, n)


_SIEVE_PRIMES = tuple(p for p in range(3, 2000) if all(p % q for q in range(3, int(p**0.5) + 1, 2)))
_SIEVE_PRODUCT = math.prod(_SIEVE_PRIMES)


def is_prime(n: int) -> bool:
    """Primality test.

    Deterministic for ``n < 2**64``.  Larger inputs get a fixed 40-round
    Miller-Rabin test with bases drawn from an RNG seeded by ``n`` itself, so
    the answer is reproducible; see :func:`is_proven_range`.
    """
    n = int(n)
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        return all(_mr_round(n, d, s, a) for a in _MR_BASES_64)
    rng = random.Random(n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(PROBABLE_PRIME_ROUNDS))


def is_proven_range(n: int) -> bool:
    """True when :func:`is_prime` is a proof rather than a probable-prime test."""
    return n < 1 << 64


@dataclass(frozen=True)
class ResidueSystem:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(r), int(m)) for r, m in self.pairs)
        for r, m in pairs:
            if m < 1:
                raise InvalidInput(f"modulus must be positive, got {m}")
            if not 0 <= r < m:
                raise InvalidInput(f"residue {r} out of range for modulus {m}")
        for (_, m1), (_, m2) in _pairs(pairs):
            if math.gcd(m1, m2) != 1:
                raise InvalidInput(f"moduli {m1} and {m2} are not coprime")
        object.__setattr__(self, "pairs", pairs)

    @property
    def modulus(self) -> int:
        return math.prod(m for _, m in self.pairs)


def _pairs(seq):
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            yield seq[i], seq[j]


def crt(system: ResidueSystem | Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Return ``(x0, M)`` with ``0 <= x0 < M`` solving every congruence."""
    if not isinstance(system, ResidueSystem):
        system = ResidueSystem(tuple(system))
    x, M = 0, 1
    for r, m in system.pairs:
        # x + M*k = r (mod m)
        k = (r - x) * pow(M, -1, m) % m
        x += M * k
        M *= m
    return x % M, M


@dataclass(frozen=True)
class Factorization:
    unit_sign: int
    prime_powers: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        return self.unit_sign * math.prod(p**e for p, e in self.prime_powers)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.prime_powers)


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n`` (Brent's variant)."""
    for c in range(1, 1000):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        f = lambda v: (v * v + c) % n  # noqa: E731
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError(f"Pollard rho failed on {n}")


def _factor_into(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _factor_into(d, out)
    _factor_into(n // d, out)


def factor(n: int) -> Factorization:
    """Trial division up to 10**6, then Pollard rho on the cofactor."""
    n = int(n)
    if n == 0:
        raise InvalidInput("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    found: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n and p <= TRIAL_DIVISION_BOUND:
        for q in (p, p + 2):
            while n % q == 0:
                found[q] = found.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        if p * p > n:
            found[n] = found.get(n, 0) + 1
        else:
            _factor_into(n, found)
    return Factorization(sign, tuple(sorted(found.items())))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(n).prime_powers)


def isqrt(n):
    """Integer square root that stays fast for gmpy2-sized inputs."""
    if n.bit_length() < 20_000:
        return math.isqrt(int(n))
    import gmpy2

    return gmpy2.isqrt(n)


def squarefree_part(n: int, known_primes: Sequence[int] = ()) -> SquareClass:
    """Square class of ``n``, i.e. the signed squarefree ``s`` with ``n/s`` a square.

    ``known_primes`` lists primes expected to carry the whole squarefree part.
    They are divided out first and the cofactor is checked to be a perfect
    square; this handles integers far too large to factor (unit traces with
    millions of digits) whenever the caller knows the possible support.  If the
    cofactor is not a square we fall back to full factorization.
    """
    if n == 0:
        raise InvalidInput("0 has no square class")
    sign = 1 if n > 0 else -1
    m = abs(n)
    if known_primes:
        support = []
        for p in sorted(set(known_primes)):
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                support.append(p)
        r = isqrt(m)
        if r * r == m:
            return SquareClass(sign, tuple(support))
        m = abs(n)
    odd = [p for p, e in factor(m).prime_powers if e % 2]
    return SquareClass(sign, tuple(odd))


def find_prime_in_progression(
    a: int, m: int, start: int = 0, limit: int = 10**6, exclude: Iterable[int] = ()
) -> int:
    """Smallest prime ``p >= start`` with ``p = a (mod m)``.

    At most ``limit`` candidates (terms of the progression, prime or not) are
    examined.  Primes listed in ``exclude`` are skipped but still count.
    """
    if m < 1:
        raise InvalidInput(f"modulus must be positive, got {m}")
    if start < 0:
        raise InvalidInput(f"start must be non-negative, got {start}")
    if math.gcd(a, m) != 1:
        raise InvalidInput(f"gcd({a}, {m}) != 1: progression holds at most one prime")
    skip = set(exclude)
    a %= m
    c = a if start <= a else a + -(-(start - a) // m) * m
    for _ in range(limit):
        # cheap gcd filter before Miller-Rabin on large candidates
        if c > 2000 and math.gcd(c, _SIEVE_PRODUCT) != 1:
            c += m
            continue
        if c not in skip and is_prime(c):
            return c
        c += m
    raise SearchExhausted(
        f"no prime = {a} (mod {m}) among {limit} candidates starting at {start}"
    )
