"""The group Q*/(Q*)^2 as an F_2 vector space.

A square class is stored as a sign and the sorted tuple of primes dividing
its squarefree representative.  Coordinates of the F_2 matrix are allocated
lazily from the primes that actually occur, plus one coordinate for the sign,
so classes built from very large primes need no global tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class SquareClass:
    sign: int = 1
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        ps = tuple(self.primes)
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValueError(f"primes must be strictly increasing: {ps}")
        if ps and ps[0] < 2:
            raise ValueError(f"not a prime: {ps[0]}")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def from_squarefree(cls, n: int, primes: Iterable[int]) -> SquareClass:
        """Build the class of ``n`` given its (already known) prime support."""
        ps = tuple(sorted(primes))
        if math.prod(ps) != abs(n):
            raise ValueError(f"{ps} is not the prime support of {n}")
        return cls(1 if n > 0 else -1, ps)

    @property
    def value(self) -> int:
        return self.sign * math.prod(self.primes)

    def is_identity(self) -> bool:
        return self.sign == 1 and not self.primes

    def __mul__(self, other: SquareClass) -> SquareClass:
        return sq_mul(self, other)

    def __str__(self):
        return f"[{self.value}]"


IDENTITY = SquareClass()


def sq_mul(a: SquareClass, b: SquareClass) -> SquareClass:
    """Group law: product of signs, symmetric difference of prime sets."""
    return SquareClass(a.sign * b.sign, tuple(sorted(set(a.primes) ^ set(b.primes))))


def _support(classes: Iterable[SquareClass]) -> list[int]:
    return sorted({p for c in classes for p in c.primes})


def _to_bits(c: SquareClass, index: dict[int, int]) -> int:
    # bit 0 is the sign coordinate
    v = 1 if c.sign < 0 else 0
    for p in c.primes:
        v |= 1 << index[p]
    return v


def _from_bits(v: int, coords: Sequence[int]) -> SquareClass:
    sign = -1 if v & 1 else 1
    return SquareClass(sign, tuple(p for i, p in enumerate(coords, start=1) if v >> i & 1))


@dataclass(frozen=True)
class SquareClassSubgroup:
    """Subgroup of Q*/(Q*)^2 given by a reduced echelon basis."""

    basis: tuple[SquareClass, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 1 << self.rank

    def __contains__(self, c: SquareClass) -> bool:
        return contains(self, c)

    def elements(self) -> list[SquareClass]:
        out = []
        for k in range(self.rank + 1):
            for combo in combinations(self.basis, k):
                acc = IDENTITY
                for g in combo:
                    acc = acc * g
                out.append(acc)
        return sorted(out)


def _echelon(vectors: Iterable[int]) -> dict[int, int]:
    """Reduced row echelon form over F_2, keyed by pivot (highest set bit)."""
    pivots: dict[int, int] = {}
    for v in vectors:
        for piv in sorted(pivots, reverse=True):
            if v >> piv & 1:
                v ^= pivots[piv]
        if v:
            top = v.bit_length() - 1
            for piv in pivots:
                if pivots[piv] >> top & 1:
                    pivots[piv] ^= v
            pivots[top] = v
    return pivots


def subgroup_generated(gens: Iterable[SquareClass]) -> SquareClassSubgroup:
    gens = list(gens)
    coords = _support(gens)
    index = {p: i for i, p in enumerate(coords, start=1)}
    pivots = _echelon(_to_bits(g, index) for g in gens)
    basis = tuple(_from_bits(pivots[k], coords) for k in sorted(pivots, reverse=True))
    return SquareClassSubgroup(basis)


def contains(S: SquareClassSubgroup, c: SquareClass) -> bool:
    coords = _support([*S.basis, c])
    index = {p: i for i, p in enumerate(coords, start=1)}
    pivots = _echelon(_to_bits(g, index) for g in S.basis)
    v = _to_bits(c, index)
    for piv in sorted(pivots, reverse=True):
        if v >> piv & 1:
            v ^= pivots[piv]
    return v == 0
