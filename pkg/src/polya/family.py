"""Prime tuples with prescribed Legendre symbols and the family
K = Q(sqrt 2, sqrt(p_1 ... p_t)) with |Po(K)| = 2^(t-1).

Tuples are built inductively: p_1 is the first prime = 1 (mod 8) at or after
``start``; for k >= 2 pick, for every earlier p_i, the smallest n_i with
(n_i / p_i) equal to the prescribed sign, solve X = 1 (mod 8), X = n_i
(mod p_i) by CRT and take the first prime of that progression at or after
``start``.  All primes are 1 mod 4, so reciprocity makes the symbols
symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from . import quadfield
from .arith import crt, find_prime_in_progression, is_proven_range, jacobi
from .biquad import BiquadraticField, beta_certificate, make_biquad, polya_order
from .errors import InvalidInput, PolyaError, SearchExhausted
from .quadfield import make_field

DEFAULT_LIMIT = 10**6


@dataclass(frozen=True)
class SignMatrix:
    """Symmetric sign pattern eps[i][j] (0-based), diagonal stored as 0."""

    t: int
    eps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.t < 1 or len(self.eps) != self.t or any(len(r) != self.t for r in self.eps):
            raise InvalidInput(f"sign matrix must be {self.t}x{self.t}")
        for i in range(self.t):
            if self.eps[i][i] != 0:
                raise InvalidInput("diagonal of a sign matrix must be 0")
            for j in range(self.t):
                if i != j and self.eps[i][j] not in (1, -1):
                    raise InvalidInput(f"eps[{i}][{j}] = {self.eps[i][j]} is not +-1")
                if self.eps[i][j] != self.eps[j][i]:
                    raise InvalidInput(f"sign matrix is not symmetric at ({i}, {j})")

    @classmethod
    def from_upper(cls, t: int, signs) -> SignMatrix:
        """Build from the upper triangle listed row by row: (1,2), (1,3), ..., (t-1,t)."""
        signs = list(signs)
        need = t * (t - 1) // 2
        if len(signs) != need:
            raise InvalidInput(f"t = {t} needs {need} signs, got {len(signs)}")
        m = [[0] * t for _ in range(t)]
        for (i, j), s in zip(combinations(range(t), 2), signs):
            m[i][j] = m[j][i] = s
        return cls(t, tuple(map(tuple, m)))

    def upper(self) -> list[int]:
        return [self.eps[i][j] for i, j in combinations(range(self.t), 2)]


def trotter_pattern(t: int) -> SignMatrix:
    """Sign patterns forcing a norm -1 unit in Q(sqrt(p_1 ... p_t)).

    Odd t: every symbol is -1.  Even t: eps_12 = -1, eps_1i = +1 for i > 2,
    and -1 among all pairs drawn from indices 2..t.
    """
    if t < 2:
        raise InvalidInput(f"t must be at least 2, got {t}")
    m = [[0] * t for _ in range(t)]
    for i, j in combinations(range(t), 2):
        if t % 2 == 1:
            s = -1
        elif i == 0:
            s = -1 if j == 1 else 1
        else:
            s = -1
        m[i][j] = m[j][i] = s
    return SignMatrix(t, tuple(map(tuple, m)))


def trotter_applies(M: SignMatrix) -> bool:
    """Exact match against the pattern for M.t; index permutations are not tried."""
    return M.t >= 2 and M == trotter_pattern(M.t)


def trotter_predicts(primes) -> bool:
    """Trotter's criterion needs every prime = 1 mod 4 and an exact pattern match."""
    if len(primes) < 2 or any(p % 4 != 1 for p in primes):
        return False
    M = symbol_matrix(primes)
    return M is not None and trotter_applies(M)


def symbol_matrix(primes) -> SignMatrix | None:
    """The matrix of (p_i / p_j), or None when it is not a symmetric +-1 pattern."""
    t = len(primes)
    m = [[0] * t for _ in range(t)]
    for i in range(t):
        for j in range(t):
            if i != j:
                m[i][j] = jacobi(primes[i], primes[j])
    try:
        return SignMatrix(t, tuple(map(tuple, m)))
    except InvalidInput:
        return None


@dataclass(frozen=True)
class SearchOptions:
    start: int = 2
    limit: int = DEFAULT_LIMIT


@dataclass(frozen=True)
class SearchStep:
    index: int  # 0-based index of the prime chosen at this step
    residues: tuple[int, ...]  # n_i for each earlier prime
    x0: int
    modulus: int
    prime: int


@dataclass(frozen=True)
class PrimeTuple:
    primes: tuple[int, ...]
    certificates: tuple[tuple[int, int, int], ...]  # (i, j, (p_i / p_j)) for i != j
    search_trace: tuple[SearchStep, ...] = ()

    @property
    def product(self) -> int:
        return math.prod(self.primes)

    @property
    def probable_primes(self) -> tuple[int, ...]:
        return tuple(p for p in self.primes if not is_proven_range(p))


def _certify(primes) -> tuple[tuple[int, int, int], ...]:
    return tuple(
        (i, j, jacobi(primes[i], primes[j]))
        for i in range(len(primes))
        for j in range(len(primes))
        if i != j
    )


def tuple_problems(T: PrimeTuple, M: SignMatrix | None = None) -> list[str]:
    """Re-verify a tuple from scratch; returns human-readable violations."""
    out = []
    ps = T.primes
    if len(set(ps)) != len(ps):
        out.append("primes are not distinct")
    for p in ps:
        if p % 8 != 1:
            out.append(f"{p} is not 1 mod 8")
    for i, j, s in _certify(ps):
        if M is not None and s != M.eps[i][j]:
            out.append(f"({ps[i]}/{ps[j]}) = {s}, wanted {M.eps[i][j]}")
        if s != jacobi(ps[j], ps[i]):
            out.append(f"symbols of {ps[i]}, {ps[j]} are not symmetric")
    return out


def _smallest_with_symbol(p: int, sign: int) -> int:
    for n in range(1, p):
        if jacobi(n, p) == sign:
            return n
    raise InvalidInput(f"no residue with symbol {sign} modulo {p}")


def find_prime_tuple(M: SignMatrix, opts: SearchOptions = SearchOptions()) -> PrimeTuple:
    try:
        p1 = find_prime_in_progression(1, 8, opts.start, opts.limit)
    except SearchExhausted as e:
        raise SearchExhausted(f"index 1, progression 1 mod 8: {e}") from e
    primes = [p1]
    trace = [SearchStep(0, (), 1, 8, p1)]
    for k in range(1, M.t):
        residues = tuple(_smallest_with_symbol(p, M.eps[i][k]) for i, p in enumerate(primes))
        x0, mod = crt([(1, 8), *zip(residues, primes)])
        try:
            p = find_prime_in_progression(x0, mod, opts.start, opts.limit, exclude=primes)
        except SearchExhausted as e:
            raise SearchExhausted(f"index {k + 1}, progression {x0} mod {mod}: {e}") from e
        primes.append(p)
        trace.append(SearchStep(k, residues, x0, mod, p))
    T = PrimeTuple(tuple(primes), _certify(primes), tuple(trace))
    problems = tuple_problems(T, M)
    if problems:
        raise PolyaError("constructed tuple fails re-verification: " + "; ".join(problems))
    return T


@dataclass(frozen=True)
class FamilyInstance:
    t: int
    tuple: PrimeTuple
    P: int
    field: BiquadraticField
    expected_rank: int

    @classmethod
    def from_primes(cls, primes) -> FamilyInstance:
        """Wrap hand-picked primes without searching (no trace, no invariants enforced)."""
        primes = tuple(int(p) for p in primes)
        T = PrimeTuple(primes, _certify(primes))
        P = math.prod(primes)
        return cls(len(primes), T, P, make_biquad(2, P), len(primes) - 1)


def build_family_instance(t: int, opts: SearchOptions = SearchOptions()) -> FamilyInstance:
    M = trotter_pattern(t)
    T = find_prime_tuple(M, opts)
    return FamilyInstance(t, T, T.product, make_biquad(2, T.product), t - 1)


@dataclass
class Check:
    key: str
    description: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    instance: FamilyInstance
    checks: list[Check] = field(default_factory=list)
    norm_u1: int | None = None
    norm_u2: int | None = None
    norm_u3: int | None = None
    trotter: bool = False
    polya: object = None  # biquad.PolyaReport
    beta: object = None  # biquad.BetaCertificate
    errors: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks) and not self.errors

    def failed_keys(self) -> list[str]:
        return [c.key for c in self.checks if not c.passed]


CHECKS = {
    "a": "norm(u1) = -1 for Q(sqrt 2)",
    "b": "Trotter pattern implies norm(u2) = -1",
    "c": "2 is not totally ramified (e_2 = 2)",
    "d": "all e_p = 2 and prod(e_p) = 2^(t+1)",
    "e": "|H^1| = 4 (|H[2]| = 4, index 1)",
    "f": "|Po(K)| = 2^(t-1) and rank = t-1",
    "g": "beta certificate admissible",
}


def verify_theorem_instance(F: FamilyInstance) -> VerificationReport:
    """Run checks (a)-(g); a computation that fails marks its checks failed."""
    rep = VerificationReport(F)
    t = F.t
    K = F.field

    def record(key, ok, detail=""):
        rep.checks.append(Check(key, CHECKS[key], bool(ok), detail))

    def attempt(keys, fn):
        try:
            fn()
        except PolyaError as e:
            rep.errors.append(f"{type(e).__name__}: {e}")
            for k in keys:
                if k not in {c.key for c in rep.checks}:
                    record(k, False, f"not computed: {e}")

    def units():
        rep.norm_u1 = quadfield.unit_norm(make_field(2))
        record("a", rep.norm_u1 == -1, f"norm {rep.norm_u1}")
        rep.trotter = trotter_predicts(F.tuple.primes)
        rep.norm_u2 = quadfield.unit_norm(K.subfields[1])
        if rep.trotter:
            record("b", rep.norm_u2 == -1, f"pattern matches, norm {rep.norm_u2}")
        else:
            record("b", True, f"pattern does not match (no prediction), norm {rep.norm_u2}")

    def ramification():
        e = K.exponents
        record("c", e.get(2) == 2, f"e_2 = {e.get(2)}")
        ok = all(v == 2 for v in e.values()) and K.exponent_product == 2 ** (t + 1)
        record("d", ok, f"e = {e}, product {K.exponent_product}")

    def cohomology():
        R = polya_order(K)
        rep.polya = R
        rep.norm_u3 = quadfield.unit_norm(K.subfields[2])
        ok = R.h1.h2.order == 4 and R.h1.index == 1 and R.h1_order == 4
        record("e", ok, f"|H[2]| = {R.h1.h2.order}, index {R.h1.index}, |H^1| = {R.h1_order}")
        ok = R.po_order == 2 ** (t - 1) and R.rank2 == t - 1
        record("f", ok, f"|Po| = {R.po_order}, rank {R.rank2}")

    def beta():
        B = beta_certificate(K, F.tuple.primes)
        rep.beta = B
        detail = "vacuous (norm -1)" if B.vacuous else f"beta = {B.beta_class}"
        record("g", B.admissible, detail)

    attempt("ab", units)
    attempt("cd", ramification)
    attempt("ef", cohomology)
    attempt("g", beta)
    rep.checks.sort(key=lambda c: c.key)
    return rep
