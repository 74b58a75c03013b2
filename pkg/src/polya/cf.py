"""Continued-fraction engine for quadratic irrationals (P0 + sqrt(D)) / Q0.

The walk carries exact integer states (P, Q) and the partial quotient a:

    a_k = floor((P_k + sqrt D) / Q_k)
    P_{k+1} = a_k Q_k - P_k
    Q_{k+1} = (D - P_{k+1}^2) / Q_k

For the two starting points used here, sqrt(D) and (1 + sqrt D)/2, the
expansion is purely periodic from index 1 and the period is detected when
the state (P_1, Q_1) recurs.  With p_k/q_k the convergents and
G_k = Q0 p_k - P0 q_k, the element (G_k + q_k sqrt D)/Q0 has norm
(-1)^(k+1) Q_{k+1}/Q0.

Short periods are walked in pure Python.  Long ones switch to a numba kernel
when every intermediate fits in int64 (D < 2**62); otherwise the Python walk
continues until its step budget runs out.  Convergents for long periods are
built by multiplying the 2x2 partial-quotient matrices: the numba kernel packs
runs of quotients into int64 matrices and the product tree finishes in gmpy2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded, InconsistencyError

INT64_SAFE_D = 1 << 62
PY_FAST_STEPS = 20_000
DEFAULT_MAX_STEPS = 2_000_000_000
PY_MAX_STEPS = 5_000_000
_CHUNK_ROWS = 1 << 20


@dataclass(frozen=True)
class Cycle:
    """Summary of one period of the expansion of (P0 + sqrt D)/Q0.

    ``mid`` is the index m with P_m = P_{m+1} (even period, length 2m) or
    Q_m = Q_{m+1} (odd period, length 2m+1); ``mid_q`` is Q_m.  ``watch_index``
    is the first k in [0, length) with Q_{k+1} equal to the watched value.
    """

    D: int
    P0: int
    Q0: int
    length: int
    mid: int
    mid_q: int
    watch: int | None
    watch_index: int | None


def _walk_py(D, P0, Q0, s, watch, max_steps):
    P, Q = P0, Q0
    P1 = Q1 = None
    mid = mid_q = None
    watch_index = None
    k = 0
    while k < max_steps:
        a = (P + s) // Q
        nP = a * Q - P
        nQ = (D - nP * nP) // Q
        if watch_index is None and nQ == watch:
            watch_index = k
        if k == 0:
            P1, Q1 = nP, nQ
            if nQ == Q:
                mid, mid_q = 0, Q
        else:
            if nP == P1 and nQ == Q1:
                if Q != Q0:
                    raise InconsistencyError(f"period of ({P0}+sqrt {D})/{Q0} ends off Q0")
                return k, mid, mid_q, watch_index
            if mid is None and (nP == P or nQ == Q):
                mid, mid_q = k, Q
        P, Q = nP, nQ
        k += 1
    return None, mid, mid_q, watch_index


_numba_kernels = None


def _kernels():
    global _numba_kernels
    if _numba_kernels is None:
        from . import _cfkernel

        _numba_kernels = _cfkernel
    return _numba_kernels


@lru_cache(maxsize=4096)
def walk(D: int, P0: int, Q0: int, watch: int | None = None, max_steps: int = DEFAULT_MAX_STEPS) -> Cycle:
    """Walk one full period and return its :class:`Cycle` summary."""
    D, P0, Q0 = int(D), int(P0), int(Q0)
    s = math.isqrt(D)
    if s * s == D:
        raise ValueError(f"{D} is a perfect square")
    if (D - P0 * P0) % Q0:
        raise ValueError("Q0 must divide D - P0^2")
    w = -1 if watch is None else int(watch)
    length, mid, mid_q, widx = _walk_py(D, P0, Q0, s, w, min(PY_FAST_STEPS, max_steps))
    if length is None:
        if D < INT64_SAFE_D:
            length, mid, mid_q, widx = _kernels().walk(D, P0, Q0, s, w, max_steps)
            if length < 0:
                length = None
        else:
            length, mid, mid_q, widx = _walk_py(D, P0, Q0, s, w, min(PY_MAX_STEPS, max_steps))
        if length is None:
            raise BudgetExceeded(
                f"continued fraction of ({P0}+sqrt {D})/{Q0} has period longer than "
                f"{max_steps if D < INT64_SAFE_D else min(PY_MAX_STEPS, max_steps)} steps"
            )
    if mid is None or (2 * mid != length and 2 * mid + 1 != length):
        raise InconsistencyError(f"period {length} of ({P0}+sqrt {D})/{Q0} is not symmetric about {mid}")
    return Cycle(D, P0, Q0, int(length), int(mid), int(mid_q), watch, None if widx is None or widx < 0 else int(widx))


def _mat_mul(x, y):
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def _tree_product(mats: list) -> tuple:
    """Ordered product of 2x2 matrices by pairwise reduction."""
    if not mats:
        return (1, 0, 0, 1)
    big = False
    while len(mats) > 1:
        if not big and max(abs(v) for v in mats[0]).bit_length() > 4096:
            import gmpy2

            mats = [tuple(gmpy2.mpz(v) for v in m) for m in mats]
            big = True
        nxt = [_mat_mul(mats[i], mats[i + 1]) for i in range(0, len(mats) - 1, 2)]
        if len(mats) % 2:
            nxt.append(mats[-1])
        mats = nxt
    return mats[0]


def convergent(D: int, P0: int, Q0: int, k: int) -> tuple:
    """Return (G_k, q_k) for the expansion of (P0 + sqrt D)/Q0.

    This is the product of the matrices [[a_i, 1], [1, 0]] for i = 0..k,
    whose first column is (p_k, q_k).
    """
    D, P0, Q0 = int(D), int(P0), int(Q0)
    s = math.isqrt(D)
    n = k + 1
    if n <= PY_FAST_STEPS or D >= INT64_SAFE_D:
        P, Q = P0, Q0
        pm, p, qm, q = 0, 1, 1, 0  # p_{-2}, p_{-1}, q_{-2}, q_{-1}
        if n <= PY_FAST_STEPS:
            for _ in range(n):
                a = (P + s) // Q
                pm, p = p, a * p + pm
                qm, q = q, a * q + qm
                P = a * Q - P
                Q = (D - P * P) // Q
            return Q0 * p - P0 * q, q
        mats = []
        for _ in range(n):
            a = (P + s) // Q
            mats.append((a, 1, 1, 0))
            P = a * Q - P
            Q = (D - P * P) // Q
        M = _tree_product(mats)
    else:
        M = _tree_product(_kernels().quotient_matrices(D, P0, Q0, s, n, _CHUNK_ROWS))
    p, q = M[0], M[2]
    return Q0 * p - P0 * q, q
