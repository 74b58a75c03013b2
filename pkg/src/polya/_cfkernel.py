"""numba kernels for long continued-fraction periods.

Callers guarantee D < 2**62, so P < 2**31, Q < 2**32 and every product below
stays inside int64.
"""

import numba
import numpy as np

_LIM = (1 << 62) - 1


@numba.njit(cache=True)
def _walk(D, P0, Q0, s, watch, max_steps):
    P = P0
    Q = Q0
    P1 = 0
    Q1 = 0
    mid = -1
    mid_q = 0
    widx = -1
    k = 0
    while k < max_steps:
        a = (P + s) // Q
        nP = a * Q - P
        nQ = (D - nP * nP) // Q
        if widx < 0 and nQ == watch:
            widx = k
        if k == 0:
            P1 = nP
            Q1 = nQ
            if nQ == Q:
                mid = 0
                mid_q = Q
        else:
            if nP == P1 and nQ == Q1:
                if Q != Q0:
                    return -2, mid, mid_q, widx
                return k, mid, mid_q, widx
            if mid < 0 and (nP == P or nQ == Q):
                mid = k
                mid_q = Q
        P = nP
        Q = nQ
        k += 1
    return -1, mid, mid_q, widx


def walk(D, P0, Q0, s, watch, max_steps):
    length, mid, mid_q, widx = _walk(
        np.int64(D), np.int64(P0), np.int64(Q0), np.int64(s), np.int64(watch), np.int64(max_steps)
    )
    if length == -2:
        from .errors import InconsistencyError

        raise InconsistencyError(f"period of ({P0}+sqrt {D})/{Q0} ends off Q0")
    return int(length), (None if mid < 0 else int(mid)), int(mid_q), int(widx)


@numba.njit(cache=True)
def _chunks(D, s, P, Q, nsteps, out):
    """Pack up to ``nsteps`` partial quotients into int64 matrix products.

    Returns (rows written, steps consumed, P, Q).  Stops early when ``out``
    is full so the caller can resume from the returned state.
    """
    rows = out.shape[0]
    n = 0
    A = np.int64(1)
    B = np.int64(0)
    C = np.int64(0)
    E = np.int64(1)
    k = 0
    while k < nsteps:
        a = (P + s) // Q
        if A > (_LIM - B) // a or C > (_LIM - E) // a:
            out[n, 0] = A
            out[n, 1] = B
            out[n, 2] = C
            out[n, 3] = E
            n += 1
            A = np.int64(1)
            B = np.int64(0)
            C = np.int64(0)
            E = np.int64(1)
            if n == rows:
                return n, k, P, Q
        A, B = A * a + B, A
        C, E = C * a + E, C
        P = a * Q - P
        Q = (D - P * P) // Q
        k += 1
    out[n, 0] = A
    out[n, 1] = B
    out[n, 2] = C
    out[n, 3] = E
    return n + 1, k, P, Q


def quotient_matrices(D, P0, Q0, s, nsteps, chunk_rows):
    """Return the products of [[a_i,1],[1,0]] for i < nsteps as a list of
    int64-sized 4-tuples whose ordered product is the full product."""
    out = np.zeros((chunk_rows, 4), dtype=np.int64)
    mats = []
    P, Q = np.int64(P0), np.int64(Q0)
    left = nsteps
    while left > 0:
        n, k, P, Q = _chunks(np.int64(D), np.int64(s), P, Q, np.int64(left), out)
        mats.extend(tuple(r) for r in out[:n].tolist())
        left -= k
    return mats
