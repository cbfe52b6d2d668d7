"""Hot boolean-matrix kernels with a numba path and a pure-numpy fallback.

All relation kernels work on stacks of square boolean matrices shaped
``(batch, n, n)``. Set ``FO3PDL_NO_NUMBA=1`` to force the numpy path; it is
also used automatically when numba cannot be imported.
"""

import os

import numpy as np

DISABLED = os.environ.get("FO3PDL_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError("numba disabled by FO3PDL_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA


# -- numpy ---------------------------------------------------------------

def compose_np(a, b):
    n = a.shape[-1]
    if n <= 24:
        return (a[:, :, :, None] & b[:, None, :, :]).any(axis=2)
    return np.matmul(a.astype(np.float32), b.astype(np.float32)) > 0.5


def _row_bounds(r):
    n = r.shape[-1]
    ne = r.any(axis=-1)
    lo = np.argmax(r, axis=-1)
    hi = n - 1 - np.argmax(r[..., ::-1], axis=-1)
    return ne, lo, hi


def c_op_np(r, kind):
    """c1..c4 from per-row / per-column extremes of a (batch, n, n) stack."""
    n = r.shape[-1]
    row_ne, row_lo, row_hi = _row_bounds(r)
    col_ne, col_lo, col_hi = _row_bounds(np.swapaxes(r, 1, 2))
    idx = np.arange(n)
    b = idx[None, None, :]
    a = idx[None, :, None]
    if kind in (1, 2):
        side_b = b < row_lo[:, :, None]
    else:
        side_b = b > row_hi[:, :, None]
    if kind in (1, 3):
        side_a = a < col_lo[:, None, :]
    else:
        side_a = a > col_hi[:, None, :]
    return row_ne[:, :, None] & col_ne[:, None, :] & side_b & side_a


def ip_forward_np(r):
    """First forward interval-preservation violation of one (n, n) matrix.

    Scans source pairs a1 <= a2 with nonempty images and every b in the hull
    of R(a1) | R(a2) that has some preimage; a violation is such a b with no
    preimage inside [a1, a2]. Returns ``(a1, a2, b)`` or ``(-1, -1, -1)``.
    """
    n = r.shape[0]
    if n == 0:
        return -1, -1, -1
    ne, lo, hi = _row_bounds(r[None])
    ne, lo, hi = ne[0], lo[0], hi[0]
    col_ne = r.any(axis=0)
    pref = np.zeros((n + 1, n), dtype=np.int32)
    np.cumsum(r, axis=0, out=pref[1:])
    idx = np.arange(n)
    a1 = idx[:, None, None]
    a2 = idx[None, :, None]
    b = idx[None, None, :]
    hull_lo = np.minimum(lo[:, None], lo[None, :])[:, :, None]
    hull_hi = np.maximum(hi[:, None], hi[None, :])[:, :, None]
    inside = (pref[idx + 1][None, :, :] - pref[idx][:, None, :]) > 0
    bad = ((a1 <= a2) & ne[:, None, None] & ne[None, :, None]
           & (hull_lo <= b) & (b <= hull_hi) & col_ne[None, None, :] & ~inside)
    flat = np.flatnonzero(bad)
    if flat.size == 0:
        return -1, -1, -1
    i, j, k = np.unravel_index(flat[0], bad.shape)
    return int(i), int(j), int(k)


# -- numba ---------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _compose_nb(a, b):
        m, n, _ = a.shape
        out = np.zeros((m, n, n), dtype=np.bool_)
        for s in range(m):
            for i in range(n):
                for k in range(n):
                    if a[s, i, k]:
                        for j in range(n):
                            if b[s, k, j]:
                                out[s, i, j] = True
        return out

    @njit(cache=True)
    def _c_op_nb(r, kind):
        m, n, _ = r.shape
        out = np.zeros((m, n, n), dtype=np.bool_)
        row_lo = np.empty(n, dtype=np.int64)
        row_hi = np.empty(n, dtype=np.int64)
        col_lo = np.empty(n, dtype=np.int64)
        col_hi = np.empty(n, dtype=np.int64)
        for s in range(m):
            for i in range(n):
                row_lo[i] = -1
                row_hi[i] = -1
                col_lo[i] = -1
                col_hi[i] = -1
            for i in range(n):
                for j in range(n):
                    if r[s, i, j]:
                        if row_lo[i] < 0:
                            row_lo[i] = j
                        row_hi[i] = j
                        if col_lo[j] < 0:
                            col_lo[j] = i
                        col_hi[j] = i
            for i in range(n):
                if row_lo[i] < 0:
                    continue
                for j in range(n):
                    if col_lo[j] < 0:
                        continue
                    if kind == 1 or kind == 2:
                        ok_b = j < row_lo[i]
                    else:
                        ok_b = j > row_hi[i]
                    if kind == 1 or kind == 3:
                        ok_a = i < col_lo[j]
                    else:
                        ok_a = i > col_hi[j]
                    out[s, i, j] = ok_b and ok_a
        return out

    @njit(cache=True)
    def _ip_forward_nb(r):
        n = r.shape[0]
        lo = np.full(n, -1, dtype=np.int64)
        hi = np.full(n, -1, dtype=np.int64)
        col_ne = np.zeros(n, dtype=np.bool_)
        pref = np.zeros((n + 1, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                pref[i + 1, j] = pref[i, j]
                if r[i, j]:
                    if lo[i] < 0:
                        lo[i] = j
                    hi[i] = j
                    col_ne[j] = True
                    pref[i + 1, j] += 1
        for a1 in range(n):
            if lo[a1] < 0:
                continue
            for a2 in range(a1, n):
                if lo[a2] < 0:
                    continue
                h_lo = min(lo[a1], lo[a2])
                h_hi = max(hi[a1], hi[a2])
                for b in range(h_lo, h_hi + 1):
                    if col_ne[b] and pref[a2 + 1, b] - pref[a1, b] == 0:
                        return a1, a2, b
        return -1, -1, -1

    @njit(cache=True)
    def _ip_batch_nb(rs):
        m = rs.shape[0]
        out = np.zeros(m, dtype=np.bool_)
        for s in range(m):
            a1, _, _ = _ip_forward_nb(rs[s])
            if a1 < 0:
                a1, _, _ = _ip_forward_nb(rs[s].T.copy())
                out[s] = a1 < 0
        return out


def _ip_batch_np(rs):
    return np.array(
        [ip_forward_np(r)[0] < 0 and ip_forward_np(np.ascontiguousarray(r.T))[0] < 0
         for r in rs],
        dtype=bool,
    )


# -- dispatch ------------------------------------------------------------

def compose(a, b):
    if USE_NUMBA:
        return _compose_nb(np.ascontiguousarray(a), np.ascontiguousarray(b))
    return compose_np(a, b)


def c_op(r, kind):
    if USE_NUMBA:
        return _c_op_nb(np.ascontiguousarray(r), kind)
    return c_op_np(r, kind)


def ip_forward(r):
    if USE_NUMBA:
        a1, a2, b = _ip_forward_nb(np.ascontiguousarray(r))
        return int(a1), int(a2), int(b)
    return ip_forward_np(r)


def ip_batch(rs):
    """Boolean mask: which matrices of a (batch, n, n) stack are interval-preserving."""
    rs = np.ascontiguousarray(rs, dtype=bool)
    if USE_NUMBA:
        return _ip_batch_nb(rs)
    return _ip_batch_np(rs)


def set_backend(use_numba):
    """Switch backends at runtime (benchmarks and cross-checking tests)."""
    global USE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    USE_NUMBA = bool(use_numba)
