"""Hot loops of the modular engine.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical results. Set ``QUADRICS_NO_NUMBA=1`` to force the
numpy path (numba is also skipped when it cannot be imported).

All matrices are ``int64``. Modular kernels require ``p < 2**31`` so that a
single product of residues fits in 63 bits. ``p == 0`` in
:func:`pair_products` means plain integer arithmetic; the caller is
responsible for bounding magnitudes.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("QUADRICS_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by QUADRICS_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _inv_mod_nb(a, p):
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@njit(cache=True)
def _echelon_nb(rows, p, stop_when_full):
    k, n = rows.shape
    cap = min(k, n)
    basis = np.zeros((cap, n), dtype=np.int64)
    pivots = np.empty(cap, dtype=np.int64)
    used = np.empty(cap, dtype=np.int64)
    r = 0
    work = np.empty(n, dtype=np.int64)
    for src in range(k):
        if r == cap or (stop_when_full and r == n):
            break
        for c in range(n):
            work[c] = rows[src, c] % p
        for j in range(r):
            f = work[pivots[j]]
            if f != 0:
                for c in range(n):
                    b = basis[j, c]
                    if b != 0:
                        work[c] = (work[c] - f * b) % p
        lead = -1
        for c in range(n):
            if work[c] != 0:
                lead = c
                break
        if lead < 0:
            continue
        inv = _inv_mod_nb(work[lead], p)
        for c in range(n):
            if work[c] != 0:
                work[c] = (work[c] * inv) % p
        for j in range(r):
            f = basis[j, lead]
            if f != 0:
                for c in range(n):
                    w = work[c]
                    if w != 0:
                        basis[j, c] = (basis[j, c] - f * w) % p
        for c in range(n):
            basis[r, c] = work[c]
        pivots[r] = lead
        used[r] = src
        r += 1
    order = np.argsort(pivots[:r])
    return basis[:r][order].copy(), pivots[:r][order].copy(), used[:r][order].copy()


@njit(cache=True)
def _reduce_nb(rows, basis, pivots, p):
    k, n = rows.shape
    r = basis.shape[0]
    out = np.empty((k, n), dtype=np.int64)
    for i in range(k):
        for c in range(n):
            out[i, c] = rows[i, c] % p
        for j in range(r):
            f = out[i, pivots[j]]
            if f != 0:
                for c in range(n):
                    b = basis[j, c]
                    if b != 0:
                        out[i, c] = (out[i, c] - f * b) % p
    return out


@njit(cache=True)
def _pair_products_nb(u, v, pairs, table, n_out, p):
    m = pairs.shape[0]
    na = u.shape[1]
    nb = v.shape[1]
    out = np.zeros((m, n_out), dtype=np.int64)
    for s in range(m):
        a = pairs[s, 0]
        b = pairs[s, 1]
        for i in range(na):
            x = u[a, i]
            if x == 0:
                continue
            for j in range(nb):
                y = v[b, j]
                if y == 0:
                    continue
                col = table[i, j]
                if p > 0:
                    out[s, col] = (out[s, col] + (x * y) % p) % p
                else:
                    out[s, col] += x * y
    return out


# ---------------------------------------------------------------------------
# numpy fallbacks


def _echelon_np(rows, p, stop_when_full):
    a = np.mod(rows, p).astype(np.int64)
    k, n = a.shape
    perm = np.arange(k)
    r = 0
    pivots = []
    for c in range(n):
        if r == k:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        # lowest original index keeps the choice close to the greedy order
        piv = r + nz[np.argmin(perm[r + nz])]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
            perm[[r, piv]] = perm[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows_nz = np.nonzero(col)[0]
        if rows_nz.size:
            a[rows_nz] = (a[rows_nz] - (col[rows_nz, None] * a[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
        if stop_when_full and r == n:
            break
    return a[:r].copy(), np.array(pivots, dtype=np.int64), perm[:r].astype(np.int64)


def _reduce_np(rows, basis, pivots, p):
    out = np.mod(rows, p).astype(np.int64)
    for j in range(basis.shape[0]):
        f = out[:, pivots[j]].copy()
        nz = np.nonzero(f)[0]
        if nz.size:
            out[nz] = (out[nz] - (f[nz, None] * basis[j][None, :]) % p) % p
    return out


def _pair_products_np(u, v, pairs, table, n_out, p):
    m = pairs.shape[0]
    dtype = object if object in (u.dtype, v.dtype) else np.int64
    out = np.zeros((m, n_out), dtype=dtype)
    if m == 0:
        return out
    ua = u[pairs[:, 0]]
    vb = v[pairs[:, 1]]
    rows = np.arange(m)
    for i in range(u.shape[1]):
        x = ua[:, i]
        if not x.any():
            continue
        for j in range(v.shape[1]):
            y = vb[:, j]
            prod = x * y
            if p > 0:
                prod %= p
            if prod.any():
                np.add.at(out, (rows, np.full(m, table[i, j])), prod)
                if p > 0:
                    out %= p
    return out


# ---------------------------------------------------------------------------
# public entry points


def echelon(rows: np.ndarray, p: int, stop_when_full: bool = True, backend: str | None = None):
    """Reduced row echelon form of ``rows`` modulo ``p``.

    Returns ``(basis, pivots, used)``: the nonzero RREF rows sorted by pivot
    column, their pivot columns, and the indices of input rows that are
    linearly independent modulo ``p`` and span the same space.
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        raise ValueError("expected a matrix")
    if rows.shape[0] == 0 or rows.shape[1] == 0:
        n = rows.shape[1]
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    if _use_numba(backend):
        return _echelon_nb(rows, np.int64(p), stop_when_full)
    return _echelon_np(rows, p, stop_when_full)


def reduce_rows(rows: np.ndarray, basis: np.ndarray, pivots: np.ndarray, p: int, backend: str | None = None):
    """Normal forms of ``rows`` modulo the RREF ``basis`` over F_p."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    basis = np.ascontiguousarray(basis, dtype=np.int64)
    pivots = np.ascontiguousarray(pivots, dtype=np.int64)
    if _use_numba(backend) and rows.shape[0] and basis.shape[0]:
        return _reduce_nb(rows, basis, pivots, np.int64(p))
    return _reduce_np(rows, basis, pivots, p)


def pair_products(u, v, pairs, table, n_out: int, p: int, backend: str | None = None):
    """Row ``s`` of the result is the product of ``u[pairs[s,0]]`` and ``v[pairs[s,1]]``.

    ``table[i, j]`` is the output column of monomial ``i`` (of ``u``) times
    monomial ``j`` (of ``v``).
    """
    u = np.ascontiguousarray(u, dtype=np.int64)
    v = np.ascontiguousarray(v, dtype=np.int64)
    pairs = np.ascontiguousarray(pairs, dtype=np.int64).reshape(-1, 2)
    table = np.ascontiguousarray(table, dtype=np.int64)
    if _use_numba(backend):
        return _pair_products_nb(u, v, pairs, table, n_out, np.int64(p))
    return _pair_products_np(u, v, pairs, table, n_out, p)


def _use_numba(backend):
    if backend is None:
        return HAVE_NUMBA
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable")
    return backend == "numba"
