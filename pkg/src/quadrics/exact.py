"""Exact rational linear algebra and modular helpers.

Fraction-free (Bareiss) elimination is the exact fallback and the
independent oracle for the modular route; rational reconstruction and CRT
lift modular echelon forms back to the rationals.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from sympy import nextprime

PRIME_LO = 2**30
PRIME_HI = 2**31


def random_prime(rng: random.Random) -> int:
    """A prime in ``[2**30, 2**31)`` drawn from ``rng``."""
    while True:
        p = int(nextprime(rng.randrange(PRIME_LO, PRIME_HI - 2**20)))
        if p < PRIME_HI:
            return p


class PrimeStream:
    """Deterministic sequence of distinct 31-bit primes, descending from 2**31."""

    def __init__(self, avoid: Sequence[int] = ()):
        self._avoid = set(avoid)
        self._cursor = PRIME_HI

    def __iter__(self):
        return self

    def __next__(self) -> int:
        from sympy import prevprime

        while True:
            self._cursor = int(prevprime(self._cursor))
            if self._cursor < PRIME_LO:
                raise RuntimeError("exhausted 31-bit primes")
            if self._cursor not in self._avoid:
                return self._cursor


def rational_reconstruct(a: int, m: int):
    """Return ``Fraction(r, s)`` with ``r/s = a mod m`` and ``|r|, s <= sqrt(m/2)``, or ``None``."""
    a %= m
    if a == 0:
        return Fraction(0)
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def crt_pair(x1: int, m1: int, x2: int, m2: int) -> int:
    """Combine ``x1 mod m1`` and ``x2 mod m2`` (coprime moduli) into a residue mod ``m1*m2``."""
    t = ((x2 - x1) * pow(m1, -1, m2)) % m2
    return x1 + m1 * t


def to_integer_row(row: Sequence) -> list:
    """Scale a rational vector by the lcm of its denominators."""
    fr = [Fraction(v) for v in row]
    lcm = 1
    for v in fr:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return [int(v * lcm) for v in fr]


def primitive_integer_row(row: Sequence) -> list:
    ints = to_integer_row(row)
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def rref_exact(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form over Q by fraction-free elimination.

    Returns ``(basis, pivots)`` where ``basis`` is a list of Fraction rows.
    """
    mat = [to_integer_row(r) for r in rows]
    mat = [r for r in mat if any(r)]
    if not mat:
        return [], []
    n = len(mat[0])
    m = len(mat)
    prev = 1
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, m) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        a = mat[r][c]
        for i in range(r + 1, m):
            b = mat[i][c]
            row_i = mat[i]
            row_r = mat[r]
            # Bareiss step: exact division by the previous pivot
            mat[i] = [(a * row_i[j] - b * row_r[j]) // prev for j in range(n)]
        prev = a
        pivots.append(c)
        r += 1
        if r == m:
            break
    ech = [[Fraction(v) for v in row] for row in mat[:r]]
    for k in range(r - 1, -1, -1):
        c = pivots[k]
        inv = 1 / ech[k][c]
        ech[k] = [v * inv for v in ech[k]]
        for i in range(k):
            f = ech[i][c]
            if f:
                ech[i] = [u - f * w for u, w in zip(ech[i], ech[k])]
    return ech, pivots


def nullspace_exact(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of ``{v : rows . v = 0}`` over Q, canonical (itself in RREF)."""
    basis, pivots = rref_exact(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(basis, pivots):
            v[c] = -row[f]
        out.append(v)
    if not out:
        return []
    return rref_exact(out)[0]


def rank_exact(rows: Sequence[Sequence]) -> int:
    return len(rref_exact(rows)[1]) if rows else 0
