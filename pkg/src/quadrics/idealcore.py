"""Homogeneous ideals as sequences of graded pieces.

An ideal is known through ``piece(t)``, the canonical subspace I_t of R_t.
Pieces are built upward, ``I_t = R_1 * I_{t-1} + span(new generators)``,
and a full piece makes every later piece full for free. Products and
powers never expand generator products symbolically: ``(IJ)_t`` is formed
from cached pieces of the factors.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .gradedla import (
    DEFAULT_ENGINE,
    Engine,
    GradedSubspace,
    full_space,
    nullspace,
    product_space,
    row_space,
    space_dim,
    span,
    sum_spaces,
    times_linear,
    zero_space,
)
from .polycore import Polynomial, apply_change, monomials_of_degree, LinearChange


class NotArtinianError(ValueError):
    """No full graded piece was found below the search cap."""

    def __init__(self, message, cap=None, partial=None):
        super().__init__(message)
        self.cap = cap
        self.partial = partial


class InconclusiveError(RuntimeError):
    """An equality test ran out of degrees before either ideal became full."""


def default_cap(nvars: int, max_gen_degree: int) -> int:
    # 4d + 4 for quadrics; shifted along with the generator degree for powers
    return max_gen_degree + 4 * nvars + 2


class HomogeneousIdeal:
    """Ideal of K[x_1..x_d] generated by homogeneous polynomials."""

    def __init__(self, generators: Sequence[Polynomial], nvars: int | None = None, engine: Engine = DEFAULT_ENGINE, name: str = ""):
        gens = [g for g in generators if not g.is_zero()]
        if nvars is None:
            if not gens:
                raise ValueError("nvars required for the zero ideal")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("generators live in different rings")
            if not g.is_homogeneous():
                raise ValueError(f"generator {g!r} is not homogeneous")
        self.nvars = nvars
        self.engine = engine
        self.name = name
        self._gens = tuple(gens)
        self._cache: dict = {}
        self._lock = threading.Lock()
        self._powers: dict = {1: self}

    # -- generators -----------------------------------------------------
    @property
    def generators(self) -> tuple:
        return self._gens

    def generator_degrees(self) -> list:
        return sorted({g.degree() for g in self._gens})

    @property
    def max_generator_degree(self) -> int:
        degs = self.generator_degrees()
        return degs[-1] if degs else 0

    def _new_generators(self, t: int):
        """Subspace spanned by the generators of degree exactly ``t`` (or None)."""
        gs = [g for g in self._gens if g.degree() == t]
        if not gs:
            return None
        return span(gs, t, self.nvars, self.engine)

    # -- pieces ---------------------------------------------------------
    def piece(self, t: int) -> GradedSubspace:
        """Canonical basis of I_t; cached."""
        if t < 0:
            return zero_space(self.nvars, 0, self.engine)
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        degs = self.generator_degrees()
        if not degs or t < degs[0]:
            out = zero_space(self.nvars, t, self.engine)
            with self._lock:
                self._cache.setdefault(t, out)
            return out
        start = t
        while start > degs[0] and (start - 1) not in self._cache:
            start -= 1
        for s in range(start, t + 1):
            if s in self._cache:
                continue
            prev = self._cache.get(s - 1)
            parts = []
            if prev is not None:
                if prev.is_full:
                    out = full_space(self.nvars, s, self.engine)
                    with self._lock:
                        self._cache.setdefault(s, out)
                    continue
                parts.append(times_linear(prev, self.engine))
            new = self._new_generators(s)
            if new is not None:
                parts.append(new)
            out = sum_spaces(parts, self.engine) if parts else zero_space(self.nvars, s, self.engine)
            with self._lock:
                self._cache.setdefault(s, out)
        return self._cache[t]

    def dim(self, t: int) -> int:
        return self.piece(t).dim

    def artinian_bound(self, cap: int | None = None) -> int:
        """Least ``t`` with ``I_t = R_t``; raises :class:`NotArtinianError` past ``cap``."""
        if cap is None:
            cap = default_cap(self.nvars, self.max_generator_degree)
        degs = self.generator_degrees()
        if not degs:
            raise NotArtinianError("zero ideal is not Artinian", cap)
        for t in range(degs[0], cap + 1):
            if self.piece(t).is_full:
                return t
        raise NotArtinianError(f"not Artinian up to degree {cap}", cap)

    def is_artinian(self, cap: int | None = None) -> bool:
        try:
            self.artinian_bound(cap)
            return True
        except NotArtinianError:
            return False

    # -- arithmetic -----------------------------------------------------
    def __mul__(self, other: "HomogeneousIdeal") -> "HomogeneousIdeal":
        return multiply(self, other)

    def __pow__(self, n: int) -> "HomogeneousIdeal":
        return power(self, n)

    def __add__(self, other: "HomogeneousIdeal") -> "HomogeneousIdeal":
        return ideal_sum(self, other)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} d={self.nvars} gens={len(self._gens)}>"


class MaximalPower(HomogeneousIdeal):
    """``m^k``: every piece of degree at least ``k`` is full."""

    def __init__(self, nvars: int, k: int, engine: Engine = DEFAULT_ENGINE):
        super().__init__([], nvars, engine, name=f"m^{k}")
        self.k = k

    @property
    def generators(self) -> tuple:
        return tuple(Polynomial({m: 1}, self.nvars) for m in monomials_of_degree(self.nvars, self.k))

    def generator_degrees(self) -> list:
        return [self.k]

    def piece(self, t: int) -> GradedSubspace:
        if t >= self.k:
            return full_space(self.nvars, t, self.engine)
        return zero_space(self.nvars, max(t, 0), self.engine)


class ProductIdeal(HomogeneousIdeal):
    """``I * J`` computed degreewise from the cached pieces of the factors."""

    def __init__(self, left: HomogeneousIdeal, right: HomogeneousIdeal, name: str = ""):
        if left.nvars != right.nvars:
            raise ValueError("factors live in different rings")
        super().__init__([], left.nvars, left.engine, name=name)
        self.left = left
        self.right = right

    @property
    def generators(self) -> tuple:
        return tuple(f * g for f in self.left.generators for g in self.right.generators)

    def generator_degrees(self) -> list:
        return sorted({a + b for a in self.left.generator_degrees() for b in self.right.generator_degrees()})

    def _new_generators(self, t: int):
        parts = []
        ldeg, rdeg = self.left.generator_degrees(), self.right.generator_degrees()
        for a in ldeg:
            b = t - a
            if b not in rdeg:
                continue
            parts.append(self._block(self.left, a, self.right, b, rdeg))
        if not parts:
            return None
        return sum_spaces(parts, self.engine)

    def _block(self, left, a, right, b, rdeg):
        t = a + b
        la, rb = left.piece(a), right.piece(b)
        # R_a * J_b is just J_t when J has no generators in degrees (b, t]
        if la.is_full and not any(b < s <= t for s in rdeg):
            return right.piece(t)
        ldeg = left.generator_degrees()
        if rb.is_full and not any(a < s <= t for s in ldeg):
            return left.piece(t)
        if left is right and a == b:
            return product_space(la, la, self.engine)
        return product_space(la, rb, self.engine)


def ideal_from_strings(texts: Sequence[str], names: Sequence[str], engine: Engine = DEFAULT_ENGINE, name: str = ""):
    from .polycore import parse_polynomial

    return HomogeneousIdeal([parse_polynomial(s, names) for s in texts], len(names), engine, name=name)


def multiply(a: HomogeneousIdeal, b: HomogeneousIdeal) -> HomogeneousIdeal:
    return ProductIdeal(a, b)


def power(ideal: HomogeneousIdeal, n: int) -> HomogeneousIdeal:
    """``I^n`` by binary splitting over the memoized lower powers."""
    if n < 1:
        raise ValueError("power exponent must be positive")
    hit = ideal._powers.get(n)
    if hit is not None:
        return hit
    if isinstance(ideal, MaximalPower):
        out = MaximalPower(ideal.nvars, ideal.k * n, ideal.engine)
    else:
        lo = n // 2
        out = ProductIdeal(power(ideal, lo), power(ideal, n - lo), name=f"{ideal.name or 'I'}^{n}")
    with ideal._lock:
        ideal._powers.setdefault(n, out)
    return ideal._powers[n]


def ideal_sum(a: HomogeneousIdeal, b: HomogeneousIdeal) -> HomogeneousIdeal:
    return HomogeneousIdeal(list(a.generators) + list(b.generators), a.nvars, a.engine)


def maximal_ideal(nvars: int, engine: Engine = DEFAULT_ENGINE) -> HomogeneousIdeal:
    return MaximalPower(nvars, 1, engine)


def change_ideal(ideal: HomogeneousIdeal, change: LinearChange, name: str = "") -> HomogeneousIdeal:
    return HomogeneousIdeal([apply_change(g, change) for g in ideal.generators], ideal.nvars, ideal.engine, name=name)


# ---------------------------------------------------------------------------
# comparisons


@dataclass
class EqualityCertificate:
    equal: bool
    checked_through: int
    degree: int | None = None
    witness: Polynomial | None = None
    status: str = "certified"

    def __bool__(self):
        return self.equal


def _spaces_equal(a: GradedSubspace, b: GradedSubspace) -> bool:
    if a.dim != b.dim:
        return False
    if a.is_full:
        return True
    if a.is_exact and b.is_exact:
        return a == b
    return np.array_equal(a.rows_mod(), b.rows_mod())


def _witness(a: GradedSubspace, b: GradedSubspace):
    """A basis vector of one subspace missing from the other."""
    for big, small in ((a, b), (b, a)):
        if big.is_zero or big.ambient > 2000:
            continue
        rows = big.integer_rows()
        miss = small.first_missing(rows, exact=big.exact_products)
        if miss is not None:
            return _poly_from_row(rows[miss], big)
    return None


def _poly_from_row(row, space: GradedSubspace) -> Polynomial:
    return Polynomial.from_vector([int(v) for v in row], space.degree, space.nvars)


def equals(a: HomogeneousIdeal, b: HomogeneousIdeal, t_max: int | None = None) -> EqualityCertificate:
    """Degreewise equality up to the point where both ideals are full."""
    if a.nvars != b.nvars:
        raise ValueError("ideals live in different rings")
    if t_max is None:
        t_max = max(default_cap(a.nvars, a.max_generator_degree), default_cap(b.nvars, b.max_generator_degree))
    status = "certified" if a.engine.exact and b.engine.exact else "screened"
    for t in range(0, t_max + 1):
        pa, pb = a.piece(t), b.piece(t)
        if not _spaces_equal(pa, pb):
            return EqualityCertificate(False, t, t, _witness(pa, pb), status)
        if pa.is_full and pb.is_full:
            return EqualityCertificate(True, t, status=status)
    raise InconclusiveError(f"neither ideal became Artinian below degree {t_max}")


def contained_in(a: HomogeneousIdeal, b: HomogeneousIdeal, t_max: int | None = None) -> bool:
    """``a`` is contained in ``b``: generator pieces of ``a`` lie in the pieces of ``b``."""
    for t in a.generator_degrees():
        pa, pb = a.piece(t), b.piece(t)
        if pb.is_full or pa.is_zero:
            continue
        if pb.first_missing(pa.integer_rows(), exact=pa.exact_products) is not None:
            return False
    return True


# ---------------------------------------------------------------------------
# Hilbert function and generators


@dataclass
class HilbertFunctionTable:
    values: list
    bound: int

    @property
    def length(self) -> int:
        return sum(self.values)

    def __getitem__(self, t):
        return self.values[t] if 0 <= t < len(self.values) else 0


def hilbert_function(ideal: HomogeneousIdeal, cap: int | None = None) -> HilbertFunctionTable:
    """``h(t) = dim (R/I)_t`` up to the Artinian bound."""
    try:
        n = ideal.artinian_bound(cap)
    except NotArtinianError as exc:
        reached = exc.cap if exc.cap is not None else 0
        partial = [space_dim(ideal.nvars, t) - ideal.dim(t) for t in range(reached + 1)]
        raise NotArtinianError(str(exc), exc.cap, partial) from None
    values = [space_dim(ideal.nvars, t) - ideal.dim(t) for t in range(n + 1)]
    while len(values) > 1 and values[-1] == 0:
        values.pop()
    return HilbertFunctionTable(values, n)


def colength(ideal: HomogeneousIdeal, cap: int | None = None) -> int:
    return hilbert_function(ideal, cap).length


@dataclass
class GeneratorProfile:
    total: int
    by_degree: dict = field(default_factory=dict)


def min_gens(ideal: HomogeneousIdeal) -> GeneratorProfile:
    """Minimal number of generators, by degree: ``dim I_t - dim (R_1 I_{t-1})``."""
    by_degree = {}
    for t in ideal.generator_degrees():
        cur = ideal.piece(t)
        prev = ideal.piece(t - 1) if t > 0 else None
        lower = times_linear(prev, ideal.engine).dim if prev is not None and not prev.is_zero else 0
        k = cur.dim - lower
        if k:
            by_degree[t] = k
    return GeneratorProfile(sum(by_degree.values()), by_degree)


def minimal_generators(ideal: HomogeneousIdeal, degree: int) -> list:
    """Forms of ``degree`` completing ``R_1 I_{degree-1}`` to ``I_degree`` (exact engines)."""
    cur = ideal.piece(degree)
    lower = times_linear(ideal.piece(degree - 1), ideal.engine) if degree > 0 else zero_space(ideal.nvars, 0, ideal.engine)
    comp = complement(cur, lower)
    return comp.basis_polynomials()


# ---------------------------------------------------------------------------
# socle


class _Residues:
    """Field arithmetic for one ideal: Fractions over Q, ints modulo p otherwise."""

    def __init__(self, engine: Engine):
        self.char = engine.char if engine.char else (0 if engine.certified else engine.prime)
        self.engine = engine if self.char == engine.char else Engine(prime=self.char, char=self.char)

    def rows(self, space: GradedSubspace) -> list:
        if space.is_full:
            return space.rows_exact() if self.char == 0 else [list(map(int, r)) for r in space.rows_mod()]
        if self.char == 0:
            return space.rows_exact()
        return [list(map(int, r)) for r in space.rows_mod()]

    def neg(self, v):
        return -v if self.char == 0 else (-int(v)) % self.char

    def sub_mul(self, v, f, w):
        if self.char == 0:
            return v - f * w
        return (int(v) - int(f) * int(w)) % self.char

    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    def space(self, rows, nvars, degree):
        if not rows:
            return zero_space(nvars, degree, self.engine)
        if self.char:
            rows = [[int(v) % self.char for v in r] for r in rows]
        return row_space(rows, nvars, degree, self.engine)


def _normal_form(vec, rows, pivots, ar: _Residues):
    out = list(vec)
    for row, c in zip(rows, pivots):
        f = out[c]
        if f:
            out = [ar.sub_mul(v, f, w) for v, w in zip(out, row)]
    return out


def complement(big: GradedSubspace, small: GradedSubspace) -> GradedSubspace:
    """Canonical complement of ``small`` inside ``big``: normal forms of ``big`` modulo ``small``, row reduced."""
    ar = _Residues(big.engine)
    rows_small = ar.rows(small) if not small.is_zero else []
    out = []
    for v in ar.rows(big):
        nf = _normal_form(v, rows_small, small.pivots, ar)
        if any(nf):
            out.append(nf)
    return ar.space(out, big.nvars, big.degree)


def colon_by_maximal(ideal: HomogeneousIdeal, t: int) -> GradedSubspace:
    """``{v in R_t : x_i v in I_{t+1} for all i}``."""
    d = ideal.nvars
    nxt = ideal.piece(t + 1)
    n_t = space_dim(d, t)
    ar = _Residues(ideal.engine)
    if nxt.is_full:
        return full_space(d, t, ar.engine)
    rows = ar.rows(nxt)
    pivots = nxt.pivots
    piv_row = {c: k for k, c in enumerate(pivots)}
    free = [c for c in range(nxt.ambient) if c not in piv_row]
    free_pos = {c: k for k, c in enumerate(free)}
    q = len(free)
    # quotient coordinates of each basis monomial of R_{t+1}
    basis_next = {m: k for k, m in enumerate(monomials_of_degree(d, t + 1))}

    def coords(col):
        vec = [ar.zero()] * q
        if col in free_pos:
            vec[free_pos[col]] = ar.one()
        else:
            row = rows[piv_row[col]]
            for c in free:
                if row[c]:
                    vec[free_pos[c]] = ar.neg(row[c])
        return vec

    mat = []
    for m in monomials_of_degree(d, t):
        line = []
        for i in range(d):
            shifted = list(m)
            shifted[i] += 1
            line.extend(coords(basis_next[tuple(shifted)]))
        mat.append(line)
    # kernel of v -> v * mat, i.e. nullspace of the transpose
    trans = [[mat[k][j] for k in range(n_t)] for j in range(d * q)]
    ker = nullspace(trans, n_t, ar.engine)
    return ar.space(ker, d, t)


@dataclass
class Socle:
    by_degree: dict

    @property
    def dimension(self) -> int:
        return sum(s.dim for s in self.by_degree.values())

    def dims(self) -> dict:
        return {t: s.dim for t, s in self.by_degree.items() if s.dim}


def socle(ideal: HomogeneousIdeal, cap: int | None = None) -> Socle:
    """Complement bases of ``(I : m)_t`` modulo ``I_t`` for every degree below the Artinian bound."""
    n = ideal.artinian_bound(cap)
    out = {}
    for t in range(0, n):
        colon = colon_by_maximal(ideal, t)
        out[t] = complement(colon, ideal.piece(t))
    return Socle(out)
