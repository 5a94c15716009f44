"""Exact linear algebra on the spaces R_t of degree-t forms.

A :class:`GradedSubspace` is stored by its reduced row echelon form, which
makes equal subspaces compare equal. Ranks are screened modulo a 31-bit
prime first. Modular rank never exceeds rational rank for an integer
matrix, so a modular full rank already certifies a full subspace. Other
subspaces are lifted to Q by CRT plus rational reconstruction, then checked
exactly: every input row must lie in the lifted span. The check runs modulo
enough primes to exceed an explicit magnitude bound.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels
from .exact import PrimeStream, crt_pair, primitive_integer_row, random_prime, rational_reconstruct, rref_exact
from .polycore import Polynomial, monomials_of_degree

log = logging.getLogger(__name__)

INT64_SAFE = 2**62


class DegreeMismatchError(ValueError):
    pass


class NotContainedError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Engine:
    """Arithmetic context shared by a computation.

    ``char == 0`` means the rationals; ``certified`` then decides whether
    non-full subspaces are lifted to exact rational bases or kept modulo
    ``prime``. ``char == p`` computes exactly over F_p.
    """

    prime: int
    certified: bool = True
    char: int = 0

    @classmethod
    def rational(cls, certified: bool = True, seed: int = 0) -> "Engine":
        return cls(prime=random_prime(random.Random(seed)), certified=certified)

    @classmethod
    def finite_field(cls, p: int) -> "Engine":
        if not (2 < p < 2**31):
            raise ValueError("prime field characteristic must be an odd prime below 2**31")
        from sympy import isprime

        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        return cls(prime=p, certified=True, char=p)

    @property
    def exact(self) -> bool:
        """Whether dimensions computed under this engine are proven."""
        return self.char > 0 or self.certified

    @property
    def status(self) -> str:
        if self.char:
            return f"exact over F_{self.char}"
        return "certified" if self.certified else "screened"


DEFAULT_ENGINE = Engine.rational()


# ---------------------------------------------------------------------------
# degree bases and multiplication tables


@dataclass(frozen=True)
class DegreeBasis:
    nvars: int
    degree: int
    monomials: tuple
    index: dict = field(compare=False, repr=False)

    def __len__(self):
        return len(self.monomials)


@lru_cache(maxsize=None)
def degree_basis(d: int, t: int) -> DegreeBasis:
    monos = monomials_of_degree(d, t)
    return DegreeBasis(d, t, monos, {m: i for i, m in enumerate(monos)})


def space_dim(d: int, t: int) -> int:
    return comb(t + d - 1, d - 1) if t >= 0 else 0


@lru_cache(maxsize=256)
def mult_table(d: int, a: int, b: int) -> np.ndarray:
    """``table[i, j]`` = column in degree ``a+b`` of monomial ``i`` (deg a) times ``j`` (deg b)."""
    ba, bb, bc = degree_basis(d, a), degree_basis(d, b), degree_basis(d, a + b)
    table = np.empty((len(ba), len(bb)), dtype=np.int64)
    for i, m in enumerate(ba.monomials):
        for j, n in enumerate(bb.monomials):
            table[i, j] = bc.index[tuple(x + y for x, y in zip(m, n))]
    return table


# ---------------------------------------------------------------------------
# subspaces


class GradedSubspace:
    """A subspace of R_t with canonical reduced row echelon basis.

    ``rows_mod`` holds the RREF modulo ``engine.prime`` (or the field
    characteristic); ``rows_exact`` holds it over Q when certified. Full
    subspaces keep neither and materialize the identity on demand.
    """

    __slots__ = ("nvars", "degree", "ambient", "pivots", "engine", "certified", "_mod", "_exact", "_int")

    def __init__(self, nvars, degree, engine, pivots, rows_mod=None, rows_exact=None, certified=True, ambient=None):
        self.nvars = nvars
        self.degree = degree
        self.ambient = space_dim(nvars, degree) if ambient is None else ambient
        self.pivots = tuple(int(c) for c in pivots)
        self.engine = engine
        self.certified = certified
        self._mod = rows_mod
        self._exact = rows_exact
        self._int = None

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_exact(self) -> bool:
        return self.engine.char == 0 and (self.is_full or self._exact is not None)

    def rows_mod(self) -> np.ndarray:
        if self._mod is None:
            if self.is_full:
                return np.eye(self.ambient, dtype=np.int64)
            p = self.engine.prime
            self._mod = np.array([[_frac_mod(v, p) for v in row] for row in self._exact], dtype=np.int64).reshape(
                self.dim, self.ambient
            )
        return self._mod

    def rows_exact(self) -> list:
        """RREF rows as lists of Fractions (rational engines in certified form only)."""
        if self.is_full:
            return [[Fraction(int(i == j)) for j in range(self.ambient)] for i in range(self.ambient)]
        if self._exact is None:
            raise ValueError("subspace is only known modulo a prime (screened mode)")
        return [list(r) for r in self._exact]

    def integer_rows(self) -> np.ndarray:
        """Integer rows spanning the subspace, for building products.

        Exact primitive integer rows when available, residues otherwise.
        """
        if self._int is None:
            if self.is_full:
                self._int = np.eye(self.ambient, dtype=np.int64)
            elif self._exact is not None and self.engine.char == 0:
                ints = [primitive_integer_row(r) for r in self._exact]
                self._int = _as_int_matrix(ints, self.ambient)
            else:
                self._int = self.rows_mod()
        return self._int

    @property
    def exact_products(self) -> bool:
        return self.engine.char == 0 and (self.is_full or self._exact is not None)

    def basis_polynomials(self) -> list:
        rows = self.rows_exact() if self.is_exact else self.rows_mod().tolist()
        return [Polynomial.from_vector(r, self.degree, self.nvars) for r in rows]

    def key(self):
        if self.is_full:
            return ("full", self.nvars, self.degree, self.ambient)
        if self._exact is not None:
            return ("exact", self.nvars, self.degree, tuple(tuple(r) for r in self._exact))
        return ("mod", self.engine.prime, self.nvars, self.degree, self.rows_mod().tobytes())

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self.nvars == other.nvars and self.degree == other.degree and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GradedSubspace(d={self.nvars}, t={self.degree}, dim={self.dim}/{self.ambient}, {self.status})"

    @property
    def status(self) -> str:
        if self.engine.char:
            return self.engine.status
        return "certified" if self.certified else "screened"

    def contains(self, vectors) -> bool:
        return self.first_missing(vectors) is None

    def first_missing(self, vectors, exact: bool = True):
        """Index of the first row of ``vectors`` outside the subspace, or ``None``.

        ``exact=False`` declares the rows to be residues modulo the engine
        prime, which forces a modular test.
        """
        rows = _as_int_matrix(vectors, self.ambient) if not isinstance(vectors, np.ndarray) else vectors
        if rows.shape[0] == 0 or self.is_full:
            return None
        if self.engine.char or self._exact is None or not exact:
            p = self.engine.prime
            red = _kernels.reduce_rows(_mod_matrix(rows, p), self.rows_mod(), np.array(self.pivots), p)
            bad = np.nonzero(red.any(axis=1))[0]
            return int(bad[0]) if bad.size else None
        bad = _failing_rows(rows, self._exact, self.pivots)
        return int(bad[0]) if len(bad) else None


def _frac_mod(v, p: int) -> int:
    v = Fraction(v)
    return (v.numerator % p) * pow(v.denominator, -1, p) % p


def _as_int_matrix(rows, n: int) -> np.ndarray:
    """Integer matrix from rows of ints/Fractions; int64 when magnitudes allow."""
    ints = []
    for r in rows:
        r = list(r)
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in r):
            r = primitive_integer_row(r)
        ints.append([int(v) for v in r])
    if not ints:
        return np.zeros((0, n), dtype=np.int64)
    big = max((abs(v) for r in ints for v in r), default=0)
    if big < INT64_SAFE:
        return np.array(ints, dtype=np.int64).reshape(len(ints), n)
    arr = np.empty((len(ints), n), dtype=object)
    for i, r in enumerate(ints):
        arr[i, :] = r
    return arr


def _mod_matrix(rows: np.ndarray, p: int) -> np.ndarray:
    if rows.dtype == object:
        return np.mod(rows, p).astype(np.int64)
    return np.mod(rows, p)


def _max_abs(rows: np.ndarray) -> int:
    if rows.size == 0:
        return 0
    if rows.dtype == object:
        return int(max(abs(int(v)) for v in rows.flat))
    return int(np.abs(rows).max())


# ---------------------------------------------------------------------------
# certification


def _failing_rows(rows: np.ndarray, exact_rows, pivots) -> list:
    """Rows of ``rows`` not in the span of the exact RREF ``exact_rows``.

    The residual ``L*v - sum_j v[pivot_j] * (L*E_j)`` is an integer vector
    bounded by ``L*|v| + r*|v|*|L*E|``; it is checked modulo primes whose
    product exceeds twice that bound, so vanishing residues prove it is zero.
    """
    r = len(pivots)
    n = rows.shape[1]
    if r == 0:
        return [int(i) for i in np.nonzero(np.any(rows != 0, axis=1))[0]]
    lcm = 1
    for row in exact_rows:
        for v in row:
            if v.denominator != 1:
                lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    scaled = [[int(v * lcm) for v in row] for row in exact_rows]
    max_e = max((abs(v) for row in scaled for v in row), default=0)
    max_v = _max_abs(rows)
    bound = lcm * max_v + r * max_v * max_e
    bad: set = set()
    modulus = 1
    piv = np.array(pivots, dtype=np.int64)
    for q in PrimeStream():
        if lcm % q == 0:
            continue
        inv = pow(lcm, -1, q)
        eq = np.array([[(v % q) * inv % q for v in row] for row in scaled], dtype=np.int64).reshape(r, n)
        red = _kernels.reduce_rows(_mod_matrix(rows, q), eq, piv, q)
        bad.update(int(i) for i in np.nonzero(red.any(axis=1))[0])
        modulus *= q
        if modulus > 2 * bound:
            break
    return sorted(bad)


def _lift_rref(sub: np.ndarray, p: int, basis_p: np.ndarray, pivots: np.ndarray, max_primes: int = 12):
    """Exact RREF of the independent rows ``sub`` from its modular RREF.

    Adds primes until rational reconstruction of every entry succeeds and
    the result passes the exact span check; falls back to Bareiss.
    """
    r, n = basis_p.shape
    acc = basis_p.astype(object)
    modulus = p
    primes = PrimeStream(avoid=[p])
    for _ in range(max_primes):
        cand = _reconstruct(acc, modulus)
        if cand is not None and not _failing_rows(sub, cand, pivots):
            return cand
        for _ in range(3):
            q = next(primes)
            bq, pq, _ = _kernels.echelon(_mod_matrix(sub, q), q, stop_when_full=False)
            if bq.shape[0] == r and np.array_equal(pq, pivots):
                break
        else:
            # pivots modulo p disagree with other primes: p itself is unlucky
            break
        acc = np.array(
            [[crt_pair(int(x), modulus, int(y), q) for x, y in zip(ra, rb)] for ra, rb in zip(acc, bq)], dtype=object
        ).reshape(r, n)
        modulus *= q
    log.info("rational reconstruction did not settle; using fraction-free elimination")
    ech, piv = rref_exact(sub.tolist())
    return [tuple(row) for row in ech]


def _reconstruct(acc: np.ndarray, modulus: int):
    out = []
    for row in acc:
        new = []
        for v in row:
            v = int(v)
            if v == 0:
                new.append(Fraction(0))
                continue
            f = rational_reconstruct(v, modulus)
            if f is None:
                return None
            new.append(f)
        out.append(tuple(new))
    return out


def row_space(rows, nvars: int, degree: int, engine: Engine = DEFAULT_ENGINE) -> GradedSubspace:
    """Canonical subspace of R_degree spanned by integer coefficient rows."""
    n = space_dim(nvars, degree)
    if not isinstance(rows, np.ndarray):
        rows = _as_int_matrix(rows, n)
    return _row_space_n(rows, n, nvars, degree, engine)


def _row_space_n(rows: np.ndarray, n: int, nvars: int, degree: int, engine: Engine) -> GradedSubspace:
    p = engine.prime
    if rows.shape[0] == 0:
        return GradedSubspace(nvars, degree, engine, (), np.zeros((0, n), dtype=np.int64), [], True, ambient=n)
    basis, pivots, used = _kernels.echelon(_mod_matrix(rows, p), p)
    r = basis.shape[0]
    if engine.char:
        return GradedSubspace(nvars, degree, engine, pivots, basis, None, True, ambient=n)
    if r == n:
        return GradedSubspace(nvars, degree, engine, pivots, None, None, True, ambient=n)
    if not engine.certified:
        return GradedSubspace(nvars, degree, engine, pivots, basis, None, False, ambient=n)
    while True:
        sub = rows[used]
        exact = _lift_rref(sub, p, basis, pivots)
        bad = _failing_rows(rows, exact, pivots) if rows.shape[0] > r else []
        if not bad:
            return GradedSubspace(nvars, degree, engine, pivots, None, exact, True, ambient=n)
        # modular rank fell short of the rational rank: enlarge and redo exactly
        log.warning("rank mod %d below rational rank in degree %d; recomputing exactly", p, degree)
        ech, piv = rref_exact(np.concatenate([sub, rows[bad]]).tolist())
        exact = [tuple(row) for row in ech]
        if not _failing_rows(rows, exact, piv):
            return GradedSubspace(nvars, degree, engine, piv, None, exact, True, ambient=n)
        ech, piv = rref_exact(rows.tolist())
        return GradedSubspace(nvars, degree, engine, piv, None, [tuple(row) for row in ech], True, ambient=n)


def full_space(nvars: int, degree: int, engine: Engine = DEFAULT_ENGINE) -> GradedSubspace:
    return GradedSubspace(nvars, degree, engine, range(space_dim(nvars, degree)), None, None, True)


def zero_space(nvars: int, degree: int, engine: Engine = DEFAULT_ENGINE) -> GradedSubspace:
    n = space_dim(nvars, degree)
    return GradedSubspace(nvars, degree, engine, (), np.zeros((0, n), dtype=np.int64), [], True)


# ---------------------------------------------------------------------------
# operations


def _homogeneous_rows(polys: Sequence[Polynomial], t: int) -> list:
    out = []
    for f in polys:
        if f.is_zero():
            continue
        if f.degrees() != {t}:
            raise DegreeMismatchError(f"expected forms of degree {t}, got degrees {sorted(f.degrees())}")
        out.append(f.to_vector(t))
    return out


def span(vectors: Sequence[Polynomial], t: int, nvars: int | None = None, engine: Engine = DEFAULT_ENGINE):
    """Canonical basis of the span of homogeneous degree-``t`` forms."""
    if nvars is None:
        if not vectors:
            raise ValueError("nvars required for an empty list")
        nvars = vectors[0].nvars
    rows = _homogeneous_rows(vectors, t)
    if engine.char:
        rows = [[_frac_mod(v, engine.char) for v in r] for r in rows]
    return row_space(rows, nvars, t, engine)


def kernel(images: Sequence[Polynomial], t_target: int, nvars: int | None = None, engine: Engine = DEFAULT_ENGINE):
    """Canonical basis of ``{c : sum_i c_i * images[i] = 0}`` as coordinate vectors.

    Zero images are legal. The result is an exact basis over Q in RREF (or
    over F_p for prime-field engines).
    """
    if nvars is None:
        nz = [f for f in images if not f.is_zero()]
        nvars = nz[0].nvars if nz else 1
    k = len(images)
    n = space_dim(nvars, t_target)
    cols = []
    for f in images:
        if f.is_zero():
            cols.append([0] * n)
        else:
            if f.degrees() != {t_target}:
                raise DegreeMismatchError(f"image of degree {sorted(f.degrees())}, expected {t_target}")
            cols.append(f.to_vector(t_target))
    # transpose: row c of the matrix lists the c-th coefficient of every image
    mat = [[cols[i][c] for i in range(k)] for c in range(n)]
    return nullspace(mat, k, engine)


def nullspace(mat, ncols: int, engine: Engine = DEFAULT_ENGINE) -> list:
    """Canonical kernel basis of the matrix ``mat`` (rows of length ``ncols``)."""
    eng = engine if engine.char else Engine(prime=engine.prime, certified=True)
    if engine.char:
        mat = [[_frac_mod(v, engine.char) for v in r] for r in mat]
    rows = _as_int_matrix(mat, ncols) if mat else np.zeros((0, ncols), dtype=np.int64)
    rs = _row_space_n(rows, ncols, 1, 0, eng) if rows.shape[0] else None
    pivots = rs.pivots if rs is not None else ()
    ech = (rs.rows_exact() if not eng.char else rs.rows_mod().tolist()) if rs is not None else []
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(ech, pivots):
            v[c] = -Fraction(row[f]) if not eng.char else (-int(row[f])) % eng.char
        out.append(v)
    if not out:
        return []
    if eng.char:
        ks = _row_space_n(np.array(out, dtype=np.int64), ncols, 1, 0, eng)
        return [list(map(int, r)) for r in ks.rows_mod()]
    ks = _row_space_n(_as_int_matrix(out, ncols), ncols, 1, 0, eng)
    return ks.rows_exact()


def quotient_dim(a: GradedSubspace, b: GradedSubspace) -> int:
    """``dim A - dim B`` after checking ``B`` is contained in ``A``."""
    if (a.nvars, a.degree) != (b.nvars, b.degree):
        raise DegreeMismatchError("subspaces live in different graded pieces")
    if not b.is_zero and not a.is_full:
        miss = a.first_missing(b.integer_rows(), exact=b.exact_products)
        if miss is not None:
            witness = b.basis_polynomials()[miss] if b.dim < 5000 else None
            raise NotContainedError("second subspace is not contained in the first", witness)
    return a.dim - b.dim


def sum_spaces(spaces: Sequence[GradedSubspace], engine: Engine | None = None) -> GradedSubspace:
    spaces = list(spaces)
    engine = engine or spaces[0].engine
    if any(s.is_full for s in spaces):
        return full_space(spaces[0].nvars, spaces[0].degree, engine)
    nz = [s for s in spaces if not s.is_zero]
    if not nz:
        return zero_space(spaces[0].nvars, spaces[0].degree, engine)
    if len(nz) == 1:
        return nz[0]
    rows = _stack([s.integer_rows() for s in nz])
    return row_space(rows, nz[0].nvars, nz[0].degree, _effective(engine, nz))


def _effective(engine: Engine, spaces) -> Engine:
    if engine.char or not engine.certified:
        return engine
    if all(s.exact_products for s in spaces):
        return engine
    return Engine(prime=engine.prime, certified=False)


def _stack(mats):
    if any(m.dtype == object for m in mats):
        return np.concatenate([m.astype(object) for m in mats])
    return np.concatenate(mats)


def product_rows(a: GradedSubspace, b: GradedSubspace, symmetric: bool = False) -> np.ndarray:
    """Integer rows of all products of basis vectors of ``a`` and ``b``."""
    d = a.nvars
    ua, vb = a.integer_rows(), b.integer_rows()
    table = mult_table(d, a.degree, b.degree)
    n_out = space_dim(d, a.degree + b.degree)
    if symmetric:
        ii, jj = np.triu_indices(ua.shape[0])
    else:
        ii, jj = np.meshgrid(np.arange(ua.shape[0]), np.arange(vb.shape[0]), indexing="ij")
    pairs = np.stack([ii.ravel(), jj.ravel()], axis=1).astype(np.int64)
    exact = a.exact_products and b.exact_products
    if not exact:
        p = a.engine.prime
        return _kernels.pair_products(_mod_matrix(ua, p), _mod_matrix(vb, p), pairs, table, n_out, p)
    terms = min(ua.shape[1], vb.shape[1])
    if ua.dtype != object and vb.dtype != object and _max_abs(ua) * _max_abs(vb) * terms < INT64_SAFE:
        return _kernels.pair_products(ua, vb, pairs, table, n_out, 0)
    return _kernels._pair_products_np(ua.astype(object), vb.astype(object), pairs, table, n_out, 0)


def times_linear(a: GradedSubspace, engine: Engine | None = None) -> GradedSubspace:
    """``R_1 * A`` as a subspace of degree ``a.degree + 1``."""
    engine = engine or a.engine
    if a.is_full:
        return full_space(a.nvars, a.degree + 1, engine)
    if a.is_zero:
        return zero_space(a.nvars, a.degree + 1, engine)
    return product_space(full_space(a.nvars, 1, engine), a, engine)


def product_space(a: GradedSubspace, b: GradedSubspace, engine: Engine | None = None) -> GradedSubspace:
    """``A * B`` inside R_{deg A + deg B}."""
    engine = engine or a.engine
    d, t = a.nvars, a.degree + b.degree
    if a.is_zero or b.is_zero:
        return zero_space(d, t, engine)
    if a.is_full and b.is_full:
        return full_space(d, t, engine)
    if a.is_full and a.degree > 1:
        out = b
        for _ in range(a.degree):
            out = times_linear(out, engine)
        return out
    if b.is_full and b.degree > 1:
        return product_space(b, a, engine)
    symmetric = a is b or a == b
    rows = product_rows(a, b, symmetric=symmetric)
    return row_space(rows, d, t, _effective(engine, [a, b]))
