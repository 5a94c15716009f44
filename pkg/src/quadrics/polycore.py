"""Exact multivariate polynomials over the rationals.

Monomials are exponent tuples; a polynomial is an immutable map from
exponent tuples to nonzero :class:`fractions.Fraction` coefficients.
Graded-lex (``x1 > x2 > ... > xd`` within each degree) is the canonical
order for printing and for enumerating degree bases.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # exponent vector, length d

__all__ = [
    "Monomial",
    "Polynomial",
    "PolynomialSyntaxError",
    "UnknownVariableError",
    "LinearChange",
    "SingularMatrixError",
    "monomials_of_degree",
    "parse_polynomial",
    "format_polynomial",
    "apply_change",
    "variable",
]


def mono_degree(m: Monomial) -> int:
    return sum(m)


@lru_cache(maxsize=None)
def monomials_of_degree(d: int, t: int) -> tuple:
    """All exponent vectors of total degree ``t`` in ``d`` variables, graded-lex descending."""
    if t < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(d), t):
        e = [0] * d
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    # combinations_with_replacement over indices in increasing order already
    # yields lex-descending exponent vectors
    return tuple(out)


def _grlex_key(m: Monomial):
    return (-sum(m), tuple(-e for e in m))


class Polynomial:
    """Immutable polynomial with rational coefficients in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, nvars: int = 1):
        if nvars < 1:
            raise ValueError("need at least one variable")
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != nvars or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def from_vector(cls, vec: Sequence, t: int, nvars: int) -> "Polynomial":
        basis = monomials_of_degree(nvars, t)
        if len(vec) != len(basis):
            raise ValueError("vector length does not match degree basis")
        return cls._raw({m: Fraction(c) for m, c in zip(basis, vec) if c}, nvars)

    # mapping-like access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set:
        return {sum(m) for m in self._terms}

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def to_vector(self, t: int) -> list:
        """Coefficient vector in the graded-lex basis of degree ``t``."""
        if any(sum(m) != t for m in self._terms):
            raise ValueError(f"polynomial is not homogeneous of degree {t}")
        basis = monomials_of_degree(self.nvars, t)
        return [self._terms.get(m, Fraction(0)) for m in basis]

    # arithmetic
    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Polynomial._raw({}, self.nvars)
            return Polynomial._raw({m: v * c for m, v in self._terms.items()}, self.nvars)
        other = self._check(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda mc: _grlex_key(mc[0]))

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, nvars={self.nvars})"


def variable(i: int, nvars: int) -> Polynomial:
    e = [0] * nvars
    e[i] = 1
    return Polynomial._raw({tuple(e): Fraction(1)}, nvars)


# ---------------------------------------------------------------------------
# printing


def default_names(nvars: int) -> list:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


def _format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    """Render ``p`` in graded-lex order using the parser's grammar."""
    names = list(names) if names is not None else default_names(p.nvars)
    if p.is_zero():
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(m, names)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# parsing


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariableError(PolynomialSyntaxError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.index = {n: i for i, n in enumerate(names)}
        if len(self.index) != len(names):
            raise ValueError("variable names must be distinct")
        self.nvars = len(names)
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return PolynomialSyntaxError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        acc = self.signed_term()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def signed_term(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            t = self.term()
            return -t if tok[1] == "-" else t
        return self.term()

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            base = Polynomial.constant(Fraction(val), self.nvars)
        elif kind == "var":
            if val not in self.index:
                raise UnknownVariableError(f"unknown variable {val!r}", tok[2], self.text)
            base = variable(self.index[val], self.nvars)
        elif kind == "op" and val == "(":
            base = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                raise self.error("expected ')'", close)
        elif kind == "end":
            raise self.error("unexpected end of input", tok)
        else:
            raise self.error(f"unexpected {val!r}", tok)
        if self.peek()[:2] == ("op", "^"):
            self.take()
            e = self.take()
            if e[0] != "num" or "/" in e[1]:
                raise self.error("exponent must be a nonnegative integer", e)
            base = base ** int(e[1])
        return base


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    """Parse ``text`` over the ordered variable list ``names`` and expand it.

    >>> format_polynomial(parse_polynomial("(y+z)^2 - y^2 - z^2", "xyz"))
    '2*y*z'
    """
    return _Parser(text, list(names)).parse()


# ---------------------------------------------------------------------------
# linear changes of variables


class SingularMatrixError(ValueError):
    pass


def _mat_inverse(a: list) -> list:
    n = len(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [v - f * w for v, w in zip(m[r], m[c])]
    return [row[n:] for row in m]


class LinearChange:
    """Invertible substitution ``x_j -> sum_i matrix[i][j] * x_i``.

    Column ``j`` holds the coefficients of the linear form replacing ``x_j``.
    """

    __slots__ = ("matrix", "_inverse")

    def __init__(self, matrix: Iterable[Iterable]):
        rows = tuple(tuple(Fraction(v) for v in row) for row in matrix)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("change of variables needs a square matrix")
        self.matrix = rows
        self._inverse = _mat_inverse([list(r) for r in rows])

    @classmethod
    def identity(cls, n: int) -> "LinearChange":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_forms(cls, forms: Sequence[Polynomial]) -> "LinearChange":
        """Change sending ``x_j`` to the linear form ``forms[j]``."""
        n = len(forms)
        cols = [f.to_vector(1) if not f.is_zero() else [0] * n for f in forms]
        return cls([[cols[j][i] for j in range(n)] for i in range(n)])

    @property
    def nvars(self) -> int:
        return len(self.matrix)

    def inverse(self) -> "LinearChange":
        return LinearChange(self._inverse)

    def form(self, j: int) -> Polynomial:
        n = self.nvars
        return Polynomial({tuple(int(k == i) for k in range(n)): self.matrix[i][j] for i in range(n)}, n)

    def compose(self, other: "LinearChange") -> "LinearChange":
        """Substitution equal to applying ``self`` first, then ``other``."""
        n = self.nvars
        a, b = other.matrix, self.matrix
        return LinearChange([[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return isinstance(other, LinearChange) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"LinearChange({[[str(v) for v in r] for r in self.matrix]})"


def apply_change(p: Polynomial, change: LinearChange) -> Polynomial:
    """Substitute every variable of ``p`` by its linear form under ``change``."""
    n = change.nvars
    if p.nvars != n:
        raise ValueError(f"dimension mismatch: polynomial in {p.nvars} variables, change in {n}")
    forms = [change.form(j) for j in range(n)]
    powers: dict = {}

    def power(j, e):
        key = (j, e)
        if key not in powers:
            powers[key] = forms[j] ** e
        return powers[key]

    out = Polynomial._raw({}, n)
    for m, c in p.items():
        term = Polynomial.constant(c, n)
        for j, e in enumerate(m):
            if e:
                term = term * power(j, e)
        out = out + term
    return out
