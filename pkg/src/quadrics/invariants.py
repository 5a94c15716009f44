"""Numerical invariants of ideals generated by forms of one degree.

Covers Cohen-Macaulay type, the syzygetic defect ``delta(I)`` (kernel of
``Sym^2(I) -> I^2``) degree by degree, Hilbert-Samuel coefficients from
exact power colengths, the Sally multiplicity, the special-fiber Hilbert
function, and reduction certificates with Huckaba's sum.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .exact import rref_exact
from .gradedla import Engine, GradedSubspace, _as_int_matrix, _row_space_n, kernel, quotient_dim, span
from .idealcore import (
    EqualityCertificate,
    HomogeneousIdeal,
    ProductIdeal,
    colength,
    contained_in,
    equals,
    hilbert_function,
    min_gens,
    power,
    socle,
)
from .polycore import Polynomial, monomials_of_degree

log = logging.getLogger(__name__)


class NoStabilizationError(RuntimeError):
    def __init__(self, message, lengths):
        super().__init__(message)
        self.lengths = lengths


class NotAReductionError(ValueError):
    pass


def generation_degree(ideal: HomogeneousIdeal) -> int:
    degs = ideal.generator_degrees()
    if len(degs) != 1:
        raise ValueError(f"ideal is not generated in a single degree (degrees {degs})")
    return degs[0]


def minimal_forms(ideal: HomogeneousIdeal) -> list:
    """Minimal generators of an ideal generated in one degree, chosen greedily among the given ones."""
    g = generation_degree(ideal)
    chosen: list = []
    dim = 0
    for f in ideal.generators:
        if f.is_zero():
            continue
        k = span(chosen + [f], g, ideal.nvars, ideal.engine).dim
        if k > dim:
            chosen.append(f)
            dim = k
    return chosen


# ---------------------------------------------------------------------------
# type


def cm_type(ideal: HomogeneousIdeal) -> int:
    return socle(ideal).dimension


def is_gorenstein(ideal: HomogeneousIdeal) -> bool:
    return cm_type(ideal) == 1


def linear_socle(ideal: HomogeneousIdeal) -> GradedSubspace:
    """Linear forms ``h`` with ``h * m`` inside ``I``."""
    return socle(ideal).by_degree[1]


# ---------------------------------------------------------------------------
# syzygetic defect


@dataclass
class DeltaProfile:
    generation_degree: int
    rows: list = field(default_factory=list)  # (t, sym2, z1f, i2, delta)
    status: str = "cap-reached"
    square_bound: int | None = None
    engine_status: str = "certified"

    @property
    def deltas(self) -> dict:
        return {t: dl for t, _, _, _, dl in self.rows}

    @property
    def syzygetic(self) -> bool | None:
        """True only for a vanished window; False once some delta is positive; None when unverified."""
        if any(dl > 0 for dl in self.deltas.values()):
            return False
        if self.status == "vanished-for-window":
            return True
        return None


def _syzygy_space(gens: Sequence[Polynomial], g: int, s: int, engine: Engine):
    """Kernel of ``(a_i) -> sum a_i f_i`` with ``a_i`` of degree ``s - g``; coordinates (i, monomial)."""
    d = gens[0].nvars
    monos = monomials_of_degree(d, s - g)
    images = []
    for f in gens:
        for m in monos:
            images.append(f * Polynomial({m: 1}, d))
    return kernel(images, s, d, engine), len(monos)


def delta_profile(ideal: HomogeneousIdeal, cap: int | None = None, stop_at_nonzero: bool = True) -> DeltaProfile:
    """Dimensions of ``delta(I)_t = Sym^2(F)_t - (Z_1 F)_t - (I^2)_t`` from ``t = 2g`` upward."""
    g = generation_degree(ideal)
    d = ideal.nvars
    gens = minimal_forms(ideal)
    nu = len(gens)
    if cap is None:
        cap = 4 * g + 2 * d
    window = max(d, 3)
    square = power(ideal, 2)
    bound = square.artinian_bound()
    pairs = {}
    for i in range(nu):
        for j in range(i, nu):
            pairs[(i, j)] = len(pairs)
    prof = DeltaProfile(g, square_bound=bound, engine_status=ideal.engine.status)
    quiet = 0
    for t in range(2 * g, cap + 1):
        monos_t = monomials_of_degree(d, t - 2 * g)
        nm = len(monos_t)
        sym_dim = len(pairs) * nm
        if t - 2 * g <= 0:
            z1f = 0
        else:
            syz, _ = _syzygy_space(gens, g, t - g, ideal.engine)
            vectors = []
            for z in syz:
                for j in range(nu):
                    vec = [Fraction(0)] * sym_dim
                    for i in range(nu):
                        key = pairs[(min(i, j), max(i, j))]
                        for k in range(nm):
                            c = z[i * nm + k]
                            if c:
                                vec[key * nm + k] += c
                    vectors.append(vec)
            z1f = _rank(vectors, sym_dim, ideal.engine)
        i2 = square.dim(t)
        delta = sym_dim - z1f - i2
        if delta < 0:
            raise AssertionError(f"negative syzygetic defect in degree {t}")
        prof.rows.append((t, sym_dim, z1f, i2, delta))
        if delta > 0:
            quiet = 0
            if stop_at_nonzero:
                prof.status = "nonzero"
                return prof
        elif t > bound:
            quiet += 1
            if quiet >= window:
                prof.status = "vanished-for-window"
                return prof
    prof.status = "nonzero" if any(r[4] for r in prof.rows) else "cap-reached"
    return prof


def _rank(vectors, ncols: int, engine: Engine) -> int:
    if not vectors:
        return 0
    return _row_space_n(_as_int_matrix(vectors, ncols), ncols, 0, 0, engine).dim


def is_syzygetic(ideal: HomogeneousIdeal, cap: int | None = None) -> bool | None:
    return delta_profile(ideal, cap).syzygetic


# ---------------------------------------------------------------------------
# Hilbert-Samuel data


@dataclass
class HilbertSamuelData:
    lengths: dict
    coefficients: list
    window: tuple

    @property
    def e0(self) -> int:
        return self.coefficients[0]

    @property
    def e1(self) -> int:
        return self.coefficients[1]

    def polynomial_value(self, n: int) -> int:
        d = len(self.coefficients) - 1
        return sum((-1) ** i * e * comb(n - 1 + d - i, d - i) for i, e in enumerate(self.coefficients))


def _fit_window(ns: Sequence[int], values: Sequence[int], d: int) -> list:
    """Solve ``L(n) = sum_i (-1)^i e_i C(n-1+d-i, d-i)`` exactly on the window."""
    rows = []
    for n, v in zip(ns, values):
        rows.append([(-1) ** i * comb(n - 1 + d - i, d - i) for i in range(d + 1)] + [v])
    ech, piv = rref_exact(rows)
    if piv != list(range(d + 1)):
        raise ArithmeticError("degenerate interpolation window")
    return [row[-1] for row in ech]


def hilbert_samuel(ideal: HomogeneousIdeal, n_max: int | None = None) -> HilbertSamuelData:
    """Fit the Hilbert-Samuel polynomial through sliding windows of colengths of ``I^n``."""
    d = ideal.nvars
    if n_max is None:
        n_max = d + 6
    lengths: dict = {}

    def length(n):
        if n not in lengths:
            lengths[n] = colength(power(ideal, n))
        return lengths[n]

    prev = None
    for start in range(1, n_max - d + 1):
        ns = list(range(start, start + d + 1))
        coeffs = _fit_window(ns, [length(n) for n in ns], d)
        if prev is not None and coeffs == prev:
            if any(c.denominator != 1 for c in coeffs):
                raise AssertionError(f"non-integral Hilbert coefficients {coeffs}")
            data = HilbertSamuelData(dict(lengths), [int(c) for c in coeffs], (start - 1, start + d))
            if data.e0 <= 0:
                raise AssertionError("multiplicity must be positive")
            return data
        prev = coeffs
    raise NoStabilizationError(f"Hilbert-Samuel fit did not stabilize by n = {n_max}", dict(lengths))


def sally_multiplicity(ideal: HomogeneousIdeal, hs: HilbertSamuelData | None = None) -> int:
    hs = hs or hilbert_samuel(ideal)
    return hs.e1 - hs.e0 + colength(ideal)


def fiber_hilbert(ideal: HomogeneousIdeal, n_max: int | None = None) -> list:
    """``n -> dim (I^n)_{g n}`` for ``n = 0..n_max``."""
    g = generation_degree(ideal)
    if n_max is None:
        n_max = ideal.nvars + 3
    return [1] + [power(ideal, n).dim(g * n) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# reductions


@dataclass
class ReductionCertificate:
    reduction: list
    red: int
    lengths: list  # lambda(I^{n+1} / J I^n) for n = 0 .. red-1
    equality: EqualityCertificate
    inequality: EqualityCertificate | None
    e1: int | None = None
    status: str = "certified"

    @property
    def huckaba_sum(self) -> int:
        return sum(self.lengths)

    @property
    def huckaba_equality(self) -> bool | None:
        return None if self.e1 is None else self.huckaba_sum == self.e1


def _quotient_length(big: HomogeneousIdeal, small: HomogeneousIdeal) -> int:
    bound = small.artinian_bound()
    total = 0
    for t in range(0, bound + 1):
        total += quotient_dim(big.piece(t), small.piece(t))
    return total


def verify_reduction(ideal: HomogeneousIdeal, forms: Sequence[Polynomial], r_max: int = 6, e1: int | None = None) -> ReductionCertificate:
    """Least ``r`` with ``I^{r+1} = J I^r`` plus the lengths entering Huckaba's inequality."""
    g = generation_degree(ideal)
    d = ideal.nvars
    forms = [f for f in forms if not f.is_zero()]
    if len(forms) != d or any(f.degrees() != {g} for f in forms):
        raise ValueError(f"a candidate reduction needs {d} forms of degree {g}")
    red_ideal = HomogeneousIdeal(forms, d, ideal.engine, name="J")
    if not contained_in(red_ideal, ideal):
        raise NotAReductionError("candidate reduction is not contained in the ideal")
    if not red_ideal.is_artinian():
        raise NotAReductionError("candidate reduction is not m-primary")
    previous = None
    lengths = []
    for r in range(0, r_max + 1):
        lower = red_ideal if r == 0 else ProductIdeal(red_ideal, power(ideal, r))
        upper = power(ideal, r + 1)
        try:
            cert = equals(upper, lower)
        except Exception as exc:  # inconclusive: J I^r not Artinian
            raise NotAReductionError(f"J I^{r} is not m-primary: {exc}") from None
        if cert.equal:
            out = ReductionCertificate(forms, r, lengths, cert, previous, e1, cert.status)
            if e1 is not None and out.huckaba_sum < e1:
                raise AssertionError(f"Huckaba sum {out.huckaba_sum} below e1 = {e1}")
            return out
        lengths.append(_quotient_length(upper, lower))
        previous = cert
    raise NotAReductionError(f"not a reduction up to r = {r_max}")


def find_minimal_reduction(ideal: HomogeneousIdeal, seed: int = 0, r_max: int = 6, attempts: int = 12, e1: int | None = None):
    """Random small-integer combinations of the minimal generators, retried until one is a reduction."""
    rng = random.Random(seed)
    gens = minimal_forms(ideal)
    d = ideal.nvars
    last = None
    for _ in range(attempts):
        forms = []
        for _ in range(d):
            f = Polynomial({}, d)
            for gen in gens:
                c = rng.randint(-3, 3)
                if c:
                    f = f + gen * c
            forms.append(f)
        try:
            return verify_reduction(ideal, forms, r_max=r_max, e1=e1)
        except (NotAReductionError, ValueError) as exc:
            last = exc
            log.debug("candidate reduction rejected: %s", exc)
    raise NotAReductionError(f"no minimal reduction found in {attempts} attempts ({last})")


# ---------------------------------------------------------------------------
# summary


@dataclass
class InvariantReport:
    nvars: int
    hilbert_function: list
    length: int
    nu: int
    nu_square: int
    cm_type: int
    linear_socle_dim: int
    delta: DeltaProfile
    hilbert_samuel: HilbertSamuelData | None
    sally: int | None
    fiber: list
    reduction: ReductionCertificate | None
    status: str

    @property
    def gorenstein(self) -> bool:
        return self.cm_type == 1

    @property
    def syzygetic(self):
        return self.delta.syzygetic

    @property
    def e0(self):
        return self.hilbert_samuel.e0 if self.hilbert_samuel else None

    @property
    def e1(self):
        return self.hilbert_samuel.e1 if self.hilbert_samuel else None


def invariant_report(ideal: HomogeneousIdeal, seed: int = 0, max_power: int | None = None, r_max: int = 6) -> InvariantReport:
    hf = hilbert_function(ideal)
    nu = min_gens(ideal).total
    nu2 = min_gens(power(ideal, 2)).total
    soc = socle(ideal)
    delta = delta_profile(ideal)
    hs = hilbert_samuel(ideal, max_power)
    s0 = hs.e1 - hs.e0 + hf.length
    fib = fiber_hilbert(ideal, max_power or None)
    red = find_minimal_reduction(ideal, seed=seed, r_max=r_max, e1=hs.e1)
    return InvariantReport(
        ideal.nvars,
        hf.values,
        hf.length,
        nu,
        nu2,
        soc.dimension,
        soc.by_degree.get(1).dim if 1 in soc.by_degree else 0,
        delta,
        hs,
        s0,
        fib,
        red,
        ideal.engine.status,
    )
