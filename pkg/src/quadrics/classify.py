"""Structure of submaximally generated quadric ideals.

A Gorenstein ideal ``I`` with Hilbert function ``(1, d, 1)`` defines a
nondegenerate symmetric bilinear form on linear forms through
``u * v = C(u, v) h (mod I)``; everything here is built on that matrix:
signatures by rational congruence, normal forms with a change-of-variables
certificate, the dual-basis presentation, and the splitting off of the
linear socle for higher type. The ``d = 3`` analyses of five and four
quadrics sit on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from sympy import factorint

from .exact import nullspace_exact, rank_exact
from .gradedla import Engine, span
from .idealcore import (
    EqualityCertificate,
    HomogeneousIdeal,
    MaximalPower,
    change_ideal,
    equals,
    hilbert_function,
    min_gens,
    power,
)
from .invariants import (
    cm_type,
    delta_profile,
    find_minimal_reduction,
    hilbert_samuel,
    linear_socle,
    verify_reduction,
)
from .polycore import (
    LinearChange,
    Polynomial,
    SingularMatrixError,
    _mat_inverse,
    default_names,
    format_polynomial,
    monomials_of_degree,
    variable,
)


class ClassificationError(ValueError):
    """Input outside the hypotheses of a structure result."""


class SingularFormError(ValueError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# helpers


def _exact_ideal(ideal: HomogeneousIdeal) -> HomogeneousIdeal:
    if ideal.engine.char:
        raise ClassificationError("classification works over the rationals only")
    if ideal.engine.certified:
        return ideal
    return HomogeneousIdeal(ideal.generators, ideal.nvars, Engine(prime=ideal.engine.prime), ideal.name)


def _mono(exps: Sequence[int]) -> Polynomial:
    return Polynomial({tuple(exps): 1}, len(exps))


def _linear(coeffs: Sequence, n: int) -> Polynomial:
    return Polynomial({tuple(int(k == i) for k in range(n)): Fraction(c) for i, c in enumerate(coeffs)}, n)


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _transpose(a):
    return [list(r) for r in zip(*a)]


def _fmt_matrix(m) -> str:
    return "[" + "; ".join(" ".join(str(v) for v in row) for row in m) + "]"


def is_rational_square(q) -> bool:
    q = Fraction(q)
    if q < 0:
        return False
    return math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def squarefree_part(q) -> int:
    """Squarefree integer ``s`` with ``q / s`` a nonzero rational square."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no squarefree part")
    n = abs(q.numerator * q.denominator)
    s = 1
    for prime, e in factorint(n).items():
        if e % 2:
            s *= prime
    return s if q > 0 else -s


def check_submaximal(ideal: HomogeneousIdeal) -> None:
    """Quadrics, codimension ``d`` and one generator short of ``m^2``."""
    d = ideal.nvars
    if ideal.generator_degrees() != [2]:
        raise ClassificationError("generators must be quadrics")
    if not ideal.is_artinian():
        raise ClassificationError("ideal is not m-primary")
    nu = min_gens(ideal).total
    if nu != comb(d + 1, 2) - 1:
        raise ClassificationError(f"expected {comb(d + 1, 2) - 1} minimal generators, found {nu}")


def standard_gorenstein(d: int, plus: int = 0) -> list:
    """``(x_i x_j, x_1^2 - x_k^2, x_1^2 + x_k^2)`` with the last ``plus`` indices carrying ``+``."""
    gens = [_mono([int(k in (i, j)) for k in range(d)]) for i in range(d) for j in range(i + 1, d)]
    x1sq = _mono([2] + [0] * (d - 1))
    for k in range(1, d):
        sq = _mono([2 if m == k else 0 for m in range(d)])
        gens.append(x1sq + sq if k >= d - plus else x1sq - sq)
    return gens


# ---------------------------------------------------------------------------
# bilinear form


@dataclass
class BilinearMatrix:
    matrix: list
    h: Polynomial
    nvars: int

    def __post_init__(self):
        m = self.matrix
        if any(m[i][j] != m[j][i] for i in range(self.nvars) for j in range(self.nvars)):
            raise AssertionError("bilinear matrix is not symmetric")


def bilinear_matrix(ideal: HomogeneousIdeal, validate: bool = True) -> BilinearMatrix:
    """``B[i][j]`` with ``x_i x_j = B[i][j] h`` in the one-dimensional ``(R/I)_2``."""
    ideal = _exact_ideal(ideal)
    d = ideal.nvars
    if validate:
        hf = hilbert_function(ideal)
        if hf.values != [1, d, 1]:
            raise ClassificationError(f"Hilbert function {hf.values} is not (1, {d}, 1)")
        if cm_type(ideal) != 1:
            raise ClassificationError("ideal is not Gorenstein")
    piece = ideal.piece(2)
    rows = piece.rows_exact()
    pivots = list(piece.pivots)
    free = [c for c in range(piece.ambient) if c not in pivots]
    if len(free) != 1:
        raise ClassificationError(f"degree-2 socle has dimension {len(free)}, expected 1")
    c0 = free[0]
    where = {c: k for k, c in enumerate(pivots)}

    def nf(col):
        return Fraction(1) if col == c0 else -Fraction(rows[where[col]][c0])

    monos = monomials_of_degree(d, 2)
    index = {m: k for k, m in enumerate(monos)}
    # h: the first monomial (graded lex) whose class is nonzero
    h_col = next(k for k in range(len(monos)) if nf(k) != 0)
    scale = nf(h_col)
    mat = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            m = [0] * d
            m[i] += 1
            m[j] += 1
            mat[i][j] = nf(index[tuple(m)]) / scale
    return BilinearMatrix(mat, _mono(monos[h_col]), d)


@dataclass
class SignatureResult:
    transform: list  # T with T^t B T = diag
    diagonal: list
    signature: tuple  # (positive, negative)

    @property
    def canonical(self) -> tuple:
        return tuple(sorted(self.signature))


def signature(b) -> SignatureResult:
    """Lagrange congruence diagonalization over the rationals."""
    mat = b.matrix if isinstance(b, BilinearMatrix) else b
    n = len(mat)
    orig = [[Fraction(v) for v in row] for row in mat]
    if any(orig[i][j] != orig[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix is not symmetric")
    a = [row[:] for row in orig]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_col(dst, src, f):
        # column and row operation: new basis vector dst + f * src
        for i in range(n):
            a[i][dst] += f * a[i][src]
        for j in range(n):
            a[dst][j] += f * a[src][j]
        for i in range(n):
            t[i][dst] += f * t[i][src]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        if a[k][k] == 0:
            other = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if other is not None:
                swap(k, other)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    ker = nullspace_exact(orig, n)
                    raise SingularFormError("bilinear form is degenerate", ker[0] if ker else None)
                add_col(k, j, Fraction(1))  # u + v has C(u+v, u+v) = 2 C(u, v)
        for i in range(k + 1, n):
            if a[k][i]:
                add_col(i, k, -a[k][i] / a[k][k])
    check = _matmul(_matmul(_transpose(t), orig), t)
    diag = [check[i][i] for i in range(n)]
    if any(check[i][j] for i in range(n) for j in range(n) if i != j) or any(v == 0 for v in diag):
        raise AssertionError("congruence diagonalization failed")
    pos = sum(1 for v in diag if v > 0)
    return SignatureResult(t, diag, (pos, n - pos))


def polarized_ideal(pairing, engine: Engine | None = None) -> HomogeneousIdeal:
    """``(x_i y_j (i != j), x_1 y_1 - x_k y_k)`` with ``y`` dual to ``x`` under ``pairing``."""
    n = len(pairing)
    inv = _mat_inverse([[Fraction(v) for v in row] for row in pairing])
    x = [variable(i, n) for i in range(n)]
    y = [_linear([inv[k][j] for k in range(n)], n) for j in range(n)]
    gens = [x[i] * y[j] for i in range(n) for j in range(n) if i != j]
    gens += [x[0] * y[0] - x[k] * y[k] for k in range(1, n)]
    return HomogeneousIdeal(gens, n, engine or Engine.rational(), name="polarized")


# ---------------------------------------------------------------------------
# normal forms


@dataclass
class NormalForm:
    nvars: int
    bilinear: BilinearMatrix
    signature: SignatureResult
    p: int
    q: int
    representative: list
    rational_form: list
    change: LinearChange
    certificate: EqualityCertificate
    transcript: list = field(default_factory=list)

    @property
    def canonical(self) -> tuple:
        return (self.q, self.p)


def gorenstein_normal_form(ideal: HomogeneousIdeal, names: Sequence[str] | None = None) -> NormalForm:
    """Representative ``(x_i x_j, x_1^2 - x_k^2 (k <= p), x_1^2 + x_k^2 (k > p))`` with ``p >= q``."""
    ideal = _exact_ideal(ideal)
    d = ideal.nvars
    names = list(names or default_names(d))
    check_submaximal(ideal)
    bil = bilinear_matrix(ideal)
    sig = signature(bil)
    pos, neg = sig.signature
    sign = 1 if pos >= neg else -1  # flipping h negates B
    p, q = max(pos, neg), min(pos, neg)
    order = sorted(range(d), key=lambda k: (0 if sig.diagonal[k] * sign > 0 else 1, k))
    tmat = [[sig.transform[i][k] for k in order] for i in range(d)]
    diag = [sig.diagonal[k] for k in order]
    rep = standard_gorenstein(d, plus=d - p)
    # rational form: products of distinct variables and a_k x_1^2 - a_1 x_k^2
    rational = [g for g in rep[: comb(d, 2)]]
    x1sq = _mono([2] + [0] * (d - 1))
    for k in range(1, d):
        sq = _mono([2 if m == k else 0 for m in range(d)])
        rational.append(x1sq * diag[k] - sq * diag[0])
    change = LinearChange(tmat)
    image = change_ideal(HomogeneousIdeal(rational, d, ideal.engine), change)
    cert = equals(image, ideal)
    if not cert.equal:
        raise AssertionError("normal form certificate failed")
    transcript = [
        f"h = {format_polynomial(bil.h, names)}",
        f"B = {_fmt_matrix(bil.matrix)}",
        f"T = {_fmt_matrix(tmat)}",
        f"T^t B T = diag({', '.join(str(v) for v in diag)})",
        f"signature for this h = {sig.signature}; canonical class {{{q}, {p}}}",
        "substituting x_k -> sum_i T[i][k] x_i in the rational form gives the input ideal",
    ]
    if any(not is_rational_square(abs(v / diag[0])) for v in diag):
        transcript.append("rescaling to +-1 needs real square roots of the diagonal ratios")
    return NormalForm(d, bil, sig, p, q, rep, rational, change, cert, transcript)


@dataclass
class DualBasis:
    forms: list
    generators: list
    regenerated: EqualityCertificate
    square_is_m4: EqualityCertificate


def dual_basis_presentation(ideal: HomogeneousIdeal) -> DualBasis:
    """``y_j = sum_k (B^{-1})[k][j] x_k`` and the ideal regenerated from the pairs ``x_i, y_j``."""
    ideal = _exact_ideal(ideal)
    d = ideal.nvars
    bil = bilinear_matrix(ideal)
    try:
        inv = _mat_inverse([row[:] for row in bil.matrix])
    except SingularMatrixError:
        raise AssertionError("bilinear matrix of a Gorenstein ideal is singular") from None
    x = [variable(i, d) for i in range(d)]
    y = [_linear([inv[k][j] for k in range(d)], d) for j in range(d)]
    gens = [x[i] * y[j] for i in range(d) for j in range(d) if i != j]
    gens += [x[0] * y[0] - x[k] * y[k] for k in range(1, d)]
    regen = HomogeneousIdeal(gens, d, ideal.engine, name="dual")
    cert = equals(regen, ideal)
    if not cert.equal:
        names = default_names(d)
        raise AssertionError(
            "dual-basis presentation does not regenerate the ideal; "
            f"B = {_fmt_matrix(bil.matrix)}, y = {[format_polynomial(f, names) for f in y]}"
        )
    sq = equals(power(ideal, 2), MaximalPower(d, 4, ideal.engine))
    return DualBasis(y, gens, cert, sq)


# ---------------------------------------------------------------------------
# decomposition by the linear socle


@dataclass
class Decomposition:
    r: int
    change: LinearChange  # column k: linear form playing the k-th new variable
    core_generators: list  # in the last d - r new variables
    core: NormalForm
    cm_type: int
    reassembly: EqualityCertificate


def _extend_basis(vectors: list, n: int) -> list:
    basis = [list(v) for v in vectors]
    for i in range(n):
        if len(basis) == n:
            break
        cand = basis + [[int(k == i) for k in range(n)]]
        if rank_exact(cand) == len(cand):
            basis = cand
    return basis


def _drop_leading(poly: Polynomial, r: int) -> Polynomial:
    """Drop terms involving the first ``r`` variables and forget those variables."""
    n = poly.nvars
    return Polynomial({m[r:]: c for m, c in poly.items() if not any(m[:r])}, n - r)


def _lift(poly: Polynomial, r: int) -> Polynomial:
    return Polynomial({(0,) * r + m: c for m, c in poly.items()}, poly.nvars + r)


def submaximal_decompose(ideal: HomogeneousIdeal) -> Decomposition:
    """``I = (X_1..X_r) m + I'`` with ``X`` spanning the linear socle and ``I'`` Gorenstein."""
    ideal = _exact_ideal(ideal)
    d = ideal.nvars
    check_submaximal(ideal)
    soc = linear_socle(ideal)
    r = soc.dim
    if r > d - 2:
        raise AssertionError(f"linear socle of dimension {r} is too large")
    basis = _extend_basis(soc.rows_exact() if r else [], d)
    change = LinearChange(_transpose(basis))
    new = change_ideal(ideal, change.inverse())
    core_forms = [f for f in (_drop_leading(g, r) for g in new.piece(2).basis_polynomials()) if not f.is_zero()]
    core_space = span(core_forms, 2, d - r, ideal.engine)
    core_gens = core_space.basis_polynomials()
    core = HomogeneousIdeal(core_gens, d - r, ideal.engine, name="core")
    try:
        nf = gorenstein_normal_form(core)
    except ClassificationError as exc:
        raise AssertionError(f"residual ideal after removing the linear socle is not Gorenstein submaximal: {exc}") from None
    gens = [variable(i, d) * variable(j, d) for i in range(r) for j in range(d)]
    gens += [_lift(g, r) for g in core_gens]
    rebuilt = change_ideal(HomogeneousIdeal(gens, d, ideal.engine), change)
    cert = equals(rebuilt, ideal)
    if not cert.equal:
        raise AssertionError("reassembled decomposition differs from the input")
    t = cm_type(ideal)
    if t != r + 1:
        raise AssertionError(f"type {t} but linear socle of dimension {r}")
    return Decomposition(r, change, core_gens, nf, t, cert)


# ---------------------------------------------------------------------------
# three variables


@dataclass
class FiveQuadricReport:
    gorenstein: bool
    orbit: str  # "gorenstein", "A" or "B"
    representative: list
    change: LinearChange | None
    certificate: EqualityCertificate
    parameters: tuple | None = None
    normalized_parameters: tuple | None = None
    complete_over_q: bool = True
    rational_orbit: str | None = None  # invariant under rational changes of variables
    real_orbit: str | None = None
    normal_form: NormalForm | None = None
    reduction: list | None = None
    checklist: dict = field(default_factory=dict)
    transcript: list = field(default_factory=list)


def _binary(coeffs, l1: Polynomial, l2: Polynomial) -> Polynomial:
    """``a Y^2 + b Y Z + c Z^2`` evaluated at linear forms ``Y = l1, Z = l2``."""
    a, b, c = coeffs
    return l1 * l1 * a + l1 * l2 * b + l2 * l2 * c


def _check_three(ideal: HomogeneousIdeal, nu: int):
    if ideal.nvars != 3:
        raise ClassificationError("expected three variables")
    if ideal.generator_degrees() != [2]:
        raise ClassificationError("generators must be quadrics")
    if not ideal.is_artinian():
        raise ClassificationError("ideal is not m-primary")
    found = min_gens(ideal).total
    if found != nu:
        raise ClassificationError(f"expected {nu} minimal generators, found {found}")


def classify_five_quadrics(ideal: HomogeneousIdeal, seed: int = 0) -> FiveQuadricReport:
    ideal = _exact_ideal(ideal)
    _check_three(ideal, 5)
    names = default_names(3)
    hs = hilbert_samuel(ideal)
    delta = delta_profile(ideal)
    if cm_type(ideal) == 1:
        nf = gorenstein_normal_form(ideal)
        red = find_minimal_reduction(ideal, seed=seed, e1=hs.e1)
        sq = equals(power(ideal, 2), MaximalPower(3, 4, ideal.engine))
        checklist = {
            "syzygetic": delta.syzygetic,
            "red": red.red,
            "e1": hs.e1,
            "square_is_m4": sq.equal,
            "huckaba_equality": red.huckaba_equality,
        }
        return FiveQuadricReport(
            True, "gorenstein", nf.representative, nf.change, nf.certificate,
            rational_orbit="gorenstein", real_orbit="gorenstein", normal_form=nf,
            reduction=red.reduction, checklist=checklist, transcript=nf.transcript[:],
        )
    soc = linear_socle(ideal)
    if soc.dim != 1:
        raise AssertionError(f"non-Gorenstein five quadrics with linear socle of dimension {soc.dim}")
    h = soc.basis_polynomials()[0]
    basis = _extend_basis(soc.rows_exact(), 3)
    forms = [_linear(v, 3) for v in basis]
    change = LinearChange(_transpose(basis))
    new = change_ideal(ideal, change.inverse())
    residual = [f for f in (_drop_leading(g, 1) for g in new.piece(2).basis_polynomials()) if not f.is_zero()]
    vspace = span(residual, 2, 2, ideal.engine)
    if vspace.dim != 2:
        raise AssertionError("residual pencil of binary quadrics is not two-dimensional")
    rows = [list(v) for v in vspace.rows_exact()]
    transcript = [f"linear socle spanned by h = {format_polynomial(h, names)}; set x = h"]
    transcript.append("residual binary quadrics: " + ", ".join(format_polynomial(_binary(v, variable(0, 2), variable(1, 2)), ["y", "z"]) for v in rows))
    # q1 without a y^2 term, i.e. z (b y + c z)
    if rows[0][0] == 0:
        q1, q2 = rows[0], rows[1]
    elif rows[1][0] == 0:
        q1, q2 = rows[1], rows[0]
    else:
        f = rows[1][0] / rows[0][0]
        q1, q2 = [v - f * w for v, w in zip(rows[1], rows[0])], rows[0]
    _, b, c = q1
    yv, zv = forms[1], forms[2]
    parameters = normalized = None
    complete = True
    if b != 0:
        # Y = b y + c z, Z = z turns q1 into Y Z
        ly = yv * b + zv * c
        lz = zv
        # q2 in the new coordinates: y = (Y - c Z) / b
        big_y, big_z = variable(0, 2), variable(1, 2)
        q2_new = _binary(q2, (big_y - big_z * c) * (Fraction(1) / b), big_z)
        a2 = q2_new.coefficient((2, 0))
        c2 = q2_new.coefficient((0, 2))
        if a2 == 0 or c2 == 0:
            raise AssertionError("binary pencil has a common factor")
        orbit = "B"
        parameters = (a2, c2)
        s = squarefree_part(a2 * c2)
        normalized = (1, s)
        complete = s == 1
        x_, y_, z_ = (variable(i, 3) for i in range(3))
        rep = [x_ * x_, x_ * y_, x_ * z_, y_ * z_, y_ * y_ * a2 + z_ * z_ * c2]
        red_rep = [x_ * x_, y_ * z_, y_ * y_ * a2 + z_ * z_ * c2]
        transcript.append(f"q1 = z*({b}*y + {c}*z) factors; Y = {b}*y + {c}*z, Z = z gives the pencil (YZ, {a2}*Y^2 + {c2}*Z^2)")
        if complete:
            k = Fraction(math.isqrt((c2 / a2).numerator), math.isqrt((c2 / a2).denominator))
            transcript.append(
                f"a*c = {a2 * c2} is a rational square: span{{YZ, Y^2 + {k ** 2}*Z^2}} = span{{(Y + {k}*Z)^2, (Y - {k}*Z)^2}}, "
                "so this pencil is also in the orbit of (y^2, z^2) over Q"
            )
        else:
            transcript.append(f"a*c = {a2 * c2} is not a rational square: normalized over Q to (YZ, Y^2 + {s}*Z^2); a = c = 1 needs a square root")
    else:
        # q1 = c z^2: complete the square in q2 = alpha y^2 + beta y z (mod z^2)
        alpha, beta, _ = q2
        if alpha == 0 or c == 0:
            raise AssertionError("binary pencil has a common factor")
        ly = yv + zv * (beta / (2 * alpha))
        lz = zv
        orbit = "A"
        x_, y_, z_ = (variable(i, 3) for i in range(3))
        rep = [x_ * x_, x_ * y_, x_ * z_, y_ * y_, z_ * z_]
        red_rep = [x_ * x_, y_ * y_, z_ * z_]
        transcript.append(f"pencil contains z^2; Y = y + {beta / (2 * alpha)}*z gives (Y^2, Z^2)")
    total = LinearChange.from_forms([h, ly, lz])
    rep_ideal = change_ideal(HomogeneousIdeal(rep, 3, ideal.engine), total)
    cert = equals(rep_ideal, ideal)
    if not cert.equal:
        raise AssertionError("orbit representative does not map onto the input")
    if orbit == "B":
        # rescaling Z by w / a, where a c = s w^2, reaches (YZ, Y^2 + s Z^2)
        w2 = a2 * c2 / s
        w = Fraction(math.isqrt(w2.numerator), math.isqrt(w2.denominator))
        scaled = LinearChange.from_forms([h, ly, lz * (w / a2)])
        x_, y_, z_ = (variable(i, 3) for i in range(3))
        norm_rep = [x_ * x_, x_ * y_, x_ * z_, y_ * z_, y_ * y_ + z_ * z_ * s]
        if not equals(change_ideal(HomogeneousIdeal(norm_rep, 3, ideal.engine), scaled), ideal).equal:
            raise AssertionError("normalized orbit representative does not map onto the input")
    reduction = list(change_ideal(HomogeneousIdeal(red_rep, 3, ideal.engine), total).generators)
    red = verify_reduction(ideal, reduction, e1=hs.e1)
    checklist = {
        "syzygetic": delta.syzygetic,
        "lambda_I2_JI": red.lengths[1] if len(red.lengths) > 1 else 0,
        "red": red.red,
        "huckaba_equality": red.huckaba_equality,
        "e1": hs.e1,
    }
    # the pencil contains two independent squares exactly when a c is a square
    rational = "A" if orbit == "A" or complete else "B"
    real = "A" if orbit == "A" or a2 * c2 > 0 else "B"
    return FiveQuadricReport(
        False, orbit, rep, total, cert, parameters, normalized, complete, rational, real,
        reduction=reduction, checklist=checklist, transcript=transcript,
    )


@dataclass
class FourQuadricReport:
    length: int
    hilbert_function: list
    syzygetic: bool | None
    red: int
    reduction: list
    lengths: list
    e0: int
    e1: int
    branch: str
    huckaba_identity: bool | None = None


def analyze_four_quadrics(ideal: HomogeneousIdeal, seed: int = 0) -> FourQuadricReport:
    ideal = _exact_ideal(ideal)
    _check_three(ideal, 4)
    hf = hilbert_function(ideal)
    if hf.length != 6:
        raise AssertionError(f"four quadrics with colength {hf.length}, expected 6")
    delta = delta_profile(ideal)
    if delta.syzygetic is not False:
        raise AssertionError("four-quadric ideal not detected as non-syzygetic")
    hs = hilbert_samuel(ideal)
    cert = find_minimal_reduction(ideal, seed=seed, e1=hs.e1)
    if cert.red not in (1, 3):
        raise AssertionError(f"reduction number {cert.red} outside {{1, 3}}; lengths {cert.lengths}")
    identity = None
    if cert.red == 1:
        branch = "Huckaba: Cohen-Macaulay branch"
    else:
        u, v = cert.lengths[1], cert.lengths[2]
        identity = u == v == 1 and hs.e1 - hs.e0 + hf.length == u + v
        if not identity:
            raise AssertionError(f"reduction number 3 with u = {u}, v = {v}, e1 = {hs.e1}")
        branch = f"reduction number 3: {hs.e1} - {hs.e0} + {hf.length} = {u} + {v}"
    return FourQuadricReport(
        hf.length, hf.values, delta.syzygetic, cert.red, cert.reduction, cert.lengths, hs.e0, hs.e1, branch, identity
    )
