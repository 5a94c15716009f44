import random
from math import comb

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from conftest import ideal_of, make, random_change
from quadrics.classify import standard_gorenstein
from quadrics.idealcore import change_ideal, colength, min_gens, power
from quadrics.invariants import (
    NotAReductionError,
    cm_type,
    delta_profile,
    fiber_hilbert,
    find_minimal_reduction,
    generation_degree,
    hilbert_samuel,
    invariant_report,
    is_gorenstein,
    is_syzygetic,
    linear_socle,
    minimal_forms,
    sally_multiplicity,
    verify_reduction,
)
from quadrics.polycore import Polynomial, parse_polynomial

XYZ = ["x", "y", "z"]
GOR3 = ["x*y", "x*z", "y*z", "x^2 - y^2", "x^2 - z^2"]
ORBIT_A = ["x^2", "x*y", "x*z", "y^2", "z^2"]
ORBIT_B = ["x^2", "x*y", "x*z", "y*z", "y^2 + z^2"]
M2 = ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]


def forms(texts):
    return [parse_polynomial(t, XYZ) for t in texts]


def test_generation_degree_and_minimal_forms():
    i = make(["x^2", "y^2", "x^2 + y^2", "z^2"])
    assert generation_degree(i) == 2
    assert len(minimal_forms(i)) == 3
    with pytest.raises(ValueError):
        generation_degree(make(["x^2", "y^3", "z^2"]))


def test_type_and_linear_socle():
    assert is_gorenstein(make(GOR3)) and cm_type(make(GOR3)) == 1
    assert cm_type(make(ORBIT_A)) == 2
    ls = linear_socle(make(ORBIT_A))
    assert ls.dim == 1 and ls.basis_polynomials() == forms(["x"])


def _delta4_oracle(texts):
    """``C(nu+1, 2) - dim I^2_4`` from sympy ranks: the defect in the lowest degree."""
    gens, syms = oracles.sympify_all(texts, XYZ)
    prods = [gens[i] * gens[j] for i in range(len(gens)) for j in range(i, len(gens))]
    return comb(len(gens) + 1, 2) - oracles.piece_dim(prods, syms, 4)


@pytest.mark.parametrize("texts, syz", [(GOR3, True), (ORBIT_A, False), (ORBIT_B, False), (M2, False)])
def test_delta_profile(texts, syz):
    prof = delta_profile(make(texts))
    assert prof.rows[0][0] == 4
    assert prof.rows[0][4] == _delta4_oracle(texts)
    assert prof.syzygetic is syz
    assert prof.status == ("vanished-for-window" if syz else "nonzero")


def test_gorenstein_delta_rows():
    prof = delta_profile(make(GOR3))
    assert [r[0] for r in prof.rows] == [4, 5, 6, 7]
    assert all(r[4] == 0 for r in prof.rows)
    # degree 4: no syzygy contribution; sym^2 of five quadrics is 15-dimensional
    assert prof.rows[0][1:] == (15, 0, 15, 0)


def test_delta_full_scan_and_cap():
    # the defect of orbit A lives in degree 4 only; the full scan then sees a quiet window
    prof = delta_profile(make(ORBIT_A), stop_at_nonzero=False)
    assert prof.deltas[4] == 2 and all(v == 0 for t, v in prof.deltas.items() if t > 4)
    assert prof.status == "vanished-for-window" and prof.syzygetic is False
    short = delta_profile(make(GOR3), cap=5)
    assert short.status == "cap-reached" and short.syzygetic is None


def test_hilbert_samuel_of_m_squared():
    # lambda(R / m^{2n}) = C(2n+2, 3) = 8 C(n+2,3) - 4 C(n+1,2)
    hs = hilbert_samuel(make(M2))
    assert hs.coefficients == [8, 4, 0, 0]
    for n in range(1, 8):
        assert hs.polynomial_value(n) == comb(2 * n + 2, 3)


def test_hilbert_samuel_complete_intersection():
    hs = hilbert_samuel(make(["x^2", "y^2", "z^2"]))
    assert hs.coefficients == [8, 0, 0, 0]


@pytest.mark.parametrize("texts", [GOR3, ORBIT_A])
def test_power_colengths_match_oracle(texts):
    gens, syms = oracles.sympify_all(texts, XYZ)
    ideal = make(texts)
    prods = list(gens)
    for n in range(1, 4):
        if n > 1:
            prods = list({p * g for p in prods for g in gens})
        assert colength(power(ideal, n)) == sum(oracles.hilbert_function(prods, XYZ))


@pytest.mark.parametrize("texts", [GOR3, ORBIT_A, ORBIT_B])
def test_five_quadric_hilbert_samuel(texts):
    ideal = make(texts)
    hs = hilbert_samuel(ideal)
    assert (hs.e0, hs.e1) == (8, 4)
    assert sally_multiplicity(ideal, hs) == 1
    for n, v in hs.lengths.items():
        if n >= hs.window[0]:
            assert hs.polynomial_value(n) == v


def test_fiber_function():
    assert fiber_hilbert(make(ORBIT_A), 3) == [1, 5, 13, 25]
    # Gorenstein: I^2 = m^4 so the fiber in degree 2 is all of R_4
    assert fiber_hilbert(make(GOR3), 2) == [1, 5, 15]


def test_explicit_reduction_orbit_a():
    ideal = make(ORBIT_A)
    cert = verify_reduction(ideal, forms(["x^2", "y^2", "z^2"]), e1=4)
    assert cert.red == 2 and cert.lengths == [3, 1]
    assert cert.huckaba_sum == 4 and cert.huckaba_equality
    assert cert.inequality is not None and not cert.inequality.equal


def test_reduction_of_m_squared():
    cert = verify_reduction(make(M2), forms(["x^2", "y^2", "z^2"]), e1=4)
    assert cert.red == 1 and cert.lengths == [4]


def test_non_reductions_rejected():
    ideal = make(ORBIT_A)
    with pytest.raises(NotAReductionError):
        verify_reduction(ideal, forms(["x^2", "y^2", "x*y"]))
    with pytest.raises(NotAReductionError):
        verify_reduction(ideal, forms(["x^2", "y^2", "y*z + x^2"]), r_max=2)
    with pytest.raises(ValueError):
        verify_reduction(ideal, forms(["x^2", "y^2"]))
    # not contained in I
    with pytest.raises(NotAReductionError):
        verify_reduction(make(GOR3), forms(["x^2", "y^2", "z^2"]))


def test_find_minimal_reduction_is_deterministic():
    a = find_minimal_reduction(make(GOR3), seed=3)
    b = find_minimal_reduction(make(GOR3), seed=3)
    assert a.reduction == b.reduction and a.red == 2


def test_invariant_report_gorenstein():
    rep = invariant_report(make(GOR3))
    assert rep.hilbert_function == [1, 3, 1] and rep.length == 5
    assert rep.nu == 5 and rep.nu_square == 15
    assert rep.gorenstein and rep.syzygetic is True
    assert (rep.e0, rep.e1, rep.sally) == (8, 4, 1)
    assert rep.reduction.red == 2 and rep.reduction.huckaba_sum > rep.e1


@pytest.mark.parametrize("d", [4, 5])
def test_gorenstein_higher_dimension(d):
    ideal = ideal_of(standard_gorenstein(d), d)
    assert is_syzygetic(ideal) is False
    assert cm_type(ideal) == 1


# -- properties -----------------------------------------------------------------

quadric_coeffs = st.lists(st.integers(-2, 2), min_size=6, max_size=6)


@settings(max_examples=25)
@given(st.lists(quadric_coeffs, min_size=4, max_size=6))
def test_random_quadrics_properties(rows):
    gens = [Polynomial.from_vector(r, 2, 3) for r in rows]
    gens = [g for g in gens if not g.is_zero()]
    assume(len(gens) >= 3)
    ideal = ideal_of(gens, 3)
    assume(ideal.is_artinian())
    nu = min_gens(ideal).total
    nu2 = min_gens(power(ideal, 2)).total
    prof = delta_profile(ideal)
    if prof.syzygetic:
        assert nu2 == comb(nu + 1, 2)
    if nu2 < comb(nu + 1, 2):
        assert prof.syzygetic is False
    hs = hilbert_samuel(ideal)
    assert hs.e0 == 8
    cert = find_minimal_reduction(ideal, seed=1, e1=hs.e1)
    assert cert.huckaba_sum >= hs.e1


@pytest.mark.parametrize("d, red, patterns", [(3, 2, (0, 1, 2)), (4, 2, (0, 1, 2, 3)), (5, 2, (0, 2))])
def test_gorenstein_reduction_number_under_changes(d, red, patterns):
    # floor(d/2) from d = 4 on; in three variables the square is m^4 but I^2 != J I
    rng = random.Random(d)
    for plus in patterns:
        ideal = change_ideal(ideal_of(standard_gorenstein(d, plus), d), random_change(rng, d, -1, 1))
        assert find_minimal_reduction(ideal, seed=plus).red == red
