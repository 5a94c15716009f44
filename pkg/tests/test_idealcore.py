import random

import pytest

import oracles
from conftest import ideal_of, make, names, random_change
from quadrics.classify import standard_gorenstein
from quadrics.gradedla import Engine
from quadrics.idealcore import (
    HomogeneousIdeal,
    InconclusiveError,
    NotArtinianError,
    change_ideal,
    colength,
    contained_in,
    equals,
    hilbert_function,
    maximal_ideal,
    min_gens,
    minimal_generators,
    power,
    socle,
)
from quadrics.polycore import format_polynomial

GOR3 = ["x*y", "x*z", "y*z", "x^2 - y^2", "x^2 - z^2"]
ORBIT_A = ["x^2", "x*y", "x*z", "y^2", "z^2"]
FOUR = ["x^2", "y^2", "z^2", "x*y"]


@pytest.mark.parametrize("texts", [GOR3, ORBIT_A, FOUR, ["x^2", "y^2", "z^2"], ["x^3", "y^2", "x*z", "z^4"]])
def test_hilbert_function_matches_oracle(texts):
    ideal = make(texts)
    gens, _ = oracles.sympify_all(texts, ["x", "y", "z"])
    assert hilbert_function(ideal).values == oracles.hilbert_function(gens, ["x", "y", "z"])


def test_monomial_ideal_counts():
    exps = [(3, 0, 0), (0, 2, 0), (1, 0, 1), (0, 0, 4)]
    ideal = make(["x^3", "y^2", "x*z", "z^4"])
    assert hilbert_function(ideal).values == oracles.monomial_hilbert_function(exps, 3, 10)


def test_screened_and_fp_hilbert_functions():
    assert hilbert_function(make(GOR3, certified=False)).values == [1, 3, 1]
    # y^2 + 3 z^2 degenerates to y^2 over F_3 and the ideal stops being m-primary
    texts = ["x*y", "x*z", "y*z", "x^2 - y^2", "y^2 + 3*z^2"]
    gens, _ = oracles.sympify_all(texts, ["x", "y", "z"])
    assert hilbert_function(make(texts)).values == oracles.hilbert_function(gens, ["x", "y", "z"]) == [1, 3, 1]
    assert oracles.hilbert_function(gens, ["x", "y", "z"], tmax=6, p=3) == [1, 3, 1, 1, 1, 1, 1]
    with pytest.raises(NotArtinianError) as info:
        hilbert_function(make(texts, engine=Engine.finite_field(3)), cap=6)
    assert info.value.partial == [1, 3, 1, 1, 1, 1, 1]
    assert hilbert_function(make(texts, engine=Engine.finite_field(7))).values == [1, 3, 1]


@pytest.mark.parametrize("texts", [GOR3, ORBIT_A, FOUR])
def test_socle_matches_oracle(texts):
    gens, _ = oracles.sympify_all(texts, ["x", "y", "z"])
    assert socle(make(texts)).dims() == oracles.socle_dims(gens, ["x", "y", "z"])


def test_gorenstein_socle_is_one_dimensional():
    for d in (3, 4):
        for plus in range(d):
            s = socle(ideal_of(standard_gorenstein(d, plus), d))
            assert s.dims() == {2: 1}


def test_non_artinian_reports_partial_table():
    ideal = make(["x^2", "x*y", "y^2"])
    with pytest.raises(NotArtinianError) as info:
        hilbert_function(ideal, cap=6)
    gens, _ = oracles.sympify_all(["x^2", "x*y", "y^2"], ["x", "y", "z"])
    assert info.value.partial == oracles.hilbert_function(gens, ["x", "y", "z"], tmax=6) == [1, 3, 3, 3, 3, 3, 3]
    assert not ideal.is_artinian(6)


def test_powers_and_products():
    i = make(GOR3)
    m4 = power(maximal_ideal(3), 4)
    i2 = power(i, 2)
    assert i2 is power(i, 2)  # memoized
    assert equals(i2, m4).equal
    assert colength(i2) == 20
    ia = make(ORBIT_A)
    cert = equals(power(ia, 2), m4)
    assert not cert.equal and cert.degree == 4 and cert.witness is not None
    # the witness lies in m^4 but not in I^2
    w = cert.witness
    assert w.degree() == 4
    assert contained_in(power(ia, 2), m4)
    assert not contained_in(m4, power(ia, 2))


def test_min_gens():
    assert min_gens(make(GOR3)).total == 5
    i2 = power(make(ORBIT_A), 2)
    assert min_gens(i2).total == 13
    # a redundant generator is not counted
    assert min_gens(make(["x^2", "y^2", "z^2", "x^2 + y^2", "x^3"])).by_degree == {2: 3}
    mg = minimal_generators(make(["x^2", "y^2", "z^2", "x*y*z"]), 3)
    assert [format_polynomial(g) for g in mg] == ["x*y*z"]


def test_change_round_trip_preserves_ideal():
    rng = random.Random(5)
    i = make(GOR3)
    for _ in range(5):
        c = random_change(rng, 3)
        j = change_ideal(i, c)
        assert hilbert_function(j).values == [1, 3, 1]
        assert equals(change_ideal(j, c.inverse()), i).equal


def test_equals_inconclusive_for_non_artinian():
    a = make(["x^2", "x*y"])
    with pytest.raises(InconclusiveError):
        equals(a, a, t_max=4)


def test_rejects_inhomogeneous_generators():
    from quadrics.polycore import parse_polynomial

    with pytest.raises(ValueError):
        HomogeneousIdeal([parse_polynomial("x^2 + y", names(3))], 3)


@pytest.mark.parametrize("d", [4, 5])
def test_gorenstein_hilbert_function(d):
    hf = hilbert_function(ideal_of(standard_gorenstein(d), d)).values
    assert hf == [1, d, 1]
