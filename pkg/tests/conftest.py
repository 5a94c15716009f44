import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from quadrics import polycore
from quadrics.gradedla import Engine
from quadrics.idealcore import HomogeneousIdeal, ideal_from_strings

CORPUS = Path(__file__).resolve().parents[1] / "src" / "quadrics" / "corpus"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (ok, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def names(d):
    return polycore.default_names(d)


def make(texts, d=3, certified=True, seed=0, engine=None):
    eng = engine or Engine.rational(certified=certified, seed=seed)
    return ideal_from_strings(texts, names(d), eng)


def random_change(rng, d, lo=-3, hi=3, rational=False):
    """Random invertible change of variables with small entries."""
    while True:
        if rational:
            m = [[Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(d)] for _ in range(d)]
        else:
            m = [[rng.randint(lo, hi) for _ in range(d)] for _ in range(d)]
        try:
            return polycore.LinearChange(m)
        except polycore.SingularMatrixError:
            continue


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


def ideal_of(gens, d, engine=None):
    return HomogeneousIdeal(gens, d, engine or Engine.rational())
