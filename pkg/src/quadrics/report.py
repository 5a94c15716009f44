"""Reports: lazily evaluated invariants keyed by name, JSON output, comparison
with ``expect:`` blocks, and the claim matrix used by corpus verification."""

from __future__ import annotations

import json
import time
from fractions import Fraction
from functools import cached_property
from math import comb

from . import classify as cl
from . import invariants as inv
from .idealcore import MaximalPower, NotArtinianError, equals, hilbert_function, min_gens, power, socle
from .idealfile import IdealFile
from .polycore import format_polynomial

SCHEMA = 1


def jsonable(value):
    """Fractions become ints or ``"p/q"``; tuples become lists."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def tristate(flag):
    return "unverified" if flag is None else flag


class Evaluation:
    """Cached computations over one ideal file."""

    def __init__(self, source: IdealFile, certified: bool = True, seed: int = 0, max_power: int | None = None):
        self.source = source
        self.seed = seed
        self.max_power = max_power
        if source.mode == "screened":
            certified = False
        self.ideal = source.ideal(certified=certified, seed=seed)
        self.names = source.variables
        self.timings: dict = {}

    def _timed(self, key, fn):
        t0 = time.perf_counter()
        try:
            return fn()
        finally:
            self.timings[key] = self.timings.get(key, 0.0) + time.perf_counter() - t0

    def fmt(self, poly) -> str:
        return format_polynomial(poly, self.names)

    # -- basic data
    @cached_property
    def hf(self):
        return self._timed("hilbert_function", lambda: hilbert_function(self.ideal))

    @cached_property
    def nu(self):
        return min_gens(self.ideal).total

    @cached_property
    def nu_square(self):
        return self._timed("square", lambda: min_gens(power(self.ideal, 2)).total)

    @cached_property
    def socle(self):
        return self._timed("socle", lambda: socle(self.ideal))

    @cached_property
    def delta(self):
        return self._timed("delta", lambda: inv.delta_profile(self.ideal))

    @cached_property
    def hs(self):
        return self._timed("hilbert_samuel", lambda: inv.hilbert_samuel(self.ideal, self.max_power))

    @cached_property
    def fiber(self):
        return self._timed("fiber", lambda: inv.fiber_hilbert(self.ideal, self.max_power))

    @cached_property
    def reduction(self):
        return self._timed("reduction", lambda: inv.find_minimal_reduction(self.ideal, seed=self.seed, e1=self.hs.e1))

    @cached_property
    def explicit_reduction(self):
        if not self.source.reduction:
            raise KeyError("the file gives no reduction")
        return self._timed("reduction", lambda: inv.verify_reduction(self.ideal, self.source.reduction, e1=self.hs.e1))

    @cached_property
    def square_is_maximal_power(self):
        g = max(self.ideal.generator_degrees())
        return self._timed("square", lambda: equals(power(self.ideal, 2), MaximalPower(self.ideal.nvars, 2 * g, self.ideal.engine)))

    # -- structure
    @cached_property
    def family(self) -> str:
        d = self.ideal.nvars
        if self.ideal.generator_degrees() != [2]:
            return "other"
        nu = self.nu
        gor = self.socle.dimension == 1
        if d == 3 and nu == 5:
            return "five-gorenstein" if gor else "five-other"
        if d == 3 and nu == 4:
            return "four"
        if nu == comb(d + 1, 2) - 1:
            return "gor-high" if gor else "sub-high"
        if nu == comb(d + 1, 2):
            return "maximal"
        return "other"

    @cached_property
    def five(self):
        return self._timed("classify", lambda: cl.classify_five_quadrics(self.ideal, seed=self.seed))

    @cached_property
    def four(self):
        return self._timed("classify", lambda: cl.analyze_four_quadrics(self.ideal, seed=self.seed))

    @cached_property
    def decomposition(self):
        return self._timed("classify", lambda: cl.submaximal_decompose(self.ideal))

    @cached_property
    def dual(self):
        return self._timed("classify", lambda: cl.dual_basis_presentation(self.ideal))


def _five_attr(name):
    return lambda e: getattr(e.five, name)


KEYS = {
    "hilbert_function": lambda e: e.hf.values,
    "length": lambda e: e.hf.length,
    "nu": lambda e: e.nu,
    "nu_square": lambda e: e.nu_square,
    "type": lambda e: e.socle.dimension,
    "gorenstein": lambda e: e.socle.dimension == 1,
    "socle_degrees": lambda e: [t for t, k in sorted(e.socle.dims().items()) for _ in range(k)],
    "linear_socle": lambda e: e.socle.by_degree[1].dim if 1 in e.socle.by_degree else 0,
    "syzygetic": lambda e: tristate(e.delta.syzygetic),
    "delta_status": lambda e: e.delta.status,
    "e0": lambda e: e.hs.e0,
    "e1": lambda e: e.hs.e1,
    "sally": lambda e: e.hs.e1 - e.hs.e0 + e.hf.length,
    "fiber": lambda e: e.fiber,
    "red": lambda e: e.reduction.red,
    "lengths": lambda e: e.reduction.lengths,
    "huckaba_sum": lambda e: e.reduction.huckaba_sum,
    "huckaba_equality": lambda e: tristate(e.reduction.huckaba_equality),
    "explicit_red": lambda e: e.explicit_reduction.red,
    "explicit_lengths": lambda e: e.explicit_reduction.lengths,
    "explicit_huckaba": lambda e: tristate(e.explicit_reduction.huckaba_equality),
    "square_is_m4": lambda e: e.square_is_maximal_power.equal,
    "orbit": _five_attr("orbit"),
    "parameters": lambda e: list(e.five.parameters) if e.five.parameters else None,
    "normalized_parameters": lambda e: list(e.five.normalized_parameters) if e.five.normalized_parameters else None,
    "complete_over_q": _five_attr("complete_over_q"),
    "rational_orbit": _five_attr("rational_orbit"),
    "real_orbit": _five_attr("real_orbit"),
    "lambda_I2_JI": lambda e: e.five.checklist["lambda_I2_JI"],
    "four_red": lambda e: e.four.red,
    "four_identity": lambda e: tristate(e.four.huckaba_identity),
    "signature": lambda e: list(e.decomposition.core.canonical),
    "decomposition_r": lambda e: e.decomposition.r,
    "core_signature": lambda e: list(e.decomposition.core.canonical),
    "dual_basis": lambda e: e.dual.regenerated.equal and e.dual.square_is_m4.equal,
}

# claim name, families it applies to (None: any), keys it covers (None: any)
_ANY = None
CLAIMS = [
    ("Gorenstein ideals: normal form determined by the signature", _ANY, {"signature"}),
    ("dual-basis presentation regenerates Gorenstein ideals, square is m^4", _ANY, {"dual_basis"}),
    ("type r+1: linear socle times m plus a Gorenstein core", _ANY, {"decomposition_r", "core_signature"}),
    ("five quadrics: Hilbert function (1,3,1), length 5", {"five-gorenstein", "five-other"}, {"hilbert_function", "length", "nu"}),
    ("five quadrics: e0 = 8, e1 = 4, Sally multiplicity 1", {"five-gorenstein", "five-other"}, {"e0", "e1", "sally"}),
    ("five quadrics: reduction number 2", {"five-gorenstein", "five-other"}, {"red", "explicit_red"}),
    ("five quadrics: syzygetic exactly when Gorenstein", {"five-gorenstein", "five-other"}, {"syzygetic", "type", "gorenstein", "delta_status", "socle_degrees"}),
    ("Gorenstein five quadrics: square is m^4 with 15 generators", {"five-gorenstein"}, {"square_is_m4", "nu_square", "fiber"}),
    ("Gorenstein five quadrics: Huckaba sum exceeds e1", {"five-gorenstein"}, {"huckaba_equality", "lengths", "huckaba_sum"}),
    ("non-Gorenstein five quadrics: two orbits", {"five-other"}, {"orbit", "rational_orbit", "real_orbit", "parameters", "normalized_parameters", "complete_over_q", "linear_socle"}),
    (
        "non-Gorenstein five quadrics: 13 generators for the square, lambda(I^2/JI) = 1, Huckaba equality",
        {"five-other"},
        None,
    ),
    ("four quadrics: length 6, never syzygetic, reduction number 1 or 3", {"four"}, None),
    (
        "Gorenstein ideals in d >= 4: e0 = 2^d, e1 = (d-1) 2^(d-2), square is m^4, red = floor(d/2), not syzygetic",
        {"gor-high"},
        None,
    ),
    ("type r+1: linear socle times m plus a Gorenstein core", {"sub-high"}, None),
    ("reference values for m^2: e0 = 2^d, e1 = 4 (d = 3), Sally multiplicity 0", {"maximal"}, None),
]


def claim_for(family: str, key: str) -> str:
    for name, families, keys in CLAIMS:
        if (families is None or family in families) and (keys is None or key in keys):
            return name
    return "other invariants"


def evaluate_keys(ev: Evaluation, keys) -> dict:
    out = {}
    for key in keys:
        if key not in KEYS:
            out[key] = {"error": f"unknown invariant {key!r}"}
            continue
        try:
            out[key] = jsonable(KEYS[key](ev))
        except AssertionError:
            raise
        except Exception as exc:  # reported as a mismatch, never a pass
            out[key] = {"error": f"{type(exc).__name__}: {exc}"}
    return out


def values_match(expected, computed, key: str = "") -> bool:
    if isinstance(computed, dict) and "error" in computed:
        return False
    if key == "fiber" and isinstance(expected, list) and isinstance(computed, list):
        return computed[: len(expected)] == expected
    if isinstance(computed, list) and not isinstance(expected, list):
        expected = [expected]
    if isinstance(expected, list) and not isinstance(computed, list):
        return False
    if isinstance(expected, list):
        return len(expected) == len(computed) and all(values_match(a, b) for a, b in zip(expected, computed))
    if isinstance(expected, str) and not isinstance(computed, str):
        return expected == json.dumps(computed)
    return expected == computed


def compare(values: dict, expect: dict) -> list:
    """Mismatches ``(key, expected, computed)``; keys absent from ``values`` count as mismatches."""
    bad = []
    for key, want in expect.items():
        got = values.get(key, {"error": "not computed"})
        if not values_match(want, got, key):
            bad.append((key, want, got))
    return bad


# ---------------------------------------------------------------------------
# analyze / classify documents


def _base(ev: Evaluation) -> dict:
    src = ev.source
    return {
        "schema": SCHEMA,
        "name": src.name,
        "file": src.path,
        "variables": src.variables,
        "field": src.field,
        "generators": [ev.fmt(g) for g in src.generators],
        "engine": ev.ideal.engine.status,
    }


def analyze_document(ev: Evaluation) -> dict:
    doc = _base(ev)
    try:
        hf = ev.hf
    except NotArtinianError as exc:
        doc["status"] = "non-artinian"
        doc["values"] = {"hilbert_function_partial": jsonable(exc.partial or [])}
        doc["error"] = str(exc)
        doc["timings"] = jsonable({k: round(v, 4) for k, v in ev.timings.items()})
        return doc
    vals = {
        "hilbert_function": hf.values,
        "length": hf.length,
        "nu": ev.nu,
        "nu_square": ev.nu_square,
        "type": ev.socle.dimension,
        "gorenstein": ev.socle.dimension == 1,
        "socle_dims": {str(t): k for t, k in sorted(ev.socle.dims().items())},
        "linear_socle": KEYS["linear_socle"](ev),
    }
    details = {}
    single = len(ev.ideal.generator_degrees()) == 1
    if single:
        dp = ev.delta
        vals["syzygetic"] = tristate(dp.syzygetic)
        details["delta"] = {
            "status": dp.status,
            "rows": [dict(zip(("t", "sym2", "z1f", "square", "delta"), r)) for r in dp.rows],
            "note": "cap reached: probably syzygetic, unverified" if dp.status == "cap-reached" else "",
        }
        vals["square_is_m4" if ev.ideal.generator_degrees() == [2] else "square_is_maximal_power"] = ev.square_is_maximal_power.equal
        hs = ev.hs
        vals.update(e0=hs.e0, e1=hs.e1, sally=hs.e1 - hs.e0 + hf.length)
        details["hilbert_samuel"] = {
            "lengths": {str(n): v for n, v in sorted(hs.lengths.items())},
            "coefficients": hs.coefficients,
            "window": list(hs.window),
        }
        vals["fiber"] = ev.fiber
        red = ev.reduction
        vals.update(red=red.red, lengths=red.lengths, huckaba_sum=red.huckaba_sum, huckaba_equality=tristate(red.huckaba_equality))
        details["reduction"] = {
            "forms": [ev.fmt(f) for f in red.reduction],
            "status": red.status,
            "equality_degree": red.equality.checked_through,
            "inequality_witness": ev.fmt(red.inequality.witness) if red.inequality and red.inequality.witness is not None else None,
        }
        if ev.source.reduction:
            ex = ev.explicit_reduction
            vals.update(explicit_red=ex.red, explicit_lengths=ex.lengths, explicit_huckaba=tristate(ex.huckaba_equality))
    lin = ev.socle.by_degree.get(1)
    details["linear_socle_basis"] = [ev.fmt(f) for f in lin.basis_polynomials()] if lin is not None and lin.dim else []
    doc["status"] = ev.ideal.engine.status
    doc["values"] = jsonable(vals)
    doc["details"] = jsonable(details)
    doc["timings"] = jsonable({k: round(v, 4) for k, v in ev.timings.items()})
    return doc


def classify_document(ev: Evaluation) -> dict:
    doc = _base(ev)
    fam = ev.family
    doc["family"] = fam
    if fam in ("five-gorenstein", "five-other"):
        r = ev.five
        doc["classification"] = {
            "kind": "five quadrics",
            "gorenstein": r.gorenstein,
            "orbit": r.orbit,
            "representative": [format_polynomial(g) for g in r.representative],
            "change": [ev.fmt(r.change.form(j)) for j in range(3)] if r.change else None,
            "certificate": r.certificate.equal,
            "parameters": r.parameters,
            "normalized_parameters": r.normalized_parameters,
            "complete_over_q": r.complete_over_q,
            "rational_orbit": r.rational_orbit,
            "real_orbit": r.real_orbit,
            "reduction": [ev.fmt(f) for f in r.reduction] if r.reduction else None,
            "checklist": {k: tristate(v) for k, v in r.checklist.items()},
            "transcript": r.transcript,
        }
        if r.normal_form is not None:
            doc["classification"]["signature"] = list(r.normal_form.canonical)
            doc["classification"]["ordered_signature"] = list(r.normal_form.signature.signature)
    elif fam == "four":
        r = ev.four
        doc["classification"] = {
            "kind": "four quadrics",
            "length": r.length,
            "hilbert_function": r.hilbert_function,
            "syzygetic": tristate(r.syzygetic),
            "red": r.red,
            "reduction": [ev.fmt(f) for f in r.reduction],
            "lengths": r.lengths,
            "e0": r.e0,
            "e1": r.e1,
            "branch": r.branch,
        }
    elif fam in ("gor-high", "sub-high"):
        dec = ev.decomposition
        nf = dec.core
        core_names = ev.names[dec.r :]
        doc["classification"] = {
            "kind": "submaximal",
            "r": dec.r,
            "type": dec.cm_type,
            "change": [ev.fmt(dec.change.form(j)) for j in range(ev.ideal.nvars)],
            "core": [format_polynomial(g, core_names) for g in dec.core_generators],
            "signature": list(nf.canonical),
            "ordered_signature": list(nf.signature.signature),
            "representative": [format_polynomial(g, core_names) for g in nf.representative],
            "reassembly": dec.reassembly.equal,
            "transcript": nf.transcript,
        }
        if dec.r == 0:
            db = ev.dual
            doc["classification"]["dual_basis"] = [ev.fmt(f) for f in db.forms]
            doc["classification"]["dual_basis_regenerates"] = db.regenerated.equal
            doc["classification"]["square_is_m4"] = db.square_is_m4.equal
    else:
        raise cl.ClassificationError("no structure result applies (need quadrics: five in three variables, four in three variables, or one short of all quadrics)")
    doc["classification"] = jsonable(doc["classification"])
    doc["timings"] = jsonable({k: round(v, 4) for k, v in ev.timings.items()})
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def loads(text: str) -> dict:
    """Read a report; unknown keys are kept but ignored by consumers."""
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
    return doc
