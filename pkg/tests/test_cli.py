import json
import shutil
import subprocess
import sys

import pytest

from conftest import CORPUS
from quadrics import report
from quadrics.cli import EXIT_INTERNAL, EXIT_MISMATCH, EXIT_NON_ARTINIAN, EXIT_OK, EXIT_PARSE, main


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def strip_timings(doc):
    doc = dict(doc)
    doc.pop("timings", None)
    return doc


def test_analyze_human(capsys):
    code, out, _ = run(capsys, "analyze", CORPUS / "gor3_minus.ideal")
    assert code == EXIT_OK
    assert "hilbert_function: [1, 3, 1]" in out and "[screened]" in out


def test_analyze_json_is_deterministic(capsys, tmp_path):
    docs = []
    for _ in range(2):
        code, out, _ = run(capsys, "analyze", CORPUS / "orbitA.ideal", "--json", "--certified", "--seed", 5)
        assert code == EXIT_OK
        docs.append(strip_timings(json.loads(out)))
    assert docs[0] == docs[1]
    v = docs[0]["values"]
    assert v["e0"] == 8 and v["e1"] == 4 and v["nu_square"] == 13 and v["syzygetic"] is False
    assert v["explicit_lengths"] == [3, 1]
    assert docs[0]["engine"] == "certified"


def test_report_round_trip(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, _, _ = run(capsys, "analyze", CORPUS / "four_red3.ideal", "--json", "--out", target)
    assert code == EXIT_OK
    doc = report.loads(target.read_text())
    assert report.loads(report.dumps(doc)) == doc
    assert doc["values"]["red"] == 3
    doc["unknown_future_key"] = 1
    assert report.loads(json.dumps(doc))["values"] == doc["values"]
    doc["schema"] = 99
    with pytest.raises(ValueError):
        report.loads(json.dumps(doc))


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.ideal"
    bad.write_text("vars: x y\nx^2 + $\n")
    code, _, err = run(capsys, "analyze", bad)
    assert code == EXIT_PARSE
    assert f"{bad}:2:7:" in err
    code, _, _ = run(capsys, "analyze", tmp_path / "missing.ideal")
    assert code == EXIT_PARSE


def test_non_artinian_exit_code(capsys, tmp_path):
    f = tmp_path / "line.ideal"
    f.write_text("vars: x y z\nx^2\nx*y\ny^2\n")
    code, out, _ = run(capsys, "analyze", f, "--json")
    assert code == EXIT_NON_ARTINIAN
    doc = json.loads(out)
    assert doc["status"] == "non-artinian"
    assert doc["values"]["hilbert_function_partial"][:4] == [1, 3, 3, 3]
    code, _, _ = run(capsys, "classify", f)
    assert code == EXIT_NON_ARTINIAN


def test_classify_outputs(capsys):
    code, out, _ = run(capsys, "classify", CORPUS / "orbitB_sqrt2.ideal", "--json")
    assert code == EXIT_OK
    c = json.loads(out)["classification"]
    assert c["orbit"] == "B" and c["rational_orbit"] == "B" and c["real_orbit"] == "A"
    assert c["normalized_parameters"] == [1, 2]
    code, out, _ = run(capsys, "classify", CORPUS / "decomp5_r1.ideal")
    assert code == EXIT_OK and "submaximal" in out
    code, out, _ = run(capsys, "classify", CORPUS / "gor3_mixed.ideal", "--json")
    assert json.loads(out)["classification"]["signature"] == [1, 2]


def test_classify_inapplicable(capsys):
    code, _, err = run(capsys, "classify", CORPUS / "maximal_square.ideal")
    assert code == EXIT_MISMATCH and "no structure result" in err


def test_classify_deterministic(capsys):
    outs = [strip_timings(json.loads(run(capsys, "classify", CORPUS / "four_red1.ideal", "--json", "--seed", 2)[1])) for _ in range(2)]
    assert outs[0] == outs[1]


def _small_corpus(tmp_path, names):
    d = tmp_path / "corpus"
    d.mkdir()
    for n in names:
        shutil.copy(CORPUS / f"{n}.ideal", d)
    return d


def test_verify_corpus_passes(capsys, tmp_path):
    d = _small_corpus(tmp_path, ["gor3_minus", "orbitA", "four_red1", "gor4_minus"])
    code, out, _ = run(capsys, "verify-corpus", d)
    assert code == EXIT_OK
    assert "3 fixtures" in out and "0 failures" in out
    assert "skipped (more variables than --d-max): gor4_minus" in out
    assert "PASS  five quadrics: Hilbert function (1,3,1), length 5" in out


def test_verify_corpus_reports_single_mismatch(capsys, tmp_path):
    d = _small_corpus(tmp_path, ["gor3_minus", "orbitA"])
    f = d / "orbitA.ideal"
    f.write_text(f.read_text().replace("expect: e1 = 4", "expect: e1 = 5"))
    code, out, _ = run(capsys, "verify-corpus", d, "--jobs", 2)
    assert code == EXIT_MISMATCH
    lines = [ln for ln in out.splitlines() if ln.startswith("MISMATCH")]
    assert lines == ["MISMATCH orbitA: e1 expected 5, computed 4"]
    assert "1 failures" in out
    assert any(ln.strip().startswith("FAIL") and "e0 = 8, e1 = 4" in ln for ln in out.splitlines())


def test_verify_corpus_bad_inputs(capsys, tmp_path):
    code, _, _ = run(capsys, "verify-corpus", tmp_path / "nope")
    assert code == EXIT_PARSE
    d = tmp_path / "c"
    d.mkdir()
    (d / "broken.ideal").write_text("vars: x\nx^\n")
    code, _, _ = run(capsys, "verify-corpus", d)
    assert code == EXIT_PARSE
    e = tmp_path / "e"
    e.mkdir()
    code, _, _ = run(capsys, "verify-corpus", e)
    assert code == EXIT_MISMATCH


def test_unknown_expect_key_is_a_mismatch(capsys, tmp_path):
    d = tmp_path / "c"
    d.mkdir()
    (d / "t.ideal").write_text("vars: x y z\nx^2\ny^2\nz^2\nexpect: length = 8\nexpect: colour = blue\n")
    code, out, _ = run(capsys, "verify-corpus", d)
    assert code == EXIT_MISMATCH and "MISMATCH t: colour" in out


def test_internal_assertion_exit_code(capsys, monkeypatch):
    def boom(ev):
        raise AssertionError("forced")

    monkeypatch.setattr(report, "analyze_document", boom)
    code, _, err = run(capsys, "analyze", CORPUS / "gor3_minus.ideal")
    assert code == EXIT_INTERNAL and "forced" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "quadrics", "analyze", str(CORPUS / "maximal_square.ideal")], capture_output=True, text=True)
    assert out.returncode == 0 and "length" in out.stdout


def test_full_corpus_verifies(capsys):
    code, out, _ = run(capsys, "verify-corpus", CORPUS, "--d-max", 6, "--jobs", 2)
    assert code == EXIT_OK, out
    assert "21 fixtures" in out and "0 failures" in out
    assert "FAIL" not in out
