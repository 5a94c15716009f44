"""Command line front end.

Exit codes: 0 success, 1 corpus mismatch or inapplicable classification,
2 malformed input, 3 ideal not m-primary (a partial report is still
written), 4 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import report as rp
from .classify import ClassificationError
from .idealcore import NotArtinianError
from .idealfile import IdealFileError, read_ideal_file

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_NON_ARTINIAN, EXIT_INTERNAL = 0, 1, 2, 3, 4

log = logging.getLogger("quadrics")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _human_analyze(doc: dict) -> str:
    lines = [f"ideal {doc['name']} in {' '.join(doc['variables'])} over {doc['field']} [{doc['status']}]"]
    for g in doc["generators"]:
        lines.append(f"  {g}")
    if doc["status"] == "non-artinian":
        lines.append(f"not m-primary: {doc['error']}")
        lines.append(f"partial Hilbert function: {doc['values']['hilbert_function_partial']}")
        return "\n".join(lines) + "\n"
    for key, val in doc["values"].items():
        lines.append(f"{key:>18}: {val}")
    det = doc.get("details", {})
    if "reduction" in det:
        lines.append(f"{'reduction':>18}: ({', '.join(det['reduction']['forms'])})")
    if "delta" in det and det["delta"]["note"]:
        lines.append(f"{'delta':>18}: {det['delta']['note']}")
    return "\n".join(lines) + "\n"


def _human_classify(doc: dict) -> str:
    c = doc["classification"]
    lines = [f"ideal {doc['name']}: {c['kind']}"]
    for key, val in c.items():
        if key in ("kind", "transcript"):
            continue
        lines.append(f"{key:>22}: {val}")
    for t in c.get("transcript", []):
        lines.append(f"  | {t}")
    return "\n".join(lines) + "\n"


def _load(path):
    try:
        return read_ideal_file(path)
    except OSError as exc:
        raise IdealFileError(str(exc), str(path)) from None


def cmd_analyze(args) -> int:
    src = _load(args.file)
    ev = rp.Evaluation(src, certified=args.certified, seed=args.seed, max_power=args.max_power)
    try:
        doc = rp.analyze_document(ev)
    except AssertionError:
        sys.stderr.write(traceback.format_exc())
        return EXIT_INTERNAL
    _emit(rp.dumps(doc) if args.json else _human_analyze(doc), args.out)
    return EXIT_NON_ARTINIAN if doc["status"] == "non-artinian" else EXIT_OK


def cmd_classify(args) -> int:
    src = _load(args.file)
    ev = rp.Evaluation(src, certified=True, seed=args.seed)
    try:
        doc = rp.classify_document(ev)
    except NotArtinianError as exc:
        sys.stderr.write(f"not m-primary: {exc}\n")
        return EXIT_NON_ARTINIAN
    except ClassificationError as exc:
        sys.stderr.write(f"{src.name}: {exc}\n")
        return EXIT_MISMATCH
    except AssertionError:
        sys.stderr.write(traceback.format_exc())
        return EXIT_INTERNAL
    _emit(rp.dumps(doc) if args.json else _human_classify(doc), args.out)
    return EXIT_OK


def verify_fixture(path: str, seed: int = 0) -> dict:
    """Evaluate the expected keys of one fixture; returns a JSON-ready record."""
    try:
        src = read_ideal_file(path)
    except IdealFileError as exc:
        return {"name": Path(path).stem, "path": path, "error": str(exc), "values": {}, "expect": {}, "family": "other"}
    ev = rp.Evaluation(src, certified=True, seed=seed)
    try:
        family = ev.family
        values = rp.evaluate_keys(ev, src.expect.keys())
        err = None
    except AssertionError as exc:
        family, values, err = "other", {}, f"internal assertion: {exc}"
    except NotArtinianError as exc:
        family, values, err = "other", {}, f"not m-primary: {exc}"
    # round trip through JSON so that comparison sees exactly what a report stores
    record = {"name": src.name, "path": path, "nvars": src.nvars, "family": family, "values": values, "expect": src.expect, "error": err}
    return json.loads(json.dumps(record))


def cmd_verify_corpus(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        sys.stderr.write(f"{root}: not a directory\n")
        return EXIT_PARSE
    paths = []
    skipped = []
    for p in sorted(root.glob("*.ideal")):
        try:
            src = read_ideal_file(p)
        except IdealFileError as exc:
            sys.stderr.write(f"{exc}\n")
            return EXIT_PARSE
        if src.nvars > args.d_max:
            skipped.append(src.name)
        else:
            paths.append(str(p))
    if not paths:
        sys.stderr.write(f"{root}: no fixtures with at most {args.d_max} variables\n")
        return EXIT_MISMATCH
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(verify_fixture, paths))
    else:
        records = [verify_fixture(p) for p in paths]
    return _summarize(records, skipped)


def _summarize(records, skipped) -> int:
    failures = 0
    matrix: dict = {}
    for rec in records:
        if rec.get("error"):
            failures += 1
            print(f"FAIL {rec['name']}: {rec['error']}")
            continue
        bad = rp.compare(rec["values"], rec["expect"])
        bad_keys = {k for k, _, _ in bad}
        for key in rec["expect"]:
            claim = rp.claim_for(rec["family"], key)
            row = matrix.setdefault(claim, {"pass": 0, "fail": 0, "fixtures": set()})
            row["fail" if key in bad_keys else "pass"] += 1
            row["fixtures"].add(rec["name"])
        for key, want, got in bad:
            failures += 1
            print(f"MISMATCH {rec['name']}: {key} expected {want!r}, computed {got!r}")
    print()
    print("claim matrix")
    width = max((len(c) for c in matrix), default=10)
    for claim in sorted(matrix):
        row = matrix[claim]
        status = "PASS" if row["fail"] == 0 else "FAIL"
        print(f"  {status}  {claim:<{width}}  {row['pass']}/{row['pass'] + row['fail']} checks  [{', '.join(sorted(row['fixtures']))}]")
    if skipped:
        print(f"skipped (more variables than --d-max): {', '.join(skipped)}")
    total = sum(len(r["expect"]) for r in records)
    print(f"{len(records)} fixtures, {total} checks, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadrics", description="Invariants and normal forms of ideals generated by quadrics.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="compute the invariants of one ideal file")
    a.add_argument("file")
    a.add_argument("--json", action="store_true")
    a.add_argument("--certified", action="store_true", help="lift every non-full subspace to an exact rational basis")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--max-power", type=int, default=None, help="largest power used for Hilbert-Samuel fitting")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", help="structure of a submaximal, five- or four-quadric ideal")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify-corpus", help="check every fixture's expect lines")
    v.add_argument("dir")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--d-max", type=int, default=3)
    v.set_defaults(func=cmd_verify_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except IdealFileError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_PARSE
    except NotArtinianError as exc:
        sys.stderr.write(f"not m-primary: {exc}\n")
        return EXIT_NON_ARTINIAN
    except AssertionError:
        sys.stderr.write(traceback.format_exc())
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
