"""Reader for ``.ideal`` files.

::

    # comments start with '#'
    vars: x y z
    field: Q            # or Fp:<prime>
    name: gor3_minus
    x*y
    x^2 - y^2
    expect: length = 5
    expect: hilbert_function = 1,3,1

The first non-comment line declares the variables. ``field``, ``name``,
``mode`` (``certified`` or ``screened``) and ``reduction`` (forms separated
by ``;``) are optional metadata; every other line is one generator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from sympy import isprime

from .exact import PRIME_HI
from .gradedla import Engine
from .idealcore import HomogeneousIdeal
from .polycore import PolynomialSyntaxError, parse_polynomial

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_META = re.compile(r"(vars|field|name|mode|reduction|expect)\s*:(.*)\Z")


class IdealFileError(ValueError):
    def __init__(self, message, path="", line=0, column=None):
        where = f"{path}:{line}" if path else f"line {line}"
        if column is not None:
            where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


@dataclass
class IdealFile:
    variables: list
    generators: list
    field: str = "Q"
    name: str = ""
    mode: str | None = None
    reduction: list | None = None
    expect: dict = dc_field(default_factory=dict)
    path: str = ""
    texts: list = dc_field(default_factory=list)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def characteristic(self) -> int:
        return 0 if self.field == "Q" else int(self.field.split(":")[1])

    def engine(self, certified: bool = True, seed: int = 0) -> Engine:
        if self.characteristic:
            return Engine.finite_field(self.characteristic)
        return Engine.rational(certified=certified, seed=seed)

    def ideal(self, certified: bool = True, seed: int = 0) -> HomogeneousIdeal:
        return HomogeneousIdeal(self.generators, self.nvars, self.engine(certified, seed), name=self.name)


def parse_value(text: str):
    """``true``/``false``, integers, comma lists, otherwise the stripped string."""
    text = text.strip()
    low = text.lower()
    if low in ("true", "yes"):
        return True
    if low in ("false", "no"):
        return False
    if "," in text:
        return [parse_value(part) for part in text.split(",")]
    try:
        return int(text)
    except ValueError:
        return text


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_ideal_text(text: str, path: str = "") -> IdealFile:
    variables = None
    out = IdealFile([], [], path=path)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        col0 = raw.find(line) + 1
        meta = _META.match(line)
        if variables is None:
            if not meta or meta.group(1) != "vars":
                raise IdealFileError("first line must declare the variables ('vars: x y z')", path, lineno)
            names = meta.group(2).split()
            if not names:
                raise IdealFileError("no variables declared", path, lineno)
            for v in names:
                if not _NAME.match(v):
                    raise IdealFileError(f"invalid variable name {v!r}", path, lineno)
            if len(set(names)) != len(names):
                raise IdealFileError("variables are not distinct", path, lineno)
            variables = names
            out.variables = names
            continue
        if meta:
            key, value = meta.group(1), meta.group(2).strip()
            if key == "vars":
                raise IdealFileError("variables declared twice", path, lineno)
            if key == "field":
                out.field = _parse_field(value, path, lineno)
            elif key == "name":
                out.name = value
            elif key == "mode":
                if value not in ("certified", "screened"):
                    raise IdealFileError(f"unknown mode {value!r}", path, lineno)
                out.mode = value
            elif key == "reduction":
                out.reduction = [_parse_poly(part, variables, path, lineno, col0) for part in value.split(";")]
            else:
                k, eq, v = value.partition("=")
                if not eq or not k.strip():
                    raise IdealFileError("expected 'expect: key = value'", path, lineno)
                out.expect[k.strip()] = parse_value(v)
            continue
        out.generators.append(_parse_poly(line, variables, path, lineno, col0))
        out.texts.append(line)
    if variables is None:
        raise IdealFileError("empty file", path, 0)
    if not out.generators:
        raise IdealFileError("no generators", path, 0)
    for k, g in enumerate(out.generators):
        if not g.is_homogeneous():
            raise IdealFileError(f"generator {out.texts[k]!r} is not homogeneous", path, 0)
    if not out.name and path:
        out.name = Path(path).stem
    return out


def _parse_field(value: str, path, lineno) -> str:
    if value == "Q":
        return "Q"
    m = re.match(r"Fp\s*:\s*(\d+)\Z", value)
    if not m:
        raise IdealFileError(f"unknown field {value!r} (use Q or Fp:<prime>)", path, lineno)
    p = int(m.group(1))
    if not isprime(p) or p == 2:
        raise IdealFileError(f"{p} is not an odd prime", path, lineno)
    if p >= PRIME_HI:
        raise IdealFileError(f"prime {p} too large (must be below 2^31)", path, lineno)
    return f"Fp:{p}"


def _parse_poly(text, variables, path, lineno, col0):
    try:
        return parse_polynomial(text.strip(), variables)
    except PolynomialSyntaxError as exc:
        col = col0 + (exc.position or 0)
        raise IdealFileError(str(exc), path, lineno, col) from None


def read_ideal_file(path) -> IdealFile:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        return parse_ideal_text(fh.read(), path)
