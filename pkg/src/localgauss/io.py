"""Text formats for scalars, matrices, datasets and lattices.

Scalars are decimal integers or ``a/b`` with an optional sign. Matrices are
JSON arrays of rows (entries as strings or integers) or whitespace-separated
plain text, one row per line. A lattice file is either a generator matrix or
``{"p": 2, "hnf": [[...], ...]}``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import ParseError
from .lattice_algebra import Lattice, hnf

_SCALAR = re.compile(r"[+-]?\d+(/\d+)?")


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_scalar(token, line=None, column=None) -> Fraction:
    if isinstance(token, int) and not isinstance(token, bool):
        return Fraction(token)
    if isinstance(token, str) and _SCALAR.fullmatch(token.strip()):
        try:
            return Fraction(token.strip())
        except ZeroDivisionError:
            raise ParseError(f"zero denominator: {token!r}", line, column) from None
    raise ParseError(f"not a scalar: {token!r}", line, column)


def _locate(text: str, token) -> Tuple[Optional[int], Optional[int]]:
    needle = json.dumps(token) if isinstance(token, str) else str(token)
    at = text.find(needle)
    return _position(text, at) if at >= 0 else (None, None)


def _json_rows(text: str, obj) -> List[List[Fraction]]:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ParseError("expected a JSON array of arrays", 1, 1)
    rows = []
    for r in obj:
        row = []
        for x in r:
            try:
                row.append(parse_scalar(x))
            except ParseError:
                raise ParseError(f"not a scalar: {x!r}", *_locate(text, x)) from None
        rows.append(row)
    return rows


def _plain_rows(text: str) -> List[List[Fraction]]:
    rows, lines = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        content = line.split("#", 1)[0]
        if not content.strip():
            continue
        row = []
        for m in re.finditer(r"\S+", content):
            row.append(parse_scalar(m.group(), lineno, m.start() + 1))
        rows.append(row)
        lines.append(lineno)
    return _check_rect(rows, lines)


def _check_rect(rows, lines=None):
    for k, r in enumerate(rows):
        if len(r) != len(rows[0]):
            line = lines[k] if lines else None
            raise ParseError(f"row {k + 1} has {len(r)} entries, expected {len(rows[0])}", line, 1 if line else None)
    return rows


def parse_matrix(text: str) -> List[List[Fraction]]:
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
        if isinstance(obj, dict):
            obj = obj.get("hnf", obj.get("matrix"))
        return _check_rect(_json_rows(text, obj))
    return _plain_rows(text)


def parse_vectors(text: str) -> List[List[Fraction]]:
    """A dataset: JSON list of vectors, or one vector per line."""
    return parse_matrix(text)


def parse_lattice(text: str, p: Optional[int] = None) -> Lattice:
    """Read a lattice file; a ``"p"`` key in the file must agree with ``p``."""
    file_p = None
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
        file_p = obj.get("p")
        if file_p is not None and (not isinstance(file_p, int) or isinstance(file_p, bool)):
            raise ParseError(f"p must be an integer, got {file_p!r}", *_locate(text, file_p))
    rows = parse_matrix(text)
    if file_p is not None and p is not None and file_p != p:
        raise ParseError(f"file is over Q_{file_p} but --prime {p} was given")
    prime = file_p if file_p is not None else p
    if prime is None:
        raise ParseError("no prime: pass --prime or include \"p\" in the lattice file")
    if not rows:
        raise ParseError("empty matrix")
    return hnf(rows, prime)


def matrix_to_json(rows) -> List[List[str]]:
    return [[str(x) for x in row] for row in rows]


def lattice_to_json(L: Lattice) -> dict:
    return {"p": L.p, "hnf": matrix_to_json(L.matrix)}


def matrix_to_text(rows) -> str:
    if not rows:
        return ""
    cells = [[str(x) for x in row] for row in rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)
