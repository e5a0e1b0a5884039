"""Tuple file format: a line-oriented UTF-8 document with one canonical writer.

    field: cyclotomic 12
    dim: 2
    points: -2, 0, 2
    matrix:
    -3, -8
    2, 5
    matrix:
    ...

Scalar entries use the exact text grammar of the scalars module; '#' starts
a comment line.  The points line is optional; the last matrix is the entry
at infinity.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .linalg import Matrix
from .scalars import (CYCLOTOMIC, FINITE, RATIONAL, FieldDescriptor,
                      format_scalar, parse_scalar)
from .tuples import MonodromyTuple


def format_field(field: FieldDescriptor) -> str:
    if field.kind == RATIONAL:
        return "rational"
    if field.kind == CYCLOTOMIC:
        return f"cyclotomic {field.n}"
    if field.k == 1:
        return f"finite {field.p} 1"
    poly = []
    names = {0: "", 1: "t", 2: "t^2"}
    for e in range(2, -1, -1):
        c = field.poly[e]
        if c:
            sym = names[e]
            if not sym:
                poly.append(f"+{c}" if poly else f"{c}")
            elif c == 1:
                poly.append(f"+{sym}" if poly else sym)
            else:
                poly.append(f"+{c}*{sym}" if poly else f"{c}*{sym}")
    return f"finite {field.p} 2 {''.join(poly)}"


def parse_field(text: str) -> FieldDescriptor:
    toks = text.split()
    if not toks:
        raise ParseError("empty field description")
    if toks[0] == "rational":
        return FieldDescriptor.rational()
    if toks[0] == "cyclotomic":
        if len(toks) != 2 or not toks[1].isdigit():
            raise ParseError(f"bad cyclotomic field {text!r}")
        return FieldDescriptor.cyclotomic(int(toks[1]))
    if toks[0] == "finite":
        if len(toks) < 3:
            raise ParseError(f"bad finite field {text!r}")
        p, k = int(toks[1]), int(toks[2])
        if k == 1:
            return FieldDescriptor.finite(p)
        if len(toks) != 4:
            raise ParseError("degree-2 finite field needs its defining polynomial")
        coeffs = _parse_int_poly(toks[3])
        return FieldDescriptor.finite(p, 2, coeffs)
    raise ParseError(f"unknown field kind {toks[0]!r}")


def _parse_int_poly(text: str) -> tuple[int, int, int]:
    """Monic degree-2 integer polynomial in t, e.g. 't^2-2' or 't^2+3*t+1'."""
    import re
    coeffs = [0, 0, 0]
    for m in re.finditer(r"([+-]?\d*)\*?(t(?:\^(\d+))?)?", text.replace(" ", "")):
        if not m.group(0):
            continue
        c = m.group(1)
        coeff = int(c) if c not in ("", "+", "-") else (-1 if c == "-" else 1)
        e = 0 if m.group(2) is None else (1 if m.group(3) is None else int(m.group(3)))
        if e > 2:
            raise ParseError(f"defining polynomial degree too large in {text!r}")
        coeffs[e] += coeff
    return tuple(coeffs)


def save_tuple(T: MonodromyTuple) -> str:
    lines = [f"field: {format_field(T.field)}", f"dim: {T.dim}"]
    if T.points is not None:
        lines.append("points: " + ", ".join(str(p) for p in T.points))
    for M in T.entries:
        lines.append("matrix:")
        for row in M.rows:
            lines.append(", ".join(format_scalar(x) for x in row))
    return "\n".join(lines) + "\n"


def load_tuple(text: str) -> MonodromyTuple:
    field = None
    dim = None
    points = None
    matrices: list[list[list]] = []
    current: list[list] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("field:"):
            field = parse_field(line[len("field:"):].strip())
        elif line.startswith("dim:"):
            dim = int(line[len("dim:"):].strip())
        elif line.startswith("points:"):
            body = line[len("points:"):].strip()
            points = [Fraction(tok.strip()) for tok in body.split(",")] if body else []
        elif line.startswith("matrix:"):
            current = []
            matrices.append(current)
        else:
            if current is None or field is None:
                raise ParseError(f"unexpected content at line {lineno}: {raw!r}")
            current.append([parse_scalar(tok.strip(), field) for tok in line.split(",")])
    if field is None or dim is None or not matrices:
        raise ParseError("tuple file needs field, dim and at least one matrix")
    entries = []
    for rows in matrices:
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ParseError(f"matrix is not {dim}x{dim}")
        entries.append(Matrix(field, tuple(tuple(r) for r in rows)))
    return MonodromyTuple.make(field, entries, points)


def save_tuple_file(T: MonodromyTuple, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_tuple(T))


def load_tuple_file(path: str) -> MonodromyTuple:
    with open(path, encoding="utf-8") as fh:
        return load_tuple(fh.read())
