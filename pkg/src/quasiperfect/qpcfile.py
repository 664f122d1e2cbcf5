"""The QPC v1 text format for linear and switched codes.

Linear::

    QPC v1
    q=3^1
    m=2
    kind=linear
    dim=6
    <6 generator rows>

Switched::

    QPC v1
    q=3^1
    m=2
    kind=switched
    i=0
    <n - [m]_q - 1 rows: RREF basis of R_i>
    <[m]_q - m rows: extension vectors>
    lambda=<T base-q digits, t ascending>

Rows are space-separated element indices, exactly q^m per row.  The row
counts of a switched file follow from q and m.  Coordinates are 0-based.
"""

from __future__ import annotations

import numpy as np

from .errors import ConsistencyError, FormatError
from .field import FieldSpec, parse_field
from .geometry import AffineSpace, q_analog
from .grm import LinearCode, build_target_code
from .linalg import matmul, rank
from .switching import (
    SwitchedCode,
    build_ri,
    lambda_digits_to_str,
    lambda_str_to_digits,
    reps_from_extension,
)

HEADER = "QPC v1"


def format_rows(M: np.ndarray) -> str:
    return "".join(" ".join(str(int(x)) for x in row) + "\n" for row in np.asarray(M))


def parse_rows(lines: list[str], field: FieldSpec, width: int | None = None) -> np.ndarray:
    rows = []
    for ln in lines:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise FormatError(f"non-integer matrix entry in {ln!r}") from exc
        if width is not None and len(row) != width:
            raise FormatError(f"row has {len(row)} entries, expected {width}")
        if any(not 0 <= x < field.q for x in row):
            raise FormatError(f"entry outside [0, {field.q}) in {ln!r}")
        rows.append(row)
    if rows and len({len(r) for r in rows}) != 1:
        raise FormatError("rows of different lengths")
    ncols = width if width is not None else (len(rows[0]) if rows else 0)
    return np.array(rows, dtype=field.dtype).reshape(len(rows), ncols)


def serialize_linear(code: LinearCode, m: int) -> str:
    F = code.field
    if code.n != F.q**m:
        raise ValueError(f"code length {code.n} is not q^m = {F.q**m}")
    head = f"{HEADER}\nq={F.spec_string()}\nm={m}\nkind=linear\ndim={code.dim}\n"
    return head + format_rows(code.generator)


def serialize_switched(sw: SwitchedCode) -> str:
    F = sw.field
    if F.q > 36:
        raise ValueError("switched files support q <= 36")
    head = f"{HEADER}\nq={F.spec_string()}\nm={sw.space.m}\nkind=switched\ni={sw.i}\n"
    body = format_rows(sw.ri.basis) + format_rows(sw.extension)
    return head + body + f"lambda={lambda_digits_to_str(sw.lambdas)}\n"


def serialize(obj: LinearCode | SwitchedCode, m: int | None = None) -> str:
    if isinstance(obj, SwitchedCode):
        return serialize_switched(obj)
    if m is None:
        m = obj.m
    if m is None:
        raise ValueError("linear codes need m to serialize")
    return serialize_linear(obj, m)


def _expect(lines: list[str], pos: int, key: str) -> str:
    if pos >= len(lines):
        raise FormatError(f"missing '{key}=' line")
    k, sep, v = lines[pos].partition("=")
    if not sep or k.strip() != key:
        raise FormatError(f"expected '{key}=...' on line {pos + 1}, got {lines[pos]!r}")
    return v.strip()


def parse(text: str) -> LinearCode | SwitchedCode:
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines or lines[0] != HEADER:
        raise FormatError(f"missing '{HEADER}' header")
    try:
        field = parse_field(_expect(lines, 1, "q"))
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    try:
        m = int(_expect(lines, 2, "m"))
    except ValueError as exc:
        raise FormatError("m must be an integer") from exc
    if m < 1:
        raise FormatError(f"m must be >= 1, got {m}")
    n = field.q**m
    kind = _expect(lines, 3, "kind")
    if kind == "linear":
        return _parse_linear(lines, field, m, n)
    if kind == "switched":
        return _parse_switched(lines, field, m, n)
    raise FormatError(f"unknown kind {kind!r}")


def _parse_linear(lines: list[str], field: FieldSpec, m: int, n: int) -> LinearCode:
    try:
        dim = int(_expect(lines, 4, "dim"))
    except ValueError as exc:
        raise FormatError("dim must be an integer") from exc
    rows = lines[5:]
    if len(rows) != dim:
        raise FormatError(f"dim={dim} but {len(rows)} generator rows")
    G = parse_rows(rows, field, n)
    if rank(field, G) != dim:
        raise FormatError("generator rows are linearly dependent")
    return LinearCode.from_generator(field, G, m=m)


def _parse_switched(lines: list[str], field: FieldSpec, m: int, n: int) -> SwitchedCode:
    q = field.q
    if q < 3:
        raise FormatError("switched codes need q >= 3")
    try:
        i = int(_expect(lines, 4, "i"))
    except ValueError as exc:
        raise FormatError("i must be an integer") from exc
    if not 0 <= i < n:
        raise FormatError(f"coordinate i={i} outside [0, {n})")
    qm = q_analog(m, q)
    n_ri, n_ext = n - qm - 1, qm - m
    body = lines[5:]
    if len(body) != n_ri + n_ext + 1:
        raise FormatError(f"expected {n_ri} R_i rows, {n_ext} extension rows and a lambda line")
    space = AffineSpace(field, m)
    code = build_target_code(space)
    try:
        ri = build_ri(code, space, i)
    except ConsistencyError as exc:  # pragma: no cover - construction is verified elsewhere
        raise FormatError(str(exc)) from exc
    basis = parse_rows(body[:n_ri], field, n)
    if not np.array_equal(basis, ri.basis):
        raise FormatError(f"R_{i} rows differ from the canonical basis")
    ext = parse_rows(body[n_ri : n_ri + n_ext], field, n)
    if ext.size and np.any(matmul(field, ext, code.parity.T)):
        raise FormatError("extension rows are not codewords of the base code")
    if rank(field, np.vstack([ri.basis, ext])) != code.dim:
        raise FormatError("extension rows do not complete R_i to the base code")
    try:
        lambdas = lambda_str_to_digits(_expect(body, n_ri + n_ext, "lambda"), q, q**n_ext)
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    reps = reps_from_extension(field, ext)
    return SwitchedCode(space, code, ri, reps, lambdas)


def read(path) -> LinearCode | SwitchedCode:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write(path, obj: LinearCode | SwitchedCode, m: int | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(obj, m))
