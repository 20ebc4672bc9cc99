"""Matrix file formats.

Two on-disk forms:

* JSON: ``{"n": int, "upper": [entries], "labels": [str, ...]?}`` where each
  entry is a number or a fraction string like ``"1/3"``.
* CSV: n lines of n comma-separated values (decimals or ``p/q`` fractions).
  The full matrix is required; the diagonal must be 1 and the two triangles
  must be reciprocal within relative 1e-9. Violations are reported with line
  and column, never silently repaired.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError
from .matrix import PCMatrix, build_matrix

_RECIPROCITY_REL_TOL = 1e-9


def parse_value(text: str) -> float:
    """Parse a decimal or a ``p/q`` fraction to float (correctly rounded)."""
    s = text.strip()
    try:
        if "/" in s:
            return float(Fraction(s))
        return float(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MatrixFormatError(f"cannot parse value {text!r}: {exc}") from exc


def parse_matrix_json(text: str) -> PCMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data or "upper" not in data:
        raise MatrixFormatError('JSON matrix needs keys "n" and "upper"')
    n = data["n"]
    if not isinstance(n, int):
        raise MatrixFormatError(f'"n" must be an integer, got {n!r}')
    raw = data["upper"]
    if not isinstance(raw, list):
        raise MatrixFormatError('"upper" must be a list')
    upper = [parse_value(v) if isinstance(v, str) else float(v) for v in raw]
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise MatrixFormatError(f'"labels" must be a list of {n} names')
    try:
        return build_matrix(n, upper, labels)
    except Exception as exc:
        raise MatrixFormatError(str(exc)) from exc


def parse_matrix_csv(text: str) -> PCMatrix:
    rows = []
    lines = [ln for ln in text.splitlines() if ln.strip()]
    for li, line in enumerate(lines, start=1):
        fields = line.split(",")
        row = []
        for ci, fld in enumerate(fields, start=1):
            try:
                row.append(parse_value(fld))
            except MatrixFormatError as exc:
                raise MatrixFormatError(str(exc), line=li, column=ci) from exc
        rows.append(row)
    n = len(rows)
    if n < 2:
        raise MatrixFormatError(f"need at least a 2x2 matrix, got {n} rows")
    for li, row in enumerate(rows, start=1):
        if len(row) != n:
            raise MatrixFormatError(f"expected {n} values, got {len(row)}", line=li)
    a = np.array(rows)
    if not np.all(np.isfinite(a)) or np.any(a <= 0.0):
        li, ci = map(int, np.argwhere(~(np.isfinite(a) & (a > 0.0)))[0])
        raise MatrixFormatError("entries must be finite and positive", line=li + 1, column=ci + 1)
    for i in range(n):
        if abs(a[i, i] - 1.0) > _RECIPROCITY_REL_TOL:
            raise MatrixFormatError(f"diagonal entry must be 1, got {a[i, i]!r}", line=i + 1, column=i + 1)
        for j in range(i + 1, n):
            if abs(a[i, j] * a[j, i] - 1.0) > _RECIPROCITY_REL_TOL:
                raise MatrixFormatError(
                    f"not reciprocal: a[{i + 1},{j + 1}]={a[i, j]!r} but a[{j + 1},{i + 1}]={a[j, i]!r}"
                    f" (product deviates from 1 by {abs(a[i, j] * a[j, i] - 1.0):.3e})",
                    line=j + 1,
                    column=i + 1,
                )
    iu, ju = np.triu_indices(n, 1)
    return build_matrix(n, a[iu, ju])


def load_matrix(path: str | Path) -> PCMatrix:
    """Read a matrix file, dispatching on extension or a leading '{'."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {p}: {exc}") from exc
    if p.suffix.lower() == ".json" or text.lstrip()[:1] == "{":
        return parse_matrix_json(text)
    return parse_matrix_csv(text)


def dump_matrix_json(A: PCMatrix) -> str:
    doc = {"n": A.n, "upper": list(A.upper)}
    if A.labels:
        doc["labels"] = list(A.labels)
    return json.dumps(doc)
