"""Invariant rows, census tables and their CSV form.

Reals are written in fixed decimal notation with 12 significant digits and
files use LF line endings, so emitting the same data twice gives the same
bytes.  Empty cells mean "not provided".
"""

import io
import math
from dataclasses import dataclass, field as dc_field
from decimal import Decimal

from ..arith import IntPoly
from ..errors import DataConflict, NotAField, ParseError, UnsupportedDegree
from ..fields import make_field

HEADER = ["field_key", "disc", "r", "s", "h", "regulator", "mu", "kappa", "lambda_S", "nu", "class"]
CLASSES = ("Cc", "Cr", "NotInC")
PROVENANCE = ("computed", "ingested", "cross-checked")
REAL_TOL = 1e-9


@dataclass
class OrderInvariants:
    field_key: str
    disc: int
    r: int
    s: int
    class_h: int = None
    regulator: float = None
    mu: int = None
    kappa: int = None
    lambda_s: int = None
    nu: float = None
    classification: str = None
    provenance: str = "computed"

    def complete(self) -> bool:
        return all(
            getattr(self, k) is not None
            for k in ("class_h", "regulator", "mu", "kappa", "lambda_s", "nu", "classification")
        )


# CSV column -> (attribute, kind)
_COLUMNS = {
    "field_key": ("field_key", "key"),
    "disc": ("disc", "int"),
    "r": ("r", "int"),
    "s": ("s", "int"),
    "h": ("class_h", "int"),
    "regulator": ("regulator", "real"),
    "mu": ("mu", "int"),
    "kappa": ("kappa", "int"),
    "lambda_S": ("lambda_s", "int"),
    "nu": ("nu", "real"),
    "class": ("classification", "class"),
}
_REQUIRED = ("field_key", "disc", "r", "s")


def format_real(x) -> str:
    """Fixed decimal with 12 significant digits; trailing zeros removed."""
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot write non-finite value {x}")
    if x == 0:
        return "0"
    d = Decimal(repr(x))
    exp = d.adjusted()
    q = Decimal(1).scaleb(exp - 11)
    d = d.quantize(q)
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _cell(v, kind):
    if v is None:
        return ""
    if kind == "real":
        return format_real(v)
    return str(v)


def row_cells(inv: OrderInvariants):
    return [_cell(getattr(inv, attr), kind) for attr, kind in (_COLUMNS[c] for c in HEADER)]


def invariants_csv(rows) -> str:
    out = io.StringIO()
    out.write(",".join(HEADER) + "\n")
    for inv in rows:
        out.write(",".join(row_cells(inv)) + "\n")
    return out.getvalue()


def emit_csv(rows, path):
    """Write invariant rows (or a CensusTable) to ``path``; '-' means stdout."""
    text = rows.to_csv() if isinstance(rows, CensusTable) else invariants_csv(rows)
    _write(text, path)
    return text


def _write(text, path):
    import sys

    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def _parse_value(text, kind, line, column):
    if text == "":
        return None
    try:
        if kind == "int":
            return int(text)
        if kind == "real":
            v = float(text)
            if not math.isfinite(v):
                raise ValueError
            return v
        if kind == "class":
            if text not in CLASSES:
                raise ValueError
            return text
        if kind == "key":
            IntPoly.from_key(text)
            return text
    except Exception:
        raise ParseError(line, f"bad value {text!r} in column {column}") from None
    raise ParseError(line, f"unknown column kind {kind}")


def parse_rows(text, validate=True):
    """Rows of the invariant CSV schema; comment lines start with '#'."""
    rows = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split(",")
        if not header_seen:
            if cells != HEADER:
                raise ParseError(lineno, f"header must be {','.join(HEADER)}")
            header_seen = True
            continue
        if len(cells) != len(HEADER):
            raise ParseError(lineno, f"expected {len(HEADER)} columns, found {len(cells)}")
        vals = {}
        for col, cell in zip(HEADER, cells):
            attr, kind = _COLUMNS[col]
            vals[attr] = _parse_value(cell.strip(), kind, lineno, col)
        for col in _REQUIRED:
            if vals[_COLUMNS[col][0]] is None:
                raise ParseError(lineno, f"column {col} is required")
        inv = OrderInvariants(**vals, provenance="ingested")
        if validate:
            _validate_row(inv, lineno)
        rows.append(inv)
    if not header_seen:
        raise ParseError(1, "missing header")
    return rows


def _validate_row(inv: OrderInvariants, lineno):
    try:
        f = make_field(IntPoly.from_key(inv.field_key))
    except (NotAField, UnsupportedDegree) as exc:
        raise ParseError(lineno, f"{inv.field_key}: {exc}") from None
    if f.min_poly.key() != inv.field_key:
        raise ParseError(lineno, f"{inv.field_key} is not a monic primitive key")
    if (inv.r, inv.s) != f.signature:
        raise DataConflict(inv.field_key, "r,s", f"signature is {f.signature}")


def ingest_table(path, validate=True):
    """Read an invariant CSV; rows come back with provenance 'ingested'."""
    with open(path, encoding="utf-8") as fh:
        return parse_rows(fh.read(), validate=validate)


def _same(a, b, kind):
    if kind == "real":
        return abs(a - b) <= REAL_TOL * max(1.0, abs(b))
    return a == b


def cross_check(ingested, computed):
    """Compare rows that share a field_key; marks them cross-checked.

    Only cells present on both sides are compared; integers must agree
    exactly and reals to 1e-9 relative.  Raises DataConflict on the first
    disagreement.  Returns the number of rows cross-checked.
    """
    by_key = {c.field_key: c for c in computed}
    n = 0
    for row in ingested:
        c = by_key.get(row.field_key)
        if c is None:
            continue
        for col in HEADER[1:]:
            attr, kind = _COLUMNS[col]
            a, b = getattr(row, attr), getattr(c, attr)
            if a is None or b is None:
                continue
            if not _same(a, b, kind):
                raise DataConflict(row.field_key, col, f"ingested {a} != computed {b}")
        row.provenance = "cross-checked"
        c.provenance = "cross-checked"
        n += 1
    return n


@dataclass
class CensusTable:
    """Rows (x, partial_sum, target, ratio, extra columns...) with metadata."""

    columns: list
    rows: list
    metadata: dict = dc_field(default_factory=dict)

    def to_csv(self) -> str:
        out = io.StringIO()
        for k in sorted(self.metadata):
            out.write(f"# {k}={self.metadata[k]}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(_table_cell(v) for v in row) + "\n")
        return out.getvalue()

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _table_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    return format_real(v)

