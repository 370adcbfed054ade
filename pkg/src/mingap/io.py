"""Deterministic CSV/JSON output helpers shared by the modules and the CLI."""

from __future__ import annotations

import csv
import io
import json
from decimal import Decimal, localcontext
from pathlib import Path

from .numtheory import SCALE


def exact_decimal(numerator: int, scale: int = SCALE) -> str:
    """Exact decimal expansion of ``numerator / scale`` (``scale`` a power of two)."""
    with localcontext() as ctx:
        ctx.prec = 120
        d = Decimal(int(numerator)) / Decimal(scale)
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def fmt_float(x: float) -> str:
    """Shortest round-tripping text for a float."""
    return repr(float(x))


def csv_text(fieldnames, rows) -> str:
    """RFC 4180 text (CRLF line ends, mandatory header) for a list of dicts."""
    buf = io.StringIO(newline="")
    w = csv.DictWriter(buf, fieldnames=list(fieldnames), lineterminator="\r\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
