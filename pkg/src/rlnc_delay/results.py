"""Flat result rows and their CSV/JSON serialization.

Every command emits the same long-format schema: one row per (parameter
point, scheme, quantity).  The first line of every CSV is the version
comment `# rlnc-delay v1`, so emitted data stays diffable across releases.
Floats are written with repr(), which round-trips exactly: re-parsing an
emitted file reproduces the original rows bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

SCHEMA_VERSION = "rlnc-delay v1"
CSV_HEADER_COMMENT = f"# {SCHEMA_VERSION}"

COLUMNS = [
    "source", "scheme", "K", "Omega", "q", "epsilon", "quantity", "omega",
    "value", "stderr", "generations", "seed", "receiver", "label",
]


@dataclass(frozen=True)
class ResultRow:
    """One scalar result with the parameters that produced it.

    source is one of theory, simulation, bound, oracle.  omega is the
    distribution support point for pmf/cdf-style quantities and empty for
    scalar summaries.  receiver is a receiver index or "system" for
    multi-receiver simulation rows.
    """

    source: str
    K: int
    q: int
    epsilon: float
    quantity: str
    value: float
    scheme: str | None = None
    Omega: int | None = None
    omega: int | None = None
    stderr: float | None = None
    generations: int | None = None
    seed: int | None = None
    receiver: str | None = None
    label: str | None = None


_INT_FIELDS = {"K", "Omega", "q", "omega", "generations", "seed"}
_FLOAT_FIELDS = {"epsilon", "value", "stderr"}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        # plain-float repr round-trips exactly; numpy scalars repr differently
        return repr(float(value))
    return str(value)


def _parse_cell(name: str, text: str):
    if text == "":
        return None
    if name in _INT_FIELDS:
        return int(text)
    if name in _FLOAT_FIELDS:
        return float(text)
    return text


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER_COMMENT + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        d = asdict(row)
        writer.writerow([_cell(d[c]) for c in COLUMNS])
    return buf.getvalue()


def csv_to_rows(text: str) -> list[ResultRow]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing schema comment line")
    if lines[0] != CSV_HEADER_COMMENT:
        raise ValueError(f"unsupported schema {lines[0]!r}, expected {CSV_HEADER_COMMENT!r}")
    reader = csv.reader(lines[1:])
    header = next(reader)
    if header != COLUMNS:
        raise ValueError(f"unexpected column header {header!r}")
    out = []
    for rec in reader:
        kwargs = {name: _parse_cell(name, cell) for name, cell in zip(COLUMNS, rec)}
        out.append(ResultRow(**kwargs))
    return out


def rows_to_json(rows: list[ResultRow]) -> str:
    payload = []
    for row in rows:
        d = asdict(row)
        payload.append({c: d[c] for c in COLUMNS})
    return json.dumps(payload, indent=2) + "\n"


def json_to_rows(text: str) -> list[ResultRow]:
    payload = json.loads(text)
    return [ResultRow(**entry) for entry in payload]


def format_rows(rows: list[ResultRow], fmt: str) -> str:
    if fmt == "csv":
        return rows_to_csv(rows)
    if fmt == "json":
        return rows_to_json(rows)
    raise ValueError(f"unknown output format {fmt!r}")


def parse_rows(text: str, fmt: str) -> list[ResultRow]:
    if fmt == "csv":
        return csv_to_rows(text)
    if fmt == "json":
        return json_to_rows(text)
    raise ValueError(f"unknown output format {fmt!r}")
