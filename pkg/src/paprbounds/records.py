"""Output records and the codeword file format.

Codeword files are CSV with a header line ``# n=<n> complex=<bool>`` and
one codeword per row; complex entries are written ``re:im``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

from .errors import DomainError

SCHEMA_VERSION = "1"


def artifact_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _plain(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)  # 'inf', '-inf', 'nan' survive JSON
    return v


def _is_number(v):
    return isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, (bool, np.bool_))


@dataclass
class OutputRecord:
    """One command result.

    Scalars go in ``outputs``; tables go in ``rows`` (a list of dicts with a
    common column order).  ``units`` must name every numeric scalar output
    and every numeric column.
    """

    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    units: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    version: str = field(default_factory=artifact_version)
    schema: str = SCHEMA_VERSION
    seed: int | None = None
    config: dict = field(default_factory=dict)

    def missing_units(self) -> list[str]:
        keys = [k for k, v in self.outputs.items() if _is_number(v)]
        for row in self.rows:
            keys += [k for k, v in row.items() if _is_number(v)]
        return sorted({k for k in keys if k not in self.units})

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        d = json.loads(text)
        if d.get("schema") != SCHEMA_VERSION:
            raise DomainError(f"unsupported record schema {d.get('schema')!r}")
        return cls(**d)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# command={self.command} version={self.version} schema={self.schema}\n")
        if self.seed is not None:
            buf.write(f"# seed={self.seed}\n")
        w = csv.writer(buf, lineterminator="\n")
        if self.rows:
            cols = list(self.rows[0].keys())
            w.writerow(cols)
            w.writerow([self.units.get(c, "") for c in cols])
            for r in self.rows:
                w.writerow([_fmt(r.get(c)) for c in cols])
        else:
            w.writerow(["key", "value", "unit"])
            for k, v in self.outputs.items():
                w.writerow([k, _fmt(v), self.units.get(k, "")])
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_fmt(x) for x in v)
    return "" if v is None else str(v)


class CodewordFormatError(DomainError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)\s+complex\s*=\s*(true|false)\s*$", re.IGNORECASE)


def _parse_token(tok, is_complex, line):
    tok = tok.strip()
    try:
        if is_complex:
            if ":" in tok:
                re_s, im_s = tok.split(":", 1)
                return complex(float(re_s), float(im_s))
            return complex(float(tok), 0.0)
        return float(tok)
    except ValueError:
        raise CodewordFormatError(f"cannot parse entry {tok!r}", line) from None


def read_codewords(path) -> tuple[np.ndarray, bool]:
    """Return (rows, is_complex); rows has shape (count, n)."""
    text = Path(path).read_text()
    lines = text.splitlines()
    header = None
    rows = []
    for i, raw in enumerate(lines, start=1):
        s = raw.strip()
        if not s:
            continue
        if header is None:
            m = _HEADER.match(s)
            if not m:
                raise CodewordFormatError("expected header '# n=<n> complex=<bool>'", i)
            header = (int(m.group(1)), m.group(2).lower() == "true")
            if header[0] < 1:
                raise CodewordFormatError("n must be positive", i)
            continue
        if s.startswith("#"):
            continue
        n, is_complex = header
        toks = next(csv.reader([s]))
        if len(toks) != n:
            raise CodewordFormatError(f"expected {n} entries, found {len(toks)}", i)
        row = [_parse_token(t, is_complex, i) for t in toks]
        if not all(np.isfinite(row)):
            raise CodewordFormatError("non-finite entry", i)
        rows.append(row)
    if header is None:
        raise CodewordFormatError("empty codeword file")
    if not rows:
        raise CodewordFormatError("file has a header but no codewords")
    return np.array(rows, dtype=complex if header[1] else float), header[1]


def write_codewords(path, X) -> None:
    X = np.atleast_2d(np.asarray(X))
    is_complex = np.iscomplexobj(X)
    with open(path, "w") as fh:
        fh.write(f"# n={X.shape[1]} complex={'true' if is_complex else 'false'}\n")
        for row in X:
            if is_complex:
                toks = [f"{v.real!r}:{v.imag!r}" for v in row.tolist()]
            else:
                toks = [repr(float(v)) for v in row]
            fh.write(",".join(toks) + "\n")
