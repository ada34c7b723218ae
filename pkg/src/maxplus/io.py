"""Text format for matrices and vectors.

A matrix file is UTF-8 text::

    # optional comments, anywhere
    semiring: maxplus        (optional; or ``maxtimes``)
    3                        (dimension)
    0 -1 -inf
    -2 0 -1
    -inf -3 0

``-inf`` is the max-plus zero.  In ``maxtimes`` files entries are
nonnegative and ``0`` is the zero; they are converted with ``ln`` on read.
A vector file has the same optional header followed by a single line of
tokens (an optional dimension line before it is accepted).
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import DimensionMismatch, ParseError
from .semiring import NEG_INF, to_maxplus, to_maxtimes

SEMIRINGS = ("maxplus", "maxtimes")
_HEADER = re.compile(r"^semiring\s*:\s*(\S+)\s*$", re.IGNORECASE)
_TOKEN = re.compile(r"\S+")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, raw


def _split_header(lines):
    semiring = "maxplus"
    if lines:
        lineno, raw = lines[0]
        m = _HEADER.match(raw.strip())
        if m:
            semiring = m.group(1).lower()
            if semiring not in SEMIRINGS:
                col = raw.index(m.group(1)) + 1
                raise ParseError(f"unknown semiring {m.group(1)!r}", lineno, col)
            lines = lines[1:]
        elif raw.strip().lower().startswith("semiring"):
            raise ParseError("malformed semiring header", lineno, 1)
    return semiring, lines


def _parse_token(token: str, semiring: str, lineno: int, col: int) -> float:
    low = token.lower()
    if low == "-inf":
        if semiring == "maxtimes":
            raise ParseError("'-inf' is not a max-times value; use 0", lineno, col)
        return NEG_INF
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"invalid number {token!r}", lineno, col) from None
    if math.isnan(value) or math.isinf(value):
        raise ParseError(f"invalid entry {token!r}", lineno, col)
    if semiring == "maxtimes" and value < 0:
        raise ParseError(f"negative max-times entry {token!r}", lineno, col)
    return value


def _parse_row(lineno: int, raw: str, semiring: str) -> list[float]:
    return [_parse_token(m.group(), semiring, lineno, m.start() + 1) for m in _TOKEN.finditer(raw)]


def _parse_dimension(lineno: int, raw: str) -> int:
    tokens = list(_TOKEN.finditer(raw))
    if len(tokens) != 1:
        raise ParseError("expected the dimension n on its own line", lineno, 1)
    tok = tokens[0]
    try:
        n = int(tok.group())
    except ValueError:
        raise ParseError(f"invalid dimension {tok.group()!r}", lineno, tok.start() + 1) from None
    if n < 1:
        raise ParseError("dimension must be >= 1", lineno, tok.start() + 1)
    return n


def _to_canonical(values, semiring: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    return to_maxplus(arr) if semiring == "maxtimes" else arr


def parse_matrix(text: str) -> tuple[np.ndarray, str]:
    """Parse a matrix file; returns the max-plus matrix and the declared semiring."""
    semiring, lines = _split_header(list(_content_lines(text)))
    if not lines:
        raise ParseError("missing dimension line", 1, 1)
    n = _parse_dimension(*lines[0])
    body = lines[1:]
    if len(body) < n:
        last = body[-1][0] if body else lines[0][0]
        raise ParseError(f"expected {n} rows, found {len(body)}", last + 1, 1)
    if len(body) > n:
        raise ParseError(f"unexpected content after {n} rows", body[n][0], 1)
    rows = []
    for lineno, raw in body:
        row = _parse_row(lineno, raw, semiring)
        if len(row) != n:
            raise DimensionMismatch(f"line {lineno}: row has {len(row)} entries, expected {n}")
        rows.append(row)
    return _to_canonical(rows, semiring), semiring


def parse_vector(text: str) -> tuple[np.ndarray, str]:
    semiring, lines = _split_header(list(_content_lines(text)))
    if not lines:
        raise ParseError("empty vector file", 1, 1)
    expected = None
    if len(lines) == 2:
        expected = _parse_dimension(*lines[0])
        lines = lines[1:]
    elif len(lines) > 2:
        raise ParseError("a vector file holds a single line of entries", lines[2][0], 1)
    lineno, raw = lines[0]
    values = _parse_row(lineno, raw, semiring)
    if expected is not None and len(values) != expected:
        raise DimensionMismatch(f"line {lineno}: {len(values)} entries, expected {expected}")
    return _to_canonical(values, semiring), semiring


def read_matrix(text: str) -> np.ndarray:
    return parse_matrix(text)[0]


def read_vector(text: str) -> np.ndarray:
    return parse_vector(text)[0]


def load_matrix(path) -> tuple[np.ndarray, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def load_vector(path) -> tuple[np.ndarray, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_vector(fh.read())


def format_entry(value: float) -> str:
    """Shortest exact token for a max-plus value (``-inf`` for the zero)."""
    if value == NEG_INF:
        return "-inf"
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def _format_values(values, semiring: str) -> str:
    if semiring == "maxtimes":
        return " ".join(format_entry(v) for v in to_maxtimes(values))
    return " ".join(format_entry(v) for v in values)


def write_matrix(m: np.ndarray, semiring: str = "maxplus") -> str:
    if semiring not in SEMIRINGS:
        raise ValueError(f"unknown semiring {semiring!r}")
    m = np.asarray(m, dtype=float)
    lines = [f"semiring: {semiring}", str(m.shape[0])]
    lines += [_format_values(row, semiring) for row in m]
    return "\n".join(lines) + "\n"


def write_vector(x: np.ndarray, semiring: str = "maxplus") -> str:
    if semiring not in SEMIRINGS:
        raise ValueError(f"unknown semiring {semiring!r}")
    return f"semiring: {semiring}\n{_format_values(np.asarray(x, dtype=float), semiring)}\n"
