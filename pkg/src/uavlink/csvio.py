"""Small CSV helpers shared by the loaders and writers.

Input files are UTF-8, start with a mandatory header row and may contain
``#`` comment lines and blank lines anywhere.
"""
from __future__ import annotations

import csv
import math
from typing import Iterable, Iterator, TextIO

from .errors import LoadError


def source_name(stream: TextIO) -> str:
    return str(getattr(stream, "name", "<stream>"))


def read_rows(stream: TextIO) -> tuple[list[str], Iterator[tuple[int, dict[str, str]]]]:
    """Return the header and an iterator of (line number, row) pairs."""
    path = source_name(stream)
    numbered = [
        (i, line)
        for i, line in enumerate(stream.read().splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise LoadError("empty file (missing header)", path)
    header_line, header_text = numbered[0]
    header = [h.strip() for h in next(csv.reader([header_text]))]

    def rows():
        for lineno, text in numbered[1:]:
            fields = [f.strip() for f in next(csv.reader([text]))]
            if len(fields) != len(header):
                raise LoadError(
                    f"expected {len(header)} fields, got {len(fields)}", path, lineno
                )
            yield lineno, dict(zip(header, fields))

    return header, rows()


def require_header(header: list[str], expected: Iterable[str], path: str) -> None:
    expected = list(expected)
    if header != expected:
        raise LoadError(f"bad header {','.join(header)!r}, expected {','.join(expected)!r}", path, 1)


def parse_float(text: str, field: str, path: str, lineno: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise LoadError(f"{field}: not a number: {text!r}", path, lineno) from None
    if not math.isfinite(v):
        raise LoadError(f"{field}: not finite: {text!r}", path, lineno)
    return v


def parse_int(text: str, field: str, path: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise LoadError(f"{field}: not an integer: {text!r}", path, lineno) from None


def fmt(v: float) -> str:
    # repr is the shortest string that round-trips exactly
    return repr(float(v))


def write_rows(stream: TextIO, header: list[str], rows: Iterable[Iterable[object]]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
