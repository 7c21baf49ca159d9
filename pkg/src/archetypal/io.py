"""CSV input/output with atomic writes."""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from archetypal.core import InvalidInputError

__all__ = [
    "CsvParseError",
    "load_csv",
    "format_matrix",
    "write_text",
    "write_csv_matrix",
    "write_json",
]


class CsvParseError(InvalidInputError):
    """A CSV cell or row could not be parsed; message names the location."""


def load_csv(path, has_header=False, binary_mode=False):
    """Read a rectangular comma-separated numeric matrix.

    Rows and columns in error messages are 1-based line/field positions in
    the file.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    rows = []
    width = None
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        if has_header and lineno == 1:
            continue
        if not record or all(not cell.strip() for cell in record):
            continue
        if width is None:
            width = len(record)
        elif len(record) != width:
            raise CsvParseError(
                f"{path}: line {lineno} has {len(record)} fields, expected {width}"
            )
        values = []
        for col, cell in enumerate(record, start=1):
            cell = cell.strip()
            try:
                value = float(cell)
            except ValueError:
                raise CsvParseError(
                    f"{path}: line {lineno}, column {col}: not a number: {cell!r}"
                ) from None
            if not np.isfinite(value):
                raise CsvParseError(f"{path}: line {lineno}, column {col}: non-finite value")
            if binary_mode and value not in (0.0, 1.0):
                raise CsvParseError(
                    f"{path}: line {lineno}, column {col}: {cell!r} is not 0 or 1"
                )
            values.append(value)
        rows.append(values)
    if not rows:
        raise CsvParseError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def _format_value(v, digits):
    if digits is None:
        if float(v).is_integer() and abs(v) < 1e15:
            return str(int(v))
        return format(float(v), ".17g")
    return f"{float(v):.{digits}f}"


def format_matrix(M, header=None, digits=None, row_ids=None):
    """CSV text for a matrix.

    ``digits=None`` writes round-trip precision (17 significant digits,
    integers verbatim); otherwise fixed decimals.
    """
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if header is not None:
        writer.writerow(header)
    for i, row in enumerate(M):
        cells = [_format_value(v, digits) for v in row]
        if row_ids is not None:
            cells.insert(0, str(row_ids[i]))
        writer.writerow(cells)
    return out.getvalue()


def write_text(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename.

    Unwritable destinations raise ``InvalidInputError``.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc.strerror}") from None
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv_matrix(path, M, header=None, digits=None, row_ids=None):
    write_text(path, format_matrix(M, header=header, digits=digits, row_ids=row_ids))


def write_json(path, obj):
    write_text(path, json.dumps(obj, indent=2) + "\n")
