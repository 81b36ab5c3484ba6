"""CSV reading and writing.

Dialect: comma separated, ``.`` decimal, LF line endings, UTF-8. A first row
with any non-numeric cell is a header. Score matrices carry row labels: their
header starts with an empty cell and each row starts with a name.
Floats are written with the shortest round-trip representation.
"""
import csv
import io

import numpy as np

from ._util import atomic_write_text
from .errors import InputError


class CSVParseError(InputError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def parse_matrix(text, *, allow_inf=False):
    """Parse CSV text into ``(values, column_names, row_names)``.

    ``column_names`` is ``None`` without a header; ``row_names`` is ``None``
    unless the header's first cell is empty.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise CSVParseError("no data rows", line=1)
    header = None
    start = 1
    if not all(_is_number(c) for c in rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        start = 2
        if not rows:
            raise CSVParseError("header but no data rows", line=2)
    labelled = header is not None and header[0] == ""
    row_names = [] if labelled else None
    if labelled:
        header = header[1:]
    width = len(header) if header is not None else len(rows[0])
    values = np.empty((len(rows), width))
    for r, row in enumerate(rows):
        line = start + r
        cells = row
        if labelled:
            row_names.append(row[0].strip())
            cells = row[1:]
        if len(cells) != width:
            raise CSVParseError(f"expected {width} fields, found {len(cells)}", line=line)
        for c, cell in enumerate(cells):
            col = c + 1 + (1 if labelled else 0)
            try:
                x = float(cell)
            except ValueError:
                raise CSVParseError(f"non-numeric value {cell.strip()!r}", line=line, column=col) from None
            if np.isnan(x) or (np.isinf(x) and not allow_inf):
                raise CSVParseError(f"non-finite value {cell.strip()!r}", line=line, column=col)
            values[r, c] = x
    return values, header, row_names


def read_matrix(path, *, allow_inf=False):
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_matrix(text, allow_inf=allow_inf)


def format_value(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def format_matrix(values, column_names=None, row_names=None):
    values = np.asarray(values)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    integral = np.issubdtype(values.dtype, np.integer) or values.dtype == bool
    if column_names is not None:
        w.writerow(([""] if row_names is not None else []) + list(column_names))
    for r, row in enumerate(values):
        cells = [str(int(x)) if integral else repr(float(x)) for x in row]
        if row_names is not None:
            cells = [row_names[r]] + cells
        w.writerow(cells)
    return buf.getvalue()


def write_matrix(path, values, column_names=None, row_names=None):
    atomic_write_text(path, format_matrix(values, column_names, row_names))


def default_names(d):
    return [f"X{i + 1}" for i in range(d)]
