"""Matrix Market exchange-format reader and writer.

Implements the published grammar for dense use: both ``array`` and
``coordinate`` formats with ``real``, ``complex``, and ``integer``
fields and all four symmetry classes.  ``pattern`` matrices carry no
values and are rejected.  Matrices come back dense (numpy), with
symmetric, hermitian, and skew-symmetric storage expanded; errors are
raised as ParseError carrying the offending 1-based line number.

A deliberately small writer covers what the package emits: dense
``array``-format files in ``general`` symmetry, values formatted with
repr so doubles round-trip exactly.
"""

import numpy as np

from .errors import ParseError

_FORMATS = ("coordinate", "array")
_FIELDS = ("real", "complex", "integer", "pattern")
_SYMMETRIES = ("general", "symmetric", "skew-symmetric", "hermitian")


def _parse_header(line: str):
    tokens = line.split()
    if len(tokens) != 5 or tokens[0].lower() != "%%matrixmarket":
        raise ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", line=1)
    _, obj, fmt, field, symmetry = (t.lower() for t in tokens)
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}, only 'matrix' is handled", line=1)
    if fmt not in _FORMATS:
        raise ParseError(f"unknown format {fmt!r}", line=1)
    if field not in _FIELDS:
        raise ParseError(f"unknown field {field!r}", line=1)
    if field == "pattern":
        raise ParseError("pattern matrices carry no values and are not accepted", line=1)
    if symmetry not in _SYMMETRIES:
        raise ParseError(f"unknown symmetry {symmetry!r}", line=1)
    return fmt, field, symmetry


def _value_width(field: str) -> int:
    return 2 if field == "complex" else 1


def _parse_value(tokens, field, lineno):
    try:
        if field == "integer":
            return float(int(tokens[0]))
        if field == "real":
            return float(tokens[0])
        return complex(float(tokens[0]), float(tokens[1]))
    except ValueError as exc:
        raise ParseError(f"bad {field} value {' '.join(tokens)!r}", line=lineno) from exc


def _parse_ints(tokens, count, lineno, what):
    if len(tokens) != count:
        raise ParseError(f"{what} needs {count} integers, got {len(tokens)}", line=lineno)
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"bad integer in {what}: {' '.join(tokens)!r}", line=lineno) from exc
    if any(v < 0 for v in values):
        raise ParseError(f"negative size in {what}", line=lineno)
    return values


def read(path) -> np.ndarray:
    """Parse one Matrix Market file into a dense numpy matrix.

    Returns float64 for real/integer fields and complex128 for complex.
    """
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", line=1)
    fmt, field, symmetry = _parse_header(lines[0])

    # comment and blank lines may appear between the header and the size
    # line and between data lines
    def content_lines():
        for idx in range(1, len(lines)):
            stripped = lines[idx].strip()
            if not stripped or stripped.startswith("%"):
                continue
            yield idx + 1, stripped

    stream = content_lines()

    def next_line(expect):
        try:
            return next(stream)
        except StopIteration:
            raise ParseError(f"unexpected end of file, expected {expect}", line=len(lines) + 1) from None

    lineno, size_line = next_line("size line")
    dtype = complex if field == "complex" else float
    width = _value_width(field)

    if fmt == "array":
        nrows, ncols = _parse_ints(size_line.split(), 2, lineno, "array size line")
        if symmetry != "general" and nrows != ncols:
            raise ParseError(f"{symmetry} matrices must be square, got {nrows}x{ncols}", line=lineno)
        M = np.zeros((nrows, ncols), dtype=dtype)
        # column-major traversal; non-general storage holds the lower
        # triangle (strictly lower for skew-symmetric)
        for j in range(ncols):
            if symmetry == "general":
                row_start = 0
            elif symmetry == "skew-symmetric":
                row_start = j + 1
            else:
                row_start = j
            for i in range(row_start, nrows):
                lineno, entry = next_line("matrix entry")
                tokens = entry.split()
                if len(tokens) != width:
                    raise ParseError(
                        f"expected {width} value token(s), got {len(tokens)}", line=lineno
                    )
                v = _parse_value(tokens, field, lineno)
                M[i, j] = v
                if i != j:
                    if symmetry == "symmetric":
                        M[j, i] = v
                    elif symmetry == "hermitian":
                        M[j, i] = np.conj(v)
                    elif symmetry == "skew-symmetric":
                        M[j, i] = -v
    else:
        nrows, ncols, nnz = _parse_ints(size_line.split(), 3, lineno, "coordinate size line")
        if symmetry != "general" and nrows != ncols:
            raise ParseError(f"{symmetry} matrices must be square, got {nrows}x{ncols}", line=lineno)
        M = np.zeros((nrows, ncols), dtype=dtype)
        for _ in range(nnz):
            lineno, entry = next_line("coordinate entry")
            tokens = entry.split()
            if len(tokens) != 2 + width:
                raise ParseError(
                    f"expected {2 + width} tokens (i j value), got {len(tokens)}", line=lineno
                )
            i, j = _parse_ints(tokens[:2], 2, lineno, "coordinate indices")
            if not (1 <= i <= nrows and 1 <= j <= ncols):
                raise ParseError(f"index ({i}, {j}) outside {nrows}x{ncols}", line=lineno)
            v = _parse_value(tokens[2:], field, lineno)
            if symmetry != "general":
                if i < j:
                    raise ParseError(
                        f"{symmetry} storage must give only the lower triangle", line=lineno
                    )
                if symmetry == "skew-symmetric" and i == j:
                    raise ParseError(
                        "skew-symmetric storage cannot carry diagonal entries", line=lineno
                    )
            # repeated entries accumulate
            M[i - 1, j - 1] += v
            if i != j:
                if symmetry == "symmetric":
                    M[j - 1, i - 1] += v
                elif symmetry == "hermitian":
                    M[j - 1, i - 1] += np.conj(v)
                elif symmetry == "skew-symmetric":
                    M[j - 1, i - 1] += -v

    for lineno, extra in stream:
        raise ParseError(f"unexpected trailing data {extra!r}", line=lineno)
    return M


def write(path, M, comment: str | None = None) -> None:
    """Write a dense matrix as an array-format, general-symmetry file."""
    M = np.atleast_2d(np.asarray(M))
    if M.ndim != 2:
        raise ValueError("only 2-D matrices can be written")
    is_complex = np.iscomplexobj(M)
    field = "complex" if is_complex else "real"
    nrows, ncols = M.shape
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"%%MatrixMarket matrix array {field} general\n")
        if comment:
            for part in comment.splitlines():
                fh.write(f"% {part}\n")
        fh.write(f"{nrows} {ncols}\n")
        for j in range(ncols):
            for i in range(nrows):
                v = M[i, j]
                if is_complex:
                    fh.write(f"{float(v.real)!r} {float(v.imag)!r}\n")
                else:
                    fh.write(f"{float(v)!r}\n")
