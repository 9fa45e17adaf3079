"""Text and CSV serialization shared by the file formats and the CLI.

Exact values are always written as rationals ("9/7", "1"); floats use their
shortest round-trip repr.  Permutations use the canonical comma-separated
form from :mod:`permlsh.perm`.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction

from .kernels import KernelMatrix
from .perm import Permutation, format_permutation, parse_permutation
from .witness import Matrix, Witness


def format_value(v: Fraction | float | int) -> str:
    if isinstance(v, (int, Fraction)):
        return str(Fraction(v))
    return repr(float(v))


def parse_value(text: str) -> Fraction | float:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    try:
        return Fraction(int(text))
    except ValueError:
        return float(text)


def read_permutation_lines(text: str) -> list[Permutation]:
    """One permutation per non-blank, non-comment line."""
    perms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        perms.append(parse_permutation(line))
    if not perms:
        raise ValueError("no permutations in input")
    return perms


def read_pair_lines(text: str) -> list[tuple[Permutation, Permutation]]:
    """Two comma-formatted permutations per line, separated by whitespace."""
    pairs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.replace(";", " ").split()
        if len(tokens) != 2:
            raise ValueError(f"expected two permutations per line, got {line!r}")
        pairs.append((parse_permutation(tokens[0]), parse_permutation(tokens[1])))
    if not pairs:
        raise ValueError("no permutation pairs in input")
    return pairs


def kernel_matrix_to_csv(matrix: KernelMatrix) -> str:
    """Header row of element strings, then one value row per element."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(format_permutation(p) for p in matrix.elements)
    for row in matrix.values:
        writer.writerow(format_value(v) for v in row)
    return buf.getvalue()


def kernel_matrix_from_csv(text: str) -> KernelMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if len(rows) < 2:
        raise ValueError("matrix CSV needs a header row and at least one value row")
    elements = tuple(parse_permutation(cell) for cell in rows[0])
    values = tuple(tuple(parse_value(cell) for cell in row) for row in rows[1:])
    exact = all(isinstance(v, (int, Fraction)) for row in values for v in row)
    return KernelMatrix(elements, values, exact)


def raw_matrix_from_csv(text: str) -> list[list[Fraction | float]]:
    """Headerless square matrix of rational or decimal entries."""
    rows = [
        [parse_value(cell) for cell in row]
        for row in csv.reader(io.StringIO(text))
        if row
    ]
    if not rows:
        raise ValueError("empty matrix CSV")
    return rows


def _matrix_lines(rows: Matrix) -> list[str]:
    return [" ".join(format_value(v) for v in row) for row in rows]


def witness_to_text(w: Witness) -> str:
    lines = [f"n: {w.n}", "A:"]
    lines += [format_permutation(p) for p in w.a]
    lines.append("B:")
    lines += [format_permutation(p) for p in w.b]
    lines.append("U:")
    lines += _matrix_lines(w.u)
    lines.append("V:")
    lines += _matrix_lines(w.v)
    return "\n".join(lines) + "\n"


def witness_from_text(text: str) -> Witness:
    n: int | None = None
    sections: dict[str, list[str]] = {"A": [], "B": [], "U": [], "V": []}
    current: str | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("n:"):
            n = int(line.split(":", 1)[1])
            continue
        key = line.rstrip(":").upper()
        if line.endswith(":") and key in sections:
            current = key
            continue
        if current is None:
            raise ValueError(f"content before any section header: {line!r}")
        sections[current].append(line)
    if n is None:
        raise ValueError("missing 'n:' field")
    missing = [k for k, v in sections.items() if not v]
    if missing:
        raise ValueError(f"missing sections: {missing}")
    a = [parse_permutation(s) for s in sections["A"]]
    b = [parse_permutation(s) for s in sections["B"]]
    if any(p.n != n for p in a + b):
        raise ValueError("permutation size disagrees with the n field")
    u = [[_require_fraction(c) for c in line.split()] for line in sections["U"]]
    v = [[_require_fraction(c) for c in line.split()] for line in sections["V"]]
    return Witness(a, b, u, v)


def _require_fraction(cell: str) -> Fraction:
    value = parse_value(cell)
    if not isinstance(value, Fraction):
        raise ValueError(f"witness matrices must be rational, got {cell!r}")
    return value

