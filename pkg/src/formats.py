"""Text formats for circuits, Ising graphs and bit matrices.

Circuit file::

    circuit <n>
    lambda <positive decimal>      # or: theta <radians>
    gate <string over I,X,Y,Z of length n, qubit 1 leftmost>
    ...

Graph file::

    graph <|V|>
    edge <u> <v> [F|A]             # 0-indexed; F = ferromagnetic (default)
    ...

Bit-matrix file: one row per line, ``0``/``1`` characters, spaces allowed.

In all formats blank lines and ``#`` comments are ignored, and every parse
error names the source and the 1-based line number.
"""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Iterator

from .circuit import Angle, Circuit, Gate
from .errors import InputFormatError
from .gf2 import BitMatrix, BitVector
from .graph import Graph
from .ising import IsingInstance

_CIRCUIT_HEADER_RE = re.compile(r"^circuit\s+(\d+)$")
_ANGLE_RE = re.compile(r"^(lambda|theta)\s+(\S+)$")
_GATE_RE = re.compile(r"^gate\s+(\S+)$")
_GRAPH_HEADER_RE = re.compile(r"^graph\s+(\d+)$")
_EDGE_RE = re.compile(r"^edge\s+(\d+)\s+(\d+)(?:\s+(\S+))?$")
_BITS_RE = re.compile(r"^[01\s]+$")


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _read(path: str | Path) -> str:
    filepath = Path(path)
    if not filepath.exists():
        raise FileNotFoundError(f"Input file not found: {filepath}")
    return filepath.read_text(encoding="utf-8")


# ---------------------------------------------------------------------------
# Circuits
# ---------------------------------------------------------------------------


def parse_circuit(
    text: str,
    source: str = "<string>",
    angle: Angle | None = None,
    fallback: Angle | None = None,
) -> Circuit:
    """Parse circuit text.

    *angle* overrides the file's angle line; *fallback* is used only when
    the file has none.

    Raises
    ------
    InputFormatError
        On a malformed header, angle or gate line, a gate of the wrong
        length, or a missing angle.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise InputFormatError(source, 1, "empty circuit file")

    lineno, header = lines[0]
    match = _CIRCUIT_HEADER_RE.match(header)
    if not match:
        raise InputFormatError(source, lineno, f"expected 'circuit <n>', got {header!r}")
    n = int(match.group(1))

    file_angle: Angle | None = None
    gates: list[Gate] = []
    for lineno, line in lines[1:]:
        angle_match = _ANGLE_RE.match(line)
        if angle_match:
            if file_angle is not None or gates:
                raise InputFormatError(source, lineno, "angle line must come once, before the gates")
            kind, raw = angle_match.groups()
            try:
                value = float(raw)
            except ValueError:
                raise InputFormatError(source, lineno, f"{kind} value {raw!r} is not a number") from None
            if not math.isfinite(value):
                raise InputFormatError(source, lineno, f"{kind} must be finite, got {raw!r}")
            if kind == "lambda" and value <= 0:
                raise InputFormatError(source, lineno, f"lambda must be positive, got {value}")
            file_angle = Angle(kind, value)
            continue

        gate_match = _GATE_RE.match(line)
        if not gate_match:
            raise InputFormatError(source, lineno, f"expected 'gate <string>', got {line!r}")
        label = gate_match.group(1)
        if len(label) != n:
            raise InputFormatError(source, lineno, f"gate {label!r} has length {len(label)}, expected {n}")
        try:
            gates.append(Gate.from_string(label))
        except ValueError as exc:
            raise InputFormatError(source, lineno, str(exc)) from None

    chosen = angle or file_angle or fallback
    if chosen is None:
        raise InputFormatError(source, lines[0][0], "missing 'lambda' or 'theta' line")
    return Circuit(n, tuple(gates), chosen)


def load_circuit(path: str | Path, angle: Angle | None = None, fallback: Angle | None = None) -> Circuit:
    return parse_circuit(_read(path), str(path), angle, fallback)


def format_circuit(c: Circuit) -> str:
    lines = [f"circuit {c.qubit_count}", f"{c.angle.kind} {float(c.angle.value)!r}"]
    lines.extend(f"gate {g.to_string()}" for g in c.gates)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------


def parse_graph(text: str, source: str = "<string>", coupling: float = 1.0) -> IsingInstance:
    """Parse graph text into an Ising instance (bond flags fill ``w``).

    Raises
    ------
    InputFormatError
        On a malformed header or edge line, an out-of-range endpoint, a
        self-loop, or an unknown bond flag.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise InputFormatError(source, 1, "empty graph file")

    lineno, header = lines[0]
    match = _GRAPH_HEADER_RE.match(header)
    if not match:
        raise InputFormatError(source, lineno, f"expected 'graph <|V|>', got {header!r}")
    n = int(match.group(1))

    edges: list[tuple[int, int]] = []
    bonds: list[int] = []
    for lineno, line in lines[1:]:
        edge_match = _EDGE_RE.match(line)
        if not edge_match:
            raise InputFormatError(source, lineno, f"expected 'edge <u> <v> [F|A]', got {line!r}")
        u, v = int(edge_match.group(1)), int(edge_match.group(2))
        flag = (edge_match.group(3) or "F").upper()
        if flag not in ("F", "A"):
            raise InputFormatError(source, lineno, f"bond flag must be F or A, got {flag!r}")
        if not (u < n and v < n):
            raise InputFormatError(source, lineno, f"endpoint out of range for {n} vertices")
        if u == v:
            raise InputFormatError(source, lineno, "self-loops are not allowed")
        edges.append((u, v))
        bonds.append(1 if flag == "A" else 0)

    return IsingInstance(Graph(n, tuple(edges)), BitVector(bonds), coupling)


def load_graph(path: str | Path, coupling: float = 1.0) -> IsingInstance:
    return parse_graph(_read(path), str(path), coupling)


def format_graph(g: Graph, w: BitVector | None = None) -> str:
    lines = [f"graph {g.vertex_count}"]
    for e, (u, v) in enumerate(g.edges):
        flag = "A" if w is not None and w[e] else "F"
        lines.append(f"edge {u} {v} {flag}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Bit matrices
# ---------------------------------------------------------------------------


def parse_bit_matrix(text: str, source: str = "<string>") -> BitMatrix:
    rows: list[list[int]] = []
    width: int | None = None
    first_line = 1
    for lineno, line in _content_lines(text):
        if not _BITS_RE.match(line):
            raise InputFormatError(source, lineno, f"matrix rows may only contain 0 and 1, got {line!r}")
        row = [int(ch) for ch in line if ch in "01"]
        if width is None:
            width, first_line = len(row), lineno
        elif len(row) != width:
            raise InputFormatError(source, lineno, f"row has {len(row)} entries, expected {width}")
        rows.append(row)
    if not rows:
        raise InputFormatError(source, first_line, "empty matrix file")
    return BitMatrix(rows)


def load_bit_matrix(path: str | Path) -> BitMatrix:
    return parse_bit_matrix(_read(path), str(path))
