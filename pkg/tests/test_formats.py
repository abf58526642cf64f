from __future__ import annotations

from pathlib import Path

import pytest

from src.circuit import Angle
from src.errors import InputFormatError
from src.formats import (
    format_circuit,
    format_graph,
    load_bit_matrix,
    load_circuit,
    load_graph,
    parse_bit_matrix,
    parse_circuit,
    parse_graph,
)
from src.graph import cycle_graph, necklace_graph
from tests.conftest import NECKLACE_GATES

CIRCUIT_TEXT = """\
# two gates
circuit 2
lambda 0.25

gate YX   # first
gate ZY
"""


def test_parse_circuit() -> None:
    c = parse_circuit(CIRCUIT_TEXT)
    assert c.qubit_count == 2
    assert [g.to_string() for g in c.gates] == ["YX", "ZY"]
    assert c.lam == 0.25


def test_angle_override_and_fallback() -> None:
    c = parse_circuit(CIRCUIT_TEXT, angle=Angle.from_theta(1.0))
    assert c.angle.kind == "theta"
    bare = "circuit 1\ngate Y\n"
    assert parse_circuit(bare, fallback=Angle.from_lambda(0.5)).lam == 0.5
    with pytest.raises(InputFormatError) as excinfo:
        parse_circuit(bare, source="bare.circ")
    assert excinfo.value.line == 1
    assert "missing" in excinfo.value.reason


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("circuits 2\n", 1),
        ("circuit 2\nlambda 0.5\ngate YXI\n", 3),
        ("circuit 2\nlambda 0.5\ngate YQ\n", 3),
        ("circuit 2\nlambda -1\ngate YX\n", 2),
        ("circuit 2\nlambda abc\n", 2),
        ("circuit 2\nlambda nan\ngate YX\n", 2),
        ("circuit 2\nlambda inf\ngate YX\n", 2),
        ("circuit 2\ntheta -inf\n", 2),
        ("circuit 2\ngate YX\nlambda 0.5\n", 3),
        ("circuit 2\nlambda 0.5\n\n# note\nrotate YX\n", 5),
    ],
)
def test_circuit_errors_name_the_line(text: str, line: int) -> None:
    with pytest.raises(InputFormatError) as excinfo:
        parse_circuit(text, source="bad.circ")
    assert excinfo.value.path == "bad.circ"
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"bad.circ:{line}:")


def test_format_circuit_is_parseable() -> None:
    c = parse_circuit(CIRCUIT_TEXT)
    again = parse_circuit(format_circuit(c))
    assert again.gates == c.gates
    assert again.lam == c.lam


def test_parse_graph_with_flags() -> None:
    inst = parse_graph("graph 3\nedge 0 1\nedge 1 2 F\nedge 0 2 a\n", coupling=2.0)
    assert inst.graph == cycle_graph(3)
    assert inst.w.to_string() == "001"
    assert inst.coupling == 2.0


@pytest.mark.parametrize(
    "text, line",
    [
        ("graf 3\n", 1),
        ("graph 3\nedge 0 3\n", 2),
        ("graph 3\nedge 1 1\n", 2),
        ("graph 3\nedge 0 1 X\n", 2),
        ("graph 3\n\nedge 0\n", 3),
    ],
)
def test_graph_errors_name_the_line(text: str, line: int) -> None:
    with pytest.raises(InputFormatError) as excinfo:
        parse_graph(text)
    assert excinfo.value.line == line


def test_format_graph_marks_antiferromagnetic_bonds() -> None:
    inst = parse_graph(format_graph(cycle_graph(3), parse_graph("graph 3\nedge 0 1\nedge 1 2\nedge 0 2 A\n").w))
    assert inst.w.to_string() == "001"
    assert format_graph(necklace_graph()).splitlines()[0] == "graph 6"


def test_bit_matrix_parsing() -> None:
    m = parse_bit_matrix("# comment\n1 0 1\n\n110\n")
    assert m.to_strings() == ["101", "110"]
    with pytest.raises(InputFormatError) as excinfo:
        parse_bit_matrix("101\n11\n")
    assert excinfo.value.line == 2
    with pytest.raises(InputFormatError):
        parse_bit_matrix("102\n")
    with pytest.raises(InputFormatError):
        parse_bit_matrix("# nothing\n")


def test_load_shipped_inputs(data_dir: Path) -> None:
    necklace = load_circuit(data_dir / "circuits" / "necklace.circ")
    assert tuple(g.to_string() for g in necklace.gates) == NECKLACE_GATES
    assert necklace.lam == 0.5

    k4 = load_graph(data_dir / "graphs" / "k4.graph")
    assert k4.graph.edge_count == 6

    triangle = load_graph(data_dir / "graphs" / "triangle.graph")
    assert triangle.w.to_string() == "001"

    assert load_bit_matrix(data_dir / "matrices" / "triangle_incidence.bits").to_strings() == ["101", "110", "011"]
    assert load_graph(data_dir / "graphs" / "necklace.graph").graph == necklace_graph()


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        load_circuit(tmp_path / "nope.circ")
