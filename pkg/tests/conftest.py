from __future__ import annotations

from pathlib import Path

import pytest

from src.circuit import Angle, Circuit, HMatrix

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# Worked six-qubit example: H, and the incidence matrix of its graph.
NECKLACE_H_ROWS = (
    "100000",
    "100000",
    "000001",
    "110001",
    "011000",
    "011000",
    "000100",
    "001110",
    "000000",
    "000100",
    "000010",
    "000011",
)
NECKLACE_INCIDENCE_ROWS = ("100000", "110001", "011000", "001110", "000100", "000011")
NECKLACE_GATES = ("YXIIII", "IXYIII", "IIYXII", "IIIYXI", "IIIXIY", "IYIIIX")


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def necklace_h() -> HMatrix:
    return HMatrix.from_rows(NECKLACE_H_ROWS)


@pytest.fixture
def necklace_circuit() -> Circuit:
    return Circuit.from_strings(NECKLACE_GATES, Angle.from_lambda(0.5))
