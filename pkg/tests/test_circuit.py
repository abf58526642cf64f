from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from src.circuit import (
    Angle,
    Circuit,
    Gate,
    HMatrix,
    c_matrix,
    circuit_from_h,
    expansion_amplitude,
    h_matrix,
    kernel_weight_sum,
    pauli_product,
    q_matrix,
    simulate_amplitude,
    validate_real_circuit,
)
from src.errors import CapExceededError, ColumnError, NonRealAmplitudeError
from src.gf2 import BitVector
from src.graph import incidence_matrix, necklace_graph


def test_gate_codes() -> None:
    gate = Gate.from_string("YXZI")
    assert gate.label.to_string() == "11011000"
    assert gate.to_string() == "YXZI"
    assert gate.y_count == 1
    assert gate.support() == [0, 1, 2]
    with pytest.raises(ValueError):
        Gate.from_string("YQ")


def test_necklace_h_matrix(necklace_circuit: Circuit, necklace_h: HMatrix) -> None:
    assert h_matrix(necklace_circuit) == necklace_h
    second = necklace_h.second_bits()
    assert second.to_strings() == ["100000", "110001", "011000", "001110", "000100", "000011"]
    assert second == incidence_matrix(necklace_graph())


def test_circuit_from_h_decodes_gates(necklace_h: HMatrix) -> None:
    c = circuit_from_h(necklace_h, Angle.from_lambda(0.5))
    assert [g.to_string() for g in c.gates] == ["YXIIII", "IXYIII", "IIYXII", "IIIYXI", "IIIXIY", "IYIIIX"]
    assert h_matrix(c) == necklace_h


def test_circuit_from_h_rejects_even_y() -> None:
    h = h_matrix(Circuit.from_strings(["YY"], Angle.from_lambda(0.5)))
    with pytest.raises(ColumnError) as excinfo:
        circuit_from_h(h, Angle.from_lambda(0.5))
    assert excinfo.value.code == ColumnError.EVEN_Y_COLUMN
    assert excinfo.value.column == 0


def test_c_matrix() -> None:
    assert c_matrix(2).to_strings() == ["0100", "0000", "0001", "0000"]


def test_pauli_product_signs() -> None:
    z, x = Gate.from_string("Z").label, Gate.from_string("X").label
    sign, label = pauli_product(z, x)
    assert sign == -1
    assert label.to_string() == "11"
    sign, label = pauli_product(x, z)
    assert sign == 1
    assert label.to_string() == "11"


REAL_PAULI = {
    "I": np.eye(2, dtype=np.int64),
    "X": np.array([[0, 1], [1, 0]], dtype=np.int64),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.int64),
    # -iY
    "Y": np.array([[0, -1], [1, 0]], dtype=np.int64),
}


def _dense(label: str) -> np.ndarray:
    return functools.reduce(np.kron, (REAL_PAULI[p] for p in label))


def test_y_times_y_is_minus_identity() -> None:
    y = Gate.from_string("Y").label
    sign, label = pauli_product(y, y)
    assert sign == -1
    assert label.to_string() == "00"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pauli_product_matches_dense_matrices(n: int) -> None:
    labels = ["".join(p) for p in itertools.product("IXZY", repeat=n)]
    for s1 in labels:
        for s2 in labels:
            sign, label = pauli_product(Gate.from_string(s1).label, Gate.from_string(s2).label)
            expected = sign * _dense(Gate(label).to_string())
            assert np.array_equal(_dense(s1) @ _dense(s2), expected), (s1, s2)


def test_q_matrix_two_y_gates() -> None:
    h = h_matrix(Circuit.from_strings(["Y", "Y"], Angle.from_lambda(0.5)))
    assert q_matrix(h).to_strings() == ["00", "10"]


def test_single_gate_amplitude() -> None:
    c = Circuit.from_strings(["YX"], Angle.from_lambda(0.5))
    assert simulate_amplitude(c) == pytest.approx(1 / math.sqrt(1.25), abs=1e-12)
    assert expansion_amplitude(h_matrix(c), 0.5) == pytest.approx(0.894427191, abs=1e-9)


def test_two_y_gates_on_one_qubit() -> None:
    lam = 0.3
    c = Circuit.from_strings(["Y", "Y"], Angle.from_lambda(lam))
    expected = (1 - lam**2) / (1 + lam**2)
    assert simulate_amplitude(c) == pytest.approx(expected, abs=1e-12)
    assert expansion_amplitude(h_matrix(c), lam) == pytest.approx(expected, abs=1e-12)


def test_exact_kernel_sum() -> None:
    h = h_matrix(Circuit.from_strings(["Y", "Y"], Angle.from_lambda(0.5)))
    assert kernel_weight_sum(h, Fraction(1, 2)) == Fraction(3, 4)


def test_necklace_amplitude(necklace_circuit: Circuit, necklace_h: HMatrix) -> None:
    assert simulate_amplitude(necklace_circuit) == pytest.approx(0.544, abs=1e-12)
    assert expansion_amplitude(necklace_h, 0.5) == pytest.approx(0.544, abs=1e-12)
    assert kernel_weight_sum(necklace_h, Fraction(1, 2)) == Fraction(17, 16)


def test_statevector_and_expansion_agree_on_mixed_gates() -> None:
    gates = ["ZYX", "YZI", "XIY", "IYZ", "YYY", "ZXY"]
    c = Circuit.from_strings(gates, Angle.from_lambda(0.7))
    assert simulate_amplitude(c) == pytest.approx(expansion_amplitude(h_matrix(c), 0.7), abs=1e-12)


def test_expansion_rejects_non_positive_lambda(necklace_h: HMatrix) -> None:
    with pytest.raises(ValueError):
        expansion_amplitude(necklace_h, 0.0)


def test_even_y_gate_gives_non_real_amplitude() -> None:
    with pytest.raises(NonRealAmplitudeError):
        simulate_amplitude(Circuit.from_strings(["Z"], Angle.from_lambda(0.5)))


def test_qubit_cap() -> None:
    c = Circuit.from_strings(["YXI"], Angle.from_lambda(0.5))
    with pytest.raises(CapExceededError) as excinfo:
        simulate_amplitude(c, max_qubits=2)
    assert excinfo.value.module == "circuit"
    assert excinfo.value.cap == "max_qubits"


def test_normalization_sign_for_large_theta() -> None:
    theta = 7.0
    c = Circuit.from_strings(["YX"], Angle.from_theta(theta))
    assert c.angle.in_range()
    assert c.normalization_sign == -1
    direct = simulate_amplitude(c)
    assert direct == pytest.approx(math.cos(theta / 2), abs=1e-12)
    assert c.normalization_sign * expansion_amplitude(h_matrix(c), c.lam) == pytest.approx(direct, abs=1e-12)


def test_angle_range() -> None:
    assert Angle.from_theta(1.0).in_range()
    assert not Angle.from_theta(4.0).in_range()
    assert not Angle.from_lambda(-0.5).in_range()


def test_validate_real_circuit() -> None:
    report = validate_real_circuit(Circuit.from_strings(["ZI", "YX"], Angle.from_theta(4.0)))
    assert report.even_y_gates == (0,)
    assert not report.angle_in_range
    assert not report.ok
    assert len(report.messages) == 2
    assert validate_real_circuit(Circuit.from_strings(["YX"], Angle.from_lambda(0.5))).ok


def test_gate_label_length_must_be_even() -> None:
    with pytest.raises(ValueError):
        Gate(BitVector.from_string("101"))
