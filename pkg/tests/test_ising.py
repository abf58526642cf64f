from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from src.errors import CapExceededError
from src.gf2 import BitMatrix, BitVector
from src.graph import Graph, complete_bipartite, complete_graph, cycle_graph, incidence_matrix, necklace_graph
from src.ising import (
    IsingInstance,
    brute_force_partition,
    even_sum,
    partition_from_sum,
    partition_function,
    pick_even_sum_evaluator,
    qwgt,
    signed_even_subgraph_sum,
)
from src.verify import check_partition

EDGE = Graph(2, ((0, 1),))


def test_instance_validation() -> None:
    with pytest.raises(ValueError):
        IsingInstance(EDGE, BitVector.zeros(2))
    with pytest.raises(ValueError):
        IsingInstance(EDGE, BitVector.zeros(1), coupling=0.0)
    inst = IsingInstance(cycle_graph(3), BitVector.from_string("010"), coupling=2.0)
    assert inst.bond_values().tolist() == [2.0, -2.0, 2.0]


def test_single_edge_partition() -> None:
    inst = IsingInstance.ferromagnetic(EDGE)
    assert brute_force_partition(inst, 1.0) == pytest.approx(4 * math.cosh(1.0), rel=1e-12)
    result = partition_function(inst, 1.0)
    assert result.evaluator == "planar"
    assert result.value == pytest.approx(6.1723, abs=1e-4)
    assert result.lam == pytest.approx(math.tanh(1.0))


def test_all_evaluators_agree_on_frustrated_triangle() -> None:
    inst = IsingInstance(cycle_graph(3), BitVector.from_string("001"))
    beta = 0.8
    values = [partition_function(inst, beta, method).value for method in ("planar", "kernel", "brute")]
    assert values[0] == pytest.approx(values[2], rel=1e-12)
    assert values[1] == pytest.approx(values[2], rel=1e-12)


def test_signed_even_subgraph_sums() -> None:
    tri = IsingInstance(cycle_graph(3), BitVector.from_string("001"))
    assert signed_even_subgraph_sum(tri, 0.5) == pytest.approx(0.875)
    assert signed_even_subgraph_sum(tri, Fraction(1, 2)) == Fraction(7, 8)
    neck = IsingInstance.ferromagnetic(necklace_graph())
    assert signed_even_subgraph_sum(neck, 0.5) == pytest.approx(1.0625)


def test_qwgt_with_general_y() -> None:
    A = incidence_matrix(cycle_graph(3))
    B = BitMatrix(np.diag([0, 0, 1]))
    assert qwgt(A, B, Fraction(1, 2), Fraction(3)) == Fraction(27) - Fraction(1, 8)
    with pytest.raises(ValueError):
        qwgt(A, BitMatrix.zeros(2, 2), 0.5, 1.0)


def test_partition_from_sum_needs_physical_lambda() -> None:
    inst = IsingInstance.ferromagnetic(EDGE)
    with pytest.raises(ValueError):
        partition_from_sum(inst, 1.0, 1.0)
    with pytest.raises(ValueError):
        partition_from_sum(inst, 1.0, 0.0)


def test_caps() -> None:
    with pytest.raises(CapExceededError):
        brute_force_partition(IsingInstance.ferromagnetic(Graph(5, ())), 1.0, max_spins=4)
    with pytest.raises(CapExceededError):
        signed_even_subgraph_sum(IsingInstance.ferromagnetic(complete_graph(4)), 0.5, max_nullity=2)


def test_evaluator_choice() -> None:
    assert pick_even_sum_evaluator(complete_graph(4)) == "planar"
    assert pick_even_sum_evaluator(complete_bipartite(3, 3)) == "kernel"
    assert pick_even_sum_evaluator(complete_graph(5), max_nullity=3) is None
    with pytest.raises(ValueError):
        even_sum(IsingInstance.ferromagnetic(EDGE), 0.5, "brute")  # type: ignore[arg-type]


def test_nonplanar_partition_uses_kernel() -> None:
    inst = IsingInstance.ferromagnetic(complete_bipartite(3, 3))
    result = partition_function(inst, 0.4)
    assert result.evaluator == "kernel"
    assert result.value == pytest.approx(brute_force_partition(inst, 0.4), rel=1e-10)


def test_coupling_scales_beta() -> None:
    doubled = IsingInstance(EDGE, BitVector.zeros(1), coupling=2.0)
    assert partition_function(doubled, 0.5).value == pytest.approx(4 * math.cosh(1.0), rel=1e-12)


def test_three_way_agreement_on_random_planar_instances() -> None:
    for i in range(100):
        outcome = check_partition(i, np.random.default_rng([1, i]))[0]
        assert outcome.passed, outcome.detail
