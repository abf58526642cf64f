from __future__ import annotations

import networkx as nx
import numpy as np
import pytest

from src.circuit import h_matrix
from src.config import Limits
from src.graph import is_planar
from src.mapping import circuit_to_graph, solve_w_joint
from src.verify import (
    LAMBDA_GRID,
    accepted_graph,
    check_amplitudes,
    random_graph,
    random_graph_circuit,
    random_planar_graph,
    random_real_circuit,
    run_instance,
    run_verify,
)


def test_random_planar_graphs_are_simple_connected_and_planar() -> None:
    for i in range(30):
        g = random_planar_graph(np.random.default_rng([1, i]))
        assert g.vertex_count >= 2
        assert g.is_simple()
        assert g.is_connected()
        assert is_planar(g) is not None


def test_random_graphs_respect_edge_cap() -> None:
    for i in range(30):
        g = random_graph(np.random.default_rng([2, i]), max_vertices=6, max_edges=9)
        assert g.edge_count <= 9
        assert g.is_simple()
        assert nx.is_connected(g.simple())


def test_random_circuits() -> None:
    for i in range(30):
        rng = np.random.default_rng([3, i])
        c = random_real_circuit(rng)
        assert all(g.y_count % 2 == 1 for g in c.gates)
        assert c.lam in LAMBDA_GRID
        graph_circuit = random_graph_circuit(rng)
        circuit_to_graph(h_matrix(graph_circuit))


def test_accepted_graph_is_accepted() -> None:
    for i in range(10):
        assert solve_w_joint(accepted_graph(np.random.default_rng([4, i]))) is not None


def test_instances_are_reproducible() -> None:
    first = run_instance((7, 2, Limits()))
    second = run_instance((7, 2, Limits()))
    assert first == second
    assert {o.check for o in first} == {"partition", "amplitude", "graph_circuit", "deletion", "contraction"}


def test_run_verify_is_deterministic_and_passes() -> None:
    report = run_verify(7, 3)
    assert report.ok
    assert report == run_verify(7, 3)
    counts = report.counts()
    assert counts["partition"]["passed"] == 3
    assert report.to_dict()["failures"] == []


def test_worker_pool_gives_the_same_report() -> None:
    assert run_verify(5, 2, workers=2) == run_verify(5, 2)


def test_negative_count() -> None:
    with pytest.raises(ValueError):
        run_verify(7, -1)


def test_amplitude_chain_on_random_circuits() -> None:
    limits = Limits()
    for i in range(200):
        for outcome in check_amplitudes(i, np.random.default_rng([9, i]), limits):
            assert outcome.passed, outcome.detail


def test_random_planar_multigraphs() -> None:
    for i in range(30):
        g = random_planar_graph(np.random.default_rng([12, i]), max_parallel=3)
        assert g.edge_count <= g.simple().number_of_edges() + 3
        assert g.is_connected()
        assert is_planar(g) is not None
