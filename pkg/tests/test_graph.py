from __future__ import annotations

import networkx as nx
import pytest

from src.errors import EmbeddingError, MinorSearchBudgetError
from src.graph import (
    Graph,
    MinorStep,
    RotationSystem,
    apply_minor_steps,
    classify,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    cycle_space,
    euler_quick_pass,
    has_minor,
    incidence_matrix,
    is_planar,
    k33_minus_edge,
    minor_step,
    necklace_graph,
    path_graph,
)


def test_graph_validation() -> None:
    with pytest.raises(ValueError):
        Graph(2, ((0, 2),))
    with pytest.raises(ValueError):
        Graph(2, ((1, 1),))
    digon = Graph(2, ((0, 1), (0, 1)))
    assert not digon.is_simple()
    assert digon.degree(0) == 2


def test_named_graphs() -> None:
    assert complete_graph(4).edge_count == 6
    assert complete_bipartite(2, 3).edges == ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4))
    assert k33_minus_edge().edge_count == 8
    assert (0, 5) not in k33_minus_edge().edges
    assert cycle_graph(4).edges == ((0, 1), (1, 2), (2, 3), (0, 3))


def test_incidence_and_cycle_space() -> None:
    g = necklace_graph()
    assert incidence_matrix(g).to_strings() == ["100000", "110001", "011000", "001110", "000100", "000011"]
    cs = cycle_space(g)
    assert cs.nullity == 1
    assert cs.even_subgraph_count == 2
    assert cs.basis.column(0).to_string() == "011011"
    assert cycle_space(complete_graph(4)).nullity == 3
    assert cycle_space(path_graph(5)).nullity == 0


def test_minor_step_contract_relabels() -> None:
    g = path_graph(3)
    assert minor_step(g, 0, "contract") == Graph(2, ((0, 1),))
    assert minor_step(g, 1, "delete") == Graph(3, ((0, 1),))
    assert minor_step(g, 1, "delete", cleanup=True) == Graph(2, ((0, 1),))


def test_contraction_drops_loops() -> None:
    digon = Graph(2, ((0, 1), (0, 1)))
    assert minor_step(digon, 0, "contract") == Graph(1, ())


def test_minor_step_errors() -> None:
    with pytest.raises(IndexError):
        minor_step(path_graph(3), 5, "delete")
    with pytest.raises(ValueError):
        minor_step(path_graph(3), 0, "squash")  # type: ignore[arg-type]


def test_k4_is_its_own_minor() -> None:
    result = has_minor(complete_graph(4), complete_graph(4))
    assert result.found
    assert apply_minor_steps(complete_graph(4), result.witness) == complete_graph(4)


def test_k23_has_no_k4_minor() -> None:
    assert not has_minor(complete_bipartite(2, 3), complete_graph(4)).found


def test_k33_minus_edge_contains_k4_minor() -> None:
    g = k33_minus_edge()
    result = has_minor(g, complete_graph(4))
    assert result.found
    replayed = apply_minor_steps(g, result.witness)
    assert replayed.is_simple()
    assert nx.is_isomorphic(replayed.simple(), complete_graph(4).simple())


def test_witness_steps_replay_on_larger_graph() -> None:
    g = complete_graph(5)
    result = has_minor(g, complete_bipartite(2, 3))
    assert result.found
    assert all(isinstance(step, MinorStep) for step in result.witness)
    replayed = apply_minor_steps(g, result.witness)
    assert nx.is_isomorphic(replayed.simple(), complete_bipartite(2, 3).simple())


def test_minor_budget() -> None:
    with pytest.raises(MinorSearchBudgetError):
        has_minor(k33_minus_edge(), complete_graph(4), budget=1)


def test_minor_pattern_must_be_simple() -> None:
    with pytest.raises(ValueError):
        has_minor(complete_graph(4), Graph(2, ((0, 1), (0, 1))))


def test_planarity_and_euler_bound() -> None:
    assert is_planar(complete_graph(5)) is None
    assert is_planar(complete_bipartite(3, 3)) is None
    assert not euler_quick_pass(complete_graph(5))
    # K3,3 passes the edge bound while being nonplanar
    assert euler_quick_pass(complete_bipartite(3, 3))
    assert euler_quick_pass(Graph(2, ((0, 1),) * 5))


def test_embedding_faces_satisfy_euler() -> None:
    for g in (necklace_graph(), complete_graph(4), Graph(3, ((0, 1), (0, 1), (1, 2), (0, 2)))):
        rot = is_planar(g)
        assert rot is not None
        rot.validate(g)
        assert len(rot.faces(g)) == 2 - g.vertex_count + g.edge_count


def test_invalid_rotation_is_rejected() -> None:
    g = Graph(2, ((0, 1),))
    with pytest.raises(EmbeddingError):
        RotationSystem(((0,), ())).validate(g)


def test_classify_reports() -> None:
    k4 = classify(complete_graph(4))
    assert k4.planar and not k4.outerplanar
    assert not k4.theta_obstruction_free
    assert k4.k4_minor.found

    k23 = classify(complete_bipartite(2, 3))
    assert k23.planar and not k23.outerplanar
    assert k23.theta_obstruction_free

    square = classify(cycle_graph(4))
    assert square.outerplanar
    assert square.to_dict()["even_subgraph_count"] == 2


def _wagner_planar(g: Graph) -> bool:
    return not has_minor(g, complete_graph(5)).found and not has_minor(g, complete_bipartite(3, 3)).found


def test_planarity_matches_wagner_up_to_seven_vertices() -> None:
    checked = 0
    for G in nx.graph_atlas_g():
        if G.number_of_nodes() < 5:
            continue
        g = Graph(G.number_of_nodes(), tuple(tuple(sorted(e)) for e in G.edges()))
        assert (is_planar(g) is not None) == _wagner_planar(g), g.edges
        checked += 1
    assert checked == 1234
