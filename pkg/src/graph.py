"""Undirected multigraphs, minors and planar embeddings.

A :class:`Graph` is a vertex count plus an ordered edge list.  Edge order is
significant: edge ``e`` is column ``e`` of the incidence matrix, bit ``e`` of
a bond vector and gate ``e`` of the matching circuit.  Parallel edges are
allowed, self-loops are not.

Minor containment is decided by exhaustive search over contractions.  A
pattern ``P`` is a minor of ``G`` iff some contraction of ``G`` contains
``P`` as a subgraph, so only contractions are branched on and each
contracted graph is tested for a subgraph monomorphism with networkx.
Witnesses are replayable step lists (contractions, then deletions, then an
isolated-vertex cleanup).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, NamedTuple, Sequence

import networkx as nx
from networkx.algorithms import isomorphism

from .errors import EmbeddingError, MinorSearchBudgetError
from .gf2 import BitMatrix, nullspace_basis

logger = logging.getLogger(__name__)

DEFAULT_MINOR_BUDGET = 1_000_000


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.vertex_count < 0:
            raise ValueError(f"vertex_count must be non-negative, got {self.vertex_count}")
        for e, (u, v) in enumerate(edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {e} = ({u}, {v}) has an endpoint outside [0, {self.vertex_count})")
            if u == v:
                raise ValueError(f"edge {e} = ({u}, {v}) is a self-loop")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum((u == v) + (w == v) for u, w in self.edges)

    def incident_edges(self, v: int) -> list[int]:
        return [e for e, (a, b) in enumerate(self.edges) if v in (a, b)]

    def is_simple(self) -> bool:
        return len({frozenset(e) for e in self.edges}) == len(self.edges)

    def isolated_vertices(self) -> list[int]:
        touched = {x for e in self.edges for x in e}
        return [v for v in range(self.vertex_count) if v not in touched]

    def simple(self) -> nx.Graph:
        """Underlying simple graph on nodes ``0..|V|-1``."""
        G = nx.Graph()
        G.add_nodes_from(range(self.vertex_count))
        G.add_edges_from(self.edges)
        return G

    def components(self) -> list[set[int]]:
        return [set(c) for c in nx.connected_components(self.simple())]

    def is_connected(self) -> bool:
        return self.vertex_count > 0 and nx.is_connected(self.simple())

    def without_edges(self, drop: Sequence[int]) -> Graph:
        dropped = set(drop)
        return Graph(self.vertex_count, tuple(e for i, e in enumerate(self.edges) if i not in dropped))


# ---------------------------------------------------------------------------
# Named graphs (edges in lexicographic order)
# ---------------------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    """``K_{a,b}`` with sides ``0..a-1`` and ``a..a+b-1``."""
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def k33_minus_edge() -> Graph:
    """``K_{3,3}`` with the edge ``(0, 5)`` removed."""
    k33 = complete_bipartite(3, 3)
    return k33.without_edges([k33.edges.index((0, 5))])


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) if i + 1 < n else (0, n - 1) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def necklace_graph() -> Graph:
    """Six vertices, one 4-cycle through vertices 1, 2, 3, 5 and two pendant edges."""
    return Graph(6, ((0, 1), (1, 2), (2, 3), (3, 4), (3, 5), (1, 5)))


# ---------------------------------------------------------------------------
# Linear-algebraic views
# ---------------------------------------------------------------------------


def incidence_matrix(g: Graph) -> BitMatrix:
    """``|V| x |E|`` incidence matrix; column ``e`` marks the endpoints of edge ``e``."""
    rows = [[0] * g.edge_count for _ in range(g.vertex_count)]
    for e, (u, v) in enumerate(g.edges):
        rows[u][e] = 1
        rows[v][e] = 1
    if not rows:
        return BitMatrix.zeros(0, g.edge_count)
    return BitMatrix(rows)


class CycleSpace(NamedTuple):
    basis: BitMatrix
    nullity: int
    even_subgraph_count: int


def cycle_space(g: Graph) -> CycleSpace:
    """Basis of the even-subgraph space ``ker A`` and its size."""
    basis = nullspace_basis(incidence_matrix(g))
    return CycleSpace(basis, basis.cols, 1 << basis.cols)


# ---------------------------------------------------------------------------
# Minor operations
# ---------------------------------------------------------------------------

MinorOp = Literal["delete", "contract", "cleanup"]


@dataclass(frozen=True)
class MinorStep:
    op: MinorOp
    edge: int | None = None

    def to_dict(self) -> dict:
        return {"op": self.op, "edge": self.edge}


def drop_isolated(g: Graph) -> Graph:
    isolated = set(g.isolated_vertices())
    if not isolated:
        return g
    relabel: dict[int, int] = {}
    for v in range(g.vertex_count):
        if v not in isolated:
            relabel[v] = len(relabel)
    return Graph(len(relabel), tuple((relabel[u], relabel[v]) for u, v in g.edges))


def minor_step(g: Graph, e: int, mode: Literal["delete", "contract"], cleanup: bool = False) -> Graph:
    """Delete or contract edge *e*.

    Contraction of ``(u, v)`` keeps ``min(u, v)``, removes ``max(u, v)`` and
    shifts higher vertex labels down by one.  Other edges keep their relative
    order; edges that become self-loops are dropped and parallel edges are
    kept.  With *cleanup*, isolated vertices are removed afterwards.

    Raises
    ------
    IndexError
        If *e* is not a valid edge index.
    ValueError
        If *mode* is unknown.
    """
    if not 0 <= e < g.edge_count:
        raise IndexError(f"edge index {e} out of range for {g.edge_count} edges")

    if mode == "delete":
        result = g.without_edges([e])
    elif mode == "contract":
        u, v = g.edges[e]
        keep, gone = min(u, v), max(u, v)

        def relabel(x: int) -> int:
            if x == gone:
                return keep
            return x - 1 if x > gone else x

        edges = []
        for i, (a, b) in enumerate(g.edges):
            if i == e:
                continue
            a, b = relabel(a), relabel(b)
            if a != b:
                edges.append((a, b))
        result = Graph(g.vertex_count - 1, tuple(edges))
    else:
        raise ValueError(f"unknown minor operation {mode!r}")

    return drop_isolated(result) if cleanup else result


def apply_minor_steps(g: Graph, steps: Sequence[MinorStep]) -> Graph:
    """Replay a witness produced by :func:`has_minor`."""
    for step in steps:
        if step.op == "cleanup":
            g = drop_isolated(g)
        else:
            g = minor_step(g, step.edge, step.op)
    return g


@dataclass(frozen=True)
class MinorResult:
    found: bool
    witness: tuple[MinorStep, ...] | None = None
    explored: int = 0

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "witness": None if self.witness is None else [s.to_dict() for s in self.witness],
            "explored": self.explored,
        }


def _degrees_dominate(state: nx.Graph, pattern_degrees: list[int]) -> bool:
    degrees = sorted((d for _, d in state.degree()), reverse=True)
    return all(d >= p for d, p in zip(degrees, pattern_degrees))


def _completion_steps(g: Graph, mapping: dict[int, int], pattern: nx.Graph) -> tuple[MinorStep, ...]:
    """Deletions and cleanup reducing *g* to the image of a pattern monomorphism."""
    wanted = {frozenset((a, b)) for a, b in pattern.edges()}
    chosen: set[int] = set()
    for i, (u, v) in enumerate(g.edges):
        if u not in mapping or v not in mapping:
            continue
        pair = frozenset((mapping[u], mapping[v]))
        if pair in wanted:
            wanted.discard(pair)
            chosen.add(i)
    deletions = [MinorStep("delete", i) for i in reversed(range(g.edge_count)) if i not in chosen]
    return (*deletions, MinorStep("cleanup"))


def has_minor(g: Graph, pattern: Graph, budget: int = DEFAULT_MINOR_BUDGET) -> MinorResult:
    """Decide whether *pattern* is a minor of *g*.

    Parameters
    ----------
    g : Graph
        Host multigraph.
    pattern : Graph
        Simple graph without isolated vertices.
    budget : int
        Maximum number of distinct contracted graphs to examine.

    Returns
    -------
    MinorResult
        ``found`` plus a witness replayable with :func:`apply_minor_steps`.

    Raises
    ------
    MinorSearchBudgetError
        If more than *budget* search nodes are needed.
    ValueError
        If *pattern* has parallel edges or isolated vertices.
    """
    if not pattern.is_simple():
        raise ValueError("minor pattern must be a simple graph")
    if pattern.isolated_vertices():
        raise ValueError("minor pattern must not have isolated vertices")

    target = pattern.simple()
    target_degrees = sorted((d for _, d in target.degree()), reverse=True)
    pv, pe = target.number_of_nodes(), target.number_of_edges()

    seen: set[frozenset] = set()
    explored = 0
    start_branches = tuple(frozenset({v}) for v in range(g.vertex_count))
    stack: list[tuple[Graph, tuple[frozenset, ...], tuple[MinorStep, ...]]] = [(g, start_branches, ())]

    while stack:
        current, branches, steps = stack.pop()
        key = frozenset(frozenset((branches[u], branches[v])) for u, v in current.edges)
        if key in seen:
            continue
        seen.add(key)
        explored += 1
        if explored > budget:
            raise MinorSearchBudgetError(budget)

        state = nx.Graph(current.edges)
        if state.number_of_nodes() < pv or state.number_of_edges() < pe:
            continue
        if _degrees_dominate(state, target_degrees):
            matcher = isomorphism.GraphMatcher(state, target)
            mapping = next(matcher.subgraph_monomorphisms_iter(), None)
            if mapping is not None:
                logger.debug("minor found after %d search nodes", explored)
                return MinorResult(True, steps + _completion_steps(current, mapping, target), explored)
        if state.number_of_nodes() == pv:
            continue

        seen_pairs: set[frozenset] = set()
        children: list[int] = []
        for i, (u, v) in enumerate(current.edges):
            pair = frozenset((u, v))
            if pair not in seen_pairs:
                seen_pairs.add(pair)
                children.append(i)
        for i in reversed(children):
            u, v = current.edges[i]
            keep, gone = min(u, v), max(u, v)
            merged = list(branches)
            merged[keep] = branches[keep] | branches[gone]
            del merged[gone]
            stack.append(
                (minor_step(current, i, "contract"), tuple(merged), steps + (MinorStep("contract", i),))
            )

    logger.debug("no minor after %d search nodes", explored)
    return MinorResult(False, None, explored)


# ---------------------------------------------------------------------------
# Planar embeddings
# ---------------------------------------------------------------------------

Dart = tuple[int, int]


@dataclass(frozen=True)
class RotationSystem:
    """Cyclic order of incident edge indices around every vertex."""

    order: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(tuple(int(e) for e in rot) for rot in self.order))

    def mirrored(self) -> RotationSystem:
        return RotationSystem(tuple(tuple(reversed(rot)) for rot in self.order))

    def faces(self, g: Graph) -> list[list[Dart]]:
        """Trace faces as lists of darts ``(edge, direction)``.

        Direction 0 runs from ``edges[e][0]`` to ``edges[e][1]``.  After
        arriving at a vertex along ``e`` the walk leaves along the edge that
        follows ``e`` in that vertex's rotation.
        """
        position = [{e: i for i, e in enumerate(rot)} for rot in self.order]
        visited: set[Dart] = set()
        faces: list[list[Dart]] = []
        for e in range(g.edge_count):
            for d in (0, 1):
                if (e, d) in visited:
                    continue
                face: list[Dart] = []
                dart = (e, d)
                while dart not in visited:
                    visited.add(dart)
                    face.append(dart)
                    edge, direction = dart
                    head = g.edges[edge][1 - direction]
                    rot = self.order[head]
                    nxt = rot[(position[head][edge] + 1) % len(rot)]
                    dart = (nxt, 0 if g.edges[nxt][0] == head else 1)
                faces.append(face)
        return faces

    def validate(self, g: Graph) -> None:
        """Check that this is a planar embedding of *g*.

        Raises
        ------
        EmbeddingError
            If some rotation is not a permutation of the incident edges, or
            Euler's relation ``V - E + F = 2`` fails on a component.
        """
        if len(self.order) != g.vertex_count:
            raise EmbeddingError(f"rotation covers {len(self.order)} vertices, graph has {g.vertex_count}")
        for v, rot in enumerate(self.order):
            if sorted(rot) != g.incident_edges(v) or len(set(rot)) != len(rot):
                raise EmbeddingError(f"rotation at vertex {v} is not a permutation of its edges")

        faces = self.faces(g)
        component_of: dict[int, int] = {}
        for c, comp in enumerate(g.components()):
            for v in comp:
                component_of[v] = c
        vertices: dict[int, int] = {}
        edges: dict[int, int] = {}
        face_counts: dict[int, int] = {}
        for v in range(g.vertex_count):
            if g.degree(v):
                c = component_of[v]
                vertices[c] = vertices.get(c, 0) + 1
        for u, _ in g.edges:
            c = component_of[u]
            edges[c] = edges.get(c, 0) + 1
        for face in faces:
            c = component_of[g.edges[face[0][0]][0]]
            face_counts[c] = face_counts.get(c, 0) + 1
        for c in edges:
            if vertices[c] - edges[c] + face_counts[c] != 2:
                raise EmbeddingError(
                    f"Euler relation fails on a component: V={vertices[c]} E={edges[c]} F={face_counts[c]}"
                )


def is_planar(g: Graph) -> RotationSystem | None:
    """Planar rotation system of *g*, or ``None`` if *g* is not planar.

    The embedding of the underlying simple graph comes from networkx; each
    bundle of parallel edges is inserted consecutively, in ascending index
    order at the lower endpoint and descending at the upper one, so that
    consecutive copies bound digon faces.
    """
    simple = g.simple()
    planar, embedding = nx.check_planarity(simple)
    if not planar:
        return None

    bundles: dict[tuple[int, int], list[int]] = {}
    for e, (u, v) in enumerate(g.edges):
        bundles.setdefault((min(u, v), max(u, v)), []).append(e)

    order: list[tuple[int, ...]] = []
    for v in range(g.vertex_count):
        rot: list[int] = []
        if simple.degree(v):
            for nbr in embedding.neighbors_cw_order(v):
                bundle = bundles[(min(v, nbr), max(v, nbr))]
                rot.extend(bundle if v < nbr else reversed(bundle))
        order.append(tuple(rot))

    rotation = RotationSystem(tuple(order))
    rotation.validate(g)
    return rotation


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def euler_quick_pass(g: Graph) -> bool:
    """``|E| <= 3|V| - 6`` on the underlying simple graph (vacuous below 3 vertices)."""
    if g.vertex_count < 3:
        return True
    return g.simple().number_of_edges() <= 3 * g.vertex_count - 6


@dataclass(frozen=True)
class GraphReport:
    planar: bool
    outerplanar: bool
    euler_quick_pass: bool
    theta_obstruction_free: bool
    nullity: int
    k4_minor: MinorResult
    k33_minus_edge_minor: MinorResult
    k23_minor: MinorResult | None = None
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "planar": self.planar,
            "outerplanar": self.outerplanar,
            "euler_quick_pass": self.euler_quick_pass,
            "theta_obstruction_free": self.theta_obstruction_free,
            "nullity": self.nullity,
            "even_subgraph_count": 1 << self.nullity,
            "k4_minor": self.k4_minor.to_dict(),
            "k33_minus_edge_minor": self.k33_minus_edge_minor.to_dict(),
            "k23_minor": None if self.k23_minor is None else self.k23_minor.to_dict(),
            "notes": list(self.notes),
        }


def classify(g: Graph, budget: int = DEFAULT_MINOR_BUDGET) -> GraphReport:
    """Planarity, outerplanarity, Euler bound and the K4 / K3,3-minus-edge obstructions."""
    planar = is_planar(g) is not None
    k4 = has_minor(g, complete_graph(4), budget)
    notes: list[str] = []

    # K3,3 minus an edge has K4 as a minor, so K4-freeness settles it.
    if k4.found:
        k33bar = has_minor(g, k33_minus_edge(), budget)
    else:
        k33bar = MinorResult(False)
        notes.append("K3,3-minus-edge excluded by absence of K4")

    k23: MinorResult | None = None
    if planar and not k4.found:
        k23 = has_minor(g, complete_bipartite(2, 3), budget)
    outerplanar = planar and not k4.found and k23 is not None and not k23.found

    return GraphReport(
        planar=planar,
        outerplanar=outerplanar,
        euler_quick_pass=euler_quick_pass(g),
        theta_obstruction_free=not k4.found and not k33bar.found,
        nullity=cycle_space(g).nullity,
        k4_minor=k4,
        k33_minus_edge_minor=k33bar,
        k23_minor=k23,
        notes=tuple(notes),
    )
