"""Polynomial-time signed even-subgraph sums on planar graphs.

The sum ``S = sum over even subgraphs a of prod_{e in a} t_e`` with
``t_e = (-1)**w_e * lam`` is turned into a Pfaffian:

1. Degree reduction: a vertex of degree ``d > 3`` is split along its
   rotation into a chain of ``d - 2`` degree-3 vertices joined by unit
   connectors.  The parity of each half of the chain fixes the connector,
   so the even-subgraph sum is unchanged.
2. Fisher decoration: every edge end becomes a terminal node.  A degree-3
   vertex becomes a triangle of terminals, a degree-2 vertex one edge
   between its two terminals, a degree-1 vertex a lone terminal.  Each
   original edge becomes an external edge between its two terminals with
   weight ``1 / t_e``.  An external edge is matched exactly when the
   original edge is absent from the even subgraph, so
   ``S = prod(t_e) * (weighted perfect matchings)``.
3. Kasteleyn orientation: a BFS spanning forest is oriented arbitrarily;
   the remaining edges form a spanning tree of each component's dual and
   are fixed leaf-first so every face except one root face per component
   has an odd number of boundary darts agreeing with the orientation.
4. The matching sum equals ``eps * Pf(A)`` with ``A`` the oriented
   weighted skew adjacency matrix and ``eps`` the sign of the reference
   matching made of all external edges.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import EmbeddingError
from .gf2 import BitVector
from .graph import Graph, RotationSystem, is_planar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SkewMatrix:
    """Real antisymmetric matrix (``M == -M.T`` exactly)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"skew matrix must be square, got shape {arr.shape}")
        if not np.array_equal(arr, -arr.T):
            raise ValueError("matrix is not antisymmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_upper(cls, n: int, upper: dict[tuple[int, int], float]) -> SkewMatrix:
        """Build from entries ``(i, j) -> value`` with ``i < j``."""
        arr = np.zeros((n, n), dtype=float)
        for (i, j), value in upper.items():
            if not i < j:
                raise ValueError(f"upper entry ({i}, {j}) needs i < j")
            arr[i, j] = value
            arr[j, i] = -value
        return cls(arr)

    @property
    def size(self) -> int:
        return int(self.values.shape[0])


def pfaffian(M: SkewMatrix) -> float:
    """Pfaffian by skew-symmetric Gaussian elimination with pivoting.

    Each step brings the largest entry of row ``k`` to position
    ``(k, k+1)`` by a simultaneous row/column swap (flipping the sign) and
    eliminates rows and columns ``k+2..`` with a rank-2 skew update.

    Raises
    ------
    ValueError
        If the dimension is odd.
    """
    A = np.array(M.values, dtype=float, copy=True)
    n = A.shape[0]
    if n % 2:
        raise ValueError(f"Pfaffian needs an even dimension, got {n}")

    pf = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k, k + 1:])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        pivot = A[k, k + 1]
        if pivot == 0.0:
            return 0.0
        pf *= pivot
        if k + 2 < n:
            tau = A[k, k + 2:] / pivot
            col = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)


# ---------------------------------------------------------------------------
# Decoration
# ---------------------------------------------------------------------------


@dataclass
class _Decorated:
    node_count: int
    edges: list[tuple[int, int]]
    weights: list[float]
    rotation: list[list[int]]
    external: list[int]
    prefactor: float


def _reduce_degree(g: Graph, t: list[float], rot: RotationSystem):
    """Split vertices of degree > 3 into chains; returns (edges, weights, rotation)."""
    edges = [list(e) for e in g.edges]
    weights = list(t)
    rotation = [list(r) for r in rot.order]
    node_count = g.vertex_count

    for v in range(g.vertex_count):
        r = rotation[v]
        d = len(r)
        if d <= 3:
            continue
        nodes = [v]
        for _ in range(d - 3):
            nodes.append(node_count)
            rotation.append([])
            node_count += 1
        connectors = []
        for i in range(d - 3):
            connectors.append(len(edges))
            edges.append([nodes[i], nodes[i + 1]])
            weights.append(1.0)

        def move_end(e: int, to: int) -> None:
            if edges[e][0] == v:
                edges[e][0] = to
            else:
                edges[e][1] = to

        rotation[v] = [r[0], r[1], connectors[0]]
        for i in range(1, d - 3):
            move_end(r[i + 1], nodes[i])
            rotation[nodes[i]] = [r[i + 1], connectors[i], connectors[i - 1]]
        move_end(r[d - 2], nodes[d - 3])
        move_end(r[d - 1], nodes[d - 3])
        rotation[nodes[d - 3]] = [r[d - 2], r[d - 1], connectors[d - 4]]

    return [tuple(e) for e in edges], weights, rotation


def _decorate(g: Graph, t: list[float], rot: RotationSystem) -> _Decorated:
    edges, weights, rotation = _reduce_degree(g, t, rot)

    terminal: dict[tuple[int, int], int] = {}
    for v, r in enumerate(rotation):
        for e in r:
            terminal[(v, e)] = len(terminal)

    d_edges: list[tuple[int, int]] = []
    d_weights: list[float] = []

    def add(a: int, b: int, weight: float) -> int:
        d_edges.append((a, b))
        d_weights.append(weight)
        return len(d_edges) - 1

    external = [add(terminal[(u, e)], terminal[(v, e)], 1.0 / weights[e]) for e, (u, v) in enumerate(edges)]

    d_rotation: list[list[int]] = [[] for _ in range(len(terminal))]
    for v, r in enumerate(rotation):
        ids = [terminal[(v, e)] for e in r]
        if len(r) == 1:
            d_rotation[ids[0]] = [external[r[0]]]
        elif len(r) == 2:
            gadget = add(ids[0], ids[1], 1.0)
            d_rotation[ids[0]] = [external[r[0]], gadget]
            d_rotation[ids[1]] = [external[r[1]], gadget]
        elif len(r) == 3:
            # triangle side i joins terminals i and i+1
            sides = [add(ids[i], ids[(i + 1) % 3], 1.0) for i in range(3)]
            for i in range(3):
                d_rotation[ids[i]] = [external[r[i]], sides[i], sides[(i + 2) % 3]]

    return _Decorated(
        node_count=len(terminal),
        edges=d_edges,
        weights=d_weights,
        rotation=d_rotation,
        external=external,
        prefactor=float(np.prod(weights)) if weights else 1.0,
    )


# ---------------------------------------------------------------------------
# Kasteleyn orientation
# ---------------------------------------------------------------------------


def _agreements(face: list[tuple[int, int]], orientation: list[int], skip: int = -1) -> int:
    return sum(
        1 for e, d in face if e != skip and (orientation[e] == 1) == (d == 0)
    )


def kasteleyn_orientation(graph: Graph, rotation: RotationSystem) -> list[int]:
    """Orientation ``+1`` (``edges[i][0] -> edges[i][1]``) or ``-1`` per edge.

    Every face except one root face per connected component ends up with an
    odd number of boundary darts agreeing with the orientation.
    """
    n = graph.vertex_count
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(graph.edges):
        adjacency[a].append((b, i))
        adjacency[b].append((a, i))

    orientation = [0] * graph.edge_count
    in_tree = [False] * graph.edge_count
    visited = [False] * n
    for source in range(n):
        if visited[source]:
            continue
        visited[source] = True
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y, i in adjacency[x]:
                if not visited[y]:
                    visited[y] = True
                    in_tree[i] = True
                    orientation[i] = 1 if graph.edges[i][0] == x else -1
                    queue.append(y)

    faces = rotation.faces(graph)
    face_of: dict[tuple[int, int], int] = {}
    for f, face in enumerate(faces):
        for dart in face:
            face_of[dart] = f

    dual: list[list[tuple[int, int]]] = [[] for _ in faces]
    for i in range(graph.edge_count):
        if not in_tree[i]:
            a, b = face_of[(i, 0)], face_of[(i, 1)]
            dual[a].append((b, i))
            dual[b].append((a, i))

    parent_edge = [-1] * len(faces)
    seen = [False] * len(faces)
    order: list[int] = []
    roots: list[int] = []
    for start in range(len(faces)):
        if seen[start]:
            continue
        seen[start] = True
        roots.append(start)
        queue = deque([start])
        while queue:
            f = queue.popleft()
            order.append(f)
            for h, i in dual[f]:
                if not seen[h]:
                    seen[h] = True
                    parent_edge[h] = i
                    queue.append(h)

    for f in reversed(order):
        pe = parent_edge[f]
        if pe < 0:
            continue
        direction = next(d for e, d in faces[f] if e == pe)
        if any(orientation[e] == 0 for e, _ in faces[f] if e != pe):
            raise RuntimeError("dual tree processed out of order")
        need_agree = _agreements(faces[f], orientation, skip=pe) % 2 == 0
        forward = 1 if direction == 0 else -1
        orientation[pe] = forward if need_agree else -forward

    root_set = set(roots)
    for f, face in enumerate(faces):
        if f not in root_set and _agreements(face, orientation) % 2 == 0:
            raise RuntimeError(f"face {f} is not clockwise-odd")
    return orientation


def _permutation_sign(perm: list[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def planar_even_subgraph_sum(
    g: Graph,
    w: BitVector,
    lam: float,
    rot: RotationSystem | None = None,
) -> float:
    """Signed even-subgraph sum of a planar graph via a Pfaffian.

    Parameters
    ----------
    g : Graph
        Planar multigraph.
    w : BitVector
        Bond signs, one per edge (1 flips the sign of the edge weight).
    lam : float
        Edge weight magnitude; any real value is accepted.
    rot : RotationSystem | None
        Planar embedding of *g*; computed with :func:`is_planar` if omitted.

    Raises
    ------
    EmbeddingError
        If *rot* is not a planar embedding, or *g* is not planar.
    """
    if len(w) != g.edge_count:
        raise ValueError(f"bond vector has length {len(w)}, graph has {g.edge_count} edges")
    if rot is None:
        rot = is_planar(g)
        if rot is None:
            raise EmbeddingError("graph is not planar")
    else:
        rot.validate(g)

    lam = float(lam)
    if lam == 0.0 or g.edge_count == 0:
        return 1.0

    t = [-lam if bit else lam for bit in w]
    decorated = _decorate(g, t, rot)
    d_graph = Graph(decorated.node_count, tuple(decorated.edges))
    orientation = kasteleyn_orientation(d_graph, RotationSystem(tuple(tuple(r) for r in decorated.rotation)))

    upper: dict[tuple[int, int], float] = {}
    for i, (a, b) in enumerate(decorated.edges):
        value = decorated.weights[i] * orientation[i]
        if a < b:
            upper[(a, b)] = value
        else:
            upper[(b, a)] = -value
    matrix = SkewMatrix.from_upper(decorated.node_count, upper)

    # the reference matching is the set of all external edges
    reference: list[int] = []
    sign = 1
    for i in decorated.external:
        a, b = decorated.edges[i]
        reference.extend((a, b))
        sign *= orientation[i]
    epsilon = sign * _permutation_sign(reference)

    logger.debug("Pfaffian of order %d for %d edges", decorated.node_count, g.edge_count)
    return epsilon * pfaffian(matrix) * decorated.prefactor
