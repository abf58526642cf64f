"""Seeded randomized cross-checks between independent evaluators.

Instance ``i`` draws everything from ``numpy.random.default_rng([seed, i])``,
so each instance is reproducible on its own and the suite's output does not
depend on how instances are spread over worker processes.  Every instance
runs four checks:

``partition``
    Random connected planar Ising instance: spin sum, cycle-space sum and
    planar Pfaffian agree on ``Z``.
``amplitude``
    Random real circuit: statevector and kernel expansion agree, and so
    does :func:`~src.mapping.ces_decide` when it accepts the circuit.
``graph_circuit``
    Random circuit whose gates are the edges of a small graph, checked the
    same way; these circuits are the ones the decision can accept.
``deletion`` / ``contraction``
    Random graph accepted by :func:`~src.mapping.solve_w_joint`: every
    single-edge deletion is accepted too.  Contractions are reported but
    are informational, since they do not always stay accepted.
"""

from __future__ import annotations

import logging
import math
import multiprocessing as mp
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .circuit import Angle, Circuit, Gate, expansion_amplitude, h_matrix, simulate_amplitude
from .config import Limits
from .gf2 import BitVector
from .graph import Graph, minor_step
from .ising import IsingInstance, brute_force_partition, partition_from_sum, signed_even_subgraph_sum
from .mapping import Verdict, ces_decide, h_from_first_bits, solve_w_joint
from .planar import planar_even_subgraph_sum

logger = logging.getLogger(__name__)

LAMBDA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
PARTITION_RTOL = 1e-9
AMPLITUDE_ATOL = 1e-9


@dataclass(frozen=True)
class CheckOutcome:
    instance: int
    check: str
    passed: bool
    detail: str
    informational: bool = False

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "check": self.check,
            "passed": self.passed,
            "detail": self.detail,
            "informational": self.informational,
        }


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    count: int
    outcomes: tuple[CheckOutcome, ...]

    @property
    def failures(self) -> list[CheckOutcome]:
        return [o for o in self.outcomes if not o.passed and not o.informational]

    @property
    def ok(self) -> bool:
        return not self.failures

    def counts(self) -> dict[str, dict[str, int]]:
        table: dict[str, dict[str, int]] = {}
        for o in self.outcomes:
            row = table.setdefault(o.check, {"passed": 0, "failed": 0})
            row["passed" if o.passed else "failed"] += 1
        return table

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "ok": self.ok,
            "checks": self.counts(),
            "failures": [o.to_dict() for o in self.failures],
        }


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_planar_graph(rng: np.random.Generator, max_vertices: int = 10, max_parallel: int = 0) -> Graph:
    """Random connected planar graph: a random tree plus planar-safe chords.

    With ``max_parallel > 0`` up to that many copies of existing edges are
    appended, giving a multigraph; otherwise the graph is simple.
    """
    n = int(rng.integers(2, max_vertices + 1))
    simple = nx.Graph()
    simple.add_nodes_from(range(n))
    edges: list[tuple[int, int]] = []
    for v in range(1, n):
        u = int(rng.integers(0, v))
        simple.add_edge(u, v)
        edges.append((u, v))
    for _ in range(int(rng.integers(0, 2 * n))):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        if simple.has_edge(u, v):
            continue
        simple.add_edge(u, v)
        if nx.check_planarity(simple)[0]:
            edges.append((u, v))
        else:
            simple.remove_edge(u, v)
    if max_parallel:
        for _ in range(int(rng.integers(0, max_parallel + 1))):
            edges.append(edges[int(rng.integers(0, len(edges)))])
    return Graph(n, tuple(edges))


def random_graph(rng: np.random.Generator, max_vertices: int = 7, max_edges: int = 12) -> Graph:
    """Random connected simple graph with at most *max_edges* edges."""
    n = int(rng.integers(3, max_vertices + 1))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    present = set(edges)
    extra = [p for p in pairs if p not in present]
    room = max(0, min(max_edges - len(edges), len(extra)))
    if room:
        picks = rng.choice(len(extra), size=int(rng.integers(0, room + 1)), replace=False)
        edges.extend(extra[int(i)] for i in picks)
    order = rng.permutation(len(edges))
    return Graph(n, tuple(edges[int(i)] for i in order))


def random_real_circuit(rng: np.random.Generator, max_qubits: int = 6, max_gates: int = 8) -> Circuit:
    """Random circuit whose gates all carry an odd number of ``Y`` codes."""
    n = int(rng.integers(1, max_qubits + 1))
    gate_count = int(rng.integers(1, max_gates + 1))
    labels: list[str] = []
    while len(labels) < gate_count:
        label = "".join("IXYZ"[int(c)] for c in rng.integers(0, 4, size=n))
        if label.count("Y") % 2 == 1:
            labels.append(label)
    lam = float(rng.choice(LAMBDA_GRID))
    return Circuit(n, tuple(Gate.from_string(s) for s in labels), Angle.from_lambda(lam))


def random_graph_circuit(rng: np.random.Generator, max_vertices: int = 6, max_edges: int = 8) -> Circuit:
    """Random circuit over a random graph: one ``Y`` and one ``X`` per gate, random ``Z`` elsewhere."""
    g = random_graph(rng, max_vertices, max_edges)
    first = rng.integers(0, 2, size=(g.vertex_count, g.edge_count)).astype(np.uint8)
    for j, (u, v) in enumerate(g.edges):
        y_end = (u, v)[int(rng.integers(0, 2))]
        first[u, j] = first[v, j] = 0
        first[y_end, j] = 1
    h = h_from_first_bits(g, first)
    gates = tuple(Gate(col) for col in h.bits.columns())
    return Circuit(g.vertex_count, gates, Angle.from_lambda(float(rng.choice(LAMBDA_GRID))))


def accepted_graph(rng: np.random.Generator, max_vertices: int = 7, max_edges: int = 12) -> Graph:
    """Random graph pruned from the back until :func:`solve_w_joint` accepts it."""
    g = random_graph(rng, max_vertices, max_edges)
    while solve_w_joint(g) is None:
        g = g.without_edges([g.edge_count - 1])
    return g


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def _rel_close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=PARTITION_RTOL)


def check_partition(index: int, rng: np.random.Generator) -> list[CheckOutcome]:
    g = random_planar_graph(rng)
    w = BitVector(rng.integers(0, 2, size=g.edge_count))
    lam = float(rng.choice(LAMBDA_GRID))
    beta = math.atanh(lam)
    inst = IsingInstance(g, w)

    brute = brute_force_partition(inst, beta)
    kernel = partition_from_sum(inst, float(signed_even_subgraph_sum(inst, lam)), lam)
    planar = partition_from_sum(inst, planar_even_subgraph_sum(g, w, lam), lam)

    passed = _rel_close(brute, kernel) and _rel_close(brute, planar)
    detail = f"V={g.vertex_count} E={g.edge_count} lambda={lam} brute={brute:.12g} kernel={kernel:.12g} planar={planar:.12g}"
    return [CheckOutcome(index, "partition", passed, detail)]


def _amplitude_outcome(index: int, name: str, c: Circuit, limits: Limits) -> CheckOutcome:
    lam = float(c.lam)
    direct = simulate_amplitude(c, limits.max_qubits)
    expanded = expansion_amplitude(h_matrix(c), lam, limits.max_nullity)
    passed = abs(direct - expanded) <= AMPLITUDE_ATOL

    verdict = ces_decide(c, limits)
    status = verdict.status.value
    if verdict.status is Verdict.CES:
        passed = passed and abs(direct - verdict.amplitude) <= AMPLITUDE_ATOL
    detail = f"n={c.qubit_count} N={c.gate_count} lambda={lam} amplitude={direct:.12g} verdict={status}"
    return CheckOutcome(index, name, passed, detail)


def check_amplitudes(index: int, rng: np.random.Generator, limits: Limits) -> list[CheckOutcome]:
    return [
        _amplitude_outcome(index, "amplitude", random_real_circuit(rng), limits),
        _amplitude_outcome(index, "graph_circuit", random_graph_circuit(rng), limits),
    ]


def check_closure(index: int, rng: np.random.Generator) -> list[CheckOutcome]:
    g = accepted_graph(rng)
    lost_deletions = [e for e in range(g.edge_count) if solve_w_joint(minor_step(g, e, "delete")) is None]
    lost_contractions = [e for e in range(g.edge_count) if solve_w_joint(minor_step(g, e, "contract")) is None]
    base = f"V={g.vertex_count} E={g.edge_count}"
    return [
        CheckOutcome(index, "deletion", not lost_deletions, f"{base} rejected deletions={lost_deletions}"),
        CheckOutcome(
            index,
            "contraction",
            not lost_contractions,
            f"{base} rejected contractions={lost_contractions}",
            informational=True,
        ),
    ]


def run_instance(args: tuple[int, int, Limits]) -> list[CheckOutcome]:
    """All checks for instance ``index`` under *seed*; picklable for worker pools."""
    seed, index, limits = args
    rng = np.random.default_rng([seed, index])
    outcomes = check_partition(index, rng)
    outcomes += check_amplitudes(index, rng, limits)
    outcomes += check_closure(index, rng)
    logger.debug("instance %d: %d checks", index, len(outcomes))
    return outcomes


def run_verify(seed: int, count: int, limits: Limits | None = None, workers: int = 1) -> VerifyReport:
    """Run *count* instances; outcomes are ordered by instance index."""
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    limits = limits or Limits()
    jobs = [(seed, i, limits) for i in range(count)]
    if workers > 1 and count > 1:
        with mp.Pool(processes=workers) as pool:
            per_instance = pool.map(run_instance, jobs)
    else:
        per_instance = [run_instance(job) for job in jobs]
    outcomes = tuple(o for batch in per_instance for o in batch)
    return VerifyReport(seed, count, outcomes)
