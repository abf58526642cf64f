"""Circuit <-> Ising-graph correspondence and the CES decision.

A real circuit whose gates each carry exactly one ``Y`` and one ``X`` (plus
any number of ``Z``) is a graph: qubits are vertices, gate ``k`` is the
edge between its ``Y`` and ``X`` qubits, and the second-bit rows of ``H``
are the incidence matrix ``A``.  With ``lam = tan(theta/2)``,

    <0|U|0> = (1 + lam**2)**(-N/2) * sum_{a in ker A} (-1)**(a^t Q a) lam**|a|,

which is the signed even-subgraph sum of an Ising instance as soon as a
bond vector ``w`` satisfies ``a . w = a^t Q a`` on the whole cycle space.
With ``K`` a cycle basis this holds iff ``K^t Q K`` is symmetric and
``K^t w = diag(K^t Q K)``.

Everything here depends on the gate order: ``Q`` is built from ordered
column pairs, so two orderings of the same edge set can be decided
differently.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Literal, NamedTuple

import numpy as np

from .circuit import Angle, Circuit, HMatrix, h_matrix, q_matrix, validate_real_circuit
from .config import Limits
from .errors import CapExceededError, ColumnError, MinorSearchBudgetError
from .gf2 import (
    BitMatrix,
    BitVector,
    iter_span,
    linearize_quadratic_form,
    nullspace_basis,
    signed_weight_distribution,
    solve_linear,
)
from .graph import (
    Graph,
    MinorStep,
    RotationSystem,
    complete_graph,
    cycle_space,
    euler_quick_pass,
    has_minor,
    incidence_matrix,
    is_planar,
)
from .ising import IsingInstance, partition_from_sum, signed_even_subgraph_sum
from .planar import planar_even_subgraph_sum

logger = logging.getLogger(__name__)

DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class WSolution:
    """A bond vector ``w`` together with the concrete circuit ``h`` it certifies."""

    w: BitVector
    h: HMatrix
    solution_space_dim: int

    def to_dict(self) -> dict:
        return {
            "w": self.w.to_string(),
            "h": self.h.bits.to_strings(),
            "solution_space_dim": self.solution_space_dim,
        }


# ---------------------------------------------------------------------------
# Circuit <-> graph
# ---------------------------------------------------------------------------


def circuit_to_graph(h: HMatrix) -> Graph:
    """Graph whose incidence matrix is the second-bit part of *h*.

    Raises
    ------
    ColumnError
        ``HYPERGRAPH_COLUMN`` if a column has other than two second-bit
        ones, ``EVEN_Y_COLUMN`` if it has an even number of ``Y`` codes.
    """
    second = h.second_bits().bits
    y_counts = h.y_counts()
    edges: list[tuple[int, int]] = []
    for k in range(h.gate_count):
        ends = np.flatnonzero(second[:, k])
        if len(ends) != 2:
            raise ColumnError(ColumnError.HYPERGRAPH_COLUMN, k, f"{len(ends)} X/Y positions")
        if y_counts[k] % 2 == 0:
            raise ColumnError(ColumnError.EVEN_Y_COLUMN, k, f"{y_counts[k]} Y codes")
        edges.append((int(ends[0]), int(ends[1])))
    return Graph(h.qubit_count, tuple(edges))


def h_from_first_bits(g: Graph, first: np.ndarray) -> HMatrix:
    """Interleave first bits (``|V| x |E|``) with the incidence matrix."""
    A = incidence_matrix(g).bits
    bits = np.zeros((2 * g.vertex_count, g.edge_count), dtype=np.uint8)
    bits[0::2] = first
    bits[1::2] = A
    return HMatrix(BitMatrix(bits))


def satisfies_bond_condition(h: HMatrix, w: BitVector, max_nullity: int = 20) -> bool:
    """Check ``a . w = a^t Q a`` for every ``a`` in ``ker CH`` by enumeration."""
    K = nullspace_basis(h.second_bits())
    if K.cols > max_nullity:
        raise CapExceededError("mapping", "verify_nullity", max_nullity, K.cols)
    Q = q_matrix(h).bits.astype(np.int64)
    wv = w.bits.astype(np.int64)
    for chunk in iter_span(K):
        a = chunk.astype(np.int64)
        if not np.array_equal(((a @ Q) * a).sum(axis=1) % 2, (a @ wv) % 2):
            return False
    return True


def _certify(solution: WSolution, verify_nullity: int) -> WSolution:
    nullity = solution.h.gate_count - solution.solution_space_dim
    if nullity <= verify_nullity and not satisfies_bond_condition(solution.h, solution.w, verify_nullity):
        raise RuntimeError("bond solution failed the exhaustive kernel check")
    return solution


# ---------------------------------------------------------------------------
# Bond solvers
# ---------------------------------------------------------------------------


def solve_w_fixed(h: HMatrix, verify_nullity: int = 20) -> WSolution | None:
    """Solve ``K^t w = diag(K^t Q K)`` for a fixed circuit.

    Returns ``None`` when ``K^t Q K`` is not symmetric or the system is
    inconsistent.  Free bond variables are set to 0.
    """
    circuit_to_graph(h)
    K = nullspace_basis(h.second_bits())
    form = K.T @ q_matrix(h) @ K
    d = linearize_quadratic_form(form)
    if d is None:
        logger.debug("K^tQK is not symmetric; no bond vector")
        return None
    solution = solve_linear(K.T, d)
    if solution is None:
        return None
    return _certify(WSolution(solution.x, h, solution.solution_space_dim), verify_nullity)


def solve_w_joint(g: Graph, verify_nullity: int = 20) -> WSolution | None:
    """Decide whether some circuit over *g* (in its edge order) admits a bond vector.

    Unknowns are the first bits ``f[i, j]`` of every (qubit, gate) slot plus
    ``w``.  At the two endpoints of gate ``j`` the first bits choose which
    end is ``Y`` (``f[u, j] + f[v, j] = 1``); elsewhere they place optional
    ``Z`` codes.  ``Q[j, k] = sum_{i in ends(k)} f[i, j]`` is linear in
    these bits, so symmetry of ``K^t Q K`` and ``K^t w = diag(K^t Q K)``
    form one linear system over GF(2).
    """
    V, E = g.vertex_count, g.edge_count
    A = incidence_matrix(g).bits.astype(np.int64)
    K = cycle_space(g).basis.bits.astype(np.int64)
    m = K.shape[1]
    n_first = V * E

    def first_bit_row(pair_weights: np.ndarray) -> np.ndarray:
        # coefficient of f[i, j] is sum_{k < j} pair_weights[j, k] * A[i, k]
        lower = np.tril(pair_weights % 2, k=-1)
        return ((lower @ A.T) % 2).reshape(-1)

    rows: list[np.ndarray] = []
    rhs: list[int] = []

    for j, (u, v) in enumerate(g.edges):
        row = np.zeros(n_first + E, dtype=np.int64)
        row[j * V + u] = 1
        row[j * V + v] = 1
        rows.append(row)
        rhs.append(1)

    for p in range(m):
        for q in range(p + 1, m):
            weights = np.outer(K[:, p], K[:, q]) + np.outer(K[:, q], K[:, p])
            row = np.zeros(n_first + E, dtype=np.int64)
            row[:n_first] = first_bit_row(weights)
            rows.append(row)
            rhs.append(0)

    for p in range(m):
        row = np.zeros(n_first + E, dtype=np.int64)
        row[:n_first] = first_bit_row(np.outer(K[:, p], K[:, p]))
        row[n_first:] = K[:, p]
        rows.append(row)
        rhs.append(0)

    system = BitMatrix(np.array(rows).reshape(len(rows), n_first + E))
    logger.debug("joint system: %d equations, %d unknowns", system.rows, system.cols)
    solution = solve_linear(system, BitVector(rhs))
    if solution is None:
        return None

    x = solution.x.bits
    first = x[:n_first].reshape(E, V).T
    w = BitVector(x[n_first:])
    return _certify(WSolution(w, h_from_first_bits(g, first), E - m), verify_nullity)


def appendix_c_enumerate(g: Graph, max_edges: int = 8, max_vertices: int = 6) -> WSolution | None:
    """Decide the same question as :func:`solve_w_joint` by enumeration.

    Every X/Y orientation of the gates and every right-hand side
    ``y = K^t w`` is tried in increasing integer order; for each, the
    conditions ``a^t Q a = a . w`` over *all* cycle-space vectors ``a`` are
    linear in the ``Z`` placements and are tested for consistency.

    Raises
    ------
    CapExceededError
        If *g* has more than *max_edges* edges or *max_vertices* vertices.
    """
    V, E = g.vertex_count, g.edge_count
    if E > max_edges:
        raise CapExceededError("mapping", "enum_max_edges", max_edges, E)
    if V > max_vertices:
        raise CapExceededError("mapping", "enum_max_vertices", max_vertices, V)

    A = incidence_matrix(g).bits.astype(np.int64)
    K = cycle_space(g).basis
    m = K.cols
    coeff_index = np.arange(1 << m, dtype=np.int64)
    X = (coeff_index[:, None] >> np.arange(m, dtype=np.int64)) & 1
    kernel = next(iter_span(K, chunk_bits=m)).astype(np.int64)

    # c[a, j, i]: coefficient of f[i, j] in a^t Q a
    prefix = np.cumsum(kernel[:, :, None] * A.T[None, :, :], axis=1) - kernel[:, :, None] * A.T[None, :, :]
    coeffs = (kernel[:, :, None] * (prefix % 2)) % 2

    endpoint = np.zeros((E, V), dtype=bool)
    for j, (u, v) in enumerate(g.edges):
        endpoint[j, u] = endpoint[j, v] = True
    z_slots = [(j, i) for j in range(E) for i in range(V) if not endpoint[j, i]]
    z_gates = np.array([j for j, _ in z_slots], dtype=np.int64)
    z_qubits = np.array([i for _, i in z_slots], dtype=np.int64)
    Mz = BitMatrix(coeffs[:, z_gates, z_qubits])
    left_null = nullspace_basis(Mz.T).bits.astype(np.int64)
    ys = X.T  # column y holds the bits of y

    for orientation in range(1 << E):
        y_end = [g.edges[j][(orientation >> j) & 1] for j in range(E)]
        constant = sum(coeffs[:, j, y_end[j]] for j in range(E)) % 2 if E else np.zeros(1 << m, dtype=np.int64)
        rhs_all = (constant[:, None] + X @ ys) % 2
        consistent = ~((left_null.T @ rhs_all) % 2).any(axis=0)
        if not consistent.any():
            continue
        y_index = int(np.flatnonzero(consistent)[0])
        z = solve_linear(Mz, BitVector(rhs_all[:, y_index]))
        first = np.zeros((V, E), dtype=np.uint8)
        for j in range(E):
            first[y_end[j], j] = 1
        for (j, i), bit in zip(z_slots, z.x):
            first[i, j] = bit
        w = solve_linear(K.T, BitVector(ys[:, y_index]))
        logger.debug("enumeration hit at orientation %d, y index %d", orientation, y_index)
        return _certify(WSolution(w.x, h_from_first_bits(g, first), w.solution_space_dim), 20)
    return None


def general_w_check(h: HMatrix, w: BitVector, max_nullity: int = 20) -> bool:
    """Weight-binned sign agreement between ``Q`` and ``w`` on ``ker CH``.

    True iff, for every Hamming weight, the kernel vectors of that weight
    carry the same multiset of signs under ``(-1)**(a^t Q a)`` and
    ``(-1)**(a . w)``, i.e. the two amplitude polynomials coincide.
    """
    K = nullspace_basis(h.second_bits())
    if K.cols > max_nullity:
        raise CapExceededError("mapping", "verify_nullity", max_nullity, K.cols)
    by_q = signed_weight_distribution(K, q_matrix(h))
    by_w = signed_weight_distribution(K, BitMatrix(np.diag(w.bits)))
    return bool(np.array_equal(by_q, by_w))


class GeneralConditionHit(NamedTuple):
    h: HMatrix
    w: BitVector


def search_general_condition(g: Graph, max_edges: int = 6) -> list[GeneralConditionHit]:
    """Circuits over *g* (no ``Z`` codes) where only the weight-binned condition holds.

    Every X/Y orientation is tried; for orientations whose circuit has no
    bond vector under :func:`solve_w_fixed`, every ``w`` is tested with
    :func:`general_w_check`.
    """
    E = g.edge_count
    if E > max_edges:
        raise CapExceededError("mapping", "general_search_max_edges", max_edges, E)
    hits: list[GeneralConditionHit] = []
    for orientation in range(1 << E):
        first = np.zeros((g.vertex_count, E), dtype=np.uint8)
        for j, ends in enumerate(g.edges):
            first[ends[(orientation >> j) & 1], j] = 1
        h = h_from_first_bits(g, first)
        if solve_w_fixed(h) is not None:
            continue
        for bits in range(1 << E):
            w = BitVector([(bits >> e) & 1 for e in range(E)])
            if general_w_check(h, w):
                hits.append(GeneralConditionHit(h, w))
    logger.debug("general-condition search on %d edges: %d hits", E, len(hits))
    return hits


# ---------------------------------------------------------------------------
# Amplitudes and angles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmplitudeResult:
    amplitude: float
    even_sum: float
    evaluator: Literal["planar", "kernel"]


def amplitude_via_partition(
    g: Graph,
    w: BitVector,
    lam: float,
    rot: RotationSystem | None = None,
    max_nullity: int = 24,
) -> AmplitudeResult:
    """``(1 + lam**2)**(-|E|/2) * S(g, w, lam)``.

    ``S`` comes from the planar Pfaffian route when *g* is planar and from
    cycle-space enumeration otherwise.

    Raises
    ------
    CapExceededError
        If *g* is not planar and its nullity exceeds *max_nullity*.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if rot is None:
        rot = is_planar(g)
    if rot is not None:
        s, evaluator = planar_even_subgraph_sum(g, w, lam, rot), "planar"
    else:
        nullity = cycle_space(g).nullity
        if nullity > max_nullity:
            raise CapExceededError("mapping", "max_nullity", max_nullity, nullity)
        s, evaluator = float(signed_even_subgraph_sum(IsingInstance(g, w), lam, max_nullity)), "kernel"
    lam = float(lam)
    return AmplitudeResult((1.0 + lam * lam) ** (-g.edge_count / 2.0) * s, s, evaluator)


@dataclass(frozen=True)
class AngleReport:
    theta: float
    lam: float
    compatible: bool
    physical: bool
    beta_j: float | None

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "lambda": self.lam,
            "compatible": self.compatible,
            "physical": self.physical,
            "beta_J": self.beta_j,
        }


def _is_physical(lam: float) -> bool:
    return 0.0 < lam < 1.0 and not math.isclose(lam, 1.0, rel_tol=1e-12)


def lambda_theta(value: float, direction: Literal["theta_to_lambda", "lambda_to_theta"]) -> AngleReport:
    """Convert between ``theta`` and ``lam = tan(theta/2)``.

    ``compatible`` means ``tan(theta/2) > 0``; ``physical`` means
    ``lam < 1``, so that ``beta J = atanh(lam)`` is real.

    Raises
    ------
    ValueError
        For ``lambda_to_theta`` with ``lam <= 0``, or an unknown direction.
    """
    if direction == "theta_to_lambda":
        theta = float(value)
        compatible = Angle.from_theta(theta).in_range()
        lam = math.tan(theta / 2.0)
    elif direction == "lambda_to_theta":
        lam = float(value)
        if lam <= 0:
            raise ValueError(f"lambda must be positive, got {lam}")
        theta = 2.0 * math.atan(lam)
        compatible = True
    else:
        raise ValueError(f"unknown direction {direction!r}")
    physical = compatible and _is_physical(lam)
    return AngleReport(theta, lam, compatible, physical, math.atanh(lam) if physical else None)


# ---------------------------------------------------------------------------
# CES decision
# ---------------------------------------------------------------------------


class Verdict(str, Enum):
    CES = "CES"
    REJECTED = "REJECTED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class CesVerdict:
    status: Verdict
    reason: str | None = None
    w_solution: WSolution | None = None
    lam: float | None = None
    amplitude: float | None = None
    partition_value: float | None = None
    evaluator: str | None = None
    obstruction: str | None = None
    minor_witness: tuple[MinorStep, ...] | None = None
    graph: Graph | None = None
    euler_quick_pass: bool | None = None
    diagnostics: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "verdict": self.status.value,
            "reason": self.reason,
            "w_solution": None if self.w_solution is None else self.w_solution.to_dict(),
            "lambda": self.lam,
            "amplitude": self.amplitude,
            "partition_value": self.partition_value,
            "evaluator": self.evaluator,
            "obstruction": self.obstruction,
            "minor_witness": None
            if self.minor_witness is None
            else [step.to_dict() for step in self.minor_witness],
            "graph": None
            if self.graph is None
            else {"vertices": self.graph.vertex_count, "edges": [list(e) for e in self.graph.edges]},
            "euler_quick_pass": self.euler_quick_pass,
            "diagnostics": list(self.diagnostics),
        }


def _general_condition_note(h: HMatrix, limits: Limits) -> str | None:
    E = h.gate_count
    if E > limits.general_search_max_edges:
        return None
    for bits in range(1 << E):
        w = BitVector([(bits >> e) & 1 for e in range(E)])
        if general_w_check(h, w, limits.verify_nullity):
            return f"weight-binned condition holds for w={w.to_string()}"
    return "weight-binned condition fails for every w"


def ces_decide(c: Circuit, limits: Limits = DEFAULT_LIMITS) -> CesVerdict:
    """Run the full decision pipeline on *c*.

    REJECTED is returned only with a replayable K4 minor witness (a graph
    with a K3,3-minus-edge minor also has a K4 minor).  A missing bond
    vector gives UNKNOWN, never REJECTED.
    """
    h = h_matrix(c)
    diagnostics = validate_real_circuit(c)
    notes = diagnostics.messages

    try:
        g = circuit_to_graph(h)
    except ColumnError as exc:
        return CesVerdict(Verdict.UNKNOWN, reason=exc.code, diagnostics=notes + (str(exc),))

    euler = euler_quick_pass(g)
    if not euler:
        notes += ("Euler bound fails: graph is nonplanar",)

    try:
        k4 = has_minor(g, complete_graph(4), limits.minor_budget)
    except MinorSearchBudgetError as exc:
        return CesVerdict(Verdict.UNKNOWN, reason=str(exc), graph=g, euler_quick_pass=euler, diagnostics=notes)
    if k4.found:
        return CesVerdict(
            Verdict.REJECTED,
            reason="graph has a K4 minor",
            obstruction="K4",
            minor_witness=k4.witness,
            graph=g,
            euler_quick_pass=euler,
            diagnostics=notes,
        )

    if not diagnostics.angle_in_range:
        return CesVerdict(
            Verdict.UNKNOWN, reason="angle is not lambda-compatible", graph=g, euler_quick_pass=euler, diagnostics=notes
        )

    solution = solve_w_fixed(h, limits.verify_nullity)
    if solution is None:
        extra = _general_condition_note(h, limits)
        if extra:
            notes += (extra,)
        return CesVerdict(
            Verdict.UNKNOWN,
            reason="no bond vector solves K^t w = diag(K^t Q K)",
            graph=g,
            euler_quick_pass=euler,
            diagnostics=notes,
        )

    rot = is_planar(g)
    if rot is None:
        raise RuntimeError("K4-minor-free graph failed the planarity test")

    lam = float(c.lam)
    result = amplitude_via_partition(g, solution.w, lam, rot, limits.max_nullity)
    partition_value = None
    if _is_physical(lam):
        partition_value = partition_from_sum(IsingInstance(g, solution.w), result.even_sum, lam)

    return CesVerdict(
        Verdict.CES,
        w_solution=solution,
        lam=lam,
        amplitude=c.normalization_sign * result.amplitude,
        partition_value=partition_value,
        evaluator=result.evaluator,
        graph=g,
        euler_quick_pass=euler,
        diagnostics=notes,
    )
