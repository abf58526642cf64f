"""Ising partition functions on multigraphs without external field.

``H(sigma) = -sum_e J_e sigma_u sigma_v`` with ``J_e = J * (1 - 2 w_e)``.
Three evaluators are provided:

* :func:`brute_force_partition` sums ``exp(-beta H)`` over all spin
  configurations;
* :func:`signed_even_subgraph_sum` enumerates the cycle space,
  ``S = sum_{a in ker A} (-1)**(a.w) lam**|a|``, and
  :func:`partition_from_sum` turns ``S`` into ``Z`` through
  ``Z = 2**|V| (1 - lam**2)**(-|E|/2) S`` with ``lam = tanh(beta J)``;
* :func:`src.planar.planar_even_subgraph_sum` computes ``S`` in
  polynomial time on planar graphs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .errors import CapExceededError
from .gf2 import BitMatrix, BitVector, nullspace_basis, signed_weight_distribution
from .graph import Graph, cycle_space, incidence_matrix, is_planar
from .planar import planar_even_subgraph_sum

logger = logging.getLogger(__name__)

Number = float | Fraction


@dataclass(frozen=True)
class IsingInstance:
    graph: Graph
    w: BitVector
    coupling: float = 1.0

    def __post_init__(self) -> None:
        if len(self.w) != self.graph.edge_count:
            raise ValueError(
                f"bond vector has length {len(self.w)}, graph has {self.graph.edge_count} edges"
            )
        if not self.coupling > 0:
            raise ValueError(f"coupling J must be positive, got {self.coupling}")

    @classmethod
    def ferromagnetic(cls, graph: Graph, coupling: float = 1.0) -> IsingInstance:
        return cls(graph, BitVector.zeros(graph.edge_count), coupling)

    def bond_values(self) -> np.ndarray:
        """Signed couplings ``J_e``."""
        return self.coupling * (1.0 - 2.0 * self.w.bits.astype(float))


def brute_force_partition(inst: IsingInstance, beta: float, max_spins: int = 24) -> float:
    """Exact spin sum over all ``2**|V|`` configurations.

    Raises
    ------
    CapExceededError
        If the graph has more than *max_spins* vertices.
    """
    n = inst.graph.vertex_count
    if n > max_spins:
        raise CapExceededError("ising", "max_spins", max_spins, n)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")

    us = np.array([u for u, _ in inst.graph.edges], dtype=np.int64)
    vs = np.array([v for _, v in inst.graph.edges], dtype=np.int64)
    bonds = inst.bond_values()
    shifts = np.arange(n, dtype=np.int64)

    total = 0.0
    step = 1 << min(n, 16)
    for start in range(0, 1 << n, step):
        idx = np.arange(start, min(start + step, 1 << n), dtype=np.int64)
        spins = 1 - 2 * ((idx[:, None] >> shifts) & 1)
        if len(bonds):
            coupling_sum = (spins[:, us] * spins[:, vs]) @ bonds
        else:
            coupling_sum = np.zeros(len(idx))
        total += float(np.exp(beta * coupling_sum).sum())
    return total


def qwgt(A: BitMatrix, B: BitMatrix, x: Number, y: Number, max_nullity: int = 24) -> Number:
    """Quadratically signed weight enumerator.

    ``S(A, B, x, y) = sum_{b in ker A} (-1)**(b^t B b) x**|b| y**(n - |b|)``
    with ``n = A.cols``.  Exact for :class:`~fractions.Fraction` arguments.

    Raises
    ------
    CapExceededError
        If ``dim ker A`` exceeds *max_nullity*.
    """
    n = A.cols
    if B.shape != (n, n):
        raise ValueError(f"B must be {n}x{n}, got {B.shape}")
    K = nullspace_basis(A)
    if K.cols > max_nullity:
        raise CapExceededError("ising", "max_nullity", max_nullity, K.cols)
    coeffs = signed_weight_distribution(K, B)
    exact = isinstance(x, Fraction) or isinstance(y, Fraction)
    total: Number = Fraction(0) if exact else 0.0
    for weight, coeff in enumerate(coeffs):
        if coeff:
            total += int(coeff) * x**weight * y ** (n - weight)
    return total


def signed_even_subgraph_sum(inst: IsingInstance, lam: Number, max_nullity: int = 24) -> Number:
    """``S = qwgt(A, diag(w), lam, 1)`` by cycle-space enumeration."""
    A = incidence_matrix(inst.graph)
    B = BitMatrix(np.diag(inst.w.bits))
    return qwgt(A, B, lam, 1 if isinstance(lam, Fraction) else 1.0, max_nullity)


def partition_from_sum(inst: IsingInstance, S: float, lam: float) -> float:
    """``Z = 2**|V| (1 - lam**2)**(-|E|/2) S``.

    Raises
    ------
    ValueError
        Unless ``0 < lam < 1``.
    """
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise ValueError(f"partition function needs 0 < lambda < 1, got {lam}")
    g = inst.graph
    return 2.0**g.vertex_count * (1.0 - lam * lam) ** (-g.edge_count / 2.0) * float(S)


Evaluator = Literal["planar", "kernel", "brute"]


@dataclass(frozen=True)
class PartitionResult:
    value: float
    lam: float
    evaluator: Evaluator
    even_sum: float | None = None

    def to_dict(self) -> dict:
        return {
            "Z": self.value,
            "lambda": self.lam,
            "evaluator": self.evaluator,
            "S": self.even_sum,
        }


def pick_even_sum_evaluator(g: Graph, max_nullity: int = 24) -> Evaluator | None:
    """``"planar"`` if *g* is planar, else ``"kernel"`` if its nullity fits, else ``None``."""
    if is_planar(g) is not None:
        return "planar"
    if cycle_space(g).nullity <= max_nullity:
        return "kernel"
    return None


def even_sum(inst: IsingInstance, lam: float, evaluator: Evaluator, max_nullity: int = 24) -> float:
    if evaluator == "planar":
        return planar_even_subgraph_sum(inst.graph, inst.w, lam)
    if evaluator == "kernel":
        return float(signed_even_subgraph_sum(inst, lam, max_nullity))
    raise ValueError(f"no even-subgraph evaluator named {evaluator!r}")


def partition_function(
    inst: IsingInstance,
    beta: float,
    method: Evaluator | Literal["auto"] = "auto",
    max_nullity: int = 24,
    max_spins: int = 24,
) -> PartitionResult:
    """``Z(beta)`` by the best applicable evaluator.

    ``auto`` prefers the planar Pfaffian route, then the cycle-space sum,
    then the spin sum.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    lam = math.tanh(beta * inst.coupling)

    if method == "auto":
        method = pick_even_sum_evaluator(inst.graph, max_nullity) or "brute"
    logger.debug("partition function via %s evaluator", method)

    if method == "brute":
        return PartitionResult(brute_force_partition(inst, beta, max_spins), lam, "brute")
    s = even_sum(inst, lam, method, max_nullity)
    return PartitionResult(partition_from_sum(inst, s, lam), lam, method, s)
