#!/usr/bin/env python3
"""Quick sanity-check for the six-qubit necklace circuit.

Loads ``data/circuits/necklace.circ``, prints its graph, bond vector and
the amplitude by every available route.  Intended for local debugging only.

Usage::

    python -m src.debug_necklace
"""

from __future__ import annotations

from pathlib import Path

from .circuit import expansion_amplitude, h_matrix, simulate_amplitude
from .formats import load_circuit
from .mapping import ces_decide, circuit_to_graph

_SAMPLE_PATH = Path(__file__).resolve().parent.parent / "data" / "circuits" / "necklace.circ"


def main() -> None:
    print(f"Loading circuit from {_SAMPLE_PATH} …")
    c = load_circuit(_SAMPLE_PATH)
    print(f"Qubits: {c.qubit_count}  Gates: {c.gate_count}  lambda: {float(c.lam)}")

    h = h_matrix(c)
    print("\nH matrix:")
    for row in h.bits.to_strings():
        print(f"  {row}")

    g = circuit_to_graph(h)
    print("\nEdges (1-based qubits):")
    for k, (u, v) in enumerate(g.edges):
        print(f"  gate {k + 1}: ({u + 1}, {v + 1}){'' if abs(u - v) == 1 else '  non-nearest-neighbour'}")

    verdict = ces_decide(c)
    print(f"\nVerdict: {verdict.status.value}")
    if verdict.w_solution is not None:
        print(f"w = {verdict.w_solution.w.to_string()}")
    print("-" * 60)
    print(f"statevector amplitude : {simulate_amplitude(c):.12f}")
    print(f"kernel expansion      : {expansion_amplitude(h, c.lam):.12f}")
    if verdict.amplitude is not None:
        print(f"Ising ({verdict.evaluator:>6})       : {verdict.amplitude:.12f}")
    if verdict.partition_value is not None:
        print(f"partition function Z  : {verdict.partition_value:.12f}")


if __name__ == "__main__":
    main()
