"""Command-line entry point.

Usage::

    python -m src.cli check-ces data/circuits/necklace.circ --lambda 0.5
    python -m src.cli partition data/graphs/edge.graph --beta 1.0
    python -m src.cli minors data/graphs/k4.graph --format json
    python -m src.cli verify --seed 7 --count 20

Exit codes: 0 success or CES, 1 verify mismatch, 2 REJECTED (or no circuit
over the graph), 3 UNKNOWN, 4 input error, 5 cap exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import uuid
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .circuit import Angle, Circuit, circuit_from_h, expansion_amplitude, h_matrix, simulate_amplitude
from .config import DEFAULT_LIMITS_PATH, Limits, load_limits
from .errors import (
    CapExceededError,
    ColumnError,
    InputFormatError,
    MinorSearchBudgetError,
    NonRealAmplitudeError,
)
from .formats import format_circuit, format_graph, load_bit_matrix, load_circuit, load_graph
from .gf2 import BitVector
from .graph import classify, cycle_space
from .ising import even_sum, partition_from_sum, partition_function, pick_even_sum_evaluator, qwgt
from .mapping import (
    Verdict,
    appendix_c_enumerate,
    ces_decide,
    circuit_to_graph,
    general_w_check,
    lambda_theta,
    solve_w_fixed,
    solve_w_joint,
)
from .storage import init_db, insert_checks, insert_summary
from .verify import run_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_REJECTED = 2
EXIT_UNKNOWN = 3
EXIT_INPUT = 4
EXIT_CAP = 5

_VERDICT_EXIT = {Verdict.CES: EXIT_OK, Verdict.REJECTED: EXIT_REJECTED, Verdict.UNKNOWN: EXIT_UNKNOWN}


@dataclass
class Report:
    payload: dict
    status: int = EXIT_OK
    human: str | None = None


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return ", ".join(_fmt(v) for v in value) if value else "[]"
    return str(value)


def render_human(payload: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(render_human(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={_fmt(v)}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {_fmt(value)}")
    return lines


def _emit(report: Report, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report.payload, indent=2, sort_keys=True))
    elif report.human is not None:
        print(report.human, end="" if report.human.endswith("\n") else "\n")
    else:
        print("\n".join(render_human(report.payload)))


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _angle_override(args: argparse.Namespace) -> Angle | None:
    if getattr(args, "lam", None) is not None:
        return Angle.from_lambda(args.lam)
    if getattr(args, "theta", None) is not None:
        return Angle.from_theta(args.theta)
    return None


def _load_circuit(args: argparse.Namespace, limits: Limits) -> Circuit:
    return load_circuit(args.circuit, _angle_override(args), Angle.from_lambda(limits.default_lambda))


def _graph_dict(g) -> dict:
    return {"vertices": g.vertex_count, "edges": [list(e) for e in g.edges]}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_circuit2graph(args: argparse.Namespace, limits: Limits) -> Report:
    c = _load_circuit(args, limits)
    try:
        g = circuit_to_graph(h_matrix(c))
    except ColumnError as exc:
        payload = {"graph": None, "column_error": {"code": exc.code, "column": exc.column, "message": str(exc)}}
        return Report(payload, EXIT_UNKNOWN, human=f"not a graph circuit: {exc}\n")

    gates = [
        {"gate": k + 1, "qubits": [u + 1, v + 1], "nearest_neighbour": abs(u - v) == 1}
        for k, (u, v) in enumerate(g.edges)
    ]
    cs = cycle_space(g)
    payload = {
        "graph": _graph_dict(g),
        "gates": gates,
        "nullity": cs.nullity,
        "even_subgraph_count": cs.even_subgraph_count,
    }
    lines = [format_graph(g).rstrip("\n")]
    for gate in gates:
        kind = "nearest-neighbour" if gate["nearest_neighbour"] else "non-nearest-neighbour"
        lines.append(f"# gate {gate['gate']}: qubits ({gate['qubits'][0]}, {gate['qubits'][1]}) {kind}")
    lines.append(f"# nullity {cs.nullity}, {cs.even_subgraph_count} even subgraphs")
    return Report(payload, human="\n".join(lines) + "\n")


def cmd_graph2circuit(args: argparse.Namespace, limits: Limits) -> Report:
    inst = load_graph(args.graph)
    g = inst.graph
    if args.method == "enumerate":
        solution = appendix_c_enumerate(g, limits.enum_max_edges, limits.enum_max_vertices)
    else:
        solution = solve_w_joint(g, limits.verify_nullity)

    if solution is None:
        payload = {"graph": _graph_dict(g), "member": False, "circuit": None, "w": None}
        return Report(
            payload,
            EXIT_REJECTED,
            human="not in Theta: no circuit over this edge order admits a bond vector\n",
        )

    angle = _angle_override(args) or Angle.from_lambda(limits.default_lambda)
    c = circuit_from_h(solution.h, angle)
    payload = {
        "graph": _graph_dict(g),
        "member": True,
        "circuit": [gate.to_string() for gate in c.gates],
        "w": solution.w.to_string(),
        "solution_space_dim": solution.solution_space_dim,
    }
    human = format_circuit(c) + f"# w = {solution.w.to_string()}\n"
    return Report(payload, human=human)


def cmd_solve_w(args: argparse.Namespace, limits: Limits) -> Report:
    c = _load_circuit(args, limits)
    h = h_matrix(c)
    solution = solve_w_fixed(h, limits.verify_nullity)
    if solution is None:
        payload: dict = {"found": False, "w": None}
        if h.gate_count <= limits.general_search_max_edges:
            payload["weight_binned_w"] = _weight_binned_solutions(h, limits)
        return Report(payload, EXIT_UNKNOWN)

    nullity = h.gate_count - solution.solution_space_dim
    payload = {
        "found": True,
        "w": solution.w.to_string(),
        "solution_space_dim": solution.solution_space_dim,
        "certificate": {
            "h": solution.h.bits.to_strings(),
            "verified_by_enumeration": nullity <= limits.verify_nullity,
        },
    }
    return Report(payload)


def _weight_binned_solutions(h, limits: Limits) -> list[str]:
    E = h.gate_count
    found: list[str] = []
    for bits in range(1 << E):
        w = BitVector([(bits >> e) & 1 for e in range(E)])
        if general_w_check(h, w, limits.verify_nullity):
            found.append(w.to_string())
    return found


def cmd_check_ces(args: argparse.Namespace, limits: Limits) -> Report:
    c = _load_circuit(args, limits)
    verdict = ces_decide(c, limits)
    return Report(verdict.to_dict(), _VERDICT_EXIT[verdict.status])


def cmd_partition(args: argparse.Namespace, limits: Limits) -> Report:
    inst = load_graph(args.graph, args.coupling)
    if args.beta is not None:
        result = partition_function(inst, args.beta, args.method, limits.max_nullity, limits.max_spins)
        payload = result.to_dict()
        payload["beta"] = args.beta
        return Report(payload)

    lam = args.lam
    if args.method == "brute":
        raise ValueError("the spin-sum evaluator needs --beta")
    evaluator = pick_even_sum_evaluator(inst.graph, limits.max_nullity) if args.method == "auto" else args.method
    if evaluator is None:
        raise CapExceededError("ising", "max_nullity", limits.max_nullity, cycle_space(inst.graph).nullity)
    s = even_sum(inst, lam, evaluator, limits.max_nullity)
    angle = lambda_theta(lam, "lambda_to_theta")
    payload = {
        "S": s,
        "lambda": lam,
        "evaluator": evaluator,
        "Z": partition_from_sum(inst, s, lam) if angle.physical else None,
        "beta_J": angle.beta_j,
    }
    return Report(payload)


def cmd_simulate(args: argparse.Namespace, limits: Limits) -> Report:
    c = _load_circuit(args, limits)
    amplitude = simulate_amplitude(c, limits.max_qubits)
    payload: dict = {"amplitude": amplitude, "lambda": float(c.lam), "qubits": c.qubit_count, "gates": c.gate_count}
    if args.expansion:
        payload["expansion_amplitude"] = c.normalization_sign * expansion_amplitude(
            h_matrix(c), c.lam, limits.max_nullity
        )
    return Report(payload)


def _number(text: str, exact: bool) -> float | Fraction:
    return Fraction(text) if exact else float(text)


def cmd_qwgt(args: argparse.Namespace, limits: Limits) -> Report:
    A = load_bit_matrix(args.a_file)
    B = load_bit_matrix(args.b_file)
    x = _number(args.x, args.exact)
    y = _number(args.y, args.exact)
    value = qwgt(A, B, x, y, limits.max_nullity)
    shown = str(value) if isinstance(value, Fraction) else value
    return Report({"value": shown, "x": str(x), "y": str(y), "exact": args.exact})


def cmd_minors(args: argparse.Namespace, limits: Limits) -> Report:
    inst = load_graph(args.graph)
    report = classify(inst.graph, limits.minor_budget)
    return Report(report.to_dict())


def cmd_verify(args: argparse.Namespace, limits: Limits) -> Report:
    seed = limits.default_seed if args.seed is None else args.seed
    count = limits.default_count if args.count is None else args.count
    report = run_verify(seed, count, limits, args.workers)
    if args.db:
        run_id = str(uuid.uuid4())
        init_db(args.db)
        insert_checks(run_id, seed, report.outcomes, db_path=args.db)
        insert_summary(run_id, seed, count, list(report.outcomes), db_path=args.db)
    return Report(report.to_dict(), EXIT_OK if report.ok else EXIT_MISMATCH)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limits", default=str(DEFAULT_LIMITS_PATH), help="YAML file of caps and defaults")
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    common.add_argument("--max-qubits", type=_positive_int)
    common.add_argument("--max-nullity", type=_positive_int)
    common.add_argument("--max-spins", type=_positive_int)
    common.add_argument("--minor-budget", type=_positive_int)

    angle = argparse.ArgumentParser(add_help=False)
    group = angle.add_mutually_exclusive_group()
    group.add_argument("--lambda", dest="lam", type=float, help="override lam = tan(theta/2)")
    group.add_argument("--theta", type=float, help="override the rotation angle")

    parser = argparse.ArgumentParser(prog="ces-ising", description="CES decision for Pauli-rotation circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("circuit2graph", parents=[common, angle], help="graph of a circuit")
    p.add_argument("circuit")
    p.set_defaults(handler=cmd_circuit2graph)

    p = sub.add_parser("graph2circuit", parents=[common, angle], help="circuit and bond vector for a graph")
    p.add_argument("graph")
    p.add_argument("--method", choices=("joint", "enumerate"), default="joint")
    p.set_defaults(handler=cmd_graph2circuit)

    p = sub.add_parser("solve-w", parents=[common, angle], help="bond vector for a fixed circuit")
    p.add_argument("circuit")
    p.set_defaults(handler=cmd_solve_w)

    p = sub.add_parser("check-ces", parents=[common, angle], help="full CES verdict")
    p.add_argument("circuit")
    p.set_defaults(handler=cmd_check_ces)

    p = sub.add_parser("partition", parents=[common], help="Ising partition function or even-subgraph sum")
    p.add_argument("graph")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--beta", type=float)
    which.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--method", choices=("auto", "planar", "kernel", "brute"), default="auto")
    p.set_defaults(handler=cmd_partition)

    p = sub.add_parser("simulate", parents=[common, angle], help="statevector amplitude")
    p.add_argument("circuit")
    p.add_argument("--expansion", action="store_true", help="also report the kernel expansion")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("qwgt", parents=[common], help="quadratically signed weight enumerator")
    p.add_argument("a_file")
    p.add_argument("b_file")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--exact", action="store_true", help="rational arithmetic")
    p.set_defaults(handler=cmd_qwgt)

    p = sub.add_parser("minors", parents=[common], help="planarity and obstruction report")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_minors)

    p = sub.add_parser("verify", parents=[common], help="seeded cross-oracle suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--db", help="SQLite file for the check ledger")
    p.set_defaults(handler=cmd_verify)

    return parser


def _limits_from(args: argparse.Namespace) -> Limits:
    limits = load_limits(args.limits)
    overrides = {
        name: getattr(args, name)
        for name in ("max_qubits", "max_nullity", "max_spins", "minor_budget")
        if getattr(args, name) is not None
    }
    return dataclasses.replace(limits, **overrides)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr, format="%(name)s %(levelname)s %(message)s")

    handler: Callable[[argparse.Namespace, Limits], Report] = args.handler
    try:
        limits = _limits_from(args)
        report = handler(args, limits)
    except ColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (InputFormatError, FileNotFoundError, NonRealAmplitudeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except MinorSearchBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN

    _emit(report, args.format)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
