"""Exception types shared across the package.

Each error carries the fields the CLI needs to pick an exit code and to
print a one-line diagnostic.
"""

from __future__ import annotations


class CapExceededError(RuntimeError):
    """A configured size cap was exceeded.

    Parameters
    ----------
    module : str
        Name of the module that enforced the cap (e.g. ``"circuit"``).
    cap : str
        Name of the cap (e.g. ``"max_qubits"``).
    limit : int
        Configured limit.
    actual : int
        Size that was requested.
    """

    def __init__(self, module: str, cap: str, limit: int, actual: int) -> None:
        self.module = module
        self.cap = cap
        self.limit = limit
        self.actual = actual
        super().__init__(f"[{module}] {cap} exceeded: {actual} > {limit}")


class InputFormatError(ValueError):
    """A text input could not be parsed."""

    def __init__(self, path: str, line: int, reason: str) -> None:
        self.path = path
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: {reason}")


class ColumnError(ValueError):
    """An H-matrix column falls outside the graph-backed circuit class."""

    HYPERGRAPH_COLUMN = "HYPERGRAPH_COLUMN"
    EVEN_Y_COLUMN = "EVEN_Y_COLUMN"

    def __init__(self, code: str, column: int, detail: str = "") -> None:
        self.code = code
        self.column = column
        message = f"{code}: column {column}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class MinorSearchBudgetError(RuntimeError):
    def __init__(self, budget: int) -> None:
        self.budget = budget
        super().__init__(f"[graph] minor search budget exceeded ({budget} nodes)")


class NonRealAmplitudeError(ArithmeticError):
    """The statevector amplitude has a non-negligible imaginary part."""


class EmbeddingError(ValueError):
    """A rotation system is not a valid planar embedding of its graph."""
