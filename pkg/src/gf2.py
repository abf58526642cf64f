"""Dense linear algebra over GF(2).

Bit matrices and bit vectors are stored as read-only ``numpy.uint8`` arrays
with entries in {0, 1}.  Row reduction uses XOR row operations on whole
rows, so every elimination step is a single vectorised numpy call.

All values are immutable after construction and every function is pure.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

# Largest number of span vectors materialised at once by :func:`iter_span`.
_SPAN_CHUNK_BITS = 15


def _as_bits(data, ndim: int) -> np.ndarray:
    arr = np.asarray(data)
    if arr.size == 0:
        arr = arr.reshape(arr.shape if arr.ndim == ndim else (0,) * ndim)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional bit array, got shape {arr.shape}")
    bits = (arr.astype(np.int64) % 2).astype(np.uint8)
    bits.setflags(write=False)
    return bits


class BitVector:
    """Immutable vector over GF(2)."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray) -> None:
        if not isinstance(bits, np.ndarray):
            bits = list(bits)
        self._bits = _as_bits(bits, 1)

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(np.zeros(length, dtype=np.uint8))

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        """Build a vector from a string of ``0``/``1`` characters."""
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"bit string may only contain 0 and 1, got {text!r}")
        return cls([int(ch) for ch in text])

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def weight(self) -> int:
        """Hamming weight (number of one-bits)."""
        return int(self._bits.sum())

    def dot(self, other: BitVector) -> int:
        if len(self) != len(other):
            raise ValueError(f"length mismatch: {len(self)} vs {len(other)}")
        return int(np.dot(self._bits.astype(np.int64), other.bits.astype(np.int64)) % 2)

    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self._bits)]

    def to_string(self) -> str:
        return "".join(str(int(b)) for b in self._bits)

    def tolist(self) -> list[int]:
        return [int(b) for b in self._bits]

    def __xor__(self, other: BitVector) -> BitVector:
        if len(self) != len(other):
            raise ValueError(f"length mismatch: {len(self)} vs {len(other)}")
        return BitVector(self._bits ^ other.bits)

    def __len__(self) -> int:
        return int(self._bits.shape[0])

    def __getitem__(self, index: int) -> int:
        return int(self._bits[index])

    def __iter__(self) -> Iterator[int]:
        return (int(b) for b in self._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return len(self) == len(other) and bool(np.array_equal(self._bits, other.bits))

    def __hash__(self) -> int:
        return hash((len(self), self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector('{self.to_string()}')"


class BitMatrix:
    """Immutable matrix over GF(2)."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Sequence[Sequence[int]] | np.ndarray) -> None:
        self._bits = _as_bits(bits, 2)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Sequence[str | Sequence[int]], cols: int | None = None) -> BitMatrix:
        """Build a matrix from rows given as ``"0110"`` strings or int sequences.

        *cols* is only needed when *rows* is empty.
        """
        parsed = [
            BitVector.from_string(r).tolist() if isinstance(r, str) else list(r) for r in rows
        ]
        if not parsed:
            return cls.zeros(0, cols or 0)
        widths = {len(r) for r in parsed}
        if len(widths) != 1:
            raise ValueError(f"ragged rows: widths {sorted(widths)}")
        return cls(np.array(parsed, dtype=np.int64))

    @classmethod
    def from_columns(cls, columns: Sequence[BitVector], rows: int | None = None) -> BitMatrix:
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(np.stack([c.bits for c in columns], axis=1))

    # ------------------------------------------------------------------
    # Shape and access
    # ------------------------------------------------------------------

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def rows(self) -> int:
        return int(self._bits.shape[0])

    @property
    def cols(self) -> int:
        return int(self._bits.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> BitVector:
        return BitVector(self._bits[i])

    def column(self, j: int) -> BitVector:
        return BitVector(self._bits[:, j])

    def columns(self) -> list[BitVector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> BitMatrix:
        return BitMatrix(self._bits.T)

    def diagonal(self) -> BitVector:
        return BitVector(np.diagonal(self._bits))

    def strictly_lower(self) -> BitMatrix:
        return BitMatrix(np.tril(self._bits, k=-1))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and bool(np.array_equal(self._bits, self._bits.T))

    def to_strings(self) -> list[str]:
        return ["".join(str(int(b)) for b in r) for r in self._bits]

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def __matmul__(self, other: BitMatrix | BitVector) -> BitMatrix | BitVector:
        if isinstance(other, BitVector):
            if self.cols != len(other):
                raise ValueError(f"shape mismatch: {self.shape} @ ({len(other)},)")
            return BitVector(self._bits.astype(np.int64) @ other.bits.astype(np.int64))
        if isinstance(other, BitMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
            return BitMatrix(self._bits.astype(np.int64) @ other.bits.astype(np.int64))
        return NotImplemented

    def __xor__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return BitMatrix(self._bits ^ other.bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.shape, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.to_strings()!r})"


class RrefResult(NamedTuple):
    reduced: BitMatrix
    pivot_columns: tuple[int, ...]
    rank: int


class LinearSolution(NamedTuple):
    x: BitVector
    solution_space_dim: int


def _reduce(arr: np.ndarray, n_pivot_cols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Fully reduce *arr* over GF(2); pivots are searched in the first *n_pivot_cols* columns."""
    R = np.array(arr, dtype=np.uint8, copy=True)
    m, n = R.shape
    limit = n if n_pivot_cols is None else n_pivot_cols

    pivots: list[int] = []
    row = 0
    for col in range(limit):
        if row == m:
            break
        nonzero = np.flatnonzero(R[row:, col])
        if nonzero.size == 0:
            continue
        found = row + int(nonzero[0])
        if found != row:
            R[[row, found]] = R[[found, row]]

        # Clear the column above and below the pivot in one XOR.
        mask = R[:, col].astype(bool)
        mask[row] = False
        R[mask] ^= R[row]

        pivots.append(col)
        row += 1
    return R, pivots


def rref(M: BitMatrix) -> RrefResult:
    """Reduced row-echelon form of *M* over GF(2).

    Parameters
    ----------
    M : BitMatrix
        Any bit matrix.

    Returns
    -------
    RrefResult
        ``reduced`` (same shape as *M*), ``pivot_columns`` in increasing
        order and ``rank`` (the number of pivots).
    """
    R, pivots = _reduce(M.bits)
    return RrefResult(BitMatrix(R), tuple(pivots), len(pivots))


def rank(M: BitMatrix) -> int:
    return rref(M).rank


def nullspace_basis(M: BitMatrix) -> BitMatrix:
    """Basis of ker *M*, one basis vector per column.

    Columns are ordered by ascending free-column index; the basis vector for
    free column *f* has a one at *f* and zeros at every other free column.

    Returns
    -------
    BitMatrix
        Shape ``(M.cols, M.cols - rank(M))``.
    """
    R, pivots = _reduce(M.bits)
    n = M.cols
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]

    K = np.zeros((n, len(free)), dtype=np.uint8)
    for k, f in enumerate(free):
        K[f, k] = 1
        for i, p in enumerate(pivots):
            K[p, k] = R[i, f]
    return BitMatrix(K)


def solve_linear(M: BitMatrix, b: BitVector) -> LinearSolution | None:
    """Solve ``M x = b`` over GF(2).

    Free variables are fixed to 0, which makes the returned solution
    deterministic.

    Returns
    -------
    LinearSolution | None
        The solution and the dimension of the affine solution space, or
        ``None`` when ``rank[M|b] > rank[M]``.

    Raises
    ------
    ValueError
        If ``len(b) != M.rows``.
    """
    if len(b) != M.rows:
        raise ValueError(f"dimension mismatch: matrix has {M.rows} rows, rhs has {len(b)}")

    augmented = np.hstack([M.bits, b.bits.reshape(-1, 1)])
    R, pivots = _reduce(augmented, n_pivot_cols=M.cols)
    r = len(pivots)
    if R[r:, -1].any():
        return None

    x = np.zeros(M.cols, dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[p] = R[i, -1]
    return LinearSolution(BitVector(x), M.cols - r)


def quadratic_form(M: BitMatrix, x: BitVector) -> int:
    """``x^t M x`` mod 2."""
    if not M.is_square() or M.rows != len(x):
        raise ValueError(f"shape mismatch: {M.shape} with vector of length {len(x)}")
    xv = x.bits.astype(np.int64)
    return int(xv @ M.bits.astype(np.int64) @ xv % 2)


def linearize_quadratic_form(M: BitMatrix) -> BitVector | None:
    """Return ``d`` with ``x^t M x = x . d`` for all ``x``, if it exists.

    Over GF(2) the form is linear exactly when ``M`` is symmetric, in which
    case the off-diagonal terms cancel pairwise and ``d = diag(M)``.

    Raises
    ------
    ValueError
        If *M* is not square.
    """
    if not M.is_square():
        raise ValueError(f"quadratic form needs a square matrix, got {M.shape}")
    if not M.is_symmetric():
        return None
    return M.diagonal()


def signed_weight_distribution(basis: BitMatrix, form: BitMatrix) -> np.ndarray:
    """Signed weight counts of the span of *basis* under the form *form*.

    Entry ``w`` of the result is ``sum((-1)**(a^t form a))`` over span
    vectors ``a`` of Hamming weight ``w``.  The array has length
    ``basis.rows + 1``.
    """
    n = basis.rows
    if form.shape != (n, n):
        raise ValueError(f"form must be {n}x{n}, got {form.shape}")
    B = form.bits.astype(np.int64)
    coeffs = np.zeros(n + 1, dtype=np.int64)
    for chunk in iter_span(basis):
        a = chunk.astype(np.int64)
        signs = ((a @ B) * a).sum(axis=1) % 2
        weights = a.sum(axis=1)
        coeffs += np.bincount(weights, weights=1 - 2 * signs, minlength=n + 1).astype(np.int64)
    return coeffs


def iter_span(basis: BitMatrix, chunk_bits: int = _SPAN_CHUNK_BITS) -> Iterator[np.ndarray]:
    """Yield every vector in the column span of *basis*, in chunks.

    Each chunk is a ``(k, basis.rows)`` uint8 array whose rows are span
    vectors; chunk ``c`` holds the combinations with coefficient indices
    ``c * 2**chunk_bits`` onwards, so the overall order is deterministic.
    The zero vector comes first.
    """
    m = basis.cols
    total = 1 << m
    step = 1 << min(chunk_bits, m)
    shifts = np.arange(m, dtype=np.int64)
    columns = basis.bits.T.astype(np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        coeffs = (idx[:, None] >> shifts) & 1
        yield ((coeffs @ columns) % 2).astype(np.uint8)
