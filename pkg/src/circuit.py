"""Pauli-rotation circuits and their binary H-matrix encoding.

A circuit on ``n`` qubits is an ordered list of gates sharing one rotation
angle.  Gate ``k`` is labelled by a bit vector ``b_k`` of length ``2n``:
qubit ``i`` (0-based) owns the bit pair ``(b[2i], b[2i+1])`` = (first bit,
second bit) with the codes ``00 -> I``, ``01 -> X``, ``10 -> Z`` and
``11 -> Y``.  Qubit 1 is written leftmost in gate strings and is the most
significant bit of a basis-state index.

Gates are real: ``g = (I + lam * S_b) / sqrt(1 + lam**2)`` where
``S_b = (-i)**y(b) * sigma_b`` is the real Pauli product and
``lam = tan(theta / 2)``.  Two amplitude routes are provided:

* :func:`simulate_amplitude` applies each gate to a dense statevector;
* :func:`expansion_amplitude` sums signed powers of ``lam`` over the kernel
  of the second-bit rows, with signs from :func:`q_matrix`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .errors import CapExceededError, ColumnError, NonRealAmplitudeError
from .gf2 import BitMatrix, BitVector, nullspace_basis, signed_weight_distribution

logger = logging.getLogger(__name__)

PAULI_CODES: dict[str, tuple[int, int]] = {"I": (0, 0), "X": (0, 1), "Z": (1, 0), "Y": (1, 1)}
_CODE_TO_PAULI = {code: name for name, code in PAULI_CODES.items()}

_IMAG_TOLERANCE = 1e-12

Number = float | Fraction


# ---------------------------------------------------------------------------
# Gates and angles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gate:
    """One Pauli rotation, stored as its length-``2n`` label vector."""

    label: BitVector

    def __post_init__(self) -> None:
        if len(self.label) % 2:
            raise ValueError(f"gate label must have even length, got {len(self.label)}")

    @classmethod
    def from_string(cls, text: str) -> Gate:
        """Parse a gate string such as ``"ZXY"`` (qubit 1 leftmost)."""
        bits: list[int] = []
        for ch in text.strip().upper():
            if ch not in PAULI_CODES:
                raise ValueError(f"unknown Pauli letter {ch!r} in gate {text!r}")
            bits.extend(PAULI_CODES[ch])
        return cls(BitVector(bits))

    @property
    def qubit_count(self) -> int:
        return len(self.label) // 2

    def pauli(self, qubit: int) -> str:
        return _CODE_TO_PAULI[(self.label[2 * qubit], self.label[2 * qubit + 1])]

    def to_string(self) -> str:
        return "".join(self.pauli(i) for i in range(self.qubit_count))

    @property
    def y_count(self) -> int:
        return sum(1 for i in range(self.qubit_count) if self.pauli(i) == "Y")

    def support(self) -> list[int]:
        return [i for i in range(self.qubit_count) if self.pauli(i) != "I"]


@dataclass(frozen=True)
class Angle:
    """The shared rotation angle, given either as ``theta`` or as ``lam``."""

    kind: Literal["lambda", "theta"]
    value: Number

    def __post_init__(self) -> None:
        if self.kind not in ("lambda", "theta"):
            raise ValueError(f"angle kind must be 'lambda' or 'theta', got {self.kind!r}")

    @classmethod
    def from_lambda(cls, lam: Number) -> Angle:
        return cls("lambda", lam)

    @classmethod
    def from_theta(cls, theta: float) -> Angle:
        return cls("theta", theta)

    @property
    def lam(self) -> Number:
        if self.kind == "lambda":
            return self.value
        return math.tan(float(self.value) / 2.0)

    def half_angle(self) -> tuple[float, float]:
        """``(cos(theta/2), sin(theta/2))`` of the gate."""
        if self.kind == "theta":
            half = float(self.value) / 2.0
            return math.cos(half), math.sin(half)
        lam = float(self.value)
        norm = math.sqrt(1.0 + lam * lam)
        return 1.0 / norm, lam / norm

    def in_range(self) -> bool:
        """True when ``tan(theta/2) > 0``, i.e. theta mod 4pi lies in (0,pi) or (2pi,3pi)."""
        if self.kind == "lambda":
            return self.value > 0
        t = math.fmod(float(self.value), 4.0 * math.pi)
        if t < 0:
            t += 4.0 * math.pi
        return 0.0 < t < math.pi or 2.0 * math.pi < t < 3.0 * math.pi


@dataclass(frozen=True)
class Circuit:
    """``U = g_N ... g_1`` on ``qubit_count`` qubits; ``gates[0]`` acts first."""

    qubit_count: int
    gates: tuple[Gate, ...]
    angle: Angle

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.qubit_count < 0:
            raise ValueError(f"qubit_count must be non-negative, got {self.qubit_count}")
        for k, gate in enumerate(self.gates):
            if gate.qubit_count != self.qubit_count:
                raise ValueError(
                    f"gate {k} acts on {gate.qubit_count} qubits, circuit has {self.qubit_count}"
                )

    @classmethod
    def from_strings(cls, gates: Sequence[str], angle: Angle, qubit_count: int | None = None) -> Circuit:
        parsed = [Gate.from_string(g) for g in gates]
        if qubit_count is None:
            if not parsed:
                raise ValueError("qubit_count is required for an empty circuit")
            qubit_count = parsed[0].qubit_count
        return cls(qubit_count, tuple(parsed), angle)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    @property
    def lam(self) -> Number:
        return self.angle.lam

    @property
    def normalization_sign(self) -> int:
        """Sign relating the circuit to its ``lam`` normal form.

        When ``cos(theta/2) < 0`` every gate equals minus its normal form,
        so the amplitude picks up ``(-1)**N``.
        """
        cos_half, _ = self.angle.half_angle()
        if cos_half < 0 and self.gate_count % 2:
            return -1
        return 1


# ---------------------------------------------------------------------------
# H-matrix encoding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HMatrix:
    """``2n x N`` binary encoding of a circuit; column ``k`` is gate ``k``'s label."""

    bits: BitMatrix

    def __post_init__(self) -> None:
        if self.bits.rows % 2:
            raise ValueError(f"H-matrix must have an even row count, got {self.bits.rows}")

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> HMatrix:
        return cls(BitMatrix.from_rows(rows))

    @property
    def qubit_count(self) -> int:
        return self.bits.rows // 2

    @property
    def gate_count(self) -> int:
        return self.bits.cols

    def column(self, k: int) -> BitVector:
        return self.bits.column(k)

    def first_bits(self) -> BitMatrix:
        """``n x N`` matrix of first bits (Z component)."""
        return BitMatrix(self.bits.bits[0::2])

    def second_bits(self) -> BitMatrix:
        """``n x N`` matrix of second bits (X component); the nonzero rows of ``C H``."""
        return BitMatrix(self.bits.bits[1::2])

    def y_counts(self) -> list[int]:
        both = self.first_bits().bits & self.second_bits().bits
        return [int(c) for c in both.sum(axis=0)]


def h_matrix(c: Circuit) -> HMatrix:
    return HMatrix(BitMatrix.from_columns([g.label for g in c.gates], rows=2 * c.qubit_count))


def circuit_from_h(h: HMatrix, angle: Angle) -> Circuit:
    """Decode *h* back into a circuit.

    Raises
    ------
    ColumnError
        ``EVEN_Y_COLUMN`` if some column has an even number of ``Y`` codes.
    """
    for k, y in enumerate(h.y_counts()):
        if y % 2 == 0:
            raise ColumnError(ColumnError.EVEN_Y_COLUMN, k, f"{y} Y codes")
    return Circuit(h.qubit_count, tuple(Gate(col) for col in h.bits.columns()), angle)


def c_matrix(n: int) -> BitMatrix:
    """Block-diagonal ``C = diag([[0,1],[0,0]], ...)`` of size ``2n``.

    ``b^t C b'`` counts, mod 2, the qubits where ``b`` has first bit 1 and
    ``b'`` has second bit 1.
    """
    C = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for i in range(n):
        C[2 * i, 2 * i + 1] = 1
    return BitMatrix(C)


def pauli_product(b1: BitVector, b2: BitVector) -> tuple[int, BitVector]:
    """Multiply two real Pauli products: ``S_b1 S_b2 = sign * S_(b1 xor b2)``.

    Returns
    -------
    tuple[int, BitVector]
        ``sign = (-1)**(b1^t C b2)`` and the XOR label.
    """
    if len(b1) != len(b2):
        raise ValueError(f"label length mismatch: {len(b1)} vs {len(b2)}")
    if len(b1) % 2:
        raise ValueError(f"label length must be even, got {len(b1)}")
    cross = int(np.dot(b1.bits[0::2].astype(np.int64), b2.bits[1::2].astype(np.int64)) % 2)
    return (-1 if cross else 1), b1 ^ b2


def q_matrix(h: HMatrix) -> BitMatrix:
    """Strictly lower triangle of ``H^t C H``.

    ``Q[j, k]`` (``j > k``) is the parity of qubits where gate ``j`` has
    first bit 1 and gate ``k`` has second bit 1.
    """
    F = h.first_bits().bits.astype(np.int64)
    S = h.second_bits().bits.astype(np.int64)
    return BitMatrix(F.T @ S).strictly_lower()


# ---------------------------------------------------------------------------
# Amplitudes
# ---------------------------------------------------------------------------


def _gate_masks(gate: Gate, n: int) -> tuple[int, int, int]:
    """Return ``(xmask, zmask, y_count)`` over basis-state indices."""
    xmask = zmask = 0
    for i in range(n):
        pos = n - 1 - i
        if gate.label[2 * i]:
            zmask |= 1 << pos
        if gate.label[2 * i + 1]:
            xmask |= 1 << pos
    return xmask, zmask, gate.y_count


def simulate_amplitude(c: Circuit, max_qubits: int = 20) -> float:
    """``<0...0| g_N ... g_1 |0...0>`` by dense statevector simulation.

    Each gate is applied as ``cos(theta/2) I - i s sin(theta/2) sigma_b``
    with orientation ``s = +1`` when the Y count is 1 mod 4 and ``-1``
    otherwise; for odd Y counts this is the real gate
    ``cos(theta/2) I + sin(theta/2) S_b``.

    Raises
    ------
    CapExceededError
        If the circuit has more than *max_qubits* qubits.
    NonRealAmplitudeError
        If the imaginary part exceeds 1e-12 (an even-Y gate was applied).
    """
    n = c.qubit_count
    if n > max_qubits:
        raise CapExceededError("circuit", "max_qubits", max_qubits, n)

    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    state = np.zeros(dim, dtype=np.complex128)
    state[0] = 1.0
    cos_half, sin_half = c.angle.half_angle()

    for gate in c.gates:
        xmask, zmask, y_count = _gate_masks(gate, n)
        parity = np.zeros(dim, dtype=np.int64)
        for pos in range(n):
            if zmask >> pos & 1:
                parity ^= (idx >> pos) & 1
        # sigma_b |k> = i**y (-1)**popcount(k & zmask) |k ^ xmask>
        flipped = np.empty_like(state)
        flipped[idx ^ xmask] = (1j ** y_count) * (1 - 2 * parity) * state
        orientation = 1 if y_count % 4 == 1 else -1
        state = cos_half * state - 1j * orientation * sin_half * flipped

    amplitude = complex(state[0])
    if abs(amplitude.imag) > _IMAG_TOLERANCE:
        raise NonRealAmplitudeError(
            f"amplitude {amplitude} has imaginary part above {_IMAG_TOLERANCE}"
        )
    return amplitude.real


def kernel_weight_sum(h: HMatrix, lam: Number, max_nullity: int = 24) -> Number:
    """``sum over a in ker(CH) of (-1)**(a^t Q a) * lam**|a|``.

    Exact when *lam* is a :class:`~fractions.Fraction`.

    Raises
    ------
    CapExceededError
        If the kernel dimension exceeds *max_nullity*.
    """
    K = nullspace_basis(h.second_bits())
    if K.cols > max_nullity:
        raise CapExceededError("circuit", "max_nullity", max_nullity, K.cols)
    logger.debug("kernel sum over %d vectors (nullity %d)", 1 << K.cols, K.cols)
    coeffs = signed_weight_distribution(K, q_matrix(h))
    total: Number = Fraction(0) if isinstance(lam, Fraction) else 0.0
    for weight, coeff in enumerate(coeffs):
        if coeff:
            total += int(coeff) * lam**weight
    return total


def expansion_amplitude(h: HMatrix, lam: Number, max_nullity: int = 24) -> float:
    """Amplitude ``(1 + lam**2)**(-N/2)`` times :func:`kernel_weight_sum`."""
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    s = kernel_weight_sum(h, lam, max_nullity)
    lam_f = float(lam)
    return float(s) * (1.0 + lam_f * lam_f) ** (-h.gate_count / 2.0)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CircuitDiagnostics:
    even_y_gates: tuple[int, ...]
    angle_in_range: bool
    lam: float
    messages: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.even_y_gates and self.angle_in_range


def validate_real_circuit(c: Circuit) -> CircuitDiagnostics:
    """Report Y-parity and angle-range violations without raising."""
    messages: list[str] = []
    even = tuple(k for k, g in enumerate(c.gates) if g.y_count % 2 == 0)
    for k in even:
        messages.append(
            f"gate {k} ({c.gates[k].to_string()}) has {c.gates[k].y_count} Y codes; "
            "real gates need an odd count"
        )
    in_range = c.angle.in_range()
    if not in_range:
        messages.append(f"angle {c.angle.kind}={c.angle.value} gives tan(theta/2) <= 0")
    return CircuitDiagnostics(even, in_range, float(c.lam), tuple(messages))
