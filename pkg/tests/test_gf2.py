from __future__ import annotations

import itertools

import numpy as np
import pytest

from src.gf2 import (
    BitMatrix,
    BitVector,
    iter_span,
    linearize_quadratic_form,
    nullspace_basis,
    quadratic_form,
    rank,
    rref,
    signed_weight_distribution,
    solve_linear,
)


def test_bitvector_basics() -> None:
    v = BitVector.from_string("1011")
    assert v.weight == 3
    assert v.support() == [0, 2, 3]
    assert (v ^ BitVector.from_string("0011")).to_string() == "1000"
    assert v.dot(BitVector.from_string("1110")) == 0
    with pytest.raises(ValueError):
        BitVector.from_string("10a1")


def test_bits_are_read_only() -> None:
    m = BitMatrix.from_rows(["10", "01"])
    with pytest.raises(ValueError):
        m.bits[0, 0] = 0


def test_rref_and_rank() -> None:
    m = BitMatrix.from_rows(["110", "011", "101"])
    result = rref(m)
    assert result.rank == 2
    assert result.pivot_columns == (0, 1)
    assert result.reduced.to_strings() == ["101", "011", "000"]
    assert rank(BitMatrix.identity(4)) == 4
    assert rank(BitMatrix.zeros(3, 5)) == 0


def test_nullspace_of_triangle_incidence() -> None:
    incidence = BitMatrix.from_rows(["101", "110", "011"])
    K = nullspace_basis(incidence)
    assert K.shape == (3, 1)
    assert K.column(0).to_string() == "111"
    assert not (incidence @ K).bits.any()


def test_nullspace_dimension_on_random_matrices() -> None:
    rng = np.random.default_rng(11)
    for _ in range(50):
        rows, cols = (int(x) for x in rng.integers(1, 9, size=2))
        m = BitMatrix(rng.integers(0, 2, size=(rows, cols)))
        K = nullspace_basis(m)
        assert K.cols == cols - rank(m)
        assert not (m @ K).bits.any()
        assert rank(K) == K.cols


def test_solve_linear() -> None:
    m = BitMatrix.from_rows(["110", "011"])
    solution = solve_linear(m, BitVector.from_string("10"))
    assert solution is not None
    assert (m @ solution.x).to_string() == "10"
    assert solution.solution_space_dim == 1
    # free variable fixed to 0
    assert solution.x.to_string() == "100"


def test_solve_linear_inconsistent_and_mismatch() -> None:
    m = BitMatrix.from_rows(["11", "11"])
    assert solve_linear(m, BitVector.from_string("10")) is None
    with pytest.raises(ValueError):
        solve_linear(m, BitVector.from_string("101"))


def test_linearize_requires_square() -> None:
    with pytest.raises(ValueError):
        linearize_quadratic_form(BitMatrix.zeros(2, 3))


def test_linearize_succeeds_iff_symmetric() -> None:
    rng = np.random.default_rng(5)
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        m = BitMatrix(rng.integers(0, 2, size=(n, n)))
        d = linearize_quadratic_form(m)
        assert (d is not None) == m.is_symmetric()


def test_linearized_form_matches_exhaustively() -> None:
    rng = np.random.default_rng(6)
    for n in range(1, 11):
        upper = np.triu(rng.integers(0, 2, size=(n, n)))
        m = BitMatrix(upper + np.triu(upper, 1).T)
        d = linearize_quadratic_form(m)
        assert d is not None
        for bits in itertools.product((0, 1), repeat=n):
            x = BitVector(bits)
            assert quadratic_form(m, x) == x.dot(d)


def test_iter_span_order_and_size() -> None:
    basis = BitMatrix.from_rows(["10", "01", "11"])
    vectors = np.concatenate(list(iter_span(basis, chunk_bits=1)))
    assert vectors.shape == (4, 3)
    assert not vectors[0].any()
    assert [("".join(map(str, v))) for v in vectors] == ["000", "101", "011", "110"]


def test_iter_span_empty_basis_yields_zero_vector() -> None:
    vectors = list(iter_span(BitMatrix.zeros(4, 0)))
    assert len(vectors) == 1
    assert vectors[0].shape == (1, 4)
    assert not vectors[0].any()


def test_signed_weight_distribution() -> None:
    basis = BitMatrix.identity(2)
    assert signed_weight_distribution(basis, BitMatrix.zeros(2, 2)).tolist() == [1, 2, 1]
    form = BitMatrix.from_rows(["01", "00"])
    assert signed_weight_distribution(basis, form).tolist() == [1, 2, -1]
