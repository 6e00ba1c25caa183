import math

import numpy as np
import pytest

from exceptions import DomainError
from f2linalg import (
    BitMatrix,
    batch_rank,
    enumerate_bits,
    kernel_dimension,
    random_symmetric,
    random_symmetric_batch,
    random_symmetric_with_rowsum,
    rank,
    rowsum_mask,
    symmetric_rows,
    upper_pairs,
)


def test_rank_small_matrices():
    assert rank(BitMatrix.identity(5)) == 5
    assert rank(BitMatrix.zeros(4, 4)) == 0
    assert rank(BitMatrix.from_dense([[1, 1], [1, 1]])) == 1
    assert rank(BitMatrix.from_dense([[0, 1, 1], [1, 0, 1], [1, 1, 0]])) == 2
    assert kernel_dimension(BitMatrix.from_dense([[1, 1], [1, 1]])) == 1


def test_rank_beyond_one_word():
    assert rank(BitMatrix.identity(70)) == 70
    wide = BitMatrix.from_rows([(1 << 70) - 1], 65)
    assert wide.row_masks() == ((1 << 65) - 1,)
    assert wide[0, 64] == 1


def test_rank_leaves_matrix_untouched():
    matrix = BitMatrix.from_dense([[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    before = matrix.to_dense()
    rank(matrix)
    assert matrix.to_dense() == before


def test_transpose_and_equality():
    matrix = BitMatrix.from_dense([[1, 0, 1], [0, 0, 1]])
    assert matrix.transpose().to_dense() == [[1, 0], [0, 0], [1, 1]]
    assert matrix.transpose().transpose() == matrix
    assert hash(matrix) == hash(BitMatrix.from_dense([[1, 0, 1], [0, 0, 1]]))


def test_ragged_rows_rejected():
    with pytest.raises(DomainError):
        BitMatrix.from_dense([[1, 0], [1]])


def test_batch_rank_agrees_with_rank():
    rng = np.random.default_rng(11)
    rows = rng.integers(0, 2 ** 10, size=(200, 10), dtype=np.uint64)
    ranks = batch_rank(rows, 10)
    for packed, r in zip(rows, ranks):
        assert rank(BitMatrix.from_rows([int(x) for x in packed], 10)) == r


def test_symmetric_rows_follow_row_sum():
    bits = enumerate_bits(3, 0, 8)
    for rowsum in range(8):
        for packed in symmetric_rows(bits, 3, rowsum):
            matrix = BitMatrix(3, 3, packed.reshape(3, 1))
            assert matrix == matrix.transpose()
            assert matrix.row_sums() == [(rowsum >> i) & 1 for i in range(3)]


def test_rowsum_mask_sets_last_coordinates():
    assert rowsum_mask(4, 2) == 0b1100
    assert rowsum_mask(3, 3) == 0b111
    assert rowsum_mask(3, 0) == 0


def test_random_symmetric_matrices():
    rng = np.random.default_rng(3)
    matrix = random_symmetric(6, rng)
    assert matrix == matrix.transpose()
    assert matrix.row_sums() == [0] * 6
    conditioned = random_symmetric_with_rowsum(3, 2, rng)
    assert conditioned == conditioned.transpose()
    assert conditioned.row_sums() == [0, 1, 1]


def test_random_batches_are_seeded():
    first = random_symmetric_batch(8, 50, np.random.default_rng(5))
    second = random_symmetric_batch(8, 50, np.random.default_rng(5))
    assert np.array_equal(first, second)


def test_random_symmetric_domain():
    rng = np.random.default_rng(0)
    with pytest.raises(DomainError):
        random_symmetric_batch(65, 1, rng)
    with pytest.raises(DomainError):
        random_symmetric_with_rowsum(3, 0, rng)
    with pytest.raises(DomainError):
        random_symmetric_with_rowsum(3, 4, rng)


def test_enumerate_bits_and_pairs():
    bits = enumerate_bits(3, 0, 8)
    assert bits.shape == (8, 3)
    assert bits[5].tolist() == [1, 0, 1]
    assert upper_pairs(3) == [(0, 1), (0, 2), (1, 2)]


def test_rank_invariant_under_transpose_and_row_permutation():
    rng = np.random.default_rng(19)
    for _ in range(200):
        rows, cols = (int(x) for x in rng.integers(1, 12, size=2))
        masks = [int(x) for x in rng.integers(0, 2 ** cols, size=rows)]
        matrix = BitMatrix.from_rows(masks, cols)
        assert rank(matrix) <= min(rows, cols)
        assert rank(matrix.transpose()) == rank(matrix)
        shuffled = [masks[i] for i in rng.permutation(rows)]
        assert rank(BitMatrix.from_rows(shuffled, cols)) == rank(matrix)


def test_rowsum_conditioned_sampling_is_uniform():
    rng = np.random.default_rng(23)
    seen = {}
    for _ in range(4000):
        key = tuple(map(tuple, random_symmetric_with_rowsum(2, 1, rng).to_dense()))
        seen[key] = seen.get(key, 0) + 1
    assert set(seen) == {((0, 0), (0, 1)), ((1, 1), (1, 0))}
    for count in seen.values():
        assert abs(count - 2000) < 5 * math.sqrt(1000)
