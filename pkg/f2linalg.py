# selmer/f2linalg.py
from typing import Sequence

import numpy as np

from exceptions import DomainError

WORD_BITS = 64
MAX_BATCH_COLS = 64


def _word_count(cols: int) -> int:
    return max(1, -(-cols // WORD_BITS))


class BitMatrix:
    __slots__ = ("rows", "cols", "data", "_masks")

    def __init__(self, rows: int, cols: int, data: np.ndarray):
        if rows < 0 or cols < 0:
            raise DomainError(f"matrix shape must be non-negative, got {rows}x{cols}")
        data = np.array(data, dtype=np.uint64, copy=True).reshape(rows, _word_count(cols))
        tail = cols % WORD_BITS
        if tail:
            data[:, -1] &= np.uint64((1 << tail) - 1)
        elif cols == 0:
            data[:] = 0
        data.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self.data = data
        self._masks = None

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, _word_count(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, k: int) -> "BitMatrix":
        return cls.from_rows([1 << i for i in range(k)], k)

    @classmethod
    def from_rows(cls, masks: Sequence[int], cols: int) -> "BitMatrix":
        words = _word_count(cols)
        data = np.zeros((len(masks), words), dtype=np.uint64)
        for i, mask in enumerate(masks):
            for w in range(words):
                data[i, w] = (mask >> (WORD_BITS * w)) & 0xFFFFFFFFFFFFFFFF
        return cls(len(masks), cols, data)

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        cols = len(entries[0]) if entries else 0
        if any(len(row) != cols for row in entries):
            raise DomainError("ragged rows")
        masks = [sum((int(bit) & 1) << j for j, bit in enumerate(row)) for row in entries]
        return cls.from_rows(masks, cols)

    def row_masks(self) -> tuple[int, ...]:
        if self._masks is None:
            self._masks = tuple(
                sum(int(word) << (WORD_BITS * w) for w, word in enumerate(row)) for row in self.data
            )
        return self._masks

    def to_dense(self) -> list[list[int]]:
        return [[(mask >> j) & 1 for j in range(self.cols)] for mask in self.row_masks()]

    def transpose(self) -> "BitMatrix":
        masks = self.row_masks()
        return BitMatrix.from_rows(
            [sum(((mask >> j) & 1) << i for i, mask in enumerate(masks)) for j in range(self.cols)],
            self.rows,
        )

    def row_sums(self) -> list[int]:
        return [bin(mask).count("1") % 2 for mask in self.row_masks()]

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(index)
        return (self.row_masks()[i] >> j) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.row_masks()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.to_dense()})"


def rank(matrix: BitMatrix) -> int:
    # xor basis keyed by leading bit; the caller's rows are never touched
    basis: dict[int, int] = {}
    for row in matrix.row_masks():
        while row:
            lead = row.bit_length() - 1
            pivot = basis.get(lead)
            if pivot is None:
                basis[lead] = row
                break
            row ^= pivot
    return len(basis)


def kernel_dimension(matrix: BitMatrix) -> int:
    return matrix.cols - rank(matrix)


def batch_rank(rows: np.ndarray, cols: int) -> np.ndarray:
    if cols > MAX_BATCH_COLS:
        raise DomainError(f"batched rank supports at most {MAX_BATCH_COLS} columns")
    work = np.array(rows, dtype=np.uint64, copy=True)
    batch, height = work.shape
    ranks = np.zeros(batch, dtype=np.int64)
    free = np.ones((batch, height), dtype=bool)
    everyone = np.arange(batch)
    for c in range(cols):
        bit = ((work >> np.uint64(c)) & np.uint64(1)).astype(bool)
        candidates = bit & free
        found = candidates.any(axis=1)
        pivot = candidates.argmax(axis=1)
        pivot_rows = work[everyone, pivot]
        clear = bit & found[:, None]
        clear[everyone, pivot] = False
        work ^= np.where(clear, pivot_rows[:, None], np.uint64(0))
        free[everyone, pivot] &= ~found
        ranks += found
    return ranks


def upper_pairs(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def rowsum_mask(k: int, j: int) -> int:
    if not 0 <= j <= k:
        raise DomainError(f"row-sum weight j={j} out of range 0..{k}")
    return ((1 << j) - 1) << (k - j)


def symmetric_rows(bits: np.ndarray, k: int, rowsum: int = 0) -> np.ndarray:
    """Packed symmetric matrices from strictly-upper bits, diagonal solved for ``rowsum``.

    ``bits`` has shape (batch, k(k-1)/2) in :func:`upper_pairs` order. With
    rowsum 0 every row sums to zero, which is the Laplace matrix of the
    undirected graph the bits describe.
    """
    bits = np.asarray(bits)
    rows = np.zeros((bits.shape[0], k), dtype=np.uint64)
    for idx, (i, j) in enumerate(upper_pairs(k)):
        b = bits[:, idx].astype(np.uint64)
        rows[:, i] |= b << np.uint64(j)
        rows[:, j] |= b << np.uint64(i)
    parity = (np.bitwise_count(rows) & 1).astype(np.uint64)
    target = np.array([(rowsum >> i) & 1 for i in range(k)], dtype=np.uint64)
    diagonal = parity ^ target
    rows |= diagonal << np.arange(k, dtype=np.uint64)
    return rows


def random_symmetric_batch(
    k: int, count: int, rng: np.random.Generator, rowsum: int = 0
) -> np.ndarray:
    """Draw ``count`` matrices; consumes one ``rng.integers`` call of shape (count, k(k-1)/2)."""
    if not 1 <= k <= MAX_BATCH_COLS:
        raise DomainError(f"matrix size k={k} out of range 1..{MAX_BATCH_COLS}")
    bits = rng.integers(0, 2, size=(count, k * (k - 1) // 2), dtype=np.uint8)
    return symmetric_rows(bits, k, rowsum)


def enumerate_bits(width: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.uint64)
    shifts = np.arange(width, dtype=np.uint64)
    return ((codes[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)


def _as_matrix(packed: np.ndarray, k: int) -> BitMatrix:
    return BitMatrix(k, k, packed.reshape(k, 1))


def random_symmetric(k: int, rng: np.random.Generator) -> BitMatrix:
    return _as_matrix(random_symmetric_batch(k, 1, rng)[0], k)


def random_symmetric_with_rowsum(k: int, j: int, rng: np.random.Generator) -> BitMatrix:
    if not 1 <= j <= k:
        raise DomainError(f"row-sum weight j={j} out of range 1..{k}")
    return _as_matrix(random_symmetric_batch(k, 1, rng, rowsum_mask(k, j))[0], k)
