"""Bit-packed GF(2) vectors and matrices using int bitsets (LSB = index 0)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class BitVector:
    """Immutable GF(2) vector of fixed length, packed into a single int."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits outside declared length")

    @classmethod
    def zeros(cls, n: int) -> BitVector:
        return cls(n, 0)

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> BitVector:
        bits = 0
        n = 0
        for v in values:
            if v:
                bits |= 1 << n
            n += 1
        return cls(n, bits)

    @classmethod
    def from_text(cls, text: str) -> BitVector:
        text = text.strip()
        if text and set(text) - {"0", "1"}:
            raise ValueError("bit string must contain only '0'/'1'")
        return cls.from_bits(1 if ch == "1" else 0 for ch in text)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> BitVector:
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for length {n}")
            bits |= 1 << i
        return cls(n, bits)

    def bit(self, i: int) -> int:
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def distance(self, other: BitVector) -> int:
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (self.bits ^ other.bits).bit_count()

    def indices(self) -> list[int]:
        """Positions of the nonzero coordinates, ascending."""
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def to_text(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __xor__(self, other: BitVector) -> BitVector:
        return add(self, other)

    def __len__(self) -> int:
        return self.n


def add(a: BitVector, b: BitVector) -> BitVector:
    """Coordinatewise GF(2) sum (XOR)."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    return BitVector(a.n, a.bits ^ b.bits)


@dataclass(frozen=True)
class BitMatrix:
    """Immutable GF(2) matrix stored as one int bitset per row."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.row_bits) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.row_bits:
            if r < 0 or r >> self.cols:
                raise ValueError("row has bits beyond declared column count")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> BitMatrix:
        packed = []
        cols = None
        for row in rows:
            row = list(row)
            if cols is None:
                cols = len(row)
            elif len(row) != cols:
                raise ValueError("ragged rows")
            bits = 0
            for i, v in enumerate(row):
                if v:
                    bits |= 1 << i
            packed.append(bits)
        if cols is None:
            raise ValueError("matrix needs at least one row")
        return cls(len(packed), cols, tuple(packed))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    def row(self, i: int) -> int:
        return self.row_bits[i]

    def entry(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> j) & 1

    def iter_rows(self) -> Iterator[int]:
        return iter(self.row_bits)

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.row_bits)


def mat_vec_mul(m: BitMatrix, v: BitVector) -> BitVector:
    """Matrix-vector product over GF(2); entry r is the parity of row r AND v."""
    if m.cols != v.n:
        raise ValueError(f"dimension mismatch: {m.cols} cols vs vector length {v.n}")
    bits = 0
    for i, row in enumerate(m.row_bits):
        if (row & v.bits).bit_count() & 1:
            bits |= 1 << i
    return BitVector(m.rows, bits)


def rref(m: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row-echelon form over GF(2).

    Pivots are chosen scanning rows top-down and columns left-to-right, so the
    output is deterministic. Returns (reduced matrix, rank, pivot columns).
    """
    work = list(m.row_bits)
    pivots: list[int] = []
    rank = 0
    for col in range(m.cols):
        pivot = None
        for r in range(rank, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and ((work[r] >> col) & 1):
                work[r] ^= work[rank]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return BitMatrix(m.rows, m.cols, tuple(work)), rank, pivots


def nullspace_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of the right kernel of m; one vector per free column."""
    reduced, rank, pivots = rref(m)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        bits = 1 << fc
        for r, pc in enumerate(pivots):
            if (reduced.row_bits[r] >> fc) & 1:
                bits |= 1 << pc
        basis.append(BitVector(m.cols, bits))
    return basis


__all__ = [
    "BitVector",
    "BitMatrix",
    "add",
    "mat_vec_mul",
    "rref",
    "nullspace_basis",
]
