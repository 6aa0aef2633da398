"""Inner linear code with bounded-distance syndrome decoding.

The code is defined by a parity-check matrix over GF(2). Construction
brute-forces the minimum distance and builds a complete syndrome -> coset
leader table out to the guaranteed correction radius, so membership checks
and bounded-distance decoding are table lookups.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

from .gf2 import BitMatrix, BitVector, nullspace_basis, rref

MAX_BLOCK_LENGTH = 24


class InnerCode:
    """A binary [d, k0, d0] code held as parity checks plus decode tables."""

    def __init__(self, h: BitMatrix, g_rows: list[BitVector], d0: int) -> None:
        self.d = h.cols
        self.k0 = len(g_rows)
        self.d0 = d0
        self.h = h
        self.g = BitMatrix(self.k0, self.d, tuple(v.bits for v in g_rows))
        self.radius = (d0 - 1) // 2
        self._h_rows = h.row_bits
        self.syndrome_table = self._build_syndrome_table()

    @classmethod
    def from_parity_check(cls, h: BitMatrix) -> InnerCode:
        """Build the code from any parity-check matrix (redundant rows allowed)."""
        if h.cols > MAX_BLOCK_LENGTH:
            raise ValueError(
                f"block length {h.cols} exceeds brute-force limit {MAX_BLOCK_LENGTH}"
            )
        if h.is_zero():
            raise ValueError("parity-check matrix must be nonzero")
        reduced, rank, _ = rref(h)
        full_rank_h = BitMatrix(rank, h.cols, reduced.row_bits[:rank])
        g_rows = nullspace_basis(full_rank_h)
        if not g_rows:
            raise ValueError("code has dimension 0; minimum distance undefined")
        d0 = _min_weight(g_rows)
        return cls(full_rank_h, g_rows, d0)

    def _build_syndrome_table(self) -> dict[int, int]:
        table = {0: 0}
        for w in range(1, self.radius + 1):
            for positions in combinations(range(self.d), w):
                err = 0
                for p in positions:
                    err |= 1 << p
                syn = self.syndrome_bits(err)
                if syn in table:
                    # two patterns of weight <= radius sharing a syndrome would
                    # mean a codeword of weight < d0
                    assert table[syn].bit_count() < w, "ambiguous coset leader"
                    continue
                table[syn] = err
        return table

    def syndrome_bits(self, word_bits: int) -> int:
        syn = 0
        for i, row in enumerate(self._h_rows):
            if (row & word_bits).bit_count() & 1:
                syn |= 1 << i
        return syn

    def check(self, w: BitVector) -> bool:
        """True iff w is a codeword (all parity checks pass)."""
        if w.n != self.d:
            raise ValueError(f"length mismatch: expected {self.d}, got {w.n}")
        return self.syndrome_bits(w.bits) == 0

    def leader_for(self, word_bits: int) -> int | None:
        """Coset leader for a packed word, or None outside the decode radius."""
        return self.syndrome_table.get(self.syndrome_bits(word_bits))

    def decode_bounded(self, w: BitVector) -> BitVector | None:
        """Nearest codeword if within radius floor((d0-1)/2), else None."""
        if w.n != self.d:
            raise ValueError(f"length mismatch: expected {self.d}, got {w.n}")
        leader = self.leader_for(w.bits)
        if leader is None:
            return None
        return BitVector(self.d, w.bits ^ leader)

    def min_distance(self) -> int:
        """Exact minimum distance by exhaustive codeword enumeration."""
        if self.k0 < 1:
            raise ValueError("dimension 0 code has no nonzero codeword")
        return _min_weight([BitVector(self.d, r) for r in self.g.row_bits])

    def enumerate_codewords(self) -> Iterator[BitVector]:
        """All 2^k0 codewords, Gray-code order starting from zero."""
        if self.k0 > MAX_BLOCK_LENGTH:
            raise ValueError("dimension too large to enumerate")
        yield from _gray_span(self.d, self.g.row_bits)

    def to_text(self) -> str:
        lines = [f"{self.d} {self.h.rows}"]
        for row in self.h.row_bits:
            lines.append("".join("1" if (row >> j) & 1 else "0" for j in range(self.d)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> InnerCode:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty inner-code file")
        try:
            d, r = (int(tok) for tok in lines[0].split())
        except ValueError as exc:
            raise ValueError("header must be 'd r'") from exc
        if len(lines) != 1 + r:
            raise ValueError(f"expected {r} matrix rows, found {len(lines) - 1}")
        rows = []
        for ln in lines[1:]:
            ln = ln.strip()
            if len(ln) != d or set(ln) - {"0", "1"}:
                raise ValueError("matrix rows must be d characters of 0/1")
            rows.append([1 if ch == "1" else 0 for ch in ln])
        return cls.from_parity_check(BitMatrix.from_rows(rows))


def _gray_span(n: int, generators: tuple[int, ...]) -> Iterator[BitVector]:
    word = 0
    yield BitVector(n, word)
    for counter in range(1, 1 << len(generators)):
        word ^= generators[(counter & -counter).bit_length() - 1]
        yield BitVector(n, word)


def _min_weight(g_rows: list[BitVector]) -> int:
    n = g_rows[0].n
    best = n + 1
    for cw in _gray_span(n, tuple(v.bits for v in g_rows)):
        w = cw.weight()
        if 0 < w < best:
            best = w
    return best


def parity_check_code(d: int) -> InnerCode:
    """The even-weight code of length d (single all-ones check)."""
    return InnerCode.from_parity_check(BitMatrix(1, d, ((1 << d) - 1,)))


def repetition_code(d: int) -> InnerCode:
    """The length-d repetition code {0...0, 1...1}."""
    rows = [(1 | (1 << j)) for j in range(1, d)]
    return InnerCode.from_parity_check(BitMatrix(d - 1, d, tuple(rows)))


__all__ = [
    "InnerCode",
    "MAX_BLOCK_LENGTH",
    "parity_check_code",
    "repetition_code",
]
