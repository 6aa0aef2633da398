"""The composite code: a bipartite graph whose constraints run an inner code.

A word of length n_left belongs to the code when its restriction to every
constraint's neighborhood (taken in ascending left-vertex order) is an inner
codeword. Global parity checks, the generator basis, and the brute-force
oracles are computed lazily; decoding never needs them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .gf2 import BitMatrix, BitVector, nullspace_basis, rref
from .graphs import BipartiteGraph
from .inner import InnerCode

MAX_BRUTEFORCE_DIM = 24
MAX_ORACLE_DIM = 20


@dataclass(frozen=True)
class Restriction:
    """Coordinate map of one constraint: position j reads left bit coords[j]."""

    constraint: int
    coords: tuple[int, ...]

    def extract_bits(self, x: BitVector) -> int:
        bits = 0
        for j, v in enumerate(self.coords):
            if (x.bits >> v) & 1:
                bits |= 1 << j
        return bits


class TannerCode:
    def __init__(self, graph: BipartiteGraph, inner: InnerCode) -> None:
        if inner.d != graph.d:
            raise ValueError(
                f"inner block length {inner.d} != right degree {graph.d}"
            )
        self.graph = graph
        self.inner = inner
        self.n = graph.n_left

    def restriction(self, u: int) -> Restriction:
        return Restriction(u, self.graph.right_adj[u])

    def _restriction_bits(self, x: BitVector, u: int) -> int:
        bits = 0
        xb = x.bits
        for j, v in enumerate(self.graph.right_adj[u]):
            if (xb >> v) & 1:
                bits |= 1 << j
        return bits

    def is_codeword(self, x: BitVector) -> bool:
        if x.n != self.n:
            raise ValueError(f"length mismatch: expected {self.n}, got {x.n}")
        return all(
            self.inner.syndrome_bits(self._restriction_bits(x, u)) == 0
            for u in range(self.graph.n_right)
        )

    def unsatisfied(self, x: BitVector) -> set[int]:
        """Constraints whose restriction fails the inner check."""
        if x.n != self.n:
            raise ValueError(f"length mismatch: expected {self.n}, got {x.n}")
        return {
            u
            for u in range(self.graph.n_right)
            if self.inner.syndrome_bits(self._restriction_bits(x, u)) != 0
        }

    @cached_property
    def global_h(self) -> BitMatrix:
        """Stacked parity checks: each inner row mapped through a neighborhood."""
        rows = []
        for u in range(self.graph.n_right):
            coords = self.graph.right_adj[u]
            for hrow in self.inner.h.row_bits:
                mask = 0
                bits = hrow
                while bits:
                    low = bits & -bits
                    mask |= 1 << coords[low.bit_length() - 1]
                    bits ^= low
                rows.append(mask)
        return BitMatrix(len(rows), self.n, tuple(rows))

    @cached_property
    def generator(self) -> tuple[BitVector, ...]:
        return tuple(nullspace_basis(self.global_h))

    @cached_property
    def dim(self) -> int:
        _, rank, _ = rref(self.global_h)
        return self.n - rank

    def encode(self, msg: BitVector) -> BitVector:
        if msg.n != self.dim:
            raise ValueError(f"message length must equal dimension {self.dim}")
        bits = 0
        for i, gen in enumerate(self.generator):
            if (msg.bits >> i) & 1:
                bits ^= gen.bits
        return BitVector(self.n, bits)

    def codewords(self):
        """All 2^dim codewords in Gray-code order (guarded by dim)."""
        word = 0
        gens = self.generator
        yield BitVector(self.n, word)
        for counter in range(1, 1 << len(gens)):
            word ^= gens[(counter & -counter).bit_length() - 1].bits
            yield BitVector(self.n, word)

    def min_distance_bruteforce(self) -> int:
        if self.dim < 1:
            raise ValueError("dimension 0 code has no nonzero codeword")
        if self.dim > MAX_BRUTEFORCE_DIM:
            raise ValueError(f"dimension {self.dim} exceeds {MAX_BRUTEFORCE_DIM}")
        return min(cw.weight() for cw in self.codewords() if cw.bits)

    def nearest_codeword_oracle(self, x: BitVector) -> tuple[BitVector, int]:
        """Exhaustive nearest codeword; ties go to the lexicographically
        smallest codeword (bit 0 most significant)."""
        if x.n != self.n:
            raise ValueError(f"length mismatch: expected {self.n}, got {x.n}")
        if self.dim > MAX_ORACLE_DIM:
            raise ValueError(f"dimension {self.dim} exceeds {MAX_ORACLE_DIM}")
        best = None
        best_dist = self.n + 1
        best_key = None
        for cw in self.codewords():
            dist = (cw.bits ^ x.bits).bit_count()
            if dist > best_dist:
                continue
            key = cw.to_text()
            if dist < best_dist or key < best_key:
                best, best_dist, best_key = cw, dist, key
        return best, best_dist


def corrupt(x: BitVector, weight: int, seed: int) -> BitVector:
    """Flip a uniformly seeded size-`weight` subset of coordinates."""
    if not 0 <= weight <= x.n:
        raise ValueError("weight out of range")
    rng = random.Random(seed)
    bits = x.bits
    for i in rng.sample(range(x.n), weight):
        bits ^= 1 << i
    return BitVector(x.n, bits)


MANIFEST_TAG = "tanner v1"


def write_bundle(manifest_path, graph_path, inner_path) -> None:
    manifest = Path(manifest_path)
    manifest.write_text(f"{MANIFEST_TAG} {graph_path} {inner_path}\n")


def load_bundle(manifest_path) -> TannerCode:
    """Load a code from a 'tanner v1' manifest; paths resolve relative to it."""
    manifest = Path(manifest_path)
    parts = manifest.read_text().strip().split()
    if len(parts) != 4 or " ".join(parts[:2]) != MANIFEST_TAG:
        raise ValueError(f"manifest must read '{MANIFEST_TAG} <graph> <inner>'")
    base = manifest.parent
    graph = BipartiteGraph.from_text((base / parts[2]).read_text())
    inner = InnerCode.from_text((base / parts[3]).read_text())
    return TannerCode(graph, inner)


__all__ = [
    "TannerCode",
    "Restriction",
    "corrupt",
    "write_bundle",
    "load_bundle",
    "MAX_BRUTEFORCE_DIM",
    "MAX_ORACLE_DIM",
]
