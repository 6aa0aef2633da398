"""Deterministic flip decoding with incremental bookkeeping.

The decoder stack has four layers. A single voting-and-flip round flips every
variable holding exactly m votes (one vote per constraint that sees a decodable
but wrong restriction, aimed at its lowest mismatching neighbor). A bounded
run applies a fixed sequence of such rounds, aborting when the unsatisfied
count stops shrinking fast enough. A search layer scans sequences in
lexicographic order until one cuts the unsatisfied count by a fixed factor.
The top layer repeats the search until no constraint is unsatisfied, then
finishes with one bounded-distance pass of the inner decoder.

All state updates are incremental: flipping a variable re-examines only the
adjacent constraints, so the work per search call is proportional to the
number of corruptions rather than the code length. Operation counters record
every check, inner decode, and bit flip for the cost-contract tests.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

from .gf2 import BitVector
from .tanner import TannerCode


class DecodeFailure(Exception):
    """The decoder could not produce a codeword (input outside the radius)."""


class NoAcceptableBranch(DecodeFailure):
    """Every flip sequence was exhausted without an acceptable reduction."""


@dataclass(frozen=True)
class DecoderParams:
    """Derived schedule for one (graph, inner code, expansion) configuration.

    eps0/eps1 admit any value in their open ranges; the defaults sit at half
    the allowed maximum and 1/200 of the slack, respectively. strict_product
    records whether delta*d0 > 3 held (the stronger hypothesis); derivation
    only requires d0 > 3/delta - 1 and warns in the gap.
    """

    c: int
    d: int
    alpha: float
    delta: float
    d0: int
    n: int
    t: int
    eps0: float
    eps1: float
    eps2: float
    eps3: float
    eps4: float
    gamma: float
    s0: int
    ell: int
    strict_product: bool

    @cached_property
    def prune_bounds(self) -> list[float]:
        """prune_bounds[k] = (1-eps3)^k * c*gamma*n, for k = 0..s0."""
        bounds = [self.c * self.gamma * self.n]
        for _ in range(self.s0):
            bounds.append(bounds[-1] * (1.0 - self.eps3))
        return bounds


def derive_params(
    c: int,
    d: int,
    alpha: float,
    delta: float,
    d0: int,
    n: int,
    eps0: float | None = None,
    eps1: float | None = None,
) -> DecoderParams:
    """Instantiate the decoding schedule for a (c,d,alpha,delta) expander."""
    if not 0 < delta <= 1:
        raise ValueError("delta must be in (0, 1]")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    if d0 <= 3 / delta - 1:
        raise ValueError(
            f"infeasible: need d0 > 3/delta - 1 = {3 / delta - 1:.4f}, got {d0}"
        )
    t = math.floor(1 / delta)
    if eps0 is None:
        eps0 = 0.5 * min((d0 + 1 - 3 / delta) / 2, (t + 1) - 1 / delta)
    if not (d0 > 3 / delta - 1 + 2 * eps0 and math.floor(1 / delta + eps0) == t):
        raise ValueError("eps0 outside its admissible range")
    if eps1 is None:
        eps1 = eps0 * delta**2 / 200
    if not 0 < eps1 < eps0 * delta**2 / 100:
        raise ValueError("eps1 outside its admissible range")
    eps2 = eps1 / (c + 1) * (delta * (t + 1) - 1) / t
    eps3 = eps2 * (2 * (1 - eps1) * (0.5 + eps0 * delta**2 / 2) - 1)
    if eps3 <= 0:
        raise ValueError("eps3 is not positive; parameter pathology")
    eps4 = (delta * d0 - 1) / (d0 - 1) * (1 - eps3)
    gamma = 2 * alpha / (d0 * (1 + 0.5 * c * delta))
    log_shrink = math.log(1 - eps3)
    s0 = math.ceil(math.log(eps4 * (delta * d0 - 1) / (d0 - 1)) / log_shrink)
    radius = (d0 - 1) // 2
    ell = max(0, math.ceil(math.log(radius / (gamma * n)) / log_shrink))
    strict = delta * d0 > 3
    if not strict:
        warnings.warn(
            f"delta*d0 = {delta * d0:.4f} <= 3: configuration sits in the gap "
            "between the derivation hypothesis and the full guarantee",
            stacklevel=2,
        )
    return DecoderParams(
        c=c,
        d=d,
        alpha=alpha,
        delta=delta,
        d0=d0,
        n=n,
        t=t,
        eps0=eps0,
        eps1=eps1,
        eps2=eps2,
        eps3=eps3,
        eps4=eps4,
        gamma=gamma,
        s0=s0,
        ell=ell,
        strict_product=strict,
    )


@dataclass
class OpCounters:
    checks: int = 0
    inner_decodes: int = 0
    flips: int = 0

    def total(self) -> int:
        return self.checks + self.inner_decodes + self.flips

    def copy(self) -> OpCounters:
        return OpCounters(self.checks, self.inner_decodes, self.flips)


class DecodeState:
    """Mutable decoding state over an immutable code.

    Invariant at every operation boundary: `unsat` is exactly the set of
    failing constraints for the current word, `targets[u]` is the vote sent by
    constraint u (-1 for none), `votes[v]` counts the votes on variable v, and
    `buckets[m]` holds the variables with exactly m votes. `flip_record` holds
    the coordinates where the word differs from the last committed baseline,
    so the baseline is recoverable by re-flipping it.
    """

    def __init__(self, code: TannerCode, params: DecoderParams, x: BitVector) -> None:
        if x.n != code.n:
            raise ValueError(f"length mismatch: expected {code.n}, got {x.n}")
        if params.n != code.n:
            raise ValueError("params were derived for a different block length")
        self.code = code
        self.params = params
        self.t = params.t
        graph = code.graph
        self._left_adj = graph.left_adj
        self._right_adj = graph.right_adj
        self._leader_for = code.inner.leader_for
        self.x = bytearray(code.n)
        for i in x.indices():
            self.x[i] = 1
        self.unsat: set[int] = set()
        self.targets = [-1] * graph.n_right
        self.votes = [0] * graph.n_left
        self.buckets: list[set[int]] = [set() for _ in range(graph.c + 1)]
        self.senders = 0
        self.flip_record: set[int] = set()
        self.ops = OpCounters()
        for u in range(graph.n_right):
            self._examine(u)

    @property
    def unsat_count(self) -> int:
        return len(self.unsat)

    def x_vector(self) -> BitVector:
        bits = 0
        for i, b in enumerate(self.x):
            if b:
                bits |= 1 << i
        return BitVector(self.code.n, bits)

    def restriction_bits(self, u: int) -> int:
        r = 0
        x = self.x
        for j, v in enumerate(self._right_adj[u]):
            if x[v]:
                r |= 1 << j
        return r

    def _examine(self, u: int) -> None:
        coords = self._right_adj[u]
        r = self.restriction_bits(u)
        ops = self.ops
        ops.checks += 1
        ops.inner_decodes += 1
        leader = self._leader_for(r)
        if leader == 0:
            self.unsat.discard(u)
        else:
            self.unsat.add(u)
        new = -1
        if leader and leader.bit_count() <= self.t:
            new = coords[(leader & -leader).bit_length() - 1]
        old = self.targets[u]
        if new != old:
            if old >= 0:
                self._move_vote(old, -1)
                self.senders -= 1
            if new >= 0:
                self._move_vote(new, +1)
                self.senders += 1
            self.targets[u] = new

    def _move_vote(self, v: int, delta: int) -> None:
        m = self.votes[v]
        if m >= 1:
            self.buckets[m].discard(v)
        m += delta
        self.votes[v] = m
        if m >= 1:
            self.buckets[m].add(v)

    def apply_flips(self, vs) -> list[int]:
        """Flip the given variables and refresh the adjacent constraints."""
        flipped = sorted(vs)
        if not flipped:
            return flipped
        rec = self.flip_record
        dirty: set[int] = set()
        for v in flipped:
            self.x[v] ^= 1
            if v in rec:
                rec.discard(v)
            else:
                rec.add(v)
            dirty.update(self._left_adj[v])
        self.ops.flips += len(flipped)
        for u in sorted(dirty):
            self._examine(u)
        return flipped

    def undo_flips(self, flipped: list[int]) -> None:
        self.apply_flips(flipped)

    def restore_baseline(self) -> None:
        """Rewind the word to the committed baseline recorded in flip_record."""
        self.apply_flips(sorted(self.flip_record))

    def commit(self) -> None:
        """Adopt the current word as the new baseline."""
        self.flip_record.clear()


def easy_flip(state: DecodeState, m: int) -> list[int]:
    """Flip every variable holding exactly m votes; returns the flipped set.

    Votes were established by the state invariant: each constraint whose
    restriction decodes to a codeword at distance 1..t votes for its smallest
    mismatching neighbor. Only constraints adjacent to flipped variables are
    re-examined.
    """
    if not 1 <= m <= state.code.graph.c:
        raise ValueError(f"m must be in [1, {state.code.graph.c}]")
    return state.apply_flips(state.buckets[m])


def deep_flip(state: DecodeState, seq) -> bool:
    """Apply easy_flip per entry of seq with a shrink check after each step.

    Returns False (pruned) as soon as the unsatisfied count exceeds
    (1-eps3)^k * c*gamma*n after step k, True if the whole sequence ran. The
    state keeps the branch-end word either way; callers can rewind via
    restore_baseline().
    """
    params = state.params
    cgn = params.c * params.gamma * params.n
    factor = 1.0
    for m in seq:
        easy_flip(state, m)
        factor *= 1.0 - params.eps3
        if state.unsat_count > factor * cgn:
            return False
    return True


def hard_search(state: DecodeState) -> None:
    """Commit the first flip sequence that cuts the unsatisfied count to
    eps4 * |U|, scanning [c]^s0 in lexicographic order.

    The scan is realized as a backtracking walk with three exact shortcuts:
    a pruned prefix discards every sequence sharing it; sibling digits whose
    vote bucket is empty lead to identical subtrees, so only the first is
    tried; and a node with no pending votes is frozen, so its whole subtree
    is decided by comparing |U| against the final bounds. Raises
    NoAcceptableBranch (state rewound) when the scan exhausts.
    """
    params = state.params
    s0 = params.s0
    c = state.code.graph.c
    accept_limit = params.eps4 * state.unsat_count
    bounds = params.prune_bounds
    buckets = state.buckets

    # frame: [next digit to try, a no-op digit already failed, flips of the
    # edge that entered this node]
    stack: list[list] = [[1, False, []]]
    while stack:
        frame = stack[-1]
        depth = len(stack) - 1
        if depth == s0 or state.senders == 0:
            if state.unsat_count <= accept_limit and (
                depth == s0 or state.unsat_count <= bounds[s0]
            ):
                state.commit()
                return
            stack.pop()
            if frame[2]:
                state.undo_flips(frame[2])
            elif stack:
                stack[-1][1] = True
            continue
        m = frame[0]
        if m > c:
            stack.pop()
            if frame[2]:
                state.undo_flips(frame[2])
            elif stack:
                stack[-1][1] = True
            continue
        frame[0] = m + 1
        if not buckets[m]:
            if frame[1]:
                continue
            if state.unsat_count > bounds[depth + 1]:
                frame[1] = True
                continue
            stack.append([1, False, []])
            continue
        flipped = state.apply_flips(buckets[m])
        if state.unsat_count > bounds[depth + 1]:
            state.undo_flips(flipped)
            continue
        stack.append([1, False, flipped])
    raise NoAcceptableBranch(
        "no flip sequence reached the required reduction; "
        "the corruption likely exceeds the guaranteed radius"
    )


@dataclass
class DecodeReport:
    input_weight: int = 0
    rounds_used: int = 0
    unsat_per_round: list[int] = field(default_factory=list)
    ops: OpCounters = field(default_factory=OpCounters)
    outcome: str = ""

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "input_weight": self.input_weight,
                "rounds_used": self.rounds_used,
                "unsat_per_round": self.unsat_per_round,
                "checks": self.ops.checks,
                "inner_decodes": self.ops.inner_decodes,
                "flips": self.ops.flips,
                "outcome": self.outcome,
            },
            separators=(",", ":"),
        )


def main_decode(
    code: TannerCode,
    params: DecoderParams,
    x: BitVector,
    report: DecodeReport | None = None,
) -> BitVector:
    """Full decode: search rounds until no constraint fails, then one
    ascending-order bounded-distance pass of the inner decoder, then a
    membership check. Raises DecodeFailure when the result is not a codeword.
    """
    state = DecodeState(code, params, x)
    if report is not None:
        report.input_weight = x.weight()
        report.ops = state.ops
        report.unsat_per_round = [state.unsat_count]
        report.outcome = "failed"
    rounds = 0
    try:
        for _ in range(params.ell):
            if state.unsat_count == 0:
                break
            try:
                hard_search(state)
            except NoAcceptableBranch:
                if report is not None:
                    report.outcome = "no_acceptable_branch"
                raise
            rounds += 1
            if report is not None:
                report.unsat_per_round.append(state.unsat_count)
        if state.unsat_count:
            _final_inner_pass(state)
        result = state.x_vector()
        if state.unsat_count or not code.is_codeword(result):
            if report is not None:
                report.outcome = "residual_unsat"
            raise DecodeFailure("output fails the membership check")
        if report is not None:
            report.outcome = "codeword"
        return result
    finally:
        if report is not None:
            report.rounds_used = rounds


def _final_inner_pass(state: DecodeState) -> None:
    """Rewrite each still-unsatisfied restriction with its decoded codeword."""
    inner = state.code.inner
    for u in sorted(state.unsat):
        if u not in state.unsat:
            continue
        r = state.restriction_bits(u)
        state.ops.checks += 1
        state.ops.inner_decodes += 1
        leader = inner.leader_for(r)
        if not leader:
            continue
        coords = state._right_adj[u]
        vs = []
        bits = leader
        while bits:
            low = bits & -bits
            vs.append(coords[low.bit_length() - 1])
            bits ^= low
        state.apply_flips(vs)


@dataclass
class TruthTrace:
    """Ground-truth instrumentation of the current voting state.

    Senders split into those whose inner decode matched the true codeword and
    those that were fooled; bucket m holds the variables with exactly m votes.
    """

    truth: BitVector
    corrupt: frozenset[int]
    correct_senders: frozenset[int]
    confused_senders: frozenset[int]
    flipped_clean: frozenset[int]
    bucket_sizes: tuple[int, ...]
    bucket_corrupt: tuple[int, ...]
    votes_from_correct: tuple[int, ...]

    @property
    def senders(self) -> frozenset[int]:
        return self.correct_senders | self.confused_senders

    def corrupt_fraction(self, m: int) -> float | None:
        if self.bucket_sizes[m] == 0:
            return None
        return self.bucket_corrupt[m] / self.bucket_sizes[m]

    def trusted_vote_fraction(self, m: int) -> float | None:
        if self.bucket_sizes[m] == 0:
            return None
        return self.votes_from_correct[m] / (m * self.bucket_sizes[m])

    def post_flip_corrupt_count(self, m: int) -> int:
        """|F'| if the m-vote bucket were flipped right now."""
        clean_in_bucket = self.bucket_sizes[m] - self.bucket_corrupt[m]
        return len(self.corrupt) - self.bucket_corrupt[m] + clean_in_bucket


def compute_truth_trace(state: DecodeState, truth: BitVector) -> TruthTrace:
    """Classify the current votes against a known transmitted codeword."""
    code = state.code
    if not code.is_codeword(truth):
        raise ValueError("truth must be a codeword")
    corrupt = frozenset(
        v for v in range(code.n) if state.x[v] != truth.bit(v)
    )
    c = code.graph.c
    correct: set[int] = set()
    confused: set[int] = set()
    votes_from_correct = [0] * (c + 1)
    for u in range(code.graph.n_right):
        tgt = state.targets[u]
        if tgt < 0:
            continue
        r = state.restriction_bits(u)
        leader = code.inner.leader_for(r)
        truth_bits = code.restriction(u).extract_bits(truth)
        if r ^ leader == truth_bits:
            correct.add(u)
            votes_from_correct[state.votes[tgt]] += 1
        else:
            confused.add(u)
    sizes = [0] * (c + 1)
    in_corrupt = [0] * (c + 1)
    flipped_clean: set[int] = set()
    for m in range(1, c + 1):
        sizes[m] = len(state.buckets[m])
        for v in state.buckets[m]:
            if v in corrupt:
                in_corrupt[m] += 1
            else:
                flipped_clean.add(v)
    return TruthTrace(
        truth=truth,
        corrupt=corrupt,
        correct_senders=frozenset(correct),
        confused_senders=frozenset(confused),
        flipped_clean=frozenset(flipped_clean),
        bucket_sizes=tuple(sizes),
        bucket_corrupt=tuple(in_corrupt),
        votes_from_correct=tuple(votes_from_correct),
    )


__all__ = [
    "DecodeFailure",
    "NoAcceptableBranch",
    "DecoderParams",
    "derive_params",
    "OpCounters",
    "DecodeState",
    "easy_flip",
    "deep_flip",
    "hard_search",
    "DecodeReport",
    "main_decode",
    "TruthTrace",
    "compute_truth_trace",
]
