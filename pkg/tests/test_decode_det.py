from __future__ import annotations

import json
import math
import random
from collections import Counter

import pytest

import tannerflip as tf
from tannerflip.gf2 import BitVector
from tannerflip.graphs import BipartiteGraph, gen_random_biregular
from tannerflip.inner import parity_check_code, repetition_code
from tannerflip.tanner import TannerCode, corrupt

from conftest import ext_hamming_inner


def blocks_graph(blocks: int, d: int) -> BipartiteGraph:
    return BipartiteGraph(1, d, [[v // d] for v in range(blocks * d)])


class TestDeriveParams:
    def test_k32_schedule(self):
        p = tf.derive_params(c=2, d=3, alpha=1 / 3, delta=1.0, d0=3, n=3)
        assert p.t == 1
        assert p.eps0 == pytest.approx(0.25)
        assert p.gamma == pytest.approx(1 / 9)
        assert p.s0 == 1
        assert p.ell == 0

    def test_large_schedule(self):
        p = tf.derive_params(c=12, d=8, alpha=0.1, delta=0.8, d0=4, n=10**4)
        assert p.t == 1
        assert p.eps0 == pytest.approx(0.3125)
        assert p.gamma == pytest.approx(0.008620689655)

    def test_infeasible(self):
        with pytest.raises(ValueError):
            tf.derive_params(c=2, d=4, alpha=0.25, delta=1.0, d0=2, n=4)

    def test_gap_configuration_warns(self):
        with pytest.warns(UserWarning):
            p = tf.derive_params(c=2, d=3, alpha=1 / 3, delta=1.0, d0=3, n=3)
        assert not p.strict_product
        q = tf.derive_params(c=12, d=8, alpha=0.02, delta=0.8, d0=4, n=2000)
        assert q.strict_product

    def test_invariant_identities(self):
        for args in ((2, 3, 1 / 3, 1.0, 3, 3), (12, 8, 0.02, 0.8, 4, 2000)):
            c, d, alpha, delta, d0, n = args
            p = tf.derive_params(c=c, d=d, alpha=alpha, delta=delta, d0=d0, n=n)
            assert p.t == math.floor(1 / delta)
            assert d0 > 3 / delta - 1 + 2 * p.eps0
            assert math.floor(1 / delta + p.eps0) == p.t
            assert 0 < p.eps1 < p.eps0 * delta**2 / 100
            assert p.eps2 == pytest.approx(
                p.eps1 / (c + 1) * (delta * (p.t + 1) - 1) / p.t
            )
            assert p.eps3 > 0
            assert p.eps4 == pytest.approx(
                (delta * d0 - 1) / (d0 - 1) * (1 - p.eps3)
            )
            assert p.gamma == pytest.approx(2 * alpha / (d0 * (1 + 0.5 * c * delta)))

    def test_eps_overrides_validated(self):
        with pytest.raises(ValueError):
            tf.derive_params(c=2, d=3, alpha=1 / 3, delta=1.0, d0=3, n=3, eps0=2.0)
        with pytest.raises(ValueError):
            tf.derive_params(c=2, d=3, alpha=1 / 3, delta=1.0, d0=3, n=3, eps1=0.1)


def reference_votes(code: TannerCode, params, x: BitVector):
    """Recompute the voting state from definitions via decode_bounded."""
    unsat = code.unsatisfied(x)
    targets = {}
    votes: Counter[int] = Counter()
    for u in range(code.graph.n_right):
        r_bits = code.restriction(u).extract_bits(x)
        decoded = code.inner.decode_bounded(BitVector(code.inner.d, r_bits))
        if decoded is None:
            continue
        mismatch = decoded.bits ^ r_bits
        if not 1 <= mismatch.bit_count() <= params.t:
            continue
        pos = (mismatch & -mismatch).bit_length() - 1
        v = code.graph.right_adj[u][pos]
        targets[u] = v
        votes[v] += 1
    return unsat, targets, votes


def assert_state_consistent(state: tf.DecodeState, code, params):
    unsat, targets, votes = reference_votes(code, params, state.x_vector())
    assert state.unsat == unsat
    assert {u: t for u, t in enumerate(state.targets) if t >= 0} == targets
    assert {v: m for v, m in enumerate(state.votes) if m} == dict(votes)
    for m in range(1, code.graph.c + 1):
        assert state.buckets[m] == {v for v, k in votes.items() if k == m}
    assert state.senders == len(targets)


class TestDecodeState:
    def test_initial_bookkeeping(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        assert st.unsat == {0, 1}
        assert st.targets == [0, 0]
        assert st.votes == [2, 0, 0]
        assert st.buckets[2] == {0}
        assert_state_consistent(st, k32_code, k32_params)

    def test_consistency_random(self, big_code, big_params):
        rng = random.Random(7)
        truth = BitVector.zeros(big_code.n)
        for trial in range(5):
            x = corrupt(truth, rng.randint(0, 40), seed=trial)
            st = tf.DecodeState(big_code, big_params, x)
            assert_state_consistent(st, big_code, big_params)

    def test_consistency_after_flips(self, k32_code, k32_params):
        for bits in range(8):
            st = tf.DecodeState(k32_code, k32_params, BitVector(3, bits))
            for m in (1, 2, 1):
                tf.easy_flip(st, m)
                assert_state_consistent(st, k32_code, k32_params)

    def test_param_length_mismatch(self, k32_code):
        p = tf.derive_params(c=2, d=3, alpha=1 / 3, delta=1.0, d0=3, n=6)
        with pytest.raises(ValueError):
            tf.DecodeState(k32_code, p, BitVector.zeros(3))


class TestEasyFlip:
    def test_flips_double_voted_vertex(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        flipped = tf.easy_flip(st, 2)
        assert flipped == [0]
        assert st.x_vector().to_text() == "000"
        assert st.unsat_count == 0

    def test_empty_bucket_is_noop(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        assert tf.easy_flip(st, 1) == []
        assert st.x_vector().to_text() == "100"

    def test_codeword_untouched(self, k32_code, k32_params):
        for m in (1, 2):
            st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("111"))
            assert tf.easy_flip(st, m) == []
            assert st.x_vector().to_text() == "111"

    def test_output_differs_exactly_on_bucket(self, big_code, big_params):
        truth = BitVector.zeros(big_code.n)
        for trial in range(3):
            x = corrupt(truth, 10, seed=50 + trial)
            st = tf.DecodeState(big_code, big_params, x)
            for m in range(1, big_code.graph.c + 1):
                before = st.x_vector()
                bucket = set(st.buckets[m])
                flipped = set(tf.easy_flip(st, m))
                assert flipped == bucket
                assert set((st.x_vector() ^ before).indices()) == bucket

    def test_m_range(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.zeros(3))
        with pytest.raises(ValueError):
            tf.easy_flip(st, 0)
        with pytest.raises(ValueError):
            tf.easy_flip(st, 3)


class TestDeepFlip:
    def test_good_branch_completes(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        assert tf.deep_flip(st, [2]) is True
        assert st.x_vector().to_text() == "000"
        assert st.unsat_count == 0

    def test_stalled_branch_pruned(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        assert tf.deep_flip(st, [1]) is False

    def test_codeword_never_pruned(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("111"))
        assert tf.deep_flip(st, [1, 2, 1, 2]) is True
        assert st.x_vector().to_text() == "111"

    def test_restoration_exact(self, big_code, big_params):
        truth = BitVector.zeros(big_code.n)
        rng = random.Random(3)
        for trial in range(4):
            x = corrupt(truth, 12, seed=80 + trial)
            st = tf.DecodeState(big_code, big_params, x)
            seq = [rng.randint(1, big_code.graph.c) for _ in range(5)]
            tf.deep_flip(st, seq)
            # the flip record plus the current word recovers the input
            recorded = BitVector.from_indices(big_code.n, st.flip_record)
            assert (st.x_vector() ^ recorded) == x
            st.restore_baseline()
            assert st.x_vector() == x
            assert not st.flip_record
            assert_state_consistent(st, big_code, big_params)


class TestHardSearch:
    def test_k32_accepts_second_branch(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        tf.hard_search(st)
        assert st.x_vector().to_text() == "000"
        assert not st.flip_record  # committed

    def test_codeword_accepts_immediately(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("111"))
        tf.hard_search(st)
        assert st.x_vector().to_text() == "111"

    def test_accepted_branch_meets_reduction(self, big_code, big_params):
        truth = BitVector.zeros(big_code.n)
        for trial in range(5):
            x = corrupt(truth, 3, seed=200 + trial)
            st = tf.DecodeState(big_code, big_params, x)
            u0 = st.unsat_count
            tf.hard_search(st)
            assert st.unsat_count <= big_params.eps4 * u0

    def test_corruption_shrinks_within_radius(self, big_code, big_params):
        # decoding-radius inputs must lose a (1-eps3) fraction of corruptions
        truth = BitVector.zeros(big_code.n)
        radius = math.floor(big_params.gamma * big_code.n)
        for trial in range(10):
            x = corrupt(truth, radius, seed=300 + trial)
            st = tf.DecodeState(big_code, big_params, x)
            tf.hard_search(st)
            residual = (st.x_vector() ^ truth).weight()
            assert residual <= (1 - big_params.eps3) * radius

    def test_exhaustion_raises_and_restores(self):
        code = TannerCode(blocks_graph(1, 8), ext_hamming_inner())
        params = tf.derive_params(c=1, d=8, alpha=0.5, delta=1.0, d0=4, n=8)
        x = BitVector.from_text("11000000")  # two errors: beyond the inner radius
        st = tf.DecodeState(code, params, x)
        with pytest.raises(tf.NoAcceptableBranch):
            tf.hard_search(st)
        assert st.x_vector() == x


class TestMainDecode:
    def test_corrects_single_error(self, k32_code, k32_params):
        out = tf.main_decode(k32_code, k32_params, BitVector.from_text("100"))
        assert out.to_text() == "000"

    def test_codeword_fixed(self, k32_code, k32_params):
        out = tf.main_decode(k32_code, k32_params, BitVector.from_text("111"))
        assert out.to_text() == "111"

    def test_decodes_toward_nearest(self, k32_code, k32_params):
        out = tf.main_decode(k32_code, k32_params, BitVector.from_text("011"))
        assert out.to_text() == "111"

    def test_all_single_errors(self, k32_code, k32_params):
        for y in ("000", "111"):
            truth = BitVector.from_text(y)
            for i in range(3):
                x = truth ^ BitVector.from_indices(3, [i])
                assert tf.main_decode(k32_code, k32_params, x) == truth

    def test_failure_raises(self):
        code = TannerCode(blocks_graph(1, 8), ext_hamming_inner())
        params = tf.derive_params(c=1, d=8, alpha=0.5, delta=1.0, d0=4, n=8)
        with pytest.raises(tf.DecodeFailure):
            tf.main_decode(code, params, BitVector.from_text("11000000"))

    def test_no_acceptable_branch_propagates(self):
        code = TannerCode(blocks_graph(6, 8), ext_hamming_inner())
        params = tf.derive_params(c=1, d=8, alpha=0.5, delta=1.0, d0=4, n=48)
        assert params.ell >= 1
        x = BitVector.from_indices(48, [0, 1])  # two errors in one block
        with pytest.raises(tf.NoAcceptableBranch):
            tf.main_decode(code, params, x)

    def test_final_pass_handles_scattered_residue(self):
        # one error per block stays below the inner radius everywhere, so the
        # closing pass alone finishes the job even with zero search rounds
        code = TannerCode(blocks_graph(4, 8), ext_hamming_inner())
        params = tf.derive_params(c=1, d=8, alpha=0.25, delta=1.0, d0=4, n=32)
        x = BitVector.from_indices(32, [0, 9, 17, 30])
        assert tf.main_decode(code, params, x) == BitVector.zeros(32)

    def test_report_fields(self, k32_code, k32_params):
        report = tf.DecodeReport()
        tf.main_decode(k32_code, k32_params, BitVector.from_text("100"), report=report)
        assert report.outcome == "codeword"
        assert report.input_weight == 1
        assert report.unsat_per_round[0] == 2
        assert report.ops.total() > 0
        payload = json.loads(report.to_json_line())
        assert payload["outcome"] == "codeword"
        assert payload["inner_decodes"] == report.ops.inner_decodes

    def test_decode_at_radius_big(self, big_code, big_params):
        truth = BitVector.zeros(big_code.n)
        radius = math.floor(big_params.gamma * big_code.n)
        for trial in range(10):
            x = corrupt(truth, radius, seed=400 + trial)
            assert tf.main_decode(big_code, big_params, x) == truth


class TestTruthTrace:
    def test_k32_example(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        trace = tf.compute_truth_trace(st, BitVector.from_text("000"))
        assert trace.corrupt == {0}
        assert trace.correct_senders == {0, 1}
        assert trace.confused_senders == set()
        assert trace.bucket_sizes[2] == 1
        assert trace.corrupt_fraction(2) == 1.0
        assert trace.trusted_vote_fraction(2) == 1.0

    def test_clean_word_trivial(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("111"))
        trace = tf.compute_truth_trace(st, BitVector.from_text("111"))
        assert not trace.corrupt and not trace.senders
        assert all(s == 0 for s in trace.bucket_sizes)

    def test_requires_codeword(self, k32_code, k32_params):
        st = tf.DecodeState(k32_code, k32_params, BitVector.from_text("100"))
        with pytest.raises(ValueError):
            tf.compute_truth_trace(st, BitVector.from_text("110"))

    def test_vote_count_identity(self, big_code, big_params):
        truth = BitVector.zeros(big_code.n)
        c = big_code.graph.c
        for trial in range(5):
            x = corrupt(truth, 15, seed=500 + trial)
            st = tf.DecodeState(big_code, big_params, x)
            trace = tf.compute_truth_trace(st, truth)
            total_votes = sum(m * trace.bucket_sizes[m] for m in range(1, c + 1))
            assert total_votes == len(trace.senders)

    def test_correct_senders_are_lightly_hit_constraints(self, big_code, big_params):
        # a constraint votes correctly exactly when it sees 1..t corruptions
        truth = BitVector.zeros(big_code.n)
        t = big_params.t
        for trial in range(4):
            x = corrupt(truth, 20, seed=550 + trial)
            corrupted = set(x.indices())
            st = tf.DecodeState(big_code, big_params, x)
            trace = tf.compute_truth_trace(st, truth)
            lightly_hit = {
                u
                for u, nb in enumerate(big_code.graph.right_adj)
                if 1 <= sum(v in corrupted for v in nb) <= t
            }
            assert trace.correct_senders == lightly_hit

    def test_post_flip_count_matches_reality(self, big_code, big_params):
        truth = BitVector.zeros(big_code.n)
        x = corrupt(truth, 12, seed=600)
        for m in range(1, big_code.graph.c + 1):
            st = tf.DecodeState(big_code, big_params, x)
            trace = tf.compute_truth_trace(st, truth)
            predicted = trace.post_flip_corrupt_count(m)
            tf.easy_flip(st, m)
            assert (st.x_vector() ^ truth).weight() == predicted


def test_safety_bound_for_arbitrary_flips(big_code, big_params):
    """Any single voting round can grow the corruption only by the bounded
    factor 1 + c/(d0 - t)."""
    truth = BitVector.zeros(big_code.n)
    cap = 1 + big_code.graph.c / (big_params.d0 - big_params.t)
    rng = random.Random(11)
    for trial in range(5):
        weight = rng.randint(1, 60)
        x = corrupt(truth, weight, seed=700 + trial)
        st = tf.DecodeState(big_code, big_params, x)
        for m in range(1, big_code.graph.c + 1):
            st2 = tf.DecodeState(big_code, big_params, x)
            tf.easy_flip(st2, m)
            after = (st2.x_vector() ^ truth).weight()
            assert after <= cap * weight
