"""Seeded experiment sweeps: corrupt, decode, score, report.

Every trial is a pure function of (root seed, weight, trial index), so sweep
reports are bitwise reproducible. Trials may run in worker processes when
TANNER_THREADS asks for more than one; rows are merged by (weight, trial)
regardless of completion order.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .gf2 import BitVector
from .decode_det import DecodeFailure, DecodeReport, DecoderParams, main_decode
from .decode_rand import (
    RandDecodeConfig,
    RandDecodeReport,
    RandomizedAbort,
    randomized_decode,
)
from .tanner import TannerCode, corrupt

CSV_HEADER = (
    "sweep v1,weight,trial,seed,success,dist_to_truth,rounds,rand_iters,"
    "checks,inner_decodes,flips,wall_ms,outcome"
)


def derive_seed(root: int, *parts: int) -> int:
    """Stable 63-bit seed from a root seed and integer tags."""
    data = b"".join(p.to_bytes(8, "little", signed=True) for p in parts)
    h = hashlib.blake2b(
        data, digest_size=8, key=(root & (2**64 - 1)).to_bytes(8, "little")
    )
    return int.from_bytes(h.digest(), "little") >> 1


@dataclass(frozen=True)
class ExperimentConfig:
    weights: tuple[int, ...]
    trials: int
    decoder: str = "det"  # "det" | "rand"
    seed: int = 0
    zero_codeword: bool = False
    rand_eps: float | None = None
    rand_max_iters: int | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if self.decoder not in ("det", "rand"):
            raise ValueError("decoder must be 'det' or 'rand'")


@dataclass(frozen=True)
class SweepRow:
    weight: int
    trial: int
    seed: int
    success: bool
    dist_to_truth: int
    rounds: int
    rand_iters: int
    checks: int
    inner_decodes: int
    flips: int
    wall_ms: float
    outcome: str

    def to_csv(self) -> str:
        return (
            f"{self.weight},{self.trial},{self.seed},{int(self.success)},"
            f"{self.dist_to_truth},{self.rounds},{self.rand_iters},"
            f"{self.checks},{self.inner_decodes},{self.flips},"
            f"{self.wall_ms:.3f},{self.outcome}"
        )

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "trial": self.trial,
            "seed": self.seed,
            "success": self.success,
            "dist_to_truth": self.dist_to_truth,
            "rounds": self.rounds,
            "rand_iters": self.rand_iters,
            "checks": self.checks,
            "inner_decodes": self.inner_decodes,
            "flips": self.flips,
            "wall_ms": self.wall_ms,
            "outcome": self.outcome,
        }


@dataclass
class SweepReport:
    rows: list[SweepRow] = field(default_factory=list)

    def success_rate(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r.success for r in self.rows) / len(self.rows)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(r.to_csv() for r in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps([r.to_dict() for r in self.rows], separators=(",", ":"))


def _sample_truth(code: TannerCode, config: ExperimentConfig, trial_seed: int) -> BitVector:
    if config.zero_codeword or code.dim == 0:
        return BitVector.zeros(code.n)
    rng = random.Random(derive_seed(trial_seed, 1))
    msg = BitVector(code.dim, rng.getrandbits(code.dim))
    return code.encode(msg)


def run_trial(
    code: TannerCode,
    params: DecoderParams,
    config: ExperimentConfig,
    weight: int,
    trial: int,
) -> SweepRow:
    trial_seed = derive_seed(config.seed, weight, trial)
    truth = _sample_truth(code, config, trial_seed)
    received = corrupt(truth, weight, derive_seed(trial_seed, 2))
    det_report = DecodeReport()
    rand_report = None
    outcome = ""
    start = time.monotonic()
    result = None
    try:
        if config.decoder == "det":
            result = main_decode(code, params, received, report=det_report)
        else:
            rand_report = RandDecodeReport(main=det_report)
            rand_config = RandDecodeConfig.for_params(
                params,
                seed=derive_seed(trial_seed, 3),
                eps=config.rand_eps,
                max_iters=config.rand_max_iters,
            )
            result = randomized_decode(
                code, params, rand_config, received, report=rand_report
            )
        outcome = "ok" if result == truth else "wrong_codeword"
    except RandomizedAbort:
        outcome = "abort"
    except DecodeFailure:
        outcome = det_report.outcome or "decode_failure"
    # stored at CSV precision; timing is diagnostic only, counters are the signal
    wall_ms = round((time.monotonic() - start) * 1000.0, 3)
    ops = det_report.ops
    return SweepRow(
        weight=weight,
        trial=trial,
        seed=trial_seed,
        success=result == truth,
        dist_to_truth=result.distance(truth) if result is not None else -1,
        rounds=det_report.rounds_used,
        rand_iters=rand_report.iterations if rand_report is not None else 0,
        checks=ops.checks,
        inner_decodes=ops.inner_decodes,
        flips=ops.flips,
        wall_ms=wall_ms,
        outcome=outcome,
    )


def _worker(args) -> SweepRow:
    code, params, config, weight, trial = args
    return run_trial(code, params, config, weight, trial)


def run_sweep(
    code: TannerCode, params: DecoderParams, config: ExperimentConfig
) -> SweepReport:
    jobs = [
        (code, params, config, weight, trial)
        for weight in config.weights
        for trial in range(config.trials)
    ]
    threads = int(os.environ.get("TANNER_THREADS", "1"))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_worker, jobs, chunksize=8))
    else:
        rows = [_worker(job) for job in jobs]
    rows.sort(key=lambda r: (r.weight, r.trial))
    return SweepReport(rows=rows)


def parse_csv(text: str) -> SweepReport:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("missing or unknown sweep header")
    rows = []
    for ln in lines[1:]:
        f = ln.split(",")
        rows.append(
            SweepRow(
                weight=int(f[0]),
                trial=int(f[1]),
                seed=int(f[2]),
                success=bool(int(f[3])),
                dist_to_truth=int(f[4]),
                rounds=int(f[5]),
                rand_iters=int(f[6]),
                checks=int(f[7]),
                inner_decodes=int(f[8]),
                flips=int(f[9]),
                wall_ms=float(f[10]),
                outcome=f[11],
            )
        )
    return SweepReport(rows=rows)


__all__ = [
    "ExperimentConfig",
    "SweepRow",
    "SweepReport",
    "run_trial",
    "run_sweep",
    "parse_csv",
    "derive_seed",
    "CSV_HEADER",
]
