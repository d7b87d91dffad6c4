"""Brute-force blind demodulation by a passive eavesdropper.

The eavesdropper knows N, the waveform family and the channel (so it holds
an equalized frame ``x_hat``), but not the modulation parameters. It walks a
candidate set, demodulates with each candidate and keeps the best score.
"""

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import analytics, core
from .constellation import bit_errors
from .waveform import AFDM, OTFS, OtfsParams, afdm_fast_demod, default_cache, demodulate

__all__ = [
    "CandidateSet",
    "otfs_candidates",
    "afdm_candidates",
    "sample_candidates",
    "attempt_demod",
    "GroundTruthBER",
    "BlindFourthPower",
    "score_candidate",
    "Attempt",
    "AttackResult",
    "bruteforce",
]


@dataclass(frozen=True)
class CandidateSet:
    """Ordered parameter guesses: ``(K', L')`` for OTFS, ``(c1', c2')`` for AFDM."""

    waveform: str
    n: int
    candidates: tuple
    generation_meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.candidates)

    def subset(self, indices) -> "CandidateSet":
        picked = tuple(self.candidates[i] for i in indices)
        meta = dict(self.generation_meta, subset=[int(i) for i in indices])
        return CandidateSet(self.waveform, self.n, picked, meta)


def otfs_candidates(n: int) -> CandidateSet:
    """One ``(K', N/K')`` per divisor K' of ``n``, ascending in K'."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    pairs = tuple((k, n // k) for k in core.divisors(n))
    return CandidateSet(OTFS, n, pairs, {"n": n})


def afdm_candidates(
    theta_max: float, d_upper: float, n: int, epsilon: float = 1.0, c2: float = 0.0
) -> CandidateSet:
    """Grid ``c1' = theta_max/n + i*step`` over ``[theta_max/n, D]``.

    ``step = eps / (pi*(n-1)**2)``. ``c2`` is the pre-chirp assumed known to
    the eavesdropper and is carried along in every candidate.
    """
    count = analytics.afdm_grid_count(n, theta_max, d_upper, epsilon)
    step = analytics.afdm_step(n, epsilon)
    start = theta_max / n
    c1 = start + step * np.arange(count)
    pairs = tuple((float(c), float(c2)) for c in c1)
    meta = {"theta_max": theta_max, "d_upper": d_upper, "epsilon": epsilon, "step": step}
    return CandidateSet(AFDM, n, pairs, meta)


def sample_candidates(cset: CandidateSet, budget: int, rng, exclude_near=None) -> CandidateSet:
    """Draw ``budget`` distinct candidates uniformly at random.

    On the AFDM grid distinct points are at least one step (``2*delta1``)
    apart. ``exclude_near`` drops AFDM candidates within one step of that
    c1 value before sampling.
    """
    pool = np.arange(len(cset))
    if exclude_near is not None:
        if cset.waveform != AFDM:
            raise ValueError("exclude_near only applies to AFDM candidate sets")
        c1 = np.array([c[0] for c in cset.candidates])
        pool = pool[np.abs(c1 - exclude_near) >= cset.generation_meta["step"]]
    if budget >= len(pool):
        return cset.subset(pool)
    picked = np.sort(rng.choice(pool, size=budget, replace=False))
    return cset.subset(picked)


def attempt_demod(y_equalized, candidate, waveform: str) -> np.ndarray:
    """Demodulate with one candidate parameter point."""
    if waveform == OTFS:
        k, l = candidate
        p = default_cache.get(OTFS, OtfsParams(k * l, k, l))
        return demodulate(y_equalized, p)
    if waveform == AFDM:
        c1p, c2p = candidate
        return afdm_fast_demod(y_equalized, c1p, c2p)
    raise ValueError(f"unknown waveform {waveform!r}")


class GroundTruthBER:
    """Score = bit error rate against the transmitted bits (a simulation privilege)."""

    name = "ground_truth_ber"

    def __init__(self, bits):
        self.bits = np.asarray(bits)

    def __call__(self, d_hat) -> float:
        return float(bit_errors(d_hat, self.bits)) / self.bits.shape[-1]


class BlindFourthPower:
    """Score = ``1 - |mean(d**4)| / mean(|d|**4)``.

    A clean QPSK cloud has all fourth powers equal to -1 and scores 0; a
    uniform-phase cloud scores close to 1.
    """

    name = "blind_fourth_power"

    def __call__(self, d_hat) -> float:
        d4 = np.asarray(d_hat) ** 4
        denom = np.mean(np.abs(d4))
        if denom == 0:
            return 1.0
        return float(1.0 - abs(np.mean(d4)) / denom)


def score_candidate(d_hat, mode) -> float:
    return mode(d_hat)


@dataclass(frozen=True)
class Attempt:
    candidate: tuple
    score: float
    ber_vs_truth: Optional[float] = None


@dataclass
class AttackResult:
    waveform: str
    attempts: list
    winner: int
    attempts_used: int
    succeeded: bool
    total_candidates: int

    @property
    def best(self) -> Attempt:
        return self.attempts[self.winner]

    def to_dict(self) -> dict:
        return {
            "waveform": self.waveform,
            "winner": self.winner,
            "winner_candidate": list(self.best.candidate),
            "winner_score": self.best.score,
            "attempts_used": self.attempts_used,
            "total_candidates": self.total_candidates,
            "succeeded": self.succeeded,
            "attempts": [
                {
                    "candidate": list(a.candidate),
                    "score": a.score,
                    "ber_vs_truth": a.ber_vs_truth,
                }
                for a in self.attempts
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_csv(self) -> str:
        """Two columns: the swept parameter (K' or c1') and the score."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k_prime" if self.waveform == OTFS else "c1_prime", "score"])
        for a in self.attempts:
            writer.writerow([repr(a.candidate[0]), repr(a.score)])
        return buf.getvalue()


def bruteforce(
    y_equalized,
    candidates: CandidateSet,
    scoring,
    early_stop_threshold: Optional[float] = None,
    success_threshold: float = 0.1,
    truth_bits=None,
    workers: int = 1,
) -> AttackResult:
    """Try candidates in order and keep the lowest score.

    With ``early_stop_threshold`` the search stops at the first candidate
    scoring at or below it, and success means reaching it. Otherwise every
    candidate is scored and success means the winner scores at most
    ``success_threshold``. Ties go to the earliest candidate. When
    ``truth_bits`` is given, each attempt also records its true BER.
    """
    if len(candidates) == 0:
        raise ValueError("candidate set is empty")
    wf = candidates.waveform
    truth = GroundTruthBER(truth_bits) if truth_bits is not None else None

    def evaluate(cand):
        d_hat = attempt_demod(y_equalized, cand, wf)
        ber = truth(d_hat) if truth is not None else None
        return Attempt(tuple(cand), score_candidate(d_hat, scoring), ber)

    attempts = []
    if early_stop_threshold is None and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            attempts = list(pool.map(evaluate, candidates.candidates))
    else:
        for cand in candidates.candidates:
            attempts.append(evaluate(cand))
            if early_stop_threshold is not None and attempts[-1].score <= early_stop_threshold:
                break

    scores = [a.score for a in attempts]
    winner = int(np.argmin(scores))
    threshold = success_threshold if early_stop_threshold is None else early_stop_threshold
    return AttackResult(
        wf, attempts, winner, len(attempts), scores[winner] <= threshold, len(candidates)
    )
