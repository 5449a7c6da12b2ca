"""
Blind Grid Search

Scores every (amplitude, angle) candidate of a tone by subtracting its
reconstructed distortion, re-running the KK receiver and measuring the
objective; the best candidate wins under a total order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .distortion import MultiplicationCounter, reconstruct_distortion
from .settings import ToneGrid
from ..kk.kk import CarrierEstimate
from ..kk.receiver import KkReceiver
from ..sigproc.signals import ComplexSignal, RealSignal
from ..txchain.dither import DitherTone
from ..txchain.qam import qam16_levels, qam16_map
from ..utils.config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateScore:
    """
    Attributes:
        mse: Mean squared symbol error of the objective
        bit_errors: Payload bit errors, None for blind objectives
    """

    mse: float
    bit_errors: Optional[int] = None

    def key(self) -> Tuple[int, float]:
        return (self.bit_errors or 0, self.mse)


@dataclass(frozen=True)
class ScoredCandidate:
    amplitude: float
    angle: float
    score: CandidateScore

    def rank(self) -> Tuple[int, float, float, float]:
        """Sort key: bit errors, MSE, then the smaller amplitude and angle."""
        return self.score.key() + (self.amplitude, self.angle)


@dataclass(frozen=True)
class ToneSearchResult:
    """
    Outcome of one exhaustive search.

    Attributes:
        frequency: Tone frequency in Hz
        amplitude: Best amplitude m' (fraction of E0)
        angle: Best angle in rad
        score: Objective at the best candidate
        table: Every candidate in grid order
    """

    frequency: float
    amplitude: float
    angle: float
    score: CandidateScore
    table: List[ScoredCandidate] = field(default_factory=list)

    @property
    def objective_value(self) -> float:
        return self.score.mse


class CandidateScorer:
    """Runs the KK receiver on a corrected current and scores the result."""

    def __init__(
        self,
        receiver: KkReceiver,
        carrier: CarrierEstimate,
        objective: str = 'training_error',
        scope: str = 'payload',
        truth_bits: Optional[np.ndarray] = None,
    ):
        """
        Initialize the scorer.

        Args:
            receiver: Receiver used for every candidate
            carrier: Carrier amplitude held fixed across candidates
            objective: 'training_error' or 'decision_error'
            scope: 'payload' or 'pilots'
            truth_bits: Known payload bits for 'training_error'
        """
        self.receiver = receiver
        self.carrier = carrier
        self.scope = scope
        self.truth_bits = None
        self.truth_symbols = None

        cfg = receiver.ofdm_cfg
        if scope == 'pilots' and cfg.pilot_every is None:
            raise ValueError("objective_scope: 'pilots' needs ofdm.pilot_every to be set")

        if objective == 'training_error' and scope == 'payload' and truth_bits is None:
            logger.warning("Training objective requested without truth bits; using decision error")
            objective = 'decision_error'
        if objective == 'training_error' and truth_bits is not None:
            self.truth_bits = np.asarray(truth_bits, dtype=np.uint8).reshape(-1)
            self.truth_symbols = qam16_map(self.truth_bits).reshape(-1, cfg.n_data_bins)
        self.objective = objective

    def score_field(self, es_prime: ComplexSignal) -> CandidateScore:
        cfg = self.receiver.ofdm_cfg
        grid = self.receiver.equalized_grid(es_prime)

        if self.scope == 'pilots':
            pilots = grid[:, cfg.pilot_positions]
            return CandidateScore(float(np.mean(np.abs(pilots - Config.PILOT_SYMBOL) ** 2)))

        symbols = grid[:, cfg.data_positions]
        if self.objective == 'training_error':
            if symbols.shape != self.truth_symbols.shape:
                raise ValueError(
                    f"truth_bits: {self.truth_symbols.shape[0]} payload symbols expected, "
                    f"field carries {symbols.shape[0]}"
                )
            mse = float(np.mean(np.abs(symbols - self.truth_symbols) ** 2))
            errors = int(np.count_nonzero(self.receiver.decide(symbols) != self.truth_bits))
            return CandidateScore(mse, errors)

        decisions = qam16_levels(symbols).reshape(symbols.shape)
        return CandidateScore(float(np.mean(np.abs(symbols - decisions) ** 2)))

    def score(
        self, current: RealSignal, counter: Optional[MultiplicationCounter] = None
    ) -> CandidateScore:
        """
        Score a corrected current.

        When counter is given, one error calculation is charged at n^2
        multiplications for a record of n samples.
        """
        result = self.score_field(self.receiver.recover_field(current, self.carrier))
        if counter is not None:
            counter.add(len(current) ** 2)
        return result


def grid_search_tone(
    current: RealSignal,
    carrier: CarrierEstimate,
    es_prime: ComplexSignal,
    frequency: float,
    grid: ToneGrid,
    scorer: CandidateScorer,
    workers: int = 1,
    counter: Optional[MultiplicationCounter] = None,
) -> ToneSearchResult:
    """
    Exhaustive search of one tone's amplitude and angle.

    Every candidate's distortion is built from es_prime, subtracted from
    current and scored. Ties resolve to the smaller amplitude, then the
    smaller angle, so the result does not depend on evaluation order.

    Args:
        current: Photocurrent to correct
        carrier: Carrier estimate
        es_prime: Field the distortion is reconstructed from
        frequency: Tone frequency in Hz
        grid: Candidate grid
        scorer: Objective
        workers: Threads evaluating candidates
        counter: Multiplication tally (4n per construction, n^2 per scoring)

    Returns:
        ToneSearchResult with the full score table
    """
    def evaluate(candidate: Tuple[float, float]) -> ScoredCandidate:
        amplitude, angle = candidate
        tone = DitherTone(amplitude, frequency, angle)
        distortion = reconstruct_distortion(es_prime, carrier, tone, counter=counter)
        trial = current.with_samples(current.samples - distortion.samples)
        score = scorer.score(trial, counter=counter)
        return ScoredCandidate(amplitude, angle, score)

    candidates = grid.candidates()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            table = list(executor.map(evaluate, candidates))
    else:
        table = [evaluate(c) for c in candidates]

    best = min(table, key=ScoredCandidate.rank)
    logger.debug(
        f"Tone {frequency / 1e6:.3f} MHz: m'={best.amplitude:.3f}, "
        f"theta={best.angle:.3f} rad, errors={best.score.bit_errors}, mse={best.score.mse:.4g}"
    )
    return ToneSearchResult(
        frequency=frequency,
        amplitude=best.amplitude,
        angle=best.angle,
        score=best.score,
        table=table,
    )
