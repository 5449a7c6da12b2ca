"""
Iterative Dither-Beat Cancellation

Each pass recovers E_s' by KK from the working current, searches every tone
in ascending frequency, scales each estimate by alpha and rebuilds the whole
correction against the original photocurrent. A tone's correction from the
previous pass is kept unless the new estimate scores strictly better, so the
objective (bit errors, then MSE) never rises from one pass to the next.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from .distortion import (
    MultiplicationCounter,
    compute_alpha,
    estimate_dither_amplitude,
    reconstruct_distortion,
)
from .search import CandidateScore, CandidateScorer, grid_search_tone
from .settings import DsbicConfig
from ..channel.fiber import FiberConfig
from ..kk.kk import KkConfig, band_limit
from ..kk.receiver import KkReceiver
from ..metrics.scoring import compute_ber
from ..sigproc.signals import ComplexSignal, RealSignal
from ..txchain.dither import DitherTone
from ..txchain.ofdm import OfdmConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ToneEstimate:
    """
    Attributes:
        frequency: Tone frequency in Hz
        amplitude: Grid amplitude m' (fraction of E0)
        phase: Grid angle theta in rad
        m_hat: Second-harmonic amplitude estimate (fraction of E0), None in
            grid-only mode
        alpha: Scale applied to the reconstructed distortion
    """

    frequency: float
    amplitude: float
    phase: float
    m_hat: Optional[float]
    alpha: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'frequency': self.frequency,
            'amplitude': self.amplitude,
            'phase': self.phase,
            'm_hat': self.m_hat,
            'alpha': self.alpha,
        }


@dataclass(frozen=True)
class IterationRecord:
    """
    Diagnostics of one pass; iteration 0 is the uncorrected baseline.

    Attributes:
        iteration: Pass number
        tones: Per-tone estimates (empty for the baseline)
        objective: Objective MSE of the corrected current
        bit_errors: Payload bit errors when truth is known
        ber: Payload BER when truth is known
    """

    iteration: int
    tones: List[ToneEstimate]
    objective: float
    bit_errors: Optional[int] = None
    ber: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'iteration': self.iteration,
            'tones': [tone.to_dict() for tone in self.tones],
            'objective': self.objective,
            'bit_errors': self.bit_errors,
            'ber': self.ber,
        }


@dataclass(frozen=True, eq=False)
class DsbicReport:
    """
    Attributes:
        baseline: Plain-KK record (iteration 0)
        iterations: One record per pass
        corrected_current: Original current minus the final correction
        field: KK output of the corrected current (before CD compensation)
        carrier_amplitude: E0 estimate used throughout
        multiplications: Tallied grid-search multiplications
    """

    baseline: IterationRecord
    iterations: List[IterationRecord]
    corrected_current: RealSignal
    field: ComplexSignal
    carrier_amplitude: float
    multiplications: int = 0

    def __len__(self) -> int:
        return len(self.iterations)

    @property
    def final(self) -> IterationRecord:
        return self.iterations[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'baseline': self.baseline.to_dict(),
            'iterations': [record.to_dict() for record in self.iterations],
            'carrier_amplitude': self.carrier_amplitude,
            'multiplications': self.multiplications,
        }


def _record(
    iteration: int,
    tones: List[ToneEstimate],
    score: CandidateScore,
    scorer: CandidateScorer,
    es_prime: ComplexSignal,
) -> IterationRecord:
    bit_errors = ber = None
    if scorer.truth_bits is not None:
        rx_bits = scorer.receiver.decide(scorer.receiver.demodulate(es_prime))
        report = compute_ber(scorer.truth_bits, rx_bits)
        bit_errors, ber = report.bit_errors, report.ber
    return IterationRecord(iteration, tones, score.mse, bit_errors, ber)


def dsbic_iterate(
    current: RealSignal,
    cfg: DsbicConfig,
    kk_cfg: KkConfig,
    ofdm_cfg: OfdmConfig,
    truth: Optional[np.ndarray] = None,
    fiber: Optional[FiberConfig] = None,
    counter: Optional[MultiplicationCounter] = None,
) -> DsbicReport:
    """
    Run the cancellation loop on one photocurrent.

    Args:
        current: Received photocurrent I'
        cfg: DSBIC settings
        kk_cfg: KK settings
        ofdm_cfg: Frame layout
        truth: Known payload bits (training objective and BER diagnostics)
        fiber: Span compensated after KK, or None for back-to-back
        counter: Multiplication tally shared with the caller

    Returns:
        DsbicReport with one record per iteration
    """
    counter = counter if counter is not None else MultiplicationCounter()
    receiver = KkReceiver(ofdm_cfg, kk_cfg, fiber)
    carrier = receiver.estimate_carrier(current)
    scorer = CandidateScorer(
        receiver,
        carrier,
        objective=cfg.objective,
        scope=cfg.objective_scope,
        truth_bits=truth,
    )
    frequencies = sorted(cfg.tone_frequencies)

    es_prime = receiver.recover_field(current, carrier)
    baseline = _record(0, [], scorer.score_field(es_prime), scorer, es_prime)
    logger.info(f"DSBIC baseline: objective={baseline.objective:.4g}, ber={baseline.ber}")

    original = current.samples
    previous = {f: np.zeros_like(original) for f in frequencies}
    previous_estimates = {f: ToneEstimate(f, 0.0, 0.0, None, 1.0) for f in frequencies}
    working = current
    records = []

    for iteration in range(1, cfg.iterations + 1):
        es_prime = receiver.recover_field(working, carrier)
        es_band = band_limit(es_prime, ofdm_cfg)
        es_ref = es_band if cfg.band_limit else es_prime
        residual = current.with_samples(
            original - (np.abs(carrier.amplitude + es_band.samples) ** 2)
        )

        corrections = {}
        estimates = []
        for frequency in frequencies:
            others = sum(
                corrections.get(f, previous[f]) for f in frequencies if f != frequency
            )
            base = current.with_samples(original - others)
            result = grid_search_tone(
                base, carrier, es_ref, frequency, cfg.grid, scorer, cfg.workers, counter
            )

            m_hat = None
            alpha = 1.0
            if cfg.alpha_mode == 'cross_correlation' and carrier.amplitude > 0:
                companions = [f for f in frequencies if f != frequency]
                m_field = estimate_dither_amplitude(residual, frequency, companions)
                m_hat = m_field / carrier.amplitude
                if result.amplitude > 0:
                    alpha = compute_alpha(m_hat, result.amplitude)
                else:
                    logger.debug(f"Tone {frequency / 1e6:.3f} MHz: m'=0, alpha left at 1")

            tone = DitherTone(result.amplitude, frequency, result.angle)
            distortion = reconstruct_distortion(es_ref, carrier, tone).samples
            chosen = result.score
            if alpha != 1.0:
                scaled = scorer.score(base.with_samples(base.samples - alpha * distortion))
                if scaled.key() > result.score.key():
                    logger.info(
                        f"Tone {frequency / 1e6:.3f} MHz: alpha={alpha:.3f} scores worse "
                        f"than the grid estimate, using alpha=1"
                    )
                    alpha = 1.0
                else:
                    chosen = scaled
            correction = alpha * distortion
            estimate = ToneEstimate(frequency, result.amplitude, result.angle, m_hat, alpha)

            # The last pass's correction stays unless the new one scores better
            incumbent = scorer.score(base.with_samples(base.samples - previous[frequency]))
            if incumbent.key() < chosen.key():
                logger.debug(
                    f"Tone {frequency / 1e6:.3f} MHz: previous correction kept "
                    f"(mse {incumbent.mse:.4g} < {chosen.mse:.4g})"
                )
                correction = previous[frequency]
                estimate = previous_estimates[frequency]
            corrections[frequency] = correction
            estimates.append(estimate)

        previous = corrections
        previous_estimates = {estimate.frequency: estimate for estimate in estimates}
        working = current.with_samples(original - sum(corrections.values()))
        es_working = receiver.recover_field(working, carrier)
        record = _record(
            iteration, estimates, scorer.score_field(es_working), scorer, es_working
        )
        records.append(record)
        logger.info(
            f"DSBIC iteration {iteration}/{cfg.iterations}: "
            f"objective={record.objective:.4g}, ber={record.ber}"
        )

    return DsbicReport(
        baseline=baseline,
        iterations=records,
        corrected_current=working,
        field=es_working,
        carrier_amplitude=carrier.amplitude,
        multiplications=counter.total,
    )
