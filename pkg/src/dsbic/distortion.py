"""
Dither-Beat Distortion

Reconstruction of the carrier-dither and signal-dither beat terms, the
second-harmonic amplitude estimator behind alpha, and multiplication
accounting for the grid search.
"""

import threading
from typing import Iterable, Optional

import numpy as np

from .settings import DsbicConfig
from ..kk.kk import CarrierEstimate
from ..sigproc.signals import ComplexSignal, RealSignal
from ..txchain.dither import DitherTone, check_below_nyquist


class MultiplicationCounter:
    """Thread-safe tally of real multiplications."""

    def __init__(self):
        self._lock = threading.Lock()
        self._total = 0

    def add(self, count: int) -> None:
        with self._lock:
            self._total += int(count)

    @property
    def total(self) -> int:
        with self._lock:
            return self._total

    def reset(self) -> None:
        with self._lock:
            self._total = 0


def multiplication_count(cfg: DsbicConfig, n: int) -> int:
    """
    Real multiplications of the grid search: N_m * N_theta * (4n + n^2) per
    tone per iteration.

    Args:
        cfg: DSBIC settings (grid, iterations, tones)
        n: Record length in samples

    Returns:
        Total count over all iterations and tones
    """
    if n < 1:
        raise ValueError(f"n: must be >= 1, got {n}")
    per_search = len(cfg.grid.amplitude_values) * len(cfg.grid.angle_values) * (4 * n + n * n)
    return per_search * cfg.iterations * len(cfg.tone_frequencies)


def reconstruct_distortion(
    es_prime: ComplexSignal,
    carrier: CarrierEstimate,
    tone: DitherTone,
    scale: Optional[float] = None,
    counter: Optional[MultiplicationCounter] = None,
) -> RealSignal:
    """
    Beat distortion 2*m*cos(2*pi*f*t + theta) * (E0 + Re{E_s'}).

    Args:
        es_prime: Recovered signal field
        carrier: Carrier estimate E0
        tone: Candidate tone; amplitude is relative to the carrier
        scale: Field units per unit tone amplitude; defaults to E0
        counter: Tally of the 4n multiplications

    Returns:
        Distortion current at the field's sample rate
    """
    check_below_nyquist(tone.frequency, es_prime.sample_rate)
    n = len(es_prime)
    m_field = tone.amplitude * (carrier.amplitude if scale is None else scale)

    cosine = tone.waveform(n, es_prime.sample_rate)
    a = m_field * cosine
    b = 2.0 * a
    c = b * carrier.amplitude
    d = b * es_prime.samples.real
    if counter is not None:
        counter.add(4 * n)
    return RealSignal(c + d, es_prime.sample_rate)


def _tone_columns(t: np.ndarray, frequency: float):
    w = 2 * np.pi * frequency * t
    return [np.cos(w), np.sin(w)]


def estimate_dither_amplitude(
    current: RealSignal,
    frequency: float,
    companions: Iterable[float] = (),
) -> float:
    """
    Dither amplitude m_hat from the 2*f_d line of a current.

    The d^2 term m^2*cos^2(w t + theta) puts m^2/2 at 2*f_d. The line is
    fitted by least squares jointly with DC, the fundamental and, for every
    companion tone f_c, the lines f_c, 2*f_c and f_c +- f_d, so that
    neighbouring lines do not bias it.

    Args:
        current: Photocurrent or residual current
        frequency: f_d in Hz
        companions: Frequencies of the other dither tones

    Returns:
        m_hat in field units: sqrt(2 * fitted amplitude at 2*f_d)
    """
    duration = len(current) / current.sample_rate
    if duration * 2 * frequency < 2:
        raise ValueError(
            f"current: {len(current)} samples span fewer than two cycles of "
            f"2*f_d = {2 * frequency} Hz"
        )
    check_below_nyquist(2 * frequency, current.sample_rate)

    t = current.time_axis()
    columns = [np.ones_like(t)]
    columns += _tone_columns(t, 2 * frequency)
    columns += _tone_columns(t, frequency)
    lines = set()
    for fc in companions:
        if fc == frequency:
            continue
        lines.update({fc, 2 * fc, fc + frequency, abs(fc - frequency)})
    lines.discard(0.0)
    lines.discard(2 * frequency)
    lines.discard(frequency)
    nyquist = current.sample_rate / 2
    for line in sorted(lines):
        if line < nyquist:
            columns += _tone_columns(t, line)

    design = np.column_stack(columns)
    coefficients, *_ = np.linalg.lstsq(design, current.samples, rcond=None)
    amplitude = float(np.hypot(coefficients[1], coefficients[2]))
    return float(np.sqrt(2.0 * amplitude))


def compute_alpha(m_true_estimate: float, m_grid: float) -> float:
    """alpha = m_d / m_d'."""
    if m_grid == 0:
        raise ValueError("m_grid: zero grid amplitude, alpha is undefined")
    return float(m_true_estimate / m_grid)
