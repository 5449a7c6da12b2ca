"""
Bias Dither Tones

The automatic bias controller adds low-frequency tones m*cos(w t + theta) to
the modulator bias. Each tone enters the optical field as a real additive term
whose amplitude is quoted relative to the carrier (A_scale = E0).
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable

import numpy as np

from ..sigproc.signals import ComplexSignal


@dataclass(frozen=True)
class DitherTone:
    """
    One dither tone.

    Attributes:
        amplitude: Fraction of V_pi (carrier-relative field amplitude), >= 0
        frequency: Tone frequency in Hz
        phase: Phase offset to the signal in radians, [0, 2*pi)
    """

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"amplitude: must be >= 0, got {self.amplitude}")
        if self.frequency < 0:
            raise ValueError(f"frequency: must be >= 0, got {self.frequency}")
        object.__setattr__(self, 'phase', float(np.mod(self.phase, 2 * np.pi)))

    def waveform(self, n: int, sample_rate: float) -> np.ndarray:
        """cos(2*pi*f*t + theta) over n samples starting at t = 0."""
        t = np.arange(n) / sample_rate
        return np.cos(2 * np.pi * self.frequency * t + self.phase)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DitherTone':
        return cls(**data)


def check_below_nyquist(frequency: float, sample_rate: float) -> None:
    if frequency >= sample_rate / 2:
        raise ValueError(
            f"frequency: {frequency} Hz is not below Nyquist ({sample_rate / 2} Hz)"
        )


def dither_waveform(
    tones: Iterable[DitherTone],
    n: int,
    sample_rate: float,
    scale: float,
) -> np.ndarray:
    """Sum of scale * m_k * cos(2*pi*f_k*t + theta_k) over all tones."""
    total = np.zeros(n, dtype=np.float64)
    for tone in tones:
        check_below_nyquist(tone.frequency, sample_rate)
        total += scale * tone.amplitude * tone.waveform(n, sample_rate)
    return total


def inject_dither(
    field: ComplexSignal,
    tones: Iterable[DitherTone],
    carrier_amplitude: float,
) -> ComplexSignal:
    """
    Add the dither tones to the optical field.

    Args:
        field: E0 + E_s
        tones: Dither tones (amplitudes relative to the carrier)
        carrier_amplitude: A_scale mapping tone amplitude to field units

    Returns:
        E0 + E_s + sum_k m_k * A_scale * cos(2*pi*f_k*t + theta_k)
    """
    tones = list(tones)
    if not tones:
        return field.with_samples(field.samples)
    dither = dither_waveform(tones, len(field), field.sample_rate, carrier_amplitude)
    return field.with_samples(field.samples + dither)
