"""
Kramers-Kronig Field Reconstruction

Recovers the complex field of a minimum-phase SSB signal from its
photocurrent: phi = H{ log(sqrt(I)) }, E = sqrt(I) * exp(j*phi), then the
carrier is removed to leave E_s'.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy import fft as sp_fft

from ..sigproc.signals import ComplexSignal, RealSignal
from ..sigproc.transforms import hilbert_array, resample
from ..txchain.ofdm import OfdmConfig
from ..utils.config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KkConfig:
    """
    Attributes:
        upsample_factor: Digital upsampling ahead of the sqrt/log nonlinearities
        clamp_floor: Floor of the current inside log, relative to its mean
    """

    upsample_factor: int = Config.KK_UPSAMPLE_FACTOR
    clamp_floor: float = Config.KK_CLAMP_RATIO

    def __post_init__(self):
        if int(self.upsample_factor) != self.upsample_factor or self.upsample_factor < 1:
            raise ValueError(
                f"upsample_factor: must be a positive integer, got {self.upsample_factor}"
            )
        if not self.clamp_floor > 0:
            raise ValueError(f"clamp_floor: must be positive, got {self.clamp_floor}")
        object.__setattr__(self, 'upsample_factor', int(self.upsample_factor))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'KkConfig':
        return cls(**data)


@dataclass(frozen=True)
class CarrierEstimate:
    """Estimated carrier amplitude E0."""

    amplitude: float

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise ValueError(f"amplitude: must be >= 0, got {self.amplitude}")


def band_power(current: RealSignal, band: Tuple[float, float]) -> float:
    """Mean power of the current's components with f_lo <= |f| <= f_hi."""
    n = len(current)
    spectrum = sp_fft.fft(current.samples)
    freqs = np.abs(sp_fft.fftfreq(n, d=1.0 / current.sample_rate))
    mask = (freqs >= band[0]) & (freqs <= band[1])
    return float(np.sum(np.abs(spectrum[mask]) ** 2) / n ** 2)


def estimate_carrier(
    current: RealSignal,
    band: Optional[Tuple[float, float]] = None,
) -> CarrierEstimate:
    """
    Estimate E0 from the DC level of the photocurrent.

    Without a band the estimate is sqrt(mean), biased high by the signal
    power (a relative error of order 1/CSPR). With the occupied band (Hz),
    the in-band current power 2*E0^2*P_s is used to split the mean
    E0^2 + P_s into its two parts.

    Args:
        current: Photocurrent
        band: (f_lo, f_hi) of the signal band, or None for the simple mode

    Returns:
        CarrierEstimate
    """
    mean = current.mean()
    if mean < 0:
        raise ValueError(f"current: negative mean {mean}, no carrier to estimate")
    if mean == 0:
        return CarrierEstimate(0.0)
    if band is None:
        return CarrierEstimate(float(np.sqrt(mean)))

    p_band = band_power(current, band)
    discriminant = max(mean ** 2 - 2.0 * p_band, 0.0)
    carrier_power = 0.5 * (mean + np.sqrt(discriminant))
    return CarrierEstimate(float(np.sqrt(carrier_power)))


def reconstruct_upsampled(
    current: RealSignal,
    cfg: KkConfig,
) -> Tuple[ComplexSignal, RealSignal]:
    """
    Full field E = sqrt(I) * exp(j*H{log sqrt(I)}) at the upsampled rate.

    Args:
        current: Photocurrent
        cfg: KK settings

    Returns:
        Tuple of (field including the carrier, clamped upsampled current)
    """
    upsampled = resample(current, cfg.upsample_factor, 1)
    floor = cfg.clamp_floor * max(current.mean(), np.finfo(np.float64).tiny)
    clamped_samples = np.maximum(upsampled.samples, floor)
    n_clamped = int(np.count_nonzero(upsampled.samples < floor))
    if n_clamped:
        logger.debug(f"KK clamped {n_clamped} of {len(upsampled)} samples to {floor:.3g}")

    magnitude = np.sqrt(clamped_samples)
    phase = hilbert_array(np.log(magnitude))
    field = ComplexSignal(magnitude * np.exp(1j * phase), upsampled.sample_rate)
    return field, upsampled.with_samples(clamped_samples)


def kk_reconstruct(
    current: RealSignal,
    cfg: KkConfig,
    carrier: CarrierEstimate,
) -> ComplexSignal:
    """
    Recover E_s' from a photocurrent.

    Args:
        current: Photocurrent (samples below the floor are clamped)
        cfg: KK settings
        carrier: Carrier amplitude subtracted after phase recovery

    Returns:
        E_s' at the current's sample rate
    """
    field_up, _ = reconstruct_upsampled(current, cfg)
    field = resample(field_up, 1, cfg.upsample_factor)
    return field.with_samples(field.samples - carrier.amplitude)


def band_limit(field: ComplexSignal, cfg: OfdmConfig) -> ComplexSignal:
    """
    Project a field onto the occupied OFDM band.

    Components outside [f_lo - df/2, f_hi + df/2] (df the subcarrier spacing)
    are zeroed; the record length is arbitrary.
    """
    f_lo, f_hi = cfg.occupied_band_hz
    half = cfg.subcarrier_spacing / 2.0
    freqs = sp_fft.fftfreq(len(field), d=1.0 / field.sample_rate)
    mask = (freqs >= f_lo - half) & (freqs <= f_hi + half)
    spectrum = sp_fft.fft(field.samples)
    return field.with_samples(sp_fft.ifft(np.where(mask, spectrum, 0.0)))
