"""
Fiber Propagation

Chromatic dispersion as an all-pass quadratic-phase filter
H(f) = exp(-j*pi*lambda^2*D*L*f^2/c).
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np
from scipy import fft as sp_fft

from ..sigproc.signals import ComplexSignal
from ..utils.config import Config


@dataclass(frozen=True)
class FiberConfig:
    """
    Standard single-mode fiber span.

    Attributes:
        length_km: Span length in km, >= 0
        dispersion_ps_nm_km: Dispersion parameter D in ps/(nm km)
        wavelength_nm: Carrier wavelength in nm
    """

    length_km: float = Config.FIBER_LENGTH_KM
    dispersion_ps_nm_km: float = Config.DISPERSION_PS_NM_KM
    wavelength_nm: float = Config.WAVELENGTH_NM

    def __post_init__(self):
        if self.length_km < 0:
            raise ValueError(f"length_km: must be >= 0, got {self.length_km}")
        if self.wavelength_nm <= 0:
            raise ValueError(f"wavelength_nm: must be positive, got {self.wavelength_nm}")

    @property
    def accumulated_dispersion(self) -> float:
        """lambda^2 * D * L / c in s^2."""
        wavelength = self.wavelength_nm * 1e-9
        dispersion = self.dispersion_ps_nm_km * 1e-6  # s/m^2
        length = self.length_km * 1e3
        return wavelength ** 2 * dispersion * length / Config.SPEED_OF_LIGHT

    def group_delay(self, frequency: float) -> float:
        """Group delay in seconds at a baseband frequency offset."""
        return self.accumulated_dispersion * frequency

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FiberConfig':
        return cls(**data)


def apply_cd(field: ComplexSignal, fiber: FiberConfig, invert: bool = False) -> ComplexSignal:
    """
    Apply (or undo) chromatic dispersion in the frequency domain.

    Args:
        field: Optical field
        fiber: Span parameters
        invert: Apply the conjugate filter (dispersion compensation)

    Returns:
        Dispersed field; energy is preserved
    """
    if fiber.length_km == 0:
        return field.with_samples(field.samples)

    freqs = sp_fft.fftfreq(len(field), d=1.0 / field.sample_rate)
    sign = 1.0 if invert else -1.0
    response = np.exp(sign * 1j * np.pi * fiber.accumulated_dispersion * freqs ** 2)
    return field.with_samples(sp_fft.ifft(sp_fft.fft(field.samples) * response))
