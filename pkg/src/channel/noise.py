"""
Optical Noise

Circular complex AWGN added to the optical field ahead of the photodiode; the
SNR knob stands in for the received optical power of a pre-amplified receiver.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..sigproc.signals import ComplexSignal
from ..utils.config import Config


@dataclass(frozen=True)
class NoiseConfig:
    """
    Attributes:
        snr_db: Total field power over noise power in dB, or None for no noise
        seed: Seed of the noise stream
    """

    snr_db: Optional[float] = None
    seed: int = Config.SEED

    def __post_init__(self):
        if self.snr_db is not None and not np.isfinite(self.snr_db):
            raise ValueError(f"snr_db: must be finite or null, got {self.snr_db}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed: must be a non-negative integer, got {self.seed}")

    def with_seed(self, seed: int) -> 'NoiseConfig':
        return NoiseConfig(self.snr_db, int(seed))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'NoiseConfig':
        return cls(**data)


def apply_noise(field: ComplexSignal, noise: NoiseConfig) -> ComplexSignal:
    """
    Add circular complex Gaussian noise.

    The noise variance is mean|field|^2 / 10^(snr_db/10); the stream is drawn
    from a generator owned by this call, so equal seeds give equal output.

    Args:
        field: Optical field
        noise: Noise settings

    Returns:
        Noisy field
    """
    if noise.snr_db is None:
        return field.with_samples(field.samples)

    rng = np.random.default_rng(noise.seed)
    noise_power = field.power() / 10.0 ** (noise.snr_db / 10.0)
    n = len(field)
    std = np.sqrt(noise_power / 2.0)
    samples = std * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return field.with_samples(field.samples + samples)
