"""
Signal Containers

Uniformly sampled complex and real sequences shared by every pipeline stage,
plus the PSD estimate produced by the spectral analyzer.
"""

from dataclasses import dataclass, field
from typing import Union

import numpy as np
import pandas as pd


def _validate_rate(sample_rate: float) -> float:
    rate = float(sample_rate)
    if not np.isfinite(rate) or rate <= 0:
        raise ValueError(f"sample_rate: must be positive, got {sample_rate}")
    return rate


@dataclass(frozen=True, eq=False)
class ComplexSignal:
    """
    Complex baseband record: optical fields E0 + Es and recovered fields.

    Attributes:
        samples: Complex samples (dimensionless field amplitude)
        sample_rate: Samples per second
    """

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128).reshape(-1)
        if samples.size < 1:
            raise ValueError("samples: length must be at least 1")
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'sample_rate', _validate_rate(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.size

    def time_axis(self) -> np.ndarray:
        """Sample instants in seconds, starting at zero."""
        return np.arange(self.samples.size) / self.sample_rate

    def power(self) -> float:
        """Mean |x|^2."""
        return float(np.mean(np.abs(self.samples) ** 2))

    def with_samples(self, samples: np.ndarray) -> 'ComplexSignal':
        """New signal at the same rate."""
        return ComplexSignal(samples, self.sample_rate)


@dataclass(frozen=True, eq=False)
class RealSignal:
    """
    Real record: photocurrents I, I' and reconstructed distortions.

    Attributes:
        samples: Real samples
        sample_rate: Samples per second
    """

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64).reshape(-1)
        if samples.size < 1:
            raise ValueError("samples: length must be at least 1")
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'sample_rate', _validate_rate(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.size

    def time_axis(self) -> np.ndarray:
        """Sample instants in seconds, starting at zero."""
        return np.arange(self.samples.size) / self.sample_rate

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def with_samples(self, samples: np.ndarray) -> 'RealSignal':
        """New signal at the same rate."""
        return RealSignal(samples, self.sample_rate)


AnySignal = Union[ComplexSignal, RealSignal]


@dataclass(frozen=True, eq=False)
class PsdEstimate:
    """
    Welch power spectral density estimate.

    Attributes:
        frequencies: Frequencies in Hz, strictly increasing
        power_db: 10*log10 of the power density (per Hz)
        nfft: Segment length
        overlap: Segment overlap fraction in [0, 1)
    """

    frequencies: np.ndarray
    power_db: np.ndarray
    nfft: int
    overlap: float = field(default=0.5)

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.float64).reshape(-1)
        power = np.asarray(self.power_db, dtype=np.float64).reshape(-1)
        if freqs.size != power.size:
            raise ValueError("power_db: length must match frequencies")
        if freqs.size > 1 and np.any(np.diff(freqs) <= 0):
            raise ValueError("frequencies: must be strictly increasing")
        if not 0.0 <= self.overlap < 1.0:
            raise ValueError(f"overlap: must lie in [0, 1), got {self.overlap}")
        object.__setattr__(self, 'frequencies', freqs)
        object.__setattr__(self, 'power_db', power)

    def to_frame(self) -> pd.DataFrame:
        """Two-column table (frequency_hz, power_db)."""
        return pd.DataFrame({
            'frequency_hz': self.frequencies,
            'power_db': self.power_db,
        })

    def to_csv(self, path: str) -> str:
        self.to_frame().to_csv(path, index=False, float_format='%.12g')
        return path

    @classmethod
    def from_csv(cls, path: str, nfft: int, overlap: float = 0.5) -> 'PsdEstimate':
        df = pd.read_csv(path)
        return cls(
            frequencies=df['frequency_hz'].to_numpy(),
            power_db=df['power_db'].to_numpy(),
            nfft=nfft,
            overlap=overlap,
        )

    def peak_frequency(self) -> float:
        return float(self.frequencies[int(np.argmax(self.power_db))])

    def band(self, f_lo: float, f_hi: float) -> np.ndarray:
        """power_db values with f_lo <= f <= f_hi."""
        mask = (self.frequencies >= f_lo) & (self.frequencies <= f_hi)
        return self.power_db[mask]
