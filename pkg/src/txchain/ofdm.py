"""
OFDM Modulation

Single-sideband OFDM: data only on positive-frequency bins, every negative bin
left empty, so each OFDM symbol is an analytic baseband waveform.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy import fft as sp_fft

from .qam import qam16_map
from ..sigproc.signals import ComplexSignal
from ..utils.config import Config


@dataclass(frozen=True)
class OfdmConfig:
    """
    OFDM frame layout.

    Attributes:
        fft_size: DFT length
        n_occupied: Number of contiguous occupied positive-frequency bins
        start_bin: First occupied bin (lowest signal frequency f_c); defaults
            to fft_size / 64
        cp_len: Cyclic prefix length in samples
        qam_order: Constellation size (16 only)
        pilot_every: Comb pilot spacing within the occupied band, or None
        training_symbols: Known OFDM symbols at the start of every frame
        sample_rate: DAC rate in Sa/s
        training_seed: Seed of the known training content
    """

    fft_size: int = Config.FFT_SIZE
    n_occupied: int = Config.OCCUPIED_BINS
    start_bin: Optional[int] = None
    cp_len: int = Config.CP_LEN
    qam_order: int = Config.QAM_ORDER
    pilot_every: Optional[int] = None
    training_symbols: int = Config.TRAINING_SYMBOLS
    sample_rate: float = Config.SAMPLE_RATE
    training_seed: int = Config.TRAINING_SEED

    def __post_init__(self):
        if self.start_bin is None:
            object.__setattr__(self, 'start_bin', self.fft_size // Config.GUARD_DIVISOR)

        if self.fft_size < 4 or self.fft_size % 2:
            raise ValueError(f"fft_size: must be an even integer >= 4, got {self.fft_size}")
        if self.n_occupied < 1:
            raise ValueError(f"n_occupied: must be positive, got {self.n_occupied}")
        if self.start_bin < 1:
            raise ValueError(f"start_bin: must be >= 1, got {self.start_bin}")
        if self.start_bin + self.n_occupied > self.fft_size // 2:
            raise ValueError(
                f"start_bin: occupied bins {self.start_bin}..{self.start_bin + self.n_occupied - 1} "
                f"must stay below fft_size/2 = {self.fft_size // 2}"
            )
        if self.cp_len < 0 or self.cp_len > self.fft_size:
            raise ValueError(f"cp_len: must lie in [0, fft_size], got {self.cp_len}")
        if self.qam_order != 16:
            raise ValueError(f"qam_order: only 16-QAM is supported, got {self.qam_order}")
        if self.pilot_every is not None and not 2 <= self.pilot_every <= self.n_occupied:
            raise ValueError(
                f"pilot_every: must lie in [2, n_occupied] or be null, got {self.pilot_every}"
            )
        if self.training_symbols < 0:
            raise ValueError(f"training_symbols: must be >= 0, got {self.training_symbols}")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate: must be positive, got {self.sample_rate}")

    # Layout -----------------------------------------------------------------

    @property
    def occupied_bins(self) -> np.ndarray:
        return np.arange(self.start_bin, self.start_bin + self.n_occupied)

    @property
    def pilot_positions(self) -> np.ndarray:
        """Indices into occupied_bins that carry comb pilots."""
        if self.pilot_every is None:
            return np.array([], dtype=np.intp)
        return np.arange(0, self.n_occupied, self.pilot_every)

    @property
    def data_positions(self) -> np.ndarray:
        """Indices into occupied_bins that carry QAM data."""
        mask = np.ones(self.n_occupied, dtype=bool)
        mask[self.pilot_positions] = False
        return np.flatnonzero(mask)

    @property
    def data_bins(self) -> np.ndarray:
        return self.occupied_bins[self.data_positions]

    @property
    def n_data_bins(self) -> int:
        return int(self.data_positions.size)

    @property
    def bits_per_symbol(self) -> int:
        return self.n_data_bins * 4

    @property
    def symbol_length(self) -> int:
        return self.fft_size + self.cp_len

    @property
    def subcarrier_spacing(self) -> float:
        return self.sample_rate / self.fft_size

    @property
    def occupied_band_hz(self):
        """(lowest, highest) occupied subcarrier frequency in Hz."""
        df = self.subcarrier_spacing
        return self.start_bin * df, (self.start_bin + self.n_occupied - 1) * df

    @property
    def time_scale(self) -> float:
        # Unit-power symbols give a unit-power time signal
        return self.fft_size / np.sqrt(self.n_occupied)

    @property
    def bit_rate(self) -> float:
        """Net payload bit rate in b/s."""
        return self.bits_per_symbol * self.sample_rate / self.symbol_length

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OfdmConfig':
        return cls(**data)


def training_symbols(cfg: OfdmConfig) -> np.ndarray:
    """
    Known training content, shape (training_symbols, n_data_bins).

    Deterministic in cfg.training_seed so transmitter and receiver agree.
    """
    rng = np.random.default_rng(cfg.training_seed)
    bits = rng.integers(0, 2, cfg.training_symbols * cfg.bits_per_symbol, dtype=np.uint8)
    return qam16_map(bits).reshape(cfg.training_symbols, cfg.n_data_bins)


def occupied_grid(data_symbols: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """Occupied-band content (n_sym, n_occupied) with pilots filled in."""
    data = np.asarray(data_symbols, dtype=np.complex128).reshape(-1, cfg.n_data_bins)
    grid = np.zeros((data.shape[0], cfg.n_occupied), dtype=np.complex128)
    grid[:, cfg.data_positions] = data
    grid[:, cfg.pilot_positions] = Config.PILOT_SYMBOL
    return grid


def ofdm_modulate(symbols, cfg: OfdmConfig) -> ComplexSignal:
    """
    Modulate QAM symbols onto SSB OFDM symbols with cyclic prefix.

    Args:
        symbols: Data symbols, count divisible by cfg.n_data_bins; consecutive
            groups of n_data_bins fill one OFDM symbol
        cfg: Frame layout

    Returns:
        Time-domain baseband at cfg.sample_rate
    """
    flat = np.asarray(symbols, dtype=np.complex128).reshape(-1)
    if flat.size == 0 or flat.size % cfg.n_data_bins:
        raise ValueError(
            f"symbols: count {flat.size} is not a positive multiple of "
            f"{cfg.n_data_bins} data bins"
        )

    occupied = occupied_grid(flat, cfg)
    spectrum = np.zeros((occupied.shape[0], cfg.fft_size), dtype=np.complex128)
    spectrum[:, cfg.occupied_bins] = occupied

    body = sp_fft.ifft(spectrum, axis=1) * cfg.time_scale
    with_cp = np.concatenate([body[:, cfg.fft_size - cfg.cp_len:], body], axis=1)
    return ComplexSignal(with_cp.reshape(-1), cfg.sample_rate)
