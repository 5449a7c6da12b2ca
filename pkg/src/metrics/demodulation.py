"""
OFDM Demodulation

CP removal, DFT, training-based one-tap equalization, comb-pilot gain
tracking and 16-QAM hard decisions.
"""

from typing import Optional

import numpy as np
from scipy import fft as sp_fft

from ..sigproc.signals import ComplexSignal
from ..txchain.ofdm import OfdmConfig, occupied_grid, training_symbols
from ..txchain.qam import QAM16_SCALE, LEVEL_BITS, decide_axis
from ..utils.config import Config


def ofdm_grid(field: ComplexSignal, cfg: OfdmConfig) -> np.ndarray:
    """
    Raw occupied-band content of every OFDM symbol.

    Args:
        field: Received baseband field
        cfg: Frame layout

    Returns:
        Array of shape (n_symbols, n_occupied)
    """
    n = len(field)
    if n % cfg.symbol_length:
        raise ValueError(
            f"field: length {n} is not a multiple of the symbol length {cfg.symbol_length}"
        )
    blocks = field.samples.reshape(-1, cfg.symbol_length)[:, cfg.cp_len:]
    spectrum = sp_fft.fft(blocks, axis=1) / cfg.time_scale
    return spectrum[:, cfg.occupied_bins]


def estimate_channel(field: ComplexSignal, cfg: OfdmConfig) -> np.ndarray:
    """
    Least-squares one-tap channel per occupied bin from the training symbols.

    Observations are averaged across training symbols.

    Args:
        field: Received frame starting with cfg.training_symbols known symbols
        cfg: Frame layout

    Returns:
        Complex gain per occupied bin, shape (n_occupied,)
    """
    if cfg.training_symbols < 1:
        raise ValueError("training_symbols: channel estimation needs at least one")
    grid = ofdm_grid(field, cfg)
    if grid.shape[0] < cfg.training_symbols:
        raise ValueError("field: shorter than the training section")

    known = occupied_grid(training_symbols(cfg), cfg)
    observed = grid[:cfg.training_symbols]
    return np.mean(observed / known, axis=0)


def equalize(grid: np.ndarray, cfg: OfdmConfig, channel_estimate: np.ndarray) -> np.ndarray:
    """
    Apply the one-tap equalizer, then per-symbol pilot gain correction.

    Args:
        grid: Raw occupied-band content (n_symbols, n_occupied)
        cfg: Frame layout
        channel_estimate: Gain per occupied bin

    Returns:
        Equalized grid of the same shape
    """
    h = np.asarray(channel_estimate, dtype=np.complex128).reshape(-1)
    if h.size != cfg.n_occupied:
        raise ValueError(
            f"channel_estimate: expected {cfg.n_occupied} bins, got {h.size}"
        )
    with np.errstate(divide='ignore', invalid='ignore'):
        out = np.where(h != 0, grid / h, 0.0)

    pilots = cfg.pilot_positions
    if pilots.size:
        observed = out[:, pilots]
        gain = np.sum(observed * np.conj(Config.PILOT_SYMBOL), axis=1) / (
            pilots.size * abs(Config.PILOT_SYMBOL) ** 2
        )
        gain = np.where(np.abs(gain) > 0, gain, 1.0)
        out = out / gain[:, None]
    return out


def ofdm_demodulate(
    field: ComplexSignal,
    cfg: OfdmConfig,
    channel_estimate: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Demodulate every OFDM symbol of a field to its data-bin symbols.

    Args:
        field: Received field, a whole number of OFDM symbols
        cfg: Frame layout
        channel_estimate: One-tap gains per occupied bin (see estimate_channel);
            None estimates them from the frame's training symbols, or skips
            the one-tap step when the layout has none

    Returns:
        Data symbols, shape (n_symbols, n_data_bins)
    """
    grid = ofdm_grid(field, cfg)
    if channel_estimate is None and cfg.training_symbols >= 1:
        channel_estimate = estimate_channel(field, cfg)
    if channel_estimate is not None:
        grid = equalize(grid, cfg, channel_estimate)
    elif cfg.pilot_every is not None:
        grid = equalize(grid, cfg, np.ones(cfg.n_occupied, dtype=np.complex128))
    return grid[:, cfg.data_positions]


def qam16_demap(symbols) -> np.ndarray:
    """
    Hard-decision 16-QAM demapping, inverse of qam16_map.

    Values exactly on a decision boundary resolve to the level with the
    smaller Gray word.

    Args:
        symbols: Received symbols (unit-power scale)

    Returns:
        uint8 bit array, four bits per symbol
    """
    sym = np.asarray(symbols, dtype=np.complex128).reshape(-1) * QAM16_SCALE
    i_bits = LEVEL_BITS[decide_axis(sym.real)]
    q_bits = LEVEL_BITS[decide_axis(sym.imag)]
    return np.hstack([i_bits, q_bits]).reshape(-1).astype(np.uint8)
