"""
Spectral Estimation

Welch PSD estimation for complex fields and real photocurrents.
"""

import numpy as np
from scipy import signal as sp_signal

from .signals import AnySignal, PsdEstimate
from ..utils.config import Config


def psd(
    x: AnySignal,
    nfft: int = Config.PSD_NFFT,
    overlap: float = Config.PSD_OVERLAP,
    window: str = 'hann',
) -> PsdEstimate:
    """
    Two-sided Welch periodogram.

    Segments are windowed (Hann unless told otherwise) and not detrended,
    so DC content is kept.
    Density scaling means a white record of variance s^2 reads s^2 / fs.

    Args:
        x: Signal to analyze
        nfft: Segment length
        overlap: Fraction of nfft shared by consecutive segments
        window: scipy.signal window name

    Returns:
        PsdEstimate with frequencies from -fs/2 upwards
    """
    if int(nfft) != nfft or nfft < 1:
        raise ValueError(f"nfft: must be a positive integer, got {nfft}")
    nfft = int(nfft)
    if nfft > len(x):
        raise ValueError(f"nfft: {nfft} exceeds the record length {len(x)}")
    if not 0.0 <= overlap < 1.0:
        raise ValueError(f"overlap: must lie in [0, 1), got {overlap}")

    noverlap = min(int(round(nfft * overlap)), nfft - 1)
    freqs, density = sp_signal.welch(
        x.samples,
        fs=x.sample_rate,
        window=window,
        nperseg=nfft,
        noverlap=noverlap,
        detrend=False,
        return_onesided=False,
        scaling='density',
    )
    freqs = np.fft.fftshift(freqs)
    density = np.fft.fftshift(density)

    tiny = np.finfo(np.float64).tiny
    power_db = 10.0 * np.log10(np.maximum(density, tiny))
    return PsdEstimate(freqs, power_db, nfft, overlap)
