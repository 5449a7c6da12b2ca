"""
Transforms

DFT, discrete Hilbert transform and Fourier-domain rational resampling.

DFT convention used throughout the package: forward transform unnormalized,
inverse scaled by 1/N (scipy.fft's default "backward" norm).
"""

from typing import TypeVar

import numpy as np
from scipy import fft as sp_fft
from scipy import signal as sp_signal

from .signals import ComplexSignal, RealSignal
from ..utils.config import Config

SignalT = TypeVar('SignalT', ComplexSignal, RealSignal)


def dft(x: ComplexSignal, inverse: bool = False) -> ComplexSignal:
    """
    Discrete Fourier transform of a complex record of any length.

    Args:
        x: Input signal
        inverse: Apply the inverse transform (scaled by 1/N)

    Returns:
        Transformed sequence carried at the input sample rate
    """
    if inverse:
        return x.with_samples(sp_fft.ifft(x.samples))
    return x.with_samples(sp_fft.fft(x.samples))


def hilbert_array(u: np.ndarray) -> np.ndarray:
    """
    Spectral Hilbert transform of a real array.

    Positive frequencies are multiplied by -j, negative by +j, DC and Nyquist
    by 0. Odd lengths are padded with one zero and trimmed afterwards.
    """
    u = np.asarray(u, dtype=np.float64)
    n = u.size
    padded = np.append(u, 0.0) if n % 2 else u
    m = padded.size

    spectrum = sp_fft.fft(padded)
    mask = np.zeros(m, dtype=np.complex128)
    mask[1:m // 2] = -1j
    mask[m // 2 + 1:] = 1j
    return sp_fft.ifft(spectrum * mask).real[:n]


def hilbert_transform(u: RealSignal) -> RealSignal:
    """
    Discrete Hilbert transform of a real record.

    Args:
        u: Real input

    Returns:
        H{u} at the same sample rate
    """
    return u.with_samples(hilbert_array(u.samples))


def resample_array(x: np.ndarray, num: int) -> np.ndarray:
    """Fourier-domain resampling of a 1-D array to num samples."""
    if num == x.size:
        return np.array(x, copy=True)
    return sp_signal.resample(x, num)


def resample(x: SignalT, up: int, down: int) -> SignalT:
    """
    Rational resampling by zero-padding / truncating the spectrum.

    Equivalent to zero insertion followed by an ideal low-pass filter. The
    output length is len(x) * up / down, which must be an integer.

    Args:
        x: Complex or real signal
        up: Interpolation factor
        down: Decimation factor

    Returns:
        Signal of the same kind at sample_rate * up / down
    """
    if int(up) != up or int(down) != down or up < 1 or down < 1:
        raise ValueError(f"up/down: must be positive integers, got {up}/{down}")
    up, down = int(up), int(down)

    n = len(x)
    if n * up > Config.MAX_RESAMPLE_LENGTH:
        raise ValueError(
            f"up: {n} * {up} samples exceeds the resampler limit "
            f"of {Config.MAX_RESAMPLE_LENGTH}"
        )
    if (n * up) % down:
        raise ValueError(
            f"down: {n} * {up} samples is not divisible by {down}"
        )

    samples = resample_array(x.samples, n * up // down)
    return type(x)(samples, x.sample_rate * up / down)
