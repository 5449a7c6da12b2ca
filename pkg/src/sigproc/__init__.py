"""
Signal Processing Primitives

Signal containers, DFT, Hilbert transform, resampling and PSD estimation.
"""

from .signals import ComplexSignal, RealSignal, PsdEstimate, AnySignal
from .transforms import (
    dft,
    hilbert_array,
    hilbert_transform,
    resample_array,
    resample,
)
from .spectral import psd

__all__ = [
    'ComplexSignal',
    'RealSignal',
    'PsdEstimate',
    'AnySignal',
    'dft',
    'hilbert_array',
    'hilbert_transform',
    'resample_array',
    'resample',
    'psd',
]
