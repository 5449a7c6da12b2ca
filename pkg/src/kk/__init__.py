"""
Kramers-Kronig Receiver

Carrier estimation, KK field reconstruction and the conventional receiver.
"""

from .kk import (
    KkConfig,
    CarrierEstimate,
    band_power,
    estimate_carrier,
    reconstruct_upsampled,
    kk_reconstruct,
    band_limit,
)
from .receiver import KkReceiver

__all__ = [
    'KkConfig',
    'CarrierEstimate',
    'band_power',
    'estimate_carrier',
    'reconstruct_upsampled',
    'kk_reconstruct',
    'band_limit',
    'KkReceiver',
]
