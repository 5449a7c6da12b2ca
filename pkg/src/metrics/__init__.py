"""
Metrics

OFDM demodulation, hard-decision demapping and BER/EVM scoring.
"""

from .demodulation import (
    ofdm_grid,
    estimate_channel,
    equalize,
    ofdm_demodulate,
    qam16_demap,
)
from .scoring import (
    BerReport,
    EvmReport,
    compute_ber,
    compute_evm,
    qam16_theoretical_ber,
    threshold_crossing,
)

__all__ = [
    'ofdm_grid',
    'estimate_channel',
    'equalize',
    'ofdm_demodulate',
    'qam16_demap',
    'BerReport',
    'EvmReport',
    'compute_ber',
    'compute_evm',
    'qam16_theoretical_ber',
    'threshold_crossing',
]
