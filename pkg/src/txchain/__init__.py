"""
Transmitter Chain

Bits -> 16-QAM -> SSB OFDM -> carrier -> dither tones.
"""

from .qam import (
    QAM16_SCALE,
    LEVEL_BITS,
    qam16_map,
    qam16_constellation,
    qam16_levels,
    decide_axis,
)
from .ofdm import OfdmConfig, ofdm_modulate, occupied_grid, training_symbols
from .carrier import add_carrier, measure_cspr
from .dither import DitherTone, dither_waveform, inject_dither, check_below_nyquist
from .frame import TxFrame, build_frame, save_frame, load_frame

__all__ = [
    'QAM16_SCALE',
    'LEVEL_BITS',
    'qam16_map',
    'qam16_constellation',
    'qam16_levels',
    'decide_axis',
    'OfdmConfig',
    'ofdm_modulate',
    'occupied_grid',
    'training_symbols',
    'add_carrier',
    'measure_cspr',
    'DitherTone',
    'dither_waveform',
    'inject_dither',
    'check_below_nyquist',
    'TxFrame',
    'build_frame',
    'save_frame',
    'load_frame',
]
