"""
Configuration Module

Central configuration management for the simulator.
"""

import os
from typing import Any, Dict


class Config:
    """Simulator configuration settings."""

    # Directory paths
    OUTPUT_DIR = "output"

    # JSON artifacts carry this version
    SCHEMA_VERSION = 1

    # DAC/ADC rate of the simulated transceiver (Sa/s)
    SAMPLE_RATE = 64e9

    # OFDM frame
    FFT_SIZE = 1024
    OCCUPIED_BINS = 316
    CP_LEN = 32
    QAM_ORDER = 16
    GUARD_DIVISOR = 64  # start_bin = fft_size / 64
    TRAINING_SYMBOLS = 1
    TRAINING_SEED = 20240
    PILOT_SYMBOL = complex(1.0, 1.0) / 2 ** 0.5

    # Transmitter
    CSPR_DB = 9.0
    # Desk-scale stand-ins for the 20 kHz / 60 kHz ABC tones. The ratio is kept
    # away from 3 so that f2 - f1 does not land on 2 * f1.
    DITHER_FREQUENCIES = (60e6, 156e6)
    DITHER_SCALE = 1.0

    # Fiber
    FIBER_LENGTH_KM = 80.0
    DISPERSION_PS_NM_KM = 17.0
    WAVELENGTH_NM = 1550.0
    SPEED_OF_LIGHT = 299792458.0

    # KK receiver
    KK_UPSAMPLE_FACTOR = 3
    KK_CLAMP_RATIO = 1e-9

    # DSBIC grid search
    GRID_AMPLITUDE_STEP = 0.02
    GRID_AMPLITUDE_POINTS = 25
    GRID_ANGLE_STEP = 0.52
    GRID_ANGLE_POINTS = 12
    DSBIC_ITERATIONS = 3

    # Scoring
    HDFEC_THRESHOLD = 3.8e-3
    BER_FLOOR = 1e-7  # stands in for zero BER on log axes

    # PSD estimation
    PSD_NFFT = 1024
    PSD_OVERLAP = 0.5

    # Scenario defaults
    FRAMES = 4
    SYMBOLS_PER_FRAME = 4
    SEED = 0

    # Resampler guard
    MAX_RESAMPLE_LENGTH = 2 ** 28

    @classmethod
    def get_scenario_dir(cls, scenario_hash: str, out_dir: str = None) -> str:
        """Get the output directory for one scenario."""
        return os.path.join(out_dir or cls.OUTPUT_DIR, scenario_hash)

    @classmethod
    def ensure_directories(cls, out_dir: str = None) -> None:
        """Ensure the output directory exists."""
        os.makedirs(out_dir or cls.OUTPUT_DIR, exist_ok=True)

    @classmethod
    def to_dict(cls) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            key: value
            for key, value in vars(cls).items()
            if key.isupper() and not callable(value)
        }
