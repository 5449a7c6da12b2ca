"""
Carrier Handling

Carrier insertion at a target carrier-to-signal power ratio (CSPR) and CSPR
measurement from the mean and variance of a transmit field.
"""

import logging
from typing import Tuple

import numpy as np

from ..sigproc.signals import ComplexSignal

logger = logging.getLogger(__name__)


def add_carrier(signal: ComplexSignal, cspr_db: float) -> Tuple[ComplexSignal, float]:
    """
    Add a real carrier E0 so that 10*log10(E0^2 / mean|signal|^2) == cspr_db.

    Args:
        signal: Information-bearing field E_s
        cspr_db: Target CSPR in dB

    Returns:
        Tuple of (E0 + E_s, E0)
    """
    signal_power = signal.power()
    if signal_power <= 0.0:
        raise ValueError("signal: zero power, CSPR is undefined")

    carrier_amplitude = float(np.sqrt(signal_power * 10.0 ** (cspr_db / 10.0)))
    logger.debug(f"Carrier E0={carrier_amplitude:.6g} for CSPR {cspr_db} dB")
    return signal.with_samples(signal.samples + carrier_amplitude), carrier_amplitude


def measure_cspr(field: ComplexSignal) -> float:
    """
    CSPR in dB as |mean|^2 / variance of the field.

    Args:
        field: Transmit field, at least two samples

    Returns:
        CSPR in dB
    """
    if len(field) < 2:
        raise ValueError("field: at least two samples are needed")

    mean = np.mean(field.samples)
    variance = float(np.mean(np.abs(field.samples - mean) ** 2))
    if variance <= 0.0:
        raise ValueError("field: zero variance, CSPR is infinite")
    return float(10.0 * np.log10(np.abs(mean) ** 2 / variance))
