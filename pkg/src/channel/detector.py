"""
Square-Law Photodetection
"""

import numpy as np

from ..sigproc.signals import ComplexSignal, RealSignal


def photodetect(field: ComplexSignal) -> RealSignal:
    """
    Photocurrent |E|^2 of an unlimited-bandwidth photodiode.

    Args:
        field: Optical field

    Returns:
        Photocurrent at the field's sample rate
    """
    samples = field.samples
    return RealSignal(samples.real ** 2 + samples.imag ** 2, field.sample_rate)
