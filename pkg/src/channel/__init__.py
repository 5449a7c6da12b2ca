"""
Optical Channel

Chromatic dispersion, optical noise and square-law detection.
"""

from .fiber import FiberConfig, apply_cd
from .noise import NoiseConfig, apply_noise
from .detector import photodetect

__all__ = [
    'FiberConfig',
    'apply_cd',
    'NoiseConfig',
    'apply_noise',
    'photodetect',
]
