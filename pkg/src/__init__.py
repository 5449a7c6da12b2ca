"""
Dither-Beat Cancellation Simulator

A modular simulator of SSB OFDM links with Kramers-Kronig detection and
blind cancellation of bias-dither beat interference.
"""

__version__ = '1.0.0'
