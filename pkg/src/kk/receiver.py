"""
KK Receiver

Photocurrent -> carrier estimate -> KK -> optional CD compensation ->
training-equalized OFDM demodulation -> hard decisions.
"""

from typing import Optional

import numpy as np

from .kk import CarrierEstimate, KkConfig, estimate_carrier, kk_reconstruct
from ..channel.fiber import FiberConfig, apply_cd
from ..metrics.demodulation import equalize, estimate_channel, ofdm_grid, qam16_demap
from ..sigproc.signals import ComplexSignal, RealSignal
from ..txchain.ofdm import OfdmConfig


class KkReceiver:
    """Conventional KK receiver for one capture."""

    def __init__(
        self,
        ofdm_cfg: OfdmConfig,
        kk_cfg: Optional[KkConfig] = None,
        fiber: Optional[FiberConfig] = None,
        band_carrier_estimate: bool = True,
    ):
        """
        Initialize the receiver.

        Args:
            ofdm_cfg: Frame layout
            kk_cfg: KK settings
            fiber: Span to compensate after KK, or None for back-to-back
            band_carrier_estimate: Correct the DC carrier estimate with the
                occupied-band power
        """
        self.ofdm_cfg = ofdm_cfg
        self.kk_cfg = kk_cfg or KkConfig()
        self.fiber = fiber
        self.band_carrier_estimate = band_carrier_estimate

    def estimate_carrier(self, current: RealSignal) -> CarrierEstimate:
        band = self.ofdm_cfg.occupied_band_hz if self.band_carrier_estimate else None
        return estimate_carrier(current, band)

    def recover_field(
        self,
        current: RealSignal,
        carrier: Optional[CarrierEstimate] = None,
    ) -> ComplexSignal:
        """E_s' at the photodiode (before CD compensation)."""
        if carrier is None:
            carrier = self.estimate_carrier(current)
        return kk_reconstruct(current, self.kk_cfg, carrier)

    def equalized_grid(self, es_prime: ComplexSignal) -> np.ndarray:
        """
        Equalized occupied-band grid of the payload symbols.

        Args:
            es_prime: Field recovered by recover_field

        Returns:
            Array (payload symbols, n_occupied)
        """
        field = es_prime
        if self.fiber is not None and self.fiber.length_km > 0:
            field = apply_cd(field, self.fiber, invert=True)
        channel = estimate_channel(field, self.ofdm_cfg)
        grid = equalize(ofdm_grid(field, self.ofdm_cfg), self.ofdm_cfg, channel)
        return grid[self.ofdm_cfg.training_symbols:]

    def demodulate(self, es_prime: ComplexSignal) -> np.ndarray:
        """Equalized payload data symbols, shape (payload symbols, n_data_bins)."""
        return self.equalized_grid(es_prime)[:, self.ofdm_cfg.data_positions]

    def decide(self, symbols: np.ndarray) -> np.ndarray:
        return qam16_demap(symbols)

    def receive(self, current: RealSignal) -> np.ndarray:
        """Payload bits decided from a photocurrent."""
        return self.decide(self.demodulate(self.recover_field(current)))
