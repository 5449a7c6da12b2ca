"""
Scoring

BER/EVM reports, HD-FEC bookkeeping, threshold crossings on sweep curves and
the closed-form Gray 16-QAM BER used for sanity checks.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import special

from ..utils.config import Config

# Ratio floor of the EVM so a perfect match stays finite
EVM_RATIO_FLOOR = 1e-15


@dataclass(frozen=True)
class BerReport:
    """
    Attributes:
        bit_errors: Number of differing bits
        bits_total: Number of compared bits
        ber: bit_errors / bits_total
        passes_hdfec: ber <= HD-FEC threshold (inclusive)
    """

    bit_errors: int
    bits_total: int
    ber: float
    passes_hdfec: bool

    def __post_init__(self):
        if self.bits_total <= 0:
            raise ValueError(f"bits_total: must be positive, got {self.bits_total}")
        if not 0 <= self.bit_errors <= self.bits_total:
            raise ValueError(
                f"bit_errors: must lie in [0, {self.bits_total}], got {self.bit_errors}"
            )
        expected = self.bit_errors / self.bits_total
        if not np.isclose(self.ber, expected, rtol=1e-9, atol=0.0):
            raise ValueError(
                f"ber: {self.ber} does not match {self.bit_errors}/{self.bits_total}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BerReport':
        return cls(
            bit_errors=int(data['bit_errors']),
            bits_total=int(data['bits_total']),
            ber=float(data['ber']),
            passes_hdfec=bool(data['passes_hdfec']),
        )


@dataclass(frozen=True)
class EvmReport:
    """
    Attributes:
        evm_db: 20*log10(RMS error / RMS reference)
        symbols: Number of compared symbols
    """

    evm_db: float
    symbols: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def compute_ber(tx_bits, rx_bits, threshold: float = Config.HDFEC_THRESHOLD) -> BerReport:
    """
    Compare two bit sequences.

    Args:
        tx_bits: Reference bits
        rx_bits: Decided bits
        threshold: HD-FEC limit; a BER equal to it passes

    Returns:
        BerReport
    """
    tx = np.asarray(tx_bits, dtype=np.uint8).reshape(-1)
    rx = np.asarray(rx_bits, dtype=np.uint8).reshape(-1)
    if tx.size != rx.size:
        raise ValueError(f"rx_bits: length {rx.size} does not match tx_bits length {tx.size}")
    if tx.size == 0:
        raise ValueError("tx_bits: empty sequence")

    errors = int(np.count_nonzero(tx != rx))
    ber = errors / tx.size
    return BerReport(
        bit_errors=errors,
        bits_total=int(tx.size),
        ber=ber,
        passes_hdfec=bool(ber <= threshold),
    )


def compute_evm(reference, received) -> EvmReport:
    """
    Error vector magnitude of received symbols against their reference.

    Args:
        reference: Transmitted symbols
        received: Equalized symbols of the same shape

    Returns:
        EvmReport
    """
    ref = np.asarray(reference, dtype=np.complex128).reshape(-1)
    rx = np.asarray(received, dtype=np.complex128).reshape(-1)
    if ref.size != rx.size:
        raise ValueError(f"received: length {rx.size} does not match reference length {ref.size}")

    ref_power = float(np.mean(np.abs(ref) ** 2)) if ref.size else 0.0
    if ref_power <= 0.0:
        raise ValueError("reference: zero power, EVM is undefined")

    err_power = float(np.mean(np.abs(rx - ref) ** 2))
    ratio = max(np.sqrt(err_power / ref_power), EVM_RATIO_FLOOR)
    return EvmReport(evm_db=float(20.0 * np.log10(ratio)), symbols=int(ref.size))


def qam16_theoretical_ber(snr_db) -> np.ndarray:
    """
    Gray-coded 16-QAM BER over AWGN, nearest-neighbour approximation.

    Args:
        snr_db: Symbol SNR (Es/N0) in dB, scalar or array

    Returns:
        (3/8) * erfc(sqrt(SNR / 10))
    """
    snr = 10.0 ** (np.asarray(snr_db, dtype=np.float64) / 10.0)
    return 0.375 * special.erfc(np.sqrt(snr / 10.0))


def threshold_crossing(
    axis_values: Sequence[float],
    bers: Sequence[float],
    threshold: float = Config.HDFEC_THRESHOLD,
    floor: float = Config.BER_FLOOR,
) -> Optional[float]:
    """
    Axis value at which a BER curve first crosses the threshold.

    Interpolates linearly in log10(BER) between the first pair of neighbouring
    points whose pass/fail status differs. Zero BERs are raised to floor.

    Args:
        axis_values: Sweep axis in sweep order
        bers: BER per axis value
        threshold: BER limit
        floor: Stand-in for zero BER

    Returns:
        Interpolated axis value, or None when the curve never crosses
    """
    x = np.asarray(axis_values, dtype=np.float64).reshape(-1)
    y = np.maximum(np.asarray(bers, dtype=np.float64).reshape(-1), floor)
    if x.size != y.size:
        raise ValueError("bers: length must match axis_values")

    passes = y <= threshold
    log_t = np.log10(max(threshold, floor))
    for i in range(x.size - 1):
        if passes[i] == passes[i + 1]:
            continue
        y0, y1 = np.log10(y[i]), np.log10(y[i + 1])
        if y1 == y0:
            return float(x[i])
        frac = (log_t - y0) / (y1 - y0)
        return float(x[i] + frac * (x[i + 1] - x[i]))
    return None
