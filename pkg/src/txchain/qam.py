"""
16-QAM Mapping

Gray-coded 16-QAM on the grid {-3, -1, +1, +3}^2, scaled by 1/sqrt(10) to unit
average power. Bits b0 b1 select the in-phase level and b2 b3 the quadrature
level with the per-axis Gray table

    00 -> -3    01 -> -1    11 -> +1    10 -> +3
"""

import numpy as np

QAM16_SCALE = np.sqrt(10.0)

# Indexed by the 2-bit value b_first * 2 + b_second
_GRAY_LEVELS = np.array([-3.0, -1.0, 3.0, 1.0])

# Level index (0..3 for -3, -1, +1, +3) -> bit pair
LEVEL_BITS = np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.uint8)


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits).reshape(-1)
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bits: values must be 0 or 1")
    return arr.astype(np.uint8)


def qam16_constellation() -> np.ndarray:
    """The 16 points ordered by their 4-bit word (b0 b1 b2 b3 as an integer)."""
    words = np.arange(16, dtype=np.uint8)
    bits = ((words[:, None] >> np.array([3, 2, 1, 0])) & 1).astype(np.uint8)
    return qam16_map(bits.reshape(-1))


def qam16_map(bits) -> np.ndarray:
    """
    Map a bit sequence to unit-power 16-QAM symbols.

    Args:
        bits: Sequence of 0/1 values, length divisible by 4

    Returns:
        Complex symbol array of length len(bits) / 4
    """
    arr = _as_bits(bits)
    if arr.size % 4:
        raise ValueError(f"bits: length {arr.size} is not a multiple of 4")

    quads = arr.reshape(-1, 4).astype(np.intp)
    i_level = _GRAY_LEVELS[quads[:, 0] * 2 + quads[:, 1]]
    q_level = _GRAY_LEVELS[quads[:, 2] * 2 + quads[:, 3]]
    return (i_level + 1j * q_level) / QAM16_SCALE


def decide_axis(values: np.ndarray) -> np.ndarray:
    """Per-axis level index (0..3 for -3, -1, +1, +3) of unscaled values."""
    # Boundaries at -2, 0, +2 (unscaled). A value on a boundary goes to the
    # level whose Gray word is smaller: -2 -> -3 (00), 0 -> -1 (01), +2 -> +3 (10).
    idx = np.full(values.shape, 3, dtype=np.intp)
    idx[values < 2.0] = 2
    idx[values <= 0.0] = 1
    idx[values <= -2.0] = 0
    return idx


def qam16_levels(symbols) -> np.ndarray:
    """Nearest constellation points (hard decisions) for received symbols."""
    sym = np.asarray(symbols, dtype=np.complex128).reshape(-1) * QAM16_SCALE
    levels = np.array([-3.0, -1.0, 1.0, 3.0])
    i_hat = levels[decide_axis(sym.real)]
    q_hat = levels[decide_axis(sym.imag)]
    return (i_hat + 1j * q_hat) / QAM16_SCALE
