"""
Transmit Frame Builder

Bits -> 16-QAM -> SSB OFDM (training + payload) -> carrier at the target
CSPR -> dither injection, plus a binary container for saving frames.
"""

import json
import logging
import os
import struct
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .carrier import add_carrier
from .dither import DitherTone, inject_dither
from .ofdm import OfdmConfig, ofdm_modulate, training_symbols
from .qam import qam16_map
from ..sigproc.signals import ComplexSignal
from ..utils.config import Config
from ..utils.file_utils import ensure_directory

logger = logging.getLogger(__name__)

FRAME_MAGIC = b'DSBICTX1'


@dataclass(frozen=True, eq=False)
class TxFrame:
    """
    One transmitted capture.

    Attributes:
        field: E0 + E_s + dither, ready for the channel
        signal: E_s alone (no carrier, no dither)
        tx_bits: Payload bits
        tx_symbols: Payload QAM symbols, shape (payload symbols, n_data_bins)
        carrier_amplitude: E0
        config: Frame layout
        tones: Injected dither tones
        dither_scale: A_scale / E0
    """

    field: ComplexSignal
    signal: ComplexSignal
    tx_bits: np.ndarray
    tx_symbols: np.ndarray
    carrier_amplitude: float
    config: OfdmConfig
    tones: List[DitherTone] = field(default_factory=list)
    dither_scale: float = Config.DITHER_SCALE

    @property
    def n_symbols(self) -> int:
        """OFDM symbols in the capture, training included."""
        return self.tx_symbols.shape[0] + self.config.training_symbols

    def __post_init__(self):
        expected = self.n_symbols * self.config.symbol_length
        if len(self.field) != expected:
            raise ValueError(
                f"field: length {len(self.field)} does not match "
                f"{self.n_symbols} symbols x {self.config.symbol_length} samples"
            )

    def dither(self) -> np.ndarray:
        """The real dither term that was added to the field."""
        return (self.field.samples - self.signal.samples - self.carrier_amplitude).real


def build_frame(
    cfg: OfdmConfig,
    n_payload_symbols: int,
    cspr_db: float = Config.CSPR_DB,
    tones: Sequence[DitherTone] = (),
    rng: Optional[np.random.Generator] = None,
    dither_scale: float = Config.DITHER_SCALE,
) -> TxFrame:
    """
    Build a transmit frame.

    Args:
        cfg: Frame layout
        n_payload_symbols: Payload OFDM symbols after the training symbols
        cspr_db: Carrier-to-signal power ratio in dB
        tones: Dither tones to inject
        rng: Random generator for the payload bits
        dither_scale: A_scale in units of E0

    Returns:
        TxFrame
    """
    if n_payload_symbols < 1:
        raise ValueError(f"n_payload_symbols: must be >= 1, got {n_payload_symbols}")
    rng = rng if rng is not None else np.random.default_rng(Config.SEED)

    bits = rng.integers(0, 2, n_payload_symbols * cfg.bits_per_symbol, dtype=np.uint8)
    payload = qam16_map(bits).reshape(n_payload_symbols, cfg.n_data_bins)
    all_symbols = np.vstack([training_symbols(cfg), payload])

    signal = ofdm_modulate(all_symbols, cfg)
    with_carrier, carrier_amplitude = add_carrier(signal, cspr_db)
    tones = list(tones)
    field_out = inject_dither(with_carrier, tones, carrier_amplitude * dither_scale)

    logger.debug(
        f"Built frame: {all_symbols.shape[0]} OFDM symbols, {bits.size} payload bits, "
        f"E0={carrier_amplitude:.4g}, {len(tones)} dither tones"
    )
    return TxFrame(
        field=field_out,
        signal=signal,
        tx_bits=bits,
        tx_symbols=payload,
        carrier_amplitude=carrier_amplitude,
        config=cfg,
        tones=tones,
        dither_scale=dither_scale,
    )


def _bits_path(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root + '.bits'


def _interleave(samples: np.ndarray) -> np.ndarray:
    out = np.empty(samples.size * 2, dtype='<f8')
    out[0::2] = samples.real
    out[1::2] = samples.imag
    return out


def save_frame(frame: TxFrame, path: str) -> str:
    """
    Write a frame container and its bit file.

    Layout: magic | uint32 LE header length | JSON header | float64 LE
    interleaved I/Q of the field | the same for the signal. Bits go to a
    sibling '.bits' file packed with numpy.packbits.

    Args:
        frame: Frame to store
        path: Container path

    Returns:
        Container path
    """
    header = {
        'schema_version': Config.SCHEMA_VERSION,
        'config': frame.config.to_dict(),
        'carrier_amplitude': frame.carrier_amplitude,
        'sample_rate': frame.field.sample_rate,
        'n_samples': len(frame.field),
        'n_bits': int(frame.tx_bits.size),
        'tones': [tone.to_dict() for tone in frame.tones],
        'dither_scale': frame.dither_scale,
        'arrays': ['field', 'signal'],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode('utf-8')

    ensure_directory(os.path.dirname(path))
    with open(path, 'wb') as f:
        f.write(FRAME_MAGIC)
        f.write(struct.pack('<I', len(header_bytes)))
        f.write(header_bytes)
        f.write(_interleave(frame.field.samples).tobytes())
        f.write(_interleave(frame.signal.samples).tobytes())

    np.packbits(frame.tx_bits).tofile(_bits_path(path))
    return path


def load_frame(path: str) -> TxFrame:
    """
    Read a frame written by save_frame.

    Args:
        path: Container path

    Returns:
        TxFrame identical to the saved one
    """
    with open(path, 'rb') as f:
        blob = f.read()

    if blob[:len(FRAME_MAGIC)] != FRAME_MAGIC:
        raise ValueError(f"{path}: not a frame container")
    offset = len(FRAME_MAGIC)
    (header_len,) = struct.unpack('<I', blob[offset:offset + 4])
    offset += 4
    header = json.loads(blob[offset:offset + header_len].decode('utf-8'))
    offset += header_len

    n = header['n_samples']
    iq = np.frombuffer(blob, dtype='<f8', offset=offset)
    if iq.size != 4 * n:
        raise ValueError(f"{path}: truncated sample payload")
    field_samples = iq[0:2 * n:2] + 1j * iq[1:2 * n:2]
    signal_samples = iq[2 * n::2] + 1j * iq[2 * n + 1::2]

    packed = np.fromfile(_bits_path(path), dtype=np.uint8)
    bits = np.unpackbits(packed)[:header['n_bits']]

    cfg = OfdmConfig.from_dict(header['config'])
    rate = header['sample_rate']
    return TxFrame(
        field=ComplexSignal(field_samples, rate),
        signal=ComplexSignal(signal_samples, rate),
        tx_bits=bits,
        tx_symbols=qam16_map(bits).reshape(-1, cfg.n_data_bins),
        carrier_amplitude=header['carrier_amplitude'],
        config=cfg,
        tones=[DitherTone.from_dict(t) for t in header['tones']],
        dither_scale=header['dither_scale'],
    )
