"""
Scenarios

Experimental conditions as frozen dataclasses, JSON loading with dotted-path
overrides and content hashing for the output layout.
"""

import copy
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..channel.fiber import FiberConfig
from ..channel.noise import NoiseConfig
from ..dsbic.settings import DsbicConfig
from ..kk.kk import KkConfig
from ..txchain.dither import DitherTone
from ..txchain.ofdm import OfdmConfig
from ..utils.config import Config

SWEEP_AXES = ('dither_amplitude', 'snr_db', 'iterations', 'cspr_db')


class ScenarioError(ValueError):
    """Invalid scenario or sweep; the message starts with the dotted field path."""


def _build(cls, data: Any, path: str):
    """Instantiate a config dataclass, prefixing errors with its path."""
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected an object, got {type(data).__name__}")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ScenarioError(f"{path}.{unknown[0]}: unknown field")
    try:
        return cls.from_dict(data)
    except ScenarioError:
        raise
    except KeyError as e:
        raise ScenarioError(f"{path}.{e.args[0]}: required") from e
    except (ValueError, TypeError) as e:
        raise ScenarioError(f"{path}.{e}") from e


@dataclass(frozen=True)
class Scenario:
    """
    One experimental condition.

    Attributes:
        ofdm: Frame layout
        cspr_db: Carrier-to-signal power ratio
        tones: Injected dither tones
        dither_scale: A_scale in units of E0
        fiber: Span, or None for back-to-back
        noise: Optical noise
        kk: KK receiver settings
        dsbic: Cancellation settings, or None for the plain KK receiver only
        frames: Captures per scenario
        symbols_per_frame: Payload OFDM symbols per capture
        seed: Root seed of every random stream
    """

    ofdm: OfdmConfig = field(default_factory=OfdmConfig)
    cspr_db: float = Config.CSPR_DB
    tones: Tuple[DitherTone, ...] = ()
    dither_scale: float = Config.DITHER_SCALE
    fiber: Optional[FiberConfig] = None
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    kk: KkConfig = field(default_factory=KkConfig)
    dsbic: Optional[DsbicConfig] = field(default_factory=DsbicConfig)
    frames: int = Config.FRAMES
    symbols_per_frame: int = Config.SYMBOLS_PER_FRAME
    seed: int = Config.SEED

    def __post_init__(self):
        object.__setattr__(self, 'tones', tuple(self.tones))
        if not np.isfinite(self.cspr_db):
            raise ScenarioError(f"cspr_db: must be finite, got {self.cspr_db}")
        if not self.dither_scale > 0:
            raise ScenarioError(f"dither_scale: must be positive, got {self.dither_scale}")
        if int(self.frames) != self.frames or self.frames < 1:
            raise ScenarioError(f"frames: must be a positive integer, got {self.frames}")
        if int(self.symbols_per_frame) != self.symbols_per_frame or self.symbols_per_frame < 1:
            raise ScenarioError(
                f"symbols_per_frame: must be a positive integer, got {self.symbols_per_frame}"
            )
        nyquist = self.ofdm.sample_rate / 2
        for i, tone in enumerate(self.tones):
            if tone.frequency >= nyquist:
                raise ScenarioError(
                    f"tones.{i}.frequency: {tone.frequency} Hz is not below Nyquist ({nyquist} Hz)"
                )
        if self.dsbic is not None and self.dsbic.objective_scope == 'pilots' \
                and self.ofdm.pilot_every is None:
            raise ScenarioError("dsbic.objective_scope: 'pilots' needs ofdm.pilot_every to be set")
        object.__setattr__(self, 'frames', int(self.frames))
        object.__setattr__(self, 'symbols_per_frame', int(self.symbols_per_frame))
        if int(self.seed) != self.seed or self.seed < 0:
            raise ScenarioError(f"seed: must be a non-negative integer, got {self.seed}")
        object.__setattr__(self, 'seed', int(self.seed))

    @property
    def samples_per_frame(self) -> int:
        return (self.symbols_per_frame + self.ofdm.training_symbols) * self.ofdm.symbol_length

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ofdm': self.ofdm.to_dict(),
            'cspr_db': self.cspr_db,
            'tones': [tone.to_dict() for tone in self.tones],
            'dither_scale': self.dither_scale,
            'fiber': self.fiber.to_dict() if self.fiber is not None else None,
            'noise': self.noise.to_dict(),
            'kk': self.kk.to_dict(),
            'dsbic': self.dsbic.to_dict() if self.dsbic is not None else None,
            'frames': self.frames,
            'symbols_per_frame': self.symbols_per_frame,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Scenario':
        if not isinstance(data, dict):
            raise ScenarioError(f"scenario: expected an object, got {type(data).__name__}")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ScenarioError(f"{unknown[0]}: unknown field")

        nested = ('ofdm', 'tones', 'fiber', 'noise', 'kk', 'dsbic')
        kwargs = {k: v for k, v in data.items() if k not in nested}
        if 'ofdm' in data:
            kwargs['ofdm'] = _build(OfdmConfig, data['ofdm'], 'ofdm')
        if 'tones' in data:
            tones = data['tones']
            if not isinstance(tones, list):
                raise ScenarioError("tones: expected a list")
            kwargs['tones'] = tuple(
                _build(DitherTone, tone, f"tones.{i}") for i, tone in enumerate(tones)
            )
        if data.get('fiber') is not None:
            kwargs['fiber'] = _build(FiberConfig, data['fiber'], 'fiber')
        if 'noise' in data:
            kwargs['noise'] = _build(NoiseConfig, data['noise'] or {}, 'noise')
        if 'kk' in data:
            kwargs['kk'] = _build(KkConfig, data['kk'], 'kk')
        if 'dsbic' in data:
            kwargs['dsbic'] = (
                _build(DsbicConfig, data['dsbic'], 'dsbic') if data['dsbic'] is not None else None
            )
        try:
            return cls(**kwargs)
        except ScenarioError:
            raise
        except (ValueError, TypeError) as e:
            raise ScenarioError(str(e)) from e


def scenario_hash(payload: Dict[str, Any]) -> str:
    """First 12 hex digits of the SHA-256 of the canonical JSON form."""
    canonical = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:12]


def parse_override(text: str) -> Tuple[str, Any]:
    """Split 'a.b=value'; the value is parsed as JSON, else kept as a string."""
    if '=' not in text:
        raise ScenarioError(f"{text}: override must look like key=value")
    key, raw = text.split('=', 1)
    key = key.strip()
    if not key:
        raise ScenarioError(f"{text}: empty key")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """
    Set dotted paths in a copy of a JSON object.

    Missing or null intermediate objects are created; list elements are
    addressed by index ('tones.0.amplitude=0.05').

    Args:
        data: Parsed scenario or sweep JSON
        overrides: 'key=value' strings

    Returns:
        Updated copy
    """
    result = copy.deepcopy(data)
    for text in overrides:
        key, value = parse_override(text)
        parts = key.split('.')
        node = result
        for depth, part in enumerate(parts[:-1]):
            path = '.'.join(parts[:depth + 1])
            if isinstance(node, list):
                node = node[_list_index(node, part, path)]
                continue
            if node.get(part) is None:
                node[part] = {}
            node = node[part]
            if not isinstance(node, (dict, list)):
                raise ScenarioError(f"{path}: cannot descend into a scalar")
        last = parts[-1]
        if isinstance(node, list):
            node[_list_index(node, last, key)] = value
        else:
            node[last] = value
    return result


def _list_index(node: List[Any], part: str, path: str) -> int:
    try:
        index = int(part)
    except ValueError as e:
        raise ScenarioError(f"{path}: list index expected") from e
    if not -len(node) <= index < len(node):
        raise ScenarioError(f"{path}: index out of range")
    return index


def load_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path}: invalid JSON ({e})") from e


def load_scenario(path: str, overrides: Sequence[str] = ()) -> Scenario:
    """Read a scenario JSON file and apply overrides."""
    return Scenario.from_dict(apply_overrides(load_json(path), overrides))


def derive_seed(seed: int, index: int) -> int:
    """Independent child seed for stream number index."""
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


@dataclass(frozen=True)
class SweepSpec:
    """
    A scenario swept along one axis.

    Attributes:
        base: Scenario every point starts from
        axis: 'dither_amplitude', 'snr_db', 'iterations' or 'cspr_db'
        values: Axis values in sweep order
    """

    base: Scenario
    axis: str
    values: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        if self.axis not in SWEEP_AXES:
            raise ScenarioError(f"axis: must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            raise ScenarioError("values: must not be empty")
        if self.axis == 'dither_amplitude' and not self.base.tones:
            raise ScenarioError("base.tones: a dither_amplitude sweep needs at least one tone")
        if self.axis == 'iterations' and self.base.dsbic is None:
            raise ScenarioError("base.dsbic: an iterations sweep needs a dsbic config")
        for i, value in enumerate(self.values):
            if value is None:
                raise ScenarioError(f"values.{i}: {self.axis} sweep needs numeric values")
            self.point(i)

    def point(self, index: int) -> Scenario:
        """Scenario of sweep point index with its own derived seed."""
        value = self.values[index]
        base = self.base
        try:
            if self.axis == 'dither_amplitude':
                tones = tuple(dataclasses.replace(t, amplitude=float(value)) for t in base.tones)
                scenario = dataclasses.replace(base, tones=tones)
            elif self.axis == 'snr_db':
                noise = dataclasses.replace(base.noise, snr_db=float(value))
                scenario = dataclasses.replace(base, noise=noise)
            elif self.axis == 'iterations':
                dsbic = dataclasses.replace(base.dsbic, iterations=int(value))
                scenario = dataclasses.replace(base, dsbic=dsbic)
            else:
                scenario = dataclasses.replace(base, cspr_db=float(value))
        except ScenarioError:
            raise
        except (ValueError, TypeError) as e:
            raise ScenarioError(f"values.{index}: {e}") from e
        return dataclasses.replace(scenario, seed=derive_seed(base.seed, index))

    def to_dict(self) -> Dict[str, Any]:
        return {'base': self.base.to_dict(), 'axis': self.axis, 'values': list(self.values)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepSpec':
        if not isinstance(data, dict):
            raise ScenarioError(f"sweep: expected an object, got {type(data).__name__}")
        unknown = sorted(set(data) - {'base', 'axis', 'values'})
        if unknown:
            raise ScenarioError(f"{unknown[0]}: unknown field")
        for key in ('axis', 'values'):
            if key not in data:
                raise ScenarioError(f"{key}: required")
        try:
            base = Scenario.from_dict(data.get('base', {}))
        except ScenarioError as e:
            raise ScenarioError(f"base.{e}") from e
        if not isinstance(data['values'], list):
            raise ScenarioError("values: expected a list")
        return cls(base=base, axis=data['axis'], values=tuple(data['values']))


def load_sweep(path: str, overrides: Sequence[str] = ()) -> SweepSpec:
    """
    Read a sweep JSON file.

    Overrides address the base scenario unless they start with 'base.',
    'axis' or 'values'.
    """
    qualified = []
    for text in overrides:
        key = text.split('=', 1)[0].strip()
        if key.startswith('base.') or key in ('axis', 'values') or key.startswith('values.'):
            qualified.append(text)
        else:
            qualified.append(f"base.{text}")
    return SweepSpec.from_dict(apply_overrides(load_json(path), qualified))
