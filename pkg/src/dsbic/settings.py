"""
DSBIC Settings

Search grid and loop configuration of the dither-beat cancellation.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from ..utils.config import Config

ALPHA_MODES = ('cross_correlation', 'grid_only')
OBJECTIVES = ('training_error', 'decision_error')
OBJECTIVE_SCOPES = ('payload', 'pilots')


def _uniform(step: float, points: int) -> Tuple[float, ...]:
    return tuple(float(round(step * i, 12)) for i in range(points))


def _strictly_increasing(name: str, values) -> Tuple[float, ...]:
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ValueError(f"{name}: must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: values must be finite")
    if arr.size > 1 and np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name}: must be strictly increasing")
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class ToneGrid:
    """
    Candidate tone amplitudes (fraction of E0) and angles (rad).

    The default is 25 amplitudes 0.00..0.48 and 12 angles 0..11*0.52.
    """

    amplitude_values: Tuple[float, ...] = field(
        default_factory=lambda: _uniform(Config.GRID_AMPLITUDE_STEP, Config.GRID_AMPLITUDE_POINTS)
    )
    angle_values: Tuple[float, ...] = field(
        default_factory=lambda: _uniform(Config.GRID_ANGLE_STEP, Config.GRID_ANGLE_POINTS)
    )

    def __post_init__(self):
        amplitudes = _strictly_increasing('amplitude_values', self.amplitude_values)
        if amplitudes[0] < 0:
            raise ValueError("amplitude_values: must be >= 0")
        object.__setattr__(self, 'amplitude_values', amplitudes)
        object.__setattr__(
            self, 'angle_values', _strictly_increasing('angle_values', self.angle_values)
        )

    @classmethod
    def uniform(
        cls,
        amplitude_step: float,
        amplitude_points: int,
        angle_step: float = Config.GRID_ANGLE_STEP,
        angle_points: int = Config.GRID_ANGLE_POINTS,
    ) -> 'ToneGrid':
        return cls(_uniform(amplitude_step, amplitude_points), _uniform(angle_step, angle_points))

    @property
    def size(self) -> int:
        return len(self.amplitude_values) * len(self.angle_values)

    def candidates(self):
        """(amplitude, angle) pairs, amplitude-major."""
        return [(m, theta) for m in self.amplitude_values for theta in self.angle_values]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'amplitude_values': list(self.amplitude_values),
            'angle_values': list(self.angle_values),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ToneGrid':
        return cls(tuple(data['amplitude_values']), tuple(data['angle_values']))


@dataclass(frozen=True)
class DsbicConfig:
    """
    Attributes:
        grid: Candidate amplitudes and angles
        iterations: Reconstruct-and-subtract passes
        tone_frequencies: Dither frequencies known from the bias controller (Hz)
        alpha_mode: 'cross_correlation' scales by m_hat / m', 'grid_only' uses 1
        objective: 'training_error' (known payload) or 'decision_error' (blind)
        objective_scope: 'payload' or 'pilots' (comb pilots only)
        band_limit: Project E_s' onto the occupied band before reconstruction
        workers: Threads evaluating grid candidates
    """

    grid: ToneGrid = field(default_factory=ToneGrid)
    iterations: int = Config.DSBIC_ITERATIONS
    tone_frequencies: Tuple[float, ...] = Config.DITHER_FREQUENCIES
    alpha_mode: str = 'cross_correlation'
    objective: str = 'training_error'
    objective_scope: str = 'payload'
    band_limit: bool = True
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.grid, dict):
            object.__setattr__(self, 'grid', ToneGrid.from_dict(self.grid))
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError(f"iterations: must be a positive integer, got {self.iterations}")
        freqs = tuple(float(f) for f in self.tone_frequencies)
        if not freqs:
            raise ValueError("tone_frequencies: at least one tone is needed")
        if any(f <= 0 for f in freqs):
            raise ValueError(f"tone_frequencies: must be positive, got {list(freqs)}")
        if len(set(freqs)) != len(freqs):
            raise ValueError("tone_frequencies: duplicate frequency")
        if self.alpha_mode not in ALPHA_MODES:
            raise ValueError(f"alpha_mode: must be one of {ALPHA_MODES}, got {self.alpha_mode!r}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective: must be one of {OBJECTIVES}, got {self.objective!r}")
        if self.objective_scope not in OBJECTIVE_SCOPES:
            raise ValueError(
                f"objective_scope: must be one of {OBJECTIVE_SCOPES}, got {self.objective_scope!r}"
            )
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValueError(f"workers: must be a positive integer, got {self.workers}")
        object.__setattr__(self, 'iterations', int(self.iterations))
        object.__setattr__(self, 'tone_frequencies', freqs)
        object.__setattr__(self, 'workers', int(self.workers))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'grid': self.grid.to_dict(),
            'iterations': self.iterations,
            'tone_frequencies': list(self.tone_frequencies),
            'alpha_mode': self.alpha_mode,
            'objective': self.objective,
            'objective_scope': self.objective_scope,
            'band_limit': self.band_limit,
            'workers': self.workers,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DsbicConfig':
        data = dict(data)
        if 'grid' in data:
            data['grid'] = ToneGrid.from_dict(data['grid'])
        if 'tone_frequencies' in data:
            data['tone_frequencies'] = tuple(data['tone_frequencies'])
        return cls(**data)
