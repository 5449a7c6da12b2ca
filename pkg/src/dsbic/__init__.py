"""
Dither-Signal Beat Interference Cancellation

Distortion reconstruction, blind grid search, alpha scaling and the
iterative loop around the KK receiver.
"""

from .settings import ToneGrid, DsbicConfig, ALPHA_MODES, OBJECTIVES, OBJECTIVE_SCOPES
from .distortion import (
    MultiplicationCounter,
    multiplication_count,
    reconstruct_distortion,
    estimate_dither_amplitude,
    compute_alpha,
)
from .search import (
    CandidateScore,
    ScoredCandidate,
    ToneSearchResult,
    CandidateScorer,
    grid_search_tone,
)
from .iterate import ToneEstimate, IterationRecord, DsbicReport, dsbic_iterate

__all__ = [
    'ToneGrid',
    'DsbicConfig',
    'ALPHA_MODES',
    'OBJECTIVES',
    'OBJECTIVE_SCOPES',
    'MultiplicationCounter',
    'multiplication_count',
    'reconstruct_distortion',
    'estimate_dither_amplitude',
    'compute_alpha',
    'CandidateScore',
    'ScoredCandidate',
    'ToneSearchResult',
    'CandidateScorer',
    'grid_search_tone',
    'ToneEstimate',
    'IterationRecord',
    'DsbicReport',
    'dsbic_iterate',
]
