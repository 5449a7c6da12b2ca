"""
Experiment Harness

Scenario and sweep definitions, end-to-end runs and artifact output.
"""

from .scenario import (
    SWEEP_AXES,
    ScenarioError,
    Scenario,
    SweepSpec,
    scenario_hash,
    parse_override,
    apply_overrides,
    load_scenario,
    load_sweep,
    derive_seed,
)
from .runner import (
    CURVE_COLUMNS,
    PSD_STAGES,
    CurveRow,
    FrameCapture,
    ScenarioResult,
    SweepResult,
    simulate_frame,
    run_scenario,
    run_sweep,
    dump_psd,
    write_curve,
    read_curve,
)

__all__ = [
    'SWEEP_AXES',
    'ScenarioError',
    'Scenario',
    'SweepSpec',
    'scenario_hash',
    'parse_override',
    'apply_overrides',
    'load_scenario',
    'load_sweep',
    'derive_seed',
    'CURVE_COLUMNS',
    'PSD_STAGES',
    'CurveRow',
    'FrameCapture',
    'ScenarioResult',
    'SweepResult',
    'simulate_frame',
    'run_scenario',
    'run_sweep',
    'dump_psd',
    'write_curve',
    'read_curve',
]
