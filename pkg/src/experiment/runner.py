"""
Experiment Runner

Executes scenarios end to end (transmitter, channel, photodiode, plain KK and
DSBIC receivers), sweeps one axis, and writes CSV/JSON artifacts.
"""

import dataclasses
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .scenario import Scenario, ScenarioError, SweepSpec, scenario_hash
from ..channel.detector import photodetect
from ..channel.fiber import apply_cd
from ..channel.noise import apply_noise
from ..dsbic.distortion import MultiplicationCounter
from ..dsbic.iterate import DsbicReport, dsbic_iterate
from ..kk.receiver import KkReceiver
from ..metrics.scoring import BerReport, EvmReport, compute_ber, compute_evm, threshold_crossing
from ..sigproc.signals import PsdEstimate, RealSignal
from ..sigproc.spectral import psd
from ..txchain.carrier import measure_cspr
from ..txchain.frame import TxFrame, build_frame, save_frame
from ..utils.config import Config
from ..utils.file_utils import ensure_directory, save_samples, write_json

logger = logging.getLogger(__name__)

CURVE_COLUMNS = [
    'axis', 'value', 'receiver', 'ber', 'bit_errors', 'bits_total', 'passes_hdfec', 'evm_db',
]
PSD_STAGES = ('tx_field', 'rx_current', 'corrected_current')
RECEIVERS = ('kk', 'dsbic')


@dataclass(frozen=True)
class CurveRow:
    """One receiver's result at one axis value."""

    axis: str
    value: float
    receiver: str
    ber: float
    bit_errors: int
    bits_total: int
    passes_hdfec: bool
    evm_db: float

    def __post_init__(self):
        BerReport(self.bit_errors, self.bits_total, self.ber, self.passes_hdfec)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CurveRow':
        passes = data['passes_hdfec']
        if isinstance(passes, str):
            passes = passes.strip().lower() == 'true'
        return cls(
            axis=str(data['axis']),
            value=float(data['value']),
            receiver=str(data['receiver']),
            ber=float(data['ber']),
            bit_errors=int(data['bit_errors']),
            bits_total=int(data['bits_total']),
            passes_hdfec=bool(passes),
            evm_db=float(data['evm_db']),
        )


def write_curve(rows: List[CurveRow], path: str) -> str:
    """Write curve rows as CSV with the documented column order."""
    ensure_directory(os.path.dirname(path))
    df = pd.DataFrame([row.to_dict() for row in rows], columns=CURVE_COLUMNS)
    df.to_csv(path, index=False, float_format='%.12g')
    return path


def read_curve(path: str) -> List[CurveRow]:
    df = pd.read_csv(path)
    return [CurveRow.from_dict(record) for record in df.to_dict(orient='records')]


@dataclass(frozen=True)
class FrameCapture:
    """One simulated capture at the photodiode."""

    frame: TxFrame
    current: RealSignal


@dataclass(eq=False)
class ScenarioResult:
    """
    Outcome of one scenario.

    Attributes:
        scenario: The executed scenario
        scenario_hash: Hash of scenario.to_dict()
        kk_ber: Plain KK receiver BER
        kk_evm: Plain KK receiver EVM
        dsbic_ber: DSBIC receiver BER, None without a dsbic config
        dsbic_evm: DSBIC receiver EVM
        reports: DSBIC report per frame
        iteration_ber: Aggregated BER per iteration (0 is plain KK)
        measured_cspr_db: Mean transmit CSPR over frames
        multiplications: Tallied grid-search multiplications
    """

    scenario: Scenario
    scenario_hash: str
    kk_ber: BerReport
    kk_evm: EvmReport
    dsbic_ber: Optional[BerReport] = None
    dsbic_evm: Optional[EvmReport] = None
    reports: List[DsbicReport] = field(default_factory=list)
    iteration_ber: List[Dict[str, Any]] = field(default_factory=list)
    measured_cspr_db: float = 0.0
    multiplications: int = 0

    def rows(self, axis: str = 'run', value: float = 0.0) -> List[CurveRow]:
        out = []
        for name, ber, evm in (
            ('kk', self.kk_ber, self.kk_evm),
            ('dsbic', self.dsbic_ber, self.dsbic_evm),
        ):
            if ber is None:
                continue
            out.append(CurveRow(
                axis=axis,
                value=float(value),
                receiver=name,
                ber=ber.ber,
                bit_errors=ber.bit_errors,
                bits_total=ber.bits_total,
                passes_hdfec=ber.passes_hdfec,
                evm_db=evm.evm_db,
            ))
        return out

    def summary(self) -> Dict[str, Any]:
        receivers = {'kk': dict(self.kk_ber.to_dict(), evm_db=self.kk_evm.evm_db)}
        if self.dsbic_ber is not None:
            receivers['dsbic'] = dict(self.dsbic_ber.to_dict(), evm_db=self.dsbic_evm.evm_db)
        return {
            'schema_version': Config.SCHEMA_VERSION,
            'scenario_hash': self.scenario_hash,
            'scenario': self.scenario.to_dict(),
            'receivers': receivers,
            'iterations': self.iteration_ber,
            'measured_cspr_db': self.measured_cspr_db,
            'bit_rate': self.scenario.ofdm.bit_rate,
            'multiplications': self.multiplications,
            'frames': [report.to_dict() for report in self.reports],
        }


def simulate_frame(scenario: Scenario, index: int) -> FrameCapture:
    """
    Transmit frame index of a scenario and detect it.

    Payload bits and noise draw from streams seeded by (seed, index), so
    frames are independent of each other and of evaluation order.
    """
    payload_seq, noise_seq = np.random.SeedSequence([scenario.seed, index]).spawn(2)
    frame = build_frame(
        scenario.ofdm,
        scenario.symbols_per_frame,
        cspr_db=scenario.cspr_db,
        tones=scenario.tones,
        rng=np.random.default_rng(payload_seq),
        dither_scale=scenario.dither_scale,
    )

    field_rx = frame.field
    if scenario.fiber is not None:
        field_rx = apply_cd(field_rx, scenario.fiber)
    noise_seed = int(np.random.SeedSequence(
        [int(noise_seq.generate_state(1)[0]), scenario.noise.seed]
    ).generate_state(1)[0])
    field_rx = apply_noise(field_rx, scenario.noise.with_seed(noise_seed))
    return FrameCapture(frame=frame, current=photodetect(field_rx))


def _aggregate_iterations(reports: List[DsbicReport]) -> List[Dict[str, Any]]:
    if not reports:
        return []
    records = [[report.baseline] + list(report.iterations) for report in reports]
    out = []
    for position in range(len(records[0])):
        per_frame = [frame_records[position] for frame_records in records]
        if any(record.bit_errors is None for record in per_frame):
            errors = None
            ber = None
        else:
            errors = int(sum(record.bit_errors for record in per_frame))
            ber = float(np.mean([record.ber for record in per_frame]))
        out.append({
            'iteration': per_frame[0].iteration,
            'bit_errors': errors,
            'ber': ber,
            'objective': float(np.mean([record.objective for record in per_frame])),
        })
    return out


def run_scenario(
    scenario: Scenario,
    out_dir: Optional[str] = None,
    workers: Optional[int] = None,
    save_current: bool = False,
) -> ScenarioResult:
    """
    Execute a scenario with both receivers on identical photocurrents.

    Args:
        scenario: Experimental condition
        out_dir: Write curve.csv and summary.json under out_dir/<hash>/
        workers: Grid-search threads, overriding dsbic.workers at run time
        save_current: Also store frame 0's transmit frame and photocurrent

    Returns:
        ScenarioResult
    """
    digest = scenario_hash(scenario.to_dict())
    dsbic_cfg = scenario.dsbic
    if dsbic_cfg is not None and workers is not None:
        dsbic_cfg = dataclasses.replace(dsbic_cfg, workers=int(workers))

    receiver = KkReceiver(scenario.ofdm, scenario.kk, scenario.fiber)
    counter = MultiplicationCounter()

    tx_bits, tx_symbols = [], []
    kk_bits, kk_symbols = [], []
    dsbic_bits, dsbic_symbols = [], []
    reports = []
    csprs = []

    for index in range(scenario.frames):
        logger.info(f"Scenario {digest}: frame {index + 1}/{scenario.frames}")
        capture = simulate_frame(scenario, index)
        frame = capture.frame
        tx_bits.append(frame.tx_bits)
        tx_symbols.append(frame.tx_symbols)
        csprs.append(measure_cspr(frame.field))

        symbols = receiver.demodulate(receiver.recover_field(capture.current))
        kk_symbols.append(symbols)
        kk_bits.append(receiver.decide(symbols))

        if dsbic_cfg is not None:
            report = dsbic_iterate(
                capture.current,
                dsbic_cfg,
                scenario.kk,
                scenario.ofdm,
                truth=frame.tx_bits,
                fiber=scenario.fiber,
                counter=counter,
            )
            reports.append(report)
            symbols = receiver.demodulate(report.field)
            dsbic_symbols.append(symbols)
            dsbic_bits.append(receiver.decide(symbols))

        if save_current and index == 0 and out_dir is not None:
            scenario_dir = Config.get_scenario_dir(digest, out_dir)
            save_frame(frame, os.path.join(scenario_dir, 'frame0.tx'))
            save_samples(
                capture.current.samples,
                os.path.join(scenario_dir, 'current0.bin'),
                capture.current.sample_rate,
                scenario_hash=digest,
            )

    truth_bits = np.concatenate(tx_bits)
    truth_symbols = np.vstack(tx_symbols)
    result = ScenarioResult(
        scenario=scenario,
        scenario_hash=digest,
        kk_ber=compute_ber(truth_bits, np.concatenate(kk_bits)),
        kk_evm=compute_evm(truth_symbols, np.vstack(kk_symbols)),
        reports=reports,
        iteration_ber=_aggregate_iterations(reports),
        measured_cspr_db=float(np.mean(csprs)),
        multiplications=counter.total,
    )
    if dsbic_cfg is not None:
        result.dsbic_ber = compute_ber(truth_bits, np.concatenate(dsbic_bits))
        result.dsbic_evm = compute_evm(truth_symbols, np.vstack(dsbic_symbols))

    logger.info(
        f"Scenario {digest}: KK BER={result.kk_ber.ber:.3e}"
        + (f", DSBIC BER={result.dsbic_ber.ber:.3e}" if result.dsbic_ber else "")
    )

    if out_dir is not None:
        scenario_dir = Config.get_scenario_dir(digest, out_dir)
        write_curve(result.rows(), os.path.join(scenario_dir, 'curve.csv'))
        write_json(result.summary(), os.path.join(scenario_dir, 'summary.json'))
    return result


@dataclass(eq=False)
class SweepResult:
    """
    Attributes:
        sweep_hash: Hash of the sweep spec
        rows: Curve rows of every successful point
        points: Per-point summary (value, scenario hash, BERs or error)
        crossings: HD-FEC crossing on the axis per receiver
    """

    sweep_hash: str
    rows: List[CurveRow]
    points: List[Dict[str, Any]]
    crossings: Dict[str, Optional[float]]

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return [point for point in self.points if 'error' in point]


def _run_point(payload: Tuple[Dict[str, Any], str, Any]) -> Dict[str, Any]:
    """Run one sweep point; module-level so worker processes can import it."""
    scenario_data, axis, value = payload
    scenario = Scenario.from_dict(scenario_data)
    result = run_scenario(scenario)
    return {
        'rows': [row.to_dict() for row in result.rows(axis, value)],
        'scenario_hash': result.scenario_hash,
        'iterations': result.iteration_ber,
    }


def _crossings(spec: SweepSpec, rows: List[CurveRow]) -> Dict[str, Optional[float]]:
    out = {}
    for name in RECEIVERS:
        curve = [row for row in rows if row.receiver == name]
        if not curve:
            continue
        out[name] = threshold_crossing([row.value for row in curve], [row.ber for row in curve])
    return out


def run_sweep(
    spec: SweepSpec,
    out_dir: Optional[str] = None,
    workers: int = 1,
    continue_on_error: bool = False,
) -> SweepResult:
    """
    Run every point of a sweep.

    Points execute in worker processes when workers > 1; results are
    collected and written in sweep order.

    Args:
        spec: Sweep definition
        out_dir: Write curve.csv and summary.json under out_dir/<hash>/
        workers: Concurrent points
        continue_on_error: Record failing points instead of aborting

    Returns:
        SweepResult
    """
    digest = scenario_hash(spec.to_dict())
    payloads = [
        (spec.point(i).to_dict(), spec.axis, value) for i, value in enumerate(spec.values)
    ]

    outcomes: List[Any] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_run_point, payload) for payload in payloads]
            for future in futures:
                try:
                    outcomes.append(future.result())
                except Exception as e:
                    outcomes.append(e)
    else:
        for payload in payloads:
            try:
                outcomes.append(_run_point(payload))
            except Exception as e:
                outcomes.append(e)

    rows: List[CurveRow] = []
    points = []
    for i, (value, outcome) in enumerate(zip(spec.values, outcomes)):
        if isinstance(outcome, Exception):
            if not continue_on_error:
                raise outcome
            logger.error(f"Sweep {digest}: point {i} ({spec.axis}={value}) failed: {outcome}")
            points.append({'index': i, 'value': value, 'error': str(outcome)})
            continue
        point_rows = [CurveRow.from_dict(row) for row in outcome['rows']]
        rows.extend(point_rows)
        point = {
            'index': i,
            'value': value,
            'scenario_hash': outcome['scenario_hash'],
            'iterations': outcome['iterations'],
        }
        for row in point_rows:
            point[f"{row.receiver}_ber"] = row.ber
        points.append(point)
        logger.info(f"Sweep {digest}: point {i + 1}/{len(spec.values)} done")

    result = SweepResult(
        sweep_hash=digest,
        rows=rows,
        points=points,
        crossings=_crossings(spec, rows),
    )

    if out_dir is not None:
        sweep_dir = Config.get_scenario_dir(digest, out_dir)
        write_curve(rows, os.path.join(sweep_dir, 'curve.csv'))
        write_json({
            'schema_version': Config.SCHEMA_VERSION,
            'scenario_hash': digest,
            'sweep': spec.to_dict(),
            'axis': spec.axis,
            'threshold': Config.HDFEC_THRESHOLD,
            'crossings': result.crossings,
            'points': points,
        }, os.path.join(sweep_dir, 'summary.json'))
    return result


def dump_psd(
    scenario: Scenario,
    stage: str,
    out_dir: Optional[str] = None,
    nfft: int = Config.PSD_NFFT,
    overlap: float = Config.PSD_OVERLAP,
) -> PsdEstimate:
    """
    PSD of frame 0 at a pipeline stage.

    The tx_field stage is analyzed symbol-synchronously: cyclic prefixes are
    dropped and each symbol is one rectangular fft_size segment, so the
    estimate has no leakage across symbol boundaries.

    Args:
        scenario: Experimental condition
        stage: 'tx_field', 'rx_current' or 'corrected_current'
        out_dir: Write psd_<stage>.csv under out_dir/<hash>/
        nfft: Welch segment length (current stages)
        overlap: Welch overlap fraction (current stages)

    Returns:
        PsdEstimate
    """
    if stage not in PSD_STAGES:
        raise ScenarioError(f"stage: must be one of {PSD_STAGES}, got {stage!r}")
    if stage == 'corrected_current' and scenario.dsbic is None:
        raise ScenarioError("dsbic: the corrected_current stage needs a dsbic config")

    capture = simulate_frame(scenario, 0)
    cfg = scenario.ofdm
    window = 'hann'
    if stage == 'tx_field':
        field = capture.frame.field
        blocks = field.samples.reshape(-1, cfg.symbol_length)[:, cfg.cp_len:]
        signal = field.with_samples(blocks.reshape(-1))
        nfft, overlap, window = cfg.fft_size, 0.0, 'boxcar'
    elif stage == 'rx_current':
        signal = capture.current
    else:
        report = dsbic_iterate(
            capture.current,
            scenario.dsbic,
            scenario.kk,
            scenario.ofdm,
            truth=capture.frame.tx_bits,
            fiber=scenario.fiber,
        )
        signal = report.corrected_current

    estimate = psd(signal, nfft, overlap, window=window)
    if out_dir is not None:
        digest = scenario_hash(scenario.to_dict())
        path = os.path.join(Config.get_scenario_dir(digest, out_dir), f"psd_{stage}.csv")
        ensure_directory(os.path.dirname(path))
        estimate.to_csv(path)
        logger.info(f"Wrote {path}")
    return estimate
