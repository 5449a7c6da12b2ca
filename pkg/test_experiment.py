"""Tests for scenarios, overrides, the runner, sweeps, PSD dumps and the CLI."""
import glob
import json
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

import dsbic_sim
from src.channel import NoiseConfig
from src.dsbic import DsbicConfig, ToneGrid, multiplication_count
from src.experiment import (
    CURVE_COLUMNS,
    CurveRow,
    Scenario,
    ScenarioError,
    SweepSpec,
    apply_overrides,
    derive_seed,
    dump_psd,
    load_scenario,
    load_sweep,
    parse_override,
    read_curve,
    run_scenario,
    run_sweep,
    scenario_hash,
    simulate_frame,
    write_curve,
)
from src.experiment import runner
from src.txchain import DitherTone, OfdmConfig
from src.utils.file_utils import load_samples

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios')

TINY_DSBIC = DsbicConfig(
    grid=ToneGrid((0.0, 0.02), (0.0, 0.52)), iterations=1, tone_frequencies=(60e6,)
)


def _tiny(**changes):
    settings = dict(tones=(), dsbic=TINY_DSBIC, frames=1, symbols_per_frame=2)
    settings.update(changes)
    return Scenario(**settings)


class TestScenario(unittest.TestCase):
    """Test scenario validation and serialization."""

    def test_defaults_round_trip(self):
        """Test that to_dict / from_dict is lossless."""
        scenario = Scenario(
            tones=(DitherTone(0.05, 60e6, 1.04),),
            ofdm=OfdmConfig(pilot_every=8),
        )
        self.assertEqual(Scenario.from_dict(scenario.to_dict()).to_dict(), scenario.to_dict())

    def test_samples_per_frame(self):
        """Test (payload + training) symbols times the symbol length."""
        self.assertEqual(Scenario(symbols_per_frame=4).samples_per_frame, 5 * 1056)

    def test_nested_error_path(self):
        """Test that nested errors carry their dotted path."""
        with self.assertRaises(ScenarioError) as ctx:
            Scenario.from_dict({'ofdm': {'start_bin': 400}})
        self.assertTrue(str(ctx.exception).startswith('ofdm.start_bin'))

    def test_unknown_field(self):
        """Test that unknown keys are rejected at any depth."""
        with self.assertRaises(ScenarioError) as ctx:
            Scenario.from_dict({'ofdm': {'foo': 1}})
        self.assertEqual(str(ctx.exception), 'ofdm.foo: unknown field')
        with self.assertRaises(ScenarioError):
            Scenario.from_dict({'bogus': 1})

    def test_tone_error_path(self):
        """Test list indices in error paths."""
        data = {'tones': [
            {'amplitude': 0.1, 'frequency': 60e6},
            {'amplitude': -0.1, 'frequency': 156e6},
        ]}
        with self.assertRaises(ScenarioError) as ctx:
            Scenario.from_dict(data)
        self.assertTrue(str(ctx.exception).startswith('tones.1.amplitude'))

    def test_tone_above_nyquist(self):
        """Test the Nyquist check against the OFDM sample rate."""
        with self.assertRaises(ScenarioError) as ctx:
            Scenario.from_dict({'tones': [{'amplitude': 0.1, 'frequency': 40e9}]})
        self.assertTrue(str(ctx.exception).startswith('tones.0.frequency'))

    def test_pilot_scope_needs_pilots(self):
        """Test that the pilot objective requires comb pilots."""
        with self.assertRaises(ScenarioError):
            Scenario.from_dict({'dsbic': {'objective_scope': 'pilots'}})
        Scenario.from_dict({'dsbic': {'objective_scope': 'pilots'}, 'ofdm': {'pilot_every': 8}})

    def test_invalid_counts(self):
        """Test frame and seed checks."""
        with self.assertRaises(ScenarioError):
            Scenario(frames=0)
        with self.assertRaises(ScenarioError):
            Scenario(seed=-1)

    def test_hash(self):
        """Test that the hash is stable and content-sensitive."""
        a = scenario_hash(Scenario().to_dict())
        self.assertEqual(len(a), 12)
        self.assertEqual(a, scenario_hash(Scenario().to_dict()))
        self.assertNotEqual(a, scenario_hash(Scenario(seed=1).to_dict()))

    def test_bundled_scenarios_load(self):
        """Test that every shipped scenario and sweep parses."""
        for path in glob.glob(os.path.join(SCENARIO_DIR, '*.json')):
            with open(path) as f:
                data = json.load(f)
            if 'axis' in data:
                self.assertIsInstance(load_sweep(path), SweepSpec)
            else:
                self.assertIsInstance(load_scenario(path), Scenario)


class TestOverrides(unittest.TestCase):
    """Test dotted-path overrides."""

    def test_parse(self):
        """Test JSON values and the string fallback."""
        self.assertEqual(parse_override('a.b=2'), ('a.b', 2))
        self.assertEqual(parse_override('dsbic=null'), ('dsbic', None))
        self.assertEqual(parse_override('dsbic.alpha_mode=grid_only'), ('dsbic.alpha_mode', 'grid_only'))
        with self.assertRaises(ScenarioError):
            parse_override('frames')

    def test_creates_null_intermediate(self):
        """Test that a null parent becomes an object."""
        out = apply_overrides({'dsbic': None}, ['dsbic.iterations=2'])
        self.assertEqual(out, {'dsbic': {'iterations': 2}})

    def test_list_index(self):
        """Test addressing list elements."""
        data = {'tones': [{'amplitude': 0.05}]}
        out = apply_overrides(data, ['tones.0.amplitude=0.1'])
        self.assertEqual(out['tones'][0]['amplitude'], 0.1)
        self.assertEqual(data['tones'][0]['amplitude'], 0.05)
        with self.assertRaises(ScenarioError):
            apply_overrides(data, ['tones.3.amplitude=0.1'])

    def test_sweep_overrides_target_base(self):
        """Test that unqualified sweep overrides land in the base scenario."""
        spec = load_sweep(os.path.join(SCENARIO_DIR, 'sweep_snr_btb.json'), ['frames=1'])
        self.assertEqual(spec.base.frames, 1)


class TestSweepSpec(unittest.TestCase):
    """Test sweep definitions."""

    def test_points_get_derived_seeds(self):
        """Test per-point seeds and axis values."""
        spec = SweepSpec(Scenario(seed=5), 'cspr_db', (6.0, 9.0))
        self.assertEqual(spec.point(1).cspr_db, 9.0)
        self.assertEqual(spec.point(0).seed, derive_seed(5, 0))
        self.assertNotEqual(spec.point(0).seed, spec.point(1).seed)

    def test_dither_axis_sets_every_tone(self):
        """Test the dither_amplitude axis."""
        base = Scenario(tones=(DitherTone(0.05, 60e6), DitherTone(0.05, 156e6)))
        point = SweepSpec(base, 'dither_amplitude', (0.2,)).point(0)
        self.assertEqual([t.amplitude for t in point.tones], [0.2, 0.2])

    def test_invalid_sweeps(self):
        """Test axis, value and base checks."""
        with self.assertRaises(ScenarioError):
            SweepSpec(Scenario(), 'bandwidth', (1.0,))
        with self.assertRaises(ScenarioError):
            SweepSpec(Scenario(), 'cspr_db', ())
        with self.assertRaises(ScenarioError):
            SweepSpec(Scenario(), 'dither_amplitude', (0.1,))
        with self.assertRaises(ScenarioError):
            SweepSpec(Scenario(dsbic=None), 'iterations', (1, 2))

    def test_null_values_rejected_at_load(self):
        """Test that a null axis value fails when the sweep is built, not when it runs."""
        with self.assertRaisesRegex(ScenarioError, r"values\.1"):
            SweepSpec(Scenario(), 'snr_db', (20.0, None))
        data = SweepSpec(Scenario(), 'snr_db', (20.0,)).to_dict()
        data['values'] = [None]
        with self.assertRaises(ScenarioError):
            SweepSpec.from_dict(data)

    def test_derive_seed_deterministic(self):
        """Test that child seeds are reproducible and distinct."""
        seeds = [derive_seed(0, i) for i in range(10)]
        self.assertEqual(seeds, [derive_seed(0, i) for i in range(10)])
        self.assertEqual(len(set(seeds)), 10)


class TestRunScenario(unittest.TestCase):
    """Test end-to-end scenario runs."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)

    def test_clean_btb_is_error_free(self):
        """Test that no dither and no noise gives zero errors on both receivers."""
        result = run_scenario(_tiny())
        self.assertEqual(result.kk_ber.bit_errors, 0)
        self.assertEqual(result.dsbic_ber.bit_errors, 0)
        self.assertEqual([row.receiver for row in result.rows()], ['kk', 'dsbic'])
        self.assertEqual(result.rows()[0].axis, 'run')

    def test_frames_are_reproducible(self):
        """Test that a frame depends only on (seed, index)."""
        scenario = _tiny(noise=NoiseConfig(20.0))
        a = simulate_frame(scenario, 1)
        b = simulate_frame(scenario, 1)
        np.testing.assert_array_equal(a.current.samples, b.current.samples)
        c = simulate_frame(scenario, 0)
        self.assertFalse(np.array_equal(a.frame.tx_bits, c.frame.tx_bits))

    def test_artifacts_byte_identical(self):
        """Test that two runs write identical files."""
        scenario = _tiny(tones=(DitherTone(0.05, 60e6, 1.04),))
        first = os.path.join(self.temp_dir, 'a')
        second = os.path.join(self.temp_dir, 'b')
        digest = run_scenario(scenario, out_dir=first).scenario_hash
        run_scenario(scenario, out_dir=second)
        for name in ('curve.csv', 'summary.json'):
            with open(os.path.join(first, digest, name), 'rb') as f:
                a = f.read()
            with open(os.path.join(second, digest, name), 'rb') as f:
                b = f.read()
            self.assertEqual(a, b)

    def test_summary_layout(self):
        """Test the summary.json keys and the curve header."""
        result = run_scenario(_tiny(), out_dir=self.temp_dir)
        scenario_dir = os.path.join(self.temp_dir, result.scenario_hash)
        with open(os.path.join(scenario_dir, 'summary.json')) as f:
            summary = json.load(f)
        self.assertEqual(summary['schema_version'], 1)
        self.assertEqual(summary['scenario_hash'], result.scenario_hash)
        self.assertEqual(set(summary['receivers']), {'kk', 'dsbic'})
        self.assertEqual([r['iteration'] for r in summary['iterations']], [0, 1])
        self.assertAlmostEqual(summary['bit_rate'], 76.6e9, delta=0.05e9)
        with open(os.path.join(scenario_dir, 'curve.csv')) as f:
            self.assertEqual(f.readline().strip(), ','.join(CURVE_COLUMNS))

    def test_plain_kk_unaffected_by_dsbic(self):
        """Test that enabling DSBIC leaves the plain KK result unchanged."""
        tones = (DitherTone(0.1, 60e6, 0.5),)
        with_dsbic = run_scenario(_tiny(tones=tones))
        without = run_scenario(_tiny(tones=tones, dsbic=None))
        self.assertEqual(with_dsbic.kk_ber, without.kk_ber)
        self.assertEqual(with_dsbic.kk_evm, without.kk_evm)
        self.assertIsNone(without.dsbic_ber)
        self.assertEqual(len(without.rows()), 1)

    def test_dsbic_beats_kk(self):
        """Test a strong dither tone end to end."""
        dsbic = DsbicConfig(iterations=2, tone_frequencies=(60e6,))
        scenario = _tiny(
            tones=(DitherTone(0.3, 60e6, 1.56),), dsbic=dsbic, symbols_per_frame=4
        )
        result = run_scenario(scenario)
        self.assertLess(result.dsbic_ber.ber, result.kk_ber.ber)
        self.assertEqual(
            result.multiplications, multiplication_count(dsbic, scenario.samples_per_frame)
        )

    def test_save_current(self):
        """Test the stored frame and photocurrent."""
        scenario = _tiny(dsbic=None)
        result = run_scenario(scenario, out_dir=self.temp_dir, save_current=True)
        scenario_dir = os.path.join(self.temp_dir, result.scenario_hash)
        self.assertTrue(os.path.exists(os.path.join(scenario_dir, 'frame0.tx')))
        samples, meta = load_samples(os.path.join(scenario_dir, 'current0.bin'))
        self.assertEqual(samples.size, scenario.samples_per_frame)
        self.assertEqual(meta['scenario_hash'], result.scenario_hash)


class TestCurveFile(unittest.TestCase):
    """Test the curve CSV."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)

    def test_round_trip(self):
        """Test write_curve / read_curve."""
        rows = [
            CurveRow('snr_db', 14.0, 'kk', 0.0125, 250, 20000, False, -14.5),
            CurveRow('snr_db', 14.0, 'dsbic', 0.0025, 50, 20000, True, -18.25),
        ]
        path = write_curve(rows, os.path.join(self.temp_dir, 'curve.csv'))
        self.assertEqual(read_curve(path), rows)

    def test_inconsistent_row_rejected(self):
        """Test that a row whose ber disagrees with its counts is refused."""
        row = CurveRow('snr_db', 14.0, 'kk', 0.0125, 250, 20000, False, -14.5).to_dict()
        row['bit_errors'] = 253
        with self.assertRaises(ValueError):
            CurveRow.from_dict(row)


class TestRunSweep(unittest.TestCase):
    """Test sweeps."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.spec = SweepSpec(_tiny(dsbic=None, symbols_per_frame=1), 'cspr_db', (9.0, 12.0))

    def tearDown(self):
        if os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)

    def test_rows_and_summary(self):
        """Test one row per point and receiver, in sweep order."""
        result = run_sweep(self.spec, out_dir=self.temp_dir)
        self.assertEqual([row.value for row in result.rows], [9.0, 12.0])
        self.assertEqual(result.crossings, {'kk': None})
        self.assertEqual(result.failures, [])
        with open(os.path.join(self.temp_dir, result.sweep_hash, 'summary.json')) as f:
            summary = json.load(f)
        self.assertEqual(summary['axis'], 'cspr_db')
        self.assertEqual(len(summary['points']), 2)

    def test_processes_match_serial(self):
        """Test that worker processes give the same rows."""
        serial = run_sweep(self.spec)
        parallel = run_sweep(self.spec, workers=2)
        self.assertEqual(serial.rows, parallel.rows)

    def test_continue_on_error(self):
        """Test that a failing point is recorded when asked to continue."""
        real_run = runner.run_scenario

        def flaky(scenario, *args, **kwargs):
            if scenario.cspr_db == 12.0:
                raise RuntimeError('simulated failure')
            return real_run(scenario, *args, **kwargs)

        with patch('src.experiment.runner.run_scenario', side_effect=flaky):
            with self.assertRaises(RuntimeError):
                run_sweep(self.spec)
            with self.assertLogs('src.experiment.runner', level='ERROR'):
                result = run_sweep(self.spec, continue_on_error=True)
        self.assertEqual(len(result.failures), 1)
        self.assertEqual(result.failures[0]['value'], 12.0)
        self.assertEqual(len(result.rows), 1)


class TestBundledSweeps(unittest.TestCase):
    """Test the dither-tolerance and sensitivity curves of the shipped sweeps."""

    def _crossings(self, name):
        result = run_sweep(load_sweep(os.path.join(SCENARIO_DIR, name)), workers=2)
        self.assertEqual(result.failures, [])
        return result.crossings

    def test_dither_tolerance_extended(self):
        """Test that DSBIC tolerates at least one grid step more dither than KK."""
        crossings = self._crossings('sweep_dither_btb.json')
        self.assertIsNotNone(crossings['kk'])
        if crossings['dsbic'] is not None:
            self.assertGreaterEqual(crossings['dsbic'], crossings['kk'] + 0.02)

    def _assert_sensitivity_gain(self, crossings):
        self.assertIsNotNone(crossings['dsbic'])
        if crossings['kk'] is not None:
            self.assertGreaterEqual(crossings['kk'] - crossings['dsbic'], 1.0)

    def test_sensitivity_gain_back_to_back(self):
        """Test a gain of at least 1 dB at the HD-FEC limit without fiber."""
        self._assert_sensitivity_gain(self._crossings('sweep_sensitivity_btb.json'))

    def test_sensitivity_gain_80km(self):
        """Test a gain of at least 1 dB at the HD-FEC limit over 80 km."""
        self._assert_sensitivity_gain(self._crossings('sweep_sensitivity_80km.json'))


class TestDumpPsd(unittest.TestCase):
    """Test PSD dumps at pipeline stages."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)

    def test_tx_field_single_sideband(self):
        """Test that no negative-frequency bin comes within 60 dB of the signal band."""
        scenario = _tiny(dsbic=None, symbols_per_frame=4)
        est = dump_psd(scenario, 'tx_field', out_dir=self.temp_dir)

        self.assertEqual(est.nfft, scenario.ofdm.fft_size)
        negative = np.max(est.band(-32e9, -1.0))
        signal = np.max(est.band(1e9, 21e9))
        self.assertLess(negative - signal, -60.0)
        digest = scenario_hash(scenario.to_dict())
        self.assertTrue(os.path.exists(os.path.join(self.temp_dir, digest, 'psd_tx_field.csv')))

    def test_rx_current_shows_dither(self):
        """Test the dither line in the photocurrent."""
        scenario = _tiny(tones=(DitherTone(0.1, 60e6, 1.56),), dsbic=None, symbols_per_frame=4)
        est = dump_psd(scenario, 'rx_current', nfft=4096)
        peak = np.max(est.band(40e6, 80e6))
        floor = np.median(est.band(200e6, 900e6))
        self.assertGreaterEqual(peak - floor, 20.0)

    def test_corrected_current_suppresses_dither(self):
        """Test that DSBIC removes most of the dither line."""
        scenario = _tiny(
            tones=(DitherTone(0.1, 60e6, 1.56),),
            dsbic=DsbicConfig(iterations=2, tone_frequencies=(60e6,)),
            symbols_per_frame=4,
        )
        before = dump_psd(scenario, 'rx_current', nfft=4096)
        after = dump_psd(scenario, 'corrected_current', nfft=4096)
        reduction = np.max(before.band(40e6, 80e6)) - np.max(after.band(40e6, 80e6))
        self.assertGreaterEqual(reduction, 15.0)

    def test_invalid_stage(self):
        """Test the stage checks."""
        with self.assertRaises(ScenarioError):
            dump_psd(_tiny(), 'after_fiber')
        with self.assertRaises(ScenarioError):
            dump_psd(_tiny(dsbic=None), 'corrected_current')


class TestCli(unittest.TestCase):
    """Test the command-line entry point."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.scenario = os.path.join(SCENARIO_DIR, 'btb_dither.json')
        self.quick = ['--set', 'frames=1', '--set', 'symbols_per_frame=1', '--set', 'dsbic=null']

    def tearDown(self):
        if os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)

    def test_run(self):
        """Test that run writes the scenario artifacts."""
        code = dsbic_sim.main(['--out-dir', self.temp_dir] + self.quick + ['run', self.scenario])
        self.assertEqual(code, 0)
        self.assertEqual(len(glob.glob(os.path.join(self.temp_dir, '*', 'curve.csv'))), 1)

    def test_psd(self):
        """Test the psd command."""
        args = ['--out-dir', self.temp_dir] + self.quick
        code = dsbic_sim.main(args + ['psd', self.scenario, '--stage', 'tx_field', '--nfft', '512'])
        self.assertEqual(code, 0)
        self.assertEqual(len(glob.glob(os.path.join(self.temp_dir, '*', 'psd_tx_field.csv'))), 1)

    def test_missing_file(self):
        """Test that errors map to exit status 1."""
        code = dsbic_sim.main(['--out-dir', self.temp_dir, 'run', 'no_such_file.json'])
        self.assertEqual(code, 1)

    def test_invalid_override(self):
        """Test that a bad override is reported, not raised."""
        code = dsbic_sim.main(['--out-dir', self.temp_dir, '--set', 'frames=0', 'run', self.scenario])
        self.assertEqual(code, 1)


if __name__ == '__main__':
    unittest.main()
