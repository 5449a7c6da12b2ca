"""Tests for fiber dispersion, optical noise and photodetection."""
import unittest

import numpy as np

from src.channel import FiberConfig, NoiseConfig, apply_cd, apply_noise, photodetect
from src.sigproc import ComplexSignal

FS = 64e9


def _random_field(n, seed):
    rng = np.random.default_rng(seed)
    return ComplexSignal(rng.standard_normal(n) + 1j * rng.standard_normal(n), FS)


class TestFiberConfig(unittest.TestCase):
    """Test span parameters."""

    def test_accumulated_dispersion(self):
        """Test lambda^2 * D * L / c for 80 km of SSMF."""
        fiber = FiberConfig()
        expected = (1550e-9) ** 2 * 17e-6 * 80e3 / 299792458.0
        self.assertAlmostEqual(fiber.accumulated_dispersion / expected, 1.0, places=12)

    def test_negative_length_rejected(self):
        """Test the length check."""
        with self.assertRaises(ValueError):
            FiberConfig(length_km=-1.0)

    def test_dict_round_trip(self):
        """Test to_dict / from_dict."""
        fiber = FiberConfig(length_km=40.0)
        self.assertEqual(FiberConfig.from_dict(fiber.to_dict()), fiber)


class TestApplyCd(unittest.TestCase):
    """Test chromatic dispersion."""

    def setUp(self):
        self.fiber = FiberConfig(length_km=80.0)
        self.field = _random_field(4096, 21)

    def test_invert_restores_field(self):
        """Test that apply then undo is the identity."""
        back = apply_cd(apply_cd(self.field, self.fiber), self.fiber, invert=True)
        self.assertLess(np.max(np.abs(back.samples - self.field.samples)), 1e-9)

    def test_spans_compose(self):
        """Test that 30 km then 50 km equals 80 km."""
        first = apply_cd(self.field, FiberConfig(length_km=30.0))
        both = apply_cd(first, FiberConfig(length_km=50.0))
        direct = apply_cd(self.field, self.fiber)
        self.assertLess(np.max(np.abs(both.samples - direct.samples)), 1e-9)

    def test_energy_preserved(self):
        """Test the all-pass property."""
        out = apply_cd(self.field, self.fiber)
        self.assertAlmostEqual(out.power() / self.field.power(), 1.0, places=12)

    def test_zero_length_is_identity(self):
        """Test L = 0."""
        out = apply_cd(self.field, FiberConfig(length_km=0.0))
        np.testing.assert_array_equal(out.samples, self.field.samples)

    def test_group_delay(self):
        """Test that a narrowband pulse at f moves by lambda^2 * D * L * f / c."""
        fiber = FiberConfig(length_km=800.0)
        n = 8192
        f0 = 8e9
        t = np.arange(n)
        sigma = 200.0
        center = 3000.0
        envelope = np.exp(-0.5 * ((t - center) / sigma) ** 2)
        pulse = ComplexSignal(envelope * np.exp(2j * np.pi * f0 * t / FS), FS)

        out = apply_cd(pulse, fiber)
        power = np.abs(out.samples) ** 2
        centroid = np.sum(t * power) / np.sum(power)
        expected_shift = fiber.group_delay(f0) * FS
        self.assertGreater(expected_shift, 10.0)
        self.assertAlmostEqual(centroid - center, expected_shift, delta=0.5)


class TestApplyNoise(unittest.TestCase):
    """Test optical AWGN."""

    def setUp(self):
        self.field = _random_field(2 ** 16, 22)

    def test_no_snr_is_identity(self):
        """Test snr_db = None."""
        out = apply_noise(self.field, NoiseConfig(None))
        np.testing.assert_array_equal(out.samples, self.field.samples)

    def test_noise_power(self):
        """Test that the added power is P / 10^(snr/10)."""
        out = apply_noise(self.field, NoiseConfig(10.0, seed=3))
        added = np.mean(np.abs(out.samples - self.field.samples) ** 2)
        self.assertAlmostEqual(added / (self.field.power() / 10.0), 1.0, delta=0.05)

    def test_seeded(self):
        """Test that equal seeds give equal noise and different seeds do not."""
        a = apply_noise(self.field, NoiseConfig(15.0, seed=7))
        b = apply_noise(self.field, NoiseConfig(15.0, seed=7))
        c = apply_noise(self.field, NoiseConfig(15.0, seed=8))
        np.testing.assert_array_equal(a.samples, b.samples)
        self.assertFalse(np.array_equal(a.samples, c.samples))

    def test_invalid_settings(self):
        """Test the NoiseConfig checks."""
        with self.assertRaises(ValueError):
            NoiseConfig(float('inf'))
        with self.assertRaises(ValueError):
            NoiseConfig(10.0, seed=-1)


class TestPhotodetect(unittest.TestCase):
    """Test square-law detection."""

    def test_squared_magnitude(self):
        """Test I = |E|^2."""
        field = ComplexSignal([3 + 4j, 1j, -2.0], 1.0)
        np.testing.assert_allclose(photodetect(field).samples, [25.0, 1.0, 4.0])

    def test_dithered_expansion(self):
        """Test the six-term expansion of |E0 + Es + d|^2."""
        rng = np.random.default_rng(23)
        n = 10000
        e0 = 1.3
        es = 0.3 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        d = 0.1 * np.cos(2 * np.pi * 60e6 * np.arange(n) / FS + 0.4)
        current = photodetect(ComplexSignal(e0 + es + d, FS)).samples
        expansion = (
            e0 ** 2 + np.abs(es) ** 2 + d ** 2
            + 2 * e0 * es.real + 2 * e0 * d + 2 * d * es.real
        )
        self.assertLess(np.max(np.abs(current - expansion)), 1e-12)

    def test_sample_rate_kept(self):
        """Test that the current keeps the field's rate."""
        self.assertEqual(photodetect(_random_field(8, 1)).sample_rate, FS)


if __name__ == '__main__':
    unittest.main()
