from dataclasses import replace

import numpy as np
import pytest

from pl_rffp.config import ImpairmentConfig
from pl_rffp.errors import SignalError
from pl_rffp.signals.impairments import (
    DeviceProfile, apply_impairments, carrier_offset, iq_imbalance, pa_nonlinearity, sample_profile,
)
from pl_rffp.signals.waveform import SAMPLE_RATE_HZ, Waveform


def tone(n=256):
    return Waveform(np.exp(2j * np.pi * 0.01 * np.arange(n)))


def test_identity_profile():
    w = tone()
    out = apply_impairments(w, DeviceProfile(device_id=0), np.random.default_rng(0))
    assert np.array_equal(out.iq, w.iq)


def test_carrier_offset():
    x = np.ones(100, dtype=np.complex128)
    y = carrier_offset(x, 10e3, SAMPLE_RATE_HZ)
    assert np.allclose(np.abs(y), 1.0)
    assert np.angle(y[1] / y[0]) == pytest.approx(2 * np.pi * 10e3 / SAMPLE_RATE_HZ)


def test_pa_compression():
    assert pa_nonlinearity(np.array([1.0 + 0j]), 1, -0.1, 0)[0] == pytest.approx(0.9)


def test_iq_imbalance():
    x = np.array([1 + 1j])
    assert np.allclose(iq_imbalance(x, 0.0, 0.0), x)
    assert np.allclose(iq_imbalance(x, 20 * np.log10(2), 0.0), [2 + 1j])
    assert np.allclose(iq_imbalance(np.array([1 + 0j]), 0.0, np.pi / 2), [1 - 1j])


def test_profiles_are_seeded():
    config = ImpairmentConfig()
    a = sample_profile(3, np.random.default_rng(9), config)
    b = sample_profile(3, np.random.default_rng(9), config)
    assert a == b
    assert abs(a.cfo_hz) <= config.cfo_max_hz
    assert 0 <= a.phase_noise_linewidth_hz <= config.linewidth_max_hz


def test_disabling_one_impairment_keeps_the_others():
    config = ImpairmentConfig()
    full = sample_profile(1, np.random.default_rng(4), config)
    no_cfo = sample_profile(1, np.random.default_rng(4), replace(config, enable_cfo=False))
    assert no_cfo.cfo_hz == 0.0
    assert no_cfo == replace(full, cfo_hz=0.0)


def test_profile_round_trip():
    p = sample_profile(2, np.random.default_rng(5), ImpairmentConfig())
    assert DeviceProfile.from_dict(p.to_dict()) == p


def test_invalid_profiles():
    with pytest.raises(SignalError):
        DeviceProfile(device_id=0, pa_a1=0j)
    with pytest.raises(SignalError):
        DeviceProfile(device_id=0, cfo_hz=float('nan'))


def test_same_profile_and_seed_give_the_same_waveform():
    p = sample_profile(0, np.random.default_rng(11), ImpairmentConfig())
    a = apply_impairments(tone(), p, np.random.default_rng(12))
    b = apply_impairments(tone(), p, np.random.default_rng(12))
    assert np.array_equal(a.iq, b.iq)


def test_devices_are_separable():
    config = ImpairmentConfig()
    a = apply_impairments(tone(), sample_profile(0, np.random.default_rng(20), config), np.random.default_rng(3))
    b = apply_impairments(tone(), sample_profile(1, np.random.default_rng(21), config), np.random.default_rng(3))
    assert np.mean(np.abs(a.iq - b.iq) ** 2) > 1e-6
