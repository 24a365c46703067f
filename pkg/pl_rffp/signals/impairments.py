"""Per-device transmitter impairments, the ground-truth fingerprint of every simulated device."""
from dataclasses import dataclass, asdict

import numpy as np

from pl_rffp.errors import SignalError
from pl_rffp.signals.waveform import Waveform


@dataclass(frozen=True)
class DeviceProfile:
    device_id: int
    cfo_hz: float = 0.0
    iq_gain_db: float = 0.0
    iq_phase_rad: float = 0.0
    pa_a1: complex = 1 + 0j
    pa_a3: complex = 0j
    pa_a5: complex = 0j
    phase_noise_linewidth_hz: float = 0.0

    def __post_init__(self):
        if not abs(self.pa_a1) > 0:
            raise SignalError(f"device {self.device_id}: pa_a1 must be nonzero")
        values = (self.cfo_hz, self.iq_gain_db, self.iq_phase_rad, self.pa_a1, self.pa_a3, self.pa_a5,
                  self.phase_noise_linewidth_hz)
        if not np.all(np.isfinite(np.array(values, dtype=np.complex128))):
            raise SignalError(f"device {self.device_id}: impairments must be finite")

    def to_dict(self):
        d = asdict(self)
        for key in ('pa_a1', 'pa_a3', 'pa_a5'):
            d[key] = [float(d[key].real), float(d[key].imag)]
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for key in ('pa_a1', 'pa_a3', 'pa_a5'):
            d[key] = complex(*d[key])
        return cls(**d)


def _complex_gaussian(rng, scale):
    return complex(scale * (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2))


def sample_profile(device_id: int, rng, config) -> DeviceProfile:
    """Draw one device profile. ``config`` is an ImpairmentConfig; disabled impairments stay at identity.

    Every draw happens regardless of the toggles so that disabling one impairment leaves the others unchanged.
    """
    cfo = rng.uniform(-config.cfo_max_hz, config.cfo_max_hz)
    gain_db = rng.normal(0.0, config.iq_gain_std_db)
    phase = np.deg2rad(rng.normal(0.0, config.iq_phase_std_deg))
    a3 = _complex_gaussian(rng, config.pa_a3_scale)
    a5 = _complex_gaussian(rng, config.pa_a5_scale)
    linewidth = rng.uniform(0.0, config.linewidth_max_hz)
    return DeviceProfile(
        device_id=int(device_id),
        cfo_hz=float(cfo) if config.enable_cfo else 0.0,
        iq_gain_db=float(gain_db) if config.enable_iq else 0.0,
        iq_phase_rad=float(phase) if config.enable_iq else 0.0,
        pa_a3=a3 if config.enable_pa else 0j,
        pa_a5=a5 if config.enable_pa else 0j,
        phase_noise_linewidth_hz=float(linewidth) if config.enable_phase_noise else 0.0,
    )


def pa_nonlinearity(x, a1, a3, a5):
    mag2 = np.abs(x) ** 2
    return a1 * x + a3 * x * mag2 + a5 * x * mag2 ** 2


def iq_imbalance(x, gain_db, phase_rad):
    gain = 10 ** (gain_db / 20)
    i, q = x.real, x.imag
    return gain * i + 1j * (q * np.cos(phase_rad) - i * np.sin(phase_rad))


def carrier_offset(x, cfo_hz, sample_rate_hz):
    n = np.arange(x.shape[-1])
    return x * np.exp(2j * np.pi * cfo_hz * n / sample_rate_hz)


def wiener_phase_noise(x, linewidth_hz, sample_rate_hz, rng):
    if linewidth_hz <= 0:
        return x
    std = np.sqrt(2 * np.pi * linewidth_hz / sample_rate_hz)
    walk = np.cumsum(rng.normal(0.0, std, x.shape[-1]))
    return x * np.exp(1j * walk)


def apply_impairments(w: Waveform, p: DeviceProfile, rng) -> Waveform:
    """PA nonlinearity, then IQ imbalance, then CFO, then phase noise."""
    x = pa_nonlinearity(w.iq, p.pa_a1, p.pa_a3, p.pa_a5)
    x = iq_imbalance(x, p.iq_gain_db, p.iq_phase_rad)
    x = carrier_offset(x, p.cfo_hz, w.sample_rate_hz)
    x = wiener_phase_noise(x, p.phase_noise_linewidth_hz, w.sample_rate_hz, rng)
    return w.replace(x)
