import math

import numpy as np

from pl_rffp.errors import SignalError
from pl_rffp.signals.waveform import Waveform

# natural SNR bands in dB, [low, high)
SNR_BANDS = {
    'low': (0.0, 2.0),
    'medium': (2.0, 5.0),
    'high': (5.0, 15.0),
}


def is_infinite(snr_db):
    return snr_db is None or (isinstance(snr_db, (int, float)) and math.isinf(snr_db) and snr_db > 0)


def sample_snr(band, rng):
    if band not in SNR_BANDS:
        raise SignalError(f"unknown SNR band {band!r}, expected one of {tuple(SNR_BANDS)}")
    low, high = SNR_BANDS[band]
    return float(rng.uniform(low, high))


def snr_band_of(snr_db):
    if is_infinite(snr_db):
        return 'high'
    for band, (low, high) in SNR_BANDS.items():
        if low <= snr_db < high:
            return band
    return 'low' if snr_db < SNR_BANDS['low'][0] else 'high'


def awgn_channel(w: Waveform, snr_db, rng) -> Waveform:
    """Add circular complex Gaussian noise of power ``signal_power / 10^(snr_db/10)``. Infinite SNR is a passthrough."""
    if is_infinite(snr_db):
        return w
    signal_power = w.power()
    if not signal_power > 0:
        raise SignalError("cannot set the SNR of a zero-power waveform")
    noise_power = signal_power / 10 ** (snr_db / 10)
    noise = np.sqrt(noise_power / 2) * (rng.standard_normal(len(w)) + 1j * rng.standard_normal(len(w)))
    return w.replace(w.iq + noise)


def random_phase(w: Waveform, rng) -> Waveform:
    return w.replace(w.iq * np.exp(1j * rng.uniform(-np.pi, np.pi)))
