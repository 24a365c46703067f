"""802.11a legacy preamble at 20 MHz: ten short symbols, a double guard and two long symbols."""
import numpy as np

from pl_rffp.errors import SignalError
from pl_rffp.signals.waveform import PREAMBLE_SAMPLES, Waveform

FFT_SIZE = 64

# subcarriers -26..26
_STS = np.sqrt(13 / 6) * np.array([
    0, 0, 1 + 1j, 0, 0, 0, -1 - 1j, 0, 0, 0, 1 + 1j, 0, 0, 0, -1 - 1j, 0, 0, 0, -1 - 1j, 0, 0, 0, 1 + 1j, 0, 0, 0,
    0,
    0, 0, 0, -1 - 1j, 0, 0, 0, -1 - 1j, 0, 0, 0, 1 + 1j, 0, 0, 0, 1 + 1j, 0, 0, 0, 1 + 1j, 0, 0, 0, 1 + 1j, 0, 0,
])
_LTS = np.array([
    1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1,
    0,
    1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1,
], dtype=np.complex128)


def _symbol(subcarriers):
    """64-point time-domain symbol from the 53 subcarriers centred on DC."""
    bins = np.zeros(FFT_SIZE, dtype=np.complex128)
    bins[np.arange(-26, 27) % FFT_SIZE] = subcarriers
    return np.fft.ifft(bins)


def short_training_field():
    return np.tile(_symbol(_STS)[:16], 10)


def long_training_field():
    lts = _symbol(_LTS)
    return np.concatenate([lts[-32:], lts, lts])


def gen_wifi_preamble() -> Waveform:
    iq = np.concatenate([short_training_field(), long_training_field()])
    if iq.shape[0] != PREAMBLE_SAMPLES:
        raise SignalError(f"preamble has {iq.shape[0]} samples, expected {PREAMBLE_SAMPLES}")
    return Waveform(iq / np.sqrt(np.mean(np.abs(iq) ** 2)))
