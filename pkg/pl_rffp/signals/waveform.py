"""Baseband waveforms and the input windows cut from them."""
from dataclasses import dataclass

import numpy as np

from pl_rffp.errors import SignalError

SAMPLE_RATE_HZ = 20e6
SAMPLES_PER_SYMBOL = 20
PREAMBLE_SYMBOLS = 16
PREAMBLE_SAMPLES = PREAMBLE_SYMBOLS * SAMPLES_PER_SYMBOL
WINDOW_SYMBOLS = 64
WINDOW_SAMPLES = WINDOW_SYMBOLS * SAMPLES_PER_SYMBOL
EXTENDED_SYMBOLS = 120
EXTENDED_SAMPLES = EXTENDED_SYMBOLS * SAMPLES_PER_SYMBOL
# one-indexed, inclusive
ICAO_SYMBOLS = (17, 40)

OFFSET_MODES = ('zero', 'random', 'last')


@dataclass
class Waveform:
    iq: np.ndarray
    sample_rate_hz: float = SAMPLE_RATE_HZ
    samples_per_symbol: int = SAMPLES_PER_SYMBOL

    def __post_init__(self):
        self.iq = np.asarray(self.iq, dtype=np.complex128).ravel()

    def __len__(self):
        return self.iq.shape[0]

    @property
    def num_symbols(self):
        return len(self) // self.samples_per_symbol

    def power(self):
        return float(np.mean(np.abs(self.iq) ** 2))

    def replace(self, iq):
        return Waveform(iq, self.sample_rate_hz, self.samples_per_symbol)


def symbol_slice(first, last, samples_per_symbol=SAMPLES_PER_SYMBOL):
    """Sample slice covering one-indexed symbols ``first`` to ``last`` inclusive."""
    return slice((first - 1) * samples_per_symbol, last * samples_per_symbol)


def extract_preamble(w: Waveform) -> Waveform:
    if len(w) < PREAMBLE_SAMPLES:
        raise SignalError(f"waveform of {len(w)} samples is shorter than the {PREAMBLE_SAMPLES}-sample preamble")
    return w.replace(w.iq[:PREAMBLE_SAMPLES])


def offset_start(offset_mode, rng=None):
    """First sample of the 64-symbol window inside a 120-symbol packet."""
    if offset_mode == 'zero':
        return 0
    if offset_mode == 'last':
        return (EXTENDED_SYMBOLS - WINDOW_SYMBOLS) * SAMPLES_PER_SYMBOL
    if offset_mode == 'random':
        if rng is None:
            raise SignalError("random offset needs an rng")
        return int(rng.integers(0, EXTENDED_SYMBOLS - WINDOW_SYMBOLS + 1)) * SAMPLES_PER_SYMBOL
    raise SignalError(f"unknown offset mode {offset_mode!r}, expected one of {OFFSET_MODES}")


def prune_extended(w: Waveform, offset_mode: str, rng=None) -> Waveform:
    if len(w) != EXTENDED_SAMPLES:
        raise SignalError(f"expected a {EXTENDED_SAMPLES}-sample extended packet, got {len(w)} samples")
    start = offset_start(offset_mode, rng)
    return w.replace(w.iq[start:start + WINDOW_SAMPLES])


def delete_symbols(w: Waveform, first=ICAO_SYMBOLS[0], last=ICAO_SYMBOLS[1]) -> Waveform:
    if not 1 <= first <= last <= w.num_symbols:
        raise SignalError(f"cannot delete symbols {first}-{last} from a {w.num_symbols}-symbol waveform")
    cut = symbol_slice(first, last, w.samples_per_symbol)
    return w.replace(np.concatenate([w.iq[:cut.start], w.iq[cut.stop:]]))


def normalize_power(w: Waveform) -> Waveform:
    power = w.power()
    if not power > 0:
        raise SignalError("cannot normalize a zero-power waveform")
    return w.replace(w.iq / np.sqrt(power))
