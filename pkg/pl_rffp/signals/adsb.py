"""ADS-B Mode S packets: CRC-24 parity and pulse-position modulation.

Layout in symbols: 16 preamble, 24 ICAO address, 56 payload (extended only), 24 parity.
"""
from dataclasses import dataclass, field

import numpy as np

from pl_rffp.errors import SignalError
from pl_rffp.signals.waveform import SAMPLES_PER_SYMBOL, Waveform

CRC_POLY = 0xFFF409
CRC_MASK = 0xFFFFFF
# generator including the x^24 term
CRC_GENERATOR = (1 << 24) | CRC_POLY

MODE_S = 'mode_s'
MODE_S_EXTENDED = 'mode_s_extended'
MODES = (MODE_S, MODE_S_EXTENDED)
SYMBOLS = {MODE_S: 64, MODE_S_EXTENDED: 120}
PAYLOAD_BITS = {MODE_S: 0, MODE_S_EXTENDED: 56}
ICAO_BITS = 24
PARITY_BITS = 24

# 8 us Mode S pulse pattern in half-symbol chips, then a fixed sync pad
PREAMBLE_CHIPS = np.array([1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0], dtype=np.uint8)
SYNC_BITS = np.array([1, 0, 1, 0, 1, 1, 0, 0], dtype=np.uint8)


def _build_crc_table():
    table = []
    for i in range(256):
        crc = i << 16
        for _ in range(8):
            crc = ((crc << 1) ^ CRC_POLY) if crc & 0x800000 else (crc << 1)
            crc &= CRC_MASK
        table.append(crc)
    return table


CRC_TABLE = _build_crc_table()


def crc24(bits) -> int:
    """Remainder of ``bits(x) * x^24`` divided by the Mode S generator."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size == 0:
        raise SignalError("crc24 needs a nonempty bit sequence")
    head = bits.size % 8
    crc = 0
    for bit in bits[:head]:
        crc ^= int(bit) << 23
        crc = ((crc << 1) ^ CRC_POLY) if crc & 0x800000 else (crc << 1)
        crc &= CRC_MASK
    for byte in np.packbits(bits[head:]):
        crc = (CRC_TABLE[((crc >> 16) ^ int(byte)) & 0xFF] ^ (crc << 8)) & CRC_MASK
    return crc


def int_to_bits(value, width):
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits):
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


@dataclass
class AdsbPacket:
    mode: str
    icao: int
    payload_bits: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8))
    crc: int = 0

    @property
    def num_symbols(self):
        return SYMBOLS[self.mode]

    def data_bits(self):
        return np.concatenate([int_to_bits(self.icao, ICAO_BITS), self.payload_bits.astype(np.uint8)])

    def bits(self):
        """Address, payload and parity bits, i.e. everything after the preamble."""
        return np.concatenate([self.data_bits(), int_to_bits(self.crc, PARITY_BITS)])

    def verify(self):
        return crc24(self.data_bits()) == self.crc


def gen_adsb_packet(mode, icao, rng) -> AdsbPacket:
    if mode not in MODES:
        raise SignalError(f"unknown ADS-B mode {mode!r}, expected one of {MODES}")
    if not 0 <= int(icao) < 1 << ICAO_BITS:
        raise SignalError(f"ICAO address {icao} does not fit in {ICAO_BITS} bits")
    payload = rng.integers(0, 2, PAYLOAD_BITS[mode]).astype(np.uint8)
    packet = AdsbPacket(mode=mode, icao=int(icao), payload_bits=payload)
    packet.crc = crc24(packet.data_bits())
    return packet


def ppm_chips(bits):
    """Bit 1 -> early pulse (1, 0), bit 0 -> late pulse (0, 1)."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    return np.stack([bits, 1 - bits], axis=1).ravel()


def ppm_bits(bits) -> Waveform:
    chips = ppm_chips(bits)
    return Waveform(np.repeat(chips, SAMPLES_PER_SYMBOL // 2).astype(np.complex128))


def ppm_modulate(packet: AdsbPacket) -> Waveform:
    chips = np.concatenate([PREAMBLE_CHIPS, ppm_chips(SYNC_BITS), ppm_chips(packet.bits())])
    w = Waveform(np.repeat(chips, SAMPLES_PER_SYMBOL // 2).astype(np.complex128))
    if w.num_symbols != packet.num_symbols:
        raise SignalError(f"modulated {w.num_symbols} symbols for a {packet.num_symbols}-symbol packet")
    return w
