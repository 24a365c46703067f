"""Labelled IQ records simulated from per-device impairment profiles."""
from dataclasses import dataclass, field, replace
import hashlib
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import torch
from torch.utils.data import Dataset
import yaml

from pl_rffp.errors import SignalError
from pl_rffp.models.complex_tensor import ComplexTensor
from pl_rffp.signals import adsb
from pl_rffp.signals.channel import awgn_channel, is_infinite, random_phase, sample_snr, snr_band_of
from pl_rffp.signals.impairments import DeviceProfile, apply_impairments, sample_profile
from pl_rffp.signals.waveform import (
    WINDOW_SAMPLES, Waveform, delete_symbols, extract_preamble, normalize_power, prune_extended,
)
from pl_rffp.signals.wifi import gen_wifi_preamble

log = logging.getLogger(__name__)

FORMAT_VERSION = 1

WIFI_PREAMBLE = 'wifi_preamble'
PACKET_TYPES = (adsb.MODE_S, adsb.MODE_S_EXTENDED, WIFI_PREAMBLE)

# derived seed streams
STREAM_PROFILE = 0
STREAM_ICAO = 1
STREAM_RECORD = 2
STREAM_AUGMENT = 3
STREAM_CONTROL = 4


def derive_rng(master_seed, stream, *keys):
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), stream, *(int(k) for k in keys)]))


@dataclass
class SignalRecord:
    iq: np.ndarray
    device_label: int
    packet_type: str
    natural_snr_db: float
    snr_aug_db: float = math.inf
    record_index: int = 0

    def __eq__(self, other):
        if not isinstance(other, SignalRecord):
            return NotImplemented
        return (self.device_label == other.device_label and self.packet_type == other.packet_type
                and self.natural_snr_db == other.natural_snr_db and self.snr_aug_db == other.snr_aug_db
                and self.record_index == other.record_index and np.array_equal(self.iq, other.iq))

    @property
    def snr_band(self):
        return snr_band_of(self.natural_snr_db)


@dataclass
class DatasetManifest:
    protocol: str
    num_devices: int
    n_train: int
    n_test: int
    split: str
    snr_band: str
    test_snr_band: str
    input_mode: str
    master_seed: int
    impairments: dict
    augmentation: List[float] = field(default_factory=list)
    profiles: List[dict] = field(default_factory=list)
    digest: str = ''
    version: int = FORMAT_VERSION

    def generation_config(self):
        return {
            'protocol': self.protocol,
            'num_devices': self.num_devices,
            'records_per_device': [self.n_train, self.n_test],
            'snr_band': self.snr_band,
            'test_snr_band': self.test_snr_band,
            'input_mode': self.input_mode,
            'master_seed': self.master_seed,
            'impairments': dict(sorted(self.impairments.items())),
            'version': self.version,
        }

    def compute_digest(self):
        payload = {'generation': self.generation_config(),
                   'augmentation': [repr(float(a)) for a in self.augmentation]}
        text = yaml.safe_dump(payload, sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()

    def to_dict(self):
        return {
            'protocol': self.protocol, 'num_devices': self.num_devices, 'n_train': self.n_train,
            'n_test': self.n_test, 'split': self.split, 'snr_band': self.snr_band,
            'test_snr_band': self.test_snr_band, 'input_mode': self.input_mode, 'master_seed': self.master_seed,
            'impairments': dict(self.impairments), 'augmentation': [repr(float(a)) for a in self.augmentation],
            'profiles': list(self.profiles), 'digest': self.digest, 'version': self.version,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d['augmentation'] = [float(a) for a in d.get('augmentation', [])]
        return cls(**d)


class RFDataset(Dataset):
    """Immutable list of records; items are ``(iq, label)`` with ``iq`` a complex64 tensor of shape (1, length)."""

    def __init__(self, records: List[SignalRecord], manifest: DatasetManifest):
        if not records:
            raise SignalError("a dataset needs at least one record")
        self.records = list(records)
        self.manifest = manifest

    def __len__(self):
        return len(self.records)

    def __getitem__(self, idx):
        r = self.records[idx]
        return torch.from_numpy(r.iq.astype(np.complex64)).unsqueeze(0), r.device_label

    def __eq__(self, other):
        if not isinstance(other, RFDataset):
            return NotImplemented
        return self.manifest == other.manifest and self.records == other.records

    @property
    def num_classes(self):
        return self.manifest.num_devices

    @property
    def input_length(self):
        return int(self.records[0].iq.shape[0])

    def labels(self):
        return torch.tensor([r.device_label for r in self.records], dtype=torch.long)

    def metadata(self, key):
        return [getattr(r, key) for r in self.records]

    def as_complex_tensor(self, dtype=torch.float64) -> ComplexTensor:
        return ComplexTensor.from_complex(np.stack([r.iq for r in self.records]), dtype=dtype)

    def with_labels(self, labels):
        """Copy with replaced labels, used for the label-shuffled control."""
        records = [replace(r, device_label=int(y)) for r, y in zip(self.records, labels)]
        return RFDataset(records, self.manifest)


def icao_addresses(master_seed, num_devices):
    rng = derive_rng(master_seed, STREAM_ICAO)
    return [int(a) for a in rng.choice(1 << adsb.ICAO_BITS, size=num_devices, replace=False)]


def device_profiles(master_seed, num_devices, impairments) -> List[DeviceProfile]:
    return [sample_profile(d, derive_rng(master_seed, STREAM_PROFILE, d), impairments) for d in range(num_devices)]


def _window(w: Waveform, packet_type, input_mode, rng):
    if input_mode == 'preamble':
        return extract_preamble(w)
    if packet_type == adsb.MODE_S_EXTENDED:
        offset = {'offset_random': 'random', 'offset_last': 'last'}.get(input_mode, 'zero')
        w = prune_extended(w, offset, rng)
    elif len(w) != WINDOW_SAMPLES:
        raise SignalError(f"{packet_type} packet of {len(w)} samples cannot fill the packet window")
    if input_mode == 'delete_symbols':
        w = delete_symbols(w)
    return w


def generate_record(device_id, record_index, master_seed, protocol, input_mode, snr_band, profile, icao,
                    impairments) -> SignalRecord:
    """Clean packet, impairments, carrier phase, input window, AWGN, unit power."""
    rng = derive_rng(master_seed, STREAM_RECORD, device_id, record_index)
    if protocol == 'adsb':
        mode = adsb.MODE_S if rng.random() < 0.5 else adsb.MODE_S_EXTENDED
        w = adsb.ppm_modulate(adsb.gen_adsb_packet(mode, icao, rng))
        packet_type = mode
    else:
        w = gen_wifi_preamble()
        packet_type = WIFI_PREAMBLE
    w = apply_impairments(w, profile, rng)
    if impairments.random_phase:
        w = random_phase(w, rng)
    w = _window(w, packet_type, input_mode, rng)
    snr = sample_snr(snr_band, rng)
    w = normalize_power(awgn_channel(w, snr, rng))
    return SignalRecord(iq=w.iq.astype(np.complex64), device_label=int(device_id), packet_type=packet_type,
                        natural_snr_db=snr, record_index=int(record_index))


def build_dataset(protocol, num_devices, per_device: Tuple[int, int], snr_band, input_mode, master_seed,
                  impairments, test_snr_band: Optional[str] = None):
    """Simulate the train and test splits. Returns ``(train, test, profiles)``.

    Profiles and ICAO addresses depend only on the master seed and device id, so both
    splits (and datasets built at other SNR bands) share the same devices.
    """
    if protocol not in ('adsb', 'wifi'):
        raise SignalError(f"unknown protocol {protocol!r}")
    if protocol == 'wifi' and input_mode != 'preamble':
        raise SignalError(f"wifi records are preamble-only, cannot build input mode {input_mode!r}")
    if num_devices < 2:
        raise SignalError(f"need at least 2 devices, got {num_devices}")
    n_train, n_test = per_device
    test_snr_band = test_snr_band or snr_band
    profiles = device_profiles(master_seed, num_devices, impairments)
    icaos = icao_addresses(master_seed, num_devices) if protocol == 'adsb' else [0] * num_devices
    impairment_dict = {k: getattr(impairments, k) for k in sorted(vars(impairments))}

    splits = []
    for split, band, indices in (('train', snr_band, range(0, n_train)),
                                 ('test', test_snr_band, range(n_train, n_train + n_test))):
        records = [generate_record(d, k, master_seed, protocol, input_mode, band, profiles[d], icaos[d], impairments)
                   for d in range(num_devices) for k in indices]
        manifest = DatasetManifest(
            protocol=protocol, num_devices=num_devices, n_train=n_train, n_test=n_test, split=split,
            snr_band=snr_band, test_snr_band=test_snr_band, input_mode=input_mode, master_seed=int(master_seed),
            impairments=impairment_dict, profiles=[p.to_dict() for p in profiles])
        manifest.digest = manifest.compute_digest()
        splits.append(RFDataset(records, manifest))
        log.info(f"built {split} split: {len(records)} records of {records[0].iq.shape[0]} samples")
    return splits[0], splits[1], profiles


def build_from_config(data, master_seed):
    return build_dataset(data.protocol, data.num_devices, (data.n_train, data.n_test), data.snr_band,
                         data.input_mode, master_seed, data.impairments, data.test_snr_band)


def augment_noise(ds: RFDataset, snr_aug_db, rng) -> RFDataset:
    """Add AWGN at ``snr_aug_db`` to every record and re-normalize. Infinite SNR returns ``ds`` unchanged."""
    if is_infinite(snr_aug_db):
        return ds
    records = []
    for r in ds.records:
        w = normalize_power(awgn_channel(Waveform(r.iq), snr_aug_db, rng))
        records.append(replace(r, iq=w.iq.astype(np.complex64), snr_aug_db=float(snr_aug_db)))
    manifest = replace(ds.manifest, augmentation=ds.manifest.augmentation + [float(snr_aug_db)])
    manifest.digest = manifest.compute_digest()
    return RFDataset(records, manifest)


def augment_rng(master_seed, split, snr_aug_db):
    """Augmentation stream for one split and level."""
    level = 0 if is_infinite(snr_aug_db) else int(round(float(snr_aug_db) * 1000)) % (1 << 32)
    return derive_rng(master_seed, STREAM_AUGMENT, 0 if split == 'train' else 1, level)
