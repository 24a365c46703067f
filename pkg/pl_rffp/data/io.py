"""Binary containers for datasets and checkpoints.

Dataset file::

    b'RFFPDATA' | u32 version | u32 n | n bytes of YAML manifest | u32 record count | records

Each record is a packed header (label, packet type, natural SNR, SNR_aug, record index,
length) followed by ``length`` interleaved I,Q pairs as little-endian float32.

Checkpoint file::

    b'RFFPCKPT' | u32 version | u32 n | n bytes of YAML network spec | u32 parameter count | parameters

Each parameter is its name, dtype code, rank and shape, then little-endian data in C order.
"""
import logging
import os
import struct

import numpy as np
import torch
import yaml

from pl_rffp.data.datasets.rf import FORMAT_VERSION, PACKET_TYPES, DatasetManifest, RFDataset, SignalRecord
from pl_rffp.errors import DigestMismatchError, FormatError, TruncatedFileError, VersionMismatchError
from pl_rffp.models.layers import NetworkSpec
from pl_rffp.models.model import ParameterSet, check_parameters

log = logging.getLogger(__name__)

DATASET_MAGIC = b'RFFPDATA'
CHECKPOINT_MAGIC = b'RFFPCKPT'
CHECKPOINT_VERSION = 1

RECORD_HEADER = np.dtype([
    ('label', '<i4'),
    ('packet_type', 'u1'),
    ('natural_snr_db', '<f8'),
    ('snr_aug_db', '<f8'),
    ('record_index', '<u4'),
    ('length', '<u4'),
])
DTYPE_CODES = {torch.float32: (0, '<f4'), torch.float64: (1, '<f8')}
CODE_DTYPES = {code: (dtype, fmt) for dtype, (code, fmt) in DTYPE_CODES.items()}


class _Reader:
    def __init__(self, data, path):
        self.data = memoryview(data)
        self.offset = 0
        self.path = path

    def take(self, n):
        if self.offset + n > len(self.data):
            raise TruncatedFileError(f"file ends at byte {len(self.data)}, needed {self.offset + n}", self.path)
        chunk = self.data[self.offset:self.offset + n]
        self.offset += n
        return chunk

    def u32(self):
        return struct.unpack('<I', self.take(4))[0]

    def u8(self):
        return struct.unpack('<B', self.take(1))[0]

    def text(self):
        return bytes(self.take(self.u32())).decode('utf-8')

    def done(self):
        if self.offset != len(self.data):
            raise FormatError(f"{len(self.data) - self.offset} trailing bytes", self.path)


def _open(path, magic, version):
    with open(path, 'rb') as f:
        data = f.read()
    reader = _Reader(data, path)
    if bytes(reader.take(len(magic))) != magic:
        raise FormatError(f"not a {magic.decode()} file", path)
    found = reader.u32()
    if found != version:
        raise VersionMismatchError(f"format version {found}, expected {version}", path)
    return reader


def _text(s):
    b = s.encode('utf-8')
    return struct.pack('<I', len(b)) + b


def _write(path, chunks):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'wb') as f:
        for chunk in chunks:
            f.write(chunk)


# datasets
def save_dataset(ds: RFDataset, path):
    manifest = yaml.safe_dump(ds.manifest.to_dict(), sort_keys=True)
    chunks = [DATASET_MAGIC, struct.pack('<I', FORMAT_VERSION), _text(manifest), struct.pack('<I', len(ds))]
    for r in ds.records:
        header = np.array([(r.device_label, PACKET_TYPES.index(r.packet_type), r.natural_snr_db, r.snr_aug_db,
                            r.record_index, r.iq.shape[0])], dtype=RECORD_HEADER)
        iq = np.empty(2 * r.iq.shape[0], dtype='<f4')
        iq[0::2], iq[1::2] = r.iq.real, r.iq.imag
        chunks += [header.tobytes(), iq.tobytes()]
    _write(path, chunks)
    log.info(f"saved {len(ds)} records to {path}")


def load_dataset(path) -> RFDataset:
    reader = _open(path, DATASET_MAGIC, FORMAT_VERSION)
    manifest = DatasetManifest.from_dict(yaml.safe_load(reader.text()))
    if manifest.digest != manifest.compute_digest():
        raise DigestMismatchError("manifest digest does not match its generation config", path)
    records = []
    for _ in range(reader.u32()):
        header = np.frombuffer(reader.take(RECORD_HEADER.itemsize), dtype=RECORD_HEADER)[0]
        length = int(header['length'])
        if header['packet_type'] >= len(PACKET_TYPES):
            raise FormatError(f"unknown packet type code {header['packet_type']}", path)
        iq = np.frombuffer(reader.take(8 * length), dtype='<f4')
        records.append(SignalRecord(
            iq=(iq[0::2] + 1j * iq[1::2]).astype(np.complex64),
            device_label=int(header['label']),
            packet_type=PACKET_TYPES[int(header['packet_type'])],
            natural_snr_db=float(header['natural_snr_db']),
            snr_aug_db=float(header['snr_aug_db']),
            record_index=int(header['record_index'])))
    reader.done()
    return RFDataset(records, manifest)


# checkpoints
def save_checkpoint(net: NetworkSpec, params, path):
    check_parameters(net, params)
    spec = yaml.safe_dump(net.to_dict(), sort_keys=False)
    chunks = [CHECKPOINT_MAGIC, struct.pack('<I', CHECKPOINT_VERSION), _text(spec), struct.pack('<I', len(params))]
    for name, tensor in params.items():
        if tensor.dtype not in DTYPE_CODES:
            raise FormatError(f"cannot store parameter {name} of dtype {tensor.dtype}", path)
        code, fmt = DTYPE_CODES[tensor.dtype]
        shape = tuple(tensor.shape)
        chunks += [_text(name), struct.pack('<BB', code, len(shape)), struct.pack(f'<{len(shape)}I', *shape),
                   tensor.detach().cpu().numpy().astype(fmt).tobytes()]
    _write(path, chunks)
    log.info(f"saved checkpoint to {path}")


def load_checkpoint(path):
    reader = _open(path, CHECKPOINT_MAGIC, CHECKPOINT_VERSION)
    net = NetworkSpec.from_dict(yaml.safe_load(reader.text()))
    params = ParameterSet()
    for _ in range(reader.u32()):
        name = reader.text()
        code, rank = reader.u8(), reader.u8()
        if code not in CODE_DTYPES:
            raise FormatError(f"unknown dtype code {code} for parameter {name}", path)
        dtype, fmt = CODE_DTYPES[code]
        shape = struct.unpack(f'<{rank}I', reader.take(4 * rank))
        count = int(np.prod(shape)) if shape else 1
        data = np.frombuffer(reader.take(count * np.dtype(fmt).itemsize), dtype=fmt).reshape(shape)
        params[name] = torch.from_numpy(data.astype(fmt[1:]).copy()).to(dtype)
    reader.done()
    check_parameters(net, params)
    return net, params
