"""Binary serialization for trained models.

Layout (all integers little-endian uint32, all floats little-endian
float64, documented in docs/model-format.md):

    magic            4 bytes, b"DFIX"
    format version   u32, currently 1
    config JSON      u32 byte length + UTF-8 payload (sorted keys)
    vocabulary hash  u32 byte length + UTF-8 sha256 hex digest
    tensor count     u32
    tensors          name (u32 + UTF-8), rank (u32), dims (u32 each),
                     row-major float64 data

The vocabulary itself travels as a sibling JSON file; the embedded digest
ties the two together, and load() refuses a vocabulary whose digest does
not match.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import ModelFormatError
from .model import DeclarationModel, ModelConfig

MAGIC = b"DFIX"
FORMAT_VERSION = 1


def _pack_str(text):
    raw = text.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


class _Reader:
    def __init__(self, blob):
        self.blob = blob
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.blob):
            raise ModelFormatError("model file is truncated")
        out = self.blob[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def string(self):
        return self.take(self.u32()).decode("utf-8")

    def done(self):
        return self.pos == len(self.blob)


def save(model, path, vocab_path=None):
    """Write the model to path; when vocab_path is given, write the
    vocabulary JSON there too (convention: <model>.vocab.json)."""
    chunks = [MAGIC, struct.pack("<I", FORMAT_VERSION)]
    chunks.append(_pack_str(model.config.to_json()))
    chunks.append(_pack_str(model.vocab.sha256()))
    params = list(model.named_params())
    chunks.append(struct.pack("<I", len(params)))
    for name, tensor in params:
        chunks.append(_pack_str(name))
        chunks.append(struct.pack("<I", tensor.ndim))
        for dim in tensor.shape:
            chunks.append(struct.pack("<I", dim))
        chunks.append(np.ascontiguousarray(tensor, dtype="<f8").tobytes())
    with open(path, "wb") as fh:
        fh.write(b"".join(chunks))
    if vocab_path is not None:
        model.vocab.save(vocab_path)


def load(path, vocab):
    """Read a model back; vocab must be the vocabulary the model was
    trained over (checked via the stored digest)."""
    with open(path, "rb") as fh:
        reader = _Reader(fh.read())
    if reader.take(4) != MAGIC:
        raise ModelFormatError("not a model file (bad magic)")
    version = reader.u32()
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version}")
    try:
        config = ModelConfig.from_json(reader.string())
    except (ValueError, TypeError) as exc:
        raise ModelFormatError(f"bad embedded config: {exc}") from exc
    stored = reader.string()
    actual = vocab.sha256()
    if stored != actual:
        raise ModelFormatError(
            f"vocabulary mismatch: model was trained over {stored[:12]}..., "
            f"given vocabulary hashes to {actual[:12]}..."
        )
    model = DeclarationModel(config, vocab)
    slots = model.param_dict()
    count = reader.u32()
    if count != len(slots):
        raise ModelFormatError(
            f"expected {len(slots)} tensors, file holds {count}"
        )
    seen = set()
    for _ in range(count):
        name = reader.string()
        if name not in slots:
            raise ModelFormatError(f"unknown tensor {name!r}")
        if name in seen:
            raise ModelFormatError(f"duplicate tensor {name!r}")
        seen.add(name)
        rank = reader.u32()
        dims = tuple(reader.u32() for _ in range(rank))
        slot = slots[name]
        if dims != slot.shape:
            raise ModelFormatError(
                f"tensor {name!r} has shape {dims}, expected {slot.shape}"
            )
        nbytes = int(np.prod(dims, dtype=np.int64)) * 8 if dims else 8
        data = np.frombuffer(reader.take(nbytes), dtype="<f8").reshape(dims)
        slot[...] = data
    if not reader.done():
        raise ModelFormatError("trailing bytes after the last tensor")
    return model
