"""Versioned TLV container for keys, tokens, ciphertexts and indexes.

Record layout::

    MAGIC(4) VERSION(1) SUITE_ID(1) RECORD_TYPE(4) fields... DIGEST(8)

Each field is ``tag(1) || length(u32 BE) || payload``; list payloads are
count-prefixed sequences of fixed-width items.  DIGEST is the first 8
bytes of SHA-256 over everything before it, so any single corrupted byte
is rejected before element validation even runs.
"""

from __future__ import annotations

import hashlib
import struct

from .errors import BadMagic, DecodeError, IntegrityError, TruncatedRecord, UnsupportedVersion

MAGIC = b"HVE\xf1"
VERSION = 1
DIGEST_LEN = 8

SCALAR_LEN = 32


class RecordWriter:
    def __init__(self, suite_id: int, record_type: bytes):
        if len(record_type) != 4:
            raise ValueError("record type must be 4 bytes")
        self._parts = [MAGIC, bytes([VERSION, suite_id]), record_type]

    def field(self, tag: int, payload: bytes) -> "RecordWriter":
        self._parts.append(bytes([tag]) + struct.pack(">I", len(payload)) + payload)
        return self

    def finish(self) -> bytes:
        body = b"".join(self._parts)
        return body + hashlib.sha256(body).digest()[:DIGEST_LEN]


def decode_record(data: bytes, expected_type: bytes | None = None, expected_suite_id: int | None = None):
    """Validate the envelope and return ``(suite_id, record_type, fields)``.

    ``fields`` maps tag -> payload bytes; duplicate tags are rejected.
    """
    if len(data) < len(MAGIC) + 2 + 4 + DIGEST_LEN:
        raise TruncatedRecord("record shorter than envelope")
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagic("bad magic")
    body, digest = data[:-DIGEST_LEN], data[-DIGEST_LEN:]
    if hashlib.sha256(body).digest()[:DIGEST_LEN] != digest:
        raise IntegrityError("record digest mismatch")
    version = data[len(MAGIC)]
    if version != VERSION:
        raise UnsupportedVersion(f"unsupported record version {version}")
    suite_id = data[len(MAGIC) + 1]
    pos = len(MAGIC) + 2
    record_type = body[pos : pos + 4]
    pos += 4
    if expected_type is not None and record_type != expected_type:
        raise DecodeError(f"expected {expected_type!r} record, found {record_type!r}")
    if expected_suite_id is not None and suite_id != expected_suite_id:
        raise DecodeError(f"record was written for suite id {suite_id}, not {expected_suite_id}")
    fields: dict[int, bytes] = {}
    while pos < len(body):
        if pos + 5 > len(body):
            raise TruncatedRecord("truncated field header")
        tag = body[pos]
        (length,) = struct.unpack(">I", body[pos + 1 : pos + 5])
        pos += 5
        if pos + length > len(body):
            raise TruncatedRecord("truncated field payload")
        if tag in fields:
            raise DecodeError(f"duplicate field tag {tag}")
        fields[tag] = body[pos : pos + length]
        pos += length
    return suite_id, record_type, fields


def need(fields: dict[int, bytes], tag: int) -> bytes:
    if tag not in fields:
        raise DecodeError(f"missing field tag {tag}")
    return fields[tag]


# -- payload helpers ------------------------------------------------------


def pack_u16(v: int) -> bytes:
    return struct.pack(">H", v)


def unpack_u16(b: bytes) -> int:
    if len(b) != 2:
        raise DecodeError("bad u16 payload")
    return struct.unpack(">H", b)[0]


def pack_u32(v: int) -> bytes:
    return struct.pack(">I", v)


def unpack_u32(b: bytes) -> int:
    if len(b) != 4:
        raise DecodeError("bad u32 payload")
    return struct.unpack(">I", b)[0]


def pack_scalar(v: int) -> bytes:
    return int(v).to_bytes(SCALAR_LEN, "big")


def unpack_scalar(b: bytes, order: int) -> int:
    if len(b) != SCALAR_LEN:
        raise DecodeError("bad scalar payload")
    v = int.from_bytes(b, "big")
    if v >= order:
        raise DecodeError("scalar out of range")
    return v


def pack_scalar_list(vs) -> bytes:
    vs = list(vs)
    return pack_u32(len(vs)) + b"".join(pack_scalar(v) for v in vs)


def unpack_scalar_list(b: bytes, order: int) -> list[int]:
    return _unpack_list(b, SCALAR_LEN, lambda chunk: unpack_scalar(chunk, order))


def pack_u16_list(vs) -> bytes:
    vs = list(vs)
    return pack_u32(len(vs)) + b"".join(pack_u16(v) for v in vs)


def unpack_u16_list(b: bytes) -> list[int]:
    return _unpack_list(b, 2, unpack_u16)


def _unpack_list(b: bytes, item_len: int, decode_item):
    if len(b) < 4:
        raise TruncatedRecord("truncated list payload")
    count = struct.unpack(">I", b[:4])[0]
    if len(b) != 4 + count * item_len:
        raise TruncatedRecord("list payload length mismatch")
    return [decode_item(b[4 + i * item_len : 4 + (i + 1) * item_len]) for i in range(count)]


def pack_elements(elements) -> bytes:
    """Count-prefixed list of same-width element encodings."""
    encs = [e.to_bytes() for e in elements]
    return pack_u32(len(encs)) + b"".join(encs)


def unpack_g1_list(suite, b: bytes):
    return _unpack_list(b, suite.g1_byte_len(), lambda chunk: suite._dec_g1(chunk))


def unpack_g2_list(suite, b: bytes):
    return _unpack_list(b, suite.g2_byte_len(), lambda chunk: suite._dec_g2(chunk))


def unpack_g1(suite, b: bytes):
    if len(b) != suite.g1_byte_len():
        raise DecodeError("bad G1 payload length")
    return suite._dec_g1(b)


def unpack_g2(suite, b: bytes):
    if len(b) != suite.g2_byte_len():
        raise DecodeError("bad G2 payload length")
    return suite._dec_g2(b)


def unpack_gt(suite, b: bytes):
    if len(b) != suite.gt_byte_len():
        raise DecodeError("bad GT payload length")
    return suite._dec_gt(b)
