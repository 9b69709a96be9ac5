"""File-backed encrypted record index.

Layout: one TLV header record (magic / version / suite / scheme / field
count / optional predicate-encoding metadata), then a sequence of
length-prefixed records::

    u32 body_len || body
    body := record_id(16) || u32 ct_len || ct_record
            || u8 kind || payload_locator

``ct_record`` is the scheme ciphertext with its sealed payload stripped;
the sealed blob itself is stored inline (kind 0) when small, else in a
content-addressed sidecar file next to the index (kind 1, locator =
SHA-256 of the blob).  Appends take an exclusive file lock and write one
record atomically at the end, so a crash can only truncate the final
record; reads detect and skip such a tail with a warning instead of
misparsing it.
"""

from __future__ import annotations

import hashlib
import logging
import os
import struct
from dataclasses import dataclass
from pathlib import Path

from filelock import FileLock

from . import serial
from .errors import DecodeError, SchemeError, TruncatedRecord
from .hve import SealedPayload
from .registry import SCHEMES_BY_ID, SchemeInfo

log = logging.getLogger(__name__)

RT_HEADER = b"IDXH"
RECORD_ID_LEN = 16
INLINE_LIMIT = 64 * 1024

ENCODE_NONE = 0
ENCODE_CMP = 1
ENCODE_RANGE = 2
ENCODE_SUBSET = 3

ENCODE_NAMES = {ENCODE_NONE: "none", ENCODE_CMP: "cmp", ENCODE_RANGE: "range", ENCODE_SUBSET: "subset"}
ENCODE_IDS = {v: k for k, v in ENCODE_NAMES.items()}


@dataclass(frozen=True)
class IndexHeader:
    suite_id: int
    scheme_id: str
    length: int  # HVE vector length l
    encode_kind: int = ENCODE_NONE
    domain_n: int = 0
    width_w: int = 0

    @property
    def scheme_info(self) -> SchemeInfo:
        if self.scheme_id not in SCHEMES_BY_ID:
            raise DecodeError(f"unknown scheme id {self.scheme_id!r}")
        return SCHEMES_BY_ID[self.scheme_id]

    def encode(self) -> bytes:
        w = serial.RecordWriter(self.suite_id, RT_HEADER)
        w.field(1, self.scheme_id.encode())
        w.field(2, serial.pack_u16(self.length))
        w.field(3, bytes([self.encode_kind]))
        if self.encode_kind != ENCODE_NONE:
            w.field(4, serial.pack_u16(self.domain_n))
            w.field(5, serial.pack_u16(self.width_w))
        return w.finish()

    @classmethod
    def decode(cls, data: bytes) -> "IndexHeader":
        sid, _, fields = serial.decode_record(data, RT_HEADER)
        kind = serial.need(fields, 3)
        if len(kind) != 1 or kind[0] not in ENCODE_NAMES:
            raise DecodeError("bad encoding kind")
        hdr = cls(
            suite_id=sid,
            scheme_id=serial.need(fields, 1).decode(),
            length=serial.unpack_u16(serial.need(fields, 2)),
            encode_kind=kind[0],
            domain_n=serial.unpack_u16(fields[4]) if 4 in fields else 0,
            width_w=serial.unpack_u16(fields[5]) if 5 in fields else 0,
        )
        hdr.scheme_info  # validates the scheme id
        return hdr


@dataclass(frozen=True)
class IndexRecord:
    record_id: bytes
    ct_bytes: bytes
    sealed: SealedPayload

    @property
    def record_id_hex(self) -> str:
        return self.record_id.hex()


class IndexFile:
    """Append-only encrypted index; one writer at a time, many readers."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = FileLock(str(self.path) + ".lock")

    @property
    def sidecar_dir(self) -> Path:
        return self.path.parent / (self.path.name + ".blobs")

    @classmethod
    def create(cls, path, header: IndexHeader) -> "IndexFile":
        idx = cls(path)
        if idx.path.exists():
            raise SchemeError(f"index {idx.path} already exists")
        blob = header.encode()
        with idx._lock:
            with open(idx.path, "xb") as fh:
                fh.write(struct.pack(">I", len(blob)) + blob)
        return idx

    def read_header(self) -> IndexHeader:
        with open(self.path, "rb") as fh:
            head = fh.read(4)
            if len(head) < 4:
                raise TruncatedRecord("index missing header")
            (hlen,) = struct.unpack(">I", head)
            blob = fh.read(hlen)
            if len(blob) < hlen:
                raise TruncatedRecord("index header truncated")
            return IndexHeader.decode(blob)

    def append(self, rng, ct_bytes: bytes, sealed: SealedPayload) -> str:
        """Append one ciphertext record; returns its record id (hex)."""
        record_id = rng.bytes(RECORD_ID_LEN)
        if len(sealed.blob) <= INLINE_LIMIT:
            kind = 0
            locator = sealed.blob
        else:
            kind = 1
            digest = hashlib.sha256(sealed.blob).digest()
            self.sidecar_dir.mkdir(exist_ok=True)
            side = self.sidecar_dir / digest.hex()
            if not side.exists():
                tmp = side.with_suffix(".tmp")
                tmp.write_bytes(sealed.blob)
                os.replace(tmp, side)
            locator = digest
        body = (
            record_id
            + struct.pack(">I", len(ct_bytes))
            + ct_bytes
            + bytes([kind])
            + struct.pack(">H", sealed.tag_len)
            + locator
        )
        with self._lock:
            self.read_header()  # refuse to append to a non-index file
            with open(self.path, "ab") as fh:
                fh.write(struct.pack(">I", len(body)) + body)
        return record_id.hex()

    def records(self):
        """Yield IndexRecord entries, skipping a crash-truncated tail."""
        with open(self.path, "rb") as fh:
            data = fh.read()
        pos = 0
        (hlen,) = struct.unpack(">I", data[:4])
        pos = 4 + hlen
        while pos < len(data):
            if pos + 4 > len(data):
                log.warning("index %s: truncated final record skipped", self.path)
                return
            (blen,) = struct.unpack(">I", data[pos : pos + 4])
            if pos + 4 + blen > len(data):
                log.warning("index %s: truncated final record skipped", self.path)
                return
            body = data[pos + 4 : pos + 4 + blen]
            pos += 4 + blen
            yield self._parse_record(body)

    def _parse_record(self, body: bytes) -> IndexRecord:
        if len(body) < RECORD_ID_LEN + 4:
            raise DecodeError("index record too short")
        record_id = body[:RECORD_ID_LEN]
        (ct_len,) = struct.unpack(">I", body[RECORD_ID_LEN : RECORD_ID_LEN + 4])
        off = RECORD_ID_LEN + 4
        if len(body) < off + ct_len + 3:
            raise DecodeError("index record body truncated")
        ct_bytes = body[off : off + ct_len]
        off += ct_len
        kind = body[off]
        (tag_len,) = struct.unpack(">H", body[off + 1 : off + 3])
        locator = body[off + 3 :]
        if kind == 0:
            blob = locator
        elif kind == 1:
            if len(locator) != 32:
                raise DecodeError("bad sidecar locator")
            side = self.sidecar_dir / locator.hex()
            blob = side.read_bytes()
            if hashlib.sha256(blob).digest() != locator:
                raise DecodeError(f"sidecar {side} content digest mismatch")
        else:
            raise DecodeError(f"unknown payload kind {kind}")
        return IndexRecord(record_id, ct_bytes, SealedPayload(blob, tag_len))
