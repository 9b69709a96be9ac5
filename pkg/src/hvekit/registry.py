"""Scheme registry: maps CLI names and record types to scheme classes and
their record codecs."""

from __future__ import annotations

from dataclasses import dataclass

from . import asym, bw, dhve, ll
from .errors import DecodeError, SchemeError
from .groups import ASYMMETRIC, SYMMETRIC, GroupSuite


@dataclass(frozen=True)
class SchemeInfo:
    name: str  # CLI name
    scheme_id: str  # wire id
    factory: type
    module: object
    required_mode: str | None
    supports_delegation: bool = False


SCHEMES = {
    "bw2": SchemeInfo("bw2", "BW2", bw.BwScheme, bw, None),
    "ll3": SchemeInfo("ll3", "LL3", ll.LlScheme, ll, None),
    "dhve3": SchemeInfo("dhve3", "DHVE3", dhve.DhveScheme, dhve, None, supports_delegation=True),
    "asym1": SchemeInfo("asym1", "ASYM1", asym.AsymScheme, asym, ASYMMETRIC),
}

SCHEMES_BY_ID = {info.scheme_id: info for info in SCHEMES.values()}

_RECORD_TYPES = {}
for _info in SCHEMES.values():
    _RECORD_TYPES[_info.module.RT_PUBLIC] = ("public", _info)
    _RECORD_TYPES[_info.module.RT_SECRET] = ("secret", _info)
    _RECORD_TYPES[_info.module.RT_TOKEN] = ("token", _info)
    _RECORD_TYPES[_info.module.RT_CIPHER] = ("cipher", _info)


def default_mode(info: SchemeInfo) -> str:
    return info.required_mode or SYMMETRIC


def make_scheme(info: SchemeInfo, suite: GroupSuite):
    if info.required_mode and suite.mode != info.required_mode:
        raise SchemeError(f"{info.scheme_id} requires a {info.required_mode}-mode suite")
    return info.factory(suite)


def sniff_record(data: bytes):
    """Identify a serialized record: returns (kind, SchemeInfo)."""
    from . import serial

    if len(data) < len(serial.MAGIC) + 2 + 4:
        raise DecodeError("record too short")
    rt = bytes(data[len(serial.MAGIC) + 2 : len(serial.MAGIC) + 6])
    if rt not in _RECORD_TYPES:
        raise DecodeError(f"unknown record type {rt!r}")
    return _RECORD_TYPES[rt]
