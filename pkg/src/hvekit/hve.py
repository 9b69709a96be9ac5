"""Scheme-independent HVE contract: vectors, the match predicate, payload
sealing, and the uniform four-algorithm interface.

A token pattern is a vector of slots, each either a fixed attribute value,
the wildcard ``*`` (matches anything), or dHVE's delegatable marker ``?``
(a slot the token holder may later fix).  A ciphertext attribute vector
holds fixed values only.  Attribute values are canonical scalars: either
hashes of byte strings or small integers from the predicate encodings.

Sealing realizes the "reject unrecognizable decryptions" contract: the
scheme-side mask element never leaves the target group; the payload rides
in an authenticated symmetric blob keyed from the mask, so querying with a
non-matching token fails authentication instead of yielding garbage.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.hashes import SHA256
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from .errors import PayloadTooLarge, SchemeError
from .groups import GroupSuite, GTElement, RandomSource

MAX_PAYLOAD = 1 << 20  # 1 MiB
TAG_LEN = 16
_NONCE_LEN = 12
_ATTR_TAG = b"hvekit attr v1"
_SEAL_TAG = b"hvekit seal v1"


class _Marker:
    __slots__ = ("_name",)

    def __init__(self, name):
        self._name = name

    def __repr__(self):
        return self._name

    def __deepcopy__(self, memo):
        return self

    def __copy__(self):
        return self


WILDCARD = _Marker("*")
DELEGATABLE = _Marker("?")


def attribute_scalar(suite: GroupSuite, value: bytes | str) -> int:
    """Canonical scalar for a byte-string attribute."""
    if isinstance(value, str):
        value = value.encode()
    return suite.hash_to_scalar(value, _ATTR_TAG)


@dataclass(frozen=True)
class AttributeVector:
    """Ciphertext attribute vector (fixed values only)."""

    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise SchemeError("attribute vector must have length >= 1")
        if not all(isinstance(v, int) and v >= 0 for v in self.values):
            raise SchemeError("attribute values must be non-negative ints")
        object.__setattr__(self, "values", tuple(self.values))

    @classmethod
    def from_values(cls, values) -> "AttributeVector":
        return cls(tuple(int(v) for v in values))

    @classmethod
    def from_strings(cls, suite: GroupSuite, items) -> "AttributeVector":
        return cls(tuple(attribute_scalar(suite, s) for s in items))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class PatternVector:
    """Token pattern: fixed values, wildcards, and (dHVE only) delegatable
    slots."""

    slots: tuple

    def __post_init__(self):
        if len(self.slots) < 1:
            raise SchemeError("pattern must have length >= 1")
        for s in self.slots:
            if s is WILDCARD or s is DELEGATABLE:
                continue
            if not (isinstance(s, int) and s >= 0):
                raise SchemeError(f"bad pattern slot {s!r}")
        object.__setattr__(self, "slots", tuple(self.slots))

    @classmethod
    def from_strings(cls, suite: GroupSuite, items) -> "PatternVector":
        """Build from byte/str values with None -> wildcard."""
        slots = []
        for it in items:
            if it is None or it is WILDCARD:
                slots.append(WILDCARD)
            elif it is DELEGATABLE:
                slots.append(DELEGATABLE)
            else:
                slots.append(attribute_scalar(suite, it))
        return cls(tuple(slots))

    def __len__(self):
        return len(self.slots)

    @property
    def fixed_indexes(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.slots) if s is not WILDCARD and s is not DELEGATABLE)

    @property
    def wildcard_indexes(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.slots) if s is WILDCARD)

    @property
    def delegatable_indexes(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.slots) if s is DELEGATABLE)

    @property
    def has_delegatable(self) -> bool:
        return any(s is DELEGATABLE for s in self.slots)

    def without_delegatable(self) -> "PatternVector":
        """The pattern with every '?' read as '*' (its match behavior)."""
        return PatternVector(tuple(WILDCARD if s is DELEGATABLE else s for s in self.slots))

    def fix(self, index: int, to) -> "PatternVector":
        slots = list(self.slots)
        slots[index] = to
        return PatternVector(tuple(slots))


def predicate_eval(pattern: PatternVector, attrs: AttributeVector) -> bool:
    """True iff every non-wildcard pattern slot equals the attribute."""
    if len(pattern) != len(attrs):
        raise SchemeError(f"pattern length {len(pattern)} != attribute length {len(attrs)}")
    if pattern.has_delegatable:
        raise SchemeError("pattern contains delegatable slots; fix or widen them first")
    return all(s is WILDCARD or s == v for s, v in zip(pattern.slots, attrs.values))


@dataclass(frozen=True)
class SealedPayload:
    """Authenticated symmetric blob: nonce || ciphertext || tag."""

    blob: bytes
    tag_len: int = TAG_LEN


@dataclass(frozen=True)
class MatchResult:
    payload: bytes | None = None

    @property
    def matched(self) -> bool:
        return self.payload is not None

    @staticmethod
    def match(payload: bytes) -> "MatchResult":
        return MatchResult(payload)

    @staticmethod
    def no_match() -> "MatchResult":
        return MatchResult(None)


def _seal_key(mask: GTElement) -> bytes:
    return HKDF(algorithm=SHA256(), length=32, salt=None, info=_SEAL_TAG).derive(mask.to_bytes())


def seal(rng: RandomSource, payload: bytes, suite: GroupSuite, max_payload: int = MAX_PAYLOAD):
    """Draw a fresh uniform mask element and seal ``payload`` under it.

    Returns ``(mask, SealedPayload)``; the scheme hides the mask, the blob
    travels in the clear inside the ciphertext record.
    """
    if len(payload) > max_payload:
        raise PayloadTooLarge(f"payload of {len(payload)} bytes exceeds limit {max_payload}")
    mask = suite.gt_generator ** rng.nonzero_scalar(suite.order)
    nonce = rng.bytes(_NONCE_LEN)
    blob = nonce + AESGCM(_seal_key(mask)).encrypt(nonce, payload, None)
    return mask, SealedPayload(blob)


def open_sealed(candidate_mask: GTElement, sealed: SealedPayload) -> MatchResult:
    """Inverse of :func:`seal`; authentication failure is a NoMatch."""
    nonce, ct = sealed.blob[:_NONCE_LEN], sealed.blob[_NONCE_LEN:]
    try:
        return MatchResult.match(AESGCM(_seal_key(candidate_mask)).decrypt(nonce, ct, None))
    except InvalidTag:
        return MatchResult.no_match()


class HveScheme(abc.ABC):
    """Uniform Setup/GenToken/Encrypt/Query surface.

    ``encrypt``/``query`` carry real payloads through seal/open;
    ``encrypt_element``/``query_element`` are the raw mode used by
    algebraic tests: the ciphertext hides a caller-chosen target-group
    element and query returns the candidate element for exact comparison.
    """

    scheme_id: str

    def __init__(self, suite: GroupSuite):
        self.suite = suite

    @abc.abstractmethod
    def setup(self, rng: RandomSource, length: int):
        raise NotImplementedError

    @abc.abstractmethod
    def gen_token(self, rng: RandomSource, pattern: PatternVector, sk, pk):
        raise NotImplementedError

    @abc.abstractmethod
    def encrypt_element(self, rng: RandomSource, attrs: AttributeVector, element: GTElement, pk, sealed=None):
        raise NotImplementedError

    @abc.abstractmethod
    def query_element(self, ct, token, pk) -> GTElement:
        raise NotImplementedError

    def encrypt(self, rng: RandomSource, attrs: AttributeVector, payload: bytes, pk):
        mask, sealed = seal(rng, payload, self.suite)
        return self.encrypt_element(rng, attrs, mask, pk, sealed=sealed)

    def query(self, ct, token, pk) -> MatchResult:
        if ct.sealed is None:
            raise SchemeError("raw-mode ciphertext has no sealed payload; use query_element")
        return open_sealed(self.query_element(ct, token, pk), ct.sealed)

    def _check_pattern(self, pattern: PatternVector, length: int, allow_delegatable: bool = False):
        if len(pattern) != length:
            raise SchemeError(f"pattern length {len(pattern)} != key length {length}")
        if pattern.has_delegatable and not allow_delegatable:
            raise SchemeError(f"{self.scheme_id} tokens cannot carry delegatable slots")

    def _check_attrs(self, attrs: AttributeVector, length: int):
        if len(attrs) != length:
            raise SchemeError(f"attribute length {len(attrs)} != key length {length}")
