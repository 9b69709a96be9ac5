"""Trivial predicate encryption from parallel PKE instances.

One hybrid-PKE keypair per predicate in an enumerable family; slot j of a
ciphertext encrypts the payload when predicate j accepts the attributes
and a reserved bottom marker otherwise, so a token (an index plus that
slot's decryption key) decides matches deterministically.  This is the
desk-scale oracle the HVE schemes are validated against; it is test-only
and not wired into the CLI.

The underlying PKE is hashed-ElGamal over the suite's source group 1 with
the same authenticated symmetric layer the payload sealing uses.
"""

from __future__ import annotations

from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.hashes import SHA256
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from .errors import SchemeError
from .groups import G1Element, GroupSuite, RandomSource
from .hve import AttributeVector, MatchResult, PatternVector, predicate_eval

_KDF_TAG = b"hvekit trivial-pe v1"
_NONCE_LEN = 12
_PAYLOAD_TAG = b"\x01"
_BOTTOM_TAG = b"\x00"


@dataclass(frozen=True)
class TrivialPublicKey:
    pks: tuple[G1Element, ...]

    @property
    def family_size(self) -> int:
        return len(self.pks)


@dataclass(frozen=True)
class TrivialSecretKey:
    sks: tuple[int, ...]


@dataclass(frozen=True)
class TrivialToken:
    index: int
    sk: int


@dataclass(frozen=True)
class TrivialCiphertext:
    slots: tuple[tuple[G1Element, bytes], ...]  # (ephemeral, blob) per predicate


def _slot_key(shared: G1Element) -> bytes:
    return HKDF(algorithm=SHA256(), length=32, salt=None, info=_KDF_TAG).derive(shared.to_bytes())


class TrivialPeScheme:
    """Predicate encryption for an explicit family of HVE patterns."""

    def __init__(self, suite: GroupSuite):
        self.suite = suite

    def setup(self, rng: RandomSource, family):
        family = tuple(family)
        if not family:
            raise SchemeError("predicate family must be nonempty")
        length = len(family[0])
        for pat in family:
            if not isinstance(pat, PatternVector) or len(pat) != length or pat.has_delegatable:
                raise SchemeError("family members must be same-length, non-delegatable patterns")
        sks = tuple(rng.nonzero_scalar(self.suite.order) for _ in family)
        pks = tuple(self.suite.side1_gen**x for x in sks)
        return TrivialPublicKey(pks), TrivialSecretKey(sks)

    def gen_token(self, index: int, sk: TrivialSecretKey) -> TrivialToken:
        if not 0 <= index < len(sk.sks):
            raise SchemeError(f"predicate index {index} out of range")
        return TrivialToken(index, sk.sks[index])

    def encrypt(
        self,
        rng: RandomSource,
        attrs: AttributeVector,
        payload: bytes,
        pk: TrivialPublicKey,
        family,
    ) -> TrivialCiphertext:
        family = tuple(family)
        if len(family) != pk.family_size:
            raise SchemeError("family size does not match key")
        slots = []
        for pat, slot_pk in zip(family, pk.pks):
            plaintext = _PAYLOAD_TAG + payload if predicate_eval(pat, attrs) else _BOTTOM_TAG
            r = rng.nonzero_scalar(self.suite.order)
            eph = self.suite.side1_gen**r
            key = _slot_key(slot_pk**r)
            nonce = rng.bytes(_NONCE_LEN)
            slots.append((eph, nonce + AESGCM(key).encrypt(nonce, plaintext, None)))
        return TrivialCiphertext(tuple(slots))

    def query(self, ct: TrivialCiphertext, token: TrivialToken) -> MatchResult:
        if not 0 <= token.index < len(ct.slots):
            raise SchemeError(f"token index {token.index} out of range")
        eph, blob = ct.slots[token.index]
        key = _slot_key(eph**token.sk)
        nonce, body = blob[:_NONCE_LEN], blob[_NONCE_LEN:]
        try:
            plaintext = AESGCM(key).decrypt(nonce, body, None)
        except InvalidTag:
            return MatchResult.no_match()
        if plaintext[:1] == _PAYLOAD_TAG:
            return MatchResult.match(plaintext[1:])
        return MatchResult.no_match()
