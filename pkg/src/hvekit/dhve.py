"""HVE scheme ``DHVE3``: 3-dim product-group construction with delegatable
tokens.

Patterns may hold a third slot kind ``?`` (delegatable): a placeholder the
token holder can later fix to a concrete value or widen to ``*`` without
the master secret.  A token carries decryption components for its fixed
slots (per-slot randomness r3_i, unlike ``LL3``) plus, for every ``?``
slot j, a block of delegation components that embeds enough structure to
extend the token by slot j.

Query ignores delegation components entirely, so an un-delegated ``?``
slot matches like a wildcard; query costs (3 + s) product pairings =
3s + 9 base pairings.

Delegation algebra: fixing slot k to value v folds the k-block into the
decryption components under a fresh exponent mu, and refreshes every
remaining j-block with its own exponent tau_j so that delegated tokens
stay structurally identical to fresh ones:

    K1' = K1 * (L1u_k^v * L1h_k)^mu,    K2' = K2 * L2_k^mu,
    K3' = K3 * L3_k^mu,                 K4'_k = L4_{k,k}^mu,
    K4'_i = K4_i * L4_{k,i}^mu,
    L1u_j' = L1u_j^mu,                  L1h_j' = L1h_j^mu * (L1u_k^v * L1h_k)^tau_j,
    L2_j' = L2_j^mu * L2_k^tau_j,       L3_j' = L3_j^mu * L3_k^tau_j,
    L4_{j,j}' = L4_{j,j}^mu,            L4_{j,k}' = L4_{k,k}^tau_j,
    L4_{j,i}' = L4_{j,i}^mu * L4_{k,i}^tau_j,

every line additionally re-randomized by a fresh power of the published
B3 vector.  Fixing to ``*`` just drops the k-block (plus a B3 refresh of
everything that stays).

Randomness draw order: setup as ``LL3``.  gen_token: r1, r2; r3_i for
i in S; y1, y2, y3; y4_i for i in S; then per j in S_? ascending:
s1_j, s2_j; s3_{j,i} for i in S then s3_{j,j}; y_{1,j,u}, y_{1,j,h},
y_{2,j}, y_{3,j}; y_{4,j,i} for i in sorted(S + [j]).  encrypt as
``LL3``.  delegate (fix to value): mu; y1, y2, y3; y4_i for i in new S;
per remaining j: tau_j; y1u, y1h, y2, y3; y4_{j,i} for i in
sorted(new S + [j]).  delegate (fix to ``*``): one refresh exponent per
surviving component in record order.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import serial
from .errors import DecodeError, SchemeError
from .groups import GroupSuite, GTElement, RandomSource, suite_for_id
from .hve import DELEGATABLE, WILDCARD, AttributeVector, HveScheme, PatternVector, SealedPayload
from .ll import LlCiphertext, LlPublicKey, LlSecretKey
from .ll import decode_ciphertext as _ll_decode_ciphertext
from .ll import decode_public_key as _ll_decode_public_key
from .ll import decode_secret_key as _ll_decode_secret_key
from .ll import encode_ciphertext as _ll_encode_ciphertext
from .ll import encode_public_key as _ll_encode_public_key
from .ll import encode_secret_key as _ll_encode_secret_key
from .product import (
    SIDE1,
    SIDE2,
    ProductElement,
    pe_bytes,
    pe_from_bytes,
    pe_list_bytes,
    pe_list_from_bytes,
    vec_pair_product,
)

RT_PUBLIC = b"DHPK"
RT_SECRET = b"DHSK"
RT_TOKEN = b"DHTK"
RT_CIPHER = b"DHCT"

# Key material and ciphertexts share the LL3 shapes; only tokens differ.
DhvePublicKey = LlPublicKey
DhveSecretKey = LlSecretKey
DhveCiphertext = LlCiphertext


@dataclass(frozen=True)
class DelegationBlock:
    """Components enabling one delegatable slot j to be fixed later.

    ``l4_indexes`` lists the slots covered by ``l4`` (the token's fixed
    slots plus j itself), ascending.
    """

    l1u: ProductElement
    l1h: ProductElement
    l2: ProductElement
    l3: ProductElement
    l4_indexes: tuple[int, ...]
    l4: tuple[ProductElement, ...]

    def l4_for(self, i: int) -> ProductElement:
        return self.l4[self.l4_indexes.index(i)]


@dataclass(frozen=True)
class DhveToken:
    length: int
    indexes: tuple[int, ...]  # fixed slots S, ascending
    deleg_indexes: tuple[int, ...]  # delegatable slots S_?, ascending
    k1: ProductElement
    k2: ProductElement
    k3: ProductElement
    k4: tuple[ProductElement, ...]  # aligned with indexes
    blocks: tuple[DelegationBlock, ...]  # aligned with deleg_indexes

    def block_for(self, j: int) -> DelegationBlock:
        return self.blocks[self.deleg_indexes.index(j)]

    @property
    def decryption_element_count(self) -> int:
        return 3 * (3 + len(self.indexes))


class DhveScheme(HveScheme):
    scheme_id = "DHVE3"

    def setup(self, rng: RandomSource, length: int):
        # identical key material to LL3 (per-slot token randomness is a
        # token-time difference, not a key-time one)
        from .ll import LlScheme

        return LlScheme(self.suite).setup(rng, length)

    def gen_token(self, rng: RandomSource, pattern: PatternVector, sk: DhveSecretKey, pk: DhvePublicKey) -> DhveToken:
        self._check_pattern(pattern, sk.length, allow_delegatable=True)
        order = self.suite.order
        b3_2 = sk.basis.b3.side2
        fixed = pattern.fixed_indexes
        deleg = pattern.delegatable_indexes

        r1, r2 = rng.scalar(order), rng.scalar(order)
        r3 = {i: rng.scalar(order) for i in fixed}
        y1, y2, y3 = rng.scalar(order), rng.scalar(order), rng.scalar(order)
        y4 = {i: rng.scalar(order) for i in fixed}

        k1 = sk.k_alpha * sk.w2_1**r1 * sk.w2_2**r2
        for i in fixed:
            k1 = k1 * (sk.u2[i] ** pattern.slots[i] * sk.h2[i]) ** r3[i]
        k1 = k1 * b3_2**y1
        k2 = sk.v2 ** (-r1) * b3_2**y2
        k3 = sk.v2 ** (-r2) * b3_2**y3
        k4 = tuple(sk.v2 ** (-r3[i]) * b3_2 ** y4[i] for i in fixed)

        blocks = []
        for j in deleg:
            s1, s2 = rng.scalar(order), rng.scalar(order)
            s3 = {i: rng.scalar(order) for i in fixed}
            s3[j] = rng.scalar(order)
            y1u, y1h = rng.scalar(order), rng.scalar(order)
            yl2, yl3 = rng.scalar(order), rng.scalar(order)
            cover = tuple(sorted((*fixed, j)))
            y4l = {i: rng.scalar(order) for i in cover}
            l1h = sk.w2_1**s1 * sk.w2_2**s2
            for i in fixed:
                l1h = l1h * (sk.u2[i] ** pattern.slots[i] * sk.h2[i]) ** s3[i]
            l1h = l1h * sk.h2[j] ** s3[j] * b3_2**y1h
            blocks.append(
                DelegationBlock(
                    l1u=sk.u2[j] ** s3[j] * b3_2**y1u,
                    l1h=l1h,
                    l2=sk.v2 ** (-s1) * b3_2**yl2,
                    l3=sk.v2 ** (-s2) * b3_2**yl3,
                    l4_indexes=cover,
                    l4=tuple(sk.v2 ** (-s3[i]) * b3_2 ** y4l[i] for i in cover),
                )
            )
        return DhveToken(sk.length, fixed, deleg, k1, k2, k3, k4, tuple(blocks))

    def encrypt_element(
        self,
        rng: RandomSource,
        attrs: AttributeVector,
        element: GTElement,
        pk: DhvePublicKey,
        sealed: SealedPayload | None = None,
    ) -> DhveCiphertext:
        from .ll import LlScheme

        return LlScheme(self.suite).encrypt_element(rng, attrs, element, pk, sealed)

    def query_element(self, ct: DhveCiphertext, token: DhveToken, pk: DhvePublicKey) -> GTElement:
        if token.length != ct.length:
            raise SchemeError("token and ciphertext lengths differ")
        pairs = [(ct.c1, token.k1), (ct.c2, token.k2), (ct.c3, token.k3)]
        for pos, i in enumerate(token.indexes):
            pairs.append((ct.c4[i], token.k4[pos]))
        return ct.c0 * vec_pair_product(pairs).inverse()

    # -- delegation -------------------------------------------------------

    def delegate(self, rng: RandomSource, pattern: PatternVector, token: DhveToken, pk: DhvePublicKey) -> DhveToken:
        """Delegate by target pattern; must fix exactly one ``?`` slot.

        The token records slot kinds, not fixed values, so only the kind
        structure of ``pattern`` is validated against the token.
        """
        if len(pattern) != token.length:
            raise SchemeError("pattern length differs from token length")
        changed = []
        for i, slot in enumerate(pattern.slots):
            if i in token.deleg_indexes:
                if slot is not DELEGATABLE:
                    changed.append(i)
            elif i in token.indexes:
                if slot is WILDCARD or slot is DELEGATABLE:
                    raise SchemeError(f"slot {i} is fixed in the token and cannot be changed")
            else:
                if slot is not WILDCARD:
                    raise SchemeError(f"slot {i} is a wildcard in the token and cannot be changed")
        if len(changed) != 1:
            raise SchemeError(f"delegation must fix exactly one delegatable slot, got {len(changed)}")
        k = changed[0]
        return self.delegate_fix(rng, k, pattern.slots[k], token, pk)

    def delegate_fix(self, rng: RandomSource, index: int, to, token: DhveToken, pk: DhvePublicKey) -> DhveToken:
        """Fix delegatable slot ``index`` to a value or to the wildcard."""
        if index not in token.deleg_indexes:
            raise SchemeError(f"slot {index} is not delegatable in this token")
        if to is WILDCARD:
            return self._widen(rng, index, token, pk)
        if to is DELEGATABLE or not isinstance(to, int):
            raise SchemeError("delegation target must be an attribute value or the wildcard")
        return self._fix_value(rng, index, to, token, pk)

    def _widen(self, rng: RandomSource, k: int, token: DhveToken, pk: DhvePublicKey) -> DhveToken:
        order = self.suite.order
        b3_2 = pk.basis.b3.side2

        def fresh(pe):
            return pe * b3_2 ** rng.scalar(order)

        keep = tuple(j for j in token.deleg_indexes if j != k)
        blocks = []
        for j in keep:
            blk = token.block_for(j)
            blocks.append(
                DelegationBlock(
                    l1u=fresh(blk.l1u),
                    l1h=fresh(blk.l1h),
                    l2=fresh(blk.l2),
                    l3=fresh(blk.l3),
                    l4_indexes=blk.l4_indexes,
                    l4=tuple(fresh(pe) for pe in blk.l4),
                )
            )
        return DhveToken(
            token.length,
            token.indexes,
            keep,
            fresh(token.k1),
            fresh(token.k2),
            fresh(token.k3),
            tuple(fresh(pe) for pe in token.k4),
            tuple(blocks),
        )

    def _fix_value(self, rng: RandomSource, k: int, value: int, token: DhveToken, pk: DhvePublicKey) -> DhveToken:
        order = self.suite.order
        b3_2 = pk.basis.b3.side2
        kblk = token.block_for(k)
        new_fixed = tuple(sorted((*token.indexes, k)))
        keep = tuple(j for j in token.deleg_indexes if j != k)

        mu = rng.scalar(order)
        y1, y2, y3 = rng.scalar(order), rng.scalar(order), rng.scalar(order)
        y4 = {i: rng.scalar(order) for i in new_fixed}

        anchor = kblk.l1u**value * kblk.l1h  # (L1u_k^v * L1h_k)
        k1 = token.k1 * anchor**mu * b3_2**y1
        k2 = token.k2 * kblk.l2**mu * b3_2**y2
        k3 = token.k3 * kblk.l3**mu * b3_2**y3
        k4 = []
        for i in new_fixed:
            if i == k:
                k4.append(kblk.l4_for(k) ** mu * b3_2 ** y4[i])
            else:
                k4.append(token.k4[token.indexes.index(i)] * kblk.l4_for(i) ** mu * b3_2 ** y4[i])

        blocks = []
        for j in keep:
            blk = token.block_for(j)
            tau = rng.scalar(order)
            y1u, y1h = rng.scalar(order), rng.scalar(order)
            yl2, yl3 = rng.scalar(order), rng.scalar(order)
            cover = tuple(sorted((*new_fixed, j)))
            y4l = {i: rng.scalar(order) for i in cover}
            l4 = []
            for i in cover:
                if i == j:
                    l4.append(blk.l4_for(j) ** mu * b3_2 ** y4l[i])
                elif i == k:
                    l4.append(kblk.l4_for(k) ** tau * b3_2 ** y4l[i])
                else:
                    l4.append(blk.l4_for(i) ** mu * kblk.l4_for(i) ** tau * b3_2 ** y4l[i])
            blocks.append(
                DelegationBlock(
                    l1u=blk.l1u**mu * b3_2**y1u,
                    l1h=blk.l1h**mu * anchor**tau * b3_2**y1h,
                    l2=blk.l2**mu * kblk.l2**tau * b3_2**yl2,
                    l3=blk.l3**mu * kblk.l3**tau * b3_2**yl3,
                    l4_indexes=cover,
                    l4=tuple(l4),
                )
            )
        return DhveToken(token.length, new_fixed, keep, k1, k2, k3, tuple(k4), tuple(blocks))


# -- serialization (key/ciphertext layouts shared with LL3, own types) ------


def encode_public_key(pk: DhvePublicKey) -> bytes:
    return _ll_encode_public_key(pk, record_type=RT_PUBLIC)


def encode_secret_key(suite: GroupSuite, sk: DhveSecretKey) -> bytes:
    return _ll_encode_secret_key(suite, sk, record_type=RT_SECRET)


def decode_public_key(data: bytes, suite: GroupSuite | None = None) -> DhvePublicKey:
    return _ll_decode_public_key(data, suite, record_type=RT_PUBLIC)


def decode_secret_key(data: bytes, suite: GroupSuite | None = None) -> DhveSecretKey:
    return _ll_decode_secret_key(data, suite, record_type=RT_SECRET)


def encode_ciphertext(suite: GroupSuite, ct: DhveCiphertext) -> bytes:
    return _ll_encode_ciphertext(suite, ct, record_type=RT_CIPHER)


def decode_ciphertext(data: bytes, suite: GroupSuite | None = None) -> DhveCiphertext:
    return _ll_decode_ciphertext(data, suite, record_type=RT_CIPHER)


def encode_token(suite: GroupSuite, token: DhveToken) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_TOKEN)
    w.field(1, serial.pack_u16(token.length))
    w.field(2, serial.pack_u16_list(token.indexes))
    w.field(3, serial.pack_u16_list(token.deleg_indexes))
    w.field(4, pe_bytes(token.k1) + pe_bytes(token.k2) + pe_bytes(token.k3))
    w.field(5, pe_list_bytes(token.k4))
    parts = []
    for blk in token.blocks:
        parts.append(pe_bytes(blk.l1u) + pe_bytes(blk.l1h) + pe_bytes(blk.l2) + pe_bytes(blk.l3))
        parts.append(serial.pack_u16_list(blk.l4_indexes))
        parts.append(pe_list_bytes(blk.l4))
    w.field(6, serial.pack_u32(len(token.blocks)) + b"".join(parts))
    return w.finish()


def decode_token(data: bytes, suite: GroupSuite | None = None) -> DhveToken:
    sid, _, fields = serial.decode_record(data, RT_TOKEN, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    length = serial.unpack_u16(serial.need(fields, 1))
    indexes = tuple(serial.unpack_u16_list(serial.need(fields, 2)))
    deleg = tuple(serial.unpack_u16_list(serial.need(fields, 3)))
    plen = suite.g2_byte_len() * 3
    raw = serial.need(fields, 4)
    if len(raw) != 3 * plen:
        raise DecodeError("bad token payload")
    k1, k2, k3 = (pe_from_bytes(suite, SIDE2, raw[i * plen : (i + 1) * plen], 3) for i in range(3))
    k4 = pe_list_from_bytes(suite, SIDE2, serial.need(fields, 5), 3)
    braw = serial.need(fields, 6)
    if len(braw) < 4:
        raise DecodeError("bad delegation payload")
    nblocks = serial.unpack_u32(braw[:4])
    pos = 4
    blocks = []
    for _ in range(nblocks):
        if pos + 4 * plen > len(braw):
            raise DecodeError("truncated delegation block")
        l1u, l1h, l2, l3 = (
            pe_from_bytes(suite, SIDE2, braw[pos + i * plen : pos + (i + 1) * plen], 3) for i in range(4)
        )
        pos += 4 * plen
        if pos + 4 > len(braw):
            raise DecodeError("truncated delegation block")
        count = serial.unpack_u32(braw[pos : pos + 4])
        ilen = 4 + count * 2
        l4_indexes = tuple(serial.unpack_u16_list(braw[pos : pos + ilen]))
        pos += ilen
        llen = 4 + count * plen
        if pos + llen > len(braw):
            raise DecodeError("truncated delegation block")
        l4 = pe_list_from_bytes(suite, SIDE2, braw[pos : pos + llen], 3)
        pos += llen
        blocks.append(DelegationBlock(l1u, l1h, l2, l3, l4_indexes, l4))
    if pos != len(braw):
        raise DecodeError("trailing delegation bytes")
    token = DhveToken(length, indexes, deleg, k1, k2, k3, k4, tuple(blocks))
    if len(token.k4) != len(indexes) or len(blocks) != len(deleg):
        raise DecodeError("inconsistent token component counts")
    return token
