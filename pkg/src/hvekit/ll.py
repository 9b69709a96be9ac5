"""HVE scheme ``LL3``: 3-dim product-group construction whose tokens have
four product elements and whose query always costs 12 base pairings.

The constant cost comes from sharing one exponent r3 across every fixed
slot of the token: the per-slot ciphertext parts are aggregated by
multiplication *before* the single pairing against K4.

Shapes: token = 12 elements for any pattern; ciphertext = 3l + 9
elements + 1 GT; query = 4 product pairings = 12 base pairings for any
l and s.

Randomness draw order: setup: basis (a1, a2, a3); v'; w'_1; w'_2;
(u'_i, h'_i) for i = 1..l; alpha; z_v; z_w1; z_w2; (z_u_i, z_h_i) for
i = 1..l.  gen_token: r1, r2, r3; y1..y4.  encrypt: t; z1, z2, z3;
z4_i for i = 1..l.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import serial
from .errors import DecodeError, SchemeError
from .groups import GroupSuite, GTElement, RandomSource, suite_for_id
from .hve import AttributeVector, HveScheme, PatternVector, SealedPayload
from .product import (
    SIDE1,
    SIDE2,
    Basis3,
    Basis3Public,
    ProductElement,
    dual_byte_len,
    dual_bytes,
    dual_from_bytes,
    gen_basis3,
    pe_bytes,
    pe_from_bytes,
    pe_list_bytes,
    pe_list_from_bytes,
    product_identity,
    vec_pair,
    vec_pair_product,
)

RT_PUBLIC = b"LLPK"
RT_SECRET = b"LLSK"
RT_TOKEN = b"LLTK"
RT_CIPHER = b"LLCT"


@dataclass(frozen=True)
class LlPublicKey:
    basis: Basis3Public
    v: ProductElement
    w1: ProductElement
    w2: ProductElement
    u: tuple[ProductElement, ...]
    h: tuple[ProductElement, ...]
    omega: GTElement

    @property
    def length(self) -> int:
        return len(self.u)

    @property
    def suite(self) -> GroupSuite:
        return self.v.suite

    @property
    def source_element_count(self) -> int:
        return 3 * (4 + 3 + 2 * self.length)


@dataclass(frozen=True)
class LlSecretKey:
    v2: ProductElement
    w2_1: ProductElement
    w2_2: ProductElement
    u2: tuple[ProductElement, ...]
    h2: tuple[ProductElement, ...]
    k_alpha: ProductElement
    basis: Basis3  # trapdoors retained for test oracles only

    @property
    def length(self) -> int:
        return len(self.u2)


@dataclass(frozen=True)
class LlToken:
    indexes: tuple[int, ...]
    k1: ProductElement
    k2: ProductElement
    k3: ProductElement
    k4: ProductElement

    @property
    def element_count(self) -> int:
        return 3 * 4


@dataclass(frozen=True)
class LlCiphertext:
    c0: GTElement
    c1: ProductElement
    c2: ProductElement
    c3: ProductElement
    c4: tuple[ProductElement, ...]
    sealed: SealedPayload | None

    @property
    def length(self) -> int:
        return len(self.c4)

    @property
    def source_element_count(self) -> int:
        return 3 * (3 + self.length)


class LlScheme(HveScheme):
    scheme_id = "LL3"

    def setup(self, rng: RandomSource, length: int):
        if length < 1:
            raise SchemeError("need at least one attribute field")
        suite = self.suite
        order = suite.order
        basis = gen_basis3(rng, suite)
        v_ = rng.scalar(order)
        w1_ = rng.scalar(order)
        w2_ = rng.scalar(order)
        uh = [(rng.scalar(order), rng.scalar(order)) for _ in range(length)]
        alpha = rng.scalar(order)
        z_v = rng.scalar(order)
        z_w1 = rng.scalar(order)
        z_w2 = rng.scalar(order)
        z_uh = [(rng.scalar(order), rng.scalar(order)) for _ in range(length)]

        b11_1 = basis.b11.side1
        b12_2 = basis.b12.side2
        b2_1 = basis.b2.side1
        g_v1 = b11_1**v_
        pk = LlPublicKey(
            basis=basis.public,
            v=g_v1 * b2_1**z_v,
            w1=b11_1**w1_ * b2_1**z_w1,
            w2=b11_1**w2_ * b2_1**z_w2,
            u=tuple(b11_1**u * b2_1**zu for (u, _), (zu, _) in zip(uh, z_uh)),
            h=tuple(b11_1**h * b2_1**zh for (_, h), (_, zh) in zip(uh, z_uh)),
            omega=vec_pair(g_v1, basis.b12.side2) ** alpha,
        )
        sk = LlSecretKey(
            v2=b12_2**v_,
            w2_1=b12_2**w1_,
            w2_2=b12_2**w2_,
            u2=tuple(b12_2**u for (u, _) in uh),
            h2=tuple(b12_2**h for (_, h) in uh),
            k_alpha=b12_2**alpha,
            basis=basis,
        )
        return pk, sk

    def gen_token(self, rng: RandomSource, pattern: PatternVector, sk: LlSecretKey, pk: LlPublicKey) -> LlToken:
        self._check_pattern(pattern, sk.length)
        order = self.suite.order
        indexes = pattern.fixed_indexes
        r1, r2, r3 = rng.scalar(order), rng.scalar(order), rng.scalar(order)
        y1, y2, y3, y4 = (rng.scalar(order) for _ in range(4))
        b3_2 = sk.basis.b3.side2
        k1 = sk.k_alpha * sk.w2_1**r1 * sk.w2_2**r2
        agg = None
        for i in indexes:
            term = sk.u2[i] ** pattern.slots[i] * sk.h2[i]
            agg = term if agg is None else agg * term
        if agg is not None:
            k1 = k1 * agg**r3
        k1 = k1 * b3_2**y1
        return LlToken(
            indexes=indexes,
            k1=k1,
            k2=sk.v2 ** (-r1) * b3_2**y2,
            k3=sk.v2 ** (-r2) * b3_2**y3,
            k4=sk.v2 ** (-r3) * b3_2**y4,
        )

    def encrypt_element(
        self,
        rng: RandomSource,
        attrs: AttributeVector,
        element: GTElement,
        pk: LlPublicKey,
        sealed: SealedPayload | None = None,
    ) -> LlCiphertext:
        self._check_attrs(attrs, pk.length)
        order = self.suite.order
        b2_1 = pk.basis.b2.side1
        t = rng.scalar(order)
        z1, z2, z3 = rng.scalar(order), rng.scalar(order), rng.scalar(order)
        c4 = []
        for i, x in enumerate(attrs.values):
            z4 = rng.scalar(order)
            c4.append((pk.u[i] ** x * pk.h[i]) ** t * b2_1**z4)
        return LlCiphertext(
            c0=pk.omega**t * element,
            c1=pk.v**t * b2_1**z1,
            c2=pk.w1**t * b2_1**z2,
            c3=pk.w2**t * b2_1**z3,
            c4=tuple(c4),
            sealed=sealed,
        )

    def query_element(self, ct: LlCiphertext, token: LlToken, pk: LlPublicKey) -> GTElement:
        if token.indexes and token.indexes[-1] >= ct.length:
            raise SchemeError("token index beyond ciphertext length")
        agg = product_identity(self.suite, SIDE1, 3)
        for i in token.indexes:
            agg = agg * ct.c4[i]
        denom = vec_pair_product(
            [(ct.c1, token.k1), (ct.c2, token.k2), (ct.c3, token.k3), (agg, token.k4)]
        )
        return ct.c0 * denom.inverse()


# -- serialization ---------------------------------------------------------


def encode_public_key(pk: LlPublicKey, record_type: bytes = RT_PUBLIC) -> bytes:
    suite = pk.suite
    w = serial.RecordWriter(suite.suite_id, record_type)
    w.field(1, serial.pack_u16(pk.length))
    w.field(2, b"".join(dual_bytes(d) for d in (pk.basis.b11, pk.basis.b12, pk.basis.b2, pk.basis.b3)))
    w.field(3, pe_bytes(pk.v) + pe_bytes(pk.w1) + pe_bytes(pk.w2))
    w.field(4, pe_list_bytes(pk.u))
    w.field(5, pe_list_bytes(pk.h))
    w.field(6, pk.omega.to_bytes())
    return w.finish()


def decode_public_key(data: bytes, suite: GroupSuite | None = None, record_type: bytes = RT_PUBLIC) -> LlPublicKey:
    sid, _, fields = serial.decode_record(data, record_type, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    length = serial.unpack_u16(serial.need(fields, 1))
    dlen = dual_byte_len(suite, 3)
    braw = serial.need(fields, 2)
    if len(braw) != 4 * dlen:
        raise DecodeError("bad basis payload")
    basis = Basis3Public(*(dual_from_bytes(suite, braw[i * dlen : (i + 1) * dlen], 3) for i in range(4)))
    plen = suite.g1_byte_len() * 3
    vraw = serial.need(fields, 3)
    if len(vraw) != 3 * plen:
        raise DecodeError("bad key vector payload")
    pk = LlPublicKey(
        basis=basis,
        v=pe_from_bytes(suite, SIDE1, vraw[:plen], 3),
        w1=pe_from_bytes(suite, SIDE1, vraw[plen : 2 * plen], 3),
        w2=pe_from_bytes(suite, SIDE1, vraw[2 * plen :], 3),
        u=pe_list_from_bytes(suite, SIDE1, serial.need(fields, 4), 3),
        h=pe_list_from_bytes(suite, SIDE1, serial.need(fields, 5), 3),
        omega=serial.unpack_gt(suite, serial.need(fields, 6)),
    )
    if pk.length != length or len(pk.h) != length:
        raise DecodeError("inconsistent public-key component counts")
    return pk


def encode_secret_key(suite: GroupSuite, sk: LlSecretKey, record_type: bytes = RT_SECRET) -> bytes:
    w = serial.RecordWriter(suite.suite_id, record_type)
    w.field(1, serial.pack_u16(sk.length))
    w.field(2, pe_bytes(sk.v2) + pe_bytes(sk.w2_1) + pe_bytes(sk.w2_2) + pe_bytes(sk.k_alpha))
    w.field(3, pe_list_bytes(sk.u2))
    w.field(4, pe_list_bytes(sk.h2))
    w.field(5, b"".join(dual_bytes(d) for d in (sk.basis.b11, sk.basis.b12, sk.basis.b2, sk.basis.b3)))
    w.field(6, serial.pack_scalar_list([sk.basis.a1, sk.basis.a2, sk.basis.a3]))
    return w.finish()


def decode_secret_key(data: bytes, suite: GroupSuite | None = None, record_type: bytes = RT_SECRET) -> LlSecretKey:
    sid, _, fields = serial.decode_record(data, record_type, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    length = serial.unpack_u16(serial.need(fields, 1))
    plen = suite.g2_byte_len() * 3
    vraw = serial.need(fields, 2)
    if len(vraw) != 4 * plen:
        raise DecodeError("bad key vector payload")
    dlen = dual_byte_len(suite, 3)
    braw = serial.need(fields, 5)
    if len(braw) != 4 * dlen:
        raise DecodeError("bad basis payload")
    duals = [dual_from_bytes(suite, braw[i * dlen : (i + 1) * dlen], 3) for i in range(4)]
    a1, a2, a3 = serial.unpack_scalar_list(serial.need(fields, 6), suite.order)
    sk = LlSecretKey(
        v2=pe_from_bytes(suite, SIDE2, vraw[:plen], 3),
        w2_1=pe_from_bytes(suite, SIDE2, vraw[plen : 2 * plen], 3),
        w2_2=pe_from_bytes(suite, SIDE2, vraw[2 * plen : 3 * plen], 3),
        u2=pe_list_from_bytes(suite, SIDE2, serial.need(fields, 3), 3),
        h2=pe_list_from_bytes(suite, SIDE2, serial.need(fields, 4), 3),
        k_alpha=pe_from_bytes(suite, SIDE2, vraw[3 * plen :], 3),
        basis=Basis3(*duals, a1=a1, a2=a2, a3=a3),
    )
    if sk.length != length:
        raise DecodeError("inconsistent secret-key component counts")
    return sk


def encode_token(suite: GroupSuite, token: LlToken) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_TOKEN)
    w.field(1, serial.pack_u16_list(token.indexes))
    w.field(2, pe_bytes(token.k1) + pe_bytes(token.k2) + pe_bytes(token.k3) + pe_bytes(token.k4))
    return w.finish()


def decode_token(data: bytes, suite: GroupSuite | None = None) -> LlToken:
    sid, _, fields = serial.decode_record(data, RT_TOKEN, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    indexes = tuple(serial.unpack_u16_list(serial.need(fields, 1)))
    if list(indexes) != sorted(set(indexes)):
        raise DecodeError("token indexes must be strictly ascending")
    plen = suite.g2_byte_len() * 3
    raw = serial.need(fields, 2)
    if len(raw) != 4 * plen:
        raise DecodeError("bad token payload")
    ks = [pe_from_bytes(suite, SIDE2, raw[i * plen : (i + 1) * plen], 3) for i in range(4)]
    return LlToken(indexes, *ks)


def encode_ciphertext(suite: GroupSuite, ct: LlCiphertext, record_type: bytes = RT_CIPHER) -> bytes:
    w = serial.RecordWriter(suite.suite_id, record_type)
    w.field(1, ct.c0.to_bytes())
    w.field(2, pe_bytes(ct.c1) + pe_bytes(ct.c2) + pe_bytes(ct.c3))
    w.field(3, pe_list_bytes(ct.c4))
    if ct.sealed is not None:
        w.field(4, ct.sealed.blob)
        w.field(5, serial.pack_u16(ct.sealed.tag_len))
    return w.finish()


def decode_ciphertext(data: bytes, suite: GroupSuite | None = None, record_type: bytes = RT_CIPHER) -> LlCiphertext:
    sid, _, fields = serial.decode_record(data, record_type, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    plen = suite.g1_byte_len() * 3
    raw = serial.need(fields, 2)
    if len(raw) != 3 * plen:
        raise DecodeError("bad ciphertext payload")
    sealed = None
    if 4 in fields:
        sealed = SealedPayload(fields[4], serial.unpack_u16(serial.need(fields, 5)))
    return LlCiphertext(
        c0=serial.unpack_gt(suite, serial.need(fields, 1)),
        c1=pe_from_bytes(suite, SIDE1, raw[:plen], 3),
        c2=pe_from_bytes(suite, SIDE1, raw[plen : 2 * plen], 3),
        c3=pe_from_bytes(suite, SIDE1, raw[2 * plen :], 3),
        c4=pe_list_from_bytes(suite, SIDE1, serial.need(fields, 3), 3),
        sealed=sealed,
    )
