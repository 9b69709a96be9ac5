"""HVE scheme ``ASYM1``: plain (non-product) construction over a Type-3
suite, with 4-element tokens and 4 pairings regardless of width.

The secret key holds exponents rather than elements; token generation
re-derives the group-2 bases from them on the fly.  Ciphertexts live
entirely in source group 1 and tokens in source group 2, so the missing
cross-group isomorphism stands in for the product constructions' blinding
vectors.

Randomness draw order: setup: v', w'_1, w'_2; (u'_i, h'_i) for i = 1..l;
alpha; beta.  gen_token: r1, r2, r3.  encrypt: t.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import serial
from .errors import DecodeError, SchemeError
from .groups import ASYMMETRIC, G1Element, G2Element, GroupSuite, GTElement, RandomSource, suite_for_id
from .hve import AttributeVector, HveScheme, PatternVector, SealedPayload

RT_PUBLIC = b"ASPK"
RT_SECRET = b"ASSK"
RT_TOKEN = b"ASTK"
RT_CIPHER = b"ASCT"


@dataclass(frozen=True)
class AsymPublicKey:
    v: G1Element
    w1: G1Element
    w2: G1Element
    u: tuple[G1Element, ...]
    h: tuple[G1Element, ...]
    omega: GTElement

    @property
    def length(self) -> int:
        return len(self.u)

    @property
    def suite(self) -> GroupSuite:
        return self.v.suite


@dataclass(frozen=True)
class AsymSecretKey:
    v_exp: int
    w1_exp: int
    w2_exp: int
    u_exp: tuple[int, ...]
    h_exp: tuple[int, ...]
    alpha: int
    beta: int

    @property
    def length(self) -> int:
        return len(self.u_exp)


@dataclass(frozen=True)
class AsymToken:
    indexes: tuple[int, ...]
    k0: G2Element
    k1: G2Element
    k2: G2Element
    k3: G2Element

    @property
    def element_count(self) -> int:
        return 4


@dataclass(frozen=True)
class AsymCiphertext:
    c: GTElement
    c0: G1Element
    c1: G1Element
    c2: G1Element
    c3: tuple[G1Element, ...]
    sealed: SealedPayload | None

    @property
    def length(self) -> int:
        return len(self.c3)

    @property
    def source_element_count(self) -> int:
        return 3 + self.length


class AsymScheme(HveScheme):
    scheme_id = "ASYM1"

    def __init__(self, suite: GroupSuite):
        if suite.mode != ASYMMETRIC:
            raise SchemeError("ASYM1 requires an asymmetric-mode suite")
        super().__init__(suite)

    def setup(self, rng: RandomSource, length: int):
        if length < 1:
            raise SchemeError("need at least one attribute field")
        suite = self.suite
        order = suite.order
        g = suite.g
        v_ = rng.scalar(order)
        w1_ = rng.scalar(order)
        w2_ = rng.scalar(order)
        uh = [(rng.scalar(order), rng.scalar(order)) for _ in range(length)]
        alpha = rng.scalar(order)
        beta = rng.scalar(order)
        pk = AsymPublicKey(
            v=g**v_,
            w1=g**w1_,
            w2=g**w2_,
            u=tuple(g**u for (u, _) in uh),
            h=tuple(g**h for (_, h) in uh),
            omega=suite.pair(g**v_, suite.g_hat) ** (alpha * beta % order),
        )
        sk = AsymSecretKey(v_, w1_, w2_, tuple(u for (u, _) in uh), tuple(h for (_, h) in uh), alpha, beta)
        return pk, sk

    def gen_token(self, rng: RandomSource, pattern: PatternVector, sk: AsymSecretKey, pk: AsymPublicKey) -> AsymToken:
        self._check_pattern(pattern, sk.length)
        suite = self.suite
        order = suite.order
        g_hat = suite.g_hat
        indexes = pattern.fixed_indexes
        r1, r2, r3 = rng.scalar(order), rng.scalar(order), rng.scalar(order)
        v_hat = g_hat**sk.v_exp
        # exponent of the aggregated (prod u_i^sigma_i * h_i) leg in group 2
        agg_exp = 0
        for i in indexes:
            agg_exp = (agg_exp + sk.u_exp[i] * pattern.slots[i] + sk.h_exp[i]) % order
        k0 = (
            g_hat ** (sk.alpha * sk.beta % order)
            * g_hat ** (sk.w1_exp * r1 % order)
            * g_hat ** (sk.w2_exp * r2 % order)
            * g_hat ** (agg_exp * r3 % order)
        )
        return AsymToken(indexes, k0, v_hat**r1, v_hat**r2, v_hat**r3)

    def encrypt_element(
        self,
        rng: RandomSource,
        attrs: AttributeVector,
        element: GTElement,
        pk: AsymPublicKey,
        sealed: SealedPayload | None = None,
    ) -> AsymCiphertext:
        self._check_attrs(attrs, pk.length)
        t = rng.scalar(self.suite.order)
        return AsymCiphertext(
            c=pk.omega**t * element,
            c0=pk.v**t,
            c1=pk.w1**t,
            c2=pk.w2**t,
            c3=tuple((pk.u[i] ** x * pk.h[i]) ** t for i, x in enumerate(attrs.values)),
            sealed=sealed,
        )

    def query_element(self, ct: AsymCiphertext, token: AsymToken, pk: AsymPublicKey) -> GTElement:
        if token.indexes and token.indexes[-1] >= ct.length:
            raise SchemeError("token index beyond ciphertext length")
        agg = self.suite.g1_identity()
        for i in token.indexes:
            agg = agg * ct.c3[i]
        prod = self.suite.pair_product(
            [(ct.c0.inverse(), token.k0), (ct.c1, token.k1), (ct.c2, token.k2), (agg, token.k3)]
        )
        return ct.c * prod


# -- serialization ---------------------------------------------------------


def _g1_list_bytes(elems) -> bytes:
    elems = list(elems)
    return serial.pack_u32(len(elems)) + b"".join(e.to_bytes() for e in elems)


def encode_public_key(pk: AsymPublicKey) -> bytes:
    suite = pk.suite
    w = serial.RecordWriter(suite.suite_id, RT_PUBLIC)
    w.field(1, serial.pack_u16(pk.length))
    w.field(2, pk.v.to_bytes() + pk.w1.to_bytes() + pk.w2.to_bytes())
    w.field(3, _g1_list_bytes(pk.u))
    w.field(4, _g1_list_bytes(pk.h))
    w.field(5, pk.omega.to_bytes())
    return w.finish()


def decode_public_key(data: bytes, suite: GroupSuite | None = None) -> AsymPublicKey:
    sid, _, fields = serial.decode_record(data, RT_PUBLIC, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    if suite.mode != ASYMMETRIC:
        raise DecodeError("ASYM1 records require an asymmetric-mode suite")
    length = serial.unpack_u16(serial.need(fields, 1))
    raw = serial.need(fields, 2)
    n = suite.g1_byte_len()
    if len(raw) != 3 * n:
        raise DecodeError("bad key vector payload")
    pk = AsymPublicKey(
        v=serial.unpack_g1(suite, raw[:n]),
        w1=serial.unpack_g1(suite, raw[n : 2 * n]),
        w2=serial.unpack_g1(suite, raw[2 * n :]),
        u=tuple(serial.unpack_g1_list(suite, serial.need(fields, 3))),
        h=tuple(serial.unpack_g1_list(suite, serial.need(fields, 4))),
        omega=serial.unpack_gt(suite, serial.need(fields, 5)),
    )
    if pk.length != length or len(pk.h) != length:
        raise DecodeError("inconsistent public-key component counts")
    return pk


def encode_secret_key(suite: GroupSuite, sk: AsymSecretKey) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_SECRET)
    w.field(1, serial.pack_u16(sk.length))
    w.field(2, serial.pack_scalar_list([sk.v_exp, sk.w1_exp, sk.w2_exp, sk.alpha, sk.beta]))
    w.field(3, serial.pack_scalar_list(sk.u_exp))
    w.field(4, serial.pack_scalar_list(sk.h_exp))
    return w.finish()


def decode_secret_key(data: bytes, suite: GroupSuite | None = None) -> AsymSecretKey:
    sid, _, fields = serial.decode_record(data, RT_SECRET, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    length = serial.unpack_u16(serial.need(fields, 1))
    head = serial.unpack_scalar_list(serial.need(fields, 2), suite.order)
    if len(head) != 5:
        raise DecodeError("bad secret-key scalar payload")
    sk = AsymSecretKey(
        v_exp=head[0],
        w1_exp=head[1],
        w2_exp=head[2],
        u_exp=tuple(serial.unpack_scalar_list(serial.need(fields, 3), suite.order)),
        h_exp=tuple(serial.unpack_scalar_list(serial.need(fields, 4), suite.order)),
        alpha=head[3],
        beta=head[4],
    )
    if sk.length != length or len(sk.h_exp) != length:
        raise DecodeError("inconsistent secret-key component counts")
    return sk


def encode_token(suite: GroupSuite, token: AsymToken) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_TOKEN)
    w.field(1, serial.pack_u16_list(token.indexes))
    w.field(2, token.k0.to_bytes() + token.k1.to_bytes() + token.k2.to_bytes() + token.k3.to_bytes())
    return w.finish()


def decode_token(data: bytes, suite: GroupSuite | None = None) -> AsymToken:
    sid, _, fields = serial.decode_record(data, RT_TOKEN, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    indexes = tuple(serial.unpack_u16_list(serial.need(fields, 1)))
    if list(indexes) != sorted(set(indexes)):
        raise DecodeError("token indexes must be strictly ascending")
    raw = serial.need(fields, 2)
    n = suite.g2_byte_len()
    if len(raw) != 4 * n:
        raise DecodeError("bad token payload")
    ks = [serial.unpack_g2(suite, raw[i * n : (i + 1) * n]) for i in range(4)]
    return AsymToken(indexes, *ks)


def encode_ciphertext(suite: GroupSuite, ct: AsymCiphertext) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_CIPHER)
    w.field(1, ct.c.to_bytes())
    w.field(2, ct.c0.to_bytes() + ct.c1.to_bytes() + ct.c2.to_bytes())
    w.field(3, _g1_list_bytes(ct.c3))
    if ct.sealed is not None:
        w.field(4, ct.sealed.blob)
        w.field(5, serial.pack_u16(ct.sealed.tag_len))
    return w.finish()


def decode_ciphertext(data: bytes, suite: GroupSuite | None = None) -> AsymCiphertext:
    sid, _, fields = serial.decode_record(data, RT_CIPHER, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    raw = serial.need(fields, 2)
    n = suite.g1_byte_len()
    if len(raw) != 3 * n:
        raise DecodeError("bad ciphertext payload")
    sealed = None
    if 4 in fields:
        sealed = SealedPayload(fields[4], serial.unpack_u16(serial.need(fields, 5)))
    return AsymCiphertext(
        c=serial.unpack_gt(suite, serial.need(fields, 1)),
        c0=serial.unpack_g1(suite, raw[:n]),
        c1=serial.unpack_g1(suite, raw[n : 2 * n]),
        c2=serial.unpack_g1(suite, raw[2 * n :]),
        c3=tuple(serial.unpack_g1_list(suite, serial.need(fields, 3))),
        sealed=sealed,
    )
