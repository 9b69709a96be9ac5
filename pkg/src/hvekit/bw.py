"""HVE scheme ``BW2``: 2-dim product-group construction with per-index
token randomness.

Shapes (l = attribute count, s = token's fixed-slot count):

* public key: 6l + 8 source-group element slots + 1 GT element
* token:      4s + 2 elements (1 + 2s dim-2 product elements, side 2)
* ciphertext: 4l + 2 elements (1 + 2l dim-2 product elements, side 1) + GT
* query:      4s + 2 base pairings

Randomness draw order (relevant for seeded-rng replay in tests):
setup: basis a; v'; (u'_i, h'_i, w'_i) for i = 1..l; alpha; z_v;
(z_u_i, z_h_i, z_w_i) for i = 1..l.  gen_token: (r1_i, r2_i) for i in S
ascending.  encrypt: t; z1; (z2_i, z3_i) for i = 1..l.
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
    Basis2,
    Basis2Public,
    ProductElement,
    dual_byte_len,
    dual_bytes,
    dual_from_bytes,
    gen_basis2,
    pe_bytes,
    pe_from_bytes,
    pe_list_bytes,
    pe_list_from_bytes,
    vec_pair,
    vec_pair_product,
)

RT_PUBLIC = b"BWPK"
RT_SECRET = b"BWSK"
RT_TOKEN = b"BWTK"
RT_CIPHER = b"BWCT"


@dataclass(frozen=True)
class BwPublicKey:
    basis: Basis2Public
    v: ProductElement
    u: tuple[ProductElement, ...]
    h: tuple[ProductElement, ...]
    w: tuple[ProductElement, ...]
    omega: GTElement

    @property
    def length(self) -> int:
        return len(self.u)

    @property
    def suite(self) -> GroupSuite:
        return self.v.suite

    @property
    def source_element_count(self) -> int:
        """Published source-group element slots: basis (3 vectors) plus
        V and the 3l blinded vectors, 2 elements each."""
        return 2 * (3 + 1 + 3 * self.length)


@dataclass(frozen=True)
class BwSecretKey:
    v2: ProductElement
    u2: tuple[ProductElement, ...]
    h2: tuple[ProductElement, ...]
    w2: tuple[ProductElement, ...]
    k_alpha: ProductElement
    basis: Basis2  # trapdoor retained for test oracles only

    @property
    def length(self) -> int:
        return len(self.u2)


@dataclass(frozen=True)
class BwToken:
    indexes: tuple[int, ...]  # fixed (non-wildcard) slots, ascending
    k1: ProductElement
    k2: tuple[ProductElement, ...]  # aligned with indexes
    k3: tuple[ProductElement, ...]

    @property
    def element_count(self) -> int:
        return 2 * (1 + 2 * len(self.indexes))


@dataclass(frozen=True)
class BwCiphertext:
    c0: GTElement
    c1: ProductElement
    c2: tuple[ProductElement, ...]
    c3: tuple[ProductElement, ...]
    sealed: SealedPayload | None

    @property
    def length(self) -> int:
        return len(self.c2)

    @property
    def source_element_count(self) -> int:
        return 2 * (1 + 2 * self.length)


class BwScheme(HveScheme):
    scheme_id = "BW2"

    def setup(self, rng: RandomSource, length: int):
        if length < 1:
            raise SchemeError("need at least one attribute field")
        suite = self.suite
        order = suite.order
        basis = gen_basis2(rng, suite)
        v_ = rng.scalar(order)
        uhw = [(rng.scalar(order), rng.scalar(order), rng.scalar(order)) for _ in range(length)]
        alpha = rng.scalar(order)
        z_v = rng.scalar(order)
        z_uhw = [(rng.scalar(order), rng.scalar(order), rng.scalar(order)) for _ in range(length)]

        b11_1 = basis.b11.side1
        b12_2 = basis.b12.side2
        b2_1 = basis.b2.side1
        g_v1 = b11_1**v_
        pk = BwPublicKey(
            basis=basis.public,
            v=g_v1 * b2_1**z_v,
            u=tuple(b11_1**u * b2_1**zu for (u, _, _), (zu, _, _) in zip(uhw, z_uhw)),
            h=tuple(b11_1**h * b2_1**zh for (_, h, _), (_, zh, _) in zip(uhw, z_uhw)),
            w=tuple(b11_1**w * b2_1**zw for (_, _, w), (_, _, zw) in zip(uhw, z_uhw)),
            omega=vec_pair(g_v1, basis.b12.side2) ** alpha,
        )
        sk = BwSecretKey(
            v2=b12_2**v_,
            u2=tuple(b12_2**u for (u, _, _) in uhw),
            h2=tuple(b12_2**h for (_, h, _) in uhw),
            w2=tuple(b12_2**w for (_, _, w) in uhw),
            k_alpha=b12_2**alpha,
            basis=basis,
        )
        return pk, sk

    def gen_token(self, rng: RandomSource, pattern: PatternVector, sk: BwSecretKey, pk: BwPublicKey) -> BwToken:
        self._check_pattern(pattern, sk.length)
        order = self.suite.order
        indexes = pattern.fixed_indexes
        k1 = sk.k_alpha
        k2 = []
        k3 = []
        for i in indexes:
            r1 = rng.scalar(order)
            r2 = rng.scalar(order)
            k1 = k1 * (sk.u2[i] ** pattern.slots[i] * sk.h2[i]) ** r1 * sk.w2[i] ** r2
            k2.append(sk.v2 ** (-r1))
            k3.append(sk.v2 ** (-r2))
        return BwToken(indexes, k1, tuple(k2), tuple(k3))

    def encrypt_element(
        self,
        rng: RandomSource,
        attrs: AttributeVector,
        element: GTElement,
        pk: BwPublicKey,
        sealed: SealedPayload | None = None,
    ) -> BwCiphertext:
        self._check_attrs(attrs, pk.length)
        order = self.suite.order
        b2_1 = pk.basis.b2.side1
        t = rng.scalar(order)
        z1 = rng.scalar(order)
        c2 = []
        c3 = []
        for i, x in enumerate(attrs.values):
            z2 = rng.scalar(order)
            z3 = rng.scalar(order)
            c2.append((pk.u[i] ** x * pk.h[i]) ** t * b2_1**z2)
            c3.append(pk.w[i] ** t * b2_1**z3)
        return BwCiphertext(
            c0=pk.omega**t * element,
            c1=pk.v**t * b2_1**z1,
            c2=tuple(c2),
            c3=tuple(c3),
            sealed=sealed,
        )

    def query_element(self, ct: BwCiphertext, token: BwToken, pk: BwPublicKey) -> GTElement:
        if token.indexes and token.indexes[-1] >= ct.length:
            raise SchemeError("token index beyond ciphertext length")
        pairs = [(ct.c1, token.k1)]
        for j, i in enumerate(token.indexes):
            pairs.append((ct.c2[i], token.k2[j]))
            pairs.append((ct.c3[i], token.k3[j]))
        return ct.c0 * vec_pair_product(pairs).inverse()


# -- serialization ---------------------------------------------------------


def _pe_bytes(pe: ProductElement) -> bytes:
    return pe_bytes(pe)


def _pe_from(suite: GroupSuite, side: str, data: bytes) -> ProductElement:
    return pe_from_bytes(suite, side, data, 2)


def _pe_list_bytes(pes) -> bytes:
    return pe_list_bytes(pes)


def _pe_list_from(suite: GroupSuite, side: str, data: bytes) -> tuple[ProductElement, ...]:
    return pe_list_from_bytes(suite, side, data, 2)


def _dual_bytes(d) -> bytes:
    return dual_bytes(d)


def _dual_from(suite: GroupSuite, data: bytes):
    return dual_from_bytes(suite, data, 2)


def _dual_len(suite: GroupSuite) -> int:
    return dual_byte_len(suite, 2)


def encode_public_key(pk: BwPublicKey) -> bytes:
    suite = pk.suite
    w = serial.RecordWriter(suite.suite_id, RT_PUBLIC)
    w.field(1, serial.pack_u16(pk.length))
    w.field(2, _dual_bytes(pk.basis.b11) + _dual_bytes(pk.basis.b12) + _dual_bytes(pk.basis.b2))
    w.field(3, _pe_bytes(pk.v))
    w.field(4, _pe_list_bytes(pk.u))
    w.field(5, _pe_list_bytes(pk.h))
    w.field(6, _pe_list_bytes(pk.w))
    w.field(7, pk.omega.to_bytes())
    return w.finish()


def decode_public_key(data: bytes, suite: GroupSuite | None = None) -> BwPublicKey:
    sid, _, fields = serial.decode_record(data, RT_PUBLIC, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    length = serial.unpack_u16(serial.need(fields, 1))
    dlen = _dual_len(suite)
    braw = serial.need(fields, 2)
    if len(braw) != 3 * dlen:
        raise DecodeError("bad basis payload")
    basis = Basis2Public(*(_dual_from(suite, braw[i * dlen : (i + 1) * dlen]) for i in range(3)))
    pk = BwPublicKey(
        basis=basis,
        v=_pe_from(suite, SIDE1, serial.need(fields, 3)),
        u=_pe_list_from(suite, SIDE1, serial.need(fields, 4)),
        h=_pe_list_from(suite, SIDE1, serial.need(fields, 5)),
        w=_pe_list_from(suite, SIDE1, serial.need(fields, 6)),
        omega=serial.unpack_gt(suite, serial.need(fields, 7)),
    )
    if pk.length != length or any(len(t) != length for t in (pk.h, pk.w)):
        raise DecodeError("inconsistent public-key component counts")
    return pk


def encode_secret_key(suite: GroupSuite, sk: BwSecretKey) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_SECRET)
    w.field(1, serial.pack_u16(sk.length))
    w.field(2, _pe_bytes(sk.v2))
    w.field(3, _pe_list_bytes(sk.u2))
    w.field(4, _pe_list_bytes(sk.h2))
    w.field(5, _pe_list_bytes(sk.w2))
    w.field(6, _pe_bytes(sk.k_alpha))
    w.field(7, _dual_bytes(sk.basis.b11) + _dual_bytes(sk.basis.b12) + _dual_bytes(sk.basis.b2))
    w.field(8, serial.pack_scalar(sk.basis.a))
    return w.finish()


def decode_secret_key(data: bytes, suite: GroupSuite | None = None) -> BwSecretKey:
    sid, _, fields = serial.decode_record(data, RT_SECRET, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    length = serial.unpack_u16(serial.need(fields, 1))
    dlen = _dual_len(suite)
    braw = serial.need(fields, 7)
    if len(braw) != 3 * dlen:
        raise DecodeError("bad basis payload")
    duals = [_dual_from(suite, braw[i * dlen : (i + 1) * dlen]) for i in range(3)]
    basis = Basis2(*duals, a=serial.unpack_scalar(serial.need(fields, 8), suite.order))
    sk = BwSecretKey(
        v2=_pe_from(suite, SIDE2, serial.need(fields, 2)),
        u2=_pe_list_from(suite, SIDE2, serial.need(fields, 3)),
        h2=_pe_list_from(suite, SIDE2, serial.need(fields, 4)),
        w2=_pe_list_from(suite, SIDE2, serial.need(fields, 5)),
        k_alpha=_pe_from(suite, SIDE2, serial.need(fields, 6)),
        basis=basis,
    )
    if sk.length != length:
        raise DecodeError("inconsistent secret-key component counts")
    return sk


def encode_token(suite: GroupSuite, token: BwToken) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_TOKEN)
    w.field(1, serial.pack_u16_list(token.indexes))
    w.field(2, _pe_bytes(token.k1))
    w.field(3, _pe_list_bytes(token.k2))
    w.field(4, _pe_list_bytes(token.k3))
    return w.finish()


def decode_token(data: bytes, suite: GroupSuite | None = None) -> BwToken:
    sid, _, fields = serial.decode_record(data, RT_TOKEN, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    token = BwToken(
        indexes=tuple(serial.unpack_u16_list(serial.need(fields, 1))),
        k1=_pe_from(suite, SIDE2, serial.need(fields, 2)),
        k2=_pe_list_from(suite, SIDE2, serial.need(fields, 3)),
        k3=_pe_list_from(suite, SIDE2, serial.need(fields, 4)),
    )
    if len(token.k2) != len(token.indexes) or len(token.k3) != len(token.indexes):
        raise DecodeError("inconsistent token component counts")
    if list(token.indexes) != sorted(set(token.indexes)):
        raise DecodeError("token indexes must be strictly ascending")
    return token


def encode_ciphertext(suite: GroupSuite, ct: BwCiphertext) -> bytes:
    w = serial.RecordWriter(suite.suite_id, RT_CIPHER)
    w.field(1, ct.c0.to_bytes())
    w.field(2, _pe_bytes(ct.c1))
    w.field(3, _pe_list_bytes(ct.c2))
    w.field(4, _pe_list_bytes(ct.c3))
    if ct.sealed is not None:
        w.field(5, ct.sealed.blob)
        w.field(6, serial.pack_u16(ct.sealed.tag_len))
    return w.finish()


def decode_ciphertext(data: bytes, suite: GroupSuite | None = None) -> BwCiphertext:
    sid, _, fields = serial.decode_record(data, RT_CIPHER, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    sealed = None
    if 5 in fields:
        sealed = SealedPayload(fields[5], serial.unpack_u16(serial.need(fields, 6)))
    ct = BwCiphertext(
        c0=serial.unpack_gt(suite, serial.need(fields, 1)),
        c1=_pe_from(suite, SIDE1, serial.need(fields, 2)),
        c2=_pe_list_from(suite, SIDE1, serial.need(fields, 3)),
        c3=_pe_list_from(suite, SIDE1, serial.need(fields, 4)),
        sealed=sealed,
    )
    if len(ct.c3) != ct.length:
        raise DecodeError("inconsistent ciphertext component counts")
    return ct
