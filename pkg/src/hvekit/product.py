"""Bilinear product groups: vector-exponent elements, the product pairing,
basis generation, orthogonality, and assumption-tuple samplers.

A :class:`ProductElement` is an n-tuple (n = 2 or 3) of source-group
elements, all on one side of the pairing; its implicit exponent vector
adds under multiplication and scales under exponentiation.  The product
pairing of a side-1 and a side-2 element is the componentwise pairing
product, i.e. ``gt ^ (a . b)`` for exponent vectors a and b -- so two
published vectors are orthogonal exactly when they pair to 1.

Because the product constructions place ciphertexts and tokens on fixed
sides (ciphertext = side 1, token = side 2), every basis vector is
published as a :class:`DualVector` carrying one copy per side with a
shared exponent vector.  This is what lets the (pairing-type-agnostic)
constructions run over a Type-3 curve.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DecodeError, DimensionMismatch, SchemeError
from .groups import G1Element, G2Element, GroupSuite, GTElement, RandomSource, SymElement

SIDE1 = "side1"
SIDE2 = "side2"


@dataclass(frozen=True)
class ProductElement:
    side: str
    elems: tuple

    def __post_init__(self):
        if self.side not in (SIDE1, SIDE2):
            raise SchemeError(f"bad side {self.side!r}")
        want = G1Element if self.side == SIDE1 else G2Element
        if not self.elems or not all(isinstance(e, want) for e in self.elems):
            raise SchemeError(f"{self.side} product element needs {want.__name__} components")
        if len(self.elems) not in (2, 3):
            raise DimensionMismatch("product elements have dimension 2 or 3")
        object.__setattr__(self, "elems", tuple(self.elems))

    @property
    def dim(self) -> int:
        return len(self.elems)

    @property
    def suite(self) -> GroupSuite:
        return self.elems[0].suite

    def __mul__(self, other: "ProductElement") -> "ProductElement":
        if not isinstance(other, ProductElement):
            return NotImplemented
        if other.dim != self.dim or other.side != self.side:
            raise DimensionMismatch(f"cannot multiply dim {self.dim}/{self.side} by dim {other.dim}/{other.side}")
        return ProductElement(self.side, tuple(a * b for a, b in zip(self.elems, other.elems)))

    def __pow__(self, k: int) -> "ProductElement":
        return ProductElement(self.side, tuple(e**k for e in self.elems))

    def inverse(self) -> "ProductElement":
        return ProductElement(self.side, tuple(e.inverse() for e in self.elems))

    @property
    def is_identity(self) -> bool:
        return all(e.is_identity for e in self.elems)


def product_identity(suite: GroupSuite, side: str, dim: int) -> ProductElement:
    one = suite.g1_identity() if side == SIDE1 else suite.g2_identity()
    return ProductElement(side, (one,) * dim)


def element_from_exponents(suite: GroupSuite, side: str, coords) -> ProductElement:
    gen = suite.side1_gen if side == SIDE1 else suite.side2_gen
    return ProductElement(side, tuple(gen ** (c % suite.order) for c in coords))


def vec_exp(base: ProductElement, c: int) -> ProductElement:
    """Componentwise exponentiation: (g^b)^c = g^(c*b)."""
    return base**c


def vec_mul(x: ProductElement, y: ProductElement) -> ProductElement:
    """Componentwise multiplication: g^a * g^b = g^(a+b)."""
    return x * y


def _orient(x: ProductElement, y: ProductElement):
    if x.dim != y.dim:
        raise DimensionMismatch(f"pairing dim {x.dim} against dim {y.dim}")
    if x.side == SIDE2 and y.side == SIDE1:
        x, y = y, x
    if x.side != SIDE1 or y.side != SIDE2:
        raise DimensionMismatch("product pairing needs one side-1 and one side-2 element")
    return x, y


def vec_pair(x: ProductElement, y: ProductElement) -> GTElement:
    """Product pairing: prod_i e(x_i, y_i) = gt^(a.b)."""
    x, y = _orient(x, y)
    return x.suite.pair_product(list(zip(x.elems, y.elems)))


def vec_pair_product(pairs) -> GTElement:
    """Pairing product over several (side1, side2) pairs with one shared
    final exponentiation; counts dim base pairings per pair."""
    flat = []
    suite = None
    for x, y in pairs:
        x, y = _orient(x, y)
        suite = x.suite
        flat.extend(zip(x.elems, y.elems))
    if suite is None:
        raise SchemeError("empty pairing product")
    return suite.pair_product(flat)


def check_orthogonal(x: ProductElement, y: ProductElement) -> bool:
    """True iff the two published vectors pair to the GT identity."""
    return vec_pair(x, y).is_identity


@dataclass(frozen=True)
class DualVector:
    """One logical vector g^b published on both pairing sides."""

    side1: ProductElement
    side2: ProductElement

    def __post_init__(self):
        if self.side1.side != SIDE1 or self.side2.side != SIDE2 or self.side1.dim != self.side2.dim:
            raise DimensionMismatch("dual vector needs matching side1/side2 copies")

    @property
    def dim(self) -> int:
        return self.side1.dim

    def __mul__(self, other: "DualVector") -> "DualVector":
        return DualVector(self.side1 * other.side1, self.side2 * other.side2)

    def __pow__(self, k: int) -> "DualVector":
        return DualVector(self.side1**k, self.side2**k)


def dual_from_exponents(suite: GroupSuite, coords) -> DualVector:
    return DualVector(
        element_from_exponents(suite, SIDE1, coords),
        element_from_exponents(suite, SIDE2, coords),
    )


@dataclass(frozen=True)
class Basis2Public:
    """Published 2-dim basis: B11 = g^(1,0), B12 = g^(1,a), B2 = g^(a,-1)."""

    b11: DualVector
    b12: DualVector
    b2: DualVector


@dataclass(frozen=True)
class Basis2(Basis2Public):
    """Basis plus its secret trapdoor exponent (kept in secret keys and
    test oracles only)."""

    a: int

    @property
    def public(self) -> Basis2Public:
        return Basis2Public(self.b11, self.b12, self.b2)

    def exponent_vectors(self, order: int) -> dict[str, tuple[int, ...]]:
        a = self.a
        return {"b11": (1, 0), "b12": (1, a), "b2": (a, (-1) % order)}


@dataclass(frozen=True)
class Basis3Public:
    """Published 3-dim basis: B11 = g^(1,0,a1), B12 = g^(1,a2,0),
    B2 = g^(a2,-1,a1*a2-a3), B3 = g^(a1,a3,-1)."""

    b11: DualVector
    b12: DualVector
    b2: DualVector
    b3: DualVector


@dataclass(frozen=True)
class Basis3(Basis3Public):
    a1: int
    a2: int
    a3: int

    @property
    def public(self) -> Basis3Public:
        return Basis3Public(self.b11, self.b12, self.b2, self.b3)

    def exponent_vectors(self, order: int) -> dict[str, tuple[int, ...]]:
        a1, a2, a3 = self.a1, self.a2, self.a3
        return {
            "b11": (1, 0, a1),
            "b12": (1, a2, 0),
            "b2": (a2, (-1) % order, (a1 * a2 - a3) % order),
            "b3": (a1, a3, (-1) % order),
        }


def gen_basis2(rng: RandomSource, suite: GroupSuite) -> Basis2:
    """Sample a 2-dim basis with a fresh nonzero trapdoor.

    The spanned-pair structure requires a != 0 (otherwise B12 = B11 and
    the blinding span degenerates), so zero draws are rejected.
    """
    a = rng.nonzero_scalar(suite.order)
    return Basis2(
        b11=dual_from_exponents(suite, (1, 0)),
        b12=dual_from_exponents(suite, (1, a)),
        b2=dual_from_exponents(suite, (a, -1)),
        a=a,
    )


def gen_basis3(rng: RandomSource, suite: GroupSuite) -> Basis3:
    """Sample a 3-dim basis with non-degenerate trapdoors.

    Draws are rejected until every a_i != 0, a1*a2 != a3 (else B2's third
    coordinate vanishes), and the two designed non-orthogonal pairs
    (B11, B2) and (B12, B3) have nonzero dot products -- all measure-zero
    events for uniform draws.
    """
    order = suite.order
    while True:
        a1 = rng.nonzero_scalar(order)
        a2 = rng.nonzero_scalar(order)
        a3 = rng.nonzero_scalar(order)
        if (a1 * a2 - a3) % order == 0:
            continue
        if (a2 + a1 * (a1 * a2 - a3)) % order == 0:  # b11 . b2
            continue
        if (a1 + a2 * a3) % order == 0:  # b12 . b3
            continue
        break
    return Basis3(
        b11=dual_from_exponents(suite, (1, 0, a1)),
        b12=dual_from_exponents(suite, (1, a2, 0)),
        b2=dual_from_exponents(suite, (a2, -1, a1 * a2 - a3)),
        b3=dual_from_exponents(suite, (a1, a3, -1)),
        a1=a1,
        a2=a2,
        a3=a3,
    )


# -- assumption-tuple samplers (test vectors) ------------------------------


def _sym_gen(suite: GroupSuite) -> SymElement:
    if not isinstance(suite.g, SymElement):
        raise SchemeError("assumption samplers need a symmetric-mode suite")
    return suite.g


@dataclass(frozen=True)
class BdhSecrets:
    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True)
class BdhTuple:
    """Decisional bilinear Diffie-Hellman challenge: (g, g^a, g^b, g^c, T)
    with T = e(g,g)^(abc) for bit 0 and T = e(g,g)^d for bit 1."""

    g: SymElement
    g_a: SymElement
    g_b: SymElement
    g_c: SymElement
    T: GTElement
    bit: int
    secrets: BdhSecrets | None = None

    def public(self) -> "BdhTuple":
        return replace(self, secrets=None)


def sample_bdh(rng: RandomSource, suite: GroupSuite, bit: int) -> BdhTuple:
    if bit not in (0, 1):
        raise SchemeError("bit must be 0 or 1")
    g = _sym_gen(suite)
    order = suite.order
    a, b, c, d = (rng.scalar(order) for _ in range(4))
    gt = suite.gt_generator
    T = gt ** (a * b * c % order) if bit == 0 else gt**d
    return BdhTuple(g, g**a, g**b, g**c, T, bit, BdhSecrets(a, b, c, d))


@dataclass(frozen=True)
class P3dhSecrets:
    a: int
    b: int
    c: int
    d: int
    z1: int
    z2: int
    z3: int
    f_exp: int


@dataclass(frozen=True)
class P3dhTuple:
    """Decisional parallel 3-party Diffie-Hellman challenge.

    Components: (g, f), (g^a, f^a), (g^b, f^b), (g^ab f^z1, g^z1),
    (g^abc f^z2, g^z2) and T = (g^c f^z3, g^z3) for bit 0,
    T = (g^d f^z3, g^z3) for bit 1.
    """

    g: SymElement
    f: SymElement
    g_a: SymElement
    f_a: SymElement
    g_b: SymElement
    f_b: SymElement
    p1: SymElement  # g^ab f^z1
    q1: SymElement  # g^z1
    p2: SymElement  # g^abc f^z2
    q2: SymElement  # g^z2
    t1: SymElement
    t2: SymElement
    bit: int
    secrets: P3dhSecrets | None = None

    def public(self) -> "P3dhTuple":
        return replace(self, secrets=None)

    def components(self) -> dict[str, SymElement]:
        return {
            "g": self.g,
            "f": self.f,
            "g_a": self.g_a,
            "f_a": self.f_a,
            "g_b": self.g_b,
            "f_b": self.f_b,
            "p1": self.p1,
            "q1": self.q1,
            "p2": self.p2,
            "q2": self.q2,
            "t1": self.t1,
            "t2": self.t2,
        }


def sample_p3dh(rng: RandomSource, suite: GroupSuite, bit: int) -> P3dhTuple:
    if bit not in (0, 1):
        raise SchemeError("bit must be 0 or 1")
    g = _sym_gen(suite)
    order = suite.order
    a, b, c, d = (rng.scalar(order) for _ in range(4))
    z1, z2, z3 = (rng.scalar(order) for _ in range(3))
    f_exp = rng.nonzero_scalar(order)
    f = g**f_exp
    exp_t = c if bit == 0 else d
    return P3dhTuple(
        g=g,
        f=f,
        g_a=g**a,
        f_a=f**a,
        g_b=g**b,
        f_b=f**b,
        p1=g ** ((a * b + f_exp * z1) % order),
        q1=g**z1,
        p2=g ** ((a * b * c + f_exp * z2) % order),
        q2=g**z2,
        t1=g ** ((exp_t + f_exp * z3) % order),
        t2=g**z3,
        bit=bit,
        secrets=P3dhSecrets(a, b, c, d, z1, z2, z3, f_exp),
    )


# -- record codecs ----------------------------------------------------------

RT_BASIS2 = b"BAS2"
RT_BASIS3 = b"BAS3"
RT_BDH = b"BDHT"
RT_P3DH = b"P3DH"


def encode_basis2(suite: GroupSuite, basis: Basis2) -> bytes:
    """Trapdoor-bearing basis record (secret-key material)."""
    from . import serial

    w = serial.RecordWriter(suite.suite_id, RT_BASIS2)
    w.field(1, dual_bytes(basis.b11) + dual_bytes(basis.b12) + dual_bytes(basis.b2))
    w.field(2, serial.pack_scalar(basis.a))
    return w.finish()


def decode_basis2(data: bytes, suite: GroupSuite | None = None) -> Basis2:
    from . import serial
    from .groups import suite_for_id

    sid, _, fields = serial.decode_record(data, RT_BASIS2, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    dlen = dual_byte_len(suite, 2)
    raw = serial.need(fields, 1)
    if len(raw) != 3 * dlen:
        raise DecodeError("bad basis payload")
    duals = [dual_from_bytes(suite, raw[i * dlen : (i + 1) * dlen], 2) for i in range(3)]
    return Basis2(*duals, a=serial.unpack_scalar(serial.need(fields, 2), suite.order))


def encode_basis3(suite: GroupSuite, basis: Basis3) -> bytes:
    from . import serial

    w = serial.RecordWriter(suite.suite_id, RT_BASIS3)
    w.field(1, b"".join(dual_bytes(d) for d in (basis.b11, basis.b12, basis.b2, basis.b3)))
    w.field(2, serial.pack_scalar_list([basis.a1, basis.a2, basis.a3]))
    return w.finish()


def decode_basis3(data: bytes, suite: GroupSuite | None = None) -> Basis3:
    from . import serial
    from .groups import suite_for_id

    sid, _, fields = serial.decode_record(data, RT_BASIS3, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    dlen = dual_byte_len(suite, 3)
    raw = serial.need(fields, 1)
    if len(raw) != 4 * dlen:
        raise DecodeError("bad basis payload")
    duals = [dual_from_bytes(suite, raw[i * dlen : (i + 1) * dlen], 3) for i in range(4)]
    a1, a2, a3 = serial.unpack_scalar_list(serial.need(fields, 2), suite.order)
    return Basis3(*duals, a1=a1, a2=a2, a3=a3)


def encode_bdh_tuple(suite: GroupSuite, t: BdhTuple) -> bytes:
    """Published challenge components only; withheld exponents never hit
    the wire."""
    from . import serial

    w = serial.RecordWriter(suite.suite_id, RT_BDH)
    w.field(1, t.g.to_bytes() + t.g_a.to_bytes() + t.g_b.to_bytes() + t.g_c.to_bytes())
    w.field(2, t.T.to_bytes())
    w.field(3, bytes([t.bit]))
    return w.finish()


def decode_bdh_tuple(data: bytes, suite: GroupSuite | None = None) -> BdhTuple:
    from . import serial
    from .groups import suite_for_id

    sid, _, fields = serial.decode_record(data, RT_BDH, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    n = suite.sym_byte_len()
    raw = serial.need(fields, 1)
    if len(raw) != 4 * n:
        raise DecodeError("bad tuple payload")
    els = [suite._dec_sym(raw[i * n : (i + 1) * n]) for i in range(4)]
    bit = serial.need(fields, 3)
    if len(bit) != 1 or bit[0] not in (0, 1):
        raise DecodeError("bad tuple bit")
    return BdhTuple(*els, T=serial.unpack_gt(suite, serial.need(fields, 2)), bit=bit[0])


def encode_p3dh_tuple(suite: GroupSuite, t: P3dhTuple) -> bytes:
    from . import serial

    comps = t.components()
    w = serial.RecordWriter(suite.suite_id, RT_P3DH)
    w.field(1, b"".join(comps[k].to_bytes() for k in sorted(comps)))
    w.field(2, bytes([t.bit]))
    return w.finish()


def decode_p3dh_tuple(data: bytes, suite: GroupSuite | None = None) -> P3dhTuple:
    from . import serial
    from .groups import suite_for_id

    sid, _, fields = serial.decode_record(data, RT_P3DH, suite.suite_id if suite else None)
    suite = suite or suite_for_id(sid)
    names = sorted(
        ["g", "f", "g_a", "f_a", "g_b", "f_b", "p1", "q1", "p2", "q2", "t1", "t2"]
    )
    n = suite.sym_byte_len()
    raw = serial.need(fields, 1)
    if len(raw) != len(names) * n:
        raise DecodeError("bad tuple payload")
    els = {name: suite._dec_sym(raw[i * n : (i + 1) * n]) for i, name in enumerate(names)}
    bit = serial.need(fields, 2)
    if len(bit) != 1 or bit[0] not in (0, 1):
        raise DecodeError("bad tuple bit")
    return P3dhTuple(bit=bit[0], **els)


# -- wire helpers (used by the scheme record codecs) -----------------------


def pe_bytes(pe: ProductElement) -> bytes:
    return b"".join(e.to_bytes() for e in pe.elems)


def pe_from_bytes(suite: GroupSuite, side: str, data: bytes, dim: int) -> ProductElement:
    from .errors import DecodeError

    unit = suite.g1_byte_len() if side == SIDE1 else suite.g2_byte_len()
    dec = suite._dec_g1 if side == SIDE1 else suite._dec_g2
    if len(data) != unit * dim:
        raise DecodeError("bad product-element payload length")
    return ProductElement(side, tuple(dec(data[i * unit : (i + 1) * unit]) for i in range(dim)))


def pe_list_bytes(pes) -> bytes:
    from . import serial

    pes = list(pes)
    return serial.pack_u32(len(pes)) + b"".join(pe_bytes(pe) for pe in pes)


def pe_list_from_bytes(suite: GroupSuite, side: str, data: bytes, dim: int) -> tuple[ProductElement, ...]:
    from . import serial

    unit = (suite.g1_byte_len() if side == SIDE1 else suite.g2_byte_len()) * dim
    return tuple(serial._unpack_list(data, unit, lambda chunk: pe_from_bytes(suite, side, chunk, dim)))


def dual_bytes(d: DualVector) -> bytes:
    return pe_bytes(d.side1) + pe_bytes(d.side2)


def dual_from_bytes(suite: GroupSuite, data: bytes, dim: int) -> DualVector:
    n1 = suite.g1_byte_len() * dim
    return DualVector(pe_from_bytes(suite, SIDE1, data[:n1], dim), pe_from_bytes(suite, SIDE2, data[n1:], dim))


def dual_byte_len(suite: GroupSuite, dim: int) -> int:
    return (suite.g1_byte_len() + suite.g2_byte_len()) * dim


def verify_p3dh_wellformed(t: P3dhTuple) -> bool:
    """Consistency check for P3DH test vectors.

    Without the withheld exponents only the exponent-free pairing
    relations are verifiable (the (g^a, f^a) and (g^b, f^b) legs and the
    z1 leg); components involving c, z2, z3 admit no pairing relation
    over published values.  If ``t.secrets`` is present every component
    is recomputed from the exponents, so any single-component corruption
    is detected.
    """
    suite = t.g.suite
    pair = suite.pair
    # a-leg: e(g^a, f) == e(g, f^a)
    if pair(t.g_a, t.f) != pair(t.g, t.f_a):
        return False
    # b-leg
    if pair(t.g_b, t.f) != pair(t.g, t.f_b):
        return False
    # z1-leg: e(g^ab f^z1, g) == e(g^a, g^b) * e(f, g^z1)
    lhs = pair(t.p1, t.g)
    rhs = suite.pair_product([(t.g_a, t.g_b), (t.f, t.q1)])
    if lhs != rhs:
        return False
    if t.secrets is None:
        return True
    s = t.secrets
    order = suite.order
    g = t.g
    exp_t = s.c if t.bit == 0 else s.d
    expected = {
        "f": g**s.f_exp,
        "g_a": g**s.a,
        "f_a": g ** (s.f_exp * s.a % order),
        "g_b": g**s.b,
        "f_b": g ** (s.f_exp * s.b % order),
        "p1": g ** ((s.a * s.b + s.f_exp * s.z1) % order),
        "q1": g**s.z1,
        "p2": g ** ((s.a * s.b * s.c + s.f_exp * s.z2) % order),
        "q2": g**s.z2,
        "t1": g ** ((exp_t + s.f_exp * s.z3) % order),
        "t2": g**s.z3,
    }
    actual = t.components()
    return all(actual[k] == v for k, v in expected.items())
