"""Pairing group suites: generators, scalars, hashing, randomness, pairing.

A :class:`GroupSuite` wraps one registered curve (``bn254`` or
``bls12-381``) in one of two modes:

* ``asymmetric`` -- the curve's native Type-3 form.  Source group 1 and
  source group 2 are distinct types with no mixing path.
* ``symmetric`` -- a symmetric ("Type-1 style") group emulated over the
  same curve by carrying every logical source-group element as a
  (G1, G2) pair sharing one exponent (:class:`SymElement`).  This keeps
  e(x, y) well defined for any two logical elements.

Scalars are plain ints reduced mod the group order.  All elements are
immutable and safe to share across threads; :class:`RandomSource` is the
only stateful object.
"""

from __future__ import annotations

import hashlib
import os
import threading

from ._curvedef import CURVES, CURVES_BY_ID, CurveParams
from ._backend_py import PyBackend
from .errors import DecodeError, ElementDecodeError, SchemeError

SYMMETRIC = "symmetric"
ASYMMETRIC = "asymmetric"

_backend_lock = threading.Lock()
_backend_cache: dict[tuple[str, str], object] = {}


def _load_native():
    try:
        from . import _native  # noqa: F401

        return _native
    except ImportError:
        return None


def get_backend(curve_name: str, impl: str = "auto"):
    """Shared pairing backend for a curve; ``impl`` in auto/native/python.

    ``auto`` prefers the compiled backend and falls back to pure python if
    it is missing or fails its startup self-checks.
    """
    if curve_name not in CURVES:
        raise ValueError(f"unknown curve {curve_name!r}; have {sorted(CURVES)}")
    if impl == "auto":
        try:
            return get_backend(curve_name, "native")
        except Exception:
            return get_backend(curve_name, "python")
    key = (curve_name, impl)
    with _backend_lock:
        if key not in _backend_cache:
            params = CURVES[curve_name]
            if impl == "native":
                native = _load_native()
                if native is None:
                    raise RuntimeError("native backend requested but not built")
                _backend_cache[key] = native.NativeBackend(params)
            elif impl == "python":
                _backend_cache[key] = PyBackend(params)
            else:
                raise ValueError(f"unknown backend impl {impl!r}")
        return _backend_cache[key]


class RandomSource:
    """Randomness for key generation, tokens and encryption.

    ``RandomSource.os_entropy()`` draws from the operating system and is
    the production source.  ``RandomSource.seeded(seed)`` is a
    deterministic SHAKE-256 stream for reproducible test vectors; it must
    never be used with secret key material outside tests.
    """

    def __init__(self, _generator):
        self._gen = _generator

    @classmethod
    def os_entropy(cls) -> "RandomSource":
        return cls(os.urandom)

    @classmethod
    def seeded(cls, seed) -> "RandomSource":
        if isinstance(seed, int):
            seed = seed.to_bytes(16, "big", signed=False) if seed >= 0 else str(seed).encode()
        state = {"counter": 0, "buf": b""}

        def gen(n: int) -> bytes:
            out = state["buf"]
            while len(out) < n:
                block = hashlib.shake_256(
                    b"hvekit drbg v1" + len(seed).to_bytes(2, "big") + seed + state["counter"].to_bytes(8, "big")
                ).digest(128)
                state["counter"] += 1
                out += block
            state["buf"] = out[n:]
            return out[:n]

        return cls(gen)

    def bytes(self, n: int) -> bytes:
        return self._gen(n)

    def scalar(self, order: int) -> int:
        """Uniform int in [0, order) by rejection sampling."""
        byte_len = (order.bit_length() + 7) // 8
        top_mask = (1 << order.bit_length()) - 1
        while True:
            v = int.from_bytes(self._gen(byte_len), "big") & top_mask
            if v < order:
                return v

    def nonzero_scalar(self, order: int) -> int:
        while True:
            v = self.scalar(order)
            if v != 0:
                return v


def hash_to_scalar(data: bytes, domain_tag: bytes, order: int) -> int:
    """Deterministic hash of ``data`` into [0, order), separated by tag."""
    h = hashlib.sha512(len(domain_tag).to_bytes(8, "big") + domain_tag + data).digest()
    return int.from_bytes(h, "big") % order


class _Element:
    __slots__ = ("suite", "_v")

    def __init__(self, suite, v):
        self.suite = suite
        self._v = v

    def __eq__(self, other):
        return type(other) is type(self) and other.suite is self.suite and other._v == self._v

    def __hash__(self):
        return hash((type(self).__name__, self._canon()))

    def _canon(self):
        return self._v


class G1Element(_Element):
    """Element of source group 1 (affine, immutable)."""

    def __mul__(self, other: "G1Element") -> "G1Element":
        self._check(other)
        return G1Element(self.suite, self.suite.backend.g1_add(self._v, other._v))

    def __pow__(self, k: int) -> "G1Element":
        return G1Element(self.suite, self.suite.backend.g1_mul(self._v, k % self.suite.order))

    def inverse(self) -> "G1Element":
        return G1Element(self.suite, self.suite.backend.g1_neg(self._v))

    @property
    def is_identity(self) -> bool:
        return self._v is None

    def _check(self, other):
        if not isinstance(other, G1Element) or other.suite is not self.suite:
            raise SchemeError("mixing elements of different groups or suites")

    def to_bytes(self) -> bytes:
        return self.suite._enc_g1(self._v)

    def _canon(self):
        return ("g1", None if self._v is None else (int(self._v[0]), int(self._v[1])))


class G2Element(_Element):
    """Element of source group 2 (affine over the twist, immutable)."""

    def __mul__(self, other: "G2Element") -> "G2Element":
        if not isinstance(other, G2Element) or other.suite is not self.suite:
            raise SchemeError("mixing elements of different groups or suites")
        return G2Element(self.suite, self.suite.backend.g2_add(self._v, other._v))

    def __pow__(self, k: int) -> "G2Element":
        return G2Element(self.suite, self.suite.backend.g2_mul(self._v, k % self.suite.order))

    def inverse(self) -> "G2Element":
        return G2Element(self.suite, self.suite.backend.g2_neg(self._v))

    @property
    def is_identity(self) -> bool:
        return self._v is None

    def to_bytes(self) -> bytes:
        return self.suite._enc_g2(self._v)

    def _canon(self):
        if self._v is None:
            return ("g2", None)
        (x0, x1), (y0, y1) = self._v
        return ("g2", (int(x0), int(x1), int(y0), int(y1)))


class GTElement(_Element):
    """Element of the order-r target subgroup."""

    def __mul__(self, other: "GTElement") -> "GTElement":
        if not isinstance(other, GTElement) or other.suite is not self.suite:
            raise SchemeError("mixing elements of different groups or suites")
        return GTElement(self.suite, self.suite.backend.gt_mul(self._v, other._v))

    def __pow__(self, k: int) -> "GTElement":
        k = k % self.suite.order
        return GTElement(self.suite, self.suite.backend.gt_pow(self._v, k))

    def inverse(self) -> "GTElement":
        return GTElement(self.suite, self.suite.backend.gt_inv(self._v))

    @property
    def is_identity(self) -> bool:
        return self._v == self.suite.backend.gt_one()

    def to_bytes(self) -> bytes:
        return self.suite._enc_gt(self._v)

    def _canon(self):
        (c0, c1) = self._v
        return ("gt", tuple(int(x) for part in (c0, c1) for coeff in part for x in coeff))


class SymElement(_Element):
    """Symmetric-mode source-group element: a (G1, G2) pair sharing one
    exponent.  Either half can feed either pairing slot."""

    def __init__(self, suite, g1: G1Element, g2: G2Element):
        super().__init__(suite, (g1, g2))

    @property
    def side1(self) -> G1Element:
        return self._v[0]

    @property
    def side2(self) -> G2Element:
        return self._v[1]

    def __mul__(self, other: "SymElement") -> "SymElement":
        if not isinstance(other, SymElement):
            raise SchemeError("mixing elements of different groups")
        return SymElement(self.suite, self.side1 * other.side1, self.side2 * other.side2)

    def __pow__(self, k: int) -> "SymElement":
        return SymElement(self.suite, self.side1**k, self.side2**k)

    def inverse(self) -> "SymElement":
        return SymElement(self.suite, self.side1.inverse(), self.side2.inverse())

    @property
    def is_identity(self) -> bool:
        return self.side1.is_identity

    def to_bytes(self) -> bytes:
        return self.side1.to_bytes() + self.side2.to_bytes()

    def _canon(self):
        return ("sym", self.side1._canon(), self.side2._canon())


class GroupSuite:
    """One curve + mode, with generators, pairing and instrumentation.

    The pairing counter counts bilinear-map evaluations requested through
    :meth:`pair` / :meth:`pair_product`, including trivial ones on
    identity inputs (which the backend short-circuits).  It is plain
    instrumentation: reads and resets are not synchronized.
    """

    def __init__(self, curve: str = "bls12-381", mode: str = SYMMETRIC, backend: str = "auto"):
        if mode not in (SYMMETRIC, ASYMMETRIC):
            raise ValueError(f"unknown mode {mode!r}")
        self.backend = get_backend(curve, backend)
        self.params: CurveParams = self.backend.params
        self.mode = mode
        self.order = int(self.params.r)
        self.pairing_count = 0
        g1 = G1Element(self, self.params.g1_gen)
        g2 = G2Element(self, self.params.g2_gen)
        self._g1_gen = g1
        self._g2_gen = g2
        if mode == SYMMETRIC:
            self.g = SymElement(self, g1, g2)
            self.g_hat = self.g
        else:
            self.g = g1
            self.g_hat = g2
        self.gt_generator = self.pair(self.g, self.g_hat, count=False)

    # -- identity / generator helpers -----------------------------------

    @property
    def suite_id(self) -> int:
        return self.params.suite_id | (0x80 if self.mode == ASYMMETRIC else 0)

    @property
    def curve_name(self) -> str:
        return self.params.name

    @property
    def side1_gen(self) -> G1Element:
        return self._g1_gen

    @property
    def side2_gen(self) -> G2Element:
        return self._g2_gen

    def g1_identity(self) -> G1Element:
        return G1Element(self, None)

    def g2_identity(self) -> G2Element:
        return G2Element(self, None)

    def gt_identity(self) -> GTElement:
        return GTElement(self, self.backend.gt_one())

    def scalar(self, v: int) -> int:
        return v % self.order

    def random_scalar(self, rng: RandomSource) -> int:
        return rng.scalar(self.order)

    def hash_to_scalar(self, data: bytes, domain_tag: bytes) -> int:
        return hash_to_scalar(data, domain_tag, self.order)

    # -- pairing ----------------------------------------------------------

    def _pair_sides(self, x, y):
        if isinstance(x, SymElement):
            x = x.side1
        if isinstance(y, SymElement):
            y = y.side2
        if isinstance(x, G2Element) and isinstance(y, G1Element) and self.mode == SYMMETRIC:
            x, y = y, x
        if not (isinstance(x, G1Element) and isinstance(y, G2Element)):
            raise SchemeError("pair() needs a source-1 and a source-2 element")
        return x, y

    def pair(self, x, y, count: bool = True) -> GTElement:
        """e(x, y); accepts SymElements in symmetric mode."""
        return self.pair_product([(x, y)], count=count)

    def pair_product(self, pairs, count: bool = True) -> GTElement:
        """Product of e(x_i, y_i) over all pairs, one shared final
        exponentiation.  Counts len(pairs) bilinear-map evaluations."""
        sides = [self._pair_sides(x, y) for (x, y) in pairs]
        if count:
            self.pairing_count += len(sides)
        raw = self.backend.multi_pairing([(x._v, y._v) for (x, y) in sides])
        return GTElement(self, raw)

    def reset_pairing_count(self) -> int:
        old = self.pairing_count
        self.pairing_count = 0
        return old

    # -- raw element codecs (fixed-width, canonical) ----------------------

    def _enc_fp(self, v: int) -> bytes:
        return int(v).to_bytes(self.params.fp_bytes, "big")

    def _dec_fp(self, b: bytes) -> int:
        v = int.from_bytes(b, "big")
        if v >= self.params.p:
            raise ElementDecodeError("field coordinate out of range")
        return v

    def _enc_g1(self, pt) -> bytes:
        # compressed: flag 0x00 infinity, else 0x02 | (y & 1), then x
        if pt is None:
            return b"\x00" + b"\x00" * self.params.fp_bytes
        x, y = pt
        return bytes([0x02 | (int(y) & 1)]) + self._enc_fp(x)

    def g1_byte_len(self) -> int:
        return 1 + self.params.fp_bytes

    def g2_byte_len(self) -> int:
        return 1 + 4 * self.params.fp_bytes

    def gt_byte_len(self) -> int:
        return 12 * self.params.fp_bytes

    def _dec_g1(self, b: bytes) -> G1Element:
        flag = b[0]
        if flag == 0x00:
            if any(b[1:]):
                raise ElementDecodeError("non-canonical infinity encoding")
            return self.g1_identity()
        if flag not in (0x02, 0x03):
            raise ElementDecodeError("bad G1 flag byte")
        x = self._dec_fp(b[1:])
        p = self.params.p
        rhs = (x * x * x + self.params.b) % p
        y = pow(rhs, (p + 1) // 4, p)
        if y * y % p != rhs:
            raise ElementDecodeError("x is not on the curve")
        if (y & 1) != (flag & 1):
            y = p - y
        pt = (x, y)
        if not self.backend.g1_in_subgroup(pt):
            raise ElementDecodeError("G1 point not in the prime-order subgroup")
        return G1Element(self, pt)

    def _enc_g2(self, pt) -> bytes:
        if pt is None:
            return b"\x00" + b"\x00" * (4 * self.params.fp_bytes)
        (x0, x1), (y0, y1) = pt
        return b"\x04" + b"".join(self._enc_fp(v) for v in (x0, x1, y0, y1))

    def _dec_g2(self, b: bytes) -> G2Element:
        flag = b[0]
        if flag == 0x00:
            if any(b[1:]):
                raise ElementDecodeError("non-canonical infinity encoding")
            return self.g2_identity()
        if flag != 0x04:
            raise ElementDecodeError("bad G2 flag byte")
        n = self.params.fp_bytes
        coords = [self._dec_fp(b[1 + i * n : 1 + (i + 1) * n]) for i in range(4)]
        pt = ((coords[0], coords[1]), (coords[2], coords[3]))
        if not self.backend.g2_in_subgroup(pt):
            raise ElementDecodeError("G2 point not in the prime-order subgroup")
        return G2Element(self, pt)

    def _enc_gt(self, v) -> bytes:
        (c0, c1) = v
        return b"".join(self._enc_fp(x) for part in (c0, c1) for coeff in part for x in coeff)

    def _dec_gt(self, b: bytes) -> GTElement:
        n = self.params.fp_bytes
        coords = [self._dec_fp(b[i * n : (i + 1) * n]) for i in range(12)]
        v = (
            ((coords[0], coords[1]), (coords[2], coords[3]), (coords[4], coords[5])),
            ((coords[6], coords[7]), (coords[8], coords[9]), (coords[10], coords[11])),
        )
        if not self.backend.gt_is_valid(v):
            raise ElementDecodeError("not an element of the target subgroup")
        return GTElement(self, v)

    def _dec_sym(self, b: bytes) -> SymElement:
        n1 = self.g1_byte_len()
        return SymElement(self, self._dec_g1(b[:n1]), self._dec_g2(b[n1:]))

    def sym_byte_len(self) -> int:
        return self.g1_byte_len() + self.g2_byte_len()

    def __repr__(self):
        return f"GroupSuite({self.curve_name!r}, {self.mode!r})"


_suite_cache: dict[int, GroupSuite] = {}
_suite_cache_lock = threading.Lock()


def suite_for_id(suite_id: int, backend: str = "auto") -> GroupSuite:
    """Shared suite instance for a serialized suite-id byte.

    Returned suites are cached process-wide (their pairing counters
    aggregate); construct :class:`GroupSuite` directly for an isolated
    counter.
    """
    curve_id = suite_id & 0x7F
    if curve_id not in CURVES_BY_ID:
        raise DecodeError(f"unknown suite id {suite_id}")
    mode = ASYMMETRIC if suite_id & 0x80 else SYMMETRIC
    with _suite_cache_lock:
        if suite_id not in _suite_cache:
            _suite_cache[suite_id] = GroupSuite(CURVES_BY_ID[curve_id].name, mode, backend)
        return _suite_cache[suite_id]
