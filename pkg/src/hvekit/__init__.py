"""hvekit: hidden-vector encryption over prime-order bilinear groups.

Four interchangeable schemes behind one Setup/GenToken/Encrypt/Query
interface, predicate encodings (equality / comparison / range / subset),
and a CLI for building and searching encrypted record indexes.
"""

from .asym import AsymScheme
from .bw import BwScheme
from .dhve import DhveScheme
from .errors import DecodeError, HvekitError, SchemeError
from .groups import (
    ASYMMETRIC,
    SYMMETRIC,
    G1Element,
    G2Element,
    GroupSuite,
    GTElement,
    RandomSource,
    SymElement,
    hash_to_scalar,
    suite_for_id,
)
from .hve import (
    DELEGATABLE,
    WILDCARD,
    AttributeVector,
    HveScheme,
    MatchResult,
    PatternVector,
    SealedPayload,
    attribute_scalar,
    open_sealed,
    predicate_eval,
    seal,
)
from .ll import LlScheme
from .product import (
    SIDE1,
    SIDE2,
    Basis2,
    Basis3,
    DualVector,
    ProductElement,
    check_orthogonal,
    gen_basis2,
    gen_basis3,
    sample_bdh,
    sample_p3dh,
    vec_exp,
    vec_mul,
    vec_pair,
    verify_p3dh_wellformed,
)
from .trivial import TrivialPeScheme

__version__ = "0.1.0"

__all__ = [
    "ASYMMETRIC",
    "AsymScheme",
    "AttributeVector",
    "Basis2",
    "Basis3",
    "BwScheme",
    "DELEGATABLE",
    "DecodeError",
    "DhveScheme",
    "DualVector",
    "G1Element",
    "G2Element",
    "GTElement",
    "GroupSuite",
    "HveScheme",
    "HvekitError",
    "LlScheme",
    "MatchResult",
    "PatternVector",
    "ProductElement",
    "RandomSource",
    "SIDE1",
    "SIDE2",
    "SYMMETRIC",
    "SchemeError",
    "SealedPayload",
    "SymElement",
    "TrivialPeScheme",
    "WILDCARD",
    "attribute_scalar",
    "check_orthogonal",
    "gen_basis2",
    "gen_basis3",
    "hash_to_scalar",
    "open_sealed",
    "predicate_eval",
    "sample_bdh",
    "sample_p3dh",
    "seal",
    "suite_for_id",
    "vec_exp",
    "vec_mul",
    "vec_pair",
    "verify_p3dh_wellformed",
]
