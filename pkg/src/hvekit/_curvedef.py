"""Parameter sets for the supported pairing-friendly curves.

Two standard curves are registered:

* ``bn254``     -- the BN curve used by Ethereum's precompiles (alt_bn128).
                   Fastest option; group order ~2^254.
* ``bls12-381`` -- the BLS12 curve at the contemporary 128-bit level.

Both expose a Type-3 pairing e: G1 x G2 -> GT.  All derived constants
(Frobenius coefficients, ate loop digits) are computed at import time from
the primary parameters rather than hard-coded.
"""

from dataclasses import dataclass, field


def _naf(n: int) -> list[int]:
    """Non-adjacent form, least significant digit first."""
    digits = []
    while n > 0:
        if n & 1:
            d = 2 - (n % 4)
            n -= d
        else:
            d = 0
        digits.append(d)
        n >>= 1
    return digits


@dataclass(frozen=True)
class CurveParams:
    name: str
    suite_id: int
    family: str  # "bn" | "bls12"
    u: int  # curve generation parameter (sign significant)
    p: int  # base field prime
    r: int  # pairing group order
    b: int  # G1: y^2 = x^3 + b
    xi: tuple[int, int]  # Fp6 nonresidue, element of Fp2
    b2: tuple[int, int]  # G2 twist constant, element of Fp2
    twist: str  # "D" (y^2 = x^3 + b/xi) | "M" (y^2 = x^3 + b*xi)
    g1_gen: tuple[int, int]
    g2_gen: tuple[tuple[int, int], tuple[int, int]]
    g1_cofactor: int
    fp_bytes: int
    ate_digits: list[int] = field(default_factory=list)  # msb-first, set in registry


_BN_U = 4965661367192848881
_BN_P = 36 * _BN_U**4 + 36 * _BN_U**3 + 24 * _BN_U**2 + 6 * _BN_U + 1
_BN_R = 36 * _BN_U**4 + 36 * _BN_U**3 + 18 * _BN_U**2 + 6 * _BN_U + 1

# b2 = 3 / (9 + i) in Fp2
_BN_B2 = (
    19485874751759354771024239261021720505790618469301721065564631296452457478373,
    266929791119991161246907387137283842545076965332900288569378510910307636690,
)

BN254 = CurveParams(
    name="bn254",
    suite_id=1,
    family="bn",
    u=_BN_U,
    p=_BN_P,
    r=_BN_R,
    b=3,
    xi=(9, 1),
    b2=_BN_B2,
    twist="D",
    g1_gen=(1, 2),
    g2_gen=(
        (
            10857046999023057135944570762232829481370756359578518086990519993285655852781,
            11559732032986387107991004021392285783925812861821192530917403151452391805634,
        ),
        (
            8495653923123431417604973247489272438418190587263600148770280649306958101930,
            4082367875863433681332203403145435568316851327593401208105741076214120093531,
        ),
    ),
    g1_cofactor=1,
    fp_bytes=32,
    ate_digits=list(reversed(_naf(6 * _BN_U + 2))),
)

_BLS_U = -0xD201000000010000
_BLS_P = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
_BLS_R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001

BLS12_381 = CurveParams(
    name="bls12-381",
    suite_id=2,
    family="bls12",
    u=_BLS_U,
    p=_BLS_P,
    r=_BLS_R,
    b=4,
    xi=(1, 1),
    b2=(4, 4),
    twist="M",
    g1_gen=(
        0x17F1D3A73197D7942695638C4FA9AC0FC3688C4F9774B905A14E3A3F171BAC586C55E83FF97A1AEFFB3AF00ADB22C6BB,
        0x08B3F481E3AAA0F1A09E30ED741D8AE4FCF5E095D5D00AF600DB18CB2C04B3EDD03CC744A2888AE40CAA232946C5E7E1,
    ),
    g2_gen=(
        (
            0x024AA2B2F08F0A91260805272DC51051C6E47AD4FA403B02B4510B647AE3D1770BAC0326A805BBEFD48056C8C121BDB8,
            0x13E02B6052719F607DACD3A088274F65596BD0D09920B61AB5DA61BBDC7F5049334CF11213945D57E5AC7D055D042B7E,
        ),
        (
            0x0CE5D527727D6E118CC9CDC6DA2E351AADFD9BAA8CBDD3A76D429A695160D12C923AC9CC3BACA289E193548608B82801,
            0x0606C4A02EA734CC32ACD2B02BC28B99CB3E287E85A763AF267492AB572E99AB3F370D275CEC1DA1AAA9075FF05F79BE,
        ),
    ),
    g1_cofactor=0x396C8C005555E1568C00AAAB0000AAAB,
    fp_bytes=48,
    ate_digits=[1 if (abs(_BLS_U) >> i) & 1 else 0 for i in range(abs(_BLS_U).bit_length())][::-1],
)

CURVES = {c.name: c for c in (BN254, BLS12_381)}
CURVES_BY_ID = {c.suite_id: c for c in (BN254, BLS12_381)}
