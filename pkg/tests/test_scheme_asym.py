"""ASYM1: short tokens, 4 pairings, type separation."""

import random

import pytest

from hvekit.asym import AsymScheme
from hvekit.errors import SchemeError
from hvekit.groups import G1Element, G2Element
from hvekit.hve import WILDCARD, AttributeVector, PatternVector

from conftest import seeded
from scheme_helpers import correctness_trials, random_attrs, raw_identity_trials


@pytest.fixture(scope="module")
def scheme(asym_suite):
    return AsymScheme(asym_suite)


@pytest.fixture(scope="module")
def keys5(scheme):
    return scheme.setup(seeded(900), 5)


class TestStructure:
    def test_requires_asymmetric_suite(self, suite):
        with pytest.raises(SchemeError):
            AsymScheme(suite)

    def test_token_is_four_group2_elements(self, scheme, keys5):
        pk, sk = keys5
        for pattern in (PatternVector((WILDCARD,) * 5), PatternVector((1, 2, 3, 4, 5))):
            tok = scheme.gen_token(seeded(901), pattern, sk, pk)
            assert tok.element_count == 4
            for comp in (tok.k0, tok.k1, tok.k2, tok.k3):
                assert isinstance(comp, G2Element)

    def test_ciphertext_size_l5(self, scheme, keys5):
        pk, _ = keys5
        ct = scheme.encrypt(seeded(902), AttributeVector((1, 2, 3, 4, 5)), b"m", pk)
        assert ct.source_element_count == 8  # l + 3
        for comp in (ct.c0, ct.c1, ct.c2, *ct.c3):
            assert isinstance(comp, G1Element)

    def test_four_pairings_always(self, scheme, asym_suite):
        rng = seeded(903)
        pyrand = random.Random(903)
        for length in (1, 3, 6):
            pk, sk = scheme.setup(rng, length)
            attrs = random_attrs(pyrand, length)
            ct = scheme.encrypt(rng, attrs, b"x", pk)
            for s in (0, length // 2, length):
                slots = list(attrs.values[:s]) + [WILDCARD] * (length - s)
                tok = scheme.gen_token(rng, PatternVector(tuple(slots)), sk, pk)
                asym_suite.reset_pairing_count()
                res = scheme.query(ct, tok, pk)
                assert asym_suite.pairing_count == 4
                assert res.matched


class TestTokenStructure:
    def test_exponent_reconstruction(self, scheme, asym_suite, keys5):
        pk, sk = keys5
        order = asym_suite.order
        g_hat = asym_suite.g_hat
        pattern = PatternVector((7, WILDCARD, 8, WILDCARD, WILDCARD))
        tok = scheme.gen_token(seeded(904), pattern, sk, pk)
        r = seeded(904)
        r1, r2, r3 = r.scalar(order), r.scalar(order), r.scalar(order)
        v_hat = g_hat**sk.v_exp
        assert tok.k1 == v_hat**r1
        assert tok.k2 == v_hat**r2
        assert tok.k3 == v_hat**r3
        agg = (sk.u_exp[0] * 7 + sk.h_exp[0] + sk.u_exp[2] * 8 + sk.h_exp[2]) % order
        expected_k0 = g_hat ** ((sk.alpha * sk.beta + sk.w1_exp * r1 + sk.w2_exp * r2 + agg * r3) % order)
        assert tok.k0 == expected_k0

    def test_omega_construction(self, scheme, asym_suite, keys5):
        pk, sk = keys5
        expected = asym_suite.pair(pk.v, asym_suite.g_hat) ** (sk.alpha * sk.beta % asym_suite.order)
        assert pk.omega == expected


class TestQuery:
    def test_raw_identity(self, scheme, asym_suite, keys5):
        pk, sk = keys5
        m = asym_suite.gt_generator ** 13579
        x = AttributeVector((2, 3, 5, 7, 11))
        ct = scheme.encrypt_element(seeded(905), x, m, pk)
        tok = scheme.gen_token(seeded(906), PatternVector((2, WILDCARD, 5, WILDCARD, 11)), sk, pk)
        assert scheme.query_element(ct, tok, pk) == m

    def test_raw_identity_is_inverse_omega_power(self, scheme, asym_suite, keys5):
        # on a match the four-pairing product equals e(v^t, g_hat^(a*b))^-1
        pk, sk = keys5
        order = asym_suite.order
        x = AttributeVector((1, 2, 3, 4, 5))
        ct = scheme.encrypt_element(seeded(907), x, asym_suite.gt_identity(), pk)
        r = seeded(907)
        t = r.scalar(order)
        tok = scheme.gen_token(seeded(908), PatternVector((1, WILDCARD, 3, WILDCARD, 5)), sk, pk)
        agg = asym_suite.g1_identity()
        for i in tok.indexes:
            agg = agg * ct.c3[i]
        prod = asym_suite.pair_product(
            [(ct.c0.inverse(), tok.k0), (ct.c1, tok.k1), (ct.c2, tok.k2), (agg, tok.k3)]
        )
        v_t = pk.v**t
        expected = asym_suite.pair(v_t, asym_suite.g_hat ** (sk.alpha * sk.beta % order)).inverse()
        assert prod == expected

    def test_all_wildcard_token(self, scheme, asym_suite, keys5):
        pk, sk = keys5
        tok = scheme.gen_token(seeded(909), PatternVector((WILDCARD,) * 5), sk, pk)
        assert tok.indexes == ()
        ct = scheme.encrypt(seeded(910), AttributeVector((9, 9, 9, 9, 9)), b"all", pk)
        asym_suite.reset_pairing_count()
        res = scheme.query(ct, tok, pk)
        assert res.matched and res.payload == b"all"
        assert asym_suite.pairing_count == 4

    def test_correctness_sample(self, scheme):
        assert correctness_trials(scheme, seeded(911), random.Random(911), 40, match=True) == 0
        assert correctness_trials(scheme, seeded(912), random.Random(912), 40, match=False) == 0

    def test_raw_identity_sample(self, scheme):
        assert raw_identity_trials(scheme, seeded(913), random.Random(913), 15) == 0
