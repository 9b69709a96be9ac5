"""Trivial PE oracle: per-predicate PKE slots, agreement with real HVE."""

import itertools
import random

import pytest

from hvekit.errors import SchemeError
from hvekit.hve import WILDCARD, AttributeVector, PatternVector, predicate_eval
from hvekit.trivial import TrivialPeScheme

from conftest import seeded


@pytest.fixture(scope="module")
def tpe(suite):
    return TrivialPeScheme(suite)


class TestBasics:
    def test_all_wildcard_family_always_matches(self, tpe):
        rng = seeded(1100)
        family = [PatternVector((WILDCARD, WILDCARD))]
        pk, sk = tpe.setup(rng, family)
        tok = tpe.gen_token(0, sk)
        for vals in ((0, 0), (5, 9)):
            ct = tpe.encrypt(rng, AttributeVector(vals), b"m", pk, family)
            res = tpe.query(ct, tok)
            assert res.matched and res.payload == b"m"

    def test_index_out_of_range(self, tpe):
        rng = seeded(1101)
        pk, sk = tpe.setup(rng, [PatternVector((1,))])
        with pytest.raises(SchemeError):
            tpe.gen_token(1, sk)

    def test_deterministic_rejection(self, tpe):
        rng = seeded(1102)
        family = [PatternVector((1, 2))]
        pk, sk = tpe.setup(rng, family)
        ct = tpe.encrypt(rng, AttributeVector((1, 3)), b"m", pk, family)
        assert not tpe.query(ct, tpe.gen_token(0, sk)).matched

    def test_exhaustive_l2_binary_alphabet(self, tpe):
        # the 9-pattern family over {0,1,*}^2 against every attribute pair
        rng = seeded(1103)
        family = [PatternVector(p) for p in itertools.product((0, 1, WILDCARD), repeat=2)]
        pk, sk = tpe.setup(rng, family)
        tokens = [tpe.gen_token(j, sk) for j in range(len(family))]
        for vals in itertools.product((0, 1), repeat=2):
            attrs = AttributeVector(vals)
            ct = tpe.encrypt(rng, attrs, b"payload", pk, family)
            for j, tok in enumerate(tokens):
                expected = predicate_eval(family[j], attrs)
                res = tpe.query(ct, tok)
                assert res.matched == expected
                if expected:
                    assert res.payload == b"payload"


class TestOracleAgreement:
    def test_agreement_with_ll_scheme(self, suite, tpe):
        from hvekit.ll import LlScheme

        rng = seeded(1104)
        pyrand = random.Random(1104)
        length = 3
        family = [PatternVector(p) for p in itertools.islice(itertools.product((0, 1, WILDCARD), repeat=length), 12)]
        hve = LlScheme(suite)
        pk, sk = hve.setup(rng, length)
        tpk, tsk = tpe.setup(rng, family)
        hve_tokens = [hve.gen_token(rng, pat, sk, pk) for pat in family]
        tpe_tokens = [tpe.gen_token(j, tsk) for j in range(len(family))]
        for rec in range(15):
            attrs = AttributeVector(tuple(pyrand.randrange(2) for _ in range(length)))
            payload = b"rec%d" % rec
            hve_ct = hve.encrypt(rng, attrs, payload, pk)
            tpe_ct = tpe.encrypt(rng, attrs, payload, tpk, family)
            for j in range(len(family)):
                a = hve.query(hve_ct, hve_tokens[j], pk)
                b = tpe.query(tpe_ct, tpe_tokens[j])
                assert a.matched == b.matched == predicate_eval(family[j], attrs)
                if a.matched:
                    assert a.payload == b.payload == payload
