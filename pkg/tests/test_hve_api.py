"""Scheme-independent layer: predicate, vectors, sealing."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hvekit.errors import PayloadTooLarge, SchemeError
from hvekit.hve import (
    DELEGATABLE,
    WILDCARD,
    AttributeVector,
    MatchResult,
    PatternVector,
    open_sealed,
    predicate_eval,
    seal,
)

from conftest import seeded


class TestPredicateEval:
    def test_all_wildcards_match_everything(self):
        pat = PatternVector((WILDCARD, WILDCARD, WILDCARD))
        for vals in itertools.product(range(3), repeat=3):
            assert predicate_eval(pat, AttributeVector(vals))

    def test_exact_match_and_single_change(self):
        pat = PatternVector((5, 6, 7))
        assert predicate_eval(pat, AttributeVector((5, 6, 7)))
        assert not predicate_eval(pat, AttributeVector((5, 6, 8)))

    def test_exhaustive_small_domain(self):
        # l=3 over a 3-value alphabet, all pattern/attribute combinations
        symbols = [0, 1, 2, WILDCARD]
        for pat_slots in itertools.product(symbols, repeat=3):
            pat = PatternVector(pat_slots)
            for vals in itertools.product(range(3), repeat=3):
                expected = all(s is WILDCARD or s == v for s, v in zip(pat_slots, vals))
                assert predicate_eval(pat, AttributeVector(vals)) == expected

    def test_length_mismatch(self):
        with pytest.raises(SchemeError):
            predicate_eval(PatternVector((1, 2)), AttributeVector((1, 2, 3)))

    def test_delegatable_rejected(self):
        with pytest.raises(SchemeError):
            predicate_eval(PatternVector((1, DELEGATABLE)), AttributeVector((1, 2)))

    def test_without_delegatable(self):
        pat = PatternVector((1, DELEGATABLE, WILDCARD))
        widened = pat.without_delegatable()
        assert widened.slots[1] is WILDCARD
        assert predicate_eval(widened, AttributeVector((1, 9, 9)))

    @given(vals=st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=8))
    @settings(max_examples=30, deadline=None)
    def test_pattern_of_own_values_matches(self, vals):
        assert predicate_eval(PatternVector(tuple(vals)), AttributeVector(tuple(vals)))


class TestVectors:
    def test_from_strings_hashes_consistently(self, suite):
        a = AttributeVector.from_strings(suite, ["alice", "bob"])
        pat = PatternVector.from_strings(suite, ["alice", None])
        assert predicate_eval(pat, a)
        assert len(a) == 2

    def test_empty_vector_rejected(self):
        with pytest.raises(SchemeError):
            AttributeVector(())
        with pytest.raises(SchemeError):
            PatternVector(())

    def test_index_sets(self):
        pat = PatternVector((4, WILDCARD, DELEGATABLE, 5))
        assert pat.fixed_indexes == (0, 3)
        assert pat.wildcard_indexes == (1,)
        assert pat.delegatable_indexes == (2,)
        assert pat.has_delegatable

    def test_fix(self):
        pat = PatternVector((DELEGATABLE, WILDCARD))
        assert pat.fix(0, 9).slots[0] == 9
        assert pat.fix(0, WILDCARD).slots[0] is WILDCARD


class TestSealing:
    def test_round_trip(self, suite):
        rng = seeded(50)
        mask, sealed = seal(rng, b"the payload", suite)
        res = open_sealed(mask, sealed)
        assert res.matched and res.payload == b"the payload"

    def test_empty_payload(self, suite):
        rng = seeded(51)
        mask, sealed = seal(rng, b"", suite)
        assert open_sealed(mask, sealed) == MatchResult.match(b"")

    def test_wrong_mask_always_rejected(self, suite):
        rng = seeded(52)
        mask, sealed = seal(rng, b"payload", suite)
        failures = 0
        for _ in range(1000):
            other = suite.gt_generator ** rng.nonzero_scalar(suite.order)
            if open_sealed(other, sealed).matched:
                failures += 1
        assert failures == 0

    def test_oversize_rejected(self, suite):
        with pytest.raises(PayloadTooLarge):
            seal(seeded(53), b"x" * 17, suite, max_payload=16)

    def test_default_tag_len(self, suite):
        _, sealed = seal(seeded(54), b"x", suite)
        assert sealed.tag_len == 16

    def test_corrupted_blob_never_matches(self, suite):
        from hvekit.hve import SealedPayload

        rng = seeded(55)
        mask, sealed = seal(rng, b"authentic", suite)
        for pos in range(len(sealed.blob)):
            bad = bytearray(sealed.blob)
            bad[pos] ^= 0x01
            assert not open_sealed(mask, SealedPayload(bytes(bad))).matched

    @given(payload=st.binary(min_size=0, max_size=2048))
    @settings(max_examples=25, deadline=None)
    def test_seal_open_property(self, suite, payload):
        rng = seeded(hash(payload) & 0xFFFF)
        mask, sealed = seal(rng, payload, suite)
        assert open_sealed(mask, sealed).payload == payload
        assert not open_sealed(mask**2 * suite.gt_generator, sealed).matched


class TestMatchResult:
    def test_shapes(self):
        assert MatchResult.match(b"x").matched
        assert MatchResult.match(b"x").payload == b"x"
        assert not MatchResult.no_match().matched
        assert MatchResult.no_match().payload is None
