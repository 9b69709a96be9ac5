"""Acceptance suite: one test per exit criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line
per criterion.
"""

import dataclasses
import itertools
import random
import time
from contextlib import contextmanager

import pytest

from hvekit import predicates
from hvekit.asym import AsymScheme
from hvekit.bw import BwScheme
from hvekit.dhve import DhveScheme
from hvekit.hve import DELEGATABLE, WILDCARD, AttributeVector, PatternVector, predicate_eval
from hvekit.ll import LlScheme
from hvekit.product import (
    check_orthogonal,
    gen_basis2,
    gen_basis3,
    sample_bdh,
    sample_p3dh,
    verify_p3dh_wellformed,
)
from hvekit.trivial import TrivialPeScheme

from conftest import seeded
from scheme_helpers import correctness_trials, matching_pattern, random_attrs, raw_identity_trials


@contextmanager
def criterion(num, desc):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {num} FAIL: {desc}", flush=True)
        raise
    print(f"\nACCEPTANCE {num} PASS: {desc}", flush=True)


def scheme_for(name, suite, asym_suite):
    return {
        "BW2": lambda: BwScheme(suite),
        "LL3": lambda: LlScheme(suite),
        "DHVE3": lambda: DhveScheme(suite),
        "ASYM1": lambda: AsymScheme(asym_suite),
    }[name]()


def test_criterion_1_structural_counts_product_schemes(suite):
    """BW2/LL3/DHVE3 element and pairing counts, l in 1..8, s in 0..l."""
    t0 = time.monotonic()
    with criterion(1, "product-scheme element and pairing counts exact for l=1..8, s=0..l"):
        rng = seeded(2001)
        pyrand = random.Random(2001)
        specs = {
            "BW2": (BwScheme(suite), lambda l: 4 * l + 2, lambda l, s: 4 * s + 2),
            "LL3": (LlScheme(suite), lambda l: 3 * l + 9, lambda l, s: 12),
            "DHVE3": (DhveScheme(suite), lambda l: 3 * l + 9, lambda l, s: 3 * s + 9),
        }
        for name, (scheme, ct_count, pair_count) in specs.items():
            for length in range(1, 9):
                pk, sk = scheme.setup(rng, length)
                attrs = random_attrs(pyrand, length)
                ct = scheme.encrypt(rng, attrs, b"c1", pk)
                assert ct.source_element_count == ct_count(length), name
                for s in range(0, length + 1):
                    slots = tuple(attrs.values[:s]) + (WILDCARD,) * (length - s)
                    tok = scheme.gen_token(rng, PatternVector(slots), sk, pk)
                    if name == "BW2":
                        assert tok.element_count == 4 * s + 2
                    elif name == "LL3":
                        assert tok.element_count == 12
                    suite.reset_pairing_count()
                    res = scheme.query(ct, tok, pk)
                    assert suite.pairing_count == pair_count(length, s), (name, length, s)
                    assert res.matched and res.payload == b"c1"
        elapsed = time.monotonic() - t0
        assert elapsed < 30.0, f"criterion 1 runtime {elapsed:.1f}s exceeds 30s"


def test_criterion_2_short_token_counts(asym_suite):
    """ASYM1: 4-element tokens, (l+3)-element ciphertexts, 4 pairings."""
    with criterion(2, "short-token counts exact and independent of l and s"):
        rng = seeded(2002)
        pyrand = random.Random(2002)
        scheme = AsymScheme(asym_suite)
        for length in range(1, 9):
            pk, sk = scheme.setup(rng, length)
            attrs = random_attrs(pyrand, length)
            ct = scheme.encrypt(rng, attrs, b"c2", pk)
            assert ct.source_element_count == length + 3
            for s in range(0, length + 1):
                slots = tuple(attrs.values[:s]) + (WILDCARD,) * (length - s)
                tok = scheme.gen_token(rng, PatternVector(slots), sk, pk)
                assert tok.element_count == 4
                asym_suite.reset_pairing_count()
                res = scheme.query(ct, tok, pk)
                assert asym_suite.pairing_count == 4, (length, s)
                assert res.matched


@pytest.mark.parametrize("name", ["BW2", "LL3", "DHVE3", "ASYM1"])
def test_criterion_3_correctness_suites(name, suite, asym_suite):
    """500 matching -> Matched byte-exact; 500 non-matching -> NoMatch."""
    with criterion(3, f"{name}: 500/500 correctness trials, zero failures"):
        scheme = scheme_for(name, suite, asym_suite)
        deleg = 0.15 if name == "DHVE3" else 0.0
        assert correctness_trials(scheme, seeded(2003), random.Random(2003), 500, match=True, deleg_rate=deleg) == 0
        assert correctness_trials(scheme, seeded(2004), random.Random(2004), 500, match=False) == 0


@pytest.mark.parametrize("name", ["BW2", "LL3", "DHVE3", "ASYM1"])
def test_criterion_4_raw_mode_algebra(name, suite, asym_suite):
    """On match the candidate target-group element equals the plaintext
    element exactly, 100 trials."""
    with criterion(4, f"{name}: raw-mode candidate exactly equals the hidden element, 100 trials"):
        scheme = scheme_for(name, suite, asym_suite)
        deleg = 0.15 if name == "DHVE3" else 0.0
        assert raw_identity_trials(scheme, seeded(2005), random.Random(2005), 100, deleg_rate=deleg) == 0


def test_criterion_5_orthogonality_and_blinding(suite):
    """Exact basis orthogonality pairs; blinding never changes query
    output, 100 randomized trials per side."""
    with criterion(5, "basis orthogonality exact; 100 ct-side and 100 token-side blinding trials"):
        rng = seeded(2006)
        for _ in range(5):
            b2 = gen_basis2(rng, suite)
            vecs = {"b11": b2.b11, "b12": b2.b12, "b2": b2.b2}
            ortho = {
                (a, b)
                for a in vecs
                for b in vecs
                if a < b and check_orthogonal(vecs[a].side1, vecs[b].side2)
            }
            assert ortho == {("b12", "b2")}
            b3 = gen_basis3(rng, suite)
            vecs = {"b11": b3.b11, "b12": b3.b12, "b2": b3.b2, "b3": b3.b3}
            ortho = {
                (a, b)
                for a in vecs
                for b in vecs
                if a < b and check_orthogonal(vecs[a].side1, vecs[b].side2)
            }
            assert ortho == {("b11", "b3"), ("b12", "b2"), ("b2", "b3")}

        pyrand = random.Random(2006)
        bw = BwScheme(suite)
        ll = LlScheme(suite)
        bw_keys = bw.setup(rng, 3)
        ll_keys = ll.setup(rng, 3)
        # ciphertext-side blinding: multiply every component by B2^z
        for trial in range(100):
            scheme, (pk, sk) = (bw, bw_keys) if trial % 2 == 0 else (ll, ll_keys)
            attrs = random_attrs(pyrand, 3)
            pattern = matching_pattern(pyrand, attrs)
            tok = scheme.gen_token(rng, pattern, sk, pk)
            ct = scheme.encrypt(rng, attrs, b"c5", pk)
            b2v = pk.basis.b2.side1
            if scheme is bw:
                ct2 = dataclasses.replace(
                    ct,
                    c1=ct.c1 * b2v ** rng.scalar(suite.order),
                    c2=tuple(c * b2v ** rng.scalar(suite.order) for c in ct.c2),
                    c3=tuple(c * b2v ** rng.scalar(suite.order) for c in ct.c3),
                )
            else:
                ct2 = dataclasses.replace(
                    ct,
                    c1=ct.c1 * b2v ** rng.scalar(suite.order),
                    c2=ct.c2 * b2v ** rng.scalar(suite.order),
                    c3=ct.c3 * b2v ** rng.scalar(suite.order),
                    c4=tuple(c * b2v ** rng.scalar(suite.order) for c in ct.c4),
                )
            assert scheme.query(ct, tok, pk) == scheme.query(ct2, tok, pk)
        # token-side blinding: multiply every component by B3^y
        dh = DhveScheme(suite)
        dh_keys = dh.setup(rng, 3)
        for trial in range(100):
            scheme, (pk, sk) = (ll, ll_keys) if trial % 2 == 0 else (dh, dh_keys)
            attrs = random_attrs(pyrand, 3)
            pattern = matching_pattern(pyrand, attrs)
            tok = scheme.gen_token(rng, pattern, sk, pk)
            ct = scheme.encrypt(rng, attrs, b"c5", pk)
            b3v = pk.basis.b3.side2
            if scheme is ll:
                tok2 = dataclasses.replace(
                    tok,
                    k1=tok.k1 * b3v ** rng.scalar(suite.order),
                    k2=tok.k2 * b3v ** rng.scalar(suite.order),
                    k3=tok.k3 * b3v ** rng.scalar(suite.order),
                    k4=tok.k4 * b3v ** rng.scalar(suite.order),
                )
            else:
                tok2 = dataclasses.replace(
                    tok,
                    k1=tok.k1 * b3v ** rng.scalar(suite.order),
                    k2=tok.k2 * b3v ** rng.scalar(suite.order),
                    k3=tok.k3 * b3v ** rng.scalar(suite.order),
                    k4=tuple(k * b3v ** rng.scalar(suite.order) for k in tok.k4),
                )
            assert scheme.query(ct, tok, pk) == scheme.query(ct, tok2, pk)


def test_criterion_6_encoding_brute_force_and_e2e(suite, asym_suite):
    """Exhaustive encoded-vs-plain agreement, plus 100 end-to-end
    encrypted trials per predicate family per scheme."""
    with criterion(6, "encodings: exhaustive brute force + 100 e2e trials x 4 families x 4 schemes"):
        # exhaustive: comparison n<=5 w<=3
        for n in range(1, 6):
            for w in range(1, 4):
                for bounds in itertools.product(range(1, n + 1), repeat=w):
                    spec = predicates.ComparisonSpec(n, w, bounds)
                    tok = predicates.encode_comparison_token(spec)
                    for values in itertools.product(range(1, n + 1), repeat=w):
                        enc = predicates.encode_comparison_ciphertext(n, w, values)
                        assert predicate_eval(tok, enc) == predicates.eval_comparison(spec, values)
        # exhaustive: range n<=4 w<=2
        for n in range(1, 5):
            ivs1 = [(lo, hi) for lo in range(1, n + 1) for hi in range(lo, n + 1)]
            for w in (1, 2):
                for ivs in itertools.product(ivs1, repeat=w):
                    spec = predicates.RangeSpec(n, w, ivs)
                    tok = predicates.encode_range_token(spec)
                    for values in itertools.product(range(1, n + 1), repeat=w):
                        enc = predicates.encode_range_ciphertext(n, w, values)
                        assert predicate_eval(tok, enc) == predicates.eval_range(spec, values)
        # exhaustive: subset n<=4 w<=2
        for n in range(1, 5):
            subsets = [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(1, n + 1), r)]
            for w in (1, 2):
                for sets in itertools.product(subsets, repeat=w):
                    spec = predicates.SubsetSpec(n, w, sets)
                    tok = predicates.encode_subset_token(spec)
                    for values in itertools.product(range(1, n + 1), repeat=w):
                        enc = predicates.encode_subset_ciphertext(n, w, values)
                        assert predicate_eval(tok, enc) == predicates.eval_subset(spec, values)

        # end-to-end under every scheme
        rng = seeded(2007)
        pyrand = random.Random(2007)
        n, w = 3, 2
        for name in ("BW2", "LL3", "DHVE3", "ASYM1"):
            scheme = scheme_for(name, suite, asym_suite)
            keys = {}
            for family in ("equality", "cmp", "range", "subset"):
                length = {"equality": 4, "cmp": n * w, "range": 2 * n * w, "subset": n * w}[family]
                if length not in keys:
                    keys[length] = scheme.setup(rng, length)
                pk, sk = keys[length]
                for _ in range(100):
                    if family == "equality":
                        attrs = random_attrs(pyrand, length, alphabet=3)
                        pattern = matching_pattern(pyrand, attrs) if pyrand.random() < 0.5 else PatternVector(
                            tuple(pyrand.randrange(3) for _ in range(length))
                        )
                        pattern = predicates.encode_equality(pattern)
                        expected = predicate_eval(pattern, attrs)
                    elif family == "cmp":
                        bounds = tuple(pyrand.randrange(1, n + 1) for _ in range(w))
                        values = tuple(pyrand.randrange(1, n + 1) for _ in range(w))
                        spec = predicates.ComparisonSpec(n, w, bounds)
                        pattern = predicates.encode_comparison_token(spec)
                        attrs = predicates.encode_comparison_ciphertext(n, w, values)
                        expected = predicates.eval_comparison(spec, values)
                    elif family == "range":
                        ivs = []
                        for _ in range(w):
                            lo = pyrand.randrange(1, n + 1)
                            ivs.append((lo, pyrand.randrange(lo, n + 1)))
                        values = tuple(pyrand.randrange(1, n + 1) for _ in range(w))
                        spec = predicates.RangeSpec(n, w, tuple(ivs))
                        pattern = predicates.encode_range_token(spec)
                        attrs = predicates.encode_range_ciphertext(n, w, values)
                        expected = predicates.eval_range(spec, values)
                    else:
                        sets = tuple(
                            frozenset(v for v in range(1, n + 1) if pyrand.random() < 0.6) for _ in range(w)
                        )
                        values = tuple(pyrand.randrange(1, n + 1) for _ in range(w))
                        spec = predicates.SubsetSpec(n, w, sets)
                        pattern = predicates.encode_subset_token(spec)
                        attrs = predicates.encode_subset_ciphertext(n, w, values)
                        expected = predicates.eval_subset(spec, values)
                    tok = scheme.gen_token(rng, pattern, sk, pk)
                    ct = scheme.encrypt(rng, attrs, b"c6", pk)
                    res = scheme.query(ct, tok, pk)
                    assert res.matched == expected, (name, family)
                    if expected:
                        assert res.payload == b"c6"


def test_criterion_7_delegation_equivalence(suite):
    """Every single- and two-step delegation path agrees with a fresh
    token on 200 sampled ciphertexts."""
    with criterion(7, "delegation: 6 paths x 200 ciphertexts agree exactly with fresh tokens"):
        rng = seeded(2008)
        pyrand = random.Random(2008)
        scheme = DhveScheme(suite)
        length = 4
        pk, sk = scheme.setup(rng, length)
        base_pattern = PatternVector((1, DELEGATABLE, DELEGATABLE, WILDCARD))

        paths = {
            "fix1-value": ([(1, 2)], PatternVector((1, 2, DELEGATABLE, WILDCARD))),
            "fix1-wild": ([(1, WILDCARD)], PatternVector((1, WILDCARD, DELEGATABLE, WILDCARD))),
            "fix2-vv": ([(1, 2), (2, 0)], PatternVector((1, 2, 0, WILDCARD))),
            "fix2-vw": ([(1, 2), (2, WILDCARD)], PatternVector((1, 2, WILDCARD, WILDCARD))),
            "fix2-wv": ([(1, WILDCARD), (2, 0)], PatternVector((1, WILDCARD, 0, WILDCARD))),
            "fix2-ww": ([(1, WILDCARD), (2, WILDCARD)], PatternVector((1, WILDCARD, WILDCARD, WILDCARD))),
        }
        # one pool of sampled ciphertexts, half forced to match the richest pattern
        pool = []
        for i in range(200):
            if i % 2 == 0:
                vals = [1, 2, 0, pyrand.randrange(3)]
                if i % 4 == 0:
                    vals[pyrand.randrange(3)] = pyrand.randrange(3)
                attrs = AttributeVector(tuple(vals))
            else:
                attrs = random_attrs(pyrand, length, alphabet=3)
            payload = b"c7-%d" % i
            pool.append((attrs, payload, scheme.encrypt(rng, attrs, payload, pk)))

        for path_name, (steps, final_pattern) in paths.items():
            tok = scheme.gen_token(rng, base_pattern, sk, pk)
            for index, target in steps:
                tok = scheme.delegate_fix(rng, index, target, tok, pk)
            fresh = scheme.gen_token(rng, final_pattern, sk, pk)
            oracle_pattern = final_pattern.without_delegatable()
            matches = 0
            for attrs, payload, ct in pool:
                r_del = scheme.query(ct, tok, pk)
                r_fresh = scheme.query(ct, fresh, pk)
                expected = predicate_eval(oracle_pattern, attrs)
                assert r_del.matched == r_fresh.matched == expected, path_name
                if expected:
                    assert r_del.payload == r_fresh.payload == payload
                    matches += 1
            assert matches > 0, f"path {path_name} never exercised a match"


def test_criterion_8_oracle_equivalence(suite, asym_suite):
    """Trivial-PE match matrix equals every HVE scheme's match matrix for
    a 16-pattern family over 50 random records."""
    with criterion(8, "trivial-PE vs HVE match matrices identical (16 patterns x 50 records x 4 schemes)"):
        rng = seeded(2009)
        pyrand = random.Random(2009)
        length = 3
        family = [
            PatternVector(p)
            for p in itertools.islice(itertools.product((0, 1, WILDCARD), repeat=length), 16)
        ]
        records = [
            (AttributeVector(tuple(pyrand.randrange(2) for _ in range(length))), b"c8-%d" % i)
            for i in range(50)
        ]
        tpe = TrivialPeScheme(suite)
        tpk, tsk = tpe.setup(rng, family)
        tpe_tokens = [tpe.gen_token(j, tsk) for j in range(len(family))]
        tpe_matrix = []
        for attrs, payload in records:
            ct = tpe.encrypt(rng, attrs, payload, tpk, family)
            row = []
            for j, tok in enumerate(tpe_tokens):
                res = tpe.query(ct, tok)
                if res.matched:
                    assert res.payload == payload
                row.append(res.matched)
            tpe_matrix.append(row)
        # the trivial construction must itself agree with the plain predicate
        for (attrs, _), row in zip(records, tpe_matrix):
            assert row == [predicate_eval(pat, attrs) for pat in family]

        for name in ("BW2", "LL3", "DHVE3", "ASYM1"):
            scheme = scheme_for(name, suite, asym_suite)
            pk, sk = scheme.setup(rng, length)
            tokens = [scheme.gen_token(rng, pat, sk, pk) for pat in family]
            for (attrs, payload), expected_row in zip(records, tpe_matrix):
                ct = scheme.encrypt(rng, attrs, payload, pk)
                row = [scheme.query(ct, tok, pk).matched for tok in tokens]
                assert row == expected_row, name


def test_criterion_9_assumption_samplers(suite):
    """Sampler tuples satisfy their defining relations; corruption of any
    component is detected by the consistency checker."""
    with criterion(9, "BDH/P3DH samplers: defining relations hold; corruption sweep fully detected"):
        rng = seeded(2010)
        order = suite.order
        gt = suite.gt_generator
        for _ in range(5):
            t = sample_bdh(rng, suite, 0)
            s = t.secrets
            assert t.T == gt ** (s.a * s.b * s.c % order)
            assert suite.pair(t.g_a, t.g_b) ** s.c == t.T
            t1 = sample_bdh(rng, suite, 1)
            assert t1.T == gt ** t1.secrets.d

            p = sample_p3dh(rng, suite, 0)
            ps = p.secrets
            assert suite.pair(p.t1, p.g) == gt**ps.c * suite.pair(p.f, p.g) ** ps.z3
            assert suite.pair(p.p2, p.g) == gt ** (ps.a * ps.b * ps.c % order) * suite.pair(p.f, p.g) ** ps.z2
            for bit in (0, 1):
                pb = sample_p3dh(rng, suite, bit)
                assert verify_p3dh_wellformed(pb)
                assert verify_p3dh_wellformed(pb.public())
        # corruption sweep (withheld exponents retained -> full coverage)
        t = sample_p3dh(seeded(2011), suite, 0)
        junk = t.g ** 31337
        for name in t.components():
            broken = dataclasses.replace(t, **{name: junk})
            assert not verify_p3dh_wellformed(broken), name
