"""Command-line surface: round trips, exit codes, index robustness."""

import json
import struct

import pytest

from hvekit.cli import main

from conftest import TEST_CURVE


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture()
def ws(tmp_path):
    (tmp_path / "doc1.txt").write_bytes(b"first document")
    (tmp_path / "doc2.txt").write_bytes(b"second document")
    return tmp_path


def _keygen(ws, scheme="ll3", extra=()):
    assert run("keygen", "--scheme", scheme, "--curve", TEST_CURVE, "--out-dir", ws / "keys", "--seed", 1, *extra) == 0
    return ws / "keys" / "pk.hvek", ws / "keys" / "sk.hvek"


class TestKeygen:
    def test_zero_fields_usage_error(self, ws, capsys):
        assert run("keygen", "--scheme", "ll3", "--fields", 0, "--out-dir", ws / "k") == 1

    def test_encode_requires_domain_and_width(self, ws):
        assert run("keygen", "--scheme", "bw2", "--encode", "cmp", "--out-dir", ws / "k") == 1

    def test_encode_cmp_records_length(self, ws, capsys):
        code = run(
            "keygen", "--scheme", "bw2", "--encode", "cmp", "--domain", 10, "--width", 2,
            "--curve", TEST_CURVE, "--out-dir", ws / "k", "--seed", 2,
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "20 slots" in out

    def test_encode_range_doubles_length(self, ws, capsys):
        code = run(
            "keygen", "--scheme", "ll3", "--encode", "range", "--domain", 4, "--width", 2,
            "--curve", TEST_CURVE, "--out-dir", ws / "k", "--seed", 3,
        )
        assert code == 0
        assert "16 slots" in capsys.readouterr().out

    def test_written_key_decodes_with_expected_counts(self, ws):
        from hvekit.cli import _load_key

        _keygen(ws, "ll3", extra=("--fields", 4))
        info, suite, pk, kind, n, w = _load_key(ws / "keys" / "pk.hvek", "public")
        assert info.scheme_id == "LL3" and pk.length == 4
        # 4 basis vectors (12) + V, W1, W2 (9) + U_i, H_i (24), dim 3 each
        assert pk.source_element_count == 45
        assert len(pk.u) == len(pk.h) == 4

    def test_fields_and_encode_conflict(self, ws):
        assert (
            run("keygen", "--scheme", "bw2", "--fields", 3, "--encode", "cmp", "--domain", 3,
                "--width", 1, "--out-dir", ws / "k")
            == 1
        )


@pytest.mark.parametrize("scheme", ["bw2", "ll3", "dhve3", "asym1"])
class TestRoundTrip:
    def test_search_matches_plain_oracle(self, ws, capsys, scheme):
        pk, sk = _keygen(ws, scheme, extra=("--fields", 3))
        capsys.readouterr()
        idx = ws / "records.hvei"
        records = [
            ("alice,eng,2023", "doc1.txt"),
            ("bob,eng,2024", "doc2.txt"),
            ("alice,sales,2024", "doc1.txt"),
        ]
        ids = []
        for i, (attrs, doc) in enumerate(records):
            assert run(
                "encrypt", "--pk", pk, "--index", idx, "--attrs", attrs,
                "--payload", ws / doc, "--test-sidecar", "--seed", 10 + i,
            ) == 0
            ids.append(capsys.readouterr().out.strip())
        assert len(set(ids)) == 3
        sidecar = [json.loads(line) for line in open(str(idx) + ".plain.jsonl")]
        assert [e["record_id"] for e in sidecar] == ids

        tok = ws / "alice.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "=alice,*,*", "--out", tok, "--seed", 20) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok, "--out-dir", ws / "hits") == 0
        found = set(capsys.readouterr().out.split())
        expected = {e["record_id"] for e in sidecar if e["fields"][0] == "alice"}
        assert found == expected
        assert (ws / "hits" / ids[0]).read_bytes() == b"first document"

    def test_all_wildcard_returns_everything(self, ws, capsys, scheme):
        pk, sk = _keygen(ws, scheme, extra=("--fields", 2))
        idx = ws / "records.hvei"
        assert run("encrypt", "--pk", pk, "--index", idx, "--attrs", "x,y", "--payload", ws / "doc1.txt", "--seed", 30) == 0
        capsys.readouterr()
        tok = ws / "all.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "*,*", "--out", tok, "--seed", 31) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok) == 0
        assert len(capsys.readouterr().out.split()) == 1


class TestEncodedSearch:
    @pytest.mark.parametrize("scheme", ["bw2", "ll3", "dhve3", "asym1"])
    @pytest.mark.parametrize("family,tokspec,pred", [
        ("cmp", "<=2", lambda v: v <= 2),
        ("range", "[2,3]", lambda v: 2 <= v <= 3),
        ("subset", "in{1,3}", lambda v: v in (1, 3)),
    ])
    def test_every_scheme_every_family(self, ws, capsys, scheme, family, tokspec, pred):
        assert run(
            "keygen", "--scheme", scheme, "--encode", family, "--domain", 4, "--width", 1,
            "--curve", TEST_CURVE, "--out-dir", ws / "keys", "--seed", 45,
        ) == 0
        pk, sk = ws / "keys" / "pk.hvek", ws / "keys" / "sk.hvek"
        idx = ws / "f.hvei"
        for i, v in enumerate((1, 2, 3, 4)):
            assert run("encrypt", "--pk", pk, "--index", idx, "--values", str(v),
                       "--payload", ws / "doc1.txt", "--test-sidecar", "--seed", 46 + i) == 0
        capsys.readouterr()
        tok = ws / "f.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", tokspec, "--out", tok, "--seed", 51) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok) == 0
        sidecar = [json.loads(line) for line in open(str(idx) + ".plain.jsonl")]
        expected = {e["record_id"] for e in sidecar if pred(e["fields"][0])}
        assert set(capsys.readouterr().out.split()) == expected

    def test_cmp_spec_matches_evaluator(self, ws, capsys):
        assert run(
            "keygen", "--scheme", "ll3", "--encode", "cmp", "--domain", 6, "--width", 2,
            "--curve", TEST_CURVE, "--out-dir", ws / "keys", "--seed", 40,
        ) == 0
        pk, sk = ws / "keys" / "pk.hvek", ws / "keys" / "sk.hvek"
        idx = ws / "enc.hvei"
        values = [(1, 5), (3, 3), (6, 2), (4, 6)]
        for i, (a, b) in enumerate(values):
            assert run(
                "encrypt", "--pk", pk, "--index", idx, "--values", f"{a},{b}",
                "--payload", ws / "doc1.txt", "--test-sidecar", "--seed", 41 + i,
            ) == 0
        capsys.readouterr()
        tok = ws / "le.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "<=4,<=5", "--out", tok, "--seed", 50) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok, "--raw-count") == 0
        out, err = capsys.readouterr().out, None
        sidecar = [json.loads(line) for line in open(str(idx) + ".plain.jsonl")]
        expected = {e["record_id"] for e in sidecar if e["fields"][0] <= 4 and e["fields"][1] <= 5}
        assert set(out.split()) == expected

    def test_subset_spec_matches_evaluator(self, ws, capsys):
        assert run(
            "keygen", "--scheme", "asym1", "--encode", "subset", "--domain", 5, "--width", 1,
            "--curve", TEST_CURVE, "--out-dir", ws / "keys", "--seed", 55,
        ) == 0
        pk, sk = ws / "keys" / "pk.hvek", ws / "keys" / "sk.hvek"
        idx = ws / "s.hvei"
        for i, v in enumerate((1, 2, 4, 5)):
            assert run("encrypt", "--pk", pk, "--index", idx, "--values", str(v),
                       "--payload", ws / "doc1.txt", "--test-sidecar", "--seed", 56 + i) == 0
        capsys.readouterr()
        tok = ws / "in.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "in{2,3,5}", "--out", tok, "--seed", 58) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok) == 0
        sidecar = [json.loads(line) for line in open(str(idx) + ".plain.jsonl")]
        expected = {e["record_id"] for e in sidecar if e["fields"][0] in (2, 3, 5)}
        assert set(capsys.readouterr().out.split()) == expected

    def test_out_of_domain_value_rejected(self, ws):
        assert run(
            "keygen", "--scheme", "bw2", "--encode", "subset", "--domain", 4, "--width", 1,
            "--curve", TEST_CURVE, "--out-dir", ws / "keys", "--seed", 60,
        ) == 0
        pk = ws / "keys" / "pk.hvek"
        assert run(
            "encrypt", "--pk", pk, "--index", ws / "i.hvei", "--values", "0",
            "--payload", ws / "doc1.txt",
        ) == 1

    def test_range_and_subset_specs(self, ws, capsys):
        assert run(
            "keygen", "--scheme", "bw2", "--encode", "range", "--domain", 5, "--width", 1,
            "--curve", TEST_CURVE, "--out-dir", ws / "keys", "--seed", 61,
        ) == 0
        pk, sk = ws / "keys" / "pk.hvek", ws / "keys" / "sk.hvek"
        idx = ws / "r.hvei"
        for i, v in enumerate((1, 3, 5)):
            assert run("encrypt", "--pk", pk, "--index", idx, "--values", str(v),
                       "--payload", ws / "doc1.txt", "--test-sidecar", "--seed", 62 + i) == 0
        capsys.readouterr()
        tok = ws / "mid.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "[2,4]", "--out", tok, "--seed", 70) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok) == 0
        sidecar = [json.loads(line) for line in open(str(idx) + ".plain.jsonl")]
        expected = {e["record_id"] for e in sidecar if 2 <= e["fields"][0] <= 4}
        assert set(capsys.readouterr().out.split()) == expected


class TestDelegation:
    def test_delegated_equals_fresh(self, ws, capsys):
        pk, sk = _keygen(ws, "dhve3", extra=("--fields", 3))
        idx = ws / "d.hvei"
        for i, attrs in enumerate(("alice,eng,x", "bob,eng,x", "alice,sales,x")):
            assert run("encrypt", "--pk", pk, "--index", idx, "--attrs", attrs,
                       "--payload", ws / "doc1.txt", "--seed", 80 + i) == 0
        capsys.readouterr()
        base = ws / "base.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "=alice,?,*", "--out", base, "--seed", 90) == 0
        deleg = ws / "deleg.tok"
        assert run("delegate", "--pk", pk, "--token", base, "--fix", "2=eng", "--out", deleg, "--seed", 91) == 0
        fresh = ws / "fresh.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "=alice,=eng,*", "--out", fresh, "--seed", 92) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", deleg) == 0
        got_deleg = set(capsys.readouterr().out.split())
        assert run("search", "--index", idx, "--token", fresh) == 0
        got_fresh = set(capsys.readouterr().out.split())
        assert got_deleg == got_fresh and len(got_deleg) == 1

    def test_delegate_on_non_dhve_token_rejected(self, ws, capsys):
        pk, sk = _keygen(ws, "ll3", extra=("--fields", 2))
        tok = ws / "t.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "=a,*", "--out", tok, "--seed", 95) == 0
        assert run("delegate", "--pk", pk, "--token", tok, "--fix", "1=x", "--out", ws / "o.tok") == 1

    def test_delegatable_spec_needs_dhve(self, ws):
        pk, sk = _keygen(ws, "bw2", extra=("--fields", 2))
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "=a,?", "--out", ws / "t.tok") == 1


class TestRobustness:
    def test_foreign_token_matches_nothing(self, ws, capsys):
        pk, sk = _keygen(ws, "ll3", extra=("--fields", 2))
        idx = ws / "i.hvei"
        for i in range(5):
            assert run("encrypt", "--pk", pk, "--index", idx, "--attrs", "a,b",
                       "--payload", ws / "doc1.txt", "--seed", 100 + i) == 0
        assert run("keygen", "--scheme", "ll3", "--fields", 2, "--curve", TEST_CURVE,
                   "--out-dir", ws / "other", "--seed", 999) == 0
        tok = ws / "foreign.tok"
        assert run("token", "--sk", ws / "other" / "sk.hvek", "--pk", ws / "other" / "pk.hvek",
                   "--spec", "*,*", "--out", tok, "--seed", 110) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok) == 0
        assert capsys.readouterr().out.split() == []
        assert run("search", "--index", idx, "--token", tok, "--fail-empty") == 3

    def test_truncated_tail_skipped(self, ws, capsys):
        pk, sk = _keygen(ws, "bw2", extra=("--fields", 2))
        idx = ws / "i.hvei"
        for i in range(2):
            assert run("encrypt", "--pk", pk, "--index", idx, "--attrs", "a,b",
                       "--payload", ws / "doc1.txt", "--seed", 120 + i) == 0
        # simulate a crash: append half a record
        blob = idx.read_bytes()
        idx.write_bytes(blob + struct.pack(">I", 1000) + b"\x00" * 10)
        tok = ws / "t.tok"
        assert run("token", "--sk", sk, "--pk", pk, "--spec", "*,*", "--out", tok, "--seed", 130) == 0
        capsys.readouterr()
        assert run("search", "--index", idx, "--token", tok) == 0
        assert len(capsys.readouterr().out.split()) == 2

    def test_attr_arity_mismatch(self, ws):
        pk, sk = _keygen(ws, "bw2", extra=("--fields", 3))
        assert run("encrypt", "--pk", pk, "--index", ws / "i.hvei", "--attrs", "a,b",
                   "--payload", ws / "doc1.txt") == 1

    def test_token_scheme_must_match_index(self, ws, capsys):
        pk, sk = _keygen(ws, "ll3", extra=("--fields", 2))
        idx = ws / "i.hvei"
        assert run("encrypt", "--pk", pk, "--index", idx, "--attrs", "a,b",
                   "--payload", ws / "doc1.txt", "--seed", 140) == 0
        assert run("keygen", "--scheme", "bw2", "--fields", 2, "--curve", TEST_CURVE,
                   "--out-dir", ws / "bwk", "--seed", 141) == 0
        tok = ws / "bw.tok"
        assert run("token", "--sk", ws / "bwk" / "sk.hvek", "--pk", ws / "bwk" / "pk.hvek",
                   "--spec", "*,*", "--out", tok, "--seed", 142) == 0
        assert run("search", "--index", idx, "--token", tok) == 1

    def test_corrupt_key_file_is_decode_error(self, ws):
        pk, sk = _keygen(ws, "ll3", extra=("--fields", 2))
        data = bytearray(pk.read_bytes())
        data[20] ^= 0xFF
        pk.write_bytes(bytes(data))
        assert run("encrypt", "--pk", pk, "--index", ws / "i.hvei", "--attrs", "a,b",
                   "--payload", ws / "doc1.txt") == 2

    def test_missing_attrs_and_values(self, ws):
        pk, sk = _keygen(ws, "ll3", extra=("--fields", 2))
        assert run("encrypt", "--pk", pk, "--index", ws / "i.hvei",
                   "--payload", ws / "doc1.txt") == 1
