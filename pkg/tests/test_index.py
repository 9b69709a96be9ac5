"""Index file format, payload sidecars, and library-level scan behavior."""

import pytest

from hvekit.asym import AsymScheme, encode_ciphertext
from hvekit.errors import SchemeError
from hvekit.hve import AttributeVector, PatternVector, WILDCARD, open_sealed, seal
from hvekit.index import IndexFile, IndexHeader
from hvekit.product import (
    decode_basis2,
    decode_basis3,
    decode_bdh_tuple,
    decode_p3dh_tuple,
    encode_basis2,
    encode_basis3,
    encode_bdh_tuple,
    encode_p3dh_tuple,
    gen_basis2,
    gen_basis3,
    sample_bdh,
    sample_p3dh,
    verify_p3dh_wellformed,
)

from conftest import seeded


class TestRecordCodecs:
    def test_basis_round_trips(self, suite):
        b2 = gen_basis2(seeded(1200), suite)
        blob = encode_basis2(suite, b2)
        again = decode_basis2(blob, suite)
        assert again == b2
        assert encode_basis2(suite, again) == blob
        b3 = gen_basis3(seeded(1201), suite)
        blob = encode_basis3(suite, b3)
        assert decode_basis3(blob, suite) == b3

    def test_tuple_round_trips(self, suite):
        t = sample_bdh(seeded(1202), suite, 0).public()
        blob = encode_bdh_tuple(suite, t)
        again = decode_bdh_tuple(blob, suite)
        assert again == t
        p = sample_p3dh(seeded(1203), suite, 1).public()
        blob = encode_p3dh_tuple(suite, p)
        again = decode_p3dh_tuple(blob, suite)
        assert again == p
        assert verify_p3dh_wellformed(again)

    def test_tuple_wire_excludes_secrets(self, suite):
        t = sample_p3dh(seeded(1204), suite, 0)
        assert t.secrets is not None
        again = decode_p3dh_tuple(encode_p3dh_tuple(suite, t), suite)
        assert again.secrets is None


@pytest.fixture()
def asym_kit(asym_suite):
    scheme = AsymScheme(asym_suite)
    pk, sk = scheme.setup(seeded(1210), 1)
    return scheme, pk, sk


class TestIndexFile:
    def _fill(self, tmp_path, asym_suite, asym_kit, count, payload=b"p"):
        scheme, pk, sk = asym_kit
        rng = seeded(1211)
        idx = IndexFile.create(
            tmp_path / "t.hvei", IndexHeader(asym_suite.suite_id, "ASYM1", 1)
        )
        ids = []
        for i in range(count):
            mask, sealed = seal(rng, payload, asym_suite)
            ct = scheme.encrypt_element(rng, AttributeVector((i % 3,)), mask, pk)
            ids.append(idx.append(rng, encode_ciphertext(asym_suite, ct), sealed))
        return idx, ids

    def test_hundred_records_round_trip(self, tmp_path, asym_suite, asym_kit):
        idx, ids = self._fill(tmp_path, asym_suite, asym_kit, 100)
        records = list(idx.records())
        assert len(records) == 100
        assert [r.record_id_hex for r in records] == ids
        assert len(set(ids)) == 100

    def test_large_payload_goes_to_sidecar(self, tmp_path, asym_suite, asym_kit):
        scheme, pk, sk = asym_kit
        big = bytes(range(256)) * 512  # 128 KiB
        idx, ids = self._fill(tmp_path, asym_suite, asym_kit, 1, payload=big)
        assert idx.sidecar_dir.exists() and len(list(idx.sidecar_dir.iterdir())) == 1
        (rec,) = idx.records()
        from hvekit.asym import decode_ciphertext

        ct = decode_ciphertext(rec.ct_bytes, asym_suite)
        tok = scheme.gen_token(seeded(1212), PatternVector((WILDCARD,)), sk, pk)
        res = open_sealed(scheme.query_element(ct, tok, pk), rec.sealed)
        assert res.matched and res.payload == big

    def test_create_refuses_overwrite(self, tmp_path, asym_suite, asym_kit):
        idx, _ = self._fill(tmp_path, asym_suite, asym_kit, 1)
        with pytest.raises(SchemeError):
            IndexFile.create(idx.path, IndexHeader(asym_suite.suite_id, "ASYM1", 1))

    def test_header_round_trip_with_encoding(self, tmp_path, asym_suite):
        hdr = IndexHeader(asym_suite.suite_id, "BW2", 20, encode_kind=1, domain_n=10, width_w=2)
        idx = IndexFile.create(tmp_path / "h.hvei", hdr)
        assert idx.read_header() == hdr

    def test_append_to_non_index_rejected(self, tmp_path, asym_suite, asym_kit):
        junk = tmp_path / "junk.hvei"
        junk.write_bytes(b"\x00\x00\x00\x04abcd")
        from hvekit.errors import DecodeError
        from hvekit.hve import SealedPayload

        with pytest.raises(DecodeError):
            IndexFile(junk).append(seeded(1213), b"ct", SealedPayload(b"blob"))
