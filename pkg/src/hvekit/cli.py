"""Command-line front end: key management, encrypted record indexing,
token generation from a small predicate grammar, delegation, and search.

Predicate spec grammar (one comma-separated expression per field):

* plain keys:   ``=value`` | ``*`` | ``?``  (``?`` on dhve3 only)
* cmp keys:     ``<=k`` | ``*``
* range keys:   ``[lo,hi]`` | ``<=k`` | ``>=k`` | ``=v`` | ``*``
* subset keys:  ``in{a,b,c}`` | ``*``

Exit codes: 0 ok, 1 usage, 2 crypto/decode error, 3 no matches (search
with --fail-empty only).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import index as index_mod
from . import predicates, serial
from .errors import DecodeError, HvekitError, SchemeError
from .groups import GroupSuite, RandomSource, suite_for_id
from .hve import DELEGATABLE, WILDCARD, AttributeVector, PatternVector, attribute_scalar, open_sealed, seal
from .index import ENCODE_CMP, ENCODE_IDS, ENCODE_NAMES, ENCODE_NONE, ENCODE_RANGE, ENCODE_SUBSET, IndexFile, IndexHeader
from .registry import SCHEMES, default_mode, make_scheme, sniff_record

RT_KEYSET = b"KSET"


class _NoMatches(Exception):
    pass


# -- keyset wrapper (scheme record + predicate-encoding metadata) ----------


def _write_keyset(path: Path, suite: GroupSuite, inner: bytes, encode_kind: int, n: int, w: int):
    wr = serial.RecordWriter(suite.suite_id, RT_KEYSET)
    wr.field(1, inner)
    wr.field(2, bytes([encode_kind]))
    if encode_kind != ENCODE_NONE:
        wr.field(3, serial.pack_u16(n))
        wr.field(4, serial.pack_u16(w))
    path.write_bytes(wr.finish())


def _read_keyset(path: Path):
    data = Path(path).read_bytes()
    _, _, fields = serial.decode_record(data, RT_KEYSET)
    inner = serial.need(fields, 1)
    kind = serial.need(fields, 2)[0]
    if kind not in ENCODE_NAMES:
        raise DecodeError("bad encoding kind in key file")
    n = serial.unpack_u16(fields[3]) if 3 in fields else 0
    w = serial.unpack_u16(fields[4]) if 4 in fields else 0
    return inner, kind, n, w


def _load_key(path: Path, expect: str):
    inner, kind, n, w = _read_keyset(path)
    record_kind, info = sniff_record(inner)
    if record_kind != expect:
        raise SchemeError(f"{path} holds a {record_kind} record, expected a {expect} key")
    suite_id, _, _ = serial.decode_record(inner)
    suite = suite_for_id(suite_id)
    decode = info.module.decode_public_key if expect == "public" else info.module.decode_secret_key
    return info, suite, decode(inner, suite), kind, n, w


def _rng_from(seed):
    return RandomSource.os_entropy() if seed is None else RandomSource.seeded(seed)


# -- predicate spec parsing --------------------------------------------------


def _split_spec(spec: str) -> list[str]:
    # split on commas, but not inside [lo,hi] or in{a,b,c} groups
    parts: list[str] = []
    depth = 0
    current = []
    for ch in spec:
        if ch in "[{":
            depth += 1
        elif ch in "]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    parts.append("".join(current).strip())
    if depth != 0 or any(not p for p in parts):
        raise SchemeError("malformed predicate spec")
    return parts


def _parse_int(text: str, n: int) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise SchemeError(f"expected an integer in 1..{n}, got {text!r}") from exc
    if not 1 <= v <= n:
        raise SchemeError(f"value {v} outside domain 1..{n}")
    return v


def parse_pattern_spec(
    spec: str, suite: GroupSuite, length: int, encode_kind: int, n: int, w: int, allow_delegatable: bool
) -> PatternVector:
    parts = _split_spec(spec)
    if encode_kind == ENCODE_NONE:
        if len(parts) != length:
            raise SchemeError(f"spec has {len(parts)} fields, key has {length}")
        slots = []
        for p in parts:
            if p == "*":
                slots.append(WILDCARD)
            elif p == "?":
                if not allow_delegatable:
                    raise SchemeError("'?' fields need a dhve3 key")
                slots.append(DELEGATABLE)
            elif p.startswith("="):
                slots.append(attribute_scalar(suite, p[1:]))
            else:
                raise SchemeError(f"bad field expression {p!r} for a plain key (use =v, * or ?)")
        return PatternVector(tuple(slots))

    if len(parts) != w:
        raise SchemeError(f"spec has {len(parts)} fields, key has {w}")
    slots: list = []
    if encode_kind == ENCODE_CMP:
        for p in parts:
            if p == "*":
                slots.extend([WILDCARD] * n)
            elif p.startswith("<="):
                slots.extend(predicates.le_token_block(n, _parse_int(p[2:], n)))
            else:
                raise SchemeError(f"bad field expression {p!r} for a cmp key (use <=k or *)")
    elif encode_kind == ENCODE_RANGE:
        for p in parts:
            if p == "*":
                lo, hi = 1, n
            elif p.startswith("<="):
                lo, hi = 1, _parse_int(p[2:], n)
            elif p.startswith(">="):
                lo, hi = _parse_int(p[2:], n), n
            elif p.startswith("="):
                lo = hi = _parse_int(p[1:], n)
            elif p.startswith("[") and p.endswith("]"):
                try:
                    lo_s, hi_s = p[1:-1].split(",")
                except ValueError as exc:
                    raise SchemeError(f"bad interval {p!r}") from exc
                lo, hi = _parse_int(lo_s.strip(), n), _parse_int(hi_s.strip(), n)
                if lo > hi:
                    raise SchemeError(f"empty interval {p!r}")
            else:
                raise SchemeError(f"bad field expression {p!r} for a range key")
            slots.append((lo, hi))
        spec_obj = predicates.RangeSpec(n, w, tuple(slots))
        return predicates.encode_range_token(spec_obj)
    elif encode_kind == ENCODE_SUBSET:
        for p in parts:
            if p == "*":
                slots.extend([WILDCARD] * n)
            elif p.startswith("in{") and p.endswith("}"):
                body = p[3:-1].strip()
                members = {_parse_int(x.strip(), n) for x in body.split(",")} if body else set()
                slots.extend(predicates.subset_token_block(n, members))
            else:
                raise SchemeError(f"bad field expression {p!r} for a subset key (use in{{a,b}} or *)")
    else:
        raise SchemeError(f"unknown encoding kind {encode_kind}")
    return PatternVector(tuple(slots))


def _encode_values(encode_kind: int, n: int, w: int, values) -> AttributeVector:
    if encode_kind == ENCODE_CMP:
        return predicates.encode_comparison_ciphertext(n, w, values)
    if encode_kind == ENCODE_RANGE:
        return predicates.encode_range_ciphertext(n, w, values)
    if encode_kind == ENCODE_SUBSET:
        return predicates.encode_subset_ciphertext(n, w, values)
    raise SchemeError("this key has no predicate encoding; use --attrs")


# -- commands ----------------------------------------------------------------


@click.group()
def cli():
    """Hidden-vector-encryption toolkit."""


@cli.command()
@click.option("--scheme", "scheme_name", required=True, type=click.Choice(sorted(SCHEMES)))
@click.option("--fields", type=int, default=None, help="Attribute vector length (plain keys).")
@click.option("--encode", "encode_name", type=click.Choice(["cmp", "range", "subset"]), default=None)
@click.option("--domain", type=int, default=None, help="Per-field domain size n (encoded keys).")
@click.option("--width", type=int, default=None, help="Field count w (encoded keys).")
@click.option("--curve", type=click.Choice(["bn254", "bls12-381"]), default="bls12-381", show_default=True)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--seed", type=int, default=None, help="Deterministic key material (tests only).")
def keygen(scheme_name, fields, encode_name, domain, width, curve, out_dir, seed):
    """Generate a key pair, optionally bound to a predicate encoding."""
    info = SCHEMES[scheme_name]
    if encode_name is not None:
        if fields is not None:
            raise click.UsageError("--fields and --encode are mutually exclusive")
        if not domain or not width or domain < 1 or width < 1:
            raise click.UsageError("--encode needs --domain and --width >= 1")
        kind = ENCODE_IDS[encode_name]
        length = domain * width * (2 if kind == index_mod.ENCODE_RANGE else 1)
        n, w = domain, width
    else:
        if fields is None or fields < 1:
            raise click.UsageError("--fields must be >= 1")
        kind, length, n, w = ENCODE_NONE, fields, 0, 0
    suite = GroupSuite(curve, default_mode(info))
    scheme = make_scheme(info, suite)
    pk, sk = scheme.setup(_rng_from(seed), length)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_keyset(out_dir / "pk.hvek", suite, info.module.encode_public_key(pk), kind, n, w)
    _write_keyset(out_dir / "sk.hvek", suite, info.module.encode_secret_key(suite, sk), kind, n, w)
    click.echo(f"wrote {out_dir / 'pk.hvek'} and {out_dir / 'sk.hvek'} ({info.scheme_id}, {length} slots)")


@cli.command()
@click.option("--pk", "pk_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--index", "index_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--attrs", default=None, help="Comma-separated attribute values (plain keys).")
@click.option("--values", default=None, help="Comma-separated field integers (encoded keys).")
@click.option("--payload", "payload_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--test-sidecar", is_flag=True, help="Record plaintext attributes beside the index (tests only).")
@click.option("--seed", type=int, default=None)
def encrypt(pk_path, index_path, attrs, values, payload_path, test_sidecar, seed):
    """Encrypt one payload under attributes and append it to an index."""
    info, suite, pk, kind, n, w = _load_key(pk_path, "public")
    if (attrs is None) == (values is None):
        raise click.UsageError("give exactly one of --attrs (plain) or --values (encoded)")
    if kind == ENCODE_NONE:
        if attrs is None:
            raise click.UsageError("this key has no predicate encoding; use --attrs")
        vec = AttributeVector.from_strings(suite, [a.strip() for a in attrs.split(",")])
        plain = [a.strip() for a in attrs.split(",")]
    else:
        if values is None:
            raise click.UsageError("this key is predicate-encoded; use --values")
        ints = [int(v.strip()) for v in values.split(",")]
        vec = _encode_values(kind, n, w, ints)
        plain = ints
    if len(vec) != pk.length:
        raise SchemeError(f"attribute arity {len(vec)} does not match key length {pk.length}")

    idx = IndexFile(index_path)
    if not index_path.exists():
        IndexFile.create(index_path, IndexHeader(suite.suite_id, info.scheme_id, pk.length, kind, n, w))
    header = idx.read_header()
    if header.scheme_id != info.scheme_id or header.length != pk.length or header.suite_id != suite.suite_id:
        raise SchemeError("index header does not match this key")

    rng = _rng_from(seed)
    scheme = make_scheme(info, suite)
    mask, sealed = seal(rng, Path(payload_path).read_bytes(), suite)
    ct = scheme.encrypt_element(rng, vec, mask, pk, sealed=None)
    record_id = idx.append(rng, info.module.encode_ciphertext(suite, ct), sealed)
    if test_sidecar:
        import json

        with open(str(index_path) + ".plain.jsonl", "a") as fh:
            fh.write(json.dumps({"record_id": record_id, "fields": plain}) + "\n")
    click.echo(record_id)


@cli.command()
@click.option("--sk", "sk_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--pk", "pk_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--spec", required=True, help="Predicate spec, one expression per field.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--seed", type=int, default=None)
def token(sk_path, pk_path, spec, out_path, seed):
    """Generate a search token from a predicate spec."""
    info, suite, sk, kind, n, w = _load_key(sk_path, "secret")
    pk_info, _, pk, _, _, _ = _load_key(pk_path, "public")
    if pk_info.scheme_id != info.scheme_id:
        raise SchemeError("public and secret keys belong to different schemes")
    pattern = parse_pattern_spec(spec, suite, sk.length, kind, n, w, info.supports_delegation)
    scheme = make_scheme(info, suite)
    tok = scheme.gen_token(_rng_from(seed), pattern, sk, pk)
    Path(out_path).write_bytes(info.module.encode_token(suite, tok))
    click.echo(f"wrote {out_path}")


@cli.command()
@click.option("--pk", "pk_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--token", "token_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--fix", required=True, help="k=value or k=* (1-based slot index).")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--seed", type=int, default=None)
def delegate(pk_path, token_path, fix, out_path, seed):
    """Fix one delegatable slot of a dhve3 token."""
    info, suite, pk, _, _, _ = _load_key(pk_path, "public")
    kind, tok_info = sniff_record(Path(token_path).read_bytes())
    if kind != "token":
        raise SchemeError(f"{token_path} is not a token file")
    if not tok_info.supports_delegation or tok_info.scheme_id != info.scheme_id:
        raise SchemeError(f"delegation needs a dhve3 token matching the key, got {tok_info.scheme_id}")
    tok = tok_info.module.decode_token(Path(token_path).read_bytes(), suite)
    if "=" not in fix:
        raise click.UsageError("--fix must look like k=value or k=*")
    slot_s, _, value_s = fix.partition("=")
    try:
        slot = int(slot_s) - 1
    except ValueError as exc:
        raise click.UsageError("--fix slot must be an integer (1-based)") from exc
    target = WILDCARD if value_s == "*" else attribute_scalar(suite, value_s)
    scheme = make_scheme(info, suite)
    new_tok = scheme.delegate_fix(_rng_from(seed), slot, target, tok, pk)
    Path(out_path).write_bytes(info.module.encode_token(suite, new_tok))
    click.echo(f"wrote {out_path}")


@cli.command()
@click.option("--index", "index_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--token", "token_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), default=None, help="Write matching payloads here.")
@click.option("--raw-count", is_flag=True, help="Print the base-pairing counter for the scan.")
@click.option("--fail-empty", is_flag=True, help="Exit 3 when nothing matches.")
def search(index_path, token_path, out_dir, raw_count, fail_empty):
    """Linear-scan an index with a token, printing matching record ids.

    The scan is inherently linear: hidden-vector tokens decide each record
    individually and reveal nothing that would allow an index structure.
    """
    idx = IndexFile(index_path)
    header = idx.read_header()
    info = header.scheme_info
    kind, tok_info = sniff_record(Path(token_path).read_bytes())
    if kind != "token" or tok_info.scheme_id != info.scheme_id:
        raise SchemeError(f"token scheme {tok_info.scheme_id} does not match index scheme {header.scheme_id}")
    suite = suite_for_id(header.suite_id)
    tok = info.module.decode_token(Path(token_path).read_bytes(), suite)
    scheme = make_scheme(info, suite)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    start_count = suite.pairing_count
    matches = 0
    for rec in idx.records():
        ct = info.module.decode_ciphertext(rec.ct_bytes, suite)
        candidate = scheme.query_element(ct, tok, None)
        result = open_sealed(candidate, rec.sealed)
        if result.matched:
            matches += 1
            click.echo(rec.record_id_hex)
            if out_dir is not None:
                (out_dir / rec.record_id_hex).write_bytes(result.payload)
    if raw_count:
        click.echo(f"pairings: {suite.pairing_count - start_count}", err=True)
    if fail_empty and matches == 0:
        raise _NoMatches()


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.Abort:
        return 1
    except _NoMatches:
        return 3
    except SchemeError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except HvekitError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
