"""Exception hierarchy for the toolkit."""


class HvekitError(Exception):
    """Base class for all toolkit errors."""


class SchemeError(HvekitError):
    """Misuse of a scheme API (bad lengths, wrong slot kinds, wrong mode)."""


class DimensionMismatch(SchemeError):
    """Product-group operands of different dimension or side."""


class PayloadTooLarge(SchemeError):
    """Payload exceeds the configured sealing limit."""


class DecodeError(HvekitError):
    """Serialized record could not be decoded."""


class BadMagic(DecodeError):
    pass


class UnsupportedVersion(DecodeError):
    pass


class TruncatedRecord(DecodeError):
    pass


class IntegrityError(DecodeError):
    """Record checksum mismatch (corrupted bytes)."""


class ElementDecodeError(DecodeError):
    """Bytes do not describe a valid group element (off curve / wrong
    subgroup / non-canonical)."""
