"""Encodings from high-level predicates to HVE vectors, plus the plain
evaluators used as test oracles.

All encodings work over the two-symbol attribute alphabet {0, 1}: a
predicate over w fields with per-field domain {1..n} becomes a vector of
n*w slots (2*n*w for ranges), field-major: slot (i, j) of field i and
domain point j lands at flat position (i-1)*n + (j-1).

* comparison (<=): ciphertext sets slot (i, j) = 1 iff j >= b_i; a token
  for bounds a fixes the single slot (i, a_i) to 1.  The mirrored >=
  family flips the ciphertext rule to j <= b_i and fixes (i, lo_i).
* range: concatenation of the <= encoding (upper bounds) and the >=
  encoding (lower bounds); the ciphertext encodes its value twice.
* subset: ciphertext sets the one slot (i, b_i) to 1; a token for
  allowed-sets A fixes every slot outside A_i to 0.

The inner-product encoding is separate: it rewrites patterns/attributes
into length-2l scalar vectors whose inner product is 0 exactly on a
match (with fresh per-slot randomizers on the ciphertext side).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SchemeError
from .groups import RandomSource
from .hve import WILDCARD, AttributeVector, PatternVector


def _check_domain(n: int, w: int):
    if n < 1 or w < 1:
        raise SchemeError("domain size and field count must be >= 1")


def _check_values(n: int, w: int, values) -> tuple[int, ...]:
    values = tuple(int(v) for v in values)
    if len(values) != w:
        raise SchemeError(f"expected {w} field values, got {len(values)}")
    for v in values:
        if not 1 <= v <= n:
            raise SchemeError(f"value {v} outside domain 1..{n}")
    return values


# -- per-field blocks (shared by the full encoders and the CLI) ------------


def le_token_block(n: int, bound: int) -> list:
    """Token block for 'value <= bound': fix slot ``bound`` to 1."""
    return [1 if j == bound else WILDCARD for j in range(1, n + 1)]


def le_ct_block(n: int, value: int) -> list[int]:
    return [1 if j >= value else 0 for j in range(1, n + 1)]


def ge_token_block(n: int, bound: int) -> list:
    return [1 if j == bound else WILDCARD for j in range(1, n + 1)]


def ge_ct_block(n: int, value: int) -> list[int]:
    return [1 if j <= value else 0 for j in range(1, n + 1)]


def subset_token_block(n: int, allowed) -> list:
    return [WILDCARD if j in allowed else 0 for j in range(1, n + 1)]


def subset_ct_block(n: int, value: int) -> list[int]:
    return [1 if j == value else 0 for j in range(1, n + 1)]


# -- conjunctive comparison (<=) -------------------------------------------


@dataclass(frozen=True)
class ComparisonSpec:
    """Conjunction over w fields: value_i <= bounds[i], domain {1..n}."""

    n: int
    w: int
    bounds: tuple[int, ...]

    def __post_init__(self):
        _check_domain(self.n, self.w)
        object.__setattr__(self, "bounds", _check_values(self.n, self.w, self.bounds))


def encode_comparison_token(spec: ComparisonSpec) -> PatternVector:
    slots = []
    for a in spec.bounds:
        slots.extend(le_token_block(spec.n, a))
    return PatternVector(tuple(slots))


def encode_comparison_ciphertext(n: int, w: int, values) -> AttributeVector:
    _check_domain(n, w)
    values = _check_values(n, w, values)
    out = []
    for b in values:
        out.extend(le_ct_block(n, b))
    return AttributeVector(tuple(out))


def eval_comparison(spec: ComparisonSpec, values) -> bool:
    values = _check_values(spec.n, spec.w, values)
    return all(b <= a for a, b in zip(spec.bounds, values))


# -- mirrored comparison (>=) ----------------------------------------------


@dataclass(frozen=True)
class GeSpec:
    """Conjunction over w fields: value_i >= bounds[i]."""

    n: int
    w: int
    bounds: tuple[int, ...]

    def __post_init__(self):
        _check_domain(self.n, self.w)
        object.__setattr__(self, "bounds", _check_values(self.n, self.w, self.bounds))


def encode_ge_token(spec: GeSpec) -> PatternVector:
    slots = []
    for a in spec.bounds:
        slots.extend(ge_token_block(spec.n, a))
    return PatternVector(tuple(slots))


def encode_ge_ciphertext(n: int, w: int, values) -> AttributeVector:
    _check_domain(n, w)
    values = _check_values(n, w, values)
    out = []
    for b in values:
        out.extend(ge_ct_block(n, b))
    return AttributeVector(tuple(out))


def eval_ge(spec: GeSpec, values) -> bool:
    values = _check_values(spec.n, spec.w, values)
    return all(b >= a for a, b in zip(spec.bounds, values))


# -- conjunctive range ------------------------------------------------------


@dataclass(frozen=True)
class RangeSpec:
    """Conjunction over w fields: lo_i <= value_i <= hi_i."""

    n: int
    w: int
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        _check_domain(self.n, self.w)
        ivs = tuple((int(lo), int(hi)) for lo, hi in self.intervals)
        if len(ivs) != self.w:
            raise SchemeError(f"expected {self.w} intervals, got {len(ivs)}")
        for lo, hi in ivs:
            if not (1 <= lo <= hi <= self.n):
                raise SchemeError(f"bad interval [{lo}, {hi}] for domain 1..{self.n}")
        object.__setattr__(self, "intervals", ivs)


def encode_range_token(spec: RangeSpec) -> PatternVector:
    le_part = encode_comparison_token(ComparisonSpec(spec.n, spec.w, tuple(hi for _, hi in spec.intervals)))
    ge_part = encode_ge_token(GeSpec(spec.n, spec.w, tuple(lo for lo, _ in spec.intervals)))
    return PatternVector(le_part.slots + ge_part.slots)


def encode_range_ciphertext(n: int, w: int, values) -> AttributeVector:
    le_part = encode_comparison_ciphertext(n, w, values)
    ge_part = encode_ge_ciphertext(n, w, values)
    return AttributeVector(le_part.values + ge_part.values)


def eval_range(spec: RangeSpec, values) -> bool:
    values = _check_values(spec.n, spec.w, values)
    return all(lo <= b <= hi for (lo, hi), b in zip(spec.intervals, values))


# -- conjunctive subset ------------------------------------------------------


@dataclass(frozen=True)
class SubsetSpec:
    """Conjunction over w fields: value_i in sets[i] (subsets of {1..n}).

    Empty sets are allowed; their block fixes every slot to 0 and can
    never match (each ciphertext block carries exactly one 1)."""

    n: int
    w: int
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        _check_domain(self.n, self.w)
        sets = tuple(frozenset(int(v) for v in s) for s in self.sets)
        if len(sets) != self.w:
            raise SchemeError(f"expected {self.w} sets, got {len(sets)}")
        for s in sets:
            if any(not 1 <= v <= self.n for v in s):
                raise SchemeError(f"set {sorted(s)} outside domain 1..{self.n}")
        object.__setattr__(self, "sets", sets)


def encode_subset_token(spec: SubsetSpec) -> PatternVector:
    slots = []
    for allowed in spec.sets:
        slots.extend(subset_token_block(spec.n, allowed))
    return PatternVector(tuple(slots))


def encode_subset_ciphertext(n: int, w: int, values) -> AttributeVector:
    _check_domain(n, w)
    values = _check_values(n, w, values)
    out = []
    for b in values:
        out.extend(subset_ct_block(n, b))
    return AttributeVector(tuple(out))


def eval_subset(spec: SubsetSpec, values) -> bool:
    values = _check_values(spec.n, spec.w, values)
    return all(b in s for s, b in zip(spec.sets, values))


# -- conjunctive equality ----------------------------------------------------


def encode_equality(pattern: PatternVector) -> PatternVector:
    """Equality conjunctions are native HVE patterns; identity passthrough."""
    return pattern


# -- inner-product encoding --------------------------------------------------


def ipe_encode_token(pattern: PatternVector, order: int) -> tuple[int, ...]:
    """Pattern -> length-2l scalar vector: (1, sigma_i) per fixed slot,
    (0, 0) per wildcard."""
    if pattern.has_delegatable:
        raise SchemeError("inner-product encoding has no delegatable slots")
    out = []
    for s in pattern.slots:
        if s is WILDCARD:
            out.extend((0, 0))
        else:
            out.extend((1, s % order))
    return tuple(out)


def ipe_encode_ciphertext(rng: RandomSource, attrs: AttributeVector, order: int) -> tuple[int, ...]:
    """Attributes -> length-2l scalar vector (-r_i x_i, r_i) with fresh
    randomizers, so the inner product with an encoded pattern telescopes
    to sum_i r_i (sigma_i - x_i)."""
    out = []
    for x in attrs.values:
        r = rng.scalar(order)
        out.extend(((-r * x) % order, r))
    return tuple(out)


def ipe_inner_product(u, v, order: int) -> int:
    if len(u) != len(v):
        raise SchemeError("inner product needs equal-length vectors")
    return sum(a * b for a, b in zip(u, v)) % order
