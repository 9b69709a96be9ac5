"""Product groups: vector ops, bases, orthogonality, assumption samplers."""

import dataclasses

import pytest

from hvekit.errors import DimensionMismatch, SchemeError
from hvekit.product import (
    SIDE1,
    SIDE2,
    ProductElement,
    check_orthogonal,
    element_from_exponents,
    gen_basis2,
    gen_basis3,
    product_identity,
    sample_bdh,
    sample_p3dh,
    vec_exp,
    vec_mul,
    vec_pair,
    verify_p3dh_wellformed,
)

from conftest import seeded


def _dot(u, v, order):
    return sum(a * b for a, b in zip(u, v)) % order


class TestVectorOps:
    def test_exp_zero_gives_identity(self, suite):
        base = element_from_exponents(suite, SIDE1, (1, 7))
        assert vec_exp(base, 0).is_identity

    def test_exp_one_is_base(self, suite):
        base = element_from_exponents(suite, SIDE1, (1, 7))
        assert vec_exp(base, 1) == base

    def test_exp_matches_exponent_arithmetic(self, suite):
        rng = seeded(20)
        a = rng.scalar(suite.order)
        c = rng.scalar(suite.order)
        base = element_from_exponents(suite, SIDE1, (1, a))
        assert vec_exp(base, c) == element_from_exponents(suite, SIDE1, (c, a * c))

    def test_mul_identity(self, suite):
        x = element_from_exponents(suite, SIDE1, (3, 4))
        assert vec_mul(x, product_identity(suite, SIDE1, 2)) == x

    def test_mul_adds_exponents(self, suite):
        rng = seeded(21)
        b1 = tuple(rng.scalar(suite.order) for _ in range(3))
        b2 = tuple(rng.scalar(suite.order) for _ in range(3))
        lhs = vec_mul(element_from_exponents(suite, SIDE2, b1), element_from_exponents(suite, SIDE2, b2))
        assert lhs == element_from_exponents(suite, SIDE2, tuple(x + y for x, y in zip(b1, b2)))

    def test_dimension_mismatch(self, suite):
        with pytest.raises(DimensionMismatch):
            vec_mul(element_from_exponents(suite, SIDE1, (1, 2)), element_from_exponents(suite, SIDE1, (1, 2, 3)))
        with pytest.raises(DimensionMismatch):
            vec_mul(element_from_exponents(suite, SIDE1, (1, 2)), element_from_exponents(suite, SIDE2, (1, 2)))

    def test_bad_dim_rejected(self, suite):
        with pytest.raises(DimensionMismatch):
            ProductElement(SIDE1, (suite.side1_gen,) * 4)


class TestVecPair:
    def test_orthogonal_unit_vectors(self, suite):
        x = element_from_exponents(suite, SIDE1, (1, 0))
        y = element_from_exponents(suite, SIDE2, (0, 1))
        assert vec_pair(x, y).is_identity

    def test_inner_product_from_trapdoor(self, suite):
        rng = seeded(22)
        a = rng.scalar(suite.order)
        x = element_from_exponents(suite, SIDE1, (1, a))
        y = element_from_exponents(suite, SIDE2, (1, a))
        assert vec_pair(x, y) == suite.gt_generator ** ((1 + a * a) % suite.order)

    def test_random_inner_products(self, suite):
        # spec-level invariant: 100 randomized trials
        rng = seeded(23)
        for dim in (2, 3):
            for _ in range(50):
                u = tuple(rng.scalar(suite.order) for _ in range(dim))
                v = tuple(rng.scalar(suite.order) for _ in range(dim))
                got = vec_pair(element_from_exponents(suite, SIDE1, u), element_from_exponents(suite, SIDE2, v))
                assert got == suite.gt_generator ** _dot(u, v, suite.order)

    def test_side_order_normalized(self, suite):
        x = element_from_exponents(suite, SIDE1, (2, 3))
        y = element_from_exponents(suite, SIDE2, (5, 7))
        assert vec_pair(x, y) == vec_pair(y, x)

    def test_basis2_orthogonality_pair(self, suite):
        basis = gen_basis2(seeded(24), suite)
        assert vec_pair(basis.b2.side1, basis.b12.side2).is_identity


class TestBases:
    def test_basis2_exact_orthogonality(self, suite):
        basis = gen_basis2(seeded(25), suite)
        vecs = {"b11": basis.b11, "b12": basis.b12, "b2": basis.b2}
        ortho = {
            (n1, n2)
            for n1 in vecs
            for n2 in vecs
            if n1 < n2 and check_orthogonal(vecs[n1].side1, vecs[n2].side2)
        }
        assert ortho == {("b12", "b2")}

    def test_basis2_invariant_vectors(self, suite):
        basis = gen_basis2(seeded(26), suite)
        exp = basis.exponent_vectors(suite.order)
        for name, dual in (("b11", basis.b11), ("b12", basis.b12), ("b2", basis.b2)):
            assert dual.side1 == element_from_exponents(suite, SIDE1, exp[name])
            assert dual.side2 == element_from_exponents(suite, SIDE2, exp[name])

    def test_basis3_exact_orthogonality(self, suite):
        basis = gen_basis3(seeded(27), suite)
        vecs = {"b11": basis.b11, "b12": basis.b12, "b2": basis.b2, "b3": basis.b3}
        ortho = {
            (n1, n2)
            for n1 in vecs
            for n2 in vecs
            if n1 < n2 and check_orthogonal(vecs[n1].side1, vecs[n2].side2)
        }
        assert ortho == {("b11", "b3"), ("b12", "b2"), ("b2", "b3")}
        assert not check_orthogonal(basis.b11.side1, basis.b2.side2)

    def test_basis3_invariant_vectors(self, suite):
        basis = gen_basis3(seeded(28), suite)
        exp = basis.exponent_vectors(suite.order)
        for name, dual in (("b11", basis.b11), ("b12", basis.b12), ("b2", basis.b2), ("b3", basis.b3)):
            assert dual.side1 == element_from_exponents(suite, SIDE1, exp[name])

    def test_distinct_trapdoors(self, suite):
        assert gen_basis2(seeded(29), suite).a != gen_basis2(seeded(30), suite).a

    def test_identity_is_orthogonal_to_everything(self, suite):
        basis = gen_basis2(seeded(31), suite)
        assert check_orthogonal(product_identity(suite, SIDE1, 2), basis.b12.side2)

    def test_b11_b12_not_orthogonal(self, suite):
        basis = gen_basis2(seeded(32), suite)
        assert not check_orthogonal(basis.b11.side1, basis.b12.side2)

    def test_public_excludes_trapdoor(self, suite):
        basis = gen_basis3(seeded(33), suite)
        pub = basis.public
        assert not hasattr(pub, "a1") and not hasattr(pub, "a2")

    def test_blinding_invariance(self, suite):
        # multiplying a side-1 element by B2^z never changes its pairing
        # against anything in the span of B12 (dim 2) or {B12, B3} (dim 3)
        rng = seeded(34)
        order = suite.order
        b2d = gen_basis2(rng, suite)
        for _ in range(50):
            x = element_from_exponents(suite, SIDE1, (rng.scalar(order), rng.scalar(order)))
            y = b2d.b12.side2 ** rng.scalar(order)
            blinded = x * b2d.b2.side1 ** rng.scalar(order)
            assert vec_pair(x, y) == vec_pair(blinded, y)
        b3d = gen_basis3(rng, suite)
        for _ in range(50):
            x = element_from_exponents(suite, SIDE1, tuple(rng.scalar(order) for _ in range(3)))
            y = b3d.b12.side2 ** rng.scalar(order) * b3d.b3.side2 ** rng.scalar(order)
            blinded = x * b3d.b2.side1 ** rng.scalar(order)
            assert vec_pair(x, y) == vec_pair(blinded, y)


class TestBdhSampler:
    def test_real_branch_relation(self, suite):
        t = sample_bdh(seeded(35), suite, 0)
        s = t.secrets
        assert suite.pair(t.g_a.side1, t.g_b.side2) ** s.c == t.T
        assert t.T == suite.gt_generator ** (s.a * s.b * s.c % suite.order)

    def test_random_branch_uses_d(self, suite):
        t = sample_bdh(seeded(36), suite, 1)
        s = t.secrets
        assert t.T == suite.gt_generator**s.d
        assert t.T != suite.gt_generator ** (s.a * s.b * s.c % suite.order)

    def test_public_strips_secrets(self, suite):
        assert sample_bdh(seeded(37), suite, 0).public().secrets is None

    def test_requires_symmetric_mode(self, asym_suite):
        with pytest.raises(SchemeError):
            sample_bdh(seeded(38), asym_suite, 0)

    def test_bad_bit(self, suite):
        with pytest.raises(SchemeError):
            sample_bdh(seeded(39), suite, 2)


class TestP3dhSampler:
    def test_real_branch_relation(self, suite):
        t = sample_p3dh(seeded(40), suite, 0)
        s = t.secrets
        # e(T1, g) == e(g,g)^c * e(f, g)^z3 with withheld c, z3
        lhs = suite.pair(t.t1, t.g)
        rhs = (suite.gt_generator**s.c) * suite.pair(t.f, t.g) ** s.z3
        assert lhs == rhs

    def test_wellformed_any_bit(self, suite):
        for bit in (0, 1):
            t = sample_p3dh(seeded(41 + bit), suite, bit)
            # e(g^ab f^z1, g) == e(g^a, g^b) * e(f, g^z1): exponent-free
            lhs = suite.pair(t.p1, t.g)
            rhs = suite.pair(t.g_a, t.g_b) * suite.pair(t.f, t.q1)
            assert lhs == rhs
            assert verify_p3dh_wellformed(t)
            assert verify_p3dh_wellformed(t.public())

    def test_corruption_detected_with_secrets(self, suite):
        t = sample_p3dh(seeded(43), suite, 0)
        junk = t.g ** 123456789
        for name in t.components():
            broken = dataclasses.replace(t, **{name: junk})
            assert not verify_p3dh_wellformed(broken), f"corrupting {name} went undetected"

    def test_exponent_free_scope(self, suite):
        # without secrets, only relations over published values are
        # checkable: p2/q2/t1/t2 corruption is invisible by design
        t = sample_p3dh(seeded(44), suite, 0).public()
        junk = t.g ** 987654321
        for name in ("g", "f", "g_a", "f_a", "g_b", "f_b", "p1", "q1"):
            broken = dataclasses.replace(t, **{name: junk})
            assert not verify_p3dh_wellformed(broken), f"corrupting {name} went undetected"
        for name in ("p2", "q2", "t1", "t2"):
            broken = dataclasses.replace(t, **{name: junk})
            assert verify_p3dh_wellformed(broken), f"{name} is not exponent-free checkable"
