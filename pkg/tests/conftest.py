import pytest

from hvekit.groups import ASYMMETRIC, SYMMETRIC, GroupSuite, RandomSource

# bn254 keeps the heavy suites fast; cross-curve checks pin bls12-381 too.
TEST_CURVE = "bn254"


@pytest.fixture(scope="session")
def suite():
    return GroupSuite(TEST_CURVE, SYMMETRIC)


@pytest.fixture(scope="session")
def asym_suite():
    return GroupSuite(TEST_CURVE, ASYMMETRIC)


@pytest.fixture(scope="session")
def bls_suite():
    return GroupSuite("bls12-381", SYMMETRIC)


@pytest.fixture()
def rng():
    return RandomSource.seeded(20240611)


def seeded(seed) -> RandomSource:
    return RandomSource.seeded(seed)
