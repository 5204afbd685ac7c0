import pytest

from tlab.rings import Triple, construct_ring, generic_tower


@pytest.fixture(scope="session")
def tower():
    return generic_tower()


@pytest.fixture(scope="session")
def qt_balanced():
    ring = construct_ring("ratfun:Q")
    t = ring.generators()["t"]
    return Triple(ring, t, t)


@pytest.fixture(scope="session")
def f2_zero():
    ring = construct_ring("Fp:2")
    return Triple(ring, ring.zero, ring.zero)


@pytest.fixture(scope="session")
def zeta10_balanced():
    ring = construct_ring("cyclo:10")
    return Triple.balanced(ring, ring.generators()["q"])


@pytest.fixture(scope="session")
def zeta12_balanced():
    ring = construct_ring("cyclo:12")
    return Triple.balanced(ring, ring.generators()["q"])
