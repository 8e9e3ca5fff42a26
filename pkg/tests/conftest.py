"""Session-scoped model fixtures shared by the unit and acceptance tests."""

import pytest

from pnh.flats import build_maximal, build_minimal
from pnh.model import Permutonestohedron
from pnh.roots import build_root_system
from pnh.weyl import enumerate_group


def make_model(spec: str, kind: str) -> Permutonestohedron:
    rs = build_root_system(spec)
    weyl = enumerate_group(rs)
    builder = build_minimal if kind == "minimal" else build_maximal
    return Permutonestohedron(builder(rs, weyl), weyl=weyl)


@pytest.fixture(scope="session")
def a2():
    # the two canonical building sets coincide in rank 2
    return make_model("A2", "minimal")


@pytest.fixture(scope="session")
def b2():
    return make_model("B2", "minimal")


@pytest.fixture(scope="session")
def a3_min():
    return make_model("A3", "minimal")


@pytest.fixture(scope="session")
def a3_max():
    return make_model("A3", "maximal")


@pytest.fixture(scope="session")
def b3_min():
    return make_model("B3", "minimal")


@pytest.fixture(scope="session")
def b3_max():
    return make_model("B3", "maximal")


@pytest.fixture(scope="session")
def a13_min():
    return make_model("A1^3", "minimal")


@pytest.fixture(scope="session")
def d4_min():
    return make_model("D4", "minimal")
