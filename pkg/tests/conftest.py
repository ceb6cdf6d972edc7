import pytest

from qlab import catalog
from qlab.lattice import build_lattice, chain, powerset_lattice
from qlab.qmodule import truth_value_module
from qlab.quantale import check_quantale


@pytest.fixture(scope="session")
def two():
    return catalog.get("two")


@pytest.fixture(scope="session")
def idl_z4():
    return catalog.get("idl_z4")


@pytest.fixture(scope="session")
def chain3():
    return chain(3, "chain3")


@pytest.fixture(scope="session")
def boolean4():
    return powerset_lattice([1, 2], name="p2")


@pytest.fixture(scope="session")
def p3():
    return catalog.get("p3")


@pytest.fixture(scope="session")
def tv_chain2():
    return truth_value_module(chain(2, "chain2"))


@pytest.fixture(scope="session")
def tv_chain3():
    return truth_value_module(chain(3, "chain3"))


def small_idl_z4():
    """The 3-chain bot < a < top with a*a = bot, built by hand."""
    L = build_lattice(["bot", "a", "top"], [("bot", "a"), ("a", "top")])
    P = [[0, 0, 0], [0, 0, 1], [0, 1, 2]]
    return check_quantale(L, P, L.index("top"), "hand_z4")
