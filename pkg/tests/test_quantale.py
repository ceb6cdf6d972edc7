import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlab import catalog, oracles
from qlab.errors import AssocFail, DistribFail, JoinFail, Trivial, UnitFail
from qlab.lattice import build_lattice, chain
from qlab.quantale import (check_quantale, check_quantale_hom, end_quantale, image_subquantale,
                           inverse_table, is_commutative, is_division, is_field, is_prime,
                           is_subquantale, left_ideals, meet_quantale, minimal_left_ideals,
                           quantale_isomorphisms, quantale_violation, truth_values)

from conftest import small_idl_z4


def test_truth_values_is_a_commutative_field(two):
    assert two == truth_values()
    assert is_commutative(two) and is_field(two) and is_division(two)
    assert two.labels == ("bot", "top") and two.labels[two.unit] == "top"


def test_hand_built_idl_z4_matches_catalog(idl_z4):
    Q = small_idl_z4()
    assert next(quantale_isomorphisms(Q, idl_z4), None) is not None
    assert is_commutative(Q)


def test_unit_failure():
    L = chain(2)
    with pytest.raises(UnitFail):
        check_quantale(L, L.meet, L.bottom)


def test_associativity_failure_carries_witness():
    L = build_lattice(["0", "a", "1"], [("0", "a"), ("a", "1")])
    P = [[0, 0, 0], [0, 2, 0], [0, 0, 2]]
    with pytest.raises(AssocFail) as exc:
        check_quantale(L, P, 2)
    assert exc.value.witness == ("a", "a", "1")


def test_distributivity_failure():
    m3 = build_lattice(["bot", "a", "b", "c", "top"],
                       [("bot", x) for x in "abc"] + [(x, "top") for x in "abc"])
    with pytest.raises(DistribFail):
        check_quantale(m3, m3.meet, m3.top)


def test_trivial_lattice_is_rejected():
    with pytest.raises(Trivial):
        check_quantale(chain(1), [[0]], 0)


def test_end_quantale_of_chains(two):
    E2 = end_quantale(chain(2))
    assert len(E2) == 2 and next(quantale_isomorphisms(E2, two), None) is not None
    E3 = end_quantale(chain(3))
    assert len(E3) == 6 and not is_commutative(E3)
    for E in (E2, E3):
        assert E.operators[E.unit] == tuple(range(len(E.carrier)))


def test_end_quantale_product_is_composition():
    E = end_quantale(chain(3))
    for a in E.elements:
        for b in E.elements:
            f, g = E.operators[a], E.operators[b]
            assert E.operators[E.mul(a, b)] == tuple(f[g[x]] for x in range(3))


def test_homomorphisms(two, idl_z4):
    check_quantale_hom(two, two, [0, 1])
    check_quantale_hom(two, idl_z4, [idl_z4.bottom, idl_z4.top])
    with pytest.raises(JoinFail):
        check_quantale_hom(two, two, [1, 0])


def test_subquantales(idl_z4):
    Q = idl_z4
    assert is_subquantale(Q, set(Q.elements))
    assert not is_subquantale(Q, {Q.bottom})
    assert is_subquantale(Q, {Q.bottom, Q.unit})
    h = check_quantale_hom(Q, Q, list(Q.elements))
    assert set(image_subquantale(h)) == set(Q.elements)


def test_prime(two, idl_z4):
    assert is_prime(two) == (True, None)
    ok, (a, b) = is_prime(idl_z4)
    assert not ok and a == b and idl_z4.labels[a] == "(2)"
    assert is_prime(catalog.get("end_chain3"))[0]


def test_prime_agrees_with_definition():
    for Q in catalog.quantales():
        bot = Q.bottom
        brute = all(a == bot or b == bot or any(Q.mul(a, g, b) != bot for g in Q.elements)
                    for a in Q.elements for b in Q.elements)
        assert is_prime(Q)[0] == brute, Q.name


def test_division(two, idl_z4):
    assert inverse_table(two) == {two.top: two.top}
    assert not is_division(idl_z4) and not is_field(idl_z4)
    assert not is_division(meet_quantale(chain(3)))


def test_left_ideals(two, idl_z4):
    assert [set(i.members) for i in left_ideals(two)] == [{0}, {0, 1}]
    assert [i.labelled() for i in minimal_left_ideals(two)] == [("bot", "top")]
    got = [i.labelled() for i in left_ideals(idl_z4)]
    assert got == [("(0)",), ("(0)", "(2)"), ("(0)", "(2)", "(1)")]
    assert [i.labelled() for i in minimal_left_ideals(idl_z4)] == [("(0)", "(2)")]


@pytest.mark.parametrize("name", catalog.names("quantale"))
def test_left_ideals_match_subset_filter(name):
    Q = catalog.get(name)
    sets = [i.members for i in left_ideals(Q)]
    assert sets == oracles.left_ideals_by_filter(Q)
    assert frozenset({Q.bottom}) in sets and frozenset(Q.elements) in sets


SMALL_QUANTALES = [n for n in catalog.names("quantale") if len(catalog.get(n)) <= 8]


@pytest.mark.parametrize("name", SMALL_QUANTALES)
def test_catalog_quantales_distribute_over_all_subsets(name):
    Q = catalog.get(name)
    L = Q.lattice
    for a in Q.elements:
        assert oracles.preserves_all_subset_joins(Q.product[a], L, L)
        assert oracles.preserves_all_subset_joins(Q.product[:, a], L, L)


def _random_table(data, n):
    return data.draw(st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
                              min_size=n, max_size=n))


@settings(max_examples=300, deadline=None)
@given(L=st.sampled_from([L for n in (2, 3, 4) for L in oracles.all_lattices(n)]),
       data=st.data())
def test_random_tables_against_brute_force_laws(L, data):
    """The validator accepts exactly the tables satisfying the laws by brute force."""
    n = len(L)
    P = np.array(_random_table(data, n))
    # bias towards unital tables so the later laws get exercised
    e = data.draw(st.integers(0, n - 1))
    if data.draw(st.booleans()):
        P[e] = np.arange(n)
        P[:, e] = np.arange(n)
    brute = (all(P[P[a, b], c] == P[a, P[b, c]] for a in range(n) for b in range(n)
                 for c in range(n))
             and all(P[e, a] == a == P[a, e] for a in range(n))
             and all(oracles.preserves_all_subset_joins(P[a], L, L)
                     and oracles.preserves_all_subset_joins(P[:, a], L, L) for a in range(n)))
    assert (quantale_violation(L, P, e) is None) == brute
