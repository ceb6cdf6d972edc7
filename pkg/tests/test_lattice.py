import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlab import oracles
from qlab.errors import JoinFail, NotALattice, NotAPoset
from qlab.lattice import (JoinMap, atoms, build_lattice, chain, enumerate_join_endomorphisms,
                          enumerate_join_maps, is_atomic_frame, is_join_preserving, join_closure,
                          join_of_set, lattice_isomorphisms, meet_closure, powerset_lattice)

SMALL_LATTICES = [L for n in range(1, 6) for L in oracles.all_lattices(n)]


def test_two_chain():
    L = build_lattice([0, 1], [(0, 1)])
    assert (L.label(L.bottom), L.label(L.top)) == ("0", "1")
    assert L.join[0, 1] == 1 and L.meet[0, 1] == 0


def _points(label):
    return set(label.strip("{}").split(",")) - {""}


def test_boolean_lattice_join_is_union(boolean4):
    L = boolean4
    for a in L.elements:
        for b in L.elements:
            assert _points(L.labels[L.join[a, b]]) == _points(L.labels[a]) | _points(L.labels[b])


def test_missing_join_is_rejected():
    with pytest.raises(NotALattice) as exc:
        build_lattice(["b", "x", "y"], [("b", "x"), ("b", "y")])
    assert set(exc.value.witness) == {"x", "y"}


def test_bad_orders_are_rejected():
    with pytest.raises(NotAPoset):
        build_lattice(["a", "b"], [("a", "b"), ("b", "a")], mode="leq")
    with pytest.raises(NotAPoset):
        build_lattice(["a", "b", "c"], [("a", "b"), ("b", "c")], mode="leq")
    with pytest.raises(NotAPoset):
        build_lattice(["a", "a"], [])
    with pytest.raises(NotAPoset):
        build_lattice(["a"], [("a", "z")])


def test_tables_are_read_only(chain3):
    with pytest.raises(ValueError):
        chain3.join[0, 0] = 1


def test_join_of_set(p3):
    L = p3.carrier
    assert join_of_set(L, []) == L.bottom
    two_chain = chain(2)
    assert join_of_set(two_chain, [0, 1]) == 1
    assert L.labels[join_of_set(L, [L.index("{1}"), L.index("{2}")])] == "{1,2}"


def test_atoms(p3, chain3):
    assert [chain(2).labels[a] for a in atoms(chain(2))] == ["top"]
    assert sorted(p3.carrier.labels[a] for a in atoms(p3.carrier)) == ["{1}", "{2}", "{3}"]
    assert atoms(chain(1)) == []


def test_atomic_frames(p3, chain3):
    assert is_atomic_frame(p3.carrier) == (True, None)
    m3 = build_lattice(["bot", "a", "b", "c", "top"],
                       [("bot", x) for x in "abc"] + [(x, "top") for x in "abc"])
    assert is_atomic_frame(m3) == (False, ("frame-law", "a", ("b", "c")))
    assert is_atomic_frame(chain3) == (False, ("not-atomic", "top"))


@pytest.mark.parametrize("L", SMALL_LATTICES, ids=lambda L: L.name)
def test_binary_frame_law_agrees_with_subset_oracle(L):
    ok, cert = is_atomic_frame(L)
    distributive = cert is None or cert[0] != "frame-law"
    assert distributive == oracles.frame_law_all_subsets(L)


def test_join_preserving_examples(boolean4):
    L = boolean4
    e, a, b, t = (L.index(x) for x in ("{}", "{1}", "{2}", "{1,2}"))
    ident = list(L.elements)
    assert is_join_preserving(ident, L, L)
    assert is_join_preserving([e] * 4, L, L)
    swap = [0] * 4
    swap[e], swap[a], swap[b], swap[t] = e, b, a, t
    assert is_join_preserving(swap, L, L)
    up = [0] * 4
    up[e], up[a], up[b], up[t] = e, t, t, t
    assert is_join_preserving(up, L, L)
    up[t] = a
    assert not is_join_preserving(up, L, L)
    with pytest.raises(JoinFail):
        JoinMap(L, L, tuple(up))


@pytest.mark.parametrize("n,count", [(2, 2), (3, 6), (4, 20)])
def test_endomorphism_counts_of_chains(n, count):
    L = chain(n)
    maps = enumerate_join_endomorphisms(L)
    assert len(maps) == count
    assert sorted(f.values for f in maps) == sorted(oracles.join_maps_by_filter(L, L))


def test_power_set_endomorphisms(p3, boolean4):
    assert len(enumerate_join_endomorphisms(boolean4)) == 16
    values = [f.values for f in enumerate_join_endomorphisms(p3.carrier)]
    assert len(values) == 512
    assert values == sorted(oracles.join_maps_by_filter(p3.carrier, p3.carrier))


@pytest.mark.parametrize("L", SMALL_LATTICES, ids=lambda L: L.name)
def test_enumerator_matches_filter_on_all_small_lattices(L):
    assert enumerate_join_maps(L, L) == sorted(oracles.join_maps_by_filter(L, L))


def test_join_maps_between_different_lattices(chain3, boolean4):
    assert enumerate_join_maps(chain3, boolean4) == sorted(
        oracles.join_maps_by_filter(chain3, boolean4))


def test_lattice_counts_up_to_isomorphism():
    # 1, 1, 1, 2, 5, 15 lattices on 1..6 elements
    assert [len(oracles.all_lattices(n)) for n in range(1, 7)] == [1, 1, 1, 2, 5, 15]


def test_isomorphisms(boolean4):
    other = powerset_lattice(["x", "y"])
    assert len(list(lattice_isomorphisms(boolean4, other))) == 2
    assert next(lattice_isomorphisms(boolean4, chain(4)), None) is None


lattice_strategy = st.sampled_from(SMALL_LATTICES)


@settings(max_examples=200, deadline=None)
@given(L=lattice_strategy, data=st.data())
def test_random_tables_agree_with_subset_oracle(L, data):
    f = data.draw(st.lists(st.integers(0, len(L) - 1), min_size=len(L), max_size=len(L)))
    assert is_join_preserving(f, L, L) == oracles.preserves_all_subset_joins(f, L, L)


@settings(max_examples=200, deadline=None)
@given(L=lattice_strategy, data=st.data())
def test_closures_are_least_closed_supersets(L, data):
    S = set(data.draw(st.lists(st.sampled_from(list(L.elements)), max_size=len(L))))
    J = join_closure(L, S)
    M = meet_closure(L, S)
    assert S <= J and L.bottom in J and S <= M and L.top in M
    assert all(L.join[a, b] in J for a in J for b in J)
    assert all(L.meet[a, b] in M for a in M for b in M)
    bits = oracles.all_subsets_mask(len(L))
    closed = [frozenset(np.flatnonzero(r).tolist()) for r in bits]
    joins = [C for C in closed if L.bottom in C and S <= C
             and all(L.join[a, b] in C for a in C for b in C)]
    assert J == min(joins, key=len)
