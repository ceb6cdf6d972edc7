import pytest

from qlab import catalog
from qlab import primitivity as pr
from qlab.errors import HypothesisUnmet, NoBasis, SearchBoundExceeded, TheoremViolation
from qlab.lattice import chain
from qlab.qmodule import are_isomorphic_modules, is_simple, self_module, truth_value_module
from qlab.quantale import check_quantale, is_commutative, is_field, is_prime, meet_quantale
from qlab.reports import PASS, VACUOUS

QUANTALES = catalog.names("quantale")


@pytest.mark.parametrize("name", QUANTALES)
def test_closures_satisfy_their_laws(name):
    Q = catalog.get(name)
    for c in pr.enumerate_compatible_closures(Q):
        assert pr.closure_violation(Q, c.table) is None
        M = pr.quotient_module(Q, c)
        assert len(M) == len(c.fixed_points)


def test_closure_bound():
    with pytest.raises(SearchBoundExceeded):
        pr.enumerate_compatible_closures(catalog.get("end_p2"), bound=8)


def test_truth_values_simple_modules(two):
    found = pr.enumerate_simple_modules(two)
    assert len(found) == 1 and found[0].kind == pr.STRONG
    assert are_isomorphic_modules(found[0].module, self_module(two))
    ok, w = pr.is_strongly_primitive(two)
    assert ok and are_isomorphic_modules(w.module, self_module(two))


def test_idl_z4_has_no_faithful_simple_module(idl_z4):
    found = pr.enumerate_simple_modules(idl_z4)
    assert found and all(w.kind == pr.UNFAITHFUL for w in found)
    a = idl_z4.index("(2)")
    assert all((w.module.action[a] == w.module.bottom).all() for w in found)
    assert pr.is_primitive(idl_z4) == (False, None)


def test_two_element_meet_quantale_has_one_simple_module():
    Q = meet_quantale(chain(2))
    assert len(pr.enumerate_simple_modules(Q)) == 1


def test_idl_m2f2_is_primitive():
    assert pr.is_primitive(catalog.get("idl_m2f2"))[0]


def test_simple_modules_of_a_non_prime_meet_quantale():
    found = pr.enumerate_simple_modules(catalog.get("meet_chain3"))
    assert sorted(w.kind for w in found) == [pr.FAITHFUL, pr.UNFAITHFUL]


@pytest.mark.parametrize("name", QUANTALES)
def test_primitive_implies_prime(name):
    rep = pr.verify_primitive_implies_prime(catalog.get(name))
    assert rep.verdict in (PASS, VACUOUS)
    if pr.is_primitive(catalog.get(name))[0]:
        assert rep.verdict == PASS and is_prime(catalog.get(name))[0]


def test_primitive_implies_prime_traces_gamma(two):
    rep = pr.verify_primitive_implies_prime(catalog.get("end_chain3"))
    traced = [law for law in rep.laws if law.law == "a*gamma*b != bottom"]
    assert len(traced) == 25 and all(law.status == PASS for law in traced)
    assert {"alpha", "beta", "gamma", "m", "n"} <= set(traced[0].witness)
    assert pr.verify_primitive_implies_prime(two).verdict == PASS


def test_vacuous_for_non_primitive(idl_z4):
    assert pr.verify_primitive_implies_prime(idl_z4).verdict == VACUOUS
    assert pr.verify_minimal_ideal_theorem(idl_z4).verdict == VACUOUS


@pytest.mark.parametrize("name", QUANTALES)
def test_minimal_ideal_theorem(name):
    assert pr.verify_minimal_ideal_theorem(catalog.get(name)).ok


def test_minimal_ideal_on_truth_values(two):
    rep = pr.verify_minimal_ideal_theorem(two)
    assert rep.verdict == PASS
    assert ("minimal-left-ideal", ("bot", "top")) in rep.witnesses


@pytest.mark.parametrize("name", QUANTALES)
def test_field_theorem(name):
    Q = catalog.get(name)
    rep = pr.verify_comm_strongly_primitive_field(Q)
    assert rep.ok
    if is_commutative(Q) and not is_field(Q):
        assert not pr.is_strongly_primitive(Q)[0]
    if not is_commutative(Q):
        assert rep.verdict == VACUOUS


def test_field_theorem_on_truth_values(two):
    rep = pr.verify_comm_strongly_primitive_field(two)
    assert rep.verdict == PASS
    assert ("inverse-table", {"top": "top"}) in rep.witnesses


def test_verifier_reports_a_broken_theorem():
    """A quantale posing as strongly primitive but lacking inverses fails loudly."""
    Q = meet_quantale(chain(3))
    fake = pr.SimpleModuleWitness(self_module(Q), pr.STRONG)
    original = pr.is_strongly_primitive
    try:
        pr.is_strongly_primitive = lambda Q, bound=16: (True, fake)
        with pytest.raises(TheoremViolation) as exc:
            pr.verify_comm_strongly_primitive_field(Q)
        assert exc.value.report.verdict == "fail"
    finally:
        pr.is_strongly_primitive = original


# -- bases -------------------------------------------------------------------------

def test_weak_bases(p3, tv_chain3, tv_chain2):
    B = pr.find_weak_basis(p3)
    assert sorted(B.labelled()) == ["{1}", "{2}", "{3}"]
    assert [b.labelled() for b in pr.all_weak_bases(p3)] == [("{1}", "{2}", "{3}")]
    assert pr.find_weak_basis(tv_chain3) is None
    assert pr.find_weak_basis(tv_chain2).labelled() == ("top",)


def test_representation_counts_by_brute_force(p3):
    from itertools import product
    from qlab.lattice import join_of_set

    T = pr.find_weak_basis(p3).members
    Q = p3.quantale
    counts = pr.representation_counts(p3, T)
    nz = [a for a in Q.elements if a != Q.bottom]
    brute = [0] * len(p3)
    for coeffs in product([None] + nz, repeat=len(T)):
        brute[join_of_set(p3.carrier, [p3.act(a, t) for a, t in zip(coeffs, T) if a])] += 1
    assert counts.tolist() == brute


def test_basis_assignment(p3):
    B = pr.find_weak_basis(p3)
    L = p3.carrier
    ident = pr.extend_basis_assignment(p3, B, list(B.members))
    assert ident.values == tuple(p3.elements)
    rot = pr.extend_basis_assignment(p3, B, [L.index(x) for x in ("{2}", "{3}", "{1}")])
    assert L.labels[rot(L.index("{1,3}"))] == "{1,2}"
    zero = pr.extend_basis_assignment(p3, B, [L.bottom] * 3)
    assert set(zero.values) == {L.bottom}


def test_completable(p3, tv_chain3):
    L = p3.carrier
    ok, B = pr.completable_to_basis(p3, {L.index("{1}")})
    assert ok and sorted(B.labelled()) == ["{1}", "{2}", "{3}"]
    assert pr.completable_to_basis(p3, {L.index("{1,2}")}) == (False, None)
    assert pr.completable_to_basis(p3, set())[0]
    assert pr.completable_to_basis(tv_chain3, set()) == (False, None)
    with pytest.raises(NoBasis):
        pr.completable_sets(tv_chain3)


# -- operator quantales --------------------------------------------------------------

def test_density_of_end_q(p3):
    D = catalog.get("endq_p3")
    assert pr.is_dense(D) == (True, None)
    assert pr.is_weakly_dense(D) == (True, None)
    S = catalog.get("scalars_p3")
    ok, (t, m) = pr.is_weakly_dense(S)
    assert not ok and (p3.labels[t], p3.labels[m]) == ("{1}", "{2}")
    assert pr.is_weakly_dense(catalog.get("endq_chain2"))[0]


def test_operator_set_must_be_a_subquantale(p3):
    from qlab.errors import InvariantFail

    zero = tuple([p3.bottom] * len(p3))
    with pytest.raises(InvariantFail):
        pr.OperatorQuantale(p3, [zero])


def test_dense_implies_weakly_dense(p3, tv_chain3):
    rep = pr.verify_dense_implies_weakly_dense(catalog.get("endq_p3"))
    assert rep.verdict == PASS
    with pytest.raises(HypothesisUnmet):
        pr.verify_dense_implies_weakly_dense(pr.full_operator_quantale(tv_chain3))


def test_dense_implies_weakly_dense_needs_division_quantale():
    Q = catalog.get("meet_chain3")
    with pytest.raises(HypothesisUnmet):
        pr.verify_dense_implies_weakly_dense(pr.full_operator_quantale(self_module(Q)))


@pytest.mark.parametrize("name", ["endq_p2", "endq_chain2", "endq_chain3", "endq_m3"])
def test_density_part1(name):
    assert pr.density_theorem_part1(catalog.get(name)).verdict == PASS


def test_density_part1_needs_weak_density():
    with pytest.raises(HypothesisUnmet):
        pr.density_theorem_part1(catalog.get("scalars_p3"))


def test_density_part2_on_truth_values(two):
    rep = pr.density_theorem_part2(two, witness=self_module(two))
    assert rep.verdict == PASS
    assert all(law.status == PASS for law in rep.laws)


def test_density_part2_via_ring_witness():
    from qlab import rings

    Q = catalog.get("idl_m2f2")
    S = rings.sub_module_over_idl(catalog.get("f2sq"), Q)
    assert pr.density_theorem_part2(Q, witness=S).verdict == PASS


def test_density_part2_needs_strong_primitivity(idl_z4):
    with pytest.raises(HypothesisUnmet):
        pr.density_theorem_part2(idl_z4)


# -- the independence counterexample --------------------------------------------------

def test_counterexample(p3):
    rep = pr.counterexample_independent_not_completable(p3)
    assert rep.verdict == PASS


def test_relaxed_targets_have_homs(p3):
    L = p3.carrier
    i = L.index
    assert pr.module_homs_with(p3, [(i("{1,2}"), i("{1,2}")), (i("{1}"), i("{1}"))])
    homs = pr.module_homs_with(p3, [(i("{1,2}"), i("{2}")), (i("{1}"), i("{}"))])
    meet2 = tuple(i("{2}") if "2" in lab else i("{}") for lab in L.labels)
    assert meet2 in homs


def test_quotient_module_is_simple_when_reported(two):
    for name in QUANTALES:
        for w in pr.enumerate_simple_modules(catalog.get(name)):
            assert is_simple(w.module)[0]


def test_truth_value_module_over_hand_built_two_is_strongly_faithful():
    L = chain(2)
    Q = check_quantale(L, L.meet, L.top)
    M = truth_value_module(chain(2), Q)
    assert pr.faithfulness_kind(M) == pr.STRONG
