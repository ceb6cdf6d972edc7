"""Primitive quantales, weak bases and dense operator quantales.

Simple modules are searched through compatible closure operators on the
quantale.  A simple module M is generated by any nonzero m, so
``alpha -> alpha.m`` is an equivariant join-surjection Q -> M.  Composing it
with its right adjoint gives a closure operator c on Q with
``c(alpha * c(beta)) = c(alpha * beta)``, and M is isomorphic to the fixed
points of c with join ``c(x v y)`` and action ``c(alpha * x)``.  Running
over all such c therefore finds every simple module up to isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import HypothesisUnmet, InvariantFail, NoBasis, SearchBoundExceeded
from .lattice import (FiniteLattice, enumerate_join_endomorphisms, join_of_set, meet_closure,
                      meet_of_set)
from .qmodule import (are_isomorphic_modules, check_module, check_module_hom, end_q_quantale,
                      evaluation_module, generated_submodule, is_equivariant, is_faithful, is_simple,
                      is_strongly_faithful, self_module, submodule_as_module)
from .quantale import (canonical_sets, check_quantale_hom, closure_family,
                       find_quantale_isomorphism, inverse_table, is_commutative, is_field,
                       is_prime, is_subquantale, minimal_left_ideals, operator_index,
                       operator_quantale)
from .reports import TheoremReport

CLOSURE_BOUND = 16
BASIS_BOUND = 8

STRONG, FAITHFUL, UNFAITHFUL = "strongly-faithful", "faithful", "unfaithful"


@dataclass(frozen=True)
class CompatibleClosure:
    quantale: object
    table: tuple

    @property
    def fixed_points(self):
        return [x for x, y in enumerate(self.table) if x == y]


def closure_violation(Q, c):
    """Name of the first closure/compatibility law ``c`` breaks, or None."""
    c = np.asarray(c)
    leq = Q.lattice.leq
    if not leq[np.arange(len(Q)), c].all():
        return "inflationary"
    if (c[c] != c).any():
        return "idempotent"
    if not (leq <= leq[c[:, None], c[None, :]]).all():
        return "monotone"
    if (c[Q.product[:, c]] != c[Q.product]).any():
        return "compatible"
    return None


def closure_from_family(Q, family):
    """``c(x)`` = meet of the members of a meet-closed family lying above x."""
    L = Q.lattice
    fam = sorted(family)
    return tuple(meet_of_set(L, [f for f in fam if L.leq[x, f]]) for x in L.elements)


def enumerate_compatible_closures(Q, bound=CLOSURE_BOUND):
    """All compatible closure operators, via their meet-closed fixed-point families."""
    if len(Q) > bound:
        raise SearchBoundExceeded(f"closure search over {len(Q)} elements exceeds bound {bound}")
    L = Q.lattice
    families = closure_family(list(L.elements), lambda s: meet_closure(L, s),
                              frozenset({L.top}))
    out = []
    for fam in families:
        c = closure_from_family(Q, fam)
        if closure_violation(Q, c) is None:
            out.append(CompatibleClosure(Q, c))
    return out


def quotient_module(Q, closure):
    c = np.asarray(closure.table)
    fix = closure.fixed_points
    pos = {x: i for i, x in enumerate(fix)}
    L = Q.lattice
    carrier = FiniteLattice.from_leq([L.labels[x] for x in fix], L.leq[np.ix_(fix, fix)],
                                     f"Fix({Q.name})")
    action = [[pos[int(c[Q.product[a, x]])] for x in fix] for a in Q.elements]
    return check_module(Q, carrier, action, f"{Q.name}/c")


def faithfulness_kind(M):
    if is_strongly_faithful(M)[0]:
        return STRONG
    if is_faithful(M)[0]:
        return FAITHFUL
    return UNFAITHFUL


@dataclass(frozen=True)
class SimpleModuleWitness:
    module: object
    kind: str
    origin: CompatibleClosure | None = None


def enumerate_simple_modules(Q, bound=CLOSURE_BOUND):
    """Every simple Q-module up to isomorphism, with its faithfulness level."""
    out = []
    for c in enumerate_compatible_closures(Q, bound):
        if len(c.fixed_points) < 2:
            continue
        M = quotient_module(Q, c)
        if not is_simple(M)[0]:
            continue
        if any(are_isomorphic_modules(M, w.module) for w in out):
            continue
        out.append(SimpleModuleWitness(M, faithfulness_kind(M), c))
    return out


def is_primitive(Q, bound=CLOSURE_BOUND):
    for w in enumerate_simple_modules(Q, bound):
        if w.kind in (STRONG, FAITHFUL):
            return True, w
    return False, None


def is_strongly_primitive(Q, bound=CLOSURE_BOUND):
    for w in enumerate_simple_modules(Q, bound):
        if w.kind == STRONG:
            return True, w
    return False, None


def verify_primitive_implies_prime(Q, bound=CLOSURE_BOUND):
    """Primitive quantales are prime; for every nonzero pair the proof's gamma is exhibited."""
    rep = TheoremReport("primitive-implies-prime", Q.name)
    primitive, w = is_primitive(Q, bound)
    if not primitive:
        return rep.vacuous("not primitive")
    M = w.module
    rep.witnesses.append(("witness-module", M.labels))
    prime, pair = is_prime(Q)
    rep.check("prime", prime, pair and tuple(Q.labels[x] for x in pair))
    bot = Q.bottom
    traced = 0
    for a, b in product(Q.elements, repeat=2):
        if a == bot or b == bot:
            continue
        m = next(x for x in M.elements if M.act(a, x) != M.bottom)
        n = next(x for x in M.elements if M.act(b, x) != M.bottom)
        g = next((g for g in Q.elements if M.act(g, M.act(b, n)) == m), None)
        if g is None:
            rep.check("gamma exists", False, (Q.labels[a], Q.labels[b]))
            continue
        ok = Q.mul(a, g, b) != bot and M.act(Q.mul(a, g, b), n) == M.act(a, m)
        rep.check("a*gamma*b != bottom", ok,
                  {"alpha": Q.labels[a], "beta": Q.labels[b], "gamma": Q.labels[g],
                   "m": M.labels[m], "n": M.labels[n]})
        traced += 1
    rep.note("pairs traced", traced)
    return rep.done()


def verify_minimal_ideal_theorem(Q, bound=CLOSURE_BOUND):
    """A prime quantale with a minimal left ideal I is primitive, witnessed by I itself."""
    rep = TheoremReport("prime-with-minimal-left-ideal-is-primitive", Q.name)
    if not is_prime(Q)[0]:
        return rep.vacuous("not prime")
    minimal = minimal_left_ideals(Q)
    if not minimal:
        return rep.vacuous("no minimal left ideal")
    S = self_module(Q)
    for ideal in minimal:
        I = submodule_as_module(S, ideal.members, f"{Q.name}:ideal")
        rep.check("ideal module faithful", is_faithful(I)[0], ideal.labelled())
        rep.check("ideal module simple", is_simple(I)[0], ideal.labelled())
        rep.witnesses.append(("minimal-left-ideal", ideal.labelled()))
    rep.check("closure search agrees: primitive", is_primitive(Q, bound)[0])
    return rep.done()


def verify_comm_strongly_primitive_field(Q, bound=CLOSURE_BOUND):
    """Commutative strongly primitive quantales are fields; the proof's delta is traced."""
    rep = TheoremReport("commutative-strongly-primitive-is-field", Q.name)
    if not is_commutative(Q):
        return rep.vacuous("not commutative")
    strong, w = is_strongly_primitive(Q, bound)
    if not strong:
        rep.note("contrapositive: not strongly primitive", {"field": is_field(Q)})
        return rep.vacuous("not strongly primitive")
    M = w.module
    m = next(x for x in M.elements if x != M.bottom)
    for a in Q.elements:
        if a == Q.bottom:
            continue
        d = next((d for d in Q.elements if M.act(d, M.act(a, m)) == m), None)
        rep.check("delta*alpha = e", d is not None and Q.mul(d, a) == Q.unit,
                  {"alpha": Q.labels[a], "delta": d is not None and Q.labels[d]})
    inv = inverse_table(Q)
    rep.check("field", inv is not None and is_commutative(Q))
    if inv is not None:
        rep.witnesses.append(("inverse-table", {Q.labels[a]: Q.labels[b] for a, b in inv.items()}))
    return rep.done()


# -- weak bases ------------------------------------------------------------

@dataclass(frozen=True)
class WeakBasis:
    module: object
    members: tuple
    finite_only: bool = True

    def labelled(self):
        return tuple(self.module.labels[t] for t in self.members)


def representation_counts(M, T):
    """Number of ways to write each m as a join of ``alpha_t . t`` with nonzero alpha.

    A representation is a subset of T together with one nonzero coefficient
    per chosen member.
    """
    J = M.carrier.join
    nz = [a for a in M.quantale.elements if a != M.quantale.bottom]
    counts = np.zeros(len(M), dtype=np.int64)
    counts[M.bottom] = 1
    for t in T:
        new = counts.copy()
        for a in nz:
            np.add.at(new, J[:, M.act(a, t)], counts)
        counts = new
    return counts


def representation_count(M, T, m):
    return int(representation_counts(M, T)[m])


def _check_basis_bound(M, bound):
    if len(M) > bound:
        raise SearchBoundExceeded(f"basis search over {len(M)} elements exceeds bound {bound}")


def all_weak_bases(M, bound=BASIS_BOUND, finite_only=True):
    """All weak bases, by size then lexicographically.

    In a finite module every join is finite, so ``finite_only`` does not
    change the answer; it is carried into the result.
    """
    _check_basis_bound(M, bound)
    return [WeakBasis(M, T, finite_only)
            for r in range(len(M) + 1)
            for T in combinations(M.elements, r)
            if (representation_counts(M, T) == 1).all()]


def find_weak_basis(M, bound=BASIS_BOUND, finite_only=True):
    _check_basis_bound(M, bound)
    for r in range(len(M) + 1):
        for T in combinations(M.elements, r):
            if (representation_counts(M, T) == 1).all():
                return WeakBasis(M, T, finite_only)
    return None


def _coefficient_tuples(M, k):
    nz = [a for a in M.quantale.elements if a != M.quantale.bottom]
    return product([None] + nz, repeat=k)


def decompose(M, basis, m):
    """The unique coefficients (``None`` = absent) writing m over the basis."""
    for coeffs in _coefficient_tuples(M, len(basis.members)):
        parts = [M.act(a, t) for a, t in zip(coeffs, basis.members) if a is not None]
        if join_of_set(M.carrier, parts) == m:
            return coeffs
    raise InvariantFail("element has no representation over the basis", (M.labels[m],))


def extend_basis_assignment(M, basis, targets):
    """The module endomorphism sending each basis member to the matching target."""
    T = basis.members
    if len(targets) != len(T):
        raise ValueError("need one target per basis member")
    values = [None] * len(M)
    for coeffs in _coefficient_tuples(M, len(T)):
        chosen = [(a, t, y) for a, t, y in zip(coeffs, T, targets) if a is not None]
        v = join_of_set(M.carrier, [M.act(a, t) for a, t, _ in chosen])
        w = join_of_set(M.carrier, [M.act(a, y) for a, _, y in chosen])
        if values[v] is not None and values[v] != w:
            raise InvariantFail("basis representation is not unique", (M.labels[v],))
        values[v] = w
    return check_module_hom(M, M, values)


def completable_to_basis(M, S, bound=BASIS_BOUND):
    S = set(S)
    for B in all_weak_bases(M, bound):
        if S <= set(B.members):
            return True, B
    return False, None


# -- operator quantales ------------------------------------------------------

class OperatorQuantale:
    """A subquantale D of End_Q(M), stored as value tables over M's carrier."""

    def __init__(self, module, maps, name=""):
        self.module = module
        self.maps = tuple(sorted({tuple(int(v) for v in f) for f in maps}))
        self.name = name or f"D({module.name})"
        E = end_q_quantale(module)
        try:
            idx = [operator_index(E, f) for f in self.maps]
        except ValueError:
            raise InvariantFail("operator is not a module endomorphism") from None
        if not is_subquantale(E, idx):
            raise InvariantFail("operator set is not a subquantale of End_Q(M)")
        self._quantale = None

    def __len__(self):
        return len(self.maps)

    def quantale(self):
        if self._quantale is None:
            self._quantale = operator_quantale(self.module.carrier, self.maps, self.name)
        return self._quantale


def full_operator_quantale(M):
    return OperatorQuantale(M, end_q_quantale(M).operators, f"End_Q({M.name})")


def is_weakly_dense(D):
    M = D.module
    F = np.array(D.maps, dtype=np.int64)
    for t in M.elements:
        if t == M.bottom:
            continue
        reach = set(F[:, t].tolist())
        missing = [m for m in M.elements if m not in reach]
        if missing:
            return False, (t, missing[0])
    return True, None


def completable_sets(M, bound=BASIS_BOUND):
    """Every subset of some basis, the empty set included."""
    bases = all_weak_bases(M, bound)
    if not bases:
        raise NoBasis(f"{M.name} has no basis")
    sets = {frozenset(s) for B in bases for r in range(len(B.members) + 1)
            for s in combinations(B.members, r)}
    return canonical_sets(sets)


def is_dense(D, bound=BASIS_BOUND):
    M = D.module
    F = np.array(D.maps, dtype=np.int64)
    for S in completable_sets(M, bound):
        ts = sorted(S)
        hit = {tuple(row) for row in F[:, ts].tolist()}
        if len(hit) < len(M) ** len(ts):
            targets = next(p for p in product(M.elements, repeat=len(ts)) if p not in hit)
            return False, (tuple(ts), targets)
    return True, None


def verify_dense_implies_weakly_dense(D, bound=BASIS_BOUND):
    M = D.module
    Q = M.quantale
    rep = TheoremReport("dense-implies-weakly-dense", D.name)
    inv = inverse_table(Q)
    if inv is None:
        raise HypothesisUnmet(f"{Q.name} is not a division quantale")
    basis = find_weak_basis(M, bound)
    if basis is None:
        raise HypothesisUnmet(f"{M.name} has no basis")
    dense, _ = is_dense(D, bound)
    if not dense:
        return rep.vacuous("not dense")
    weak, wit = is_weakly_dense(D)
    rep.check("weakly dense", weak, wit and tuple(M.labels[x] for x in wit))
    T = basis.members
    traced = 0
    for t in M.elements:
        if t == M.bottom:
            continue
        coeffs = decompose(M, basis, t)
        used = [j for j, a in enumerate(coeffs) if a is not None]
        jbar = used[0]
        a_inv = inv[coeffs[jbar]]
        for m in M.elements:
            want = {T[j]: (M.act(a_inv, m) if j == jbar else M.bottom) for j in used}
            f = next((f for f in D.maps if all(f[x] == y for x, y in want.items())), None)
            ok = f is not None and f[t] == m
            rep.check("proof's operator hits target", ok, (M.labels[t], M.labels[m]))
            traced += 1
    rep.note("pairs traced", traced)
    return rep.done()


def density_theorem_part1(D):
    """A weakly dense operator quantale acts strongly faithfully and simply on M."""
    rep = TheoremReport("density-part-1", D.name)
    weak, wit = is_weakly_dense(D)
    if not weak:
        raise HypothesisUnmet(f"{D.name} is not weakly dense")
    E = D.quantale()
    EM = evaluation_module(E)
    rep.check("evaluation module strongly faithful", is_strongly_faithful(EM)[0])
    simple, sub = is_simple(EM)
    rep.check("evaluation module simple", simple, sub)
    rep.witnesses.append(("witness-module", EM.labels))
    return rep.done()


def density_theorem_part2(Q, witness=None, bound=CLOSURE_BOUND):
    """Embed a strongly primitive Q as a weakly dense operator quantale.

    ``psi(alpha) = alpha . -`` lands in the endomorphisms of M as a module
    over End_Q(M); its image is checked weakly dense and isomorphic to Q.
    """
    rep = TheoremReport("density-part-2", Q.name)
    if witness is None:
        strong, w = is_strongly_primitive(Q, bound)
        if not strong:
            raise HypothesisUnmet(f"{Q.name} is not strongly primitive")
        witness = w.module
    M = witness
    E = end_q_quantale(M)
    EM = evaluation_module(E)
    rows = [tuple(int(v) for v in M.action[a]) for a in Q.elements]
    rep.check("psi(alpha) is End_Q(M)-equivariant", all(is_equivariant(EM, r) for r in rows))
    EE = end_q_quantale(EM)
    psi = check_quantale_hom(Q, EE, [operator_index(EE, r) for r in rows])
    rep.check("psi injective", len(set(psi.values)) == len(Q))
    D = OperatorQuantale(EM, rows, f"Im(psi:{Q.name})")
    weak, wit = is_weakly_dense(D)
    rep.check("image weakly dense", weak, wit and tuple(M.labels[x] for x in wit))
    DQ = D.quantale()
    iso = find_quantale_isomorphism(Q, DQ)
    rep.check("Q isomorphic to image", iso is not None)
    psi_iso = [DQ.lattice.index(_label(M, r)) for r in rows]
    rep.check("psi is the isomorphism",
              (np.asarray(psi_iso)[Q.product] == DQ.product[np.ix_(psi_iso, psi_iso)]).all()
              and psi_iso[Q.unit] == DQ.unit)
    if weak:
        back = density_theorem_part1(D)
        rep.check("image strongly primitive (part 1)", back.ok)
    rep.witnesses.append(("witness-module", M.labels))
    rep.witnesses.append(("End_Q(M) size", len(E)))
    return rep.done()


def _label(M, row):
    return "[" + ",".join(M.labels[v] for v in row) + "]"


# -- the completable-to-basis counterexample ---------------------------------

def module_homs_with(M, constraints):
    """All module endomorphisms f with ``f(x) = y`` for each (x, y) in constraints."""
    out = []
    for f in enumerate_join_endomorphisms(M.carrier):
        if all(f.values[x] == y for x, y in constraints) and is_equivariant(M, f.values):
            out.append(f.values)
    return out


def counterexample_independent_not_completable(M=None):
    """Two independent elements of P({1,2,3}) that no endomorphism moves freely."""
    from .lattice import powerset_lattice
    from .qmodule import truth_value_module

    M = M or truth_value_module(powerset_lattice([1, 2, 3], name="p3"))
    rep = TheoremReport("independent-but-not-completable", M.name)
    x12, x1, x2 = M.carrier.index("{1,2}"), M.carrier.index("{1}"), M.carrier.index("{2}")
    g12 = generated_submodule(M, x12).members
    g1 = generated_submodule(M, x1).members
    rep.check("<{1,2}> meet <{1}> = {bottom}", g12 & g1 == {M.bottom},
              sorted(M.labels[x] for x in g12 & g1))
    candidates = enumerate_join_endomorphisms(M.carrier)
    rep.note("candidates scanned", len(candidates))
    hits = [f.values for f in candidates
            if f.values[x12] == x1 and f.values[x1] == x2 and is_equivariant(M, f.values)]
    rep.check("no hom with f({1,2})={1}, f({1})={2}", not hits)
    sends = [f.values for f in candidates if f.values[x1] == x2]
    rep.check("f({1})={2} forces f({1,2}) >= {2}",
              all(M.carrier.leq[x2, f[x12]] for f in sends), len(sends))
    return rep.done()
