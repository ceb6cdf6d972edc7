"""Modules over finite quantales."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (AssocActionFail, EquivarianceFail, InvariantFail, JoinFail, Trivial,
                     UnitActionFail)
from .lattice import enumerate_join_maps, join_closure, join_preservation_witness
from .quantale import (check_quantale_hom, closure_family,
                       end_quantale, is_subquantale, operator_index, operator_quantale,
                       truth_values)


class QModule:
    __slots__ = ("quantale", "carrier", "action", "name", "_key")

    def __init__(self, quantale, carrier, action, name=""):
        self.quantale = quantale
        self.carrier = carrier
        a = np.array(action, dtype=np.int64)
        a.setflags(write=False)
        self.action = a
        self.name = name or carrier.name
        self._key = (quantale._key, carrier._key, a.tobytes())

    def __len__(self):
        return len(self.carrier)

    def __eq__(self, other):
        return isinstance(other, QModule) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"QModule({self.name} over {self.quantale.name}, n={len(self)})"

    @property
    def elements(self):
        return self.carrier.elements

    @property
    def labels(self):
        return self.carrier.labels

    @property
    def bottom(self):
        return self.carrier.bottom

    def act(self, a, m):
        return int(self.action[a, m])

    @property
    def is_degenerate(self):
        return len(self.carrier) == 1


def module_violation(Q, M, action):
    A = np.asarray(action, dtype=np.int64)
    ql, ml = Q.labels, M.labels
    if A.shape != (len(Q), len(M)) or A.min() < 0 or A.max() >= len(M):
        return InvariantFail(f"action table must be {len(Q)}x{len(M)} over the carrier")
    bad = np.flatnonzero(A[Q.unit] != np.arange(len(M)))
    if bad.size:
        m = ml[bad[0]]
        return UnitActionFail(f"unit does not fix {m}", (m,))
    bad = np.flatnonzero(A[Q.bottom] != M.bottom)
    if bad.size:
        return JoinFail("bottom of Q must act as zero", ("quantale", ql[Q.bottom], ml[bad[0]]))
    for a in Q.elements:
        w = join_preservation_witness(A[a], M, M)
        if w is not None:
            wit = ("module", ql[a]) + tuple(ml[x] for x in w) if w != ("bottom",) \
                else ("module", ql[a], ml[M.bottom])
            return JoinFail(f"{ql[a]} does not act join-preservingly", wit)
    J = Q.lattice.join
    for m in M.elements:
        col = A[:, m]
        bad = col[J] != M.join[col[:, None], col[None, :]]
        if bad.any():
            a, b = np.argwhere(bad)[0]
            return JoinFail(f"action on {ml[m]} does not preserve the join of {ql[a]}, {ql[b]}",
                            ("quantale", ql[a], ql[b], ml[m]))
    for a in Q.elements:
        bad = A[Q.product[a]] != A[a][A]
        if bad.any():
            b, m = np.argwhere(bad)[0]
            return AssocActionFail(f"({ql[a]}*{ql[b]}).{ml[m]} != {ql[a]}.({ql[b]}.{ml[m]})",
                                   (ql[a], ql[b], ml[m]))
    return None


def check_module(Q, M, action, name=""):
    err = module_violation(Q, M, action)
    if err is not None:
        raise err
    return QModule(Q, M, action, name)


def module_from_labels(Q, M, rows, name=""):
    A = [[M.index(x) for x in row] for row in rows]
    return check_module(Q, M, A, name)


def self_module(Q):
    return check_module(Q, Q.lattice, Q.product, f"self({Q.name})")


@lru_cache(maxsize=None)
def _two():
    return truth_values()


def truth_value_module(N, two=None):
    """N as a module over the truth values: bottom acts as zero, top as identity."""
    two = two or _two()
    action = np.empty((2, len(N)), dtype=np.int64)
    action[two.bottom] = N.bottom
    action[two.top] = np.arange(len(N))
    return check_module(two, N, action, N.name)


def action_hom(M):
    """The quantale homomorphism ``alpha -> (m -> alpha.m)`` into End(carrier)."""
    E = end_quantale(M.carrier)
    values = [operator_index(E, M.action[a]) for a in M.quantale.elements]
    return check_quantale_hom(M.quantale, E, values)


def module_from_hom(h, name=""):
    E = h.target
    action = [E.operators[h.values[a]] for a in h.source.elements]
    return check_module(h.source, E.carrier, action, name)


@dataclass(frozen=True)
class Submodule:
    module: QModule
    members: frozenset

    def labelled(self):
        return tuple(self.module.labels[x] for x in sorted(self.members))


def submodule_closure(M, S):
    """Join closure of ``Q.S``; it is already closed under the action."""
    A = M.action
    return join_closure(M.carrier, {int(A[a, s]) for a in M.quantale.elements for s in S})


def is_submodule(M, S):
    S = frozenset(S)
    if join_closure(M.carrier, S) != S:
        return False
    return all(int(M.action[a, s]) in S for a in M.quantale.elements for s in S)


def generated_submodule(M, m):
    members = frozenset(int(x) for x in M.action[:, m])
    if not is_submodule(M, members) or m not in members:
        raise InvariantFail("Q.m is not a submodule containing m", (M.labels[m],))
    return Submodule(M, members)


def submodule_sets(M, oracle=False):
    if oracle:
        from .oracles import submodules_by_filter
        return submodules_by_filter(M)
    return closure_family(list(M.elements), lambda s: submodule_closure(M, s),
                          frozenset({M.bottom}))


def submodules(M, oracle=False):
    return [Submodule(M, s) for s in submodule_sets(M, oracle)]


def is_simple(M):
    """Return ``(simple, witness)``.

    The witness is a proper nonzero submodule, or ``"degenerate"`` for the
    one-element module, which is never reported simple.
    """
    if M.is_degenerate:
        return False, "degenerate"
    subs = submodule_sets(M)
    proper = [s for s in subs if 1 < len(s) < len(M)]
    simple = not proper
    generates = all(len(set(M.action[:, m].tolist())) == len(M)
                    for m in M.elements if m != M.bottom)
    if simple != generates:
        raise InvariantFail("simplicity disagrees with the generator criterion")
    return simple, (None if simple else proper[0])


def is_faithful(M):
    """Return ``(faithful, witness)``; the witness is a nonzero element acting as zero."""
    for a in M.quantale.elements:
        if a != M.quantale.bottom and (M.action[a] == M.bottom).all():
            return False, a
    return True, None


def is_strongly_faithful(M):
    """Return ``(ok, witness)``; the witness is the first pair with equal action rows."""
    seen = {}
    for a in M.quantale.elements:
        row = M.action[a].tobytes()
        if row in seen:
            return False, (seen[row], a)
        seen[row] = a
    if not is_faithful(M)[0]:
        raise InvariantFail("strongly faithful module that is not faithful")
    return True, None


def annihilator(M):
    ann = frozenset(a for a in M.quantale.elements if (M.action[a] == M.bottom).all())
    Q = M.quantale
    if (ann == {Q.bottom}) != is_faithful(M)[0]:
        raise InvariantFail("faithfulness disagrees with the annihilator")
    if not all(int(Q.product[x, a]) in ann and int(Q.product[a, x]) in ann
               for a in ann for x in Q.elements):
        raise InvariantFail("annihilator is not two-sided absorbing")
    if join_closure(Q.lattice, ann) != ann:
        raise InvariantFail("annihilator is not join-closed")
    return ann


@dataclass(frozen=True)
class ModuleHom:
    source: QModule
    target: QModule
    values: tuple

    def __call__(self, m):
        return self.values[m]


def module_hom_violation(source, target, values):
    f = np.asarray(values, dtype=np.int64)
    w = join_preservation_witness(f, source.carrier, target.carrier)
    if w is not None:
        wit = tuple(source.labels[x] for x in w) if w != ("bottom",) else ("bottom",)
        return JoinFail("map does not preserve joins", wit)
    bad = f[source.action] != target.action[:, f]
    if bad.any():
        a, m = np.argwhere(bad)[0]
        return EquivarianceFail(f"f({source.quantale.labels[a]}.{source.labels[m]}) differs",
                                (source.quantale.labels[a], source.labels[m]))
    return None


def check_module_hom(source, target, values):
    if source.quantale != target.quantale:
        raise InvariantFail("module homomorphisms need a common quantale")
    err = module_hom_violation(source, target, values)
    if err is not None:
        raise err
    return ModuleHom(source, target, tuple(int(v) for v in values))


def kernel(f):
    ker = frozenset(m for m in f.source.elements if f.values[m] == f.target.bottom)
    if not is_submodule(f.source, ker):
        raise InvariantFail("kernel is not a submodule")
    return Submodule(f.source, ker)


def image(f):
    im = frozenset(f.values)
    if not is_submodule(f.target, im):
        raise InvariantFail("image is not a submodule")
    return Submodule(f.target, im)


def is_equivariant(M, values):
    f = np.asarray(values, dtype=np.int64)
    return bool((f[M.action] == M.action[:, f]).all())


@lru_cache(maxsize=64)
def end_q_quantale(M):
    """Module endomorphisms of M as a subquantale of End(carrier)."""
    if M.is_degenerate:
        raise Trivial("End_Q of the zero module is trivial")
    E = end_quantale(M.carrier)
    idx = [i for i, f in enumerate(E.operators) if is_equivariant(M, f)]
    if not is_subquantale(E, idx):
        raise InvariantFail("equivariant maps do not form a subquantale")
    return operator_quantale(M.carrier, [E.operators[i] for i in idx],
                             name=f"End_Q({M.name})", validate=False)


def evaluation_module(E, name=""):
    """The carrier of an operator quantale as a module over it, ``f.m = f(m)``."""
    return check_module(E, E.carrier, np.array(E.operators, dtype=np.int64),
                        name or E.carrier.name)


def equivariant_maps(M, N):
    """All module homomorphisms M -> N as value tuples (lexicographic)."""
    return [f for f in enumerate_join_maps(M.carrier, N.carrier)
            if module_hom_violation(M, N, f) is None]


def module_isomorphisms(M1, M2):
    """Yield lattice isomorphisms of carriers commuting with the actions.

    Both modules must be over the same quantale.
    """
    from .lattice import lattice_isomorphisms

    A1, A2 = M1.action, M2.action
    nq = len(M1.quantale)

    def accept(img):
        for m, w in img.items():
            for a in range(nq):
                x = int(A1[a, m])
                if x in img and img[x] != A2[a, w]:
                    return False
        return True

    for iso in lattice_isomorphisms(M1.carrier, M2.carrier, accept):
        f = np.asarray(iso)
        if (f[A1] == A2[:, f]).all():
            yield iso


def are_isomorphic_modules(M1, M2):
    if M1.quantale != M2.quantale:
        return False
    return next(module_isomorphisms(M1, M2), None) is not None


def submodule_as_module(M, S, name=""):
    """A submodule re-indexed as a module on its own sublattice."""
    from .lattice import FiniteLattice

    members = sorted(S)
    pos = {x: i for i, x in enumerate(members)}
    sub = M.carrier.leq[np.ix_(members, members)]
    L = FiniteLattice.from_leq([M.labels[x] for x in members], sub, name)
    A = [[pos[int(M.action[a, x])] for x in members] for a in M.quantale.elements]
    return check_module(M.quantale, L, A, name)

