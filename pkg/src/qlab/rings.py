"""Finite unital rings, their ideal quantales and submodule lattices.

The ideal lattice Idl(R) (two-sided ideals, join = sum, product = additive
closure of pairwise products, unit = R) is a quantale, and for an R-module M
the lattice Sub(M) of submodules is a module over it via ``I.N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import HypothesisUnmet, InvariantFail
from .lattice import FiniteLattice
from .qmodule import check_module, is_faithful, is_simple
from .quantale import check_quantale, closure_family
from .reports import TheoremReport


def _table(t, n, what):
    arr = np.array(t, dtype=np.int64)
    if arr.shape != (n, n) or arr.min() < 0 or arr.max() >= n:
        raise InvariantFail(f"{what} table must be {n}x{n} over the elements")
    arr.setflags(write=False)
    return arr


def _abelian_group_violation(n, add, zero):
    idx = np.arange(n)
    if (add != add.T).any():
        return "addition is not commutative"
    for a in range(n):
        if (add[add[a]] != add[a][add]).any():
            return "addition is not associative"
    if (add[zero] != idx).any():
        return "zero is not additive identity"
    if not (add == zero).any(axis=1).all():
        return "some element has no additive inverse"
    return None


@dataclass(frozen=True, eq=False)
class FiniteRing:
    labels: tuple = field(repr=False)
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    zero: int
    one: int
    name: str = ""

    @property
    def elements(self):
        return range(len(self.labels))

    def __len__(self):
        return len(self.labels)

    def neg(self, a):
        return int(np.flatnonzero(self.add[a] == self.zero)[0])


def check_ring(labels, add, mul, zero, one, name=""):
    labels = tuple(labels)
    n = len(labels)
    if n < 2:
        raise InvariantFail("the zero ring is excluded")
    add, mul = _table(add, n, "add"), _table(mul, n, "mul")
    err = _abelian_group_violation(n, add, zero)
    if err:
        raise InvariantFail(err)
    for a in range(n):
        if (mul[mul[a]] != mul[a][mul]).any():
            raise InvariantFail("multiplication is not associative", (labels[a],))
        row, col = mul[a], mul[:, a]
        if (row[add] != add[row[:, None], row[None, :]]).any():
            raise InvariantFail("left distributivity fails", (labels[a],))
        if (col[add] != add[col[:, None], col[None, :]]).any():
            raise InvariantFail("right distributivity fails", (labels[a],))
    idx = np.arange(n)
    if (mul[one] != idx).any() or (mul[:, one] != idx).any():
        raise InvariantFail("one is not a two-sided unit")
    return FiniteRing(labels, add, mul, int(zero), int(one), name)


def ring_zn(n):
    if n < 2:
        raise InvariantFail("Z_n needs n >= 2")
    idx = np.arange(n)
    return check_ring([str(i) for i in range(n)], (idx[:, None] + idx[None, :]) % n,
                      (idx[:, None] * idx[None, :]) % n, 0, 1 % n, f"Z{n}")


def _matrices(q, k):
    return [np.array(entries, dtype=np.int64).reshape(k, k)
            for entries in product(range(q), repeat=k * k)]


def _mat_label(m):
    return "[" + ";".join("".join(str(v) for v in row) for row in m) + "]"


def matrix_ring(q, k):
    """k x k matrices over the prime field F_q."""
    if q < 2 or any(q % p == 0 for p in range(2, q)):
        raise InvariantFail("q must be prime")
    if q ** (k * k) > 256:
        raise InvariantFail("matrix ring too large for the catalog")
    mats = _matrices(q, k)
    index = {m.tobytes(): i for i, m in enumerate(mats)}
    add = [[index[((a + b) % q).tobytes()] for b in mats] for a in mats]
    mul = [[index[((a @ b) % q).tobytes()] for b in mats] for a in mats]
    zero = index[np.zeros((k, k), dtype=np.int64).tobytes()]
    one = index[np.eye(k, dtype=np.int64).tobytes()]
    return check_ring([_mat_label(m) for m in mats], add, mul, zero, one, f"M{k}(F{q})")


@dataclass(frozen=True, eq=False)
class FiniteRModule:
    ring: FiniteRing = field(repr=False)
    labels: tuple = field(repr=False)
    add: np.ndarray = field(repr=False)
    smul: np.ndarray = field(repr=False)
    zero: int
    name: str = ""

    @property
    def elements(self):
        return range(len(self.labels))

    def __len__(self):
        return len(self.labels)


def check_rmodule(ring, labels, add, smul, zero, name=""):
    labels = tuple(labels)
    n = len(labels)
    add = _table(add, n, "add")
    smul = np.array(smul, dtype=np.int64)
    if smul.shape != (len(ring), n) or smul.min() < 0 or smul.max() >= n:
        raise InvariantFail("scalar table must be |R| x |M|")
    smul.setflags(write=False)
    err = _abelian_group_violation(n, add, zero)
    if err:
        raise InvariantFail(err)
    for r in ring.elements:
        row = smul[r]
        if (row[add] != add[row[:, None], row[None, :]]).any():
            raise InvariantFail("r.(m+n) != r.m + r.n", (ring.labels[r],))
        if (smul[ring.mul[r]] != row[smul]).any():
            raise InvariantFail("(rs).m != r.(s.m)", (ring.labels[r],))
    for m in range(n):
        col = smul[:, m]
        if (col[ring.add] != add[col[:, None], col[None, :]]).any():
            raise InvariantFail("(r+s).m != r.m + s.m", (labels[m],))
    if (smul[ring.one] != np.arange(n)).any():
        raise InvariantFail("1.m != m")
    return FiniteRModule(ring, labels, add, smul, int(zero), name)


def regular_module(R):
    return check_rmodule(R, R.labels, R.add, R.mul, R.zero, f"{R.name}")


def column_module(q, k, R=None):
    """F_q^k as a left module over the k x k matrix ring."""
    R = R or matrix_ring(q, k)
    mats = _matrices(q, k)
    vecs = [np.array(v, dtype=np.int64) for v in product(range(q), repeat=k)]
    index = {v.tobytes(): i for i, v in enumerate(vecs)}
    add = [[index[((a + b) % q).tobytes()] for b in vecs] for a in vecs]
    smul = [[index[((m @ v) % q).tobytes()] for v in vecs] for m in mats]
    labels = ["(" + "".join(str(x) for x in v) + ")" for v in vecs]
    return check_rmodule(R, labels, add, smul, index[np.zeros(k, dtype=np.int64).tobytes()],
                         f"F{q}^{k}")


# -- subgroup closures ------------------------------------------------------

def additive_closure(add, zero, S):
    closed = {zero, *S}
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                c = int(add[a, b])
                if c not in closed:
                    closed.add(c)
                    new.append(c)
        frontier = new
    return frozenset(closed)


def ideal_closure(R, S):
    gen = {int(R.mul[R.mul[r, s], t]) for r in R.elements for s in S for t in R.elements}
    return additive_closure(R.add, R.zero, gen)


@dataclass(frozen=True)
class Ideal:
    ring: FiniteRing = field(repr=False)
    members: frozenset


def ideal_sets(R, oracle=False):
    if oracle:
        from .oracles import ideals_by_filter
        return ideals_by_filter(R)
    return closure_family(list(R.elements), lambda s: ideal_closure(R, s),
                          frozenset({R.zero}))


def ideals(R, oracle=False):
    return [Ideal(R, s) for s in ideal_sets(R, oracle)]


def _ideal_label(R, S):
    if R.name.startswith("Z") and R.name[1:].isdigit():
        n = len(R)
        gens = [int(R.labels[x]) for x in S if x != R.zero]
        return f"({min(gens) if gens else 0})" if len(S) < n else "(1)"
    if len(S) == 1:
        return "0"
    if len(S) == len(R):
        return "R"
    return "I{" + ",".join(R.labels[x] for x in sorted(S)) + "}"


def ideal_product(R, I, J):
    return additive_closure(R.add, R.zero, {int(R.mul[a, b]) for a in I for b in J})


def _inclusion_lattice(sets, labels, name):
    leq = [[a <= b for b in sets] for a in sets]
    return FiniteLattice.from_leq(labels, leq, name)


def idl_quantale(R, name=""):
    """Two-sided ideals of R under sum and ideal product."""
    sets = ideal_sets(R)
    pos = {s: i for i, s in enumerate(sets)}
    L = _inclusion_lattice(sets, [_ideal_label(R, s) for s in sets], name or f"Idl({R.name})")
    for a, sa in enumerate(sets):
        for b, sb in enumerate(sets):
            if sets[int(L.join[a, b])] != additive_closure(R.add, R.zero, sa | sb):
                raise InvariantFail("lattice join differs from ideal sum")
    P = [[pos[ideal_product(R, I, J)] for J in sets] for I in sets]
    return check_quantale(L, P, pos[frozenset(R.elements)], name or f"Idl({R.name})")


def rsubmodule_closure(M, S):
    gen = {int(M.smul[r, s]) for r in M.ring.elements for s in S}
    return additive_closure(M.add, M.zero, gen)


def rsubmodule_sets(M, oracle=False):
    if oracle:
        from .oracles import rsubmodules_by_filter
        return rsubmodules_by_filter(M)
    return closure_family(list(M.elements), lambda s: rsubmodule_closure(M, s),
                          frozenset({M.zero}))


def is_faithful_rmodule(M):
    R = M.ring
    return all(not (M.smul[r] == M.zero).all() for r in R.elements if r != R.zero)


def is_simple_rmodule(M):
    return len(M) > 1 and len(rsubmodule_sets(M)) == 2


def _submodule_label(M, S):
    if len(S) == 1:
        return "0"
    if len(S) == len(M):
        return "M"
    return "N{" + ",".join(M.labels[x] for x in sorted(S)) + "}"


def sub_module_over_idl(M, Q=None):
    """Sub(M) as a module over Idl(R), acting by ``I.N``."""
    R = M.ring
    Q = Q or idl_quantale(R)
    isets = ideal_sets(R)
    subs = rsubmodule_sets(M)
    pos = {s: i for i, s in enumerate(subs)}
    carrier = _inclusion_lattice(subs, [_submodule_label(M, s) for s in subs], f"Sub({M.name})")
    for a, sa in enumerate(subs):
        for b, sb in enumerate(subs):
            if subs[int(carrier.join[a, b])] != additive_closure(M.add, M.zero, sa | sb):
                raise InvariantFail("lattice join differs from submodule sum")
            if subs[int(carrier.meet[a, b])] != sa & sb:
                raise InvariantFail("lattice meet differs from intersection")
    action = [[pos[additive_closure(M.add, M.zero, {int(M.smul[r, x]) for r in I for x in N})]
               for N in subs] for I in isets]
    S = check_module(Q, carrier, action, f"Sub({M.name})")
    if is_faithful_rmodule(M) and not is_faithful(S)[0]:
        raise InvariantFail("faithful R-module with unfaithful Sub(M)")
    if is_simple_rmodule(M) and not is_simple(S)[0]:
        raise InvariantFail("simple R-module with non-simple Sub(M)")
    return S


def corollary_primitive_ring(R, M, bound=None):
    """Idl(R) is primitive whenever M is a faithful simple R-module.

    Sub(M) is checked to be a faithful simple Idl(R)-module, and the closure
    search on Idl(R) must independently find an isomorphic witness.
    """
    from .primitivity import CLOSURE_BOUND, enumerate_simple_modules
    from .qmodule import are_isomorphic_modules

    rep = TheoremReport("primitive-ring-gives-primitive-quantale", f"{R.name}, {M.name}")
    if not is_faithful_rmodule(M):
        raise HypothesisUnmet(f"{M.name} is not a faithful {R.name}-module")
    if not is_simple_rmodule(M):
        raise HypothesisUnmet(f"{M.name} is not a simple {R.name}-module")
    rep.note("classical faithful and simple (brute force)")
    Q = idl_quantale(R)
    S = sub_module_over_idl(M, Q)
    rep.check("Sub(M) faithful", is_faithful(S)[0])
    rep.check("Sub(M) simple", is_simple(S)[0])
    found = enumerate_simple_modules(Q, bound or CLOSURE_BOUND)
    match = [w for w in found if w.kind != "unfaithful" and are_isomorphic_modules(S, w.module)]
    rep.check("closure search finds an isomorphic witness", bool(match))
    rep.witnesses.append(("Sub(M)", S.labels))
    rep.witnesses.append(("Idl(R)", Q.labels))
    return rep.done()
