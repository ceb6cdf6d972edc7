"""Unital quantales on finite lattices, their homomorphisms and unary predicates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import (AssocFail, DistribFail, InvariantFail, JoinFail, ProductFail,
                     SearchBoundExceeded,
                     Trivial, UnitFail)
from .lattice import (FiniteLattice, build_lattice, enumerate_join_endomorphisms,
                      join_closure, join_preservation_witness, lattice_isomorphisms)


class Quantale:
    """A finite lattice with an associative, join-distributive product and a unit.

    Instances should come from :func:`check_quantale` (or a constructor that
    calls it).  ``operators``, when set, holds the value table over
    ``carrier`` that each element stands for; it is filled for quantales of
    join-endomorphisms.
    """

    __slots__ = ("lattice", "product", "unit", "name", "operators", "carrier", "_key")

    def __init__(self, lattice, product, unit, name="", operators=None, carrier=None):
        self.lattice = lattice
        p = np.array(product, dtype=np.int64)
        p.setflags(write=False)
        self.product = p
        self.unit = int(unit)
        self.name = name or lattice.name
        self.operators = operators
        self.carrier = carrier
        self._key = (lattice._key, p.tobytes(), self.unit)

    def __len__(self):
        return len(self.lattice)

    def __eq__(self, other):
        return isinstance(other, Quantale) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Quantale({self.name}, n={len(self)})"

    @property
    def elements(self):
        return self.lattice.elements

    @property
    def labels(self):
        return self.lattice.labels

    @property
    def bottom(self):
        return self.lattice.bottom

    @property
    def top(self):
        return self.lattice.top

    def index(self, label):
        return self.lattice.index(label)

    def mul(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = int(self.product[out, x])
        return out


def quantale_violation(lattice, product, unit):
    """First violated quantale law as an exception instance, or None.

    Laws are tried in a fixed order (non-triviality, associativity, unit,
    left then right distributivity, bottom absorption) and within each law the
    lexicographically first witness is reported.
    """
    L = lattice
    labels = L.labels
    n = len(L)
    if n < 2:
        return Trivial("quantales must have at least two elements")
    P = np.asarray(product, dtype=np.int64)
    if P.shape != (n, n) or P.min() < 0 or P.max() >= n:
        return InvariantFail(f"product table must be {n}x{n} over the lattice elements")
    J = L.join
    for a in range(n):
        bad = P[P[a]] != P[a][P]
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return AssocFail(f"({labels[a]}*{labels[b]})*{labels[c]} != "
                             f"{labels[a]}*({labels[b]}*{labels[c]})",
                             (labels[a], labels[b], labels[c]))
    e = unit
    bad = np.flatnonzero((P[e] != np.arange(n)) | (P[:, e] != np.arange(n)))
    if bad.size:
        a = labels[bad[0]]
        return UnitFail(f"{labels[e]} is not a two-sided unit at {a}", (a,))
    for a in range(n):
        row, col = P[a], P[:, a]
        for side, vals in (("left", row), ("right", col)):
            bad = vals[J] != J[vals[:, None], vals[None, :]]
            if bad.any():
                b, c = np.argwhere(bad)[0]
                return DistribFail(f"{side} distributivity fails at "
                                   f"({labels[a]}, {labels[b]}, {labels[c]})",
                                   (side, labels[a], labels[b], labels[c]))
    bot = L.bottom
    bad = np.flatnonzero((P[:, bot] != bot) | (P[bot] != bot))
    if bad.size:
        a = labels[bad[0]]
        return DistribFail(f"bottom is not absorbing at {a}", ("bottom", a))
    return None


def check_quantale(lattice, product, unit, name="", **extra):
    if isinstance(unit, str):
        unit = lattice.index(unit)
    err = quantale_violation(lattice, product, unit)
    if err is not None:
        raise err
    return Quantale(lattice, product, unit, name, **extra)


def quantale_from_labels(lattice, rows, unit, name=""):
    """Build from a product table given as rows of element labels."""
    P = [[lattice.index(x) for x in row] for row in rows]
    return check_quantale(lattice, P, lattice.index(unit), name)


def truth_values():
    """The two-element quantale of truth values, product = meet, unit = top."""
    L = build_lattice(["bot", "top"], [("bot", "top")], name="two")
    return check_quantale(L, L.meet, L.top, "two")


def meet_quantale(L, name=""):
    """A distributive lattice as a quantale with product = meet."""
    return check_quantale(L, L.meet, L.top, name or f"meet({L.name})")


def is_commutative(Q):
    return bool((Q.product == Q.product.T).all())


def _encode(F, n):
    k = F.shape[-1]
    if n ** k < 2 ** 62:
        return F @ (n ** np.arange(k, dtype=np.int64))
    return None


def _map_label(N, values):
    return "[" + ",".join(N.labels[v] for v in values) + "]"


OPERATOR_BOUND = 1024


def operator_quantale(N, maps, name="", validate=True):
    """The quantale of the given join-endomorphisms of ``N`` (pointwise order, composition).

    ``maps`` must be closed under pointwise joins and composition and contain
    the identity; anything else raises :class:`InvariantFail`.  The product is
    ``(f*g)(x) = f(g(x))``.  Sets larger than ``OPERATOR_BOUND`` raise
    :class:`SearchBoundExceeded`, since the tables are quadratic in their size.
    """
    maps = sorted({tuple(int(v) for v in m) for m in maps})
    if len(maps) > OPERATOR_BOUND:
        raise SearchBoundExceeded(f"{len(maps)} operators exceed the bound {OPERATOR_BOUND}")
    F = np.array(maps, dtype=np.int64).reshape(len(maps), len(N))
    m = len(maps)
    codes = _encode(F, len(N))
    if codes is not None:
        order = np.argsort(codes)
        sorted_codes = codes[order]

        def lookup(G):
            c = _encode(G, len(N))
            pos = np.searchsorted(sorted_codes, c).clip(0, m - 1)
            found = sorted_codes[pos] == c
            return np.where(found, order[pos], -1)
    else:
        index = {mp: i for i, mp in enumerate(maps)}

        def lookup(G):
            flat = G.reshape(-1, G.shape[-1])
            return np.array([index.get(tuple(r), -1) for r in flat.tolist()]).reshape(G.shape[:-1])

    leq = N.leq[F[:, None, :], F[None, :, :]].all(axis=2)
    labels = [_map_label(N, mp) for mp in maps]
    L = FiniteLattice.from_leq(labels, leq, name)
    pointwise = lookup(N.join[F[:, None, :], F[None, :, :]])
    if (pointwise < 0).any() or (pointwise != L.join).any():
        raise InvariantFail("operator set is not closed under pointwise joins")
    comp = lookup(F[np.arange(m)[:, None, None], F[None, :, :]])
    if (comp < 0).any():
        f, g = np.argwhere(comp < 0)[0]
        raise InvariantFail("operator set is not closed under composition",
                            (labels[f], labels[g]))
    ident = tuple(range(len(N)))
    if ident not in set(maps):
        raise InvariantFail("operator set does not contain the identity")
    unit = maps.index(ident)
    if validate:
        return check_quantale(L, comp, unit, name, operators=tuple(maps), carrier=N)
    return Quantale(L, comp, unit, name, operators=tuple(maps), carrier=N)


@lru_cache(maxsize=64)
def end_quantale(N):
    """All join-endomorphisms of N as a quantale."""
    if len(N) < 2:
        raise Trivial("End of the one-element lattice is trivial")
    maps = [f.values for f in enumerate_join_endomorphisms(N)]
    return operator_quantale(N, maps, name=f"End({N.name})")


def operator_index(E, values):
    """Index of a value table inside an operator quantale."""
    return E.operators.index(tuple(int(v) for v in values))


@dataclass(frozen=True)
class QuantaleHom:
    source: Quantale
    target: Quantale
    values: tuple

    def __call__(self, a):
        return self.values[a]


def quantale_hom_violation(source, target, values):
    f = np.asarray(values, dtype=np.int64)
    S, T = source, target
    w = join_preservation_witness(f, S.lattice, T.lattice)
    if w is not None:
        if w == ("bottom",):
            return JoinFail("bottom is not preserved", (S.labels[S.bottom],))
        a, b = w
        return JoinFail(f"join of {S.labels[a]}, {S.labels[b]} is not preserved",
                        (S.labels[a], S.labels[b]))
    bad = f[S.product] != T.product[f[:, None], f[None, :]]
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return ProductFail(f"product {S.labels[a]}*{S.labels[b]} is not preserved",
                           (S.labels[a], S.labels[b]))
    if f[S.unit] != T.unit:
        return UnitFail("unit is not preserved", (S.labels[S.unit],))
    return None


def check_quantale_hom(source, target, values):
    err = quantale_hom_violation(source, target, values)
    if err is not None:
        raise err
    return QuantaleHom(source, target, tuple(int(v) for v in values))


def is_subquantale(Q, A):
    A = frozenset(A)
    if Q.unit not in A:
        return False
    if join_closure(Q.lattice, A) != A:
        return False
    return all(int(Q.product[a, b]) in A for a in A for b in A)


def image_subquantale(h):
    im = frozenset(h.values)
    if not is_subquantale(h.target, im):
        raise InvariantFail("image of a quantale homomorphism is not a subquantale")
    return im


def is_prime(Q):
    """Return ``(True, None)`` or ``(False, (alpha, beta))``, the first nonzero
    pair with ``alpha*gamma*beta = bottom`` for every gamma."""
    P = Q.product
    bot = Q.bottom
    for a in Q.elements:
        if a == bot:
            continue
        # nz[b] iff some gamma has a*gamma*b != bottom
        nz = (P[P[a]] != bot).any(axis=0)
        for b in Q.elements:
            if b != bot and not nz[b]:
                return False, (a, b)
    return True, None


def inverse_table(Q):
    """Map each nonzero element to its two-sided inverse, or None if one is missing."""
    inv = {}
    for a in Q.elements:
        if a == Q.bottom:
            continue
        cands = [b for b in Q.elements
                 if Q.product[a, b] == Q.unit and Q.product[b, a] == Q.unit]
        if not cands:
            return None
        if len(cands) > 1:
            raise InvariantFail("two-sided inverses must be unique", (Q.labels[a],))
        inv[a] = cands[0]
    return inv


def is_division(Q):
    return inverse_table(Q) is not None


def is_field(Q):
    return is_commutative(Q) and is_division(Q)


@dataclass(frozen=True)
class LeftIdeal:
    quantale: Quantale
    members: frozenset

    def labelled(self):
        return tuple(self.quantale.labels[x] for x in sorted(self.members))


def canonical_sets(sets):
    return sorted(set(sets), key=lambda s: (len(s), sorted(s)))


def left_ideal_closure(Q, S):
    """Smallest left ideal containing S: join closure of ``Q * S``."""
    P = Q.product
    return join_closure(Q.lattice, {int(P[a, s]) for a in Q.elements for s in S})


def is_left_ideal(Q, S):
    S = frozenset(S)
    if join_closure(Q.lattice, S) != S:
        return False
    return all(int(Q.product[a, s]) in S for a in Q.elements for s in S)


def closure_family(elements, close, start):
    """All sets reachable from ``start`` by repeatedly adding one element and closing."""
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        for x in elements:
            if x not in cur:
                nxt = close(cur | {x})
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return canonical_sets(seen)


def left_ideals(Q, oracle=False):
    if oracle:
        from .oracles import left_ideals_by_filter
        sets = left_ideals_by_filter(Q)
    else:
        sets = closure_family(list(Q.elements), lambda s: left_ideal_closure(Q, s),
                              frozenset({Q.bottom}))
    return [LeftIdeal(Q, s) for s in sets]


def minimal_left_ideals(Q):
    nonzero = [I for I in left_ideals(Q) if len(I.members) > 1]
    return [I for I in nonzero
            if not any(J.members < I.members for J in nonzero)]


def quantale_isomorphisms(Q1, Q2):
    """Yield lattice isomorphisms that also preserve product and unit."""
    P1, P2 = Q1.product, Q2.product

    def accept(img):
        if Q1.unit in img and img[Q1.unit] != Q2.unit:
            return False
        for a, b in product(img, repeat=2):
            c = int(P1[a, b])
            if c in img and img[c] != P2[img[a], img[b]]:
                return False
        return True

    for iso in lattice_isomorphisms(Q1.lattice, Q2.lattice, accept):
        if iso[Q1.unit] == Q2.unit and (np.asarray(iso)[P1] == P2[np.ix_(iso, iso)]).all():
            yield iso


def find_quantale_isomorphism(Q1, Q2):
    return next(quantale_isomorphisms(Q1, Q2), None)
