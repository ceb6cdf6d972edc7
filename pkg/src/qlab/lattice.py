"""Finite bounded lattices and join-preserving maps.

Elements are canonical indices ``0..n-1`` in declaration order; labels are
kept only for display and file I/O.  Arbitrary joins in a finite lattice
reduce to binary joins plus the empty join (the bottom), so every
"preserves arbitrary joins" law below is checked as a binary-join law
together with a bottom law.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

from .errors import JoinFail, NoBottom, NoTop, NotALattice, NotAPoset


def _frozen(a, dtype):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _compose(r, s):
    """Boolean relation product; float32 keeps the matmul on BLAS and counts exact."""
    return (r.astype(np.float32) @ s.astype(np.float32)) > 0.5


def _least_bounds(leq):
    """Least upper bound table of a poset, or the first pair without one.

    The least upper bound of (a, b) is the common upper bound whose up-set
    is exactly the set of common upper bounds; any other upper bound has a
    strictly smaller up-set.
    """
    n = len(leq)
    up = leq.sum(axis=1).astype(np.int16)
    table = np.empty((n, n), dtype=np.int64)
    rows = np.arange(n)
    for a in range(n):
        ub = leq[a][None, :] & leq
        cand = np.where(ub, up[None, :], np.int16(-1)).argmax(axis=1)
        ok = ub[rows, cand] & (up[cand] == ub.sum(axis=1))
        if not ok.all():
            return None, (a, int(np.flatnonzero(~ok)[0]))
        table[a] = cand
    return table, None


class FiniteLattice:
    """A validated finite bounded lattice.

    Build one with :func:`build_lattice` or :meth:`from_leq`; the tables are
    read-only numpy arrays and the object is immutable afterwards.
    """

    __slots__ = ("labels", "leq", "join", "meet", "bottom", "top", "name", "_index", "_key")

    def __init__(self, labels, leq, join, meet, bottom, top, name=""):
        self.labels = tuple(labels)
        self.leq = _frozen(leq, bool)
        self.join = _frozen(join, np.int64)
        self.meet = _frozen(meet, np.int64)
        self.bottom = int(bottom)
        self.top = int(top)
        self.name = name
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._key = (self.labels, self.leq.tobytes())

    @classmethod
    def from_leq(cls, labels, leq, name=""):
        """Validate a full order matrix (``leq[a, b]`` iff a <= b) and derive tables."""
        labels = tuple(labels)
        leq = np.array(leq, dtype=bool)
        n = len(labels)
        if n == 0:
            raise NotALattice("a lattice needs at least one element")
        if len(set(labels)) != n:
            raise NotAPoset("element labels must be distinct")
        if leq.shape != (n, n):
            raise NotAPoset(f"order matrix must be {n}x{n}")
        bad = np.flatnonzero(~leq.diagonal())
        if bad.size:
            a = labels[bad[0]]
            raise NotAPoset(f"reflexivity fails at {a}", (a,))
        sym = leq & leq.T
        np.fill_diagonal(sym, False)
        if sym.any():
            a, b = np.argwhere(sym)[0]
            raise NotAPoset(f"antisymmetry fails: {labels[a]} <= {labels[b]} <= {labels[a]}",
                            (labels[a], labels[b]))
        trans = _compose(leq, leq) & ~leq
        if trans.any():
            a, c = np.argwhere(trans)[0]
            raise NotAPoset(f"transitivity fails between {labels[a]} and {labels[c]}",
                            (labels[a], labels[c]))
        join, bad = _least_bounds(leq)
        if bad:
            a, b = labels[bad[0]], labels[bad[1]]
            raise NotALattice(f"{a} and {b} have no least upper bound", (a, b))
        meet, bad = _least_bounds(leq.T)
        if bad:
            a, b = labels[bad[0]], labels[bad[1]]
            raise NotALattice(f"{a} and {b} have no greatest lower bound", (a, b))
        bottoms = np.flatnonzero(leq.all(axis=1))
        if not bottoms.size:
            raise NoBottom("no least element")
        tops = np.flatnonzero(leq.all(axis=0))
        if not tops.size:
            raise NoTop("no greatest element")
        return cls(labels, leq, join, meet, bottoms[0], tops[0], name)

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        return isinstance(other, FiniteLattice) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FiniteLattice({self.name or '?'}, n={len(self)})"

    @property
    def elements(self):
        return range(len(self.labels))

    @property
    def is_trivial(self):
        return len(self.labels) == 1

    def index(self, label):
        return self._index[label]

    def label(self, i):
        return self.labels[i]

    def leq_(self, a, b):
        return bool(self.leq[a, b])

    def covers(self):
        """Pairs (a, b) with a < b and nothing strictly between."""
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        cov = lt & ~_compose(lt, lt)
        return [(int(a), int(b)) for a, b in np.argwhere(cov)]

    def join_irreducibles(self):
        """Elements with exactly one lower cover."""
        lower = [0] * len(self)
        for _, b in self.covers():
            lower[b] += 1
        return [x for x in self.elements if lower[x] == 1]

    def downset(self, x):
        return frozenset(int(i) for i in np.flatnonzero(self.leq[:, x]))


def build_lattice(elements, relation, mode="covers", name=""):
    """Build a lattice from labels and a list of ``(lower, upper)`` label pairs.

    ``mode="covers"`` takes the reflexive-transitive closure of the pairs;
    ``mode="leq"`` expects the full order relation (reflexive pairs may be
    omitted).
    """
    labels = [str(e) for e in elements]
    if len(set(labels)) != len(labels):
        raise NotAPoset("element labels must be distinct")
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    rel = np.zeros((n, n), dtype=bool)
    np.fill_diagonal(rel, True)
    for a, b in relation:
        a, b = str(a), str(b)
        if a not in index or b not in index:
            raise NotAPoset(f"relation pair ({a}, {b}) uses an undeclared element", (a, b))
        rel[index[a], index[b]] = True
    if mode == "covers":
        for k in range(n):
            rel |= rel[:, k:k + 1] & rel[k:k + 1, :]
    elif mode != "leq":
        raise ValueError(f"unknown mode {mode!r}")
    return FiniteLattice.from_leq(labels, rel, name)


def join_of_set(L, S):
    return reduce(lambda a, b: int(L.join[a, b]), S, L.bottom)


def meet_of_set(L, S):
    return reduce(lambda a, b: int(L.meet[a, b]), S, L.top)


def join_closure(L, S):
    """Smallest join-closed subset containing S and the bottom."""
    closed = {L.bottom, *S}
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                c = int(L.join[a, b])
                if c not in closed:
                    closed.add(c)
                    new.append(c)
        frontier = new
    return frozenset(closed)


def meet_closure(L, S):
    """Smallest meet-closed subset containing S and the top."""
    closed = {L.top, *S}
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                c = int(L.meet[a, b])
                if c not in closed:
                    closed.add(c)
                    new.append(c)
        frontier = new
    return frozenset(closed)


def atoms(L):
    return [b for a, b in L.covers() if a == L.bottom]


def is_atomic_frame(L):
    """Return ``(ok, certificate)``.

    The frame law is checked as binary distributivity of meet over join
    (plus ``a ∧ ⊥ = ⊥``, which holds in any lattice); the certificate is the
    first ``(a, (b, c))`` violating it, or the first element that is not a
    join of atoms.
    """
    J, M = L.join, L.meet
    for a, b, c in product(L.elements, repeat=3):
        if b > c:
            continue
        if M[a, J[b, c]] != J[M[a, b], M[a, c]]:
            return False, ("frame-law", L.labels[a], (L.labels[b], L.labels[c]))
    ats = atoms(L)
    for x in L.elements:
        if join_of_set(L, [t for t in ats if L.leq[t, x]]) != x:
            return False, ("not-atomic", L.labels[x])
    return True, None


def join_preservation_witness(values, L, N):
    """First failure of ``f(⊥)=⊥`` / ``f(a∨b)=f(a)∨f(b)``, or None."""
    f = np.asarray(values, dtype=np.int64)
    if f.shape != (len(L),):
        raise ValueError("value table must be total on the source lattice")
    if f[L.bottom] != N.bottom:
        return ("bottom",)
    bad = N.join[f[:, None], f[None, :]] != f[L.join]
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return (int(a), int(b))
    return None


def is_join_preserving(values, L, N):
    return join_preservation_witness(values, L, N) is None


@dataclass(frozen=True)
class JoinMap:
    source: FiniteLattice
    target: FiniteLattice
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if join_preservation_witness(self.values, self.source, self.target) is not None:
            raise JoinFail("map does not preserve joins", self.labelled())

    def __call__(self, x):
        return self.values[x]

    def labelled(self):
        return tuple(self.target.labels[v] for v in self.values)


def _monotone_assignments(L, N, gens):
    """Backtrack images of ``gens`` in N keeping the order between generators."""
    below = [[i for i in range(k) if L.leq[gens[i], gens[k]]] for k in range(len(gens))]
    above = [[i for i in range(k) if L.leq[gens[k], gens[i]]] for k in range(len(gens))]
    img = [0] * len(gens)

    def rec(k):
        if k == len(gens):
            yield tuple(img)
            return
        for y in N.elements:
            if all(N.leq[img[i], y] for i in below[k]) and all(N.leq[y, img[i]] for i in above[k]):
                img[k] = y
                yield from rec(k + 1)

    yield from rec(0)


def enumerate_join_maps(L, N):
    """All join-preserving maps L -> N as value tuples, lexicographically sorted.

    Images are chosen for the join-irreducibles only; each element is the
    join of the irreducibles below it, so the extension is forced.  The
    extension is then validated, since not every monotone assignment
    extends to a join-preserving map.
    """
    gens = L.join_irreducibles()
    below = [[k for k, g in enumerate(gens) if L.leq[g, x]] for x in L.elements]
    out = []
    for img in _monotone_assignments(L, N, gens):
        values = tuple(join_of_set(N, [img[k] for k in below[x]]) for x in L.elements)
        if join_preservation_witness(values, L, N) is None:
            out.append(values)
    out.sort()
    return out


def enumerate_join_endomorphisms(L):
    return [JoinMap(L, L, v) for v in enumerate_join_maps(L, L)]


def lattice_isomorphisms(L1, L2, accept=None):
    """Yield order isomorphisms L1 -> L2 as value tuples.

    ``accept(partial)`` may prune: it receives the dict of assigned images
    and returns False to reject the branch.
    """
    n = len(L1)
    if n != len(L2):
        return
    sig1 = [(int(L1.leq[:, x].sum()), int(L1.leq[x].sum())) for x in L1.elements]
    sig2 = [(int(L2.leq[:, y].sum()), int(L2.leq[y].sum())) for y in L2.elements]
    if sorted(sig1) != sorted(sig2):
        return
    order = sorted(L1.elements, key=lambda x: sig1[x])
    img = {}
    used = set()

    def rec(k):
        if k == n:
            yield tuple(img[x] for x in L1.elements)
            return
        x = order[k]
        for y in L2.elements:
            if y in used or sig2[y] != sig1[x]:
                continue
            if any(L1.leq[x, z] != L2.leq[y, w] or L1.leq[z, x] != L2.leq[w, y]
                   for z, w in img.items()):
                continue
            img[x] = y
            used.add(y)
            if accept is None or accept(img):
                yield from rec(k + 1)
            del img[x]
            used.discard(y)

    yield from rec(0)


def chain(n, name=None):
    labels = ["bot"] + [f"c{i}" for i in range(1, n - 1)] + ["top"] if n > 1 else ["bot"]
    return build_lattice(labels, list(zip(labels, labels[1:])), name=name or f"chain{n}")


def powerset_lattice(points, name=None):
    """Subsets of ``points`` ordered by inclusion, listed by size then lexicographically."""
    from itertools import combinations

    pts = list(points)
    subsets = [c for k in range(len(pts) + 1) for c in combinations(pts, k)]
    labels = ["{" + ",".join(str(p) for p in s) + "}" for s in subsets]
    sets = [set(s) for s in subsets]
    rel = [(labels[i], labels[j]) for i, a in enumerate(sets) for j, b in enumerate(sets) if a <= b]
    return build_lattice(labels, rel, mode="leq", name=name or f"P({len(pts)})")
