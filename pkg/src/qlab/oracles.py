"""Brute-force cross-checks.

Everything here enumerates the full search space (all tables, all subsets,
all structures) and filters by the defining laws.  These routines share no
search logic with the main implementations they check.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .errors import SearchBoundExceeded
from .lattice import FiniteLattice, _compose, join_of_set

_CHUNK = 1 << 20


def all_subsets_mask(n):
    if n > 20:
        raise SearchBoundExceeded(f"subset filter over {n} elements is too large")
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)


def _rows_to_sets(bits):
    return [frozenset(int(i) for i in np.flatnonzero(row)) for row in bits]


def _sort(sets):
    return sorted(sets, key=lambda s: (len(s), sorted(s)))


def join_maps_by_filter(L, N):
    """Every table L -> N that preserves the bottom and binary joins.

    All ``|N|**|L|`` tables are scanned: the trailing coordinates form one
    vectorised block and the leading ones are looped over.
    """
    n, k = len(N), len(L)
    if n ** k > 1 << 26:
        raise SearchBoundExceeded(f"{n ** k} candidate tables")
    tail = min(k, max(1, int(np.log(_CHUNK) / np.log(max(n, 2)))))
    head = k - tail
    block = np.array(list(product(range(n), repeat=tail)), dtype=np.int64).reshape(-1, tail)
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    out = []
    for prefix in product(range(n), repeat=head):
        T = np.empty((len(block), k), dtype=np.int64)
        T[:, :head] = prefix
        T[:, head:] = block
        ok = T[:, L.bottom] == N.bottom
        for a, b in pairs:
            if not ok.any():
                break
            ok &= N.join[T[:, a], T[:, b]] == T[:, L.join[a, b]]
        out.extend(tuple(int(v) for v in row) for row in T[ok])
    return out


def preserves_all_subset_joins(values, L, N):
    """Check f(join S) = join f(S) for every subset S of L."""
    f = list(values)
    for r in range(len(L) + 1):
        for S in combinations(L.elements, r):
            if f[join_of_set(L, S)] != join_of_set(N, [f[s] for s in S]):
                return False
    return True


def frame_law_all_subsets(L):
    for a in L.elements:
        for r in range(len(L) + 1):
            for S in combinations(L.elements, r):
                lhs = int(L.meet[a, join_of_set(L, S)])
                if lhs != join_of_set(L, [int(L.meet[a, s]) for s in S]):
                    return False
    return True


def _closed_subsets(n, bottom, join, ops):
    """Subsets containing bottom, closed under ``join`` and each unary op in ``ops``."""
    bits = all_subsets_mask(n)
    ok = bits[:, bottom].copy()
    for a in range(n):
        for b in range(a + 1, n):
            ok &= ~(bits[:, a] & bits[:, b]) | bits[:, join[a, b]]
    for op in ops:
        for x in range(n):
            ok &= ~bits[:, x] | bits[:, op[x]]
    return _sort(_rows_to_sets(bits[ok]))


def left_ideals_by_filter(Q):
    P = Q.product
    return _closed_subsets(len(Q), Q.bottom, Q.lattice.join, [P[a] for a in Q.elements])


def submodules_by_filter(M):
    return _closed_subsets(len(M), M.bottom, M.carrier.join,
                           [M.action[a] for a in M.quantale.elements])


def all_lattices(n):
    """All lattices on n elements up to isomorphism (bottom = 0, top = n-1)."""
    from .lattice import lattice_isomorphisms

    labels = [f"x{i}" for i in range(n)]
    if n == 1:
        return [FiniteLattice.from_leq(labels, [[True]], "L1")]
    mid = list(range(1, n - 1))
    pairs = [(a, b) for a in mid for b in mid if a < b]
    found = []
    for choice in product((0, 1, 2), repeat=len(pairs)):
        leq = np.eye(n, dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                leq[a, b] = True
            elif c == 2:
                leq[b, a] = True
        if (_compose(leq, leq) & ~leq).any():
            continue
        try:
            L = FiniteLattice.from_leq(labels, leq, f"L{n}_{len(found)}")
        except Exception:
            continue
        if not any(next(lattice_isomorphisms(L, K), None) is not None for K in found):
            found.append(L)
    return found


def all_module_structures(Q, N):
    """Every module action of Q on N.

    Each row ``alpha.-`` must be a join-endomorphism, so rows range over the
    join-preserving tables of N found by :func:`join_maps_by_filter`; every
    combination is then checked against the module axioms.
    """
    from .qmodule import QModule, module_violation

    rows = join_maps_by_filter(N, N)
    n = len(N)
    ident = tuple(range(n))
    zero = tuple([N.bottom] * n)
    free = [a for a in Q.elements if a not in (Q.unit, Q.bottom)]
    out = []
    for combo in product(rows, repeat=len(free)):
        action = [None] * len(Q)
        action[Q.unit] = ident
        action[Q.bottom] = zero
        for a, r in zip(free, combo):
            action[a] = r
        if module_violation(Q, N, action) is None:
            out.append(QModule(Q, N, action))
    return out


def simple_modules_by_brute_force(Q, max_size=None):
    """Simple Q-modules on every lattice of size 2..max_size, up to isomorphism."""
    from .qmodule import are_isomorphic_modules

    max_size = max_size or len(Q)
    found = []
    for n in range(2, max_size + 1):
        for N in all_lattices(n):
            for M in all_module_structures(Q, N):
                if is_simple_by_filter(M) and not any(are_isomorphic_modules(M, K) for K in found):
                    found.append(M)
    return found


def is_simple_by_filter(M):
    if len(M) < 2:
        return False
    return len(submodules_by_filter(M)) == 2


def ideals_by_filter(R):
    n = len(R.elements)
    bits = all_subsets_mask(n)
    ok = bits[:, R.zero].copy()
    for a in range(n):
        for b in range(n):
            ok &= ~(bits[:, a] & bits[:, b]) | bits[:, R.add[a, b]]
    for r in range(n):
        for x in range(n):
            ok &= ~bits[:, x] | (bits[:, R.mul[r, x]] & bits[:, R.mul[x, r]])
    return _sort(_rows_to_sets(bits[ok]))


def rsubmodules_by_filter(M):
    n = len(M.elements)
    bits = all_subsets_mask(n)
    ok = bits[:, M.zero].copy()
    for a in range(n):
        for b in range(n):
            ok &= ~(bits[:, a] & bits[:, b]) | bits[:, M.add[a, b]]
    for r in range(len(M.ring.elements)):
        for x in range(n):
            ok &= ~bits[:, x] | bits[:, M.smul[r, x]]
    return _sort(_rows_to_sets(bits[ok]))
