"""Independent reference implementations used to check the library.

Everything here is deliberately naive: subset enumeration for cuts,
transitive closure for strong components, a fraction-free determinant for
counting branchings, and a cross product of exhaustively enumerated
branchings for the good-pair decision.  Nothing imports the algorithms
under test beyond plain data types and the branching enumerator.
"""

from __future__ import annotations

import random

from goodpairs import Digraph, bits, enumerate_branchings


def rand_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    rows = [0] * n
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                rows[u] |= 1 << v
    return Digraph(n, tuple(rows))


def out_cut(d: Digraph, x: int) -> int:
    """Number of arcs leaving the vertex set x."""
    total = 0
    for u in bits(x):
        total += (d.out_adj[u] & ~x).bit_count()
    return total


def in_cut(d: Digraph, x: int) -> int:
    total = 0
    for u in range(d.n):
        if not x >> u & 1:
            total += (d.out_adj[u] & x).bit_count()
    return total


def subset_min_cut(d: Digraph, s: int, t: int) -> int:
    """Minimum out-cut over all vertex sets containing s but not t."""
    best = None
    full = d.full_mask
    for x in range(1, full + 1):
        if x >> s & 1 and not x >> t & 1:
            c = out_cut(d, x)
            if best is None or c < best:
                best = c
    return best


def lambda_enum(d: Digraph) -> int:
    """Arc connectivity by enumerating every proper nonempty subset."""
    best = None
    for x in range(1, d.full_mask):
        c = out_cut(d, x)
        if best is None or c < best:
            best = c
    return best


def edmonds_feasible(d: Digraph, z: int, k: int) -> bool:
    """Cut condition for k arc-disjoint out-branchings rooted at z."""
    for x in range(1, d.full_mask + 1):
        if x >> z & 1:
            continue
        if in_cut(d, x) < k:
            return False
    return True


def closure_sccs(d: Digraph) -> set[int]:
    """Strong components as masks, via reachability closure."""
    n = d.n
    reach = []
    for s in range(n):
        seen = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= d.out_adj[u]
            frontier = nxt & ~seen
            seen |= nxt
        reach.append(seen)
    comps = set()
    for u in range(n):
        comp = 0
        for v in range(n):
            if reach[u] >> v & 1 and reach[v] >> u & 1:
                comp |= 1 << v
        comps.add(comp)
    return comps


def _int_det(mat: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [row[:] for row in mat]
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def count_out_branchings(d: Digraph, root: int) -> int:
    """Directed matrix-tree count of spanning out-branchings at root."""
    n = d.n
    a = [[1 if d.out_adj[u] >> v & 1 else 0 for v in range(n)] for u in range(n)]
    indeg = [sum(a[u][v] for u in range(n)) for v in range(n)]
    lap = [
        [(indeg[v] if u == v else 0) - a[u][v] for v in range(n) if v != root]
        for u in range(n)
        if u != root
    ]
    return _int_det(lap)


def good_pair_exists_bruteforce(d: Digraph) -> bool:
    """Cross product of all out- and in-branchings over all root pairs."""
    for r_out in range(d.n):
        outs = [frozenset(b.arcs()) for b in enumerate_branchings(d, "out", r_out)]
        if not outs:
            continue
        for r_in in range(d.n):
            for b in enumerate_branchings(d, "in", r_in):
                arcs_in = b.arcs()
                if any(not (arcs_in & ao) for ao in outs):
                    return True
    return False


def independent_set_size(d: Digraph) -> int:
    """Largest set with no arcs inside, by subset enumeration."""
    best = 0
    for x in range(1, d.full_mask + 1):
        ok = True
        for u in bits(x):
            if d.out_adj[u] & x:
                ok = False
                break
        if ok:
            best = max(best, x.bit_count())
    return best
