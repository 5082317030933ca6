"""Arc connectivity via unit-capacity max-flow, plus branching packings.

Flows are computed by repeated augmenting BFS on bitmask residual rows:
``fwd[u]`` holds heads of unused arcs out of u, ``bwd[u]`` holds the
reversals of used arcs.  Every loop scans vertices in ascending order, so
all results and witnesses are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .branchings import Branching
from .digraph import Digraph, Dipath, VertexSet, bits


@dataclass(frozen=True)
class CutWitness:
    """Vertex set whose out- or in-degree equals value (a certified cut)."""

    x_set: VertexSet
    direction: str  # "out" | "in"
    value: int


@dataclass(frozen=True)
class PathPacking:
    s: int
    t: int
    value: int
    paths: tuple[Dipath, ...]


def cut_degree(d: Digraph, x: VertexSet, direction: str) -> int:
    """Number of arcs leaving ("out") or entering ("in") the set x."""
    if x == 0 or x == d.full_mask:
        raise ValueError("cut is defined only for nonempty proper vertex sets")
    if x & ~d.full_mask:
        raise ValueError("vertex set mentions vertices >= n")
    if direction == "out":
        return sum(d.out_adj[u].bit_count() - (d.out_adj[u] & x).bit_count() for u in bits(x))
    if direction == "in":
        total = 0
        for u in range(d.n):
            if not x >> u & 1:
                total += (d.out_adj[u] & x).bit_count()
        return total
    raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")


def _augment(n: int, fwd: list[int], bwd: list[int], s: int, t: int) -> bool:
    parent = [-1] * n
    parent[s] = s
    seen = 1 << s
    queue = [s]
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        cand = (fwd[u] | bwd[u]) & ~seen
        seen |= cand
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            parent[v] = u
            if v == t:
                while v != s:
                    p = parent[v]
                    vbit = 1 << v
                    if fwd[p] & vbit:
                        fwd[p] &= ~vbit
                        bwd[v] |= 1 << p
                    else:
                        bwd[p] &= ~vbit
                        fwd[v] |= 1 << p
                    v = p
                return True
            queue.append(v)
    return False


def _max_flow(
    n: int, adj: list[int] | tuple[int, ...], s: int, t: int, cap: int | None = None
) -> tuple[int, list[int], list[int]]:
    fwd = list(adj)
    bwd = [0] * n
    value = 0
    while cap is None or value < cap:
        if not _augment(n, fwd, bwd, s, t):
            break
        value += 1
    return value, fwd, bwd


def _residual_reach(n: int, fwd: list[int], bwd: list[int], s: int) -> int:
    reach = 1 << s
    frontier = reach
    while frontier:
        step = 0
        while frontier:
            low = frontier & -frontier
            step |= fwd[low.bit_length() - 1] | bwd[low.bit_length() - 1]
            frontier ^= low
        frontier = step & ~reach
        reach |= frontier
    return reach


def _residual_coreach(n: int, fwd: list[int], bwd: list[int], t: int) -> int:
    radj = [0] * n
    for u in range(n):
        av = fwd[u] | bwd[u]
        while av:
            low = av & -av
            radj[low.bit_length() - 1] |= 1 << u
            av ^= low
    reach = 1 << t
    frontier = reach
    while frontier:
        step = 0
        while frontier:
            low = frontier & -frontier
            step |= radj[low.bit_length() - 1]
            frontier ^= low
        frontier = step & ~reach
        reach |= frontier
    return reach


def max_arc_disjoint_paths(d: Digraph, s: int, t: int) -> PathPacking:
    """Maximum set of pairwise arc-disjoint s-t dipaths (Menger via max-flow)."""
    if not (0 <= s < d.n and 0 <= t < d.n):
        raise ValueError("endpoint out of range")
    if s == t:
        raise ValueError("endpoints must differ")
    value, fwd, _ = _max_flow(d.n, d.out_adj, s, t)
    used = [d.out_adj[u] & ~fwd[u] for u in range(d.n)]
    paths = []
    for _ in range(value):
        walk = [s]
        cur = s
        while cur != t:
            step = used[cur] & -used[cur]  # lowest remaining flow arc
            nxt = step.bit_length() - 1
            used[cur] ^= step
            walk.append(nxt)
            cur = nxt
        paths.append(Dipath(tuple(walk)))
    return PathPacking(s, t, value, tuple(paths))


def arc_connectivity(d: Digraph) -> tuple[int, CutWitness]:
    """Global arc-connectivity with a certifying cut.

    lambda(D) = min over proper nonempty X of the out-degree of X, computed
    as the minimum over t != 0 of maxflow(0, t) and maxflow(t, 0).  The
    witness is the source side of the first minimum cut attained.
    """
    if d.n < 2:
        raise ValueError("arc connectivity needs at least 2 vertices")
    n = d.n
    best: int | None = None
    witness = 0
    for t in range(1, n):
        for s, goal in ((0, t), (t, 0)):
            value, fwd, bwd = _max_flow(n, d.out_adj, s, goal, cap=best)
            if best is None or value < best:
                best = value
                witness = _residual_reach(n, fwd, bwd, s)
        if best == 0:
            break
    assert best is not None
    return best, CutWitness(witness, "out", best)


def edmonds_branchings(d: Digraph, z: int, k: int) -> list[Branching] | CutWitness:
    """k arc-disjoint out-branchings rooted at z, or a certified obstruction.

    Such a packing exists iff every nonempty X avoiding z has in-degree at
    least k; when it does not, the returned witness is a set with in-degree
    below k.  Construction grows each branching greedily, accepting a
    frontier arc only when the leftover digraph still admits the remaining
    k-1, k-2, ... branchings (checked by capped max-flow feasibility from z
    to every other vertex).
    """
    n = d.n
    if not 0 <= z < n:
        raise ValueError(f"root {z} out of range")
    if k < 1:
        raise ValueError("k must be >= 1")
    for t in range(n):
        if t == z:
            continue
        value, fwd, bwd = _max_flow(n, d.out_adj, z, t, cap=k)
        if value < k:
            x = _residual_coreach(n, fwd, bwd, t)
            return CutWitness(x, "in", value)

    def feasible(rows: list[int], need: int) -> bool:
        for t in range(n):
            if t == z:
                continue
            if _max_flow(n, rows, z, t, cap=need)[0] < need:
                return False
        return True

    available = list(d.out_adj)
    result = []
    for i in range(k):
        rem = k - i - 1
        res = list(available)
        parent: dict[int, tuple[int, int]] = {}
        tree = 1 << z
        full = d.full_mask
        while tree != full:
            chosen = None
            probe = tree
            while probe and chosen is None:
                low = probe & -probe
                u = low.bit_length() - 1
                probe ^= low
                cand = res[u] & ~tree
                while cand:
                    vlow = cand & -cand
                    v = vlow.bit_length() - 1
                    cand ^= vlow
                    if rem == 0:
                        chosen = (u, v)
                        break
                    res[u] &= ~vlow
                    if feasible(res, rem):
                        chosen = (u, v)
                        res[u] |= vlow
                        break
                    res[u] |= vlow
            if chosen is None:  # pragma: no cover - contradicts the theorem
                raise AssertionError("no safe arc although the cut condition holds")
            u, v = chosen
            parent[v] = (u, v)
            tree |= 1 << v
            res[u] &= ~(1 << v)
        result.append(Branching("out", z, parent))
        available = res
    return result
