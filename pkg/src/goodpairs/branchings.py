"""Branchings, good-pair certificates, verification, and the exact solver.

An out-branching rooted at r is a spanning tree in which every vertex other
than r has exactly one incoming arc (its parent arc); an in-branching is the
dual with one outgoing arc per non-root vertex.  A good pair is an
out-branching plus an in-branching of the same digraph whose arc sets are
disjoint; the roots may differ.

Certificates carry one parent arc per non-root vertex and are checked by
independent linear-time verifiers that never share code with the builders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .digraph import Digraph, VertexSet, _in_rows, _scc_masks, bits, strong_decomposition

DEFAULT_NODE_BUDGET = 250_000


@dataclass(frozen=True, eq=True)
class Branching:
    """kind is "out" or "in"; parent maps each non-root vertex to its arc."""

    kind: str
    root: int
    parent: dict[int, tuple[int, int]]

    def arcs(self) -> set[tuple[int, int]]:
        return set(self.parent.values())

    def __hash__(self):  # dict field; identity hash is enough for our uses
        return id(self)


@dataclass(frozen=True)
class GoodPairCert:
    n: int
    out: Branching
    in_: Branching


@dataclass(frozen=True)
class SearchResult:
    """status is "found", "none" (definitive), or "inconclusive" (budget)."""

    status: str
    cert: GoodPairCert | None
    nodes: int


def branching_roots(d: Digraph, kind: str) -> VertexSet:
    """Vertices that can root a spanning branching of the given kind.

    Nonempty exactly when the strong decomposition has a single initial
    (kind "out") or terminal (kind "in") component, in which case the root
    set is that whole component.
    """
    if kind not in ("out", "in"):
        raise ValueError(f"kind must be 'out' or 'in', got {kind!r}")
    dec = strong_decomposition(d)
    comps = dec.initial_components() if kind == "out" else dec.terminal_components()
    return comps[0] if len(comps) == 1 else 0


def verify_branching(d: Digraph, b: Branching) -> str | None:
    """None if b is a valid spanning branching of d, else the first violation."""
    if b.kind not in ("out", "in"):
        return f"unknown kind {b.kind!r}"
    if not 0 <= b.root < d.n:
        return f"root {b.root} out of range"
    if b.root in b.parent:
        return f"root {b.root} has a parent arc"
    expected = set(range(d.n)) - {b.root}
    got = set(b.parent)
    if got != expected:
        missing = expected - got
        if missing:
            return f"vertex {min(missing)} has no parent arc"
        return f"unexpected vertex {min(got - expected)} in parent map"
    for v in sorted(b.parent):
        a, h = b.parent[v]
        if not (0 <= a < d.n and 0 <= h < d.n) or not d.has_arc(a, h):
            return f"parent arc ({a}, {h}) of {v} is not an arc of the digraph"
        if b.kind == "out" and h != v:
            return f"parent arc ({a}, {h}) of {v} must point at {v}"
        if b.kind == "in" and a != v:
            return f"parent arc ({a}, {h}) of {v} must start at {v}"
    # every vertex must reach the root along parent pointers without repeats
    for v in range(d.n):
        cur = v
        steps = 0
        while cur != b.root:
            arc = b.parent[cur]
            cur = arc[0] if b.kind == "out" else arc[1]
            steps += 1
            if steps > d.n:
                return f"parent pointers from {v} never reach the root"
    return None


def verify_good_pair(d: Digraph, cert: GoodPairCert) -> str | None:
    """None for a valid certificate, else the first violated invariant."""
    if cert.n != d.n:
        return f"certificate is for n={cert.n}, digraph has n={d.n}"
    if cert.out.kind != "out":
        return "first branching must have kind 'out'"
    if cert.in_.kind != "in":
        return "second branching must have kind 'in'"
    bad = verify_branching(d, cert.out)
    if bad:
        return f"out-branching: {bad}"
    bad = verify_branching(d, cert.in_)
    if bad:
        return f"in-branching: {bad}"
    shared = cert.out.arcs() & cert.in_.arcs()
    if shared:
        return f"arc {min(shared)} used by both branchings"
    return None


def reverse_cert(cert: GoodPairCert) -> GoodPairCert:
    """The certificate of the reversed digraph: kinds swap, arcs flip."""
    def flip(b: Branching, kind: str) -> Branching:
        return Branching(kind, b.root, {v: (h, a) for v, (a, h) in b.parent.items()})

    return GoodPairCert(cert.n, flip(cert.in_, "out"), flip(cert.out, "in"))


# ---------------------------------------------------------------------------
# JSON certificate interchange


def cert_to_json(cert: GoodPairCert) -> str:
    def branching_obj(b: Branching) -> dict:
        return {
            "root": b.root,
            "parent": {str(v): list(b.parent[v]) for v in sorted(b.parent)},
        }

    return json.dumps(
        {"n": cert.n, "out": branching_obj(cert.out), "in": branching_obj(cert.in_)}
    )


def cert_from_json(text: str) -> GoodPairCert:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"certificate is not valid JSON: {exc}") from None
    try:
        n = int(obj["n"])
        out_obj, in_obj = obj["out"], obj["in"]
        out = Branching(
            "out",
            int(out_obj["root"]),
            {int(v): (int(a[0]), int(a[1])) for v, a in out_obj["parent"].items()},
        )
        in_ = Branching(
            "in",
            int(in_obj["root"]),
            {int(v): (int(a[0]), int(a[1])) for v, a in in_obj["parent"].items()},
        )
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ValueError(f"malformed certificate object: {exc}") from None
    return GoodPairCert(n, out, in_)


# ---------------------------------------------------------------------------
# exact search


class _BudgetExceeded(Exception):
    pass


def _terminal_comp_count(n: int, adj: list[int]) -> int:
    count = 0
    for comp in _scc_masks(n, adj):
        for u in bits(comp):
            if adj[u] & ~comp:
                break
        else:
            count += 1
    return count


def _in_branching_completion(
    n: int, res: list[int], full: int, root_in: int | None
) -> tuple[int, dict[int, tuple[int, int]]] | None:
    """In-branching of the residual digraph, or None if none exists.

    The residual has one exactly when its strong decomposition has a single
    terminal component; the root must lie inside it.
    """
    terms = []
    for comp in _scc_masks(n, res):
        for u in bits(comp):
            if res[u] & ~comp:
                break
        else:
            terms.append(comp)
    if len(terms) != 1:
        return None
    term = terms[0]
    if root_in is not None:
        if not term >> root_in & 1:
            return None
        t = root_in
    else:
        t = (term & -term).bit_length() - 1
    parent: dict[int, tuple[int, int]] = {}
    settled = 1 << t
    while settled != full:
        for v in range(n):
            if settled >> v & 1:
                continue
            hit = res[v] & settled
            if hit:
                w = (hit & -hit).bit_length() - 1
                parent[v] = (v, w)
                settled |= 1 << v
                break
        else:
            return None  # unreachable when the terminal component is unique
    return t, parent


def find_good_pair_exact(
    d: Digraph,
    *,
    root_out: int | None = None,
    root_in: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> SearchResult:
    """Exhaustive search for a good pair, with optional root constraints.

    Out-branchings are grown depth-first one frontier arc at a time; the
    lowest candidate arc is either included in the tree or excluded from
    every tree of that subtree of the search, so no branching is visited
    twice.  A partial tree is abandoned as soon as the residual digraph
    (host minus tree arcs) stops having exactly one terminal strong
    component, some unreached vertex loses its last usable in-arc, or some
    unreached vertex is no longer reachable through usable arcs.  Budget
    exhaustion yields "inconclusive", which is distinct from the

    definitive "none" produced by exhausting the whole search space.
    """
    n = d.n
    full = d.full_mask
    if root_out is not None and not 0 <= root_out < n:
        raise ValueError(f"root_out {root_out} out of range")
    if root_in is not None and not 0 <= root_in < n:
        raise ValueError(f"root_in {root_in} out of range")
    adj = list(d.out_adj)
    in_all = _in_rows(n, adj)
    roots = branching_roots(d, "out")
    if root_out is not None:
        roots &= 1 << root_out
    if root_in is not None and not branching_roots(d, "in") >> root_in & 1:
        roots = 0
    nodes = 0
    found: list[GoodPairCert] = []

    res = list(adj)          # host arcs minus current tree arcs
    avail = list(adj)        # res minus arcs excluded from the future tree
    forb_in = [0] * n        # per head: tails whose arc was excluded
    out_parent: dict[int, tuple[int, int]] = {}

    def prunable(tree: int) -> bool:
        rest = full ^ tree
        probe = rest
        while probe:
            low = probe & -probe
            v = low.bit_length() - 1
            probe ^= low
            if not in_all[v] & ~forb_in[v]:
                return True
        reach = tree
        frontier = tree
        while frontier and reach != full:
            step = 0
            f = frontier
            while f:
                low = f & -f
                step |= avail[low.bit_length() - 1]
                f ^= low
            frontier = step & ~reach
            reach |= frontier
        if reach != full:
            return True
        return _terminal_comp_count(n, res) != 1

    def extend(tree: int) -> bool:
        nonlocal nodes
        if tree == full:
            done = _in_branching_completion(n, res, full, root_in)
            if done is None:
                return False
            t, in_parent = done
            root = next(iter(set(range(n)) - set(out_parent))) if n > 1 else 0
            found.append(
                GoodPairCert(
                    n,
                    Branching("out", root, dict(out_parent)),
                    Branching("in", t, in_parent),
                )
            )
            return True
        excluded: list[tuple[int, int]] = []
        try:
            while not prunable(tree):
                arc = None
                probe = tree
                while probe:
                    low = probe & -probe
                    u = low.bit_length() - 1
                    probe ^= low
                    cand = avail[u] & ~tree
                    if cand:
                        v = (cand & -cand).bit_length() - 1
                        if arc is None or (u, v) < arc:
                            arc = (u, v)
                if arc is None:
                    return False
                nodes += 1
                if nodes > node_budget:
                    raise _BudgetExceeded
                u, v = arc
                ubit, vbit = 1 << u, 1 << v
                res[u] &= ~vbit
                avail[u] &= ~vbit
                out_parent[v] = (u, v)
                ok = extend(tree | vbit)
                res[u] |= vbit
                if ok:
                    return True
                del out_parent[v]
                # exclude the arc from every remaining tree at this node
                forb_in[v] |= ubit
                excluded.append((u, v))
            return False
        finally:
            for eu, ev in excluded:
                avail[eu] |= 1 << ev
                forb_in[ev] &= ~(1 << eu)

    status = "none"
    for r in bits(roots):
        out_parent.clear()
        try:
            if extend(1 << r):
                cert = found[-1]
                bad = verify_good_pair(d, cert)
                if bad:  # pragma: no cover - guards the builder
                    raise AssertionError(f"solver emitted invalid certificate: {bad}")
                return SearchResult("found", cert, nodes)
        except _BudgetExceeded:
            return SearchResult("inconclusive", None, nodes)
    return SearchResult(status, None, nodes)


# ---------------------------------------------------------------------------
# brute-force enumeration (small n oracle)


def enumerate_branchings(
    d: Digraph, kind: str, root: int, limit: int | None = None
) -> Iterator[Branching]:
    """Every spanning branching of the given kind and root, no duplicates.

    Brute force over parent choices in ascending vertex order with an
    incremental cycle check; intended as a ground-truth oracle, so n is
    capped at 8.
    """
    if d.n > 8:
        raise ValueError("enumerate_branchings supports n <= 8")
    if kind not in ("out", "in"):
        raise ValueError(f"kind must be 'out' or 'in', got {kind!r}")
    if not 0 <= root < d.n:
        raise ValueError(f"root {root} out of range")
    n = d.n
    cand_rows = _in_rows(n, d.out_adj) if kind == "out" else list(d.out_adj)
    order = [v for v in range(n) if v != root]
    chosen: dict[int, int] = {}  # vertex -> parent vertex
    emitted = 0

    def creates_cycle(v: int, p: int) -> bool:
        cur = p
        while cur != root and cur in chosen:
            if cur == v:
                return True
            cur = chosen[cur]
        return cur == v

    def rec(i: int) -> Iterator[Branching]:
        nonlocal emitted
        if limit is not None and emitted >= limit:
            return
        if i == len(order):
            if kind == "out":
                parent = {v: (p, v) for v, p in chosen.items()}
            else:
                parent = {v: (v, p) for v, p in chosen.items()}
            emitted += 1
            yield Branching(kind, root, parent)
            return
        v = order[i]
        for p in bits(cand_rows[v]):
            if p == v or creates_cycle(v, p):
                continue
            chosen[v] = p
            yield from rec(i + 1)
            del chosen[v]
            if limit is not None and emitted >= limit:
                return

    return rec(0)
