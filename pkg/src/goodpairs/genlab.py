"""Instance generation and bulk verification sweeps.

Random 2-arc-strong digraphs come from a density model plus a repair loop
that patches deficient cuts one arc at a time; an optional minimization
pass then strips every arc whose removal keeps the connectivity, which
pushes instances toward the hard boundary of the property.  Exhaustive
streams cover all small digraphs and all small tournaments.

``verify_theorem_sample`` drives the constructive pipeline over a seeded
batch and tallies the outcomes into a report; digraphs that end without a
certificate are kept verbatim so a failure is always reproducible.
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .branchings import DEFAULT_NODE_BUDGET
from .connectivity import arc_connectivity
from .constructions import reduce_and_lift
from .digraph import MAX_VERTICES, Digraph, bits, serialize_digraph

GEN_KINDS = ("gnp-repair", "oriented-gnp-repair", "tournament", "arc-minimal")

_M64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Stable per-instance seed; avoids correlated streams across a sweep."""
    return _splitmix64((seed & _M64) ^ _splitmix64(index & _M64))


@dataclass(frozen=True)
class GenModel:
    """Recipe for one random 2-arc-strong digraph.

    kind: "gnp-repair" draws each ordered pair independently and repairs;
    "oriented-gnp-repair" draws each unordered pair and orients it, and
    the repair never closes a digon; "tournament" orients every pair and
    redraws until 2-arc-strong; "arc-minimal" is gnp-repair followed by
    the minimization pass.
    """

    kind: str
    n: int
    p: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.kind not in GEN_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if not 2 <= self.n <= MAX_VERTICES:
            raise ValueError(f"n must be between 2 and {MAX_VERTICES}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


def _repair_to_2_arc_strong(n: int, rows: list[int], oriented: bool) -> list[int] | None:
    """Add arcs across deficient cuts until every cut has two leaving arcs.

    The lex-lowest missing arc over the reported cut is added each round.
    In oriented mode arcs whose reversal is present are skipped; None is
    returned when only digon-closing arcs remain (caller redraws).
    """
    full = (1 << n) - 1
    for _ in range(2 * n * n + 4):
        d = Digraph(n, tuple(rows))
        lam, witness = arc_connectivity(d)
        if lam >= 2:
            return rows
        x = witness.x_set
        added = False
        for u in bits(x):
            cand = full & ~x & ~rows[u] & ~(1 << u)
            for v in bits(cand):
                if oriented and rows[v] >> u & 1:
                    continue
                rows[u] |= 1 << v
                added = True
                break
            if added:
                break
        if not added:
            return None
    raise AssertionError("repair loop failed to converge")  # pragma: no cover


def random_2arc_strong(model: GenModel) -> Digraph:
    """Draw a 2-arc-strong digraph according to the model, deterministically.

    The repair loop converges for the unrestricted model; the oriented
    models redraw (with a salted seed) when repair would need a digon,
    and tournaments redraw until the connectivity holds.
    """
    n = model.n
    if n < 3:
        raise ValueError("no digraph on fewer than 3 vertices is 2-arc-strong")
    if model.kind == "tournament" and n < 5:
        raise ValueError("no tournament on fewer than 5 vertices is 2-arc-strong")
    for attempt in range(1000):
        rng = random.Random(derive_seed(model.seed, attempt) if attempt else model.seed)
        rows = [0] * n
        if model.kind in ("gnp-repair", "arc-minimal"):
            for u in range(n):
                for v in range(n):
                    if u != v and rng.random() < model.p:
                        rows[u] |= 1 << v
            rows = _repair_to_2_arc_strong(n, rows, oriented=False)
        elif model.kind == "oriented-gnp-repair":
            for u in range(n):
                for v in range(u + 1, n):
                    if rng.random() < model.p:
                        if rng.getrandbits(1):
                            rows[u] |= 1 << v
                        else:
                            rows[v] |= 1 << u
            rows = _repair_to_2_arc_strong(n, rows, oriented=True)
        else:  # tournament
            for u in range(n):
                for v in range(u + 1, n):
                    if rng.getrandbits(1):
                        rows[u] |= 1 << v
                    else:
                        rows[v] |= 1 << u
            d = Digraph(n, tuple(rows))
            if arc_connectivity(d)[0] < 2:
                rows = None
        if rows is None:
            continue
        d = Digraph(n, tuple(rows))
        if model.kind == "arc-minimal":
            d = arc_minimize(d, rng.getrandbits(63))
        return d
    raise RuntimeError(
        f"could not draw a 2-arc-strong {model.kind} digraph on {n} vertices"
    )  # pragma: no cover


def arc_minimize(d: Digraph, seed: int) -> Digraph:
    """Strip arcs (in seeded random order) while the digraph stays 2-arc-strong.

    One pass suffices for a minimal result relative to the visiting order:
    an arc is removable exactly when two arc-disjoint paths from its tail
    to its head survive its removal, a single capped flow per arc.
    """
    from .connectivity import _max_flow

    lam, _ = arc_connectivity(d)
    if lam < 2:
        raise ValueError("arc_minimize expects a 2-arc-strong digraph")
    rng = random.Random(seed)
    arcs = list(d.arcs())
    rng.shuffle(arcs)
    rows = list(d.out_adj)
    for u, v in arcs:
        rows[u] &= ~(1 << v)
        value, _, _ = _max_flow(d.n, rows, u, v, cap=2)
        if value < 2:
            rows[u] |= 1 << v
    return Digraph(d.n, tuple(rows))


# ---------------------------------------------------------------------------
# exhaustive small streams


def enumerate_small(n: int, *, tournaments: bool = False, min_arcs: int = 0):
    """Yield every labeled digraph on n vertices (n <= 4), or every
    tournament (n <= 7), in a fixed order."""
    if tournaments:
        if n > 7:
            raise ValueError("tournament enumeration supports n <= 7")
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        for mask in range(1 << len(pairs)):
            rows = [0] * n
            for i, (u, v) in enumerate(pairs):
                if mask >> i & 1:
                    rows[u] |= 1 << v
                else:
                    rows[v] |= 1 << u
            if len(pairs) >= min_arcs:
                yield Digraph(n, tuple(rows))
    else:
        if n > 4:
            raise ValueError("full enumeration supports n <= 4")
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for mask in range(1 << len(pairs)):
            if mask.bit_count() < min_arcs:
                continue
            rows = [0] * n
            for i, (u, v) in enumerate(pairs):
                if mask >> i & 1:
                    rows[u] |= 1 << v
            yield Digraph(n, tuple(rows))


def canonical_form(d: Digraph) -> tuple[int, ...]:
    """Lexicographically least adjacency rows over all vertex relabelings.

    Two digraphs are isomorphic exactly when their forms agree.  Factorial
    cost, so n is capped at 7; meant for classifying small failure sets,
    not for deduplicating big streams.
    """
    if d.n > 7:
        raise ValueError("canonical_form supports n <= 7")
    n = d.n
    best: tuple[int, ...] | None = None
    for perm in itertools.permutations(range(n)):
        rows = [0] * n
        for u in range(n):
            r = d.out_adj[u]
            nr = 0
            while r:
                low = r & -r
                r ^= low
                nr |= 1 << perm[low.bit_length() - 1]
            rows[perm[u]] = nr
        t = tuple(rows)
        if best is None or t < best:
            best = t
    return best


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class VerificationReport:
    """Outcome tally of a seeded sweep; failures are kept reproducible."""

    n: int
    requested: int
    seed: int
    kinds: tuple[str, ...]
    node_budget: int
    found: int = 0
    failures: list[str] = field(default_factory=list)
    inconclusive: list[str] = field(default_factory=list)

    @property
    def tested(self) -> int:
        return self.found + len(self.failures) + len(self.inconclusive)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "requested": self.requested,
                "seed": self.seed,
                "kinds": list(self.kinds),
                "node_budget": self.node_budget,
                "tested": self.tested,
                "found": self.found,
                "failures": self.failures,
                "inconclusive": self.inconclusive,
            },
            indent=2,
        )

    def write_artifacts(self, directory: str | Path) -> Path:
        """Write report.json (plus failure digraphs, one per line) and
        return the directory."""
        path = Path(directory)
        path.mkdir(parents=True, exist_ok=True)
        (path / "report.json").write_text(self.to_json() + "\n")
        if self.failures:
            (path / "failures.d6").write_text("\n".join(self.failures) + "\n")
        if self.inconclusive:
            (path / "inconclusive.d6").write_text("\n".join(self.inconclusive) + "\n")
        return path


def _sweep_case(args: tuple[int, str, float, int, int]) -> tuple[str, str]:
    n, kind, p, seed, node_budget = args
    d = random_2arc_strong(GenModel(kind, n, p, seed))
    res, _ = reduce_and_lift(d, node_budget=node_budget)
    return res.status, serialize_digraph(d, "digraph6")


def verify_theorem_sample(
    n: int,
    count: int,
    seed: int,
    *,
    kinds: tuple[str, ...] = ("gnp-repair", "arc-minimal"),
    p: float = 0.3,
    jobs: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    artifact_dir: str | Path | None = None,
) -> VerificationReport:
    """Certify ``count`` seeded 2-arc-strong digraphs on n vertices.

    Instances cycle through ``kinds``; each gets its own derived seed, so
    the batch is reproducible arc for arc and independent of ``jobs``.
    Digraphs without a certificate land in the report (and on disk when
    ``artifact_dir`` is given); with the theorems' hypotheses met, both
    failure lists staying empty is the expected outcome.
    """
    if not 5 <= n <= 10:
        raise ValueError("sweeps cover 5 <= n <= 10")
    if count < 1:
        raise ValueError("count must be positive")
    if not kinds:
        raise ValueError("at least one generator kind is required")
    cases = [
        (n, kinds[i % len(kinds)], p, derive_seed(seed, i), node_budget)
        for i in range(count)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_sweep_case, cases, chunksize=32))
    else:
        results = [_sweep_case(c) for c in cases]
    report = VerificationReport(n, count, seed, tuple(kinds), node_budget)
    for status, d6 in results:
        if status == "found":
            report.found += 1
        elif status == "none":
            report.failures.append(d6)
        else:
            report.inconclusive.append(d6)
    if artifact_dir is not None and (report.failures or report.inconclusive):
        report.write_artifacts(artifact_dir)
    return report
