"""Flows, cuts, connectivity, and disjoint branchings."""

import random

import pytest

from goodpairs import (
    Digraph,
    CutWitness,
    arc_connectivity,
    cut_degree,
    edmonds_branchings,
    max_arc_disjoint_paths,
    verify_branching,
    verify_dipath,
)
from goodpairs.digraph import from_arcs

from oracles import edmonds_feasible, in_cut, lambda_enum, out_cut, rand_digraph, subset_min_cut

BI3 = Digraph(3, (0b110, 0b101, 0b011))
C3 = Digraph(3, (0b010, 0b100, 0b001))


class TestCutDegree:
    def test_directions(self):
        d = from_arcs(3, [(0, 1), (0, 2), (2, 1)])
        assert cut_degree(d, 0b001, "out") == 2
        assert cut_degree(d, 0b001, "in") == 0
        assert cut_degree(d, 0b010, "in") == 2
        assert cut_degree(d, 0b110, "out") == 0

    def test_rejects_trivial_sets(self):
        with pytest.raises(ValueError):
            cut_degree(C3, 0, "out")
        with pytest.raises(ValueError):
            cut_degree(C3, 0b111, "out")
        with pytest.raises(ValueError):
            cut_degree(C3, 0b001, "sideways")


class TestPathPacking:
    def test_bi3(self):
        p = max_arc_disjoint_paths(BI3, 0, 2)
        assert p.value == 2 and p.s == 0 and p.t == 2
        assert len(p.paths) == 2

    def test_no_path(self):
        d = from_arcs(2, [(1, 0)])
        p = max_arc_disjoint_paths(d, 0, 1)
        assert p.value == 0 and p.paths == ()

    def test_rejects_equal_endpoints(self):
        with pytest.raises(ValueError):
            max_arc_disjoint_paths(C3, 1, 1)

    def test_matches_subset_min_cut(self):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(2, 8)
            d = rand_digraph(rng, n, rng.uniform(0.1, 0.8))
            s, t = rng.sample(range(n), 2)
            packing = max_arc_disjoint_paths(d, s, t)
            assert packing.value == subset_min_cut(d, s, t)
            used = set()
            for path in packing.paths:
                assert verify_dipath(d, path) is None
                assert path.vertices[0] == s and path.vertices[-1] == t
                for arc in path.arcs():
                    assert arc not in used
                    used.add(arc)


class TestArcConnectivity:
    def test_bi3_witness(self):
        lam, w = arc_connectivity(BI3)
        assert lam == 2
        assert w == CutWitness(x_set=0b001, direction="out", value=2)

    def test_c3(self):
        lam, w = arc_connectivity(C3)
        assert lam == 1
        assert out_cut(C3, w.x_set) == 1

    def test_disconnected(self):
        d = from_arcs(2, [])
        lam, w = arc_connectivity(d)
        assert lam == 0

    def test_single_vertex_rejected(self):
        with pytest.raises(ValueError):
            arc_connectivity(Digraph(1, (0,)))

    def test_matches_enumeration(self):
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randint(2, 8)
            d = rand_digraph(rng, n, rng.uniform(0.1, 0.9))
            lam, w = arc_connectivity(d)
            assert lam == lambda_enum(d)
            # the witness really is a tight cut
            assert 0 < w.x_set < d.full_mask
            assert out_cut(d, w.x_set) == lam


class TestEdmonds:
    def test_c3_blocking_cut(self):
        got = edmonds_branchings(C3, 0, 2)
        assert got == CutWitness(x_set=0b010, direction="in", value=1)

    def test_bi3_two_branchings(self):
        got = edmonds_branchings(BI3, 0, 2)
        assert isinstance(got, list) and len(got) == 2
        seen = set()
        for b in got:
            assert b.kind == "out" and b.root == 0
            assert verify_branching(BI3, b) is None
            arcs = frozenset(b.arcs())
            assert not any(arcs & other for other in seen)
            seen.add(arcs)

    def test_single_branching(self):
        got = edmonds_branchings(C3, 1, 1)
        assert isinstance(got, list) and len(got) == 1
        assert verify_branching(C3, got[0]) is None

    def test_bad_input(self):
        with pytest.raises(ValueError):
            edmonds_branchings(C3, 5, 1)
        with pytest.raises(ValueError):
            edmonds_branchings(C3, 0, 0)

    def test_matches_cut_oracle(self):
        rng = random.Random(31)
        for _ in range(150):
            n = rng.randint(3, 7)
            d = rand_digraph(rng, n, rng.uniform(0.2, 0.9))
            z = rng.randrange(n)
            k = rng.randint(1, 3)
            got = edmonds_branchings(d, z, k)
            feasible = edmonds_feasible(d, z, k)
            if feasible:
                assert isinstance(got, list) and len(got) == k
                used = set()
                for b in got:
                    assert verify_branching(d, b) is None
                    for arc in b.arcs():
                        assert arc not in used
                        used.add(arc)
            else:
                assert isinstance(got, CutWitness)
                assert got.direction == "in"
                assert not got.x_set >> z & 1
                assert in_cut(d, got.x_set) == got.value < k
