"""Branching verification, certificates, enumeration, exact search."""

import random

import pytest

from goodpairs import (
    Branching,
    Digraph,
    GoodPairCert,
    branching_roots,
    cert_from_json,
    cert_to_json,
    enumerate_branchings,
    find_good_pair_exact,
    reverse,
    reverse_cert,
    verify_branching,
    verify_good_pair,
)
from goodpairs.digraph import from_arcs

from oracles import count_out_branchings, good_pair_exists_bruteforce, rand_digraph

BI3 = Digraph(3, (0b110, 0b101, 0b011))
C3 = Digraph(3, (0b010, 0b100, 0b001))


class TestBranchingRoots:
    def test_cycle_all_roots(self):
        assert branching_roots(C3, "out") == 0b111
        assert branching_roots(C3, "in") == 0b111

    def test_path_digraph(self):
        d = from_arcs(3, [(0, 1), (1, 2)])
        assert branching_roots(d, "out") == 0b001
        assert branching_roots(d, "in") == 0b100

    def test_two_sources(self):
        d = from_arcs(3, [(0, 2), (1, 2)])
        assert branching_roots(d, "out") == 0
        assert branching_roots(d, "in") == 0b100

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            branching_roots(C3, "up")


class TestVerifyBranching:
    def test_valid(self):
        b = Branching("out", 0, {1: (0, 1), 2: (1, 2)})
        assert verify_branching(C3, b) is None

    def test_violations(self):
        assert "kind" in verify_branching(C3, Branching("up", 0, {}))
        assert "root" in verify_branching(C3, Branching("out", 9, {}))
        assert "no parent" in verify_branching(C3, Branching("out", 0, {1: (0, 1)}))
        b = Branching("out", 0, {1: (0, 1), 2: (0, 2)})
        assert "not an arc" in verify_branching(C3, b)
        b = Branching("out", 0, {1: (1, 2), 2: (1, 2)})
        assert "must point at" in verify_branching(C3, b)
        b = Branching("in", 0, {1: (2, 0), 2: (2, 0)})
        assert "must start at" in verify_branching(C3, b)
        # two vertices pointing at each other never reach the root
        d = from_arcs(4, [(0, 1), (2, 3), (3, 2)])
        b = Branching("out", 0, {1: (0, 1), 2: (3, 2), 3: (2, 3)})
        assert "never reach the root" in verify_branching(d, b)

    def test_root_with_parent(self):
        b = Branching("out", 0, {0: (1, 0), 1: (0, 1), 2: (1, 2)})
        assert "root" in verify_branching(C3, b)


class TestGoodPairVerification:
    def _pair(self):
        return find_good_pair_exact(BI3).cert

    def test_valid(self):
        assert verify_good_pair(BI3, self._pair()) is None

    def test_n_mismatch(self):
        cert = self._pair()
        bad = GoodPairCert(4, cert.out, cert.in_)
        assert "n=4" in verify_good_pair(BI3, bad)

    def test_kind_mix_up(self):
        cert = self._pair()
        assert "kind 'out'" in verify_good_pair(BI3, GoodPairCert(3, cert.in_, cert.in_))
        assert "kind 'in'" in verify_good_pair(BI3, GoodPairCert(3, cert.out, cert.out))

    def test_shared_arc_detected(self):
        out = Branching("out", 0, {1: (0, 1), 2: (1, 2)})
        in_ = Branching("in", 0, {1: (1, 2), 2: (2, 0)})
        d = from_arcs(3, [(0, 1), (1, 2), (2, 0)])
        assert "used by both" in verify_good_pair(d, GoodPairCert(3, out, in_))

    def test_reverse_cert_duality(self):
        cert = self._pair()
        rc = reverse_cert(cert)
        assert verify_good_pair(reverse(BI3), rc) is None
        assert rc.out.root == cert.in_.root and rc.in_.root == cert.out.root


class TestCertJson:
    def test_frozen_layout(self):
        cert = find_good_pair_exact(BI3, root_out=0, root_in=0).cert
        assert cert_to_json(cert) == (
            '{"n": 3, "out": {"root": 0, "parent": {"1": [0, 1], "2": [0, 2]}}, '
            '"in": {"root": 0, "parent": {"1": [1, 0], "2": [2, 0]}}}'
        )

    def test_round_trip(self):
        cert = find_good_pair_exact(BI3).cert
        back = cert_from_json(cert_to_json(cert))
        assert back.n == cert.n
        assert back.out.root == cert.out.root and back.out.parent == cert.out.parent
        assert back.in_.root == cert.in_.root and back.in_.parent == cert.in_.parent

    @pytest.mark.parametrize(
        "text",
        ["not json", "{}", '{"n": 3, "out": {}, "in": {}}',
         '{"n": 3, "out": {"root": 0, "parent": {"1": [0]}}, "in": {"root": 0, "parent": {}}}'],
    )
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            cert_from_json(text)


class TestEnumerateBranchings:
    def test_matches_matrix_tree_counts(self):
        rng = random.Random(17)
        for _ in range(60):
            n = rng.randint(2, 6)
            d = rand_digraph(rng, n, rng.uniform(0.2, 0.9))
            root = rng.randrange(n)
            got = list(enumerate_branchings(d, "out", root))
            assert len(got) == count_out_branchings(d, root)
            assert len({frozenset(b.arcs()) for b in got}) == len(got)
            for b in got[:5]:
                assert verify_branching(d, b) is None
            # in-branchings equal out-branchings of the reverse
            got_in = list(enumerate_branchings(d, "in", root))
            assert len(got_in) == count_out_branchings(reverse(d), root)

    def test_limit(self):
        assert len(list(enumerate_branchings(BI3, "out", 0, limit=2))) == 2

    def test_guards(self):
        with pytest.raises(ValueError):
            enumerate_branchings(Digraph(9, (0,) * 9), "out", 0)
        with pytest.raises(ValueError):
            enumerate_branchings(BI3, "sideways", 0)
        with pytest.raises(ValueError):
            enumerate_branchings(BI3, "out", 7)


class TestExactSearch:
    def test_found_and_verified(self):
        res = find_good_pair_exact(BI3)
        assert res.status == "found"
        assert verify_good_pair(BI3, res.cert) is None

    def test_none_on_cycle(self):
        res = find_good_pair_exact(C3)
        assert res.status == "none" and res.cert is None

    def test_single_vertex(self):
        res = find_good_pair_exact(Digraph(1, (0,)))
        assert res.status == "found"

    def test_root_constraints_respected(self):
        for r1 in range(3):
            for r2 in range(3):
                res = find_good_pair_exact(BI3, root_out=r1, root_in=r2)
                assert res.status == "found"
                assert res.cert.out.root == r1 and res.cert.in_.root == r2

    def test_impossible_root(self):
        d = from_arcs(3, [(0, 1), (1, 2), (2, 1), (1, 0), (0, 2)])
        # vertex 2 cannot root an out-branching spanning {0,1} disjointly..
        # just check consistency: forcing roots never invents pairs
        base = find_good_pair_exact(d).status
        for r in range(3):
            forced = find_good_pair_exact(d, root_out=r).status
            if base == "none":
                assert forced == "none"

    def test_root_out_of_range(self):
        with pytest.raises(ValueError):
            find_good_pair_exact(BI3, root_out=5)
        with pytest.raises(ValueError):
            find_good_pair_exact(BI3, root_in=-1)

    def test_budget_inconclusive(self):
        # a spanning tree needs 7 arc inclusions, so a budget of 1 must trip
        full = Digraph(8, tuple(0b11111111 ^ (1 << u) for u in range(8)))
        res = find_good_pair_exact(full, node_budget=1)
        assert res.status == "inconclusive"
        assert res.cert is None and res.nodes >= 1

    def test_matches_bruteforce_on_triples(self):
        rng = random.Random(23)
        for _ in range(80):
            d = rand_digraph(rng, rng.randint(2, 4), rng.uniform(0.2, 1.0))
            res = find_good_pair_exact(d)
            assert (res.status == "found") == good_pair_exists_bruteforce(d)
