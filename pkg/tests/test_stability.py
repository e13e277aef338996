from collections import Counter

import pytest
from hypothesis import given, strategies as st

import oracles as O
from conftest import SMALL, bigraphs
from cutperc.bigraph import Bigraph, ColoredBigraph, enumerate_automorphisms, monochromatic
from cutperc.catalog import complete, even_cycle, path
from cutperc.folds import FoldSet, enumerate_folds
from cutperc.percolation import LEFT, apply_fold, reachability_digraph
from cutperc.stability import (DisconnectedInput, NonInvariantFolds, StabilityQuery, canonical_partition,
                               check_obstruction_equivalence, equal_block_partitions, is_fold_stable,
                               is_left_symmetrically_fold_stable, is_strongly_fold_stable,
                               is_symmetrically_fold_stable, left_color_symmetries, set_partitions, tensor,
                               verify_cutperc_theorem, verify_leftcutperc_theorem)

K12 = complete(1, 2)
C4 = even_cycle(2)
C6 = even_cycle(3)
P3 = path(3)


def query(G, c, folds=None):
    return StabilityQuery(G, c, None, folds)


class TestTensor:
    def test_monochromatic(self):
        t = tensor((0, 0), monochromatic(C4), C4)
        assert len(set(t)) == 1

    def test_commutes_with_folding(self):
        c = monochromatic(C4)
        for l in set_partitions(C4.n1):
            for fold in enumerate_folds(ColoredBigraph(C4, c)):
                folded_l = tuple(l[fold.left_map[u]] for u in range(C4.n1))
                assert apply_fold(tensor(l, c, C4), fold, LEFT) == tensor(folded_l, c, C4)

    def test_single_left_vertex(self):
        assert len(set(tensor((7,), (0, 0), K12))) == 1


class TestFoldStable:
    def test_monochromatic(self, small_graph):
        rep = is_fold_stable(query(small_graph, monochromatic(small_graph)))
        assert rep.verdict
        assert all(g is not None for g in rep.iso_witness.values())

    def test_k12_rainbow(self):
        assert not is_fold_stable(query(K12, (1, 2))).verdict

    def test_no_folds(self):
        assert is_fold_stable(query(C6, tuple(range(6)), FoldSet(C6, []))).verdict

    def test_witnesses_are_isomorphisms(self):
        G = C6
        for c in set_partitions(G.m):
            rep = is_fold_stable(query(G, c))
            for i, g in rep.iso_witness.items():
                d = apply_fold(c, enumerate_folds(G)[i], LEFT)
                assert O.isomorphic(*(O_flag(G, x) for x in (c, d)))
                ep = G.edge_perm(g)
                assert all(d[ep[e]] == c[e] for e in range(G.m))


def O_flag(G, c):
    from cutperc.bigraph import Flag
    return Flag(ColoredBigraph(G, c))


class TestStrong:
    def test_monochromatic(self, small_graph):
        rep = is_strongly_fold_stable(query(small_graph, monochromatic(small_graph)))
        assert rep.verdict
        folds = enumerate_folds(small_graph)
        assert set(rep.inverse_witness) == set(range(len(folds)))
        for i, h in rep.inverse_witness.items():
            fix = frozenset(k for k in range(small_graph.n) if h[k] == k)
            assert fix == folds[i].fixed
            # f itself is an admissible inverse for a constant coloring
            assert any(g.perm == folds[i].perm and g.side == folds[i].side for g in folds)

    def test_implies_plain(self, small_graph):
        for c in set_partitions(small_graph.m, 3):
            if is_strongly_fold_stable(query(small_graph, c)).verdict:
                assert is_fold_stable(query(small_graph, c)).verdict

    def test_plain_implies_strong_on_c6(self):
        for c in set_partitions(C6.m):
            if is_fold_stable(query(C6, c)).verdict:
                assert is_strongly_fold_stable(query(C6, c)).verdict

    @given(bigraphs(connected=True), st.data())
    def test_plain_implies_strong_random(self, G, data):
        c = tuple(data.draw(st.lists(st.integers(0, 2), min_size=G.m, max_size=G.m)))
        if is_fold_stable(query(G, c)).verdict:
            assert is_strongly_fold_stable(query(G, c)).verdict


class TestSymmetric:
    def test_monochromatic(self, small_graph):
        assert is_symmetrically_fold_stable(query(small_graph, monochromatic(small_graph))).verdict

    def test_unequal_classes(self):
        assert not is_symmetrically_fold_stable(query(C6, (0, 0, 1, 1, 1, 1))).verdict

    def test_sigma_clause_needs_equal_classes(self):
        # so an exhaustive scan may restrict itself to equal-block partitions
        for c in set_partitions(C6.m):
            rep = is_symmetrically_fold_stable(query(C6, c))
            if rep.verdict:
                assert len(set(Counter(c).values())) == 1

    def test_implies_strong(self, small_graph):
        for c in set_partitions(small_graph.m, 3):
            if is_symmetrically_fold_stable(query(small_graph, c)).verdict:
                assert is_strongly_fold_stable(query(small_graph, c)).verdict

    def test_sigma_witnesses_recolor(self):
        c = (0, 1, 0, 1, 0, 1)
        rep = is_symmetrically_fold_stable(query(C6, c))
        for (i, j), (g, sigma) in rep.sigma_witness.items():
            ep = C6.edge_perm(g)
            assert all(sigma[c[ep[e]]] == c[e] for e in range(C6.m))
            assert sigma.get(i, j) == j


class TestLeftSymmetric:
    def test_monochromatic_left(self):
        assert is_left_symmetrically_fold_stable(C4, (0, 0), monochromatic(C4)).verdict

    def test_single_left_vertex(self):
        for c in [(0, 0), (0, 1)]:
            H = ColoredBigraph(K12, c)
            q = StabilityQuery(K12, tensor((0,), c, K12), enumerate_automorphisms(H), enumerate_folds(H),
                               enumerate_folds(H))
            assert is_left_symmetrically_fold_stable(K12, (0,), c).verdict == is_strongly_fold_stable(q).verdict

    def test_c4_swap_witness(self):
        c = monochromatic(C4)
        ok, found, _ = left_color_symmetries(C4, (0, 1), c, enumerate_automorphisms(ColoredBigraph(C4, c)))
        assert ok
        g, sigma = found[(0, 1)]
        named = C4.perm_to_mapping(g)
        assert named["u1"] == "u2" and named["u2"] == "u1" and sigma == {1: 0, 0: 1}


class TestPartitions:
    def test_bell_numbers(self):
        assert [sum(1 for _ in set_partitions(n)) for n in range(1, 8)] == [1, 2, 5, 15, 52, 203, 877]

    def test_block_limit(self):
        assert all(max(p) < 2 for p in set_partitions(5, 2))
        assert sum(1 for _ in set_partitions(4, 2)) == 8

    def test_canonical(self):
        assert canonical_partition(("b", "a", "b")) == (0, 1, 0)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_equal_block(self, n):
        want = [p for p in set_partitions(n) if len(set(Counter(p).values())) == 1]
        assert sorted(equal_block_partitions(n)) == sorted(want)


class TestObstruction:
    def test_c4_agree(self):
        rep = check_obstruction_equivalence(C4, enumerate_folds(C4))
        assert rep.agree and len(rep.rows) == 15

    def test_monochromatic_row(self):
        rep = check_obstruction_equivalence(C4, enumerate_folds(C4))
        row = next(r for r in rep.rows if r.partition == (0, 0, 0, 0))
        assert row.fold_stable and row.strongly_stable and row.maximal


class TestHarness:
    def test_single_edge(self):
        rep = verify_cutperc_theorem(complete(1, 1))
        assert rep.consistent and rep.value is True

    def test_c6(self):
        rep = verify_cutperc_theorem(C6)
        assert rep.consistent and rep.value is True

    def test_path(self):
        rep = verify_cutperc_theorem(P3)
        assert rep.consistent and rep.value is False
        assert rep.item(9).detail["edge_transitive"] is False

    def test_disconnected_rejected(self):
        G = Bigraph(("u1", "u2"), ("v1", "v2"), (("u1", "v1"), ("u2", "v2")))
        with pytest.raises(DisconnectedInput):
            verify_cutperc_theorem(G)

    def test_non_invariant_rejected(self):
        with pytest.raises(NonInvariantFolds):
            verify_cutperc_theorem(C4, FoldSet(C4, [enumerate_folds(C4)[0]]))

    def test_left_single_vertex(self):
        rep = verify_leftcutperc_theorem(ColoredBigraph(K12, (0, 0)))
        assert rep.consistent and rep.value is True

    def test_left_c4(self):
        rep = verify_leftcutperc_theorem(ColoredBigraph(C4, monochromatic(C4)))
        assert rep.consistent and rep.value is True

    def test_left_path(self):
        rep = verify_leftcutperc_theorem(ColoredBigraph(P3, monochromatic(P3)))
        assert rep.consistent and rep.value is False

    def test_items_selection(self):
        rep = verify_cutperc_theorem(C4, items=[1, 3])
        assert [it.item for it in rep.items] == [1, 3]
