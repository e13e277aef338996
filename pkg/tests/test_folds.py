import pytest
from hypothesis import given

import oracles as O
from conftest import SMALL, bigraphs, colored_bigraphs
from cutperc.bigraph import Bigraph, ColoredBigraph, enumerate_automorphisms
from cutperc.catalog import complete, even_cycle, path
from cutperc.folds import (Fold, FoldError, FoldSet, act, check_fold, compose, cut_involutions, enumerate_folds,
                           enumerate_independent_folds, fold_group, folding_maps, generated_group, inverse,
                           is_K_edge_transitive, is_K_left_vertex_transitive, make_fold)
from cutperc.percolation import apply_fold
from cutperc.stability import set_partitions

K12 = complete(1, 2)
C4 = even_cycle(2)
C6 = even_cycle(3)

# two pendant paths hanging off an edge: the swap fixes the edge u0-v0
PENDANT = Bigraph(("u0", "u1", "u2"), ("v0", "v1", "v2"),
                  (("u0", "v0"), ("u1", "v0"), ("u2", "v0"), ("u1", "v1"), ("u2", "v2")))


def keys(folds):
    return {O.fold_key(f) for f in folds}


class TestEnumeration:
    def test_k11_has_none(self):
        assert len(enumerate_folds(complete(1, 1))) == 0

    def test_k12(self):
        folds = enumerate_folds(K12)
        assert len(folds) == 2
        a, b = folds
        assert a.dual() == b and b.dual() == a
        assert {frozenset(K12.names(f.side)) for f in folds} == {frozenset({"v1"}), frozenset({"v2"})}

    def test_c4(self):
        folds = enumerate_folds(C4)
        assert len(folds) == 4
        by_fix = {}
        for f in folds:
            by_fix.setdefault(frozenset(C4.names(f.fixed)), set()).add(frozenset(C4.names(f.side)))
        assert by_fix == {frozenset({"v1", "v2"}): {frozenset({"u1"}), frozenset({"u2"})},
                          frozenset({"u1", "u2"}): {frozenset({"v1"}), frozenset({"v2"})}}

    def test_catalog_matches_oracle(self, small_graph):
        assert keys(enumerate_folds(small_graph)) == O.folds(small_graph)

    @given(bigraphs())
    def test_random_matches_oracle(self, G):
        assert keys(enumerate_folds(G)) == O.folds(G)

    @given(colored_bigraphs())
    def test_colored_matches_oracle(self, H):
        assert keys(enumerate_folds(H)) == O.folds(H.graph, H.colors)

    def test_every_enumerated_fold_checks(self, small_graph):
        for fold in enumerate_folds(small_graph):
            check_fold(fold)

    def test_cut_involutions_distinct(self):
        invs = cut_involutions(C4)
        assert len(invs) == 2 and len({ci.perm for ci in invs}) == 2


class TestIndependent:
    def test_k12(self):
        assert enumerate_independent_folds(K12) == enumerate_folds(K12)

    def test_c4(self):
        assert enumerate_independent_folds(C4) == enumerate_folds(C4)

    def test_edge_inside_fix_excluded(self):
        assert len(enumerate_folds(PENDANT)) == 2
        assert len(enumerate_independent_folds(PENDANT)) == 0


class TestValidation:
    def test_make_fold(self):
        fold = make_fold(K12, {"v1": "v2", "v2": "v1"}, {"v1"})
        assert fold in enumerate_folds(K12)

    def test_rejects_non_partition(self):
        with pytest.raises(FoldError):
            make_fold(K12, {"v1": "v2", "v2": "v1"}, {"v1", "v2"})

    def test_rejects_non_cut(self):
        # the reflection of C4 swapping u1,u2 and v1,v2 fixes nothing
        with pytest.raises(FoldError):
            make_fold(C4, {"u1": "u2", "u2": "u1", "v1": "v2", "v2": "v1"}, {"u1", "v1"})

    def test_rejects_non_automorphism(self):
        P = path(2)
        with pytest.raises(FoldError):
            check_fold(Fold(P, P.mapping_to_perm({"u1": "u2", "u2": "u1", "v1": "v1"}), frozenset()))


class TestFoldingMaps:
    def test_k12_left_map(self):
        fold = make_fold(K12, {"v1": "v2", "v2": "v1"}, {"v1"})
        fL, _ = folding_maps(fold)
        named = K12.perm_to_mapping(fL)
        assert named == {"u1": "u1", "v1": "v1", "v2": "v1"}
        assert set(named.values()) == {"u1", "v1"}

    def test_dual_identity(self, small_graph):
        for fold in enumerate_folds(small_graph):
            assert fold.dual().left_map == fold.right_map
            assert fold.dual().right_map == fold.left_map

    def test_idempotent(self, small_graph):
        for fold in enumerate_folds(small_graph):
            for m in folding_maps(fold):
                assert compose(m, m) == m

    def test_right_map_is_f_after_left(self, small_graph):
        for fold in enumerate_folds(small_graph):
            assert fold.right_map == compose(fold.perm, fold.left_map)

    def test_maps_match_oracle(self, small_graph):
        for fold in enumerate_folds(small_graph):
            for side in (1, 2):
                m = folding_maps(fold)[side - 1]
                assert small_graph.perm_to_mapping(m) == O.folding_map(fold, side)


class TestAction:
    def test_identity(self, small_graph):
        for fold in enumerate_folds(small_graph):
            assert act(small_graph.identity(), fold) == fold

    def test_own_involution_gives_dual(self, small_graph):
        for fold in enumerate_folds(small_graph):
            assert act(fold.perm, fold) == fold.dual()

    def test_composition_axiom(self, small_graph):
        auts = enumerate_automorphisms(small_graph)
        for fold in enumerate_folds(small_graph):
            for h1 in auts:
                for h2 in auts:
                    assert act(compose(h1, h2), fold) == act(h1, act(h2, fold))

    def test_action_preserves_folds(self, small_graph):
        folds = enumerate_folds(small_graph)
        assert folds.is_invariant(enumerate_automorphisms(small_graph))

    def test_non_automorphism_rejected(self):
        fold = enumerate_folds(K12)[0]
        with pytest.raises(FoldError):
            act((1, 0, 2), fold)

    def test_independent_folds_invariant(self, small_graph):
        ind = enumerate_independent_folds(small_graph)
        assert ind.is_invariant(enumerate_automorphisms(small_graph))
        assert enumerate_independent_folds(PENDANT).is_invariant(enumerate_automorphisms(PENDANT))

    @given(bigraphs())
    def test_invariant_sets_are_dual_closed(self, G):
        auts = enumerate_automorphisms(G)
        folds = list(enumerate_folds(G))
        # every orbit of the action is an invariant set
        for fold in folds:
            orbit = FoldSet(G, [act(h, fold) for h in auts])
            assert orbit.is_invariant(auts)
            assert orbit.is_dual_closed()


class TestGroups:
    def test_k12(self):
        assert len(fold_group(enumerate_folds(K12))) == 2

    def test_empty(self):
        assert fold_group(FoldSet(C6, [])) == [C6.identity()]

    def test_c6_reflections(self):
        group = set(fold_group(enumerate_folds(C6)))
        assert len(group) == 6
        assert {f.perm for f in enumerate_folds(C6)} <= group

    def test_group_axioms(self, small_graph):
        group = set(fold_group(enumerate_folds(small_graph)))
        ident = small_graph.identity()
        assert ident in group
        for a in group:
            assert inverse(a) in group
            for b in group:
                assert compose(a, b) in group

    def test_generated_group_matches_closure(self):
        gens = [f.perm for f in enumerate_folds(C6)]
        assert generated_group(C6.n, gens) == sorted(set(enumerate_automorphisms(C6)))


class TestTransitivity:
    def test_c6_edge_transitive(self):
        assert is_K_edge_transitive(C6, fold_group(enumerate_folds(C6)))

    def test_path_not_edge_transitive(self):
        P = path(3)
        assert not is_K_edge_transitive(P, enumerate_automorphisms(P))

    def test_trivial_group(self, small_graph):
        if small_graph.m >= 2:
            assert not is_K_edge_transitive(small_graph, [small_graph.identity()])

    def test_left_vertex_transitive(self):
        assert is_K_left_vertex_transitive(C4, fold_group(enumerate_folds(C4)))
        assert not is_K_left_vertex_transitive(path(3), fold_group(enumerate_folds(path(3))))


def test_inverse_fold_identity():
    """c o f_L o h_L = c whenever (h, L) shares L and Fix with (f, L) and h keeps c."""
    violations = 0
    checked = 0
    for G in SMALL.values():
        folds = list(enumerate_folds(G))
        for c in set_partitions(G.m):
            for f in folds:
                for h in folds:
                    if h.side != f.side or h.fixed != f.fixed:
                        continue
                    ep = G.edge_perm(h.perm)
                    if any(c[ep[e]] != c[e] for e in range(G.m)):
                        continue
                    checked += 1
                    if apply_fold(apply_fold(c, f), h) != tuple(c):
                        violations += 1
    assert checked > 0 and violations == 0
