import pytest
from hypothesis import given, strategies as st

import oracles as O
from conftest import SMALL, bigraphs, colored_bigraphs, flags
from cutperc.bigraph import (Bigraph, BigraphError, ColoredBigraph, Flag, PaletteMismatch, canonical_key,
                             connected_components, connected_core, count_homomorphisms, enumerate_automorphisms,
                             find_isomorphism, hom_count, induced_flag, induced_subgraph, is_automorphism, is_cut,
                             is_independent_set, is_isomorphism, monochromatic, rainbow, same_type)
from cutperc.catalog import complete, even_cycle

C6 = even_cycle(3)
K12 = complete(1, 2)


def mono(G):
    return Flag(ColoredBigraph(G, monochromatic(G)))


class TestConstruction:
    def test_rejects_overlap(self):
        with pytest.raises(BigraphError):
            Bigraph(("a",), ("a",), ())

    def test_rejects_dangling(self):
        with pytest.raises(BigraphError):
            Bigraph(("a",), ("b",), (("a", "c"),))

    def test_rejects_duplicate_edge(self):
        with pytest.raises(BigraphError):
            Bigraph(("a",), ("b",), (("a", "b"), ("a", "b")))

    def test_coloring_length_checked(self):
        with pytest.raises(BigraphError):
            ColoredBigraph(K12, (0,))

    def test_palette_checked(self):
        with pytest.raises(BigraphError):
            ColoredBigraph(K12, (0, 5), palette={0, 1})

    def test_labels_injective(self):
        with pytest.raises(BigraphError):
            Flag(ColoredBigraph(K12, (0, 0)), ("u1", "u1"))


class TestSubgraphs:
    def test_antipodal_pair_of_c6(self):
        sub = induced_subgraph(C6, {"u1", "v2"})
        assert (len(sub.v1), len(sub.v2), sub.m) == (1, 1, 0)

    def test_whole_vertex_set(self, small_graph):
        assert induced_subgraph(small_graph, small_graph.vertices) == small_graph

    def test_k12_single_edge(self):
        sub = induced_subgraph(K12, {"u1", "v1"})
        assert sub.edges == (("u1", "v1"),)

    def test_restriction_keeps_labels(self):
        F = Flag(ColoredBigraph(K12, (0, 1)), ("v1",))
        with pytest.raises(BigraphError):
            induced_flag(F, {"u1", "v2"})

    @given(bigraphs(), st.data())
    def test_induced_edges_match_oracle(self, G, data):
        S = data.draw(st.sets(st.sampled_from(G.vertices)))
        assert set(induced_subgraph(G, S).edges) == {e for e in G.edges if set(e) <= S}


class TestComponents:
    def test_star_minus_center(self):
        rest = induced_subgraph(K12, {"v1", "v2"})
        assert sorted(map(sorted, connected_components(rest))) == [["v1"], ["v2"]]

    def test_cycle_connected(self):
        comps = connected_components(C6)
        assert [len(c) for c in comps] == [6]

    def test_two_disjoint_edges(self):
        G = Bigraph(("u1", "u2"), ("v1", "v2"), (("u1", "v1"), ("u2", "v2")))
        assert sorted(len(c) for c in connected_components(G)) == [2, 2]

    @given(bigraphs())
    def test_matches_oracle(self, G):
        assert set(connected_components(G)) == set(O.components(G.vertices, G.edges))


class TestCuts:
    def test_star_center_is_cut(self):
        assert is_cut(K12, {"u1"})

    def test_empty_set_not_cut_of_cycle(self):
        assert not is_cut(C6, set())

    def test_c4_right_part_is_cut(self):
        assert is_cut(even_cycle(2), {"v1", "v2"})

    def test_single_vertex_remainder_not_cut(self):
        assert not is_cut(K12, {"u1", "v1"})

    def test_independent_sets(self):
        assert is_independent_set(C6, set())
        assert not is_independent_set(complete(1, 1), {"u1", "v1"})
        assert is_independent_set(C6, {"u1", "v2"})

    @given(bigraphs(), st.data())
    def test_cut_matches_oracle(self, G, data):
        S = data.draw(st.sets(st.sampled_from(G.vertices)))
        rest = [v for v in G.vertices if v not in S]
        comps = O.components(rest, [e for e in G.edges if not set(e) & S])
        assert is_cut(G, S) == (len(comps) >= 2)


class TestAutomorphisms:
    def test_known_orders(self):
        assert len(enumerate_automorphisms(K12)) == 2
        assert len(enumerate_automorphisms(C6)) == 6

    def test_rainbow_c6_rigid(self):
        assert enumerate_automorphisms(ColoredBigraph(C6, rainbow(C6))) == [C6.identity()]

    def test_catalog_orders_match_oracle(self, small_graph):
        assert len(enumerate_automorphisms(small_graph)) == len(O.automorphisms(small_graph))

    @given(colored_bigraphs())
    def test_colored_match_oracle(self, H):
        got = {tuple(H.graph.perm_to_mapping(p).items()) for p in enumerate_automorphisms(H)}
        want = {tuple(sorted(g.items(), key=lambda kv: H.graph.index[kv[0]])) for g in O.automorphisms(H.graph, H.colors)}
        assert got == want

    @given(colored_bigraphs())
    def test_closed_under_composition(self, H):
        auts = set(enumerate_automorphisms(H))
        for a in auts:
            for b in auts:
                assert tuple(a[b[i]] for i in range(len(a))) in auts
        assert all(is_automorphism(H, a) for a in auts)


class TestIsomorphism:
    def test_identity(self):
        H = ColoredBigraph(C6, (0, 1, 0, 1, 0, 1))
        iso = find_isomorphism(H, H)
        assert iso is not None and is_isomorphism(H, H, iso)

    def test_rotation_witness(self):
        c = (0, 1, 2, 3, 4, 5)
        rot = {"u1": "u2", "u2": "u3", "u3": "u1", "v1": "v2", "v2": "v3", "v3": "v1"}
        rho = C6.mapping_to_perm(rot)
        ep = C6.edge_perm(rho)
        rotated = tuple(c[ep[e]] for e in range(C6.m))
        A, B = ColoredBigraph(C6, c), ColoredBigraph(C6, rotated)
        iso = find_isomorphism(B, A)
        assert iso is not None and is_isomorphism(B, A, iso)

    def test_class_sizes_obstruct(self):
        A = ColoredBigraph(C6, (0, 0, 1, 1, 1, 1))
        B = ColoredBigraph(C6, (0, 0, 0, 1, 1, 1))
        assert find_isomorphism(A, B) is None

    def test_palette_mismatch(self):
        A = ColoredBigraph(K12, (0, 1), palette={0, 1})
        B = ColoredBigraph(K12, (0, 1), palette={0, 1, 2})
        with pytest.raises(PaletteMismatch):
            find_isomorphism(A, B)

    @given(flags(max_left=2, max_right=3), flags(max_left=2, max_right=3))
    def test_matches_oracle(self, F1, F2):
        assert (find_isomorphism(F1, F2) is not None) == O.isomorphic(F1, F2)

    @given(flags(max_left=2, max_right=3), flags(max_left=2, max_right=3))
    def test_canonical_key_decides_iso(self, F1, F2):
        assert (canonical_key(F1) == canonical_key(F2)) == O.isomorphic(F1, F2)


class TestHomomorphisms:
    def test_star_into_hexagon(self):
        assert hom_count(mono(K12), mono(C6)) == 12

    @given(flags())
    def test_identity_counts(self, F):
        assert hom_count(F, F) >= 1

    def test_edge_into_edgeless(self):
        edgeless = Bigraph(("a",), ("b",), ())
        assert hom_count(mono(complete(1, 1)), mono(edgeless)) == 0

    @given(flags(max_left=2, max_right=2), flags(max_left=2, max_right=3))
    def test_raw_count_matches_oracle(self, F1, F2):
        assert count_homomorphisms(F1, F2) == O.homomorphisms(F1, F2)

    @given(flags(max_left=2, max_right=2), flags(max_left=2, max_right=3))
    def test_type_rule(self, F1, F2):
        expected = O.homomorphisms(F1, F2) if same_type(F1, F2) else 0
        assert hom_count(F1, F2) == expected


class TestCore:
    def test_core_connected(self):
        F = Flag(ColoredBigraph(C6, monochromatic(C6)), ("u1",))
        assert connected_core(F) == frozenset(C6.vertices)

    def test_one_of_two_components(self):
        G = Bigraph(("u1", "u2"), ("v1", "v2"), (("u1", "v1"), ("u2", "v2")))
        F = Flag(ColoredBigraph(G, (0, 0)), ("v2",))
        assert connected_core(F) == {"u2", "v2"}

    def test_unlabeled(self):
        assert connected_core(mono(C6)) == frozenset()
