"""Cut-involutions, folds, folding maps and the automorphism action on folds."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .bigraph import (
    Bigraph,
    BigraphError,
    ColoredBigraph,
    Perm,
    _components_idx,
    enumerate_automorphisms,
    is_automorphism,
)


class FoldError(ValueError):
    pass


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """p after q."""
    return tuple(p[i] for i in q)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


@dataclass(frozen=True)
class CutInvolution:
    host: Bigraph = field(compare=False, repr=False)
    perm: Perm
    fixed: FrozenSet[int]


@dataclass(frozen=True)
class Fold:
    host: Bigraph = field(compare=False, repr=False)
    perm: Perm
    side: FrozenSet[int]

    @cached_property
    def fixed(self) -> FrozenSet[int]:
        return frozenset(i for i, j in enumerate(self.perm) if i == j)

    @cached_property
    def mirror(self) -> FrozenSet[int]:
        return frozenset(self.perm[i] for i in self.side)

    @property
    def sort_key(self) -> tuple:
        return (self.perm, tuple(sorted(self.side)))

    def dual(self) -> "Fold":
        return Fold(self.host, self.perm, self.mirror)

    @cached_property
    def left_map(self) -> Perm:
        """f_L: identity on L and Fix(f), f on f(L)."""
        f, L = self.perm, self.side
        return tuple(i if i in L else f[i] for i in range(len(f)))

    @cached_property
    def right_map(self) -> Perm:
        """f_L*: f on L, identity elsewhere."""
        f, L = self.perm, self.side
        return tuple(f[i] if i in L else i for i in range(len(f)))

    @cached_property
    def left_edge_map(self) -> Tuple[int, ...]:
        return _edge_map(self.host, self.left_map)

    @cached_property
    def right_edge_map(self) -> Tuple[int, ...]:
        return _edge_map(self.host, self.right_map)

    def edge_map(self, side: int) -> Tuple[int, ...]:
        return self.left_edge_map if side == 1 else self.right_edge_map

    def describe(self) -> dict:
        G = self.host
        return {
            "involution": {G.vertices[i]: G.vertices[j] for i, j in enumerate(self.perm) if i != j},
            "fixed": G.names(self.fixed),
            "side": G.names(self.side),
        }


def _edge_map(G: Bigraph, vmap: Sequence[int]) -> Tuple[int, ...]:
    ei = G.edge_index
    try:
        return tuple(ei[(vmap[i], vmap[j])] for i, j in G.edge_pairs)
    except KeyError as exc:
        raise FoldError("vertex map does not send edges to edges") from exc


def check_fold(fold: Fold) -> None:
    """Re-verify the defining conditions of a fold from scratch."""
    G, f, L = fold.host, fold.perm, fold.side
    if not is_automorphism(G, f):
        raise FoldError("map is not an automorphism")
    if compose(f, f) != G.identity():
        raise FoldError("map is not an involution")
    fix = frozenset(i for i in range(G.n) if f[i] == i)
    comps = _components_idx(G, fix)
    if len(comps) < 2:
        raise FoldError("fixed set is not a cut")
    for comp in comps:
        if comp & L and not comp <= L:
            raise FoldError("side is not a union of components")
    image = frozenset(f[i] for i in L)
    if L & fix or L & image or (L | fix | image) != frozenset(range(G.n)):
        raise FoldError("side, fixed set and mirror do not partition the vertices")


def make_fold(G: Bigraph, mapping: Dict[str, str], side: Iterable[str]) -> Fold:
    """Build and validate a fold from names.  ``mapping`` may omit fixed points."""
    full = {v: mapping.get(v, v) for v in G.vertices}
    for v in mapping:
        if v not in G.index:
            raise BigraphError(f"unknown vertex {v!r}")
    fold = Fold(G, G.mapping_to_perm(full), G.indices(side))
    check_fold(fold)
    return fold


class FoldSet(Sequence):
    """An ordered collection of folds over one host; index order is the fold id."""

    def __init__(self, host: Bigraph, folds: Iterable[Fold] = ()) -> None:
        self.host = host
        uniq = {}
        for fold in folds:
            if fold.host != host:
                raise FoldError("fold belongs to another host")
            uniq[fold.sort_key] = fold
        self._folds: Tuple[Fold, ...] = tuple(uniq[k] for k in sorted(uniq))
        self._pos = {f.sort_key: i for i, f in enumerate(self._folds)}

    def __getitem__(self, i):
        return self._folds[i]

    def __len__(self) -> int:
        return len(self._folds)

    def __iter__(self) -> Iterator[Fold]:
        return iter(self._folds)

    def __contains__(self, fold) -> bool:
        return isinstance(fold, Fold) and fold.sort_key in self._pos

    def __eq__(self, other) -> bool:
        return isinstance(other, FoldSet) and self.host == other.host and self._folds == other._folds

    def __hash__(self) -> int:
        return hash((self.host, self._folds))

    def __repr__(self) -> str:
        return f"FoldSet({len(self)} folds)"

    def index_of(self, fold: Fold) -> int:
        return self._pos[fold.sort_key]

    def is_dual_closed(self) -> bool:
        return all(f.dual() in self for f in self)

    def is_invariant(self, group: Iterable[Perm]) -> bool:
        return all(act(h, f) in self for h in group for f in self)

    def with_duals(self) -> "FoldSet":
        return FoldSet(self.host, list(self) + [f.dual() for f in self])

    def perms(self) -> List[Perm]:
        return sorted({f.perm for f in self})


def _graph_of(X) -> Tuple[Bigraph, Optional[tuple]]:
    if isinstance(X, ColoredBigraph):
        return X.graph, X.colors
    if isinstance(X, Bigraph):
        return X, None
    raise TypeError(f"expected a Bigraph or ColoredBigraph, got {type(X).__name__}")


@lru_cache(maxsize=256)
def _uncolored_folds(G: Bigraph) -> Tuple[Fold, ...]:
    out = []
    ident = G.identity()
    for f in enumerate_automorphisms(G):
        if f == ident or compose(f, f) != ident:
            continue
        fix = frozenset(i for i in range(G.n) if f[i] == i)
        comps = _components_idx(G, fix)
        if len(comps) < 2:
            continue
        where = {}
        for k, comp in enumerate(comps):
            for v in comp:
                where[v] = k
        partner = [where[f[next(iter(comp))]] for comp in comps]
        # an f-invariant component could lie in neither L nor f(L)
        if any(partner[k] == k for k in range(len(comps))):
            continue
        pairs = sorted({(min(k, partner[k]), max(k, partner[k])) for k in range(len(comps))})
        for mask in range(1 << len(pairs)):
            side = set()
            for b, (a, c) in enumerate(pairs):
                side |= comps[c] if mask >> b & 1 else comps[a]
            out.append(Fold(G, f, frozenset(side)))
    return tuple(out)


def cut_involutions(X) -> List[CutInvolution]:
    G, _ = _graph_of(X)
    seen = {}
    for fold in enumerate_folds(X):
        seen.setdefault(fold.perm, CutInvolution(G, fold.perm, fold.fixed))
    return [seen[p] for p in sorted(seen)]


def preserves_coloring(G: Bigraph, colors: Sequence, perm: Perm) -> bool:
    emap = G.edge_perm(perm)
    return all(colors[emap[e]] == colors[e] for e in range(G.m))


def enumerate_folds(X) -> FoldSet:
    G, colors = _graph_of(X)
    folds = _uncolored_folds(G)
    if colors is not None:
        folds = [f for f in folds if preserves_coloring(G, colors, f.perm)]
    return FoldSet(G, folds)


def enumerate_independent_folds(X) -> FoldSet:
    G, _ = _graph_of(X)
    out = []
    for fold in enumerate_folds(X):
        fix = fold.fixed
        if not any(i in fix and j in fix for i, j in G.edge_pairs):
            out.append(fold)
    return FoldSet(G, out)


def folding_maps(fold: Fold) -> Tuple[Perm, Perm]:
    return fold.left_map, fold.right_map


def act(h: Sequence[int], fold: Fold) -> Fold:
    """h . (f, L) = (h f h^-1, h(L))."""
    G = fold.host
    h = tuple(h)
    if not is_automorphism(G, h):
        raise FoldError("acting map is not an automorphism of the host")
    conj = compose(compose(h, fold.perm), inverse(h))
    return Fold(G, conj, frozenset(h[i] for i in fold.side))


def generated_group(n: int, generators: Iterable[Sequence[int]]) -> List[Perm]:
    gens = sorted({tuple(g) for g in generators})
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


def fold_group(folds: FoldSet) -> List[Perm]:
    return generated_group(folds.host.n, folds.perms())


def _orbit_count(n_points: int, actions: List[Sequence[int]]) -> int:
    seen = [False] * n_points
    orbits = 0
    for s in range(n_points):
        if seen[s]:
            continue
        orbits += 1
        seen[s] = True
        stack = [s]
        while stack:
            x = stack.pop()
            for a in actions:
                y = a[x]
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return orbits


def _checked(G: Bigraph, K: Iterable[Sequence[int]]) -> List[Perm]:
    K = [tuple(k) for k in K]
    for k in K:
        if not is_automorphism(G, k):
            raise FoldError(f"not an automorphism: {k}")
    return K


def is_K_edge_transitive(G: Bigraph, K: Iterable[Sequence[int]]) -> bool:
    K = _checked(G, K)
    return _orbit_count(G.m, [G.edge_perm(k) for k in K]) <= 1


def is_K_left_vertex_transitive(G: Bigraph, K: Iterable[Sequence[int]]) -> bool:
    K = _checked(G, K)
    return _orbit_count(G.n1, [k[: G.n1] for k in K]) <= 1
