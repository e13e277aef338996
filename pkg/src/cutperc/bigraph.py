"""Bigraphs, colorings and flags, plus the exhaustive symmetry machinery.

Vertices carry string ids.  Internally every vertex has an index: left
vertices come first in their declared order, then right vertices.  Edges are
kept sorted by (left index, right index) and a coloring is a tuple aligned
with that edge order.  Permutations of the vertex set are tuples of indices
(``perm[i]`` is the image of vertex ``i``).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

Perm = Tuple[int, ...]
Coloring = Tuple[Hashable, ...]


class BigraphError(ValueError):
    """Structural problem with a bigraph, coloring or flag."""


class PaletteMismatch(ValueError):
    """Isomorphism requested between colored objects with different palettes."""


@dataclass(frozen=True)
class Bigraph:
    v1: Tuple[str, ...]
    v2: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]

    def __post_init__(self) -> None:
        v1, v2 = tuple(self.v1), tuple(self.v2)
        if len(set(v1)) != len(v1) or len(set(v2)) != len(v2):
            raise BigraphError("repeated vertex id inside a part")
        common = set(v1) & set(v2)
        if common:
            raise BigraphError(f"parts are not disjoint: {sorted(common)}")
        pos = {name: i for i, name in enumerate(v1 + v2)}
        seen = set()
        for e in self.edges:
            u, v = e
            if u not in pos or pos[u] >= len(v1):
                raise BigraphError(f"edge {u}-{v}: {u!r} is not a left vertex")
            if v not in pos or pos[v] < len(v1):
                raise BigraphError(f"edge {u}-{v}: {v!r} is not a right vertex")
            if (u, v) in seen:
                raise BigraphError(f"duplicate edge {u}-{v}")
            seen.add((u, v))
        edges = tuple(sorted(((u, v) for u, v in self.edges), key=lambda e: (pos[e[0]], pos[e[1]])))
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)
        object.__setattr__(self, "edges", edges)

    @cached_property
    def vertices(self) -> Tuple[str, ...]:
        return self.v1 + self.v2

    @cached_property
    def index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.vertices)}

    @property
    def n(self) -> int:
        return len(self.v1) + len(self.v2)

    @property
    def n1(self) -> int:
        return len(self.v1)

    @property
    def m(self) -> int:
        return len(self.edges)

    def part(self, i: int) -> int:
        return 0 if i < len(self.v1) else 1

    @cached_property
    def edge_pairs(self) -> Tuple[Tuple[int, int], ...]:
        idx = self.index
        return tuple((idx[u], idx[v]) for u, v in self.edges)

    @cached_property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {p: k for k, p in enumerate(self.edge_pairs)}

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        adj: List[set] = [set() for _ in range(self.n)]
        for i, j in self.edge_pairs:
            adj[i].add(j)
            adj[j].add(i)
        return tuple(frozenset(a) for a in adj)

    def indices(self, names: Iterable[str]) -> FrozenSet[int]:
        out = set()
        for name in names:
            if name not in self.index:
                raise BigraphError(f"unknown vertex {name!r}")
            out.add(self.index[name])
        return frozenset(out)

    def names(self, idx: Iterable[int]) -> List[str]:
        return [self.vertices[i] for i in sorted(idx)]

    def perm_to_mapping(self, perm: Perm) -> Dict[str, str]:
        return {self.vertices[i]: self.vertices[j] for i, j in enumerate(perm)}

    def mapping_to_perm(self, mapping: Dict[str, str]) -> Perm:
        if set(mapping) != set(self.vertices):
            raise BigraphError("mapping must be defined on every vertex")
        return tuple(self.index[mapping[v]] for v in self.vertices)

    def edge_perm(self, perm: Perm) -> Tuple[int, ...]:
        """Action of a vertex permutation (assumed an automorphism) on edge indices."""
        ei = self.edge_index
        return tuple(ei[(perm[i], perm[j])] for i, j in self.edge_pairs)

    def identity(self) -> Perm:
        return tuple(range(self.n))


def is_monochromatic(c: Sequence[Hashable]) -> bool:
    return len(set(c)) <= 1


def is_rainbow(c: Sequence[Hashable]) -> bool:
    return len(set(c)) == len(c)


def rainbow(G: Bigraph) -> Coloring:
    return tuple(range(G.m))


def monochromatic(G: Bigraph, color: Hashable = 0) -> Coloring:
    return tuple(color for _ in range(G.m))


@dataclass(frozen=True)
class ColoredBigraph:
    graph: Bigraph
    colors: Coloring
    palette: Optional[FrozenSet[Hashable]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "colors", tuple(self.colors))
        if len(self.colors) != self.graph.m:
            raise BigraphError(f"coloring has {len(self.colors)} entries for {self.graph.m} edges")
        if self.palette is not None:
            object.__setattr__(self, "palette", frozenset(self.palette))
            extra = set(self.colors) - self.palette
            if extra:
                raise BigraphError(f"colors outside the palette: {sorted(map(repr, extra))}")

    def color_of(self, u: str, v: str) -> Hashable:
        G = self.graph
        return self.colors[G.edge_index[(G.index[u], G.index[v])]]


@dataclass(frozen=True)
class Flag:
    host: ColoredBigraph
    theta: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        theta = tuple(self.theta)
        if len(set(theta)) != len(theta):
            raise BigraphError("labeling is not injective")
        for name in theta:
            if name not in self.host.graph.index:
                raise BigraphError(f"labeled vertex {name!r} does not exist")
        object.__setattr__(self, "theta", theta)

    @property
    def graph(self) -> Bigraph:
        return self.host.graph

    @property
    def k(self) -> int:
        return len(self.theta)

    @property
    def labeled(self) -> FrozenSet[int]:
        return self.graph.indices(self.theta)


def as_flag(X) -> Flag:
    if isinstance(X, Flag):
        return X
    if isinstance(X, ColoredBigraph):
        return Flag(X)
    if isinstance(X, Bigraph):
        return Flag(ColoredBigraph(X, monochromatic(X)))
    raise TypeError(f"not a bigraph-like object: {type(X).__name__}")


# ---------------------------------------------------------------- subgraphs

def induced_subgraph(G: Bigraph, S: Iterable[str]) -> Bigraph:
    keep = G.indices(S)
    return Bigraph(
        tuple(v for v in G.v1 if G.index[v] in keep),
        tuple(v for v in G.v2 if G.index[v] in keep),
        tuple(e for e, (i, j) in zip(G.edges, G.edge_pairs) if i in keep and j in keep),
    )


def induced_colored(H: ColoredBigraph, S: Iterable[str]) -> ColoredBigraph:
    G = H.graph
    keep = G.indices(S)
    sub = induced_subgraph(G, S)
    colors = {e: c for e, (i, j), c in zip(G.edges, G.edge_pairs, H.colors) if i in keep and j in keep}
    return ColoredBigraph(sub, tuple(colors[e] for e in sub.edges), H.palette)


def induced_flag(F: Flag, S: Iterable[str]) -> Flag:
    S = set(S)
    missing = set(F.theta) - S
    if missing:
        raise BigraphError(f"restriction drops labeled vertices {sorted(missing)}")
    return Flag(induced_colored(F.host, S), F.theta)


def remove_edges(H: ColoredBigraph, drop: Iterable[Tuple[str, str]]) -> ColoredBigraph:
    drop = set(drop)
    G = H.graph
    kept = [(e, c) for e, c in zip(G.edges, H.colors) if e not in drop]
    return ColoredBigraph(Bigraph(G.v1, G.v2, tuple(e for e, _ in kept)), tuple(c for _, c in kept), H.palette)


def _components_idx(G: Bigraph, removed: FrozenSet[int] = frozenset()) -> List[FrozenSet[int]]:
    seen = set(removed)
    comps = []
    for s in range(G.n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in G.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(frozenset(comp))
    return comps


def connected_components(G: Bigraph) -> List[FrozenSet[str]]:
    return [frozenset(G.vertices[i] for i in comp) for comp in _components_idx(G)]


def is_connected(G: Bigraph) -> bool:
    return len(_components_idx(G)) <= 1


def is_cut(G: Bigraph, S: Iterable[str]) -> bool:
    return len(_components_idx(G, G.indices(S))) >= 2


def is_independent_set(G: Bigraph, S: Iterable[str]) -> bool:
    s = G.indices(S)
    return not any(i in s and j in s for i, j in G.edge_pairs)


def connected_core(F: Flag) -> FrozenSet[str]:
    lab = F.labeled
    G = F.graph
    out = set()
    for comp in _components_idx(G):
        if comp & lab:
            out |= comp
    return frozenset(G.vertices[i] for i in out)


# ------------------------------------------------------- backtracking search

class _Shape:
    """Index-level view of a flag used by the search routines."""

    def __init__(self, F: Flag) -> None:
        G = F.graph
        self.graph = G
        self.n = G.n
        self.part = tuple(G.part(i) for i in range(G.n))
        self.label = [-1] * G.n
        for k, name in enumerate(F.theta):
            self.label[G.index[name]] = k
        self.color: Dict[Tuple[int, int], Hashable] = {}
        incident: List[list] = [[] for _ in range(G.n)]
        for (i, j), c in zip(G.edge_pairs, F.host.colors):
            self.color[(i, j)] = c
            self.color[(j, i)] = c
            incident[i].append(c)
            incident[j].append(c)
        self.profile = [frozenset(Counter(cs).items()) for cs in incident]
        self.invariant = [(self.part[i], self.label[i], self.profile[i]) for i in range(G.n)]
        self.adj = G.adjacency
        self.k = F.k

    def order(self) -> List[int]:
        """Labeled vertices first, then a BFS order so that every new vertex
        is adjacent to an earlier one whenever possible."""
        seen: List[int] = []
        mark = [False] * self.n
        queue = [i for i in range(self.n) if self.label[i] >= 0]
        queue.sort(key=lambda i: self.label[i])
        rest = sorted(range(self.n), key=lambda i: -len(self.adj[i]))
        head = 0
        for s in queue:
            mark[s] = True
            seen.append(s)
        while len(seen) < self.n:
            if head == len(seen):
                s = next(i for i in rest if not mark[i])
                mark[s] = True
                seen.append(s)
            x = seen[head]
            head += 1
            for y in sorted(self.adj[x]):
                if not mark[y]:
                    mark[y] = True
                    seen.append(y)
        return seen


def _isomorphisms(A: _Shape, B: _Shape) -> Iterator[Perm]:
    if A.n != B.n or A.k != B.k or Counter(A.invariant) != Counter(B.invariant):
        return
    order = A.order()
    cand = {v: [w for w in range(B.n) if B.invariant[w] == A.invariant[v]] for v in order}
    image = [-1] * A.n
    used = [False] * B.n

    def extend(pos: int) -> Iterator[Perm]:
        if pos == len(order):
            yield tuple(image)
            return
        v = order[pos]
        for w in cand[v]:
            if used[w]:
                continue
            ok = True
            for u in order[:pos]:
                if A.color.get((u, v)) != B.color.get((image[u], w)):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used[w] = True
            yield from extend(pos + 1)
            used[w] = False
            image[v] = -1

    yield from extend(0)


def enumerate_automorphisms(X) -> List[Perm]:
    """All automorphisms of a Bigraph, ColoredBigraph or Flag, sorted."""
    shape = _Shape(as_flag(X))
    return sorted(_isomorphisms(shape, shape))


def _check_palettes(X, Y) -> None:
    pX = X.host.palette if isinstance(X, Flag) else getattr(X, "palette", None)
    pY = Y.host.palette if isinstance(Y, Flag) else getattr(Y, "palette", None)
    if pX is not None and pY is not None and pX != pY:
        raise PaletteMismatch("colored bigraphs declare different palettes")


def find_isomorphism(X, Y, within: Optional[Sequence[Perm]] = None) -> Optional[Dict[str, str]]:
    """An isomorphism X -> Y as a vertex-name mapping, or None.

    ``within`` restricts the search to the given permutations; it only makes
    sense when X and Y share the same underlying bigraph.
    """
    if type(X) is not type(Y):
        raise TypeError("find_isomorphism needs two objects of the same kind")
    _check_palettes(X, Y)
    FX, FY = as_flag(X), as_flag(Y)
    if FX.k != FY.k:
        return None
    A, B = _Shape(FX), _Shape(FY)
    if within is not None:
        if FX.graph != FY.graph:
            raise BigraphError("restricted isomorphism search needs a shared host bigraph")
        for g in within:
            if _is_iso_idx(A, B, g):
                return {FX.graph.vertices[i]: FY.graph.vertices[j] for i, j in enumerate(g)}
        return None
    for g in _isomorphisms(A, B):
        return {FX.graph.vertices[i]: FY.graph.vertices[j] for i, j in enumerate(g)}
    return None


def _is_iso_idx(A: _Shape, B: _Shape, g: Sequence[int]) -> bool:
    if len(g) != A.n or A.n != B.n or sorted(g) != list(range(B.n)):
        return False
    for i in range(A.n):
        if A.part[i] != B.part[g[i]] or A.label[i] != B.label[g[i]]:
            return False
    if len(A.color) != len(B.color):
        return False
    for (i, j), c in A.color.items():
        if B.color.get((g[i], g[j]), _MISSING) != c:
            return False
    return True


_MISSING = object()


def is_isomorphism(X, Y, mapping: Dict[str, str]) -> bool:
    """Direct verification that ``mapping`` is an isomorphism X -> Y."""
    FX, FY = as_flag(X), as_flag(Y)
    if FX.k != FY.k or set(mapping) != set(FX.graph.vertices):
        return False
    if any(v not in FY.graph.index for v in mapping.values()):
        return False
    g = [FY.graph.index[mapping[v]] for v in FX.graph.vertices]
    return _is_iso_idx(_Shape(FX), _Shape(FY), g)


def is_automorphism(X, perm: Sequence[int]) -> bool:
    shape = _Shape(as_flag(X))
    return _is_iso_idx(shape, shape, perm)


# ------------------------------------------------------------ homomorphisms

def same_type(F1: Flag, F2: Flag) -> bool:
    """Restrictions to the labeled sets are isomorphic via the label matching."""
    if F1.k != F2.k:
        return False
    T1 = induced_flag(F1, F1.theta)
    T2 = induced_flag(F2, F2.theta)
    mapping = dict(zip(F1.theta, F2.theta))
    return is_isomorphism(T1, T2, mapping)


def count_homomorphisms(F1: Flag, F2: Flag) -> int:
    """Number of part-, color- and label-preserving maps sending edges to edges."""
    if F1.k != F2.k:
        return 0
    A, B = _Shape(F1), _Shape(F2)
    by_part = [[w for w in range(B.n) if B.part[w] == p] for p in (0, 1)]
    label_target = {k: B.graph.index[name] for k, name in enumerate(F2.theta)}
    order = A.order()
    image = [-1] * A.n
    earlier = []
    for pos, v in enumerate(order):
        before = set(order[:pos])
        earlier.append([u for u in A.adj[v] if u in before])

    def count(pos: int) -> int:
        if pos == len(order):
            return 1
        v = order[pos]
        if A.label[v] >= 0:
            w = label_target[A.label[v]]
            cands = [w] if B.part[w] == A.part[v] else []
        else:
            cands = by_part[A.part[v]]
        total = 0
        for w in cands:
            if all(B.color.get((image[u], w), _MISSING) == A.color[(u, v)] for u in earlier[pos]):
                image[v] = w
                total += count(pos + 1)
        image[v] = -1
        return total

    return count(0)


def hom_count(F1: Flag, F2: Flag) -> int:
    """Flag homomorphism count; 0 when the two flags have different types."""
    if not same_type(F1, F2):
        return 0
    return count_homomorphisms(F1, F2)


# ----------------------------------------------------------- canonical keys

def canonical_key(X) -> tuple:
    """Isomorphism-class key by exhaustive relabeling inside invariant classes.

    Exponential in the class sizes; intended for the small flags used in
    exhaustive checks.
    """
    F = as_flag(X)
    A = _Shape(F)
    classes: Dict[tuple, List[int]] = {}
    for i in range(A.n):
        key = (A.part[i], A.label[i], tuple(sorted(A.profile[i], key=repr)))
        classes.setdefault(key, []).append(i)
    keys = sorted(classes, key=repr)
    blocks = [classes[k] for k in keys]
    best = None
    for arrangement in product(*(permutations(b) for b in blocks)):
        pos = {}
        for block in arrangement:
            for v in block:
                pos[v] = len(pos)
        enc = tuple(sorted((pos[i], pos[j], repr(c)) for (i, j), c in zip(F.graph.edge_pairs, F.host.colors)))
        if best is None or enc < best:
            best = enc
    return (tuple(repr(k) for k in keys), tuple(len(b) for b in blocks), best)
