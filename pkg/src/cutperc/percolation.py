"""Fold reachability, cut-percolation and percolating folding-tree sequences.

Sides are encoded as 1 (left folding map f_L) and 2 (right folding map f_L*),
matching the child labels of binary trees.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .bigraph import Bigraph, ColoredBigraph, Coloring
from .folds import Fold, FoldError, FoldSet

LEFT, RIGHT = 1, 2
SIDES = (LEFT, RIGHT)
DEFAULT_BUDGET = 1 << 24


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, visited: int, frontier: int) -> None:
        super().__init__(f"{what}: budget exceeded after {visited} states (frontier {frontier})")
        self.visited = visited
        self.frontier = frontier


class NotAbsorbing(ValueError):
    pass


class Unreachable(ValueError):
    pass


class Monochromatic:
    """Objective set of all colorings using at most one color."""

    def __contains__(self, c) -> bool:
        return len(set(c)) <= 1

    def __repr__(self) -> str:
        return "Monochromatic()"


class LeftMonochromatic:
    """Colorings l (x) c whose left-coloring part is constant."""

    def __contains__(self, c) -> bool:
        return len({x[0] for x in c}) <= 1

    def __repr__(self) -> str:
        return "LeftMonochromatic()"


class AllColorings:
    def __contains__(self, c) -> bool:
        return True


@dataclass
class FoldingProblem:
    graph: Bigraph
    initial: Coloring
    objectives: object
    folds: FoldSet

    def __post_init__(self) -> None:
        self.initial = tuple(self.initial)
        if len(self.initial) != self.graph.m:
            raise ValueError("initial coloring does not match the edge count")
        if self.folds.host != self.graph:
            raise FoldError("fold set belongs to another host")


def apply_fold(c: Sequence[Hashable], fold: Fold, side: int = LEFT) -> Coloring:
    if len(c) != fold.host.m:
        raise FoldError("coloring and fold do not share a host")
    emap = fold.edge_map(side)
    return tuple(c[j] for j in emap)


def _arcs(folds: FoldSet) -> List[Tuple[int, int, Tuple[int, ...]]]:
    return [(i, s, fold.edge_map(s)) for i, fold in enumerate(folds) for s in SIDES]


@dataclass
class ReachabilityGraph:
    nodes: List[Coloring]
    index: Dict[Coloring, int]
    succ: List[List[int]]
    arc_labels: List[Tuple[int, int]]
    scc: np.ndarray = field(repr=False)
    sink: List[bool] = field(repr=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def is_maximal(self, c: Coloring) -> bool:
        return self.sink[self.scc[self.index[c]]]

    def maximal(self) -> List[Coloring]:
        return [c for i, c in enumerate(self.nodes) if self.sink[self.scc[i]]]

    def components(self) -> List[List[Coloring]]:
        groups: Dict[int, List[Coloring]] = {}
        for i, c in enumerate(self.nodes):
            groups.setdefault(int(self.scc[i]), []).append(c)
        return [groups[k] for k in sorted(groups)]

    def sink_components(self) -> List[List[Coloring]]:
        return [comp for comp in self.components() if self.sink[self.scc[self.index[comp[0]]]]]

    def reaching(self, objectives) -> List[bool]:
        """Which nodes reach some objective coloring."""
        pred: List[List[int]] = [[] for _ in self.nodes]
        for x, row in enumerate(self.succ):
            for y in row:
                pred[y].append(x)
        good = [c in objectives for c in self.nodes]
        queue = deque(i for i, g in enumerate(good) if g)
        while queue:
            y = queue.popleft()
            for x in pred[y]:
                if not good[x]:
                    good[x] = True
                    queue.append(x)
        return good

    def distances(self, objectives) -> List[Optional[int]]:
        pred: List[List[int]] = [[] for _ in self.nodes]
        for x, row in enumerate(self.succ):
            for y in row:
                pred[y].append(x)
        dist: List[Optional[int]] = [0 if c in objectives else None for c in self.nodes]
        queue = deque(i for i, d in enumerate(dist) if d == 0)
        while queue:
            y = queue.popleft()
            for x in pred[y]:
                if dist[x] is None:
                    dist[x] = dist[y] + 1
                    queue.append(x)
        return dist


def reachability_digraph(c: Sequence[Hashable], folds: FoldSet, budget: int = DEFAULT_BUDGET) -> ReachabilityGraph:
    arcs = _arcs(folds)
    start = tuple(c)
    if len(start) != folds.host.m:
        raise FoldError("coloring and fold set do not share a host")
    nodes = [start]
    index = {start: 0}
    succ: List[List[int]] = []
    head = 0
    while head < len(nodes):
        x = nodes[head]
        head += 1
        row = []
        for _, _, emap in arcs:
            y = tuple(x[j] for j in emap)
            k = index.get(y)
            if k is None:
                if len(nodes) >= budget:
                    raise BudgetExceeded("reachability", len(nodes), len(nodes) - head)
                k = len(nodes)
                index[y] = k
                nodes.append(y)
            row.append(k)
        succ.append(row)
    n = len(nodes)
    rows = [x for x, row in enumerate(succ) for _ in row]
    cols = [y for row in succ for y in row]
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(mat, directed=True, connection="strong")
    sink = [True] * (int(labels.max()) + 1 if n else 0)
    for x, row in enumerate(succ):
        for y in row:
            if labels[x] != labels[y]:
                sink[labels[x]] = False
    return ReachabilityGraph(nodes, index, succ, [(i, s) for i, s, _ in arcs], labels, sink)


@dataclass
class ReachPath:
    steps: List[Tuple[int, int]]
    states: List[Coloring]

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self, folds: FoldSet) -> List[dict]:
        return [
            {"fold_id": i, "side": "left" if s == LEFT else "right", "state": list(st)}
            for (i, s), st in zip(self.steps, self.states[1:])
        ]


def reaches(problem: FoldingProblem, budget: int = DEFAULT_BUDGET) -> Optional[ReachPath]:
    """Shortest fold/side sequence from the initial coloring into the objectives.

    Breadth-first with arcs expanded in (fold index, side) order, so the path
    returned is the lexicographically least among the shortest ones.
    """
    start = problem.initial
    if start in problem.objectives:
        return ReachPath([], [start])
    arcs = _arcs(problem.folds)
    parent: Dict[Coloring, Optional[Tuple[Coloring, int, int]]] = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for i, s, emap in arcs:
            y = tuple(x[j] for j in emap)
            if y in parent:
                continue
            if len(parent) >= budget:
                raise BudgetExceeded("reach", len(parent), len(queue))
            parent[y] = (x, i, s)
            if y in problem.objectives:
                steps, states = [], [y]
                node = y
                while parent[node] is not None:
                    prev, pi, ps = parent[node]
                    steps.append((pi, ps))
                    states.append(prev)
                    node = prev
                return ReachPath(steps[::-1], states[::-1])
            queue.append(y)
    return None


def step_bound(c: Sequence[Hashable]) -> int:
    return len(set(c)) ** len(c) - 1


# ------------------------------------------------------------ cut-percolation

@dataclass
class PercolationWitness:
    """States E_0..E_n (as sorted index tuples) and the fold ids between them."""

    universe: str
    states: List[Tuple[int, ...]]
    folds: List[int]

    def __len__(self) -> int:
        return len(self.folds)

    def to_json(self, G: Bigraph) -> dict:
        if self.universe == "edges":
            name = lambda k: f"{G.edges[k][0]}|{G.edges[k][1]}"
        else:
            name = lambda k: G.v1[k]
        out = [{"fold_id": None, "side": None, "state": [name(k) for k in self.states[0]]}]
        for i, st in zip(self.folds, self.states[1:]):
            out.append({"fold_id": i, "side": "left", "state": [name(k) for k in st]})
        return {"universe": self.universe, "sequence": out}


def _mask(items: Iterable[int]) -> int:
    m = 0
    for k in items:
        m |= 1 << k
    return m


def _unmask(m: int) -> Tuple[int, ...]:
    out = []
    k = 0
    while m:
        if m & 1:
            out.append(k)
        m >>= 1
        k += 1
    return tuple(out)


def _subset_bfs(size: int, maps: List[Sequence[int]], what: str, budget: int) -> Optional[Tuple[List[int], List[int]]]:
    full = (1 << size) - 1
    if size == 0:
        return None
    parent: Dict[int, Optional[Tuple[int, int]]] = {}
    queue = deque()
    for k in range(size):
        parent[1 << k] = None
        queue.append(1 << k)
    while queue:
        state = queue[0]
        if state == full:
            break
        queue.popleft()
        for i, fmap in enumerate(maps):
            # preimage of the current subset under the folding map
            nxt = _mask(e for e in range(size) if state >> fmap[e] & 1)
            if nxt in parent:
                continue
            if len(parent) >= budget:
                raise BudgetExceeded(what, len(parent), len(queue))
            parent[nxt] = (state, i)
            queue.append(nxt)
    if full not in parent:
        return None
    states, used = [full], []
    node = full
    while parent[node] is not None:
        prev, i = parent[node]
        states.append(prev)
        used.append(i)
        node = prev
    return states[::-1], used[::-1]


def is_cut_percolating(G: Bigraph, folds: FoldSet, budget: int = DEFAULT_BUDGET) -> Optional[PercolationWitness]:
    if folds.host != G:
        raise FoldError("fold set belongs to another host")
    found = _subset_bfs(G.m, [f.left_edge_map for f in folds], "cut-percolation", budget)
    if found is None:
        return None
    states, used = found
    return PercolationWitness("edges", [_unmask(s) for s in states], used)


def is_left_cut_percolating(H: ColoredBigraph, folds: FoldSet, budget: int = DEFAULT_BUDGET) -> Optional[PercolationWitness]:
    G = H.graph
    if folds.host != G:
        raise FoldError("fold set belongs to another host")
    n1 = G.n1
    found = _subset_bfs(n1, [f.left_map[:n1] for f in folds], "left-cut-percolation", budget)
    if found is None:
        return None
    states, used = found
    return PercolationWitness("left", [_unmask(s) for s in states], used)


def verify_percolation_witness(G: Bigraph, folds: FoldSet, w: PercolationWitness) -> bool:
    """Recompute every step of a witness from the fold definitions."""
    size = G.m if w.universe == "edges" else G.n1
    if len(w.states) != len(w.folds) + 1 or len(w.states[0]) != 1:
        return False
    if set(w.states[-1]) != set(range(size)):
        return False
    for prev, i, cur in zip(w.states, w.folds, w.states[1:]):
        if not 0 <= i < len(folds):
            return False
        fold = folds[i]
        if w.universe == "edges":
            pre = {e for e, (a, b) in enumerate(G.edge_pairs)
                   if G.edge_index[(fold.left_map[a], fold.left_map[b])] in set(prev)}
        else:
            pre = {u for u in range(G.n1) if fold.left_map[u] in set(prev)}
        if pre != set(cur):
            return False
    return True


# ---------------------------------------------------------------- trees

def is_prefix_closed(nodes: Iterable[str]) -> bool:
    T = set(nodes)
    return all(set(t) <= {"1", "2"} and (t == "" or t[:-1] in T) for t in T)


def one_extension(nodes: Iterable[str]) -> FrozenSet[str]:
    T = set(nodes)
    if not T:
        return frozenset({""})
    return frozenset(T | {t + b for t in T for b in "12"})


def tree_leaves(nodes: Iterable[str]) -> List[str]:
    T = set(nodes)
    return sorted((t for t in T if t + "1" not in T and t + "2" not in T), key=lambda t: (len(t), t))


def tree_height(nodes: Iterable[str]) -> int:
    return max((len(t) for t in nodes), default=0)


@dataclass
class FoldingTree:
    labels: Dict[str, Fold]

    def __post_init__(self) -> None:
        if not is_prefix_closed(self.labels):
            raise ValueError("folding tree nodes are not prefix-closed")

    @property
    def nodes(self) -> FrozenSet[str]:
        return frozenset(self.labels)

    def extension(self) -> FrozenSet[str]:
        return one_extension(self.labels)

    def extends(self, other: "FoldingTree") -> bool:
        return all(self.labels.get(k) == v for k, v in other.labels.items())


@dataclass
class ColoringTree:
    labels: Dict[str, Coloring]

    def leaves(self) -> List[str]:
        return tree_leaves(self.labels)

    def height(self) -> int:
        return tree_height(self.labels)


def induced_coloring_tree(phi: FoldingTree, c: Sequence[Hashable]) -> ColoringTree:
    out = {"": tuple(c)}
    for node in sorted(phi.labels, key=lambda t: (len(t), t)):
        fold = phi.labels[node]
        col = out[node]
        out[node + "1"] = apply_fold(col, fold, LEFT)
        out[node + "2"] = apply_fold(col, fold, RIGHT)
    return ColoringTree(out)


@dataclass
class LeafMeasure:
    masses: Dict[Coloring, Fraction]

    def of(self, objectives) -> Fraction:
        return sum((m for c, m in self.masses.items() if c in objectives), Fraction(0))


def leaf_measure(tree: ColoringTree, objectives=None) -> Tuple[LeafMeasure, Fraction]:
    masses: Dict[Coloring, Fraction] = {}
    for leaf in tree.leaves():
        c = tree.labels[leaf]
        masses[c] = masses.get(c, Fraction(0)) + Fraction(1, 2 ** len(leaf))
    lm = LeafMeasure(masses)
    return lm, (lm.of(objectives) if objectives is not None else Fraction(1))


# ---------------------------------------------------------- absorbing problems

@dataclass
class AbsorptionResult:
    absorbing: bool
    violation: Optional[dict] = None


def is_absorbing(problem: FoldingProblem, budget: int = DEFAULT_BUDGET,
                 digraph: Optional[ReachabilityGraph] = None) -> AbsorptionResult:
    dg = digraph or reachability_digraph(problem.initial, problem.folds, budget)
    good = dg.reaching(problem.objectives)
    for x, c in enumerate(dg.nodes):
        if not good[x] or c in problem.objectives:
            continue
        for (i, s), y in zip(dg.arc_labels, dg.succ[x]):
            if not good[y]:
                return AbsorptionResult(False, {"coloring": c, "fold_id": i, "side": s, "child": dg.nodes[y]})
    return AbsorptionResult(True)


@dataclass
class PercolatingSequence:
    trees: List[FoldingTree]
    masses: List[Fraction]
    bound_tight: int
    bound_loose: int
    leaf_colorings: List[Dict[str, Coloring]] = field(repr=False, default_factory=list)

    def contraction_holds(self, B: int) -> bool:
        q = 1 - Fraction(1, 2 ** B)
        return all(1 - b <= (1 - a) * q for a, b in zip(self.masses, self.masses[1:]))

    def non_decreasing(self) -> bool:
        return all(a <= b for a, b in zip(self.masses, self.masses[1:]))

    def mass_by_coloring(self, stage: int) -> Dict[Coloring, Fraction]:
        out: Dict[Coloring, Fraction] = {}
        for leaf, c in self.leaf_colorings[stage].items():
            out[c] = out.get(c, Fraction(0)) + Fraction(1, 2 ** len(leaf))
        return out


def build_percolating_sequence(problem: FoldingProblem, stages: int, budget: int = DEFAULT_BUDGET,
                               max_leaves: int = 1 << 20) -> PercolatingSequence:
    """Nested folding trees whose leaf mass on the objectives tends to 1.

    Each stage grafts onto every non-objective leaf the single-branch tree of
    a shortest fold path from that leaf's coloring to the objectives.
    """
    dg = reachability_digraph(problem.initial, problem.folds, budget)
    absorbing = is_absorbing(problem, digraph=dg)
    if not absorbing.absorbing:
        raise NotAbsorbing(str(absorbing.violation))
    objectives = problem.objectives
    dist = dg.distances(objectives)
    if dist[0] is None:
        raise Unreachable("initial coloring does not reach the objectives")
    step: Dict[int, Tuple[int, int, int]] = {}
    for x, d in enumerate(dist):
        if d is None or d == 0:
            continue
        for (i, s), y in zip(dg.arc_labels, dg.succ[x]):
            if dist[y] == d - 1:
                step[x] = (i, s, y)
                break
    bound_tight = max(d for d in dist if d is not None)
    folds = problem.folds
    labels: Dict[str, Fold] = {}
    leaves: Dict[str, int] = {"": 0}
    trees = [FoldingTree({})]
    record = [{"": dg.nodes[0]}]

    def mass(current: Dict[str, int]) -> Fraction:
        return sum((Fraction(1, 2 ** len(t)) for t, x in current.items() if dist[x] == 0), Fraction(0))

    masses = [mass(leaves)]
    for _ in range(stages):
        grown: Dict[str, int] = {}
        for tau, x in leaves.items():
            node = tau
            while dist[x] != 0:
                i, s, y = step[x]
                labels[node] = folds[i]
                other = RIGHT if s == LEFT else LEFT
                grown[node + str(other)] = dg.succ[x][2 * i + other - 1]
                node += str(s)
                x = y
            grown[node] = x
        if len(grown) > max_leaves:
            raise BudgetExceeded("percolating sequence", len(grown), 0)
        leaves = grown
        trees.append(FoldingTree(dict(labels)))
        record.append({t: dg.nodes[x] for t, x in leaves.items()})
        masses.append(mass(leaves))
    return PercolatingSequence(trees, masses, bound_tight, step_bound(problem.initial), record)


# ------------------------------------------------- bounded all-objective trees

@dataclass
class BoundedTreeSearch:
    depth_found: Optional[int]
    level_sizes: List[int]
    stable_at: Optional[int]
    states: int


def objective_tree_search(c: Sequence[Hashable], folds: FoldSet, objectives, max_depth: int,
                          budget: int = DEFAULT_BUDGET) -> BoundedTreeSearch:
    """Least depth <= max_depth of a folding tree from c whose every leaf
    coloring is an objective, searched over the reachable colorings."""
    dg = reachability_digraph(c, folds, budget)
    win = [x in objectives for x in dg.nodes]
    sizes = [sum(win)]
    stable_at = None
    found = 0 if win[0] else None
    nf = len(folds)
    for depth in range(1, max_depth + 1):
        nxt = list(win)
        for x, row in enumerate(dg.succ):
            if nxt[x]:
                continue
            for i in range(nf):
                if win[row[2 * i]] and win[row[2 * i + 1]]:
                    nxt[x] = True
                    break
        if nxt == win and stable_at is None:
            stable_at = depth - 1
        win = nxt
        sizes.append(sum(win))
        if found is None and win[0]:
            found = depth
    return BoundedTreeSearch(found, sizes, stable_at, len(dg))
