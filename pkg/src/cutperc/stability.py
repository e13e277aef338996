"""Fold-stability notions and the two equivalence harnesses."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from .bigraph import Bigraph, ColoredBigraph, Coloring, Perm, enumerate_automorphisms, is_connected
from .folds import Fold, FoldSet, act, compose, fold_group, enumerate_folds, is_K_edge_transitive, is_K_left_vertex_transitive
from .percolation import (
    DEFAULT_BUDGET,
    LEFT,
    BudgetExceeded,
    FoldingProblem,
    LeftMonochromatic,
    Monochromatic,
    apply_fold,
    is_absorbing,
    is_cut_percolating,
    is_left_cut_percolating,
    reachability_digraph,
    reaches,
)


class DisconnectedInput(ValueError):
    pass


class NonInvariantFolds(ValueError):
    pass


class PaletteTooSmall(ValueError):
    pass


def tensor(l: Sequence[Hashable], c: Sequence[Hashable], G: Bigraph) -> Coloring:
    """(l (x) c)(u, v) = (l(u), c(u, v)); ``l`` is indexed by left-vertex position."""
    if len(l) != G.n1 or len(c) != G.m:
        raise ValueError("left-coloring or coloring does not match the host")
    return tuple((l[i], c[e]) for e, (i, _) in enumerate(G.edge_pairs))


@dataclass
class StabilityQuery:
    graph: Bigraph
    coloring: Coloring
    group: Optional[List[Perm]] = None
    folds: Optional[FoldSet] = None
    inverse_pool: Optional[FoldSet] = None

    def __post_init__(self) -> None:
        self.coloring = tuple(self.coloring)
        if self.group is None:
            self.group = enumerate_automorphisms(self.graph)
        if self.folds is None:
            self.folds = enumerate_folds(self.graph)
        if self.inverse_pool is None:
            self.inverse_pool = enumerate_folds(self.graph)


@dataclass
class StabilityReport:
    notion: str
    verdict: bool
    iso_witness: Dict[int, Perm] = field(default_factory=dict)
    inverse_witness: Dict[int, Perm] = field(default_factory=dict)
    sigma_witness: Dict[Tuple[Hashable, Hashable], Tuple[Perm, Dict[Hashable, Hashable]]] = field(default_factory=dict)
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.verdict


class _EdgeActions:
    """Cache of edge permutations for a group of vertex permutations."""

    def __init__(self, G: Bigraph, group: Sequence[Perm]) -> None:
        self.group = list(group)
        self.edges = [G.edge_perm(g) for g in self.group]


def _iso_in(actions: _EdgeActions, c: Sequence, d: Sequence) -> Optional[Perm]:
    """Some g with d(g(e)) = c(e) for every edge e."""
    m = len(c)
    for g, ge in zip(actions.group, actions.edges):
        if all(d[ge[e]] == c[e] for e in range(m)):
            return g
    return None


def _actions(q: StabilityQuery) -> _EdgeActions:
    return _EdgeActions(q.graph, q.group)


def is_fold_stable(q: StabilityQuery, _acts: Optional[_EdgeActions] = None) -> StabilityReport:
    acts = _acts or _actions(q)
    rep = StabilityReport("fold-stable", True)
    for i, fold in enumerate(q.folds):
        g = _iso_in(acts, q.coloring, apply_fold(q.coloring, fold, LEFT))
        if g is None:
            rep.verdict = False
            rep.failure = f"fold {i}: no isomorphism onto the folded coloring"
            return rep
        rep.iso_witness[i] = g
    return rep


def _inverse_for(q: StabilityQuery, fold: Fold) -> Optional[Perm]:
    G = q.graph
    for cand in q.inverse_pool:
        if cand.side != fold.side or cand.fixed != fold.fixed:
            continue
        ge = G.edge_perm(cand.perm)
        if all(q.coloring[ge[e]] == q.coloring[e] for e in range(G.m)):
            return cand.perm
    return None


def is_strongly_fold_stable(q: StabilityQuery, _acts: Optional[_EdgeActions] = None) -> StabilityReport:
    rep = is_fold_stable(q, _acts)
    rep.notion = "strongly-fold-stable"
    if not rep.verdict:
        return rep
    for i, fold in enumerate(q.folds):
        h = _inverse_for(q, fold)
        if h is None:
            rep.verdict = False
            rep.failure = f"fold {i}: no color-preserving fold with the same fixed set and side"
            return rep
        rep.inverse_witness[i] = h
    return rep


def _sigma_pairs(acts: _EdgeActions, values_of, pairs) -> Tuple[bool, dict, Optional[str]]:
    """For each (i, j), find g in the group and a color bijection sigma with
    sigma(i) = j making g an isomorphism onto the sigma-recolored target.

    ``values_of(g, ge)`` returns the partial bijection forced by g, or None
    when g forces no bijection at all; it extends freely to a permutation.
    """
    induced = []
    for g, ge in zip(acts.group, acts.edges):
        sigma = values_of(g, ge)
        if sigma is not None:
            induced.append((g, sigma))
    found = {}
    for i, j in pairs:
        for g, sigma in induced:
            if sigma.get(i, j) == j and (i in sigma or j not in sigma.values()):
                found[(i, j)] = (g, sigma)
                break
        else:
            return False, found, f"no symmetry sending color {i!r} to {j!r}"
    return True, found, None


def _partial_bijection(pairs) -> Optional[Dict[Hashable, Hashable]]:
    sigma: Dict[Hashable, Hashable] = {}
    for a, b in pairs:
        if sigma.setdefault(a, b) != b:
            return None
    if len(set(sigma.values())) != len(sigma):
        return None
    return sigma


def _color_sigma(c: Sequence):
    # g is an isomorphism (G, c) -> (G, sigma o c) iff sigma(c(g e)) = c(e)
    return lambda g, ge: _partial_bijection((c[ge[e]], c[e]) for e in range(len(c)))


def color_symmetries(G: Bigraph, c: Sequence[Hashable], group: Sequence[Perm],
                     _acts: Optional[_EdgeActions] = None) -> Tuple[bool, dict, Optional[str]]:
    """The color-transitivity clause on its own: for every pair of colors
    (i, j) some g in ``group`` recolors c by a bijection sending i to j."""
    acts = _acts or _EdgeActions(G, group)
    colors = sorted(set(c), key=repr)
    return _sigma_pairs(acts, _color_sigma(tuple(c)), [(i, j) for i in colors for j in colors])


def left_color_symmetries(G: Bigraph, l: Sequence[Hashable], c: Sequence[Hashable], group: Sequence[Perm],
                          _acts: Optional[_EdgeActions] = None) -> Tuple[bool, dict, Optional[str]]:
    """Same clause over left colors; g must keep c."""
    acts = _acts or _EdgeActions(G, group)
    l, c = tuple(l), tuple(c)

    def values_of(g, ge):
        # (sigma(l(g u)), c(g e)) must equal (l(u), c(e)) on every edge (u, v)
        if any(c[ge[e]] != c[e] for e in range(G.m)):
            return None
        return _partial_bijection((l[g[u]], l[u]) for u, _ in G.edge_pairs)

    values = sorted(set(l), key=repr)
    return _sigma_pairs(acts, values_of, [(i, j) for i in values for j in values])


def is_symmetrically_fold_stable(q: StabilityQuery, _acts: Optional[_EdgeActions] = None) -> StabilityReport:
    acts = _acts or _actions(q)
    rep = is_strongly_fold_stable(q, acts)
    rep.notion = "symmetrically-fold-stable"
    if not rep.verdict:
        return rep
    ok, found, why = color_symmetries(q.graph, q.coloring, q.group, acts)
    rep.sigma_witness = found
    if not ok:
        rep.verdict = False
        rep.failure = why
    return rep


def is_left_symmetrically_fold_stable(G: Bigraph, l: Sequence[Hashable], c: Sequence[Hashable],
                                      K: Optional[List[Perm]] = None, folds: Optional[FoldSet] = None,
                                      inverse_pool: Optional[FoldSet] = None) -> StabilityReport:
    """Strong stability of l (x) c plus color-transitivity over the left colors."""
    if K is None:
        K = enumerate_automorphisms(ColoredBigraph(G, c))
    if folds is None:
        folds = enumerate_folds(ColoredBigraph(G, c))
    if inverse_pool is None:
        inverse_pool = folds
    q = StabilityQuery(G, tensor(l, c, G), K, folds, inverse_pool)
    acts = _actions(q)
    rep = is_strongly_fold_stable(q, acts)
    rep.notion = "left-symmetrically-fold-stable"
    if not rep.verdict:
        return rep
    ok, found, why = left_color_symmetries(G, l, c, K, acts)
    rep.sigma_witness = found
    if not ok:
        rep.verdict = False
        rep.failure = why
    return rep


# ------------------------------------------------------- partition enumeration

def set_partitions(n: int, max_blocks: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings of length n with at most ``max_blocks`` blocks."""
    if max_blocks is None:
        max_blocks = n
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(pos: int, top: int) -> Iterator[Tuple[int, ...]]:
        if pos == n:
            yield tuple(a)
            return
        for v in range(min(top + 2, max_blocks)):
            a[pos] = v
            yield from rec(pos + 1, max(top, v))

    yield from rec(1, 0)


def canonical_partition(c: Sequence[Hashable]) -> Tuple[int, ...]:
    relabel: Dict[Hashable, int] = {}
    return tuple(relabel.setdefault(x, len(relabel)) for x in c)


def equal_block_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings all of whose blocks have the same size."""
    for size in range(1, n + 1):
        if n % size:
            continue
        k = n // size
        counts = [0] * k
        a = [0] * n

        def rec(pos: int, top: int) -> Iterator[Tuple[int, ...]]:
            if pos == n:
                yield tuple(a)
                return
            for v in range(min(top + 2, k)):
                if counts[v] == size:
                    continue
                a[pos] = v
                counts[v] += 1
                yield from rec(pos + 1, max(top, v))
                counts[v] -= 1

        a[0] = 0
        counts[0] = 1
        yield from rec(1, 0)


def _require(G: Bigraph, folds: FoldSet, group: List[Perm]) -> None:
    if not is_connected(G):
        raise DisconnectedInput("the harness needs a connected bigraph")
    if not folds.is_invariant(group):
        raise NonInvariantFolds("fold set is not invariant under the automorphism group")


@dataclass
class ObstructionRow:
    partition: Tuple[int, ...]
    fold_stable: bool
    strongly_stable: bool
    maximal: bool
    symmetric: Optional[bool] = None
    rainbow_below: Optional[bool] = None


@dataclass
class ObstructionReport:
    rows: List[ObstructionRow]
    edge_transitive: bool
    disagreements: List[ObstructionRow]

    @property
    def agree(self) -> bool:
        return not self.disagreements


def rainbow_kernels(G: Bigraph, folds: FoldSet, budget: int = DEFAULT_BUDGET) -> set:
    """Partitions of E(G) that are reachable from a rainbow coloring."""
    dg = reachability_digraph(tuple(range(G.m)), folds, budget)
    return {canonical_partition(c) for c in dg.nodes}


def check_obstruction_equivalence(G: Bigraph, folds: FoldSet, palette_size: Optional[int] = None,
                                  budget: int = DEFAULT_BUDGET) -> ObstructionReport:
    group = enumerate_automorphisms(G)
    _require(G, folds, group)
    palette_size = G.m if palette_size is None else palette_size
    acts = _EdgeActions(G, group)
    transitive = is_K_edge_transitive(G, fold_group(folds))
    kernels = rainbow_kernels(G, folds, budget) if palette_size >= G.m else set()
    rows, bad = [], []
    for part in set_partitions(G.m, palette_size):
        q = StabilityQuery(G, part, group, folds, folds)
        fs = is_fold_stable(q, acts).verdict
        ss = is_strongly_fold_stable(q, acts).verdict
        dg = reachability_digraph(part, folds, budget)
        mx = dg.is_maximal(part)
        row = ObstructionRow(part, fs, ss, mx)
        row.rainbow_below = part in kernels
        consistent = fs == ss == mx
        if row.rainbow_below and transitive:
            row.symmetric = is_symmetrically_fold_stable(q, acts).verdict
            consistent = consistent and row.symmetric == ss
        rows.append(row)
        if not consistent:
            bad.append(row)
    return ObstructionReport(rows, transitive, bad)


# -------------------------------------------------------------- harnesses

@dataclass
class HarnessItem:
    item: int
    value: Optional[bool]
    method: str
    seconds: float = 0.0
    note: str = ""
    detail: dict = field(default_factory=dict)


@dataclass
class HarnessReport:
    graph: Bigraph
    items: List[HarnessItem]

    def computed(self) -> List[HarnessItem]:
        return [it for it in self.items if it.value is not None]

    @property
    def consistent(self) -> bool:
        return len({it.value for it in self.computed()}) <= 1

    @property
    def value(self) -> Optional[bool]:
        vals = {it.value for it in self.computed()}
        return vals.pop() if len(vals) == 1 else None

    def item(self, k: int) -> HarnessItem:
        return next(it for it in self.items if it.item == k)


def _timed(item: int, method: str, fn) -> HarnessItem:
    t0 = time.perf_counter()
    try:
        value, note, detail = fn()
    except BudgetExceeded as exc:
        return HarnessItem(item, None, method, time.perf_counter() - t0, f"budget exceeded: {exc}")
    return HarnessItem(item, value, method, time.perf_counter() - t0, note, detail)


def _scan_items(G: Bigraph, colorings: List[Tuple], folds: FoldSet, objectives, group: List[Perm],
                inverse_pool: FoldSet, budget: int) -> Dict[str, object]:
    """Per-coloring reachability facts shared by items 2, 4, 6, 7 and 8."""
    acts = _EdgeActions(G, group)
    reach_all = True
    absorbing_all = True
    fs_mono = ss_mono = mx_mono = True
    counter = {}
    for c in colorings:
        dg = reachability_digraph(c, folds, budget)
        good = dg.reaching(objectives)
        if not good[0]:
            reach_all = False
            counter.setdefault("reach", c)
        else:
            prob = FoldingProblem(G, c, objectives, folds)
            if not is_absorbing(prob, digraph=dg).absorbing:
                absorbing_all = False
                counter.setdefault("absorbing", c)
        mono = c in objectives
        q = StabilityQuery(G, c, group, folds, inverse_pool)
        if not mono:
            if is_fold_stable(q, acts).verdict:
                fs_mono = False
                counter.setdefault("fold-stable", c)
            if is_strongly_fold_stable(q, acts).verdict:
                ss_mono = False
                counter.setdefault("strongly", c)
            if dg.is_maximal(c):
                mx_mono = False
                counter.setdefault("maximal", c)
    return {"reach": reach_all, "absorbing": absorbing_all, "fs": fs_mono, "ss": ss_mono, "mx": mx_mono,
            "counter": counter}


def verify_cutperc_theorem(G: Bigraph, folds: Optional[FoldSet] = None, palette_size: Optional[int] = None,
                           items: Sequence[int] = tuple(range(1, 10)), budget: int = DEFAULT_BUDGET) -> HarnessReport:
    """Compute the nine equivalent items independently and report each value."""
    folds = enumerate_folds(G) if folds is None else folds
    group = enumerate_automorphisms(G)
    _require(G, folds, group)
    palette_size = G.m if palette_size is None else palette_size
    if palette_size < 1:
        raise PaletteTooSmall("palette must contain at least one color")
    mono = Monochromatic()
    rainbow = tuple(range(G.m))
    want = set(items)
    out: List[HarnessItem] = []
    scan = {}

    def scan_all():
        if not scan:
            scan.update(_scan_items(G, list(set_partitions(G.m, palette_size)), folds, mono, group, folds, budget))
        return scan

    if 1 in want:
        def item1():
            w = is_cut_percolating(G, folds, budget)
            return w is not None, "", {"witness_length": None if w is None else len(w)}
        out.append(_timed(1, "subset BFS over edge sets", item1))
    if 2 in want:
        out.append(_timed(2, "reachability over all partitions", lambda: (scan_all()["reach"], "", {})))
    rainbow_ok = palette_size >= G.m
    if 3 in want:
        if rainbow_ok:
            def item3():
                path = reaches(FoldingProblem(G, rainbow, mono, folds), budget)
                return path is not None, "", {"path_length": None if path is None else len(path)}
            out.append(_timed(3, "shortest fold path from a rainbow coloring", item3))
        else:
            out.append(HarnessItem(3, None, "skipped", note="palette smaller than e(G)"))
    if 4 in want:
        def item4():
            s = scan_all()
            return s["reach"] and s["absorbing"], "certified-by-construction", {}
        out.append(_timed(4, "absorbing + reachable for every coloring", item4))
    if 5 in want:
        if rainbow_ok:
            def item5():
                prob = FoldingProblem(G, rainbow, mono, folds)
                dg = reachability_digraph(rainbow, folds, budget)
                ok = dg.reaching(mono)[0] and is_absorbing(prob, digraph=dg).absorbing
                return ok, "certified-by-construction", {}
            out.append(_timed(5, "absorbing + reachable from a rainbow coloring", item5))
        else:
            out.append(HarnessItem(5, None, "skipped", note="palette smaller than e(G)"))
    if 6 in want:
        out.append(_timed(6, "fold-stable colorings are monochromatic", lambda: (scan_all()["fs"], "", {})))
    if 7 in want:
        out.append(_timed(7, "strongly stable colorings are monochromatic", lambda: (scan_all()["ss"], "", {})))
    if 8 in want:
        out.append(_timed(8, "maximal colorings are monochromatic", lambda: (scan_all()["mx"], "", {})))
    if 9 in want:
        def item9():
            acts = _EdgeActions(G, group)
            transitive = is_K_edge_transitive(G, fold_group(folds))
            bad = None
            n = 0
            # symmetric stability forces equal color-class sizes
            for part in _restricted(equal_block_partitions(G.m), palette_size):
                if len(set(part)) <= 1:
                    continue
                n += 1
                if not _cheap_sigma(acts, part):
                    continue
                q = StabilityQuery(G, part, group, folds, folds)
                if is_symmetrically_fold_stable(q, acts).verdict:
                    bad = part
                    break
            return bad is None and transitive, "", {"edge_transitive": transitive, "candidates": n,
                                                    "counterexample": None if bad is None else list(bad)}
        out.append(_timed(9, "symmetric scan over equal-block partitions + edge-transitivity", item9))
    if scan.get("counter"):
        for it in out:
            it.detail.setdefault("counterexamples", {k: list(v) for k, v in scan["counter"].items()})
    return HarnessReport(G, out)


def _restricted(parts, k):
    for p in parts:
        if max(p, default=0) < k:
            yield p


def _cheap_sigma(acts: _EdgeActions, c: Sequence[int]) -> bool:
    """Necessary condition for the sigma clause: the automorphisms inducing
    color permutations act transitively on the colors."""
    values_of = _color_sigma(c)
    reach = {c[0]}
    sigmas = [s for g, ge in zip(acts.group, acts.edges) if (s := values_of(g, ge)) is not None]
    frontier = [c[0]]
    while frontier:
        x = frontier.pop()
        for s in sigmas:
            y = s.get(x)
            if y is not None and y not in reach:
                reach.add(y)
                frontier.append(y)
    return len(reach) == len(set(c))


def verify_leftcutperc_theorem(H: ColoredBigraph, folds: Optional[FoldSet] = None,
                               palette_size: Optional[int] = None,
                               items: Sequence[int] = tuple(range(1, 10)),
                               budget: int = DEFAULT_BUDGET) -> HarnessReport:
    G, c = H.graph, H.colors
    folds = enumerate_folds(H) if folds is None else folds
    group = enumerate_automorphisms(H)
    _require(G, folds, group)
    n1 = G.n1
    palette_size = n1 if palette_size is None else palette_size
    if palette_size < 1:
        raise PaletteTooSmall("palette must contain at least one color")
    mono = LeftMonochromatic()
    want = set(items)
    out: List[HarnessItem] = []
    scan = {}
    lefts = list(set_partitions(n1, palette_size))
    rainbow_ok = palette_size >= n1

    def scan_all():
        if not scan:
            scan.update(_scan_items(G, [tensor(l, c, G) for l in lefts], folds, mono, group, folds, budget))
        return scan

    if 1 in want:
        def item1():
            w = is_left_cut_percolating(H, folds, budget)
            return w is not None, "", {"witness_length": None if w is None else len(w)}
        out.append(_timed(1, "subset BFS over left vertex sets", item1))
    if 2 in want:
        out.append(_timed(2, "reachability over all left partitions", lambda: (scan_all()["reach"], "", {})))
    rb = tensor(tuple(range(n1)), c, G)
    if 3 in want:
        if rainbow_ok:
            def item3():
                path = reaches(FoldingProblem(G, rb, mono, folds), budget)
                return path is not None, "", {"path_length": None if path is None else len(path)}
            out.append(_timed(3, "shortest fold path from a rainbow left-coloring", item3))
        else:
            out.append(HarnessItem(3, None, "skipped", note="palette smaller than v1(G)"))
    if 4 in want:
        out.append(_timed(4, "absorbing + reachable for every left-coloring",
                          lambda: (scan_all()["reach"] and scan_all()["absorbing"], "certified-by-construction", {})))
    if 5 in want:
        if rainbow_ok:
            def item5():
                prob = FoldingProblem(G, rb, mono, folds)
                dg = reachability_digraph(rb, folds, budget)
                ok = dg.reaching(mono)[0] and is_absorbing(prob, digraph=dg).absorbing
                return ok, "certified-by-construction", {}
            out.append(_timed(5, "absorbing + reachable from a rainbow left-coloring", item5))
        else:
            out.append(HarnessItem(5, None, "skipped", note="palette smaller than v1(G)"))
    if 6 in want:
        out.append(_timed(6, "fold-stable product colorings are left-monochromatic", lambda: (scan_all()["fs"], "", {})))
    if 7 in want:
        out.append(_timed(7, "strongly stable product colorings are left-monochromatic", lambda: (scan_all()["ss"], "", {})))
    if 8 in want:
        out.append(_timed(8, "maximal product colorings are left-monochromatic", lambda: (scan_all()["mx"], "", {})))
    if 9 in want:
        def item9():
            transitive = is_K_left_vertex_transitive(G, fold_group(folds))
            bad = None
            n = 0
            for l in _restricted(equal_block_partitions(n1), palette_size):
                if len(set(l)) <= 1:
                    continue
                n += 1
                if is_left_symmetrically_fold_stable(G, l, c, group, folds, folds).verdict:
                    bad = l
                    break
            return bad is None and transitive, "", {"left_vertex_transitive": transitive, "candidates": n,
                                                    "counterexample": None if bad is None else list(bad)}
        out.append(_timed(9, "left-symmetric scan + left-vertex-transitivity", item9))
    return HarnessReport(G, out)
