"""Exact homomorphism densities over finite rational bigraphons."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .bigraph import (
    Bigraph,
    ColoredBigraph,
    Flag,
    _components_idx,
    as_flag,
    connected_core,
    find_isomorphism,
    induced_colored,
    induced_flag,
    is_isomorphism,
    monochromatic,
    remove_edges,
    same_type,
)
from .exact import compare_products
from .folds import Fold
from .percolation import LEFT, RIGHT, ColoringTree, apply_fold


class DensityError(ValueError):
    pass


class TypeMismatch(DensityError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class FiniteProbabilitySpace:
    weights: Tuple[Fraction, ...]
    points: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        w = tuple(_frac(x) for x in self.weights)
        if not w:
            raise DensityError("probability space needs at least one point")
        if any(x < 0 for x in w) or sum(w) != 1:
            raise DensityError("weights must be non-negative and sum to 1")
        pts = tuple(self.points) or tuple(str(i) for i in range(len(w)))
        if len(pts) != len(w):
            raise DensityError("points and weights differ in length")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, n: int, points: Sequence[str] = ()) -> "FiniteProbabilitySpace":
        return cls(tuple(Fraction(1, n) for _ in range(n)), tuple(points))


@dataclass(frozen=True)
class FiniteBigraphon:
    left: FiniteProbabilitySpace
    right: FiniteProbabilitySpace
    values: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        vals = tuple(tuple(_frac(x) for x in row) for row in self.values)
        if len(vals) != len(self.left) or any(len(r) != len(self.right) for r in vals):
            raise DensityError("value matrix does not match the spaces")
        if any(x < 0 for r in vals for x in r):
            raise DensityError("bigraphon values must be non-negative")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class BigraphonFamily:
    """One bigraphon per color over shared spaces; ``default`` serves every color."""

    members: Tuple[Tuple[Hashable, FiniteBigraphon], ...] = ()
    default: Optional[FiniteBigraphon] = None

    def __post_init__(self) -> None:
        members = tuple(self.members.items()) if isinstance(self.members, Mapping) else tuple(self.members)
        object.__setattr__(self, "members", members)
        ws = [w for _, w in members] + ([self.default] if self.default else [])
        if not ws:
            raise DensityError("empty bigraphon family")
        if any(w.left != ws[0].left or w.right != ws[0].right for w in ws):
            raise DensityError("family members must share their spaces")

    @property
    def left(self) -> FiniteProbabilitySpace:
        return (self.default or self.members[0][1]).left

    @property
    def right(self) -> FiniteProbabilitySpace:
        return (self.default or self.members[0][1]).right

    def get(self, color: Hashable) -> FiniteBigraphon:
        for c, w in self.members:
            if c == color:
                return w
        if self.default is None:
            raise DensityError(f"no bigraphon for color {color!r}")
        return self.default


def as_family(W: Union[FiniteBigraphon, BigraphonFamily]) -> BigraphonFamily:
    return W if isinstance(W, BigraphonFamily) else BigraphonFamily((), W)


def natural_bigraphon(G: Bigraph, edges: Optional[Iterable[int]] = None) -> FiniteBigraphon:
    """0/1 kernel of G over uniform spaces; ``edges`` restricts to an edge subset."""
    if not G.v1 or not G.v2:
        raise DensityError("natural bigraphon needs two non-empty parts")
    keep = set(range(G.m) if edges is None else edges)
    vals = [[Fraction(0)] * len(G.v2) for _ in G.v1]
    for e, (i, j) in enumerate(G.edge_pairs):
        if e in keep:
            vals[i][j - G.n1] = Fraction(1)
    return FiniteBigraphon(FiniteProbabilitySpace.uniform(len(G.v1), G.v1),
                           FiniteProbabilitySpace.uniform(len(G.v2), G.v2),
                           tuple(tuple(r) for r in vals))


def natural_family(H: ColoredBigraph, palette: Iterable[Hashable] = ()) -> BigraphonFamily:
    """The family (W^{H_i}) with H_i the edges of color i; unused colors get the zero kernel."""
    G = H.graph
    colors = sorted(set(H.colors) | set(palette) | set(H.palette or ()), key=repr)
    return BigraphonFamily(tuple((i, natural_bigraphon(G, [e for e, c in enumerate(H.colors) if c == i]))
                                 for i in colors), natural_bigraphon(G, ()))


def random_family(rng: random.Random, palette: Iterable[Hashable], left_size: int = 3, right_size: int = 3,
                  zero_entries: bool = False, weight_range: int = 4) -> BigraphonFamily:
    """Values k/8 with k uniform in 1..8 (0..8 in zero-entry mode); weights random positive."""

    def space(n: int) -> FiniteProbabilitySpace:
        raw = [rng.randint(1, weight_range) for _ in range(n)]
        return FiniteProbabilitySpace(tuple(Fraction(x, sum(raw)) for x in raw))

    X, Y = space(left_size), space(right_size)
    lo = 0 if zero_entries else 1
    members = []
    for color in palette:
        vals = tuple(tuple(Fraction(rng.randint(lo, 8), 8) for _ in range(right_size)) for _ in range(left_size))
        members.append((color, FiniteBigraphon(X, Y, vals)))
    return BigraphonFamily(tuple(members))


# ------------------------------------------------------------------ densities

class _Scaled:
    """Integer rescaling of a family: values * D, weights * DX, DY."""

    def __init__(self, fam: BigraphonFamily, colors: Iterable[Hashable]) -> None:
        colors = sorted(set(colors), key=repr)
        mats = {c: fam.get(c).values for c in colors}
        self.D = lcm(1, *(x.denominator for m in mats.values() for r in m for x in r))
        self.mats = {c: [[int(x * self.D) for x in r] for r in m] for c, m in mats.items()}
        self.mats_t = {c: [list(col) for col in zip(*m)] for c, m in self.mats.items()}
        X, Y = fam.left.weights, fam.right.weights
        self.DX = lcm(1, *(x.denominator for x in X))
        self.DY = lcm(1, *(x.denominator for x in Y))
        self.wx = [int(x * self.DX) for x in X]
        self.wy = [int(y * self.DY) for y in Y]


def _density_at(G: Bigraph, colors: Sequence[Hashable], fixed: Dict[int, int], sc: _Scaled) -> Fraction:
    free_left = [i for i in range(G.n1) if i not in fixed]
    free_right = [j for j in range(G.n1, G.n) if j not in fixed]
    transpose = len(free_left) > len(free_right)
    if transpose:
        A, B = list(range(G.n1, G.n)), list(range(G.n1))
        wa, wb, da, db, mats = sc.wy, sc.wx, sc.DY, sc.DX, sc.mats_t
        free_a = free_right
    else:
        A, B = list(range(G.n1)), list(range(G.n1, G.n))
        wa, wb, da, db, mats = sc.wx, sc.wy, sc.DX, sc.DY, sc.mats
        free_a = free_left
    nbrs: Dict[int, List[Tuple[int, list]]] = {b: [] for b in B}
    for (i, j), c in zip(G.edge_pairs, colors):
        a, b = (j, i) if transpose else (i, j)
        nbrs[b].append((a, mats[c]))
    ny = len(wb)
    x = dict(fixed)
    total = 0
    n_free_b = 0
    for b in B:
        if b not in fixed:
            n_free_b += 1
    for xs in product(range(len(wa)), repeat=len(free_a)):
        w = 1
        for a, p in zip(free_a, xs):
            x[a] = p
            w *= wa[p]
        if w == 0:
            continue
        for b in B:
            if b in fixed:
                y = fixed[b]
                s = 1
                for a, m in nbrs[b]:
                    s *= m[x[a]][y]
            else:
                s = 0
                for y in range(ny):
                    t = wb[y]
                    for a, m in nbrs[b]:
                        if not t:
                            break
                        t *= m[x[a]][y]
                    s += t
            w *= s
            if w == 0:
                break
        total += w
    return Fraction(total, sc.D ** G.m * da ** len(free_a) * db ** n_free_b)


@dataclass
class DensityTable:
    """t(F, W) as a function of the points assigned to labels 0..k-1."""

    parts: Tuple[int, ...]
    entries: Dict[Tuple[int, ...], Fraction]
    weights: Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]] = field(repr=False, default=((), ()))

    def scalar(self) -> Fraction:
        if self.parts:
            raise DensityError("flag has labeled vertices")
        return self.entries[()]

    def atom_weight(self, key: Tuple[int, ...]) -> Fraction:
        w = Fraction(1)
        for part, p in zip(self.parts, key):
            w *= self.weights[part][p]
        return w

    def support(self) -> List[Tuple[int, ...]]:
        """Keys of positive-weight atoms."""
        return [k for k in sorted(self.entries) if self.atom_weight(k) > 0]


def flag_density(F, W) -> DensityTable:
    F = as_flag(F)
    fam = as_family(W)
    G = F.graph
    sc = _Scaled(fam, F.host.colors)
    lab = [G.index[name] for name in F.theta]
    parts = tuple(G.part(i) for i in lab)
    sizes = [len(fam.left), len(fam.right)]
    entries = {}
    for key in product(*(range(sizes[p]) for p in parts)):
        entries[key] = _density_at(G, F.host.colors, dict(zip(lab, key)), sc)
    return DensityTable(parts, entries, (fam.left.weights, fam.right.weights))


def density(H, W) -> Fraction:
    """Scalar density t(H, W) of an unlabeled (colored) bigraph."""
    if isinstance(H, Bigraph):
        H = ColoredBigraph(H, monochromatic(H))
    if isinstance(H, Flag):
        H = H.host
    sc = _Scaled(as_family(W), H.colors)
    return _density_at(H.graph, H.colors, {}, sc)


def tables_equal(T1: DensityTable, T2: DensityTable) -> bool:
    """Equality on positive-weight atoms; keys are aligned by label index."""
    if T1.parts != T2.parts:
        return False
    return all(T1.entries[k] == T2.entries[k] for k in T1.support())


@dataclass
class LinearDependenceWitness:
    lambda1: Fraction
    lambda2: Fraction


def linear_dependence(T1: DensityTable, T2: DensityTable) -> Optional[LinearDependenceWitness]:
    """Non-negative (l1, l2), not both zero, with l1*T1 = l2*T2 on positive-weight atoms."""
    keys = T1.support()
    a = [T1.entries[k] for k in keys]
    b = [T2.entries[k] for k in keys]
    if not any(a):
        return LinearDependenceWitness(Fraction(1), Fraction(0))
    if not any(b):
        return LinearDependenceWitness(Fraction(0), Fraction(1))
    k0 = next(i for i, v in enumerate(a) if v)
    l1, l2 = b[k0], a[k0]
    if all(l1 * x == l2 * y for x, y in zip(a, b)):
        return LinearDependenceWitness(l1, l2)
    return None


# ------------------------------------------------------- fold Cauchy-Schwarz

@dataclass
class CSCheck:
    density: Fraction
    lhs: Fraction
    left_child: Fraction
    right_child: Fraction

    @property
    def rhs(self) -> Fraction:
        return self.left_child * self.right_child

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def strict(self) -> bool:
        return self.lhs < self.rhs


def check_fold_cs(H: ColoredBigraph, fold: Fold, W) -> CSCheck:
    fam = as_family(W)
    G = H.graph
    t = density(H, fam)
    a = density(ColoredBigraph(G, apply_fold(H.colors, fold, LEFT)), fam)
    b = density(ColoredBigraph(G, apply_fold(H.colors, fold, RIGHT)), fam)
    return CSCheck(t, t * t, a, b)


def core_flags_of_fold(H: ColoredBigraph, fold: Fold) -> Tuple[Flag, Flag]:
    G = H.graph
    theta = tuple(G.names(fold.fixed))
    fixed = set(theta)
    inner = [e for e in G.edges if e[0] in fixed and e[1] in fixed]

    def side_flag(side) -> Flag:
        keep = set(G.names(side)) | fixed
        return Flag(remove_edges(induced_colored(H, keep), inner), theta)

    return side_flag(fold.side), side_flag(fold.mirror)


def restrict_to_core(F: Flag) -> Flag:
    return induced_flag(F, connected_core(F))


@dataclass
class CoreIsoResult:
    isomorphic: bool
    witness: Optional[Dict[str, str]] = None

    def __bool__(self) -> bool:
        return self.isomorphic


def core_iso_decide(F1: Flag, F2: Flag) -> CoreIsoResult:
    if not same_type(F1, F2):
        raise TypeMismatch("flags have different types")
    iso = find_isomorphism(restrict_to_core(F1), restrict_to_core(F2))
    return CoreIsoResult(iso is not None, iso)


def cs_equality_characterization(H: ColoredBigraph, fold: Fold) -> bool:
    F1, F2 = core_flags_of_fold(H, fold)
    return core_iso_decide(F1, F2).isomorphic


# ------------------------------------------------------- tree comparisons

@dataclass
class GeometricMeanCertificate:
    terms: List[Tuple[Fraction, Fraction]]

    def exponent_total(self) -> Fraction:
        return sum((e for _, e in self.terms), Fraction(0))


@dataclass
class TreeComparison:
    density: Fraction
    certificate: GeometricMeanCertificate
    relation: int

    @property
    def leq_certified(self) -> bool:
        return self.relation <= 0


def tree_density_compare(H: ColoredBigraph, tree: ColoringTree, W, depth_cap: int = 16) -> TreeComparison:
    """Compare t(H, W) with the product of leaf densities raised to their Cantor masses."""
    if tree.height() > depth_cap:
        raise DensityError(f"tree height {tree.height()} exceeds the cap {depth_cap}")
    return compare_with_masses(H, _masses(tree), W)


def _masses(tree: ColoringTree) -> Dict[tuple, Fraction]:
    out: Dict[tuple, Fraction] = {}
    for leaf in tree.leaves():
        c = tree.labels[leaf]
        out[c] = out.get(c, Fraction(0)) + Fraction(1, 2 ** len(leaf))
    return out


def compare_with_masses(H: ColoredBigraph, masses: Mapping[tuple, Fraction], W) -> TreeComparison:
    fam = as_family(W)
    G = H.graph
    t = density(H, fam)
    terms = [(density(ColoredBigraph(G, c), fam), m) for c, m in sorted(masses.items(), key=repr)]
    cert = GeometricMeanCertificate(terms)
    return TreeComparison(t, cert, compare_products([(t, Fraction(1))], terms))


# ------------------------------------------------------- isomorphism upgrade

class UpgradeError(RuntimeError):
    pass


def upgrade_core_iso(F1: Flag, F2: Flag, f: Mapping[str, str], g: Mapping[str, str]) -> Dict[str, str]:
    """Combine a core isomorphism f and a host isomorphism g into a flag isomorphism."""
    C1, C2 = restrict_to_core(F1), restrict_to_core(F2)
    if not is_isomorphism(C1, C2, dict(f)):
        raise DensityError("f is not an isomorphism between the connected cores")
    if not is_isomorphism(F1.host, F2.host, dict(g)):
        raise DensityError("g is not an isomorphism between the hosts")
    G1, G2 = F1.graph, F2.graph
    comps1 = [frozenset(G1.vertices[i] for i in c) for c in _components_idx(G1)]
    comps2 = [frozenset(G2.vertices[i] for i in c) for c in _components_idx(G2)]
    core2 = connected_core(F2)
    core_comps2 = {c for c in comps2 if c <= core2}
    core_comps1 = [c for c in comps1 if c <= connected_core(F1)]
    g_core = {frozenset(g[v] for v in c) for c in core_comps1}
    finv = {b: a for a, b in f.items()}
    step = lambda v: g[finv[v]]  # g o f^-1 on core vertices of F2
    h = dict(f)
    ginv = {b: a for a, b in g.items()}
    k = F2.k
    for D in comps2:
        if D in g_core:
            continue
        t, image = 0, set(D)
        while frozenset(image) in core_comps2:
            image = {step(v) for v in image}
            t += 1
            if t > k:
                raise UpgradeError("iteration failed to leave the core")
        for w in D:
            x = w
            for _ in range(t):
                x = step(x)
            h[ginv[w]] = x
    if not is_isomorphism(F1, F2, h):
        raise UpgradeError("constructed map is not a flag isomorphism")
    return h
