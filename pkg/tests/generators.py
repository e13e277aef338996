"""Random instance builders for the isomorphism-upgrade checks."""
from __future__ import annotations

import random
from typing import Dict, List, Tuple

from cutperc.bigraph import Bigraph, ColoredBigraph, Flag, enumerate_automorphisms, find_isomorphism, is_connected


def random_connected(rng: random.Random, tag: str, colors: int = 2, max_side: int = 2):
    """Connected colored bigraph on a1.. / b1.. with names suffixed by ``tag``."""
    n1, n2 = rng.randint(1, max_side), rng.randint(1, max_side)
    v1 = [f"a{i}{tag}" for i in range(n1)]
    v2 = [f"b{j}{tag}" for j in range(n2)]
    pairs = [(u, v) for u in v1 for v in v2]
    while True:
        edges = {e for e in pairs if rng.random() < 0.6}
        if edges and is_connected(Bigraph(tuple(v1), tuple(v2), tuple(sorted(edges)))):
            break
    edges = sorted(edges)
    return v1, v2, edges, {e: rng.randrange(colors) for e in edges}


def disjoint_union(pieces) -> Tuple[Bigraph, Dict[Tuple[str, str], int]]:
    v1, v2, col = [], [], {}
    for a, b, edges, colors in pieces:
        v1 += a
        v2 += b
        col.update(colors)
    G = Bigraph(tuple(v1), tuple(v2), tuple(sorted(col)))
    return G, col


def _copy(piece, tag):
    a, b, edges, colors = piece
    ren = {x: x.split("_")[0] + tag for x in a + b}
    return ([ren[x] for x in a], [ren[x] for x in b], [(ren[u], ren[v]) for u, v in edges],
            {(ren[u], ren[v]): c for (u, v), c in colors.items()})


def upgrade_instance(rng: random.Random):
    """Flags F1, F2 with a core isomorphism f and a host isomorphism g.

    The host contains 1 to 3 components beyond the core; some are unlabeled
    copies of core components so that g may move the core off itself.
    """
    core = [random_connected(rng, f"_c{k}") for k in range(rng.randint(1, 2))]
    extra = []
    for k in range(rng.randint(1, 3)):
        if rng.random() < 0.6:
            extra.append(_copy(rng.choice(core), f"_x{k}"))
        else:
            extra.append(random_connected(rng, f"_x{k}"))
    G, col = disjoint_union(core + extra)
    H = ColoredBigraph(G, tuple(col[e] for e in G.edges))
    theta: List[str] = []
    for a, b, _, _ in core:
        theta.append(rng.choice(a + b))
    rng.shuffle(theta)
    F1 = Flag(H, tuple(theta))
    # F2 is a renamed copy; f and g are randomized by automorphisms
    names = list(G.vertices)
    perm = names[:]
    rng.shuffle(perm)
    ren = dict(zip(names, [f"w{i}" for i in range(len(names))]))
    ren = {x: ren[y] for x, y in zip(names, perm)}
    left = [ren[x] for x in G.v1]
    right = [ren[x] for x in G.v2]
    G2 = Bigraph(tuple(left), tuple(right), tuple(sorted((ren[u], ren[v]) for u, v in G.edges)))
    col2 = {(ren[u], ren[v]): c for (u, v), c in col.items()}
    F2 = Flag(ColoredBigraph(G2, tuple(col2[e] for e in G2.edges)), tuple(ren[x] for x in theta))
    host_auts = enumerate_automorphisms(H)
    a = G.perm_to_mapping(rng.choice(host_auts))
    g = {x: ren[a[x]] for x in names}
    from cutperc.density import restrict_to_core
    C1, C2 = restrict_to_core(F1), restrict_to_core(F2)
    core_auts = enumerate_automorphisms(C1)
    b = C1.graph.perm_to_mapping(rng.choice(core_auts))
    f = {x: ren[b[x]] for x in C1.graph.vertices}
    assert find_isomorphism(C1, C2) is not None
    return F1, F2, f, g
