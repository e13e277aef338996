"""Generators for the standard example families."""
from __future__ import annotations

from itertools import product
from typing import Callable, Dict, List

from .bigraph import Bigraph


class CatalogError(ValueError):
    pass


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise CatalogError(msg)


def even_cycle(n: int) -> Bigraph:
    """C_{2n}: u_i - v_i - u_{i+1} around the cycle (n >= 2)."""
    _need(n >= 2, "even_cycle needs n >= 2 (the cycle has 2n vertices)")
    u = [f"u{i}" for i in range(1, n + 1)]
    v = [f"v{i}" for i in range(1, n + 1)]
    edges = [(u[i], v[i]) for i in range(n)] + [(u[(i + 1) % n], v[i]) for i in range(n)]
    return Bigraph(tuple(u), tuple(v), tuple(edges))


def complete(p: int, q: int) -> Bigraph:
    _need(p >= 1 and q >= 1, "complete needs p, q >= 1")
    u = [f"u{i}" for i in range(1, p + 1)]
    v = [f"v{j}" for j in range(1, q + 1)]
    return Bigraph(tuple(u), tuple(v), tuple((a, b) for a in u for b in v))


def complete_minus_matching(n: int) -> Bigraph:
    _need(n >= 2, "complete_minus_matching needs n >= 2")
    u = [f"u{i}" for i in range(1, n + 1)]
    v = [f"v{j}" for j in range(1, n + 1)]
    return Bigraph(tuple(u), tuple(v), tuple((u[i], v[j]) for i in range(n) for j in range(n) if i != j))


def hypercube(n: int) -> Bigraph:
    """Q_n with the even-weight vertices on the left."""
    _need(n >= 1, "hypercube needs n >= 1")
    words = ["".join(map(str, w)) for w in product((0, 1), repeat=n)]
    left = [w for w in words if w.count("1") % 2 == 0]
    right = [w for w in words if w.count("1") % 2 == 1]
    edges = []
    for a in left:
        for k in range(n):
            b = a[:k] + ("1" if a[k] == "0" else "0") + a[k + 1:]
            edges.append((f"x{a}", f"x{b}"))
    return Bigraph(tuple(f"x{w}" for w in left), tuple(f"x{w}" for w in right), tuple(edges))


def path(k: int) -> Bigraph:
    """Path with k edges u1 v1 u2 v2 ..."""
    _need(k >= 1, "path needs k >= 1 edges")
    seq = []
    for i in range(k + 1):
        seq.append(f"u{i // 2 + 1}" if i % 2 == 0 else f"v{i // 2 + 1}")
    u = [x for x in seq if x.startswith("u")]
    v = [x for x in seq if x.startswith("v")]
    edges = []
    for a, b in zip(seq, seq[1:]):
        edges.append((a, b) if a.startswith("u") else (b, a))
    return Bigraph(tuple(u), tuple(v), tuple(edges))


def star(k: int) -> Bigraph:
    _need(k >= 1, "star needs k >= 1")
    return complete(1, k)


CATALOG: Dict[str, Callable[..., Bigraph]] = {
    "even_cycle": even_cycle,
    "complete": complete,
    "complete_minus_matching": complete_minus_matching,
    "hypercube": hypercube,
    "path": path,
    "star": star,
}

ARITY = {"even_cycle": 1, "complete": 2, "complete_minus_matching": 1, "hypercube": 1, "path": 1, "star": 1}


def generate_catalog(name: str, params: List[int]) -> Bigraph:
    if name not in CATALOG:
        raise CatalogError(f"unknown family {name!r}; choose from {sorted(CATALOG)}")
    if len(params) != ARITY[name]:
        raise CatalogError(f"{name} takes {ARITY[name]} integer parameter(s)")
    return CATALOG[name](*params)
