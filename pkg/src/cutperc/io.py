"""Reading and writing bigraph documents (JSON or edge-list text)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import jsonschema

from .bigraph import Bigraph, BigraphError, ColoredBigraph, Flag

FORMAT_VERSION = 1


class InputError(ValueError):
    def __init__(self, message: str, locus: str = "") -> None:
        super().__init__(f"{locus}: {message}" if locus else message)
        self.locus = locus


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("cutperc").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@dataclass
class Document:
    graph: Bigraph
    coloring: Optional[Tuple[int, ...]] = None
    left_coloring: Optional[Tuple[int, ...]] = None
    theta: Tuple[str, ...] = ()
    color_names: List[str] = field(default_factory=list)
    left_color_names: List[str] = field(default_factory=list)
    name: str = ""

    @property
    def colors(self) -> Tuple[int, ...]:
        return self.coloring if self.coloring is not None else tuple(0 for _ in range(self.graph.m))

    def colored(self) -> ColoredBigraph:
        return ColoredBigraph(self.graph, self.colors)

    def flag(self) -> Flag:
        return Flag(self.colored(), self.theta)

    def as_object(self):
        """The richest core object the document describes."""
        if self.theta:
            return self.flag()
        if self.coloring is not None:
            return self.colored()
        return self.graph


def _intern(values: Sequence[str]) -> Tuple[Tuple[int, ...], List[str]]:
    """Colors that are all decimal integers keep their value; others are
    numbered in sorted order and the names are kept for output."""
    if all(v.isdigit() and (v == "0" or not v.startswith("0")) for v in values):
        return tuple(int(v) for v in values), []
    names = sorted(set(values))
    pos = {n: i for i, n in enumerate(names)}
    return tuple(pos[v] for v in values), names


def parse_document(obj, source: str = "document") -> Document:
    if not isinstance(obj, dict):
        raise InputError("top level must be a JSON object", source)
    try:
        jsonschema.validate(obj, schema("bigraph-document"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path)
        raise InputError(exc.message, f"{source}:{where or '<root>'}") from None
    v1, v2 = obj["v1"], obj["v2"]
    for part, key in ((v1, "v1"), (v2, "v2")):
        seen = set()
        for k, name in enumerate(part):
            if name in seen:
                raise InputError(f"repeated vertex {name!r}", f"{source}:{key}/{k}")
            seen.add(name)
    overlap = set(v1) & set(v2)
    if overlap:
        raise InputError(f"parts are not disjoint: {sorted(overlap)}", f"{source}:v2")
    left, right = set(v1), set(v2)
    seen_edges = {}
    for k, (u, v) in enumerate(obj["edges"]):
        loc = f"{source}:edges/{k}"
        if u not in left:
            raise InputError(f"{u!r} is not a declared left vertex", loc)
        if v not in right:
            raise InputError(f"{v!r} is not a declared right vertex", loc)
        if (u, v) in seen_edges:
            raise InputError(f"duplicate edge {u}-{v} (first at edges/{seen_edges[(u, v)]})", loc)
        seen_edges[(u, v)] = k
    G = Bigraph(tuple(v1), tuple(v2), tuple((u, v) for u, v in obj["edges"]))
    doc = Document(G, name=obj.get("name", ""))
    if "coloring" in obj:
        raw = obj["coloring"]
        by_edge = {}
        for key, color in raw.items():
            parts = key.split("|")
            if len(parts) != 2 or (parts[0], parts[1]) not in seen_edges:
                raise InputError(f"coloring key {key!r} does not name an edge", f"{source}:coloring/{key}")
            by_edge[(parts[0], parts[1])] = color
        missing = [e for e in G.edges if e not in by_edge]
        if missing:
            u, v = missing[0]
            raise InputError(f"edge {u}|{v} has no color", f"{source}:coloring")
        doc.coloring, doc.color_names = _intern([by_edge[e] for e in G.edges])
    if "left_coloring" in obj:
        raw = obj["left_coloring"]
        for key in raw:
            if key not in left:
                raise InputError(f"{key!r} is not a left vertex", f"{source}:left_coloring/{key}")
        missing = [u for u in G.v1 if u not in raw]
        if missing:
            raise InputError(f"left vertex {missing[0]!r} has no color", f"{source}:left_coloring")
        doc.left_coloring, doc.left_color_names = _intern([raw[u] for u in G.v1])
    if "theta" in obj:
        theta = obj["theta"]
        for k, name in enumerate(theta):
            if name not in left and name not in right:
                raise InputError(f"labeled vertex {name!r} does not exist", f"{source}:theta/{k}")
        if len(set(theta)) != len(theta):
            raise InputError("labels must be distinct", f"{source}:theta")
        doc.theta = tuple(theta)
    return doc


def parse_text(text: str, source: str = "edge-list") -> Document:
    """Lines ``left right [color]``; '#' starts a comment."""
    v1: List[str] = []
    v2: List[str] = []
    edges: List[Tuple[str, str]] = []
    colors: List[str] = []
    seen: Dict[Tuple[str, str], int] = {}
    colored = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        loc = f"{source}:{lineno}"
        if len(toks) not in (2, 3):
            raise InputError("expected 'left right [color]'", loc)
        if colored is None:
            colored = len(toks) == 3
        elif colored != (len(toks) == 3):
            raise InputError("either every edge line has a color or none does", loc)
        u, v = toks[0], toks[1]
        if u in v2 or v in v1 or u == v:
            raise InputError(f"vertex used on both sides: {u if u in v2 else v}", loc)
        if (u, v) in seen:
            raise InputError(f"duplicate edge {u}-{v} (first on line {seen[(u, v)]})", loc)
        seen[(u, v)] = lineno
        if u not in v1:
            v1.append(u)
        if v not in v2:
            v2.append(v)
        edges.append((u, v))
        if colored:
            colors.append(toks[2])
    G = Bigraph(tuple(v1), tuple(v2), tuple(edges))
    doc = Document(G)
    if colored:
        by_edge = dict(zip(edges, colors))
        doc.coloring, doc.color_names = _intern([by_edge[e] for e in G.edges])
    return doc


def parse_bigraph(data, source: str = "input") -> Document:
    """Parse a JSON document (dict or text) or edge-list text."""
    if isinstance(data, dict):
        return parse_document(data, source)
    text = data.decode() if isinstance(data, bytes) else str(data)
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc.msg}", f"{source}:{exc.lineno}:{exc.colno}") from None
        return parse_document(obj, source)
    return parse_text(text, source)


def to_document(G: Bigraph, coloring: Optional[Sequence[Hashable]] = None,
                left_coloring: Optional[Sequence[Hashable]] = None, theta: Sequence[str] = (),
                color_names: Sequence[str] = (), left_color_names: Sequence[str] = (),
                name: str = "") -> dict:
    doc = {"format_version": FORMAT_VERSION, "v1": list(G.v1), "v2": list(G.v2), "edges": [list(e) for e in G.edges]}
    if name:
        doc["name"] = name
    if coloring is not None:
        show = (lambda c: color_names[c]) if color_names else str
        doc["coloring"] = {f"{u}|{v}": show(c) for (u, v), c in zip(G.edges, coloring)}
    if left_coloring is not None:
        show = (lambda c: left_color_names[c]) if left_color_names else str
        doc["left_coloring"] = {u: show(c) for u, c in zip(G.v1, left_coloring)}
    if theta:
        doc["theta"] = list(theta)
    return doc


def document_of(doc: Document) -> dict:
    return to_document(doc.graph, doc.coloring, doc.left_coloring, doc.theta, doc.color_names,
                       doc.left_color_names, doc.name)


def serialize(X) -> dict:
    """Document for a Bigraph, ColoredBigraph or Flag."""
    if isinstance(X, Document):
        return document_of(X)
    if isinstance(X, Flag):
        return to_document(X.graph, X.host.colors, theta=X.theta)
    if isinstance(X, ColoredBigraph):
        return to_document(X.graph, X.colors)
    if isinstance(X, Bigraph):
        return to_document(X)
    raise TypeError(f"cannot serialize {type(X).__name__}")


def to_edge_list(G: Bigraph, coloring: Optional[Sequence[Hashable]] = None) -> str:
    lines = []
    for k, (u, v) in enumerate(G.edges):
        lines.append(f"{u} {v}" + (f" {coloring[k]}" if coloring is not None else ""))
    return "\n".join(lines) + "\n"


def validate_report(report: dict) -> None:
    jsonschema.validate(report, schema("report"))
