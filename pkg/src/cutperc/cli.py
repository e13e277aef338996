"""Command-line front end: ``cutperc <command> [input] [options]``."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import __version__
from .bigraph import BigraphError, Flag, rainbow
from .catalog import CATALOG, CatalogError, generate_catalog
from .density import DensityError, check_fold_cs, cs_equality_characterization, compare_with_masses, density, \
    flag_density, natural_family, random_family
from .dot import export_dot
from .folds import FoldError, FoldSet, cut_involutions, enumerate_folds, enumerate_independent_folds
from .io import Document, InputError, parse_bigraph, serialize, to_edge_list, validate_report
from .percolation import DEFAULT_BUDGET, LEFT, BudgetExceeded, FoldingProblem, LeftMonochromatic, Monochromatic, \
    NotAbsorbing, PercolationWitness, Unreachable, apply_fold, build_percolating_sequence, is_absorbing, \
    is_cut_percolating, is_left_cut_percolating, reachability_digraph, reaches, verify_percolation_witness
from .stability import DisconnectedInput, NonInvariantFolds, PaletteTooSmall, StabilityQuery, is_fold_stable, \
    is_left_symmetrically_fold_stable, is_strongly_fold_stable, is_symmetrically_fold_stable, tensor, \
    verify_cutperc_theorem, verify_leftcutperc_theorem

EXIT = {"ok": 0, "negative": 1, "budget-exceeded": 2, "input-error": 3, "invariant-violation": 4}
INPUT_ERRORS = (InputError, BigraphError, CatalogError, DensityError, FoldError, DisconnectedInput,
                NonInvariantFolds, PaletteTooSmall, NotAbsorbing, Unreachable)


class Outcome:
    """Result of one command before rendering."""

    def __init__(self, status: str, result: dict, doc: Optional[Document] = None,
                 folds: Optional[FoldSet] = None, raw: Optional[str] = None) -> None:
        self.status = status
        self.result = result
        self.doc = doc
        self.folds = folds
        self.raw = raw
        self.figures: List[str] = []


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, list):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def fold_table(folds: FoldSet) -> List[dict]:
    return [dict(fold_id=i, **f.describe()) for i, f in enumerate(folds)]


def _read_input(path: Optional[str]) -> Document:
    if path is None or path == "-":
        return parse_bigraph(sys.stdin.read(), "<stdin>")
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_bigraph(fh.read(), path)
    except OSError as exc:
        raise InputError(exc.strerror or str(exc), path) from None


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(exc.strerror or str(exc), path) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None


def _edge_name(G, e: int) -> str:
    u, v = G.edges[e]
    return f"{u}|{v}"


def _replay_folds(report: dict, folds: FoldSet) -> None:
    listed = report.get("folds")
    if listed is not None and _jsonable(listed) != _jsonable(fold_table(folds)):
        raise InputError("fold indexing in the replayed report does not match this graph", "replay:folds")


# ------------------------------------------------------------------ commands

def cmd_folds(args) -> Outcome:
    doc = _read_input(args.input)
    X = doc.colored() if doc.coloring is not None else doc.graph
    if args.kind == "involutions":
        invs = cut_involutions(X)
        G = doc.graph
        res = {"kind": "cut-involutions", "count": len(invs),
               "involutions": [{"involution": {G.vertices[i]: G.vertices[j] for i, j in enumerate(ci.perm) if i != j},
                                "fixed": G.names(ci.fixed)} for ci in invs]}
        return Outcome("ok", res, doc, enumerate_folds(X))
    folds = enumerate_independent_folds(X) if args.kind == "independent" else enumerate_folds(X)
    res = {"kind": args.kind, "count": len(folds), "dual_closed": folds.is_dual_closed()}
    return Outcome("ok", res, doc, folds)


def _witness_from_json(G, obj: dict) -> PercolationWitness:
    universe = obj.get("universe")
    seq = obj.get("sequence")
    if universe not in ("edges", "left") or not isinstance(seq, list) or not seq:
        raise InputError("witness needs 'universe' and a non-empty 'sequence'", "replay:result/witness")
    if universe == "edges":
        lookup = {_edge_name(G, e): e for e in range(G.m)}
    else:
        lookup = {u: i for i, u in enumerate(G.v1)}
    states, used = [], []
    for k, step in enumerate(seq):
        try:
            states.append(tuple(sorted(lookup[name] for name in step["state"])))
        except (KeyError, TypeError):
            raise InputError("witness state names an unknown element", f"replay:sequence/{k}") from None
        if k:
            if not isinstance(step.get("fold_id"), int):
                raise InputError("witness step lacks a fold_id", f"replay:sequence/{k}")
            used.append(step["fold_id"])
    return PercolationWitness(universe, states, used)


def _percolate(args, left: bool) -> Outcome:
    doc = _read_input(args.input)
    G = doc.graph
    H = doc.colored()
    folds = enumerate_folds(H) if left else enumerate_folds(G)
    if args.replay:
        report = _read_json(args.replay)
        _replay_folds(report, folds)
        w = _witness_from_json(G, report.get("result", {}).get("witness") or {})
        ok = verify_percolation_witness(G, folds, w)
        return Outcome("ok" if ok else "negative", {"replayed": True, "valid": ok, "witness_length": len(w)}, doc, folds)
    w = is_left_cut_percolating(H, folds, args.budget) if left else is_cut_percolating(G, folds, args.budget)
    res = {"percolating": w is not None, "fold_count": len(folds)}
    if w is not None:
        res["witness"] = w.to_json(G)
        res["witness_verified"] = verify_percolation_witness(G, folds, w)
        if not res["witness_verified"]:
            return Outcome("invariant-violation", res, doc, folds)
    out = Outcome("ok" if w is not None else "negative", res, doc, folds)
    if args.figures:
        from .plotting import plot_bigraph
        out.figures.append(plot_bigraph(G, os.path.join(args.figures, f"{args.command}.png"),
                                        doc.coloring, folds[w.folds[0]] if w and w.folds else None,
                                        title=f"{args.command}: {'yes' if w else 'no'}"))
    return out


def cmd_percolate(args) -> Outcome:
    return _percolate(args, left=False)


def cmd_left_percolate(args) -> Outcome:
    return _percolate(args, left=True)


def _reach_setup(args, doc: Document):
    G = doc.graph
    base = rainbow(G) if args.start == "rainbow" else doc.colors
    if args.target == "left-monochromatic":
        if doc.left_coloring is None and args.start != "rainbow":
            raise InputError("left-monochromatic target needs a left_coloring", "input:left_coloring")
        left = tuple(range(G.n1)) if args.start == "rainbow" else doc.left_coloring
        return tensor(left, doc.colors, G), LeftMonochromatic(), enumerate_folds(doc.colored())
    return tuple(base), Monochromatic(), enumerate_folds(G)


def cmd_reach(args) -> Outcome:
    doc = _read_input(args.input)
    G = doc.graph
    start, objectives, folds = _reach_setup(args, doc)
    if args.replay:
        report = _read_json(args.replay)
        _replay_folds(report, folds)
        steps = report.get("result", {}).get("path") or []
        c = start
        ok = True
        for step in steps:
            i, side = step.get("fold_id"), step.get("side")
            if not isinstance(i, int) or not 0 <= i < len(folds) or side not in ("left", "right"):
                ok = False
                break
            c = apply_fold(c, folds[i], LEFT if side == "left" else 2)
            if _jsonable(list(c)) != _jsonable(step.get("state")):
                ok = False
                break
        ok = ok and c in objectives
        return Outcome("ok" if ok else "negative", {"replayed": True, "valid": ok, "path_length": len(steps)}, doc, folds)
    problem = FoldingProblem(G, start, objectives, folds)
    path = reaches(problem, args.budget)
    res = {"start": list(start), "target": args.target, "reachable": path is not None,
           "path": path.to_json(folds) if path else None}
    dg = reachability_digraph(start, folds, args.budget)
    res["reachable_states"] = len(dg)
    res["start_is_maximal"] = bool(dg.is_maximal(start))
    res["absorbing"] = is_absorbing(problem, digraph=dg).absorbing
    out = Outcome("ok" if path is not None else "negative", res, doc, folds)
    if args.figures and path is not None and args.stages:
        from .plotting import plot_stage_masses
        try:
            seq = build_percolating_sequence(problem, args.stages, args.budget)
        except NotAbsorbing:
            seq = None
        if seq is not None:
            res["stage_masses"] = [str(m) for m in seq.masses]
            out.figures.append(plot_stage_masses(seq.masses, os.path.join(args.figures, "reach-masses.png"),
                                                 [seq.bound_tight]))
    return out


def cmd_stability(args) -> Outcome:
    doc = _read_input(args.input)
    G = doc.graph
    folds = enumerate_folds(G)
    q = StabilityQuery(G, doc.colors, None, folds, folds)
    reports = {
        "fold-stable": is_fold_stable(q),
        "strongly-fold-stable": is_strongly_fold_stable(q),
        "symmetrically-fold-stable": is_symmetrically_fold_stable(q),
    }
    if doc.left_coloring is not None:
        reports["left-symmetrically-fold-stable"] = is_left_symmetrically_fold_stable(G, doc.left_coloring, doc.colors)
    res = {}
    for name, rep in reports.items():
        entry = {"verdict": rep.verdict}
        if rep.failure:
            entry["failure"] = rep.failure
        if args.witnesses:
            entry["iso_witness"] = {str(i): G.perm_to_mapping(g) for i, g in rep.iso_witness.items()}
            entry["inverse_witness"] = {str(i): G.perm_to_mapping(g) for i, g in rep.inverse_witness.items()}
        res[name] = entry
    if args.notion not in reports:
        raise InputError(f"notion {args.notion!r} needs a left_coloring", "input:left_coloring")
    return Outcome("ok" if reports[args.notion].verdict else "negative", res, doc, folds)


def _harness_outcome(args, doc, report, folds, title: str) -> Outcome:
    items = [{"item": it.item, "value": it.value, "method": it.method, "seconds": round(it.seconds, 6),
              "note": it.note, "detail": _jsonable(it.detail)} for it in report.items]
    res = {"items": items, "consistent": report.consistent, "value": report.value}
    if not report.consistent:
        status = "invariant-violation"
    elif report.value is None:
        status = "budget-exceeded" if any("budget" in it.note for it in report.items) else "ok"
    else:
        status = "ok" if report.value else "negative"
    out = Outcome(status, res, doc, folds)
    if args.figures:
        from .plotting import plot_items
        out.figures.append(plot_items([(it.item, it.value) for it in report.items],
                                      os.path.join(args.figures, f"{args.command}.png"), title))
    return out


def _items(args) -> List[int]:
    if not args.items:
        return list(range(1, 10))
    try:
        out = sorted({int(x) for x in args.items.split(",")})
    except ValueError:
        raise InputError("--items takes comma-separated integers", "--items") from None
    if any(not 1 <= k <= 9 for k in out):
        raise InputError("items are numbered 1..9", "--items")
    return out


def cmd_verify_theorem(args) -> Outcome:
    doc = _read_input(args.input)
    G = doc.graph
    folds = enumerate_folds(G)
    report = verify_cutperc_theorem(G, folds, args.palette, _items(args), args.budget)
    return _harness_outcome(args, doc, report, folds, "edge harness")


def cmd_verify_left_theorem(args) -> Outcome:
    doc = _read_input(args.input)
    H = doc.colored()
    folds = enumerate_folds(H)
    report = verify_leftcutperc_theorem(H, folds, args.palette, _items(args), args.budget)
    return _harness_outcome(args, doc, report, folds, "left-vertex harness")


def cmd_density(args) -> Outcome:
    doc = _read_input(args.input)
    G = doc.graph
    H = doc.colored()
    palette = sorted(set(H.colors) | set(range(args.palette or 0)), key=repr)
    if args.bigraphon == "random":
        W = random_family(random.Random(args.seed), palette, args.size, args.size)
    else:
        W = natural_family(H, palette)
    res: dict = {"bigraphon": args.bigraphon, "seed": args.seed if args.bigraphon == "random" else None}
    if doc.theta:
        table = flag_density(Flag(H, doc.theta), W)
        res["flag_density"] = [{"points": list(k), "value": str(v)} for k, v in sorted(table.entries.items())]
    else:
        res["density"] = str(density(H, W))
    folds = enumerate_folds(G)
    checks = []
    violated = False
    for i, fold in enumerate(folds):
        check = check_fold_cs(H, fold, W)
        iso = cs_equality_characterization(H, fold)
        violated = violated or not check.holds or (iso and not check.equal)
        checks.append({"fold_id": i, "lhs": str(check.lhs), "rhs": str(check.rhs), "holds": check.holds,
                       "equal": check.equal, "cores_isomorphic": iso})
    res["fold_checks"] = checks
    if args.stages:
        problem = FoldingProblem(G, H.colors, Monochromatic(), folds)
        seq = build_percolating_sequence(problem, args.stages, args.budget)
        height = max(len(t) for t in seq.leaf_colorings[-1])
        if height > args.depth_cap:
            raise BudgetExceeded(f"tree height {height} exceeds --depth-cap {args.depth_cap}", height, 0)
        cmp = compare_with_masses(H, seq.mass_by_coloring(args.stages), W)
        res["tree"] = {"stages": args.stages, "height": height, "masses": [str(m) for m in seq.masses],
                       "relation": cmp.relation, "leq": cmp.leq_certified,
                       "terms": [{"density": str(t), "mass": str(e)} for t, e in cmp.certificate.terms]}
        violated = violated or not cmp.leq_certified
    out = Outcome("invariant-violation" if violated else "ok", res, doc, folds)
    if args.figures and args.stages:
        from .plotting import plot_stage_masses
        out.figures.append(plot_stage_masses(seq.masses, os.path.join(args.figures, "density-masses.png"),
                                             [seq.bound_tight]))
    return out


def cmd_catalog(args) -> Outcome:
    G = generate_catalog(args.family, args.params)
    doc = Document(G, name=f"{args.family}({','.join(map(str, args.params))})")
    raw = to_edge_list(G) if args.format == "text" else json.dumps(serialize(doc), indent=2) + "\n"
    return Outcome("ok", {"document": serialize(doc)}, doc, None, raw)


def cmd_export_dot(args) -> Outcome:
    doc = _read_input(args.input)
    G = doc.graph
    folds = enumerate_folds(G)
    fold = None
    if args.fold is not None:
        if not 0 <= args.fold < len(folds):
            raise InputError(f"fold id {args.fold} out of range (0..{len(folds) - 1})", "--fold")
        fold = folds[args.fold]
    shown = None
    if doc.coloring is not None:
        shown = [doc.color_names[c] for c in doc.coloring] if doc.color_names else list(doc.coloring)
    text = export_dot(G, shown, fold, doc.theta, doc.name or "bigraph")
    out = Outcome("ok", {"dot": text}, doc, folds, None if args.format == "json" else text)
    if args.figures:
        from .plotting import plot_bigraph
        out.figures.append(plot_bigraph(G, os.path.join(args.figures, "export-dot.png"), shown, fold))
    return out


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="state budget for searches")
    common.add_argument("--palette", type=int, default=None, help="palette size for scans and bigraphon families")
    common.add_argument("--seed", type=int, default=0, help="seed for random bigraphons")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="emit the JSON report")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", help="emit human-readable text")
    common.add_argument("--depth-cap", type=int, default=16, help="maximum coloring-tree height")
    common.add_argument("--replay", metavar="REPORT", help="re-verify the witness in a previous JSON report")
    common.add_argument("--figures", metavar="DIR", help="write figures into DIR")

    parser = argparse.ArgumentParser(prog="cutperc", description="Folds, cut-percolation and stability of bigraphs.")
    parser.add_argument("--version", action="version", version=f"cutperc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str, takes_input: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        if takes_input:
            p.add_argument("input", nargs="?", help="bigraph document or edge list (default: stdin)")
        p.set_defaults(func=fn)
        return p

    p = add("folds", cmd_folds, "enumerate folds, cut-involutions or independent folds")
    p.add_argument("--kind", choices=["folds", "involutions", "independent"], default="folds")
    add("percolate", cmd_percolate, "decide cut-percolation with a witness")
    add("left-percolate", cmd_left_percolate, "decide left-cut-percolation of the colored input")
    p = add("reach", cmd_reach, "shortest fold path into the monochromatic colorings")
    p.add_argument("--start", choices=["input", "rainbow"], default="input")
    p.add_argument("--target", choices=["monochromatic", "left-monochromatic"], default="monochromatic")
    p.add_argument("--stages", type=int, default=0, help="stages of the percolating sequence to plot")
    p = add("stability", cmd_stability, "fold stability of the input coloring in all notions")
    p.add_argument("--notion", default="fold-stable",
                   choices=["fold-stable", "strongly-fold-stable", "symmetrically-fold-stable",
                            "left-symmetrically-fold-stable"], help="notion that decides the exit code")
    p.add_argument("--witnesses", action="store_true", help="include isomorphism witnesses")
    for name, fn in (("verify-theorem", cmd_verify_theorem), ("verify-left-theorem", cmd_verify_left_theorem)):
        p = add(name, fn, "compute the equivalent items and check they agree")
        p.add_argument("--items", help="comma-separated item numbers (default all)")
    p = add("density", cmd_density, "homomorphism densities and fold inequalities")
    p.add_argument("--bigraphon", choices=["natural", "random"], default="natural")
    p.add_argument("--size", type=int, default=3, help="points per side of a random bigraphon")
    p.add_argument("--stages", type=int, default=0, help="compare against a percolating sequence of this length")
    p = add("catalog", cmd_catalog, "generate a standard bigraph", takes_input=False)
    p.add_argument("family", choices=sorted(CATALOG))
    p.add_argument("params", type=int, nargs="*")
    p = add("export-dot", cmd_export_dot, "Graphviz rendering with fold annotations")
    p.add_argument("--fold", type=int, help="fold id to annotate")
    return parser


def _report(args, out: Outcome, timings: Dict[str, float], error: Optional[str] = None) -> dict:
    report = {"report_version": 1, "command": args.command, "status": out.status, "exit_code": EXIT[out.status],
              "result": _jsonable(out.result)}
    if out.doc is not None:
        report["graph"] = serialize(out.doc)
    if out.folds is not None:
        report["folds"] = _jsonable(fold_table(out.folds))
    report["timings"] = timings
    if out.figures:
        report["figures"] = out.figures
    if error:
        report["error"] = error
    validate_report(report)
    return report


def _render_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    for key, val in report["result"].items():
        if isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{key}:")
            lines.extend("  " + ", ".join(f"{k}={v}" for k, v in row.items()) for row in val)
        else:
            lines.append(f"{key}: {json.dumps(val) if isinstance(val, (dict, list)) else val}")
    for fig in report.get("figures", []):
        lines.append(f"figure: {fig}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "json" if args.command == "catalog" else "text"
    t0 = time.perf_counter()
    error = None
    try:
        out = args.func(args)
    except BudgetExceeded as exc:
        out, error = Outcome("budget-exceeded", {}), str(exc)
    except INPUT_ERRORS as exc:
        out, error = Outcome("input-error", {}), str(exc)
    timings = {"total_seconds": round(time.perf_counter() - t0, 6)}
    if out.raw is not None and error is None:
        sys.stdout.write(out.raw)
        return EXIT[out.status]
    report = _report(args, out, timings, error)
    if args.format == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(_render_text(report))
    if error:
        print(f"cutperc: {error}", file=sys.stderr)
    return EXIT[out.status]


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
