"""Batch command-line front end.

Exit codes: 0 = all verdicts pass, 1 = a verdict failed (with witness),
2 = usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import Dict, List, Optional, Tuple

from . import analysis, substitution
from .category import (
    codim2_alternatives,
    compose,
    enumerate_elements,
    enumerate_graphical_maps,
    factorize,
    faces,
    identity_map,
    is_graphical,
    maps_equal_up_to_source_iso,
    reedy_classify,
    reedy_degree,
)
from .corpus import corpus_name, generate_corpus
from .decorated import DecoratedGraph
from .dot import graph_to_dot
from .fileformat import (
    parse_graph,
    parse_map,
    parse_propad,
    print_graph,
    print_map,
    print_propad,
)
from .graphs import GGraph, GraphError, strict_iso
from .nerve import (
    NerveSet,
    fundamental_propad,
    inner_horn_report,
    make_horn,
    horn_fillers,
    horn_faces,
    segal_is_bijective,
    strict_check,
)
from .tensor import (
    distributivity_decompose,
    generating_object_of_graph,
    tensor_presentation,
)
from .wheeled import is_wheeled_graphical, wheeled_factorize


class Report:
    """A flat verdict table with optional JSON sidecar."""

    def __init__(self, command: str, inputs: List[str]):
        self.command = command
        self.inputs = inputs
        self.rows: List[Tuple[str, str, str]] = []
        self.t0 = time.time()

    def add(self, check: str, ok: bool, witness: str = "") -> None:
        self.rows.append((check, "pass" if ok else "FAIL", witness))

    def info(self, check: str, value: str) -> None:
        self.rows.append((check, "info", value))

    @property
    def failed(self) -> bool:
        return any(status == "FAIL" for _, status, _ in self.rows)

    def emit(self, json_path: Optional[str] = None) -> int:
        width = max([len(c) for c, _, _ in self.rows] + [5])
        print(f"# {self.command} {' '.join(self.inputs)}")
        for check, status, witness in self.rows:
            line = f"{check.ljust(width)}  {status}"
            if witness:
                line += f"  {witness}"
            print(line)
        dt = time.time() - self.t0
        print(f"# {len(self.rows)} checks, {dt:.2f}s")
        if json_path:
            payload = {
                "command": self.command,
                "inputs": self.inputs,
                "verdicts": [
                    {"check": c, "status": s, "witness": w}
                    for c, s, w in self.rows
                ],
                "seconds": dt,
            }
            with open(json_path, "w") as fh:
                json.dump(payload, fh, indent=1, sort_keys=True)
        return 1 if self.failed else 0


def _load_graph(path: str) -> GGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def _validate_worker(path: str):
    try:
        G = _load_graph(path)
        return (path, True, f"{G.n_vertices} vertices, {len(G.edges)} edges")
    except (GraphError, OSError) as exc:
        return (path, False, str(exc))


def _classify_worker(path: str):
    G = _load_graph(path)
    return (path, analysis.classify(G).as_record())


def _map_files(fn, files, jobs: int):
    if jobs <= 1 or len(files) <= 1:
        return [fn(p) for p in files]
    import concurrent.futures as cf
    with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, files))


def cmd_validate(args) -> int:
    rep = Report("validate", args.files)
    for path, ok, detail in _map_files(_validate_worker, args.files,
                                       args.jobs):
        rep.add(path, ok, detail)
    return rep.emit(args.json)


def cmd_classify(args) -> int:
    rep = Report("classify", args.files)
    for path, record in _map_files(_classify_worker, args.files, args.jobs):
        for key, val in record.items():
            rep.info(f"{path}:{key}", "true" if val else "false")
    rep.add("classify", True)
    return rep.emit(args.json)


def cmd_factor(args) -> int:
    rep = Report("factor", [args.file, args.kind])
    G = _load_graph(args.file)
    op = substitution.FACTORIZATION_KINDS.get(args.kind)
    if op is None:
        print(f"unknown factorization kind {args.kind!r}", file=sys.stderr)
        return 2
    facts = op(G)
    rep.info("count", str(len(facts)))
    for k, f in enumerate(facts):
        R = f.recompose()
        ok = strict_iso(R, G) is not None
        rep.add(f"factorization[{k}] {f.witness}", ok)
        if args.verbose:
            print(print_graph(f.outer))
            print(print_graph(f.distinguished))
    return rep.emit(args.json)


def cmd_substitute(args) -> int:
    rep = Report("substitute", [args.outer] + args.inner)
    outer = _load_graph(args.outer)
    inner = {}
    for item in args.inner:
        vertex, _, path = item.partition("=")
        inner[vertex] = _load_graph(path)
    result, prov = substitution.substitute(outer, inner)
    sys.stdout.write(print_graph(result))
    rep.add("substitute", True,
            f"{result.n_vertices} vertices, {len(result.edges)} edges")
    return rep.emit(args.json)


def cmd_enumerate(args) -> int:
    rep = Report("enumerate", [args.file])
    G = _load_graph(args.file)
    els = enumerate_elements(G, args.max_vertices, wheeled=args.wheeled)
    rep.info("elements", str(len(els)))
    rep.add("enumerate", True)
    return rep.emit(args.json)


def cmd_homset(args) -> int:
    rep = Report("homset", [args.source, args.target])
    G = _load_graph(args.source)
    K = _load_graph(args.target)
    maps = enumerate_graphical_maps(G, K, wheeled=args.wheeled)
    rep.info("maps", str(len(maps)))
    rep.add("homset", True)
    return rep.emit(args.json)


def cmd_factorize_map(args) -> int:
    rep = Report("factorize-map", [args.file])
    with open(args.file) as fh:
        m = parse_map(fh.read(), wheeled=args.wheeled)
    graphical = (is_wheeled_graphical(m) if args.wheeled
                 else is_graphical(m))
    rep.add("graphical", graphical)
    if graphical:
        mf = (wheeled_factorize(m) if args.wheeled else factorize(m))
        rep.info("codegeneracies", str(len(mf.codegeneracies)))
        rep.info("inner-cofaces", str(len(mf.inner_cofaces)))
        rep.info("outer-cofaces", str(len(mf.outer_cofaces)))
        rep.add("recompose", mf.recompose(wheeled=args.wheeled).same(m))
    return rep.emit(args.json)


def cmd_codim2(args) -> int:
    rep = Report("codim2", [args.first, args.second])
    with open(args.first) as fh:
        d_v = parse_map(fh.read(), wheeled=args.wheeled)
    with open(args.second) as fh:
        d_u = parse_map(fh.read(), wheeled=args.wheeled)
    alts = codim2_alternatives(d_v, d_u, wheeled=args.wheeled)
    rep.info("alternatives", str(len(alts)))
    rep.add("exists", len(alts) >= 1)
    rep.add("unique-up-to-listing", len(alts) == 1)
    return rep.emit(args.json)


def cmd_reedy(args) -> int:
    from properads.category import reedy_axioms

    rep = Report("reedy", [args.corpus or "(generated)"])
    if args.corpus:
        graphs = []
        for name in sorted(os.listdir(args.corpus)):
            if name.endswith(".graph"):
                graphs.append(_load_graph(os.path.join(args.corpus, name)))
    else:
        graphs = generate_corpus(args.max_vertices, args.max_edges,
                                 args.max_legs)
    report = reedy_axioms(graphs, seed=args.seed)
    for check, ok in report.items():
        rep.add(check, ok)
    return rep.emit(args.json)


def _load_propad(path: str):
    with open(path) as fh:
        return parse_propad(fh.read())


def cmd_nerve(args) -> int:
    rep = Report("nerve", [args.propad, args.graph])
    P = _load_propad(args.propad)
    G = _load_graph(args.graph)
    X = NerveSet(P, wheeled=P.wheeled)
    rep.info("elements", str(len(X.value(G))))
    rep.add("nerve", True)
    return rep.emit(args.json)


def cmd_segal(args) -> int:
    rep = Report("segal", [args.propad, args.graph])
    P = _load_propad(args.propad)
    G = _load_graph(args.graph)
    X = NerveSet(P, wheeled=P.wheeled)
    rep.add("segal-bijective", segal_is_bijective(X, G))
    return rep.emit(args.json)


def cmd_horn(args) -> int:
    rep = Report("horn", [args.propad, args.shape])
    P = _load_propad(args.propad)
    G = _load_graph(args.shape)
    X = NerveSet(P, wheeled=P.wheeled)
    if args.exclude is not None:
        all_faces = horn_faces(G, wheeled=X.wheeled)
        rep.info("faces", str(len(all_faces)))
        excluded = all_faces[args.exclude]
        rep.info("excluded", str(excluded.tag))
        # every graphex of G determines a horn over its other faces; count
        # the fillers of each such horn
        ok = True
        for x in X.value(G):
            family = {k: X.restrict(d, x)
                      for k, d in enumerate(all_faces)
                      if k != args.exclude}
            horn = make_horn(X, G, args.exclude, family,
                             check_compatibility=False)
            fillers = horn_fillers(X, horn)
            if x not in fillers:
                ok = False
        rep.add("graphex-horns-fillable", ok)
        return rep.emit(args.json)
    exists, unique = inner_horn_report(X, G)
    rep.add("inner-fillers-exist", exists)
    rep.add("inner-fillers-unique", unique)
    return rep.emit(args.json)


def cmd_fundamental(args) -> int:
    rep = Report("fundamental", [args.propad])
    P = _load_propad(args.propad)
    X = NerveSet(P, wheeled=P.wheeled)
    Q = fundamental_propad(X, strict=True)
    rep.info("colors", str(len(Q.colors)))
    for m in range(0, args.max_arity + 1):
        for n in range(0, args.max_arity + 1):
            if not P.colors:
                continue
            prof_p = (tuple([P.colors[0]] * m), tuple([P.colors[0]] * n))
            prof_q = (tuple([Q.colors[0]] * m), tuple([Q.colors[0]] * n))
            lp = len(P.components(*prof_p))
            lq = len(Q.components(*prof_q))
            rep.add(f"component({m};{n})", lp == lq, f"{lq} vs {lp}")
    return rep.emit(args.json)


def cmd_tensor(args) -> int:
    rep = Report("tensor", [args.first, args.second])
    G = _load_graph(args.first)
    H = _load_graph(args.second)
    pres = tensor_presentation(G, H)
    rep.info("generators", str(len(pres.generators.elements)))
    rep.info("colors", str(len(pres.generators.colors)))
    rep.info("relations", str(len(pres.relations)))
    for rel in pres.relations:
        li = sorted(map(repr, rel.left.input_colors()))
        ri = sorted(map(repr, rel.right.input_colors()))
        lo = sorted(map(repr, rel.left.output_colors()))
        ro = sorted(map(repr, rel.right.output_colors()))
        rep.add(f"relation({rel.p},{rel.q})", li == ri and lo == ro)
    return rep.emit(args.json)


def _full_sub_element(G: GGraph, vertices: List[str]) -> DecoratedGraph:
    from .category import all_subgraph_elements
    for el in all_subgraph_elements(G):
        if el.exc is None and sorted(el.decorations) == sorted(vertices):
            return el
    raise GraphError(f"no full connected sub-element on {vertices}")


def cmd_distribute(args) -> int:
    rep = Report("distribute", [args.first, args.second])
    G = _load_graph(args.first)
    H = _load_graph(args.second)
    A = generating_object_of_graph(G)
    B = generating_object_of_graph(H)
    p = _full_sub_element(G, args.p.split(","))
    q = _full_sub_element(H, args.q.split(","))
    chain = distributivity_decompose(A, B, p, q)
    want = p.n_instances * q.n_instances
    rep.info("steps", str(len(chain.steps)))
    rep.add("length-mn", len(chain.steps) == want, f"expected {want}")
    for k, step in enumerate(chain.steps):
        rep.add(f"step[{k}] ({step.p},{step.q})", True)
    return rep.emit(args.json)


def cmd_dot(args) -> int:
    G = _load_graph(args.file)
    sys.stdout.write(graph_to_dot(G, name=os.path.basename(args.file)))
    return 0


def cmd_corpus(args) -> int:
    rep = Report("corpus", [args.out])
    graphs = generate_corpus(args.max_vertices, args.max_edges,
                             args.max_legs, wheeled=args.wheeled)
    os.makedirs(args.out, exist_ok=True)
    manifest = []
    for k, G in enumerate(graphs):
        name = corpus_name(k, G)
        with open(os.path.join(args.out, name + ".graph"), "w") as fh:
            fh.write(print_graph(G))
        manifest.append(name)
    with open(os.path.join(args.out, "MANIFEST"), "w") as fh:
        fh.write("\n".join(manifest) + "\n")
    rep.info("graphs", str(len(graphs)))
    rep.add("corpus", True)
    return rep.emit(args.json)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="properads",
        description="batch verification of graph substitution and the "
                    "graphical categories of (wheeled) properads")
    top.add_argument("--seed", type=int, default=0)
    top.add_argument("--jobs", type=int, default=1)
    top.add_argument("--json", help="write a structured report here")
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate")
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("classify")
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("factor")
    p.add_argument("file")
    p.add_argument("--kind", required=True,
                   choices=sorted(substitution.FACTORIZATION_KINDS))
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=cmd_factor)

    p = sub.add_parser("substitute")
    p.add_argument("outer")
    p.add_argument("inner", nargs="+", metavar="vertex=file")
    p.set_defaults(fn=cmd_substitute)

    p = sub.add_parser("enumerate")
    p.add_argument("file")
    p.add_argument("--max-vertices", type=int, default=2)
    p.add_argument("--wheeled", action="store_true")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("homset")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--wheeled", action="store_true")
    p.set_defaults(fn=cmd_homset)

    p = sub.add_parser("factorize-map")
    p.add_argument("file")
    p.add_argument("--wheeled", action="store_true")
    p.set_defaults(fn=cmd_factorize_map)

    p = sub.add_parser("codim2")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--wheeled", action="store_true")
    p.set_defaults(fn=cmd_codim2)

    p = sub.add_parser("reedy")
    p.add_argument("--corpus", default=os.environ.get("PROPERADS_CORPUS"))
    p.add_argument("--max-vertices", type=int, default=3)
    p.add_argument("--max-edges", type=int, default=2)
    p.add_argument("--max-legs", type=int, default=2)
    p.set_defaults(fn=cmd_reedy)

    p = sub.add_parser("nerve")
    p.add_argument("propad")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_nerve)

    p = sub.add_parser("segal")
    p.add_argument("propad")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_segal)

    p = sub.add_parser("horn")
    p.add_argument("propad")
    p.add_argument("--inner", dest="shape", required=True)
    p.add_argument("--exclude", type=int, default=None)
    p.set_defaults(fn=cmd_horn)

    p = sub.add_parser("fundamental")
    p.add_argument("propad")
    p.add_argument("--max-arity", type=int, default=2)
    p.set_defaults(fn=cmd_fundamental)

    p = sub.add_parser("tensor")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(fn=cmd_tensor)

    p = sub.add_parser("distribute")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--p", required=True, help="comma-separated vertices")
    p.add_argument("--q", required=True)
    p.set_defaults(fn=cmd_distribute)

    p = sub.add_parser("dot")
    p.add_argument("file")
    p.set_defaults(fn=cmd_dot)

    p = sub.add_parser("corpus")
    p.add_argument("out")
    p.add_argument("--max-vertices", type=int, default=3)
    p.add_argument("--max-edges", type=int, default=3)
    p.add_argument("--max-legs", type=int, default=2)
    p.add_argument("--wheeled", action="store_true")
    p.set_defaults(fn=cmd_corpus)

    return top


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
