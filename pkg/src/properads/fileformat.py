"""Declarative, line-oriented file formats: graphs, maps, and properads.

Graph files round-trip: ``parse(print(G))`` reproduces G verbatim on the
canonical form (flags are nonnegative integers, sections in fixed order).
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .decorated import DecoratedGraph
from .graphs import GGraph, GraphError, validate
from .category import GMap
from .finprop import TablePropad


def print_graph(G: GGraph) -> str:
    lines = ["graph"]
    lines.append("flags: " + " ".join(str(f) for f in G.flags))
    for name in G.vertex_names:
        lines.append(f"vertex {name}: " +
                     " ".join(str(f) for f in G.vmap[name]))
    lines.append("exceptional: " +
                 " ".join(str(f) for f in sorted(G.exceptional)))
    pairs = sorted({tuple(sorted((a, b))) for a, b in G.iota if a != b})
    lines.append("iota: " + " ".join(f"{a}-{b}" for a, b in pairs))
    ppairs = sorted({tuple(sorted((a, b))) for a, b in G.pi})
    lines.append("pi: " + " ".join(f"{a}-{b}" for a, b in ppairs))
    lines.append("coloring: " + " ".join(
        f"{f}={c}" for f, c in sorted(G.color_map.items())))
    lines.append("direction: " + " ".join(
        f"{f}={'in' if d == 1 else 'out'}"
        for f, d in sorted(G.dir_map.items())))
    lines.append("listing in: " + " ".join(str(f) for f in G.g_in))
    lines.append("listing out: " + " ".join(str(f) for f in G.g_out))
    for name in G.vertex_names:
        lines.append(f"listing {name} in: " +
                     " ".join(str(f) for f in G.vin[name]))
        lines.append(f"listing {name} out: " +
                     " ".join(str(f) for f in G.vout[name]))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> GGraph:
    flags: List[int] = []
    vertex_flags: Dict[str, Tuple[int, ...]] = {}
    exceptional: List[int] = []
    iota: Dict[int, int] = {}
    pi: Dict[int, int] = {}
    coloring: Dict[int, str] = {}
    direction: Dict[int, int] = {}
    g_in: Tuple[int, ...] = ()
    g_out: Tuple[int, ...] = ()
    v_in: Dict[str, Tuple[int, ...]] = {}
    v_out: Dict[str, Tuple[int, ...]] = {}

    lines = [ln.rstrip() for ln in text.splitlines()]
    if not lines or lines[0].strip() != "graph":
        raise GraphError("graph file must start with 'graph'")
    for ln in lines[1:]:
        if not ln.strip():
            continue
        key, _, rest = ln.partition(":")
        key = key.strip()
        items = rest.split()
        if key == "flags":
            flags = [int(x) for x in items]
        elif key.startswith("vertex "):
            vertex_flags[key[len("vertex "):]] = tuple(int(x) for x in items)
        elif key == "exceptional":
            exceptional = [int(x) for x in items]
        elif key == "iota":
            for pair in items:
                a, b = pair.split("-")
                iota[int(a)] = int(b)
                iota[int(b)] = int(a)
        elif key == "pi":
            for pair in items:
                a, b = pair.split("-")
                pi[int(a)] = int(b)
                pi[int(b)] = int(a)
        elif key == "coloring":
            for item in items:
                f, c = item.split("=", 1)
                coloring[int(f)] = c
        elif key == "direction":
            for item in items:
                f, d = item.split("=", 1)
                direction[int(f)] = 1 if d == "in" else -1
        elif key == "listing in":
            g_in = tuple(int(x) for x in items)
        elif key == "listing out":
            g_out = tuple(int(x) for x in items)
        elif key.startswith("listing ") and key.endswith(" in"):
            v_in[key[len("listing "):-len(" in")]] = \
                tuple(int(x) for x in items)
        elif key.startswith("listing ") and key.endswith(" out"):
            v_out[key[len("listing "):-len(" out")]] = \
                tuple(int(x) for x in items)
        else:
            raise GraphError(f"unknown graph file line {ln!r}")
    for f in flags:
        iota.setdefault(f, f)
    return validate(
        flags=flags,
        vertex_flags=vertex_flags,
        exceptional=frozenset(exceptional),
        iota=iota,
        pi=pi,
        coloring=coloring,
        direction=direction,
        v_in=v_in,
        v_out=v_out,
        g_in=g_in,
        g_out=g_out,
    )


# ---------------------------------------------------------------------------
# map files: two graphs plus f0/f1 tables
# ---------------------------------------------------------------------------


def _edge_name(G: GGraph, e) -> str:
    return "e" + "_".join(str(f) for f in e.key())


def _edge_by_name(G: GGraph) -> Dict[str, object]:
    return {_edge_name(G, e): e for e in G.edges}


def print_decorated(D: DecoratedGraph, target: GGraph) -> List[str]:
    lines = []
    if D.exc is not None:
        lines.append(f"  element {D.exc[0]} {_edge_name(target, D.exc[1])}")
        return lines
    for i in range(D.n_instances):
        lines.append(f"  instance {i}: {D.decorations[i]}")
    for (o, ip) in D.edges:
        lines.append(f"  wire {o[0]}.{o[1]} {ip[0]}.{ip[1]}")
    lines.append("  inputs " + " ".join(f"{i}.{s}" for i, s in D.inputs))
    lines.append("  outputs " + " ".join(f"{i}.{s}" for i, s in D.outputs))
    return lines


def parse_decorated(lines: List[str], target: GGraph) -> DecoratedGraph:
    from .decorated import exceptional_element, exceptional_loop_element
    by_name = _edge_by_name(target)
    decorations = []
    wires = []
    inputs = ()
    outputs = ()
    for ln in lines:
        ln = ln.strip()
        if ln.startswith("element "):
            _, kind, name = ln.split()
            e = by_name[name]
            return (exceptional_element(e) if kind == "edge"
                    else exceptional_loop_element(e))
        if ln.startswith("instance "):
            head, _, dec = ln.partition(":")
            decorations.append(dec.strip())
        elif ln.startswith("wire "):
            _, a, b = ln.split()
            o = tuple(int(x) for x in a.split("."))
            ip = tuple(int(x) for x in b.split("."))
            wires.append((o, ip))
        elif ln.startswith("inputs"):
            inputs = tuple(tuple(int(x) for x in t.split("."))
                           for t in ln.split()[1:])
        elif ln.startswith("outputs"):
            outputs = tuple(tuple(int(x) for x in t.split("."))
                            for t in ln.split()[1:])
    ins = tuple(target.in_edges(v) for v in decorations)
    outs = tuple(target.out_edges(v) for v in decorations)
    return DecoratedGraph(
        decorations=tuple(decorations),
        ins=ins,
        outs=outs,
        edges=tuple(sorted(wires)),
        inputs=inputs,
        outputs=outputs,
    )


def print_map(m: GMap) -> str:
    lines = ["map", "source"]
    lines.append(print_graph(m.source).rstrip())
    lines.append("target")
    lines.append(print_graph(m.target).rstrip())
    lines.append("f0")
    for e in m.source.edges:
        lines.append(f"  {_edge_name(m.source, e)} -> "
                     f"{_edge_name(m.target, m.f0[e])}")
    lines.append("f1")
    for v in m.source.vertex_names:
        lines.append(f" vertex {v}")
        lines.extend(print_decorated(m.f1[v], m.target))
    return "\n".join(lines) + "\n"


def parse_map(text: str, wheeled: bool = False) -> GMap:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "map":
        raise GraphError("map file must start with 'map'")
    idx_source = lines.index("source")
    idx_target = lines.index("target")
    idx_f0 = lines.index("f0")
    idx_f1 = lines.index("f1")
    source = parse_graph("\n".join(lines[idx_source + 1:idx_target]))
    target = parse_graph("\n".join(lines[idx_target + 1:idx_f0]))
    s_by = _edge_by_name(source)
    t_by = _edge_by_name(target)
    f0 = {}
    for ln in lines[idx_f0 + 1:idx_f1]:
        ln = ln.strip()
        if not ln:
            continue
        a, _, b = ln.partition("->")
        f0[s_by[a.strip()]] = t_by[b.strip()]
    f1 = {}
    current: Optional[str] = None
    block: List[str] = []
    for ln in lines[idx_f1 + 1:] + [" vertex _end"]:
        if ln.strip().startswith("vertex "):
            if current is not None:
                f1[current] = parse_decorated(block, target)
            current = ln.strip()[len("vertex "):]
            block = []
        else:
            block.append(ln)
    return GMap(source, target, f0, f1,
                tag=("file",)).check(wheeled=wheeled)


# ---------------------------------------------------------------------------
# properad files
# ---------------------------------------------------------------------------


def print_propad(P: TablePropad) -> str:
    def prof(t):
        return ",".join(str(c) for c in t) if t else "-"

    lines = ["propad", f"wheeled: {'yes' if P.wheeled else 'no'}"]
    lines.append("colors: " + " ".join(str(c) for c in P.colors))
    for (ins, outs), els in sorted(P._components.items(), key=repr):
        lines.append(f"component {prof(ins)};{prof(outs)}: " +
                     " ".join(str(e) for e in els))
    for c, u in sorted(P._units.items(), key=repr):
        lines.append(f"unit {c}: {u}")
    for ((ins, outs), p, pos), val in sorted(P._act_in.items(), key=repr):
        lines.append(f"swapin {prof(ins)};{prof(outs)}: {p} {pos} -> {val}")
    for ((ins, outs), p, pos), val in sorted(P._act_out.items(), key=repr):
        lines.append(f"swapout {prof(ins)};{prof(outs)}: {p} {pos} -> {val}")
    for key, val in sorted(P._compose.items(), key=repr):
        (k1, p, k2, q, out_start, in_start, k) = key
        lines.append(
            f"compose {prof(k1[0])};{prof(k1[1])}: {p} | "
            f"{prof(k2[0])};{prof(k2[1])}: {q} | "
            f"{out_start} {in_start} {k} -> {val}")
    for ((ins, outs), p, i, j), val in sorted(P._contract.items(), key=repr):
        lines.append(f"contract {prof(ins)};{prof(outs)}: {p} {i} {j} "
                     f"-> {val}")
    return "\n".join(lines) + "\n"


def parse_propad(text: str) -> TablePropad:
    def unprof(s):
        return () if s == "-" else tuple(s.split(","))

    colors = ()
    wheeled = False
    components = {}
    units = {}
    act_in = {}
    act_out = {}
    compose = {}
    contract = {}
    lines = text.splitlines()
    if not lines or lines[0].strip() != "propad":
        raise GraphError("properad file must start with 'propad'")
    for ln in lines[1:]:
        ln = ln.strip()
        if not ln:
            continue
        key, _, rest = ln.partition(":")
        rest = rest.strip()
        if key == "colors":
            colors = tuple(rest.split())
        elif key == "wheeled":
            wheeled = rest == "yes"
        elif key.startswith("component "):
            pi, po = key[len("component "):].split(";")
            components[(unprof(pi), unprof(po))] = tuple(rest.split())
        elif key.startswith("unit "):
            units[key[len("unit "):]] = rest
        elif key.startswith("swapin ") or key.startswith("swapout "):
            tag = "swapin " if key.startswith("swapin ") else "swapout "
            pi, po = key[len(tag):].split(";")
            p, pos, _, val = rest.split()
            entry = ((unprof(pi), unprof(po)), p, int(pos))
            (act_in if tag == "swapin " else act_out)[entry] = val
        elif key.startswith("compose "):
            pi, po = key[len("compose "):].split(";")
            left, mid, tail = rest.split("|")
            p = left.strip()
            prof2, q = mid.strip().split(":")
            q = q.strip()
            pi2, po2 = prof2.split(";")
            nums, _, val = tail.partition("->")
            out_start, in_start, k = (int(x) for x in nums.split())
            compose[((unprof(pi), unprof(po)), p,
                     (unprof(pi2), unprof(po2)), q,
                     out_start, in_start, k)] = val.strip()
        elif key.startswith("contract "):
            pi, po = key[len("contract "):].split(";")
            p, i, j, _, val = rest.split()
            contract[((unprof(pi), unprof(po)), p, int(i), int(j))] = val
        else:
            raise GraphError(f"unknown properad file line {ln!r}")
    return TablePropad(colors, components, units, act_in, act_out,
                       compose, contract, wheeled=wheeled, name="file")