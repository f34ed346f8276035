"""Deterministic DOT rendering of generalized graphs and decorated graphs.

Vertices are boxes, legs dangle at point nodes, exceptional edges and loops
are drawn through invisible anchors with distinct styles.
"""

from __future__ import annotations

from typing import List

from .decorated import DecoratedGraph
from .graphs import GGraph


def graph_to_dot(G: GGraph, name: str = "G") -> str:
    lines = [f"digraph \"{name}\" {{", "  rankdir=BT;"]
    for v in G.vertex_names:
        lines.append(f"  \"{v}\" [shape=circle];")
    anchor = 0
    for e in sorted(G.edges, key=lambda e: e.key()):
        label = e.color
        if e.kind == "ordinary-edge":
            lines.append(f"  \"{e.tail}\" -> \"{e.head}\" "
                         f"[label=\"{label}\"];")
        elif e.kind == "loop":
            lines.append(f"  \"{e.tail}\" -> \"{e.tail}\" "
                         f"[label=\"{label}\"];")
        elif e.kind == "ordinary-leg":
            (x,) = tuple(e.flags)
            a = f"_leg{anchor}"
            anchor += 1
            lines.append(f"  \"{a}\" [shape=point,label=\"\"];")
            if G.dir_map[x] == 1:
                lines.append(f"  \"{a}\" -> \"{e.at}\" "
                             f"[label=\"{label}\"];")
            else:
                lines.append(f"  \"{e.at}\" -> \"{a}\" "
                             f"[label=\"{label}\"];")
        elif e.kind == "exceptional-edge":
            a, b = f"_exc{anchor}", f"_exc{anchor + 1}"
            anchor += 2
            lines.append(f"  \"{a}\" [shape=point,label=\"\"];")
            lines.append(f"  \"{b}\" [shape=point,label=\"\"];")
            lines.append(f"  \"{a}\" -> \"{b}\" "
                         f"[label=\"{label}\",style=dashed];")
        else:  # exceptional loop
            a = f"_wheel{anchor}"
            anchor += 1
            lines.append(f"  \"{a}\" [shape=point,label=\"\"];")
            lines.append(f"  \"{a}\" -> \"{a}\" "
                         f"[label=\"{label}\",style=bold];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def decorated_to_dot(D: DecoratedGraph, name: str = "el") -> str:
    lines = [f"digraph \"{name}\" {{", "  rankdir=BT;"]
    if D.exc is not None:
        style = "dashed" if D.exc[0] == "edge" else "bold"
        lines.append("  \"_a\" [shape=point];")
        tgt = "\"_b\"" if D.exc[0] == "edge" else "\"_a\""
        if D.exc[0] == "edge":
            lines.append("  \"_b\" [shape=point];")
        lines.append(f"  \"_a\" -> {tgt} "
                     f"[label=\"{D.exc[1]}\",style={style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    for i in range(D.n_instances):
        lines.append(f"  \"i{i}\" [shape=box,label=\"{D.decorations[i]}\"];")
    for (o, ip) in D.edges:
        label = D.outs[o[0]][o[1]]
        lines.append(f"  \"i{o[0]}\" -> \"i{ip[0]}\" [label=\"{label}\"];")
    anchor = 0
    for k, (i, s) in enumerate(D.inputs):
        a = f"_in{anchor}"
        anchor += 1
        lines.append(f"  \"{a}\" [shape=point];")
        lines.append(f"  \"{a}\" -> \"i{i}\" [label=\"{D.ins[i][s]}\"];")
    for k, (i, s) in enumerate(D.outputs):
        a = f"_out{anchor}"
        anchor += 1
        lines.append(f"  \"{a}\" [shape=point];")
        lines.append(f"  \"i{i}\" -> \"{a}\" [label=\"{D.outs[i][s]}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
