"""Graph substitution with provenance, the six factorization searches, and
degenerate reduction.

Substituting ``H_v`` into each vertex ``v`` of an outer graph glues the k-th
input leg of ``H_v`` to the k-th input flag of ``v`` (and likewise outputs);
the result's edges are the spliced chains of outer and inner edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import analysis
from .graphs import (
    EXCEPTIONAL_EDGE,
    EXCEPTIONAL_LOOP,
    IN,
    LOOP,
    ORDINARY_EDGE,
    OUT,
    Edge,
    GGraph,
    GraphError,
    contracted_corolla,
    corolla,
    dioperadic,
    exceptional_edge,
    exceptional_loop,
    partially_grafted,
    strict_iso,
    validate,
)
from .analysis import ClassViolation


@dataclass(frozen=True)
class Provenance:
    """Where each result vertex/edge/flag of a substitution came from.

    ``vertex_origin`` maps result vertex -> (outer vertex, inner vertex);
    ``edge_constituents`` maps each result edge key to the ordered chain of
    original edges (tagged 'outer' or ('inner', v)) spliced into it;
    ``flag_origin`` maps result flag -> the original (graph tag, flag) pair.
    """

    vertex_origin: Dict[str, Tuple[str, str]]
    edge_constituents: Dict[Tuple[int, ...], Tuple[Tuple, ...]]
    flag_origin: Dict[int, Tuple]

    def edge_origin(self, edge: Edge) -> Tuple:
        parts = self.edge_constituents[edge.key()]
        if len(parts) == 1:
            return parts[0]
        return ("identified-leg", parts)

    def outer_edge_image(self, G_edge: Edge) -> Tuple[int, ...]:
        """The key of the result edge whose chain contains the outer edge."""
        want = ("outer", G_edge.key())
        for key, parts in self.edge_constituents.items():
            if want in parts:
                return key
        raise KeyError(f"outer edge {G_edge} not found in provenance")

    def inner_edge_image(self, v: str, H_edge: Edge) -> Tuple[int, ...]:
        want = ("inner", v, H_edge.key())
        for key, parts in self.edge_constituents.items():
            if want in parts:
                return key
        raise KeyError(f"inner edge {H_edge} of {v} not found in provenance")


def _profile_check(G: GGraph, v: str, H: GGraph) -> None:
    if G.in_profile(v) != H.in_profile() or G.out_profile(v) != H.out_profile():
        raise GraphError(
            f"profile mismatch at vertex {v}: vertex has "
            f"({G.in_profile(v)};{G.out_profile(v)}), inner graph has "
            f"({H.in_profile()};{H.out_profile()})")


def substitute(G: GGraph, inner: Dict[str, GGraph]) -> Tuple[GGraph, Provenance]:
    """G({H_v}): replace each vertex of G by ``inner[v]``."""
    for v in G.vertex_names:
        if v not in inner:
            raise GraphError(f"no inner graph supplied for vertex {v}")
        _profile_check(G, v, inner[v])

    # points: ('G', flag) for outer flags, ('H', v, flag) for inner flags;
    # gluing identifies ('H', v, leg) with ('G', matching flag of v).
    glue_of_inner: Dict[Tuple, Tuple] = {}
    glue_of_outer: Dict[Tuple, Tuple] = {}
    for v in G.vertex_names:
        H = inner[v]
        for gx, hx in zip(G.vin[v], H.g_in):
            glue_of_inner[("H", v, hx)] = ("G", gx)
            glue_of_outer[("G", gx)] = ("H", v, hx)
        for gx, hx in zip(G.vout[v], H.g_out):
            glue_of_inner[("H", v, hx)] = ("G", gx)
            glue_of_outer[("G", gx)] = ("H", v, hx)

    def point_of(node: Tuple) -> Tuple:
        """Canonical representative: the outer flag when glued."""
        if node[0] == "H":
            return glue_of_inner.get(node, node)
        return node

    def m1_neighbors(node: Tuple) -> List[Tuple]:
        """The iota/pi partner on the node's own side, if any."""
        out = []
        if node[0] == "G":
            _, x = node
            ix = G.iota_map[x]
            if ix != x:
                out.append(("G", ix))
            elif x in G.exceptional:
                out.append(("G", G.pi_map[x]))
        else:
            _, v, x = node
            H = inner[v]
            ix = H.iota_map[x]
            if ix != x:
                out.append(("H", v, ix))
            elif x in H.exceptional:
                out.append(("H", v, H.pi_map[x]))
        return out

    def point_links(pt: Tuple) -> List[Tuple]:
        """All M1 continuations out of a point (through both glued sides)."""
        nodes = [pt]
        if pt in glue_of_outer:
            nodes.append(glue_of_outer[pt])
        links = []
        for nd in nodes:
            for nb in m1_neighbors(nd):
                links.append(point_of(nb))
        return links

    # exceptional loops never glue: carry them over atomically
    atomic_loops: List[Tuple[str, Tuple]] = []  # (color, constituent tag)
    skip: set = set()
    for e in G.edges:
        if e.kind == EXCEPTIONAL_LOOP:
            atomic_loops.append((e.color, ("outer", e.key())))
            skip.update(("G", x) for x in e.flags)
    for v in G.vertex_names:
        for e in inner[v].edges:
            if e.kind == EXCEPTIONAL_LOOP:
                atomic_loops.append((e.color, ("inner", v, e.key())))
                skip.update(("H", v, x) for x in e.flags)

    all_points: List[Tuple] = []
    for x in G.flags:
        all_points.append(("G", x))
    for v in G.vertex_names:
        for x in inner[v].flags:
            all_points.append(("H", v, x))
    all_points = sorted({point_of(p) for p in all_points} - skip)

    # walk chains
    visited = set()
    chains: List[Tuple[List[Tuple], bool]] = []  # (points in order, is_cycle)
    adjacency = {p: point_links(p) for p in all_points}
    for p in all_points:
        if p in visited:
            continue
        deg = len(adjacency[p])
        if deg >= 2:
            continue  # interior point, reach it from an endpoint
        # walk from an endpoint
        path = [p]
        visited.add(p)
        prev = None
        cur = p
        while True:
            nxts = list(adjacency[cur])
            if prev is not None and prev in nxts:
                nxts.remove(prev)
            if not nxts:
                break
            nxt = nxts[0]
            if nxt in visited:
                break
            path.append(nxt)
            visited.add(nxt)
            prev, cur = cur, nxt
        chains.append((path, False))
    # remaining unvisited points lie on closed cycles
    for p in all_points:
        if p in visited:
            continue
        cycle = [p]
        visited.add(p)
        prev, cur = None, p
        while True:
            nxts = list(adjacency[cur])
            if prev is not None and prev in nxts:
                nxts.remove(prev)
            nxt = nxts[0]
            if nxt == p:
                break
            cycle.append(nxt)
            visited.add(nxt)
            prev, cur = cur, nxt
        chains.append((cycle, True))

    # result structure -----------------------------------------------------
    def node_color(pt: Tuple) -> str:
        if pt[0] == "G":
            return G.color_map[pt[1]]
        return inner[pt[1]].color_map[pt[2]]

    def node_dir(pt: Tuple) -> int:
        if pt[0] == "G":
            return G.dir_map[pt[1]]
        return inner[pt[1]].dir_map[pt[2]]

    def vertex_home(pt: Tuple) -> Optional[Tuple[str, str]]:
        """(outer v, inner w) when the point carries a flag of a result vertex."""
        candidates = [pt]
        if pt in glue_of_outer:
            candidates.append(glue_of_outer[pt])
        for nd in candidates:
            if nd[0] == "H":
                _, v, x = nd
                w = inner[v].flag_vertex.get(x)
                if w is not None:
                    return (v, w)
        return None

    def is_exceptional_point(pt: Tuple) -> bool:
        if pt[0] == "G":
            return pt[1] in G.exceptional
        return pt[2] in inner[pt[1]].exceptional

    # gluing color validation
    for nd, gp in glue_of_inner.items():
        if node_color(nd) != node_color(gp):
            raise GraphError(
                f"color mismatch while gluing {nd} to {gp}")

    result_flag_of_point: Dict[Tuple, int] = {}
    flag_origin: Dict[int, Tuple] = {}
    flags: List[int] = []
    coloring: Dict[int, str] = {}
    direction: Dict[int, int] = {}
    iota: Dict[int, int] = {}
    pi: Dict[int, int] = {}
    exceptional: List[int] = []
    edge_constituents: Dict[Tuple[int, ...], Tuple[Tuple, ...]] = {}
    edge_flags_of_chain: Dict[int, Tuple[int, ...]] = {}

    def chain_constituents(path: List[Tuple]) -> Tuple[Tuple, ...]:
        parts: List[Tuple] = []
        seen_edges = set()
        for pt in path:
            nodes = [pt]
            if pt in glue_of_outer:
                nodes.append(glue_of_outer[pt])
            for nd in nodes:
                if nd[0] == "G":
                    e = G.edge_of_flag[nd[1]]
                    tag = ("outer", e.key())
                else:
                    _, v, x = nd
                    e = inner[v].edge_of_flag[x]
                    tag = ("inner", v, e.key())
                if tag not in seen_edges:
                    seen_edges.add(tag)
                    parts.append(tag)
        return tuple(parts)

    next_flag = 0

    def new_flag(pt: Tuple, col: str, d: int) -> int:
        nonlocal next_flag
        f = next_flag
        next_flag += 1
        flags.append(f)
        coloring[f] = col
        direction[f] = d
        flag_origin[f] = pt
        if pt[0] not in ("cycle", "atomic"):
            result_flag_of_point[pt] = f
        return f

    for col, tag in sorted(atomic_loops, key=lambda t: t[1]):
        a = new_flag(("atomic", tag, 0), col, IN)
        b = new_flag(("atomic", tag, 1), col, OUT)
        iota[a], iota[b] = b, a
        exceptional.extend((a, b))
        edge_constituents[tuple(sorted((a, b)))] = (tag,)

    # deterministic chain order
    ordered_chains = sorted(chains, key=lambda c: min(c[0]))
    for path, is_cycle in ordered_chains:
        if is_cycle:
            # a closed chain becomes an exceptional loop with fresh flags
            col = node_color(path[0])
            key = tuple(sorted(path))
            a = new_flag(("cycle", key, 0), col, IN)
            b = new_flag(("cycle", key, 1), col, OUT)
            iota[a], iota[b] = b, a
            exceptional.extend((a, b))
            edge_constituents[tuple(sorted((a, b)))] = chain_constituents(path)
            continue
        ends = [path[0]] if len(path) == 1 else [path[0], path[-1]]
        carriers = [pt for pt in ends if vertex_home(pt) is not None]
        if len(carriers) == 2:
            h = new_flag(carriers[0], node_color(carriers[0]),
                         node_dir(carriers[0]))
            t = new_flag(carriers[1], node_color(carriers[1]),
                         node_dir(carriers[1]))
            if direction[h] == direction[t]:
                raise AssertionError("internal chain with equal directions")
            iota[h], iota[t] = t, h
            edge_constituents[tuple(sorted((h, t)))] = chain_constituents(path)
        elif len(carriers) == 1:
            # an ordinary leg: one flag, at the carrying vertex
            pt = carriers[0]
            f = new_flag(pt, node_color(pt), node_dir(pt))
            iota[f] = f
            edge_constituents[(f,)] = chain_constituents(path)
        else:
            # no vertex on the chain: an exceptional edge survives/appears
            if len(ends) != 2:
                raise AssertionError("vertex-free chain must have two ends")
            h = new_flag(ends[0], node_color(ends[0]), node_dir(ends[0]))
            t = new_flag(ends[1], node_color(ends[1]), node_dir(ends[1]))
            if direction[h] == direction[t]:
                raise AssertionError("exceptional chain with equal directions")
            iota[h] = h
            iota[t] = t
            pi[h], pi[t] = t, h
            exceptional.extend((h, t))
            edge_constituents[tuple(sorted((h, t)))] = chain_constituents(path)

    # vertices of the result: one per (outer vertex, inner vertex)
    vertex_origin: Dict[str, Tuple[str, str]] = {}
    v_in: Dict[str, Tuple[int, ...]] = {}
    v_out: Dict[str, Tuple[int, ...]] = {}
    names: List[str] = []
    for v in G.vertex_names:
        H = inner[v]
        for w in H.vertex_names:
            name = f"{v}/{w}"
            names.append(name)
            vertex_origin[name] = (v, w)

            def rf(x: int) -> int:
                pt = point_of(("H", v, x))
                return result_flag_of_point[pt]

            v_in[name] = tuple(rf(x) for x in H.vin[w])
            v_out[name] = tuple(rf(x) for x in H.vout[w])

    # graph listing follows the outer graph's listing
    chain_of_point: Dict[Tuple, List[Tuple]] = {}
    for path, is_cycle in chains:
        if is_cycle:
            continue
        for pt in path:
            chain_of_point[pt] = path

    def graph_leg_flag(x: int) -> int:
        """The result flag carrying the outer graph leg x."""
        pt = point_of(("G", x))
        path = chain_of_point.get(pt)
        if path is None:
            raise GraphError(f"graph leg {x} lost during substitution")
        want = G.dir_map[x]
        candidates = [result_flag_of_point[p]
                      for p in ([path[0]] if len(path) == 1
                                else [path[0], path[-1]])
                      if p in result_flag_of_point]
        matching = [f for f in candidates if direction[f] == want]
        if len(matching) != 1:
            raise AssertionError(f"graph leg {x}: no unique result flag")
        return matching[0]

    g_in = tuple(graph_leg_flag(x) for x in G.g_in)
    g_out = tuple(graph_leg_flag(x) for x in G.g_out)

    result = validate(
        flags=flags,
        vertex_flags={n: v_in[n] + v_out[n] for n in names},
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
    return result, Provenance(vertex_origin, edge_constituents, flag_origin)


def substitute_one(G: GGraph, w: str, H: GGraph) -> Tuple[GGraph, Provenance]:
    """G(H_w): substitute H into w and corollas into every other vertex."""
    inner = {}
    for v in G.vertex_names:
        if v == w:
            inner[v] = H
        else:
            inner[v] = corolla(G.in_profile(v), G.out_profile(v), name=v)
    return substitute(G, inner)


def corolla_of(G: GGraph, name: str = "v") -> GGraph:
    """The corolla with the same profiles as the whole graph G."""
    return corolla(G.in_profile(), G.out_profile(), name=name)


def identity_substitution(G: GGraph) -> Tuple[GGraph, Provenance]:
    """G({C_v}) with a corolla at every vertex; strictly isomorphic to G."""
    return substitute(G, {v: corolla(G.in_profile(v), G.out_profile(v), name=v)
                          for v in G.vertex_names})


# ---------------------------------------------------------------------------
# factorizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """A graph substitution decomposition K = outer(distinguished at vertex).

    ``witness`` names the structure in K the factorization corresponds to:
    a closest-neighbor pair, an almost isolated / deletable vertex, or an
    internal edge key.
    """

    kind: str
    outer: GGraph
    distinguished: GGraph
    at: str
    witness: Tuple
    extras: Dict[str, GGraph] = field(default_factory=dict)

    def recompose(self) -> GGraph:
        inner = {v: corolla_of_vertex(self.outer, v) for v in
                 self.outer.vertex_names}
        inner.update(self.extras)
        inner[self.at] = self.distinguished
        return substitute(self.outer, inner)[0]


def corolla_of_vertex(G: GGraph, v: str) -> GGraph:
    return corolla(G.in_profile(v), G.out_profile(v), name=v)


def _merged_vertex_graph(K: GGraph, x: str, y: str, drop: Sequence[Edge],
                         merged: str) -> GGraph:
    """K with vertices x, y combined into ``merged`` and the edges in ``drop``
    (all adjacent to both) deleted."""
    dead_flags = set()
    for e in drop:
        dead_flags |= e.flags
    flags = [f for f in K.flags if f not in dead_flags]
    iota = {f: (K.iota_map[f] if K.iota_map[f] not in dead_flags else f)
            for f in flags}
    for f in flags:
        if K.iota_map[f] in dead_flags and K.iota_map[f] != f:
            raise AssertionError("dropped edges must be dropped whole")
    names = [n for n in K.vertex_names if n not in (x, y)]
    v_in = {n: K.vin[n] for n in names}
    v_out = {n: K.vout[n] for n in names}
    v_in[merged] = tuple(f for f in K.vin[x] + K.vin[y] if f not in dead_flags)
    v_out[merged] = tuple(f for f in K.vout[x] + K.vout[y]
                          if f not in dead_flags)
    names.append(merged)
    return validate(
        flags=flags,
        vertex_flags={n: v_in[n] + v_out[n] for n in names},
        exceptional=K.exceptional,
        iota=iota,
        pi=K.pi_map,
        coloring={f: K.color_map[f] for f in flags},
        direction={f: K.dir_map[f] for f in flags},
        v_in=v_in,
        v_out=v_out,
        g_in=K.g_in,
        g_out=K.g_out,
    )


def _pair_subgraph(K: GGraph, x: str, y: str,
                   shared: Sequence[Edge]) -> GGraph:
    """The partially grafted corollas spanned by two vertices of K and the
    ordinary edges between them, as a standalone graph.

    Its whole-graph listing concatenates x's then y's legs, matching the
    merged-vertex listing of :func:`_merged_vertex_graph` called with (x, y).
    """
    flags = list(K.vmap[x]) + list(K.vmap[y])
    shared_flags = set()
    for e in shared:
        shared_flags |= e.flags
    iota = {}
    for f in flags:
        fi = K.iota_map[f]
        iota[f] = fi if f in shared_flags else f
    g_in = tuple(f for f in K.vin[x] + K.vin[y] if f not in shared_flags)
    g_out = tuple(f for f in K.vout[x] + K.vout[y] if f not in shared_flags)
    return validate(
        flags=flags,
        vertex_flags={x: K.vmap[x], y: K.vmap[y]},
        exceptional=frozenset(),
        iota=iota,
        pi={},
        coloring={f: K.color_map[f] for f in flags},
        direction={f: K.dir_map[f] for f in flags},
        v_in={x: K.vin[x], y: K.vin[y]},
        v_out={x: K.vout[x], y: K.vout[y]},
        g_in=g_in,
        g_out=g_out,
    )


def inner_properadic_factorizations(K: GGraph) -> List[Factorization]:
    """One factorization per closest-neighbor pair; the distinguished
    subgraph is the partially grafted corollas they span."""
    analysis.require(K, connected=True, wheel_free=True)
    out: List[Factorization] = []
    for pair in sorted(analysis.closest_neighbors(K), key=sorted):
        x, y = sorted(pair)
        shared = [e for e in K.edges if e.kind == ORDINARY_EDGE
                  and {e.tail, e.head} == {x, y}]
        bottom, top = (x, y) if shared[0].tail == x else (y, x)
        merged = f"{bottom}{top}"
        while merged in K.vertex_names:
            merged += "'"
        outer = _merged_vertex_graph(K, x, y, shared, merged)
        distinguished = _pair_subgraph(K, x, y, shared)
        out.append(Factorization(
            kind="inner-properadic",
            outer=outer,
            distinguished=distinguished,
            at=merged,
            witness=("closest-neighbors", bottom, top),
        ))
    return out


def outer_properadic_factorizations(K: GGraph) -> List[Factorization]:
    """One per almost isolated vertex (one per leg for a corolla)."""
    cls = analysis.require(K, connected=True, wheel_free=True)
    if not cls.ordinary:
        raise ClassViolation("outer properadic factorization needs an "
                             "ordinary graph")
    out: List[Factorization] = []
    if K.n_vertices == 1:
        v = K.vertex_names[0]
        for tag, legs in (("in", K.g_in), ("out", K.g_out)):
            for idx, leg in enumerate(legs):
                out.append(_corolla_leg_factorization(K, v, tag, idx))
        return out
    for u in sorted(analysis.almost_isolated(K)):
        Ku = analysis.delete_vertex(K, u)
        shared = [e for e in K.edges if e.kind == ORDINARY_EDGE
                  and u in (e.tail, e.head)]
        other = "rest"
        while other == u:
            other += "'"
        pgc = _collapse_to_pair(K, u, other, shared)
        out.append(Factorization(
            kind="outer-properadic",
            outer=pgc,
            distinguished=_reorder_like(Ku, pgc, other),
            at=other,
            witness=("almost-isolated", u),
            extras={u: corolla_of_vertex(K, u)},
        ))
    return out


def _corolla_leg_factorization(K: GGraph, v: str, tag: str,
                               idx: int) -> Factorization:
    """K a (permuted) corolla: the outer factorization K = D({C_v, ^}) for
    the leg at graph position ``idx``."""
    legs = K.g_in if tag == "in" else K.g_out
    leg = legs[idx]
    c = K.color_map[leg]
    vins, vouts = K.in_profile(v), K.out_profile(v)
    w = "w"
    if w == v:
        w += "'"
    if tag == "in":
        vpos = K.vin[v].index(leg)
        D = dioperadic(vins, vouts, (c,), (c,), vpos + 1, 1, top=v, bottom=w)
        flag_for = {f: D.vmap[v][k] for k, f in enumerate(K.vmap[v])}
        flag_for[leg] = D.vin[w][0]
    else:
        vpos = K.vout[v].index(leg)
        D = dioperadic((c,), (c,), vins, vouts, 1, vpos + 1, top=w, bottom=v)
        flag_for = {f: D.vmap[v][k] for k, f in enumerate(K.vmap[v])}
        flag_for[leg] = D.vout[w][0]
    # mirror K's whole-graph listing
    D = validate(
        flags=D.flags,
        vertex_flags=dict(D.vertex_flags),
        exceptional=D.exceptional,
        iota=D.iota_map,
        pi=D.pi_map,
        coloring=D.color_map,
        direction=D.dir_map,
        v_in=D.vin,
        v_out=D.vout,
        g_in=tuple(flag_for[f] for f in K.g_in),
        g_out=tuple(flag_for[f] for f in K.g_out),
    )
    return Factorization(
        kind="outer-properadic",
        outer=D,
        distinguished=exceptional_edge(c),
        at=w,
        witness=("leg", tag, idx),
        extras={v: corolla(vins, vouts, name=v)},
    )


def _collapse_to_pair(K: GGraph, u: str, other: str,
                      shared: Sequence[Edge]) -> GGraph:
    """The partially grafted corollas whose vertices are u and the rest of K
    collapsed; ``other`` names the collapsed vertex.

    The collapsed vertex's listing follows the graph listing of K with u
    deleted, so ``_reorder_like`` can align the distinguished subgraph.
    """
    Ku = analysis.delete_vertex(K, u)
    rest_in = list(Ku.g_in)
    rest_out = list(Ku.g_out)
    flags = list(K.vmap[u]) + rest_in + rest_out
    iota = {f: f for f in flags}
    for e in shared:
        a, b = tuple(e.flags)
        iota[a], iota[b] = b, a
    v_in = {u: K.vin[u], other: tuple(rest_in)}
    v_out = {u: K.vout[u], other: tuple(rest_out)}
    vertex_flags = {u: K.vmap[u],
                    other: tuple(rest_in) + tuple(rest_out)}
    return validate(
        flags=flags,
        vertex_flags=vertex_flags,
        exceptional=frozenset(),
        iota=iota,
        pi={},
        coloring={f: K.color_map[f] for f in flags},
        direction={f: K.dir_map[f] for f in flags},
        v_in=v_in,
        v_out=v_out,
        g_in=K.g_in,
        g_out=K.g_out,
    )


def _reorder_like(H: GGraph, pgc: GGraph, slot: str) -> GGraph:
    """Relist H so its graph listing matches the slot vertex of pgc."""
    # delete_vertex ordered K_u's legs by flag id; the pgc slot vertex uses
    # the same flags, so align by flag identity.
    order_in = {f: k for k, f in enumerate(pgc.vin[slot])}
    order_out = {f: k for k, f in enumerate(pgc.vout[slot])}
    g_in = tuple(sorted(H.g_in, key=lambda f: order_in[f]))
    g_out = tuple(sorted(H.g_out, key=lambda f: order_out[f]))
    return validate(
        flags=H.flags,
        vertex_flags=dict(H.vertex_flags),
        exceptional=H.exceptional,
        iota=H.iota_map,
        pi=H.pi_map,
        coloring=H.color_map,
        direction=H.dir_map,
        v_in=H.vin,
        v_out=H.vout,
        g_in=g_in,
        g_out=g_out,
    )


def outer_dioperadic_factorizations(K: GGraph) -> List[Factorization]:
    """One per deletable vertex (one per leg for a corolla)."""
    analysis.require(K, connected=True)
    out: List[Factorization] = []
    if (K.n_vertices == 1 and not K.internal_edges and (K.g_in or K.g_out)):
        v = K.vertex_names[0]
        for tag, legs in (("in", K.g_in), ("out", K.g_out)):
            for idx in range(len(legs)):
                f = _corolla_leg_factorization(K, v, tag, idx)
                out.append(Factorization(
                    kind="outer-dioperadic",
                    outer=f.outer,
                    distinguished=f.distinguished,
                    at=f.at,
                    witness=f.witness,
                    extras=f.extras,
                ))
        return out
    for v in sorted(analysis.deletable_vertices(K)):
        e = next(iter(
            x for x in K.internal_edges if v in (x.tail, x.head)))
        Kv = analysis.delete_vertex(K, v)
        other = "rest"
        while other == v:
            other += "'"
        D = _collapse_to_pair(K, v, other, [e])
        out.append(Factorization(
            kind="outer-dioperadic",
            outer=D,
            distinguished=_reorder_like(Kv, D, other),
            at=other,
            witness=("deletable", v),
            extras={v: corolla_of_vertex(K, v)},
        ))
    return out


def inner_dioperadic_factorizations(K: GGraph) -> List[Factorization]:
    """One per internal edge connecting two distinct vertices."""
    analysis.require(K, connected=True)
    out: List[Factorization] = []
    for e in K.internal_edges:
        if e.kind != ORDINARY_EDGE or e.tail == e.head:
            continue
        u, v = e.tail, e.head
        merged = f"{u}{v}"
        while merged in K.vertex_names:
            merged += "'"
        outer = _merged_vertex_graph(K, u, v, [e], merged)
        distinguished = _pair_subgraph(K, u, v, [e])
        out.append(Factorization(
            kind="inner-dioperadic",
            outer=outer,
            distinguished=distinguished,
            at=merged,
            witness=("internal-edge", e.key()),
        ))
    out.sort(key=lambda f: f.witness)
    return out


def outer_contracting_factorizations(K: GGraph) -> List[Factorization]:
    """One per disconnectable edge."""
    analysis.require(K, connected=True)
    out: List[Factorization] = []
    for e in sorted(analysis.disconnectable_edges(K), key=lambda e: e.key()):
        if e.kind == EXCEPTIONAL_LOOP:
            c = e.color
            out.append(Factorization(
                kind="outer-contracting",
                outer=contracted_corolla((c,), (c,), 1, 1, name="w"),
                distinguished=exceptional_edge(c),
                at="w",
                witness=("disconnectable", e.key()),
            ))
            continue
        Ge = disconnect_edge(K, e)
        # contracted corolla with the profiles of G_e, contracting the
        # positions where the freed legs sit
        ins, outs = Ge.in_profile(), Ge.out_profile()
        a, b = tuple(e.flags)
        out_flag = a if K.dir_map[a] == OUT else b
        in_flag = a if K.dir_map[a] == IN else b
        j = Ge.g_in.index(in_flag) + 1
        i = Ge.g_out.index(out_flag) + 1
        xi = contracted_corolla(ins, outs, i, j, name="w")
        out.append(Factorization(
            kind="outer-contracting",
            outer=xi,
            distinguished=Ge,
            at="w",
            witness=("disconnectable", e.key()),
        ))
    return out


def disconnect_edge(K: GGraph, e: Edge) -> GGraph:
    """K with the internal edge e disconnected: both flags become legs.

    The freed legs are appended after the existing graph listing entries,
    deterministically.
    """
    if e.kind == EXCEPTIONAL_LOOP:
        return exceptional_edge(e.color)
    a, b = sorted(e.flags)
    iota = dict(K.iota_map)
    iota[a] = a
    iota[b] = b
    new_in = [f for f in (a, b) if K.dir_map[f] == IN]
    new_out = [f for f in (a, b) if K.dir_map[f] == OUT]
    return validate(
        flags=K.flags,
        vertex_flags=dict(K.vertex_flags),
        exceptional=K.exceptional,
        iota=iota,
        pi=K.pi_map,
        coloring=K.color_map,
        direction=K.dir_map,
        v_in=K.vin,
        v_out=K.vout,
        g_in=K.g_in + tuple(new_in),
        g_out=K.g_out + tuple(new_out),
    )


def inner_contracting_factorizations(K: GGraph) -> List[Factorization]:
    """One per loop at a vertex."""
    analysis.require(K, connected=True)
    out: List[Factorization] = []
    for v, e in sorted(analysis.loops(K), key=lambda t: (t[0], t[1].key())):
        a, b = sorted(e.flags)
        # outer graph: drop the loop from v
        flags = [f for f in K.flags if f not in (a, b)]
        iota = {f: K.iota_map[f] for f in flags}
        names = list(K.vertex_names)
        v_in = {n: K.vin[n] for n in names}
        v_out = {n: K.vout[n] for n in names}
        v_in[v] = tuple(f for f in v_in[v] if f not in (a, b))
        v_out[v] = tuple(f for f in v_out[v] if f not in (a, b))
        outer = validate(
            flags=flags,
            vertex_flags={n: v_in[n] + v_out[n] for n in names},
            exceptional=K.exceptional,
            iota=iota,
            pi=K.pi_map,
            coloring={f: K.color_map[f] for f in flags},
            direction={f: K.dir_map[f] for f in flags},
            v_in=v_in,
            v_out=v_out,
            g_in=K.g_in,
            g_out=K.g_out,
        )
        ins, outs = K.in_profile(v), K.out_profile(v)
        j = K.vin[v].index(a if K.dir_map[a] == IN else b) + 1
        i = K.vout[v].index(a if K.dir_map[a] == OUT else b) + 1
        xi = contracted_corolla(ins, outs, i, j, name=v)
        out.append(Factorization(
            kind="inner-contracting",
            outer=outer,
            distinguished=xi,
            at=v,
            witness=("loop", v, e.key()),
        ))
    return out


def degenerate_reduction(G: GGraph, v: str) -> Tuple[GGraph, Edge, Provenance]:
    """G(^ at v) for a vertex with exactly one input and one output flag.

    Returns the reduced graph, the edge ``e_v`` the two edges at v merged
    into, and the substitution provenance.
    """
    if G.vertex_arity(v) != (1, 1):
        raise GraphError(f"vertex {v} does not have arity (1;1)")
    cin = G.in_profile(v)[0]
    cout = G.out_profile(v)[0]
    if cin != cout:
        raise GraphError(f"vertex {v} has mismatched colors {cin} vs {cout}")
    Gv, prov = substitute_one(G, v, exceptional_edge(cin))
    renames = {f"{u}/{u}": u for u in G.vertex_names if u != v}
    Gv = rename_vertices(Gv, renames)
    prov = Provenance(
        vertex_origin={renames.get(n, n): o
                       for n, o in prov.vertex_origin.items()},
        edge_constituents=prov.edge_constituents,
        flag_origin=prov.flag_origin,
    )
    in_edge = G.edge_of_flag[G.vin[v][0]]
    ev_key = prov.outer_edge_image(in_edge)
    e_v = next(e for e in Gv.edges if e.key() == ev_key)
    return Gv, e_v, prov


def rename_vertices(G: GGraph, mapping: Dict[str, str]) -> GGraph:
    """Rename vertices; names not in ``mapping`` are kept."""
    def nm(n: str) -> str:
        return mapping.get(n, n)

    return validate(
        flags=G.flags,
        vertex_flags={nm(n): fl for n, fl in G.vertex_flags},
        exceptional=G.exceptional,
        iota=G.iota_map,
        pi=G.pi_map,
        coloring=G.color_map,
        direction=G.dir_map,
        v_in={nm(n): t for n, t in G.v_in},
        v_out={nm(n): t for n, t in G.v_out},
        g_in=G.g_in,
        g_out=G.g_out,
    )


FACTORIZATION_KINDS = {
    "inner-prop": inner_properadic_factorizations,
    "outer-prop": outer_properadic_factorizations,
    "inner-diop": inner_dioperadic_factorizations,
    "outer-diop": outer_dioperadic_factorizations,
    "inner-contr": inner_contracting_factorizations,
    "outer-contr": outer_contracting_factorizations,
}
