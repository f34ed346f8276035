"""Decorated graphs in port form.

An element of a free (wheeled) properad is a connected graph whose edges
carry colors and whose vertices carry decorations with matching profiles.
Here such an element is a list of decorated instances with ordered, colored
in/out ports, a set of internal edges (out-port, in-port), and ordered
boundary listings.  Vertex listings are pinned by the decorations (profiles
never repeat a color within inputs or within outputs), so equality up to
listing only forgets the whole-graph orderings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from .graphs import GGraph, GraphError, validate, IN, OUT

Port = Tuple[int, int]  # (instance index, slot index)


class DecorationError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class DecoratedGraph:
    """A connected decorated graph, or an exceptional edge/loop element.

    ``edges[k] = (out_port, in_port)`` runs from an output slot to an input
    slot; ``inputs``/``outputs`` list the unmatched ports in boundary order.
    ``exc`` is None for a graph with instances, or ``('edge', color)`` /
    ``('loop', color)`` for the vertex-free elements.
    """

    decorations: Tuple[Hashable, ...]
    ins: Tuple[Tuple[Hashable, ...], ...]
    outs: Tuple[Tuple[Hashable, ...], ...]
    edges: Tuple[Tuple[Port, Port], ...]
    inputs: Tuple[Port, ...]
    outputs: Tuple[Port, ...]
    exc: Optional[Tuple[str, Hashable]] = None

    # -- basic accessors -------------------------------------------------

    @property
    def n_instances(self) -> int:
        return len(self.decorations)

    def input_colors(self) -> Tuple[Hashable, ...]:
        if self.exc is not None:
            return (self.exc[1],) if self.exc[0] == "edge" else ()
        return tuple(self.ins[i][s] for i, s in self.inputs)

    def output_colors(self) -> Tuple[Hashable, ...]:
        if self.exc is not None:
            return (self.exc[1],) if self.exc[0] == "edge" else ()
        return tuple(self.outs[i][s] for i, s in self.outputs)

    def profile(self) -> Tuple[Tuple[Hashable, ...], Tuple[Hashable, ...]]:
        return (self.input_colors(), self.output_colors())

    @cached_property
    def all_colors(self) -> FrozenSet[Hashable]:
        if self.exc is not None:
            return frozenset((self.exc[1],))
        cols = set()
        for t in self.ins:
            cols.update(t)
        for t in self.outs:
            cols.update(t)
        return frozenset(cols)

    def edge_color(self, k: int) -> Hashable:
        (i, s), _ = self.edges[k]
        return self.outs[i][s]

    @cached_property
    def loop_count(self) -> int:
        return sum(1 for (o, i) in self.edges if o[0] == i[0])

    # -- validation -------------------------------------------------------

    def check(self, wheeled: bool = False) -> "DecoratedGraph":
        if self.exc is not None:
            if self.exc[0] == "loop" and not wheeled:
                raise DecorationError("exceptional loop element requires the "
                                      "wheeled setting")
            if self.decorations or self.edges:
                raise DecorationError("exceptional element must be bare")
            return self
        used_in: set = set()
        used_out: set = set()
        for (o, i) in self.edges:
            if o in used_out or i in used_in:
                raise DecorationError("port used by two edges")
            used_out.add(o)
            used_in.add(i)
            oi, os_ = o
            ii, is_ = i
            if self.outs[oi][os_] != self.ins[ii][is_]:
                raise DecorationError(
                    f"edge color mismatch at {o} -> {i}")
        free_in = {(i, s) for i in range(self.n_instances)
                   for s in range(len(self.ins[i]))} - used_in
        free_out = {(i, s) for i in range(self.n_instances)
                    for s in range(len(self.outs[i]))} - used_out
        if set(self.inputs) != free_in or len(set(self.inputs)) != len(self.inputs):
            raise DecorationError("input listing is not a bijection")
        if set(self.outputs) != free_out or len(set(self.outputs)) != len(self.outputs):
            raise DecorationError("output listing is not a bijection")
        if self.n_instances and not self._connected():
            raise DecorationError("decorated graph is not connected")
        if not wheeled and self._has_wheel():
            raise DecorationError("decorated graph has a wheel")
        return self

    def _connected(self) -> bool:
        if self.n_instances <= 1:
            return True
        adj: Dict[int, set] = {i: set() for i in range(self.n_instances)}
        for (o, i) in self.edges:
            adj[o[0]].add(i[0])
            adj[i[0]].add(o[0])
        seen = {0}
        todo = [0]
        while todo:
            a = todo.pop()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return len(seen) == self.n_instances

    def _has_wheel(self) -> bool:
        if any(o[0] == i[0] for (o, i) in self.edges):
            return True
        adj: Dict[int, set] = {i: set() for i in range(self.n_instances)}
        for (o, i) in self.edges:
            adj[o[0]].add(i[0])
        color: Dict[int, int] = {}

        def dfs(v: int) -> bool:
            color[v] = 1
            for w in adj[v]:
                c = color.get(w, 0)
                if c == 1 or (c == 0 and dfs(w)):
                    return True
            color[v] = 2
            return False

        return any(color.get(v, 0) == 0 and dfs(v)
                   for v in range(self.n_instances))

    def is_simply_connected(self) -> bool:
        if self.exc is not None:
            return self.exc[0] == "edge"
        return len(self.edges) - self.loop_count == max(self.n_instances - 1, 0) \
            and self.loop_count == 0 and not self._has_wheel() \
            and len(self.edges) == max(self.n_instances - 1, 0)

    # -- canonical forms ---------------------------------------------------

    def _encode(self, order: Sequence[int], keep_listing: bool) -> tuple:
        pos = {inst: k for k, inst in enumerate(order)}
        edge_to: Dict[Port, Port] = {}
        edge_from: Dict[Port, Port] = {}
        for (o, i) in self.edges:
            edge_to[o] = i
            edge_from[i] = o
        in_index = {p: k for k, p in enumerate(self.inputs)}
        out_index = {p: k for k, p in enumerate(self.outputs)}

        def port_desc(p: Port, incoming: bool) -> tuple:
            if incoming:
                src = edge_from.get(p)
                if src is None:
                    k = in_index[p]
                    return ("b", k if keep_listing else -1)
                return ("e", pos[src[0]], src[1])
            dst = edge_to.get(p)
            if dst is None:
                k = out_index[p]
                return ("b", k if keep_listing else -1)
            return ("e", pos[dst[0]], dst[1])

        rows = []
        for inst in order:
            rows.append((
                repr(self.decorations[inst]),
                tuple(port_desc((inst, s), True)
                      for s in range(len(self.ins[inst]))),
                tuple(port_desc((inst, s), False)
                      for s in range(len(self.outs[inst]))),
            ))
        if keep_listing:
            boundary = (
                tuple((pos[i], s) for (i, s) in self.inputs),
                tuple((pos[i], s) for (i, s) in self.outputs),
            )
        else:
            boundary = (
                tuple(sorted((pos[i], s) for (i, s) in self.inputs)),
                tuple(sorted((pos[i], s) for (i, s) in self.outputs)),
            )
        return (tuple(rows), boundary)

    def _canonical(self, keep_listing: bool) -> tuple:
        if self.exc is not None:
            return ("exc", self.exc[0], repr(self.exc[1]),
                    keep_listing)
        n = self.n_instances
        groups: Dict[tuple, List[int]] = {}
        for i in range(n):
            sig = (repr(self.decorations[i]), len(self.ins[i]),
                   len(self.outs[i]))
            groups.setdefault(sig, []).append(i)
        pools = [list(itertools.permutations(g)) for _, g in sorted(groups.items())]
        best = None
        for combo in itertools.product(*pools):
            order = [i for pool in combo for i in pool]
            enc = self._encode(order, keep_listing)
            if best is None or enc < best:
                best = enc
        return ("graph", best)

    @cached_property
    def canonical_strict(self) -> tuple:
        return self._canonical(keep_listing=True)

    @cached_property
    def canonical_unlisted(self) -> tuple:
        return self._canonical(keep_listing=False)

    def same(self, other: "DecoratedGraph") -> bool:
        """Strict equality: decoration-preserving iso matching all listings."""
        return self.canonical_strict == other.canonical_strict

    def same_up_to_listing(self, other: "DecoratedGraph") -> bool:
        return self.canonical_unlisted == other.canonical_unlisted

    # -- conversions --------------------------------------------------------

    def relist(self, new_inputs: Sequence[Port],
               new_outputs: Sequence[Port]) -> "DecoratedGraph":
        if set(new_inputs) != set(self.inputs) or \
                set(new_outputs) != set(self.outputs):
            raise DecorationError("relisting must permute the boundary ports")
        return replace(self, inputs=tuple(new_inputs),
                       outputs=tuple(new_outputs))

    def relist_for_profile(self, want_in: Sequence[Hashable],
                           want_out: Sequence[Hashable]) -> "DecoratedGraph":
        """Reorder the boundary to show the requested color profiles."""
        if self.exc is not None:
            if tuple(want_in) == self.input_colors() and \
                    tuple(want_out) == self.output_colors():
                return self
            raise DecorationError("an exceptional element has a fixed profile")

        def arrange(ports: Tuple[Port, ...], colors, want) -> Tuple[Port, ...]:
            pool: Dict[Hashable, List[Port]] = {}
            for p in ports:
                pool.setdefault(colors(p), []).append(p)
            out = []
            for c in want:
                if not pool.get(c):
                    raise DecorationError(f"no boundary port of color {c!r}")
                out.append(pool[c].pop(0))
            if any(pool.values()):
                raise DecorationError("profile does not exhaust the boundary")
            return tuple(out)

        new_in = arrange(self.inputs, lambda p: self.ins[p[0]][p[1]], want_in)
        new_out = arrange(self.outputs, lambda p: self.outs[p[0]][p[1]],
                          want_out)
        return self.relist(new_in, new_out)


def exceptional_element(color: Hashable) -> DecoratedGraph:
    return DecoratedGraph((), (), (), (), (), (), exc=("edge", color))


def exceptional_loop_element(color: Hashable) -> DecoratedGraph:
    return DecoratedGraph((), (), (), (), (), (), exc=("loop", color))


def corolla_element(decoration: Hashable, ins: Sequence[Hashable],
                    outs: Sequence[Hashable]) -> DecoratedGraph:
    n_in, n_out = len(ins), len(outs)
    return DecoratedGraph(
        decorations=(decoration,),
        ins=(tuple(ins),),
        outs=(tuple(outs),),
        edges=(),
        inputs=tuple((0, s) for s in range(n_in)),
        outputs=tuple((0, s) for s in range(n_out)),
    )


def graph_as_decorated_with_ports(G: GGraph):
    """As :func:`graph_as_decorated`, also returning flag-to-port maps."""
    D = graph_as_decorated(G)
    if D.exc is not None:
        return D, {}, {}
    index = {v: k for k, v in enumerate(G.vertex_names)}
    in_port = {}
    out_port = {}
    for v in G.vertex_names:
        for s, f in enumerate(G.vin[v]):
            in_port[f] = (index[v], s)
        for s, f in enumerate(G.vout[v]):
            out_port[f] = (index[v], s)
    return D, in_port, out_port


def graph_as_decorated(G: GGraph) -> DecoratedGraph:
    """G viewed as the identity element over itself: vertices decorated by
    their own names, edges colored by their own edge objects."""
    index = {v: k for k, v in enumerate(G.vertex_names)}
    ins = tuple(tuple(G.edge_of_flag[f] for f in G.vin[v])
                for v in G.vertex_names)
    outs = tuple(tuple(G.edge_of_flag[f] for f in G.vout[v])
                 for v in G.vertex_names)
    port_of_flag: Dict[int, Port] = {}
    for v in G.vertex_names:
        for s, f in enumerate(G.vin[v]):
            port_of_flag[f] = (index[v], s)
    out_port_of_flag: Dict[int, Port] = {}
    for v in G.vertex_names:
        for s, f in enumerate(G.vout[v]):
            out_port_of_flag[f] = (index[v], s)
    edges = []
    for e in G.internal_edges:
        if e.kind == "exceptional-loop":
            continue
        a, b = tuple(e.flags)
        out_flag = a if G.dir_map[a] == OUT else b
        in_flag = a if G.dir_map[a] == IN else b
        edges.append((out_port_of_flag[out_flag], port_of_flag[in_flag]))
    if not G.vertex_names:
        (e,) = G.edges
        if e.kind == "exceptional-edge":
            return exceptional_element(e)
        return exceptional_loop_element(e)
    return DecoratedGraph(
        decorations=tuple(G.vertex_names),
        ins=ins,
        outs=outs,
        edges=tuple(sorted(edges)),
        inputs=tuple(port_of_flag[f] for f in G.g_in),
        outputs=tuple(out_port_of_flag[f] for f in G.g_out),
    )


def decorated_to_graph(D: DecoratedGraph,
                       color_name=str) -> Tuple[GGraph, Dict[int, Tuple]]:
    """Materialize the shape of a decorated graph as a generalized graph.

    Returns the graph and a map from result flags to tagged ports
    ``("in"|"out", instance, slot)``.  Edge colors are rendered through
    ``color_name``.
    """
    if D.exc is not None:
        from .graphs import exceptional_edge, exceptional_loop
        c = color_name(D.exc[1])
        G = exceptional_edge(c) if D.exc[0] == "edge" else exceptional_loop(c)
        return G, {}
    flag_of_in: Dict[Port, int] = {}
    flag_of_out: Dict[Port, int] = {}
    nxt = 0
    names = [f"i{k}" for k in range(D.n_instances)]
    v_in: Dict[str, Tuple[int, ...]] = {}
    v_out: Dict[str, Tuple[int, ...]] = {}
    coloring: Dict[int, str] = {}
    direction: Dict[int, int] = {}
    for i in range(D.n_instances):
        acc = []
        for s, c in enumerate(D.ins[i]):
            flag_of_in[(i, s)] = nxt
            coloring[nxt] = color_name(c)
            direction[nxt] = IN
            acc.append(nxt)
            nxt += 1
        v_in[names[i]] = tuple(acc)
        acc = []
        for s, c in enumerate(D.outs[i]):
            flag_of_out[(i, s)] = nxt
            coloring[nxt] = color_name(c)
            direction[nxt] = OUT
            acc.append(nxt)
            nxt += 1
        v_out[names[i]] = tuple(acc)
    iota = {f: f for f in range(nxt)}
    for (o, i) in D.edges:
        a, b = flag_of_out[o], flag_of_in[i]
        iota[a], iota[b] = b, a
    G = validate(
        flags=list(range(nxt)),
        vertex_flags={n: v_in[n] + v_out[n] for n in names},
        exceptional=frozenset(),
        iota=iota,
        pi={},
        coloring=coloring,
        direction=direction,
        v_in=v_in,
        v_out=v_out,
        g_in=tuple(flag_of_in[p] for p in D.inputs),
        g_out=tuple(flag_of_out[p] for p in D.outputs),
    )
    ports = {f: ("in",) + p for p, f in flag_of_in.items()}
    ports.update({f: ("out",) + p for p, f in flag_of_out.items()})
    return G, ports


def plug(host: DecoratedGraph,
         fillers: Dict[int, DecoratedGraph],
         recolor=None,
         wheeled: bool = False) -> Tuple[DecoratedGraph, Dict]:
    """Substitute decorated graphs into instances of a decorated graph.

    ``fillers[i]`` replaces instance ``i``; its boundary profile must equal
    instance ``i``'s (after applying ``recolor`` to the host's colors, when
    given).  Instances without a filler keep their decoration (a corolla is
    implied).  Returns the result plus provenance: for each result instance,
    ``(host instance, filler instance)``.
    """
    recolor = recolor or (lambda c: c)
    if host.exc is not None:
        return (DecoratedGraph((), (), (), (), (), (),
                               exc=(host.exc[0], recolor(host.exc[1]))),
                {"instances": {}, "instances_fwd": {}, "host_edges": {},
                 "boundary_in": {}, "boundary_out": {}})

    filled = {}
    for i in range(host.n_instances):
        f = fillers.get(i)
        if f is None:
            f = corolla_element(host.decorations[i],
                                [recolor(c) for c in host.ins[i]],
                                [recolor(c) for c in host.outs[i]])
        want_in = tuple(recolor(c) for c in host.ins[i])
        want_out = tuple(recolor(c) for c in host.outs[i])
        if f.input_colors() != want_in or f.output_colors() != want_out:
            raise DecorationError(
                f"filler profile mismatch at instance {i}: "
                f"({f.input_colors()};{f.output_colors()}) vs "
                f"({want_in};{want_out})")
        filled[i] = f

    # result instances
    new_index: Dict[Tuple[int, int], int] = {}
    decorations: List[Hashable] = []
    ins: List[Tuple[Hashable, ...]] = []
    outs: List[Tuple[Hashable, ...]] = []
    for i in range(host.n_instances):
        f = filled[i]
        for j in range(f.n_instances):
            new_index[(i, j)] = len(decorations)
            decorations.append(f.decorations[j])
            ins.append(f.ins[j])
            outs.append(f.outs[j])

    # boundary chains: a host in-port maps to a filler graph-input port and
    # vice versa; exceptional fillers splice straight through.
    def filler_in_port(i: int, s: int):
        f = filled[i]
        if f.exc is not None:
            return ("thru", i)
        fi, fs = f.inputs[s]
        return ("port", new_index[(i, fi)], fs)

    def filler_out_port(i: int, s: int):
        f = filled[i]
        if f.exc is not None:
            return ("thru", i)
        fi, fs = f.outputs[s]
        return ("port", new_index[(i, fi)], fs)

    loop_fillers = [i for i, f in filled.items()
                    if f.exc is not None and f.exc[0] == "loop"]
    if loop_fillers:
        if host.n_instances != 1 or host.inputs or host.outputs:
            raise DecorationError(
                "an exceptional-loop filler disconnects the result")
        return (filled[loop_fillers[0]],
                {"instances": {}, "instances_fwd": {}, "host_edges": {},
                 "boundary_in": {}, "boundary_out": {}})

    # edges: host edges splice through exceptional fillers
    edges: List[Tuple[Port, Port]] = []
    # interior edges of fillers
    for i in range(host.n_instances):
        f = filled[i]
        for (o, ip) in f.edges:
            edges.append(((new_index[(i, o[0])], o[1]),
                          (new_index[(i, ip[0])], ip[1])))

    # host-level connections: walk each host edge/boundary chain
    def resolve_out(i: int, s: int, seen) -> Tuple:
        """Follow a host OUT port until a real result port or boundary."""
        spot = filler_out_port(i, s)
        if spot[0] == "port":
            return spot
        # pass-through: the filler is an exceptional edge; continue along
        # the host edge entering instance i (its unique in-slot)
        if (i, "in") in seen:
            return ("cycle", i)
        seen.add((i, "in"))
        src = host_edge_into.get((i, 0))
        if src is None:
            k = host_in_index[(i, 0)]
            return ("bin", k)
        return resolve_out(src[0], src[1], seen)

    def resolve_in(i: int, s: int, seen) -> Tuple:
        spot = filler_in_port(i, s)
        if spot[0] == "port":
            return spot
        if (i, "out") in seen:
            return ("cycle", i)
        seen.add((i, "out"))
        dst = host_edge_from.get((i, 0))
        if dst is None:
            k = host_out_index[(i, 0)]
            return ("bout", k)
        return resolve_in(dst[0], dst[1], seen)

    host_edge_into = {ip: o for (o, ip) in host.edges}
    host_edge_from = {o: ip for (o, ip) in host.edges}
    host_in_index = {p: k for k, p in enumerate(host.inputs)}
    host_out_index = {p: k for k, p in enumerate(host.outputs)}

    boundary_in: Dict[int, Tuple] = {}
    boundary_out: Dict[int, Tuple] = {}
    new_loops: List[Hashable] = []
    host_edge_res: Dict[Tuple[Port, Port], Tuple] = {}

    spliced_seen = set()
    for (o, ip) in host.edges:
        a = resolve_out(o[0], o[1], set())
        b = resolve_in(ip[0], ip[1], set())
        host_edge_res[(o, ip)] = (a, b)
        if a[0] == "cycle" or b[0] == "cycle":
            continue
        if (a, b) in spliced_seen:
            continue  # several host edges along one spliced chain
        spliced_seen.add((a, b))
        if a[0] == "port" and b[0] == "port":
            edges.append(((a[1], a[2]), (b[1], b[2])))
        elif a[0] == "port" and b[0] == "bout":
            boundary_out[b[1]] = (a[1], a[2])
        elif a[0] == "bin" and b[0] == "port":
            boundary_in[a[1]] = (b[1], b[2])
        elif a[0] == "bin" and b[0] == "bout":
            boundary_in[a[1]] = ("thru", b[1])
            boundary_out[b[1]] = ("thru", a[1])
        else:  # pragma: no cover - impossible combination
            raise AssertionError((a, b))

    # cycles made of exceptional fillers and host edges
    visited_cycle = set()
    for (o, ip) in host.edges:
        a = resolve_out(o[0], o[1], set())
        if a[0] != "cycle":
            continue
        i = a[1]
        if i in visited_cycle:
            continue
        # walk the cycle collecting instances
        cur = i
        while cur not in visited_cycle:
            visited_cycle.add(cur)
            nxt = host_edge_from.get((cur, 0))
            cur = nxt[0]
        color = recolor(host.ins[i][0])
        new_loops.append(color)

    for k, p in enumerate(host.inputs):
        if k in boundary_in:
            continue
        spot = filler_in_port(*p)
        if spot[0] == "port":
            boundary_in[k] = (spot[1], spot[2])
        else:
            # the input enters an exceptional filler: follow out the other side
            dst = host_edge_from.get((p[0], 0))
            if dst is None:
                kk = host_out_index[(p[0], 0)]
                boundary_in[k] = ("thru", kk)
                boundary_out[kk] = ("thru", k)
            else:
                spot2 = resolve_in(dst[0], dst[1], set())
                if spot2[0] == "port":
                    boundary_in[k] = (spot2[1], spot2[2])
                elif spot2[0] == "bout":
                    boundary_in[k] = ("thru", spot2[1])
                    boundary_out[spot2[1]] = ("thru", k)
                else:  # pragma: no cover
                    raise AssertionError(spot2)

    for k, p in enumerate(host.outputs):
        if k in boundary_out:
            continue
        spot = filler_out_port(*p)
        if spot[0] == "port":
            boundary_out[k] = (spot[1], spot[2])
        else:
            src = host_edge_into.get((p[0], 0))
            if src is None:
                kk = host_in_index[(p[0], 0)]
                boundary_out[k] = ("thru", kk)
                boundary_in[kk] = ("thru", k)
            else:
                spot2 = resolve_out(src[0], src[1], set())
                if spot2[0] == "port":
                    boundary_out[k] = (spot2[1], spot2[2])
                elif spot2[0] == "bin":
                    boundary_out[k] = ("thru", spot2[1])
                    boundary_in[spot2[1]] = ("thru", k)
                else:  # pragma: no cover
                    raise AssertionError(spot2)

    # assemble
    prov = {"instances": {v: k for k, v in new_index.items()},
            "instances_fwd": dict(new_index),
            "host_edges": host_edge_res,
            "boundary_in": boundary_in,
            "boundary_out": boundary_out}
    if not decorations:
        # result has no instances: a single exceptional edge or loop
        if new_loops:
            if len(new_loops) != 1 or boundary_in or boundary_out:
                raise DecorationError("disconnected exceptional result")
            return exceptional_loop_element(new_loops[0]), prov
        if len(host.inputs) == 1 and len(host.outputs) == 1:
            c = recolor(host.input_colors()[0])
            return exceptional_element(c), prov
        raise DecorationError("vertex-free result must be a single edge")
    if new_loops:
        raise DecorationError("result mixes instances with a free loop")
    for k in range(len(host.inputs)):
        if boundary_in[k][0] == "thru":
            raise AssertionError("pass-through boundary with instances left")
    for k in range(len(host.outputs)):
        if boundary_out[k][0] == "thru":
            raise AssertionError("pass-through boundary with instances left")

    result = DecoratedGraph(
        decorations=tuple(decorations),
        ins=tuple(ins),
        outs=tuple(outs),
        edges=tuple(sorted(edges)),
        inputs=tuple(boundary_in[k] for k in range(len(host.inputs))),
        outputs=tuple(boundary_out[k] for k in range(len(host.outputs))),
    ).check(wheeled=wheeled)
    return result, prov
