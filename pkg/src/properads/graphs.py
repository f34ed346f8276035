"""Generalized graphs: flags, involutions, colorings, directions, listings.

A generalized graph is a finite set of flags (half-edges) partitioned into
named vertices plus one exceptional cell, together with an involution ``iota``
pairing flags into edges, a free involution ``pi`` pairing exceptional
iota-fixed flags into exceptional edges, an edge coloring, a direction, and
input/output listings for the whole graph and each vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

DEFAULT_COLOR = "*"

# flag direction
IN = 1
OUT = -1


class GraphError(ValueError):
    """Raised when a graph description violates a structural axiom."""


Perm = Tuple[int, ...]  # perm[i] = image of position i (0-indexed)


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def invert_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def compose_perm(p: Perm, q: Perm) -> Perm:
    """(p after q): position i -> p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(q)))


def act_left(p: Perm, seq: Sequence) -> tuple:
    """sigma @ profile: result[i] = seq[p[i]] (left action on profiles)."""
    return tuple(seq[p[i]] for i in range(len(seq)))


def act_right(seq: Sequence, p: Perm) -> tuple:
    """profile @ tau: result[i] = seq[p^-1[i]]."""
    inv = invert_perm(p)
    return tuple(seq[inv[i]] for i in range(len(seq)))


def segment_positions(length: int, start: int, k: int) -> Tuple[int, ...]:
    """0-indexed positions of the k-segment starting at ``start`` (0-indexed)."""
    if k <= 0 or start < 0 or start + k > length:
        raise GraphError(
            f"no {k}-segment at position {start} in a profile of length {length}"
        )
    return tuple(range(start, start + k))


def splice_profile(base: Sequence, start: int, k: int, repl: Sequence) -> tuple:
    """base with its k-segment at ``start`` replaced by ``repl``."""
    segment_positions(len(base), start, k)
    return tuple(base[:start]) + tuple(repl) + tuple(base[start + k:])


ORDINARY_EDGE = "ordinary-edge"
LOOP = "loop"
EXCEPTIONAL_EDGE = "exceptional-edge"
EXCEPTIONAL_LOOP = "exceptional-loop"
ORDINARY_LEG = "ordinary-leg"


@dataclass(frozen=True)
class Edge:
    """One iota/pi orbit of flags, classified.

    ``tail``/``head`` name the initial/terminal vertex where defined (ordinary
    edges and loops); for an ordinary leg ``at`` names the carrying vertex.
    """

    flags: FrozenSet[int]
    kind: str
    color: str
    tail: Optional[str] = None
    head: Optional[str] = None
    at: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(
            (self.flags, self.kind, self.color, self.tail, self.head,
             self.at)))

    def __hash__(self):
        return self._hash

    @property
    def is_internal(self) -> bool:
        return self.kind in (ORDINARY_EDGE, LOOP, EXCEPTIONAL_LOOP)

    @property
    def is_loop(self) -> bool:
        return self.kind == LOOP

    def key(self) -> Tuple[int, ...]:
        return tuple(sorted(self.flags))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Edge({sorted(self.flags)},{self.kind},{self.color})"


@dataclass(frozen=True, eq=False)
class GGraph:
    """An immutable validated generalized graph."""

    flags: Tuple[int, ...]
    vertex_names: Tuple[str, ...]
    vertex_flags: Tuple[Tuple[str, Tuple[int, ...]], ...]
    exceptional: FrozenSet[int]
    iota: Tuple[Tuple[int, int], ...]
    pi: Tuple[Tuple[int, int], ...]
    coloring: Tuple[Tuple[int, str], ...]
    direction: Tuple[Tuple[int, int], ...]
    v_in: Tuple[Tuple[str, Tuple[int, ...]], ...]
    v_out: Tuple[Tuple[str, Tuple[int, ...]], ...]
    g_in: Tuple[int, ...]
    g_out: Tuple[int, ...]

    # -- derived views -------------------------------------------------

    @cached_property
    def iota_map(self) -> Dict[int, int]:
        return dict(self.iota)

    @cached_property
    def pi_map(self) -> Dict[int, int]:
        return dict(self.pi)

    @cached_property
    def color_map(self) -> Dict[int, str]:
        return dict(self.coloring)

    @cached_property
    def dir_map(self) -> Dict[int, int]:
        return dict(self.direction)

    @cached_property
    def vmap(self) -> Dict[str, Tuple[int, ...]]:
        return dict(self.vertex_flags)

    @cached_property
    def vin(self) -> Dict[str, Tuple[int, ...]]:
        return dict(self.v_in)

    @cached_property
    def vout(self) -> Dict[str, Tuple[int, ...]]:
        return dict(self.v_out)

    @cached_property
    def flag_vertex(self) -> Dict[int, str]:
        owner: Dict[int, str] = {}
        for name, fl in self.vertex_flags:
            for x in fl:
                owner[x] = name
        return owner

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        """Every iota/pi orbit, classified, in deterministic flag order."""
        seen = set()
        out: List[Edge] = []
        owner = self.flag_vertex
        for x in self.flags:
            if x in seen:
                continue
            ix = self.iota_map[x]
            if ix != x:
                seen.update((x, ix))
                col = self.color_map[x]
                if x in self.exceptional:
                    out.append(Edge(frozenset((x, ix)), EXCEPTIONAL_LOOP, col))
                else:
                    o, i = (x, ix) if self.dir_map[x] == OUT else (ix, x)
                    tail, head = owner[o], owner[i]
                    kind = LOOP if tail == head else ORDINARY_EDGE
                    out.append(Edge(frozenset((x, ix)), kind, col, tail, head))
            elif x in self.exceptional:
                px = self.pi_map[x]
                seen.update((x, px))
                out.append(Edge(frozenset((x, px)), EXCEPTIONAL_EDGE,
                                self.color_map[x]))
            else:
                seen.add(x)
                out.append(Edge(frozenset((x,)), ORDINARY_LEG,
                                self.color_map[x], at=owner[x]))
        out.sort(key=lambda e: e.key())
        return tuple(out)

    @cached_property
    def edge_of_flag(self) -> Dict[int, Edge]:
        m: Dict[int, Edge] = {}
        for e in self.edges:
            for x in e.flags:
                m[x] = e
        return m

    @cached_property
    def internal_edges(self) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_internal)

    # -- profiles ------------------------------------------------------

    def in_profile(self, u: Optional[str] = None) -> Tuple[str, ...]:
        flags = self.g_in if u is None else self.vin[u]
        return tuple(self.color_map[x] for x in flags)

    def out_profile(self, u: Optional[str] = None) -> Tuple[str, ...]:
        flags = self.g_out if u is None else self.vout[u]
        return tuple(self.color_map[x] for x in flags)

    def in_edges(self, u: Optional[str] = None) -> Tuple[Edge, ...]:
        flags = self.g_in if u is None else self.vin[u]
        return tuple(self.edge_of_flag[x] for x in flags)

    def out_edges(self, u: Optional[str] = None) -> Tuple[Edge, ...]:
        flags = self.g_out if u is None else self.vout[u]
        return tuple(self.edge_of_flag[x] for x in flags)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    def vertex_arity(self, v: str) -> Tuple[int, int]:
        return (len(self.vin[v]), len(self.vout[v]))

    def is_ordinary(self) -> bool:
        return not self.exceptional

    def adjacent_ordinary_edges(self, v: str) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges
                     if e.kind in (ORDINARY_EDGE, LOOP) and v in (e.tail, e.head))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"GGraph(vertices={list(self.vertex_names)}, "
                f"flags={len(self.flags)}, edges={len(self.edges)})")


def make_graph(
    vertices: Dict[str, dict],
    exceptional: Iterable[int] = (),
    iota: Dict[int, int] = None,
    pi: Dict[int, int] = None,
    coloring: Dict[int, str] = None,
    direction: Dict[int, int] = None,
    g_in: Sequence[int] = (),
    g_out: Sequence[int] = (),
    exceptional_direction: Dict[int, int] = None,
) -> GGraph:
    """Build and validate a graph.

    ``vertices`` maps a name to ``{"in": ordered flags, "out": ordered flags}``;
    iota defaults to the identity off its given pairs, colors default to "*".
    """
    iota = dict(iota or {})
    pi = dict(pi or {})
    coloring = dict(coloring or {})
    direction = dict(direction or {})
    exceptional = frozenset(exceptional)

    vertex_names = tuple(vertices.keys())
    v_in = {name: tuple(spec.get("in", ())) for name, spec in vertices.items()}
    v_out = {name: tuple(spec.get("out", ())) for name, spec in vertices.items()}
    vertex_flags = {name: v_in[name] + v_out[name] for name in vertex_names}

    all_flags: List[int] = []
    for name in vertex_names:
        all_flags.extend(vertex_flags[name])
    all_flags.extend(sorted(exceptional))

    for name in vertex_names:
        for x in v_in[name]:
            direction.setdefault(x, IN)
        for x in v_out[name]:
            direction.setdefault(x, OUT)
    for x, d in (exceptional_direction or {}).items():
        direction.setdefault(x, d)

    for x in all_flags:
        iota.setdefault(x, x)
        coloring.setdefault(x, DEFAULT_COLOR)

    return validate(
        flags=all_flags,
        vertex_flags={n: vertex_flags[n] for n in vertex_names},
        exceptional=exceptional,
        iota=iota,
        pi=pi,
        coloring=coloring,
        direction=direction,
        v_in=v_in,
        v_out=v_out,
        g_in=tuple(g_in),
        g_out=tuple(g_out),
    )


def validate(
    flags: Sequence[int],
    vertex_flags: Dict[str, Sequence[int]],
    exceptional: FrozenSet[int],
    iota: Dict[int, int],
    pi: Dict[int, int],
    coloring: Dict[int, str],
    direction: Dict[int, int],
    v_in: Dict[str, Sequence[int]],
    v_out: Dict[str, Sequence[int]],
    g_in: Sequence[int],
    g_out: Sequence[int],
) -> GGraph:
    """Check every structural axiom and freeze the graph."""
    flag_set = set(flags)
    if len(flags) != len(flag_set):
        raise GraphError("duplicate flags")

    # partition: vertices plus exceptional cell
    seen: set = set()
    for name, fl in vertex_flags.items():
        for x in fl:
            if x in seen:
                raise GraphError(f"flag {x} lies in two cells")
            if x in exceptional:
                raise GraphError(f"flag {x} both in vertex {name} and exceptional cell")
            seen.add(x)
    seen |= set(exceptional)
    if seen != flag_set:
        raise GraphError("partition does not cover the flag set")

    for x in flags:
        ix = iota.get(x)
        if ix is None or ix not in flag_set:
            raise GraphError(f"iota undefined or out of range at flag {x}")
        if iota.get(ix) != x:
            raise GraphError(f"non-involutive iota at flag {x}")
        if x in exceptional and ix not in exceptional:
            raise GraphError(f"exceptional cell not iota-closed at flag {x}")

    fixed_exc = {x for x in exceptional if iota[x] == x}
    if set(pi.keys()) != fixed_exc:
        raise GraphError("pi domain must be the iota-fixed exceptional flags")
    for x in fixed_exc:
        px = pi[x]
        if px == x:
            raise GraphError(f"pi has a fixed point at flag {x}")
        if px not in fixed_exc or pi.get(px) != x:
            raise GraphError(f"non-involutive pi at flag {x}")

    for x in flags:
        if x not in direction:
            raise GraphError(f"direction undefined at flag {x}")
        if direction[x] not in (IN, OUT):
            raise GraphError(f"direction at flag {x} must be +1 or -1")
        if x not in coloring:
            raise GraphError(f"color undefined at flag {x}")

    for x in flags:
        ix = iota[x]
        if ix != x:
            if direction[ix] != -direction[x]:
                raise GraphError(f"direction not reversed by iota at flag {x}")
            if coloring[ix] != coloring[x]:
                raise GraphError(f"color not constant on iota orbit of flag {x}")
    for x, px in pi.items():
        if direction[px] != -direction[x]:
            raise GraphError(f"direction not reversed by pi at flag {x}")
        if coloring[px] != coloring[x]:
            raise GraphError(f"color not constant on pi orbit of flag {x}")

    # listings
    def check_listing(where: str, ins: Sequence[int], outs: Sequence[int],
                      pool: Iterable[int]) -> None:
        pool = set(pool)
        want_in = {x for x in pool if direction[x] == IN}
        want_out = {x for x in pool if direction[x] == OUT}
        if len(set(ins)) != len(ins) or set(ins) != want_in:
            raise GraphError(f"input listing of {where} is not a bijection")
        if len(set(outs)) != len(outs) or set(outs) != want_out:
            raise GraphError(f"output listing of {where} is not a bijection")

    legs = [x for x in flags if iota[x] == x]
    check_listing("the graph", g_in, g_out, legs)
    for name, fl in vertex_flags.items():
        check_listing(f"vertex {name}", v_in[name], v_out[name], fl)

    names = tuple(vertex_flags.keys())
    return GGraph(
        flags=tuple(flags),
        vertex_names=names,
        vertex_flags=tuple((n, tuple(vertex_flags[n])) for n in names),
        exceptional=frozenset(exceptional),
        iota=tuple(sorted(iota.items())),
        pi=tuple(sorted(pi.items())),
        coloring=tuple(sorted(coloring.items())),
        direction=tuple(sorted(direction.items())),
        v_in=tuple((n, tuple(v_in[n])) for n in names),
        v_out=tuple((n, tuple(v_out[n])) for n in names),
        g_in=tuple(g_in),
        g_out=tuple(g_out),
    )


# ---------------------------------------------------------------------------
# standard graphs
# ---------------------------------------------------------------------------


def empty_graph() -> GGraph:
    return make_graph({})


def isolated_vertices(n: int) -> GGraph:
    return make_graph({f"v{i}": {"in": (), "out": ()} for i in range(n)})


def exceptional_edge(color: str = DEFAULT_COLOR) -> GGraph:
    # flag 0 is the input half, flag 1 the output half
    return make_graph(
        {},
        exceptional=(0, 1),
        pi={0: 1, 1: 0},
        coloring={0: color, 1: color},
        exceptional_direction={0: IN, 1: OUT},
        g_in=(0,),
        g_out=(1,),
    )


def exceptional_loop(color: str = DEFAULT_COLOR) -> GGraph:
    return make_graph(
        {},
        exceptional=(0, 1),
        iota={0: 1, 1: 0},
        coloring={0: color, 1: color},
        exceptional_direction={0: IN, 1: OUT},
    )


def corolla(inputs: Sequence[str], outputs: Sequence[str],
            name: str = "v") -> GGraph:
    """The corolla with the given ordered input/output colors."""
    m, n = len(inputs), len(outputs)
    ins = tuple(range(m))
    outs = tuple(range(m, m + n))
    coloring = {ins[k]: inputs[k] for k in range(m)}
    coloring.update({outs[j]: outputs[j] for j in range(n)})
    return make_graph(
        {name: {"in": ins, "out": outs}},
        coloring=coloring,
        g_in=ins,
        g_out=outs,
    )


def corolla_mn(m: int, n: int, name: str = "v") -> GGraph:
    return corolla([DEFAULT_COLOR] * m, [DEFAULT_COLOR] * n, name=name)


def permuted_corolla(inputs: Sequence[str], outputs: Sequence[str],
                     sigma: Perm, tau: Perm, name: str = "v") -> GGraph:
    return relabel(corolla(inputs, outputs, name=name), sigma, tau)


def contracted_corolla(inputs: Sequence[str], outputs: Sequence[str],
                       i: int, j: int, name: str = "v") -> GGraph:
    """xi^i_j C: contract output i against input j (1-indexed, c_j = d_i)."""
    m, n = len(inputs), len(outputs)
    if not (1 <= j <= m and 1 <= i <= n):
        raise GraphError(f"contraction indices ({i},{j}) out of range")
    if inputs[j - 1] != outputs[i - 1]:
        raise GraphError(
            f"cannot contract mismatched colors {outputs[i-1]} vs {inputs[j-1]}")
    ins = tuple(range(m))
    outs = tuple(range(m, m + n))
    coloring = {ins[k]: inputs[k] for k in range(m)}
    coloring.update({outs[k]: outputs[k] for k in range(n)})
    fi, fo = ins[j - 1], outs[i - 1]
    return make_graph(
        {name: {"in": ins, "out": outs}},
        iota={fi: fo, fo: fi},
        coloring=coloring,
        g_in=tuple(x for x in ins if x != fi),
        g_out=tuple(x for x in outs if x != fo),
    )


def partially_grafted(
    top_in: Sequence[str], top_out: Sequence[str],
    bot_in: Sequence[str], bot_out: Sequence[str],
    j: int, i: int, alpha: int,
    top: str = "v", bottom: str = "u",
) -> GGraph:
    """C_(top) boxtimes C_(bottom) along equal alpha-segments.

    The segment of the top vertex's inputs starts at position ``j`` and the
    segment of the bottom vertex's outputs at position ``i`` (1-indexed);
    the identified colors must agree.
    """
    m, n = len(top_in), len(top_out)
    k, l = len(bot_in), len(bot_out)
    if alpha <= 0:
        raise GraphError("a partially grafted corollas needs alpha >= 1")
    segment_positions(m, j - 1, alpha)
    segment_positions(l, i - 1, alpha)
    for t in range(alpha):
        if top_in[j - 1 + t] != bot_out[i - 1 + t]:
            raise GraphError(
                f"segment color mismatch at offset {t}: "
                f"{top_in[j-1+t]} vs {bot_out[i-1+t]}")
    # flags: top inputs, top outputs, bottom inputs, bottom outputs
    ti = tuple(range(m))
    to = tuple(range(m, m + n))
    bi = tuple(range(m + n, m + n + k))
    bo = tuple(range(m + n + k, m + n + k + l))
    coloring = {}
    for idx, c in zip(ti, top_in):
        coloring[idx] = c
    for idx, c in zip(to, top_out):
        coloring[idx] = c
    for idx, c in zip(bi, bot_in):
        coloring[idx] = c
    for idx, c in zip(bo, bot_out):
        coloring[idx] = c
    iota = {}
    for t in range(alpha):
        a, b = ti[j - 1 + t], bo[i - 1 + t]
        iota[a] = b
        iota[b] = a
    g_in = tuple(ti[: j - 1]) + bi + tuple(ti[j - 1 + alpha:])
    g_out = tuple(bo[: i - 1]) + to + tuple(bo[i - 1 + alpha:])
    return make_graph(
        {top: {"in": ti, "out": to}, bottom: {"in": bi, "out": bo}},
        iota=iota,
        coloring=coloring,
        g_in=g_in,
        g_out=g_out,
    )


def dioperadic(top_in: Sequence[str], top_out: Sequence[str],
               bot_in: Sequence[str], bot_out: Sequence[str],
               j: int, i: int, top: str = "v", bottom: str = "u") -> GGraph:
    """The dioperadic graph: a partially grafted corollas with one edge."""
    return partially_grafted(top_in, top_out, bot_in, bot_out, j, i, 1,
                             top=top, bottom=bottom)


def linear_graph(n: int, colors: Sequence[str] = None) -> GGraph:
    """The linear graph with n vertices; ``colors`` has length n+1."""
    if colors is None:
        colors = [DEFAULT_COLOR] * (n + 1)
    if len(colors) != n + 1:
        raise GraphError(f"linear({n}) needs {n + 1} colors")
    if n == 0:
        return exceptional_edge(colors[0])
    vertices = {}
    coloring = {}
    iota = {}
    for idx in range(n):
        fin, fout = 2 * idx, 2 * idx + 1
        vertices[f"v{idx}"] = {"in": (fin,), "out": (fout,)}
        coloring[fin] = colors[idx]
        coloring[fout] = colors[idx + 1]
        if idx > 0:
            prev_out = 2 * (idx - 1) + 1
            iota[prev_out] = fin
            iota[fin] = prev_out
    return make_graph(vertices, iota=iota, coloring=coloring,
                      g_in=(0,), g_out=(2 * n - 1,))


def standard_graph(kind: str, **kw) -> GGraph:
    """Deterministic constructor for the named example graphs."""
    builders = {
        "empty": lambda: empty_graph(),
        "isolated-vertices": lambda: isolated_vertices(kw.get("n", 1)),
        "exceptional-edge": lambda: exceptional_edge(kw.get("color", DEFAULT_COLOR)),
        "exceptional-loop": lambda: exceptional_loop(kw.get("color", DEFAULT_COLOR)),
        "corolla": lambda: corolla(kw.get("inputs", ()), kw.get("outputs", ())),
        "permuted-corolla": lambda: permuted_corolla(
            kw["inputs"], kw["outputs"], tuple(kw["sigma"]), tuple(kw["tau"])),
        "contracted-corolla": lambda: contracted_corolla(
            kw["inputs"], kw["outputs"], kw["i"], kw["j"]),
        "partially-grafted": lambda: partially_grafted(
            kw["top_in"], kw["top_out"], kw["bot_in"], kw["bot_out"],
            kw["j"], kw["i"], kw["alpha"]),
        "dioperadic": lambda: dioperadic(
            kw["top_in"], kw["top_out"], kw["bot_in"], kw["bot_out"],
            kw["j"], kw["i"]),
        "linear": lambda: linear_graph(kw.get("n", 1), kw.get("colors")),
    }
    if kind not in builders:
        raise GraphError(f"unknown standard graph kind {kind!r}")
    return builders[kind]()


# ---------------------------------------------------------------------------
# relabeling and isomorphism
# ---------------------------------------------------------------------------


def relabel(G: GGraph, sigma: Perm, tau: Perm) -> GGraph:
    """sigma G tau: permute the whole-graph listing only.

    ``tau`` permutes input positions (new label of old input k is tau(k)),
    ``sigma`` permutes output positions (new label of old output j is
    sigma^-1(j)), matching the permuted-corolla convention.
    """
    if len(tau) != len(G.g_in) or len(sigma) != len(G.g_out):
        raise GraphError("relabel permutation arity mismatch")
    new_in = [0] * len(G.g_in)
    for k, x in enumerate(G.g_in):
        new_in[tau[k]] = x
    inv_sigma = invert_perm(sigma)
    new_out = [0] * len(G.g_out)
    for j, x in enumerate(G.g_out):
        new_out[inv_sigma[j]] = x
    return GGraph(
        flags=G.flags,
        vertex_names=G.vertex_names,
        vertex_flags=G.vertex_flags,
        exceptional=G.exceptional,
        iota=G.iota,
        pi=G.pi,
        coloring=G.coloring,
        direction=G.direction,
        v_in=G.v_in,
        v_out=G.v_out,
        g_in=tuple(new_in),
        g_out=tuple(new_out),
    )


def _flag_map_ok(G: GGraph, H: GGraph, fmap: Dict[int, int]) -> bool:
    """Does the total flag bijection preserve iota, pi, kappa, delta?"""
    for x, y in fmap.items():
        if G.color_map[x] != H.color_map[y]:
            return False
        if G.dir_map[x] != H.dir_map[y]:
            return False
        if fmap[G.iota_map[x]] != H.iota_map[y]:
            return False
        px = G.pi_map.get(x)
        if px is not None:
            if H.pi_map.get(y) != fmap[px]:
                return False
    return True


def _exceptional_matchings(G: GGraph, H: GGraph, strict: bool):
    """Yield bijections between the exceptional cells compatible with
    pi/iota/kappa/delta (and graph listing positions when strict)."""
    ge, he = sorted(G.exceptional), sorted(H.exceptional)
    if len(ge) != len(he):
        return
    if not ge:
        yield {}
        return
    if strict:
        # positions in the graph listing pin exceptional legs exactly
        fmap = {}
        ok = True
        pos_h = {x: ("in", k) for k, x in enumerate(H.g_in)}
        pos_h.update({x: ("out", k) for k, x in enumerate(H.g_out)})
        pos_g = {x: ("in", k) for k, x in enumerate(G.g_in)}
        pos_g.update({x: ("out", k) for k, x in enumerate(G.g_out)})
        inv_h = {v: k for k, v in pos_h.items()}
        leftover_g = []
        for x in ge:
            if x in pos_g:
                y = inv_h.get(pos_g[x])
                if y is None or y not in H.exceptional:
                    ok = False
                    break
                fmap[x] = y
            else:
                leftover_g.append(x)
        if not ok:
            return
        leftover_h = [y for y in he if y not in set(fmap.values())]
        # leftover flags form exceptional loops; match by color and direction
        for extra in _match_loops(G, H, leftover_g, leftover_h):
            full = dict(fmap)
            full.update(extra)
            yield full
    else:
        # split into pi-pairs (exceptional edges) and iota-2-cycles (loops)
        g_edges = [e for e in G.edges if e.kind == EXCEPTIONAL_EDGE]
        h_edges = [e for e in H.edges if e.kind == EXCEPTIONAL_EDGE]
        g_loops = [x for x in ge if G.iota_map[x] != x]
        h_loops = [y for y in he if H.iota_map[y] != y]
        if len(g_edges) != len(h_edges):
            return
        for eperm in itertools.permutations(h_edges):
            fmap = {}
            ok = True
            for e, f in zip(g_edges, eperm):
                if e.color != f.color:
                    ok = False
                    break
                for x in e.flags:
                    y = next(z for z in f.flags
                             if H.dir_map[z] == G.dir_map[x])
                    fmap[x] = y
            if not ok:
                continue
            for extra in _match_loops(G, H, g_loops, h_loops):
                full = dict(fmap)
                full.update(extra)
                yield full


def _match_loops(G: GGraph, H: GGraph, gl: List[int], hl: List[int]):
    g_pairs = sorted({tuple(sorted((x, G.iota_map[x]))) for x in gl})
    h_pairs = sorted({tuple(sorted((y, H.iota_map[y]))) for y in hl})
    if len(g_pairs) != len(h_pairs):
        return
    for perm in itertools.permutations(h_pairs):
        fmap = {}
        ok = True
        for (a, b), (c, d) in zip(g_pairs, perm):
            if G.color_map[a] != H.color_map[c]:
                ok = False
                break
            for x in (a, b):
                y = c if H.dir_map[c] == G.dir_map[x] else d
                fmap[x] = y
        if ok:
            yield fmap


def _vertex_signature(G: GGraph, v: str, strict: bool):
    loops = sum(1 for e in G.edges if e.kind == LOOP and e.tail == v)
    if strict:
        return (G.in_profile(v), G.out_profile(v), loops)
    return (tuple(sorted(G.in_profile(v))), tuple(sorted(G.out_profile(v))), loops)


def _iso_iter(G: GGraph, H: GGraph, strict: bool):
    if len(G.flags) != len(H.flags) or G.n_vertices != H.n_vertices:
        return
    if strict:
        if G.in_profile() != H.in_profile() or G.out_profile() != H.out_profile():
            return
    else:
        if sorted(G.in_profile()) != sorted(H.in_profile()):
            return
        if sorted(G.out_profile()) != sorted(H.out_profile()):
            return

    gsig = {v: _vertex_signature(G, v, strict) for v in G.vertex_names}
    hs: Dict[tuple, List[str]] = {}
    for w in H.vertex_names:
        hs.setdefault(_vertex_signature(H, w, strict), []).append(w)
    if sorted(map(str, gsig.values())) != sorted(
            str(s) for s, ws in hs.items() for _ in ws):
        return

    gv = sorted(G.vertex_names, key=lambda v: str(gsig[v]))

    def extend(idx: int, used: set, vmap: Dict[str, str]):
        if idx == len(gv):
            yield dict(vmap)
            return
        v = gv[idx]
        for w in hs.get(gsig[v], ()):
            if w in used:
                continue
            vmap[v] = w
            used.add(w)
            yield from extend(idx + 1, used, vmap)
            used.discard(w)
            del vmap[v]

    for vmap in extend(0, set(), {}):
        for fmap in _flag_matchings(G, H, vmap, strict):
            for emap in _exceptional_matchings(G, H, strict):
                full = dict(fmap)
                full.update(emap)
                if len(set(full.values())) != len(full):
                    continue
                if _flag_map_ok(G, H, full):
                    if strict and not _listing_preserved(G, H, full):
                        continue
                    yield full


def _iso(G: GGraph, H: GGraph, strict: bool) -> Optional[Dict[int, int]]:
    for fmap in _iso_iter(G, H, strict):
        return fmap
    return None


def all_isos_up_to_listing(G: GGraph, H: GGraph):
    """Every flag bijection preserving cells, involutions, colors, and
    directions (listings free); deduplicated."""
    seen = set()
    for fmap in _iso_iter(G, H, strict=False):
        key = tuple(sorted(fmap.items()))
        if key not in seen:
            seen.add(key)
            yield dict(fmap)


def _listing_preserved(G: GGraph, H: GGraph, fmap: Dict[int, int]) -> bool:
    if tuple(fmap[x] for x in G.g_in) != H.g_in:
        return False
    return tuple(fmap[x] for x in G.g_out) == H.g_out


def _flag_matchings(G: GGraph, H: GGraph, vmap: Dict[str, str], strict: bool):
    """Yield ordinary-flag bijections compatible with the vertex bijection."""
    if strict:
        fmap = {}
        for v, w in vmap.items():
            gi, go = G.vin[v], G.vout[v]
            hi, ho = H.vin[w], H.vout[w]
            if len(gi) != len(hi) or len(go) != len(ho):
                return
            for x, y in zip(gi + go, hi + ho):
                fmap[x] = y
        yield fmap
        return

    # up to listing: per-vertex color-respecting bijections, product search
    per_vertex: List[List[Dict[int, int]]] = []
    for v, w in vmap.items():
        choices: List[Dict[int, int]] = []
        gi, go = G.vin[v], G.vout[v]
        hi, ho = H.vin[w], H.vout[w]
        if len(gi) != len(hi) or len(go) != len(ho):
            return
        for ip in _color_bijections(gi, hi, G, H):
            for op in _color_bijections(go, ho, G, H):
                m = dict(ip)
                m.update(op)
                choices.append(m)
        if not choices:
            return
        per_vertex.append(choices)

    for combo in itertools.product(*per_vertex) if per_vertex else iter([()]):
        fmap: Dict[int, int] = {}
        for m in combo:
            fmap.update(m)
        yield fmap


def _color_bijections(xs: Tuple[int, ...], ys: Tuple[int, ...],
                      G: GGraph, H: GGraph):
    """All color-preserving bijections xs -> ys."""
    if len(xs) != len(ys):
        return
    by_color: Dict[str, List[int]] = {}
    for y in ys:
        by_color.setdefault(H.color_map[y], []).append(y)
    groups: Dict[str, List[int]] = {}
    for x in xs:
        groups.setdefault(G.color_map[x], []).append(x)
    if sorted(groups) != sorted(by_color) or any(
            len(groups[c]) != len(by_color[c]) for c in groups):
        return
    colors = sorted(groups)
    pools = [list(itertools.permutations(by_color[c])) for c in colors]
    for combo in itertools.product(*pools):
        m: Dict[int, int] = {}
        for c, perm in zip(colors, combo):
            for x, y in zip(groups[c], perm):
                m[x] = y
        yield m


def strict_iso(G: GGraph, H: GGraph) -> Optional[Dict[int, int]]:
    """A flag bijection preserving cells, involutions, colors, directions,
    and every listing, or None."""
    return _iso(G, H, strict=True)


def iso_up_to_listing(G: GGraph, H: GGraph) -> Optional[Dict[int, int]]:
    """As strict_iso but listings are not required to be preserved."""
    return _iso(G, H, strict=False)
