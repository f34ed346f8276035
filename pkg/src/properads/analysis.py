"""Connectivity classes, paths/cycles/wheels, and the structural detectors
that drive the factorization theorems: closest neighbors, almost isolated
vertices, deletable vertices, disconnectable edges, and loops."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .graphs import (
    EXCEPTIONAL_EDGE,
    EXCEPTIONAL_LOOP,
    LOOP,
    ORDINARY_EDGE,
    ORDINARY_LEG,
    Edge,
    GGraph,
    GraphError,
)


class ClassViolation(GraphError):
    """A detector was called on a graph outside its stated class."""


@dataclass(frozen=True)
class InternalPath:
    """An internal path: ordered distinct ordinary edges e^1..e^r joining
    vertices v_0..v_r (distinct except possibly v_0 = v_r)."""

    edges: Tuple[Edge, ...]
    vertices: Tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_cycle(self) -> bool:
        return self.length >= 1 and self.vertices[0] == self.vertices[-1]

    def is_directed(self) -> bool:
        return all(e.tail == self.vertices[k] and e.head == self.vertices[k + 1]
                   for k, e in enumerate(self.edges))

    @property
    def is_wheel(self) -> bool:
        return self.is_cycle and self.is_directed()

    def reverse(self) -> "InternalPath":
        return InternalPath(tuple(reversed(self.edges)),
                            tuple(reversed(self.vertices)))


@dataclass(frozen=True)
class GraphClass:
    connected: bool
    wheel_free: bool
    simply_connected: bool
    unital_tree: bool
    linear: bool
    non_empty_inputs: bool
    non_empty_outputs: bool
    special: bool
    ordinary: bool

    def as_record(self) -> Dict[str, bool]:
        return {
            "connected": self.connected,
            "wheel-free": self.wheel_free,
            "simply-connected": self.simply_connected,
            "unital-tree": self.unital_tree,
            "linear": self.linear,
            "non-empty-inputs": self.non_empty_inputs,
            "non-empty-outputs": self.non_empty_outputs,
            "special": self.special,
            "ordinary": self.ordinary,
        }


def _ordinary_edges(G: GGraph) -> Tuple[Edge, ...]:
    return tuple(e for e in G.edges if e.kind in (ORDINARY_EDGE, LOOP))


def _paths_between(G: GGraph, u: str, v: str) -> List[InternalPath]:
    """All internal paths from u to v (u != v), by edge-distinct DFS."""
    out: List[InternalPath] = []
    ordinary = _ordinary_edges(G)

    def step(at: str, used: Tuple[Edge, ...], seen: Tuple[str, ...]):
        for e in ordinary:
            if e in used or e.kind == LOOP:
                continue
            if e.tail == at:
                nxt = e.head
            elif e.head == at:
                nxt = e.tail
            else:
                continue
            if nxt == v:
                out.append(InternalPath(used + (e,), seen + (nxt,)))
                continue
            if nxt in seen:
                continue
            step(nxt, used + (e,), seen + (nxt,))

    step(u, (), (u,))
    return out


def has_internal_path(G: GGraph, u: str, v: str) -> bool:
    """Undirected reachability through ordinary edges."""
    adj: Dict[str, Set[str]] = {w: set() for w in G.vertex_names}
    for e in _ordinary_edges(G):
        if e.kind == ORDINARY_EDGE:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
    todo, seen = [u], {u}
    while todo:
        w = todo.pop()
        if w == v:
            return True
        for x in adj[w]:
            if x not in seen:
                seen.add(x)
                todo.append(x)
    return False


def is_connected(G: GGraph) -> bool:
    kinds = {e.kind for e in G.edges}
    if not G.vertex_names and len(G.edges) == 1:
        if kinds in ({EXCEPTIONAL_EDGE}, {EXCEPTIONAL_LOOP}):
            return True
    if G.exceptional or not G.vertex_names:
        return False
    names = G.vertex_names
    return all(has_internal_path(G, names[0], v) for v in names[1:])


def wheels_and_cycles(G: GGraph) -> Tuple[Tuple[InternalPath, ...],
                                          Tuple[InternalPath, ...]]:
    """All cycles up to rotation and reversal, and wheels up to rotation."""
    cycles: Dict[tuple, InternalPath] = {}
    wheels: Dict[tuple, InternalPath] = {}
    ordinary = _ordinary_edges(G)

    def rotations(keys: Tuple[tuple, ...]):
        n = len(keys)
        return [keys[i:] + keys[:i] for i in range(n)]

    def record(path: InternalPath) -> None:
        keys = tuple(e.key() for e in path.edges)
        canon = min(rotations(keys) + rotations(tuple(reversed(keys))))
        cycles.setdefault(canon, path)
        if path.is_wheel:
            wkeys = tuple(e.key() for e in path.edges)
            wcanon = min(rotations(wkeys))
            wheels.setdefault(wcanon, path)
        rev = path.reverse()
        if rev.is_wheel:
            wkeys = tuple(e.key() for e in rev.edges)
            wcanon = min(rotations(wkeys))
            wheels.setdefault(wcanon, rev)

    for e in ordinary:
        if e.kind == LOOP:
            record(InternalPath((e,), (e.tail, e.tail)))

    def extend(start: str, at: str, used: Tuple[Edge, ...],
               seen: Tuple[str, ...]):
        for e in ordinary:
            if e in used or e.kind == LOOP:
                continue
            if e.tail == at:
                nxt = e.head
            elif e.head == at:
                nxt = e.tail
            else:
                continue
            if nxt == start and len(used) >= 1:
                record(InternalPath(used + (e,), seen + (nxt,)))
            elif nxt not in seen:
                extend(start, nxt, used + (e,), seen + (nxt,))

    for v in G.vertex_names:
        extend(v, v, (), (v,))
    return (tuple(cycles.values()), tuple(wheels.values()))


def has_wheel(G: GGraph) -> bool:
    if any(e.kind == LOOP for e in G.edges):
        return True
    # directed cycle detection on vertices
    adj: Dict[str, Set[str]] = {w: set() for w in G.vertex_names}
    for e in G.edges:
        if e.kind == ORDINARY_EDGE:
            adj[e.tail].add(e.head)
    color: Dict[str, int] = {}

    def dfs(v: str) -> bool:
        color[v] = 1
        for w in adj[v]:
            c = color.get(w, 0)
            if c == 1:
                return True
            if c == 0 and dfs(w):
                return True
        color[v] = 2
        return False

    return any(color.get(v, 0) == 0 and dfs(v) for v in G.vertex_names)


def is_wheel_free(G: GGraph) -> bool:
    if any(e.kind == EXCEPTIONAL_LOOP for e in G.edges):
        return False
    return not has_wheel(G)


def classify(G: GGraph) -> GraphClass:
    connected = is_connected(G)
    wheel_free = is_wheel_free(G)
    is_exc_loop = any(e.kind == EXCEPTIONAL_LOOP for e in G.edges)
    cycles, _ = wheels_and_cycles(G)
    simply = connected and not is_exc_loop and not cycles
    utree = simply and all(len(G.vout[v]) == 1 for v in G.vertex_names)
    linear = utree and all(len(G.vin[v]) == 1 for v in G.vertex_names)
    nei = all(len(G.vin[v]) > 0 for v in G.vertex_names)
    neo = all(len(G.vout[v]) > 0 for v in G.vertex_names)
    return GraphClass(
        connected=connected,
        wheel_free=wheel_free,
        simply_connected=simply,
        unital_tree=utree,
        linear=linear,
        non_empty_inputs=nei,
        non_empty_outputs=neo,
        special=nei and neo,
        ordinary=G.is_ordinary(),
    )


def require(G: GGraph, *, connected: bool = False, wheel_free: bool = False,
            ordinary: bool = False) -> GraphClass:
    cls = classify(G)
    if connected and not cls.connected:
        raise ClassViolation("graph is not connected")
    if wheel_free and not cls.wheel_free:
        raise ClassViolation("graph is not wheel-free")
    if ordinary and not cls.ordinary:
        raise ClassViolation("graph is not ordinary")
    return cls


# ---------------------------------------------------------------------------
# detectors
# ---------------------------------------------------------------------------


def _directed_path_exists_via_third(G: GGraph, u: str, v: str) -> bool:
    """Is there a directed path u -> .. -> v through at least one other vertex?"""
    adj: Dict[str, Set[str]] = {w: set() for w in G.vertex_names}
    for e in G.edges:
        if e.kind == ORDINARY_EDGE:
            adj[e.tail].add(e.head)
    for mid in adj[u]:
        if mid in (u, v):
            continue
        todo, seen = [mid], {mid}
        while todo:
            w = todo.pop()
            if w == v:
                return True
            for x in adj[w]:
                if x not in seen:
                    seen.add(x)
                    todo.append(x)
    return False


def closest_neighbors(G: GGraph) -> FrozenSet[FrozenSet[str]]:
    """Unordered pairs sharing an ordinary edge with no third-vertex directed
    path between them in either direction."""
    require(G, connected=True, wheel_free=True)
    pairs: Set[FrozenSet[str]] = set()
    for e in G.edges:
        if e.kind != ORDINARY_EDGE:
            continue
        u, v = e.tail, e.head
        if _directed_path_exists_via_third(G, u, v):
            continue
        if _directed_path_exists_via_third(G, v, u):
            continue
        pairs.add(frozenset((u, v)))
    return frozenset(pairs)


def is_weakly_initial(G: GGraph, v: str) -> bool:
    return all(e.tail == v for e in G.adjacent_ordinary_edges(v))


def is_weakly_terminal(G: GGraph, v: str) -> bool:
    return all(e.head == v for e in G.adjacent_ordinary_edges(v))


def is_extremal(G: GGraph, v: str) -> bool:
    return is_weakly_initial(G, v) or is_weakly_terminal(G, v)


def delete_vertex(G: GGraph, v: str) -> GGraph:
    """Delete the cell v; ordinary edges into v lose their v-side flag and
    the surviving flag becomes a leg."""
    from .graphs import validate

    dead = set(G.vmap[v])
    flags = [x for x in G.flags if x not in dead]
    iota = {}
    for x in flags:
        ix = G.iota_map[x]
        iota[x] = x if ix in dead else ix
    g_in = [x for x in flags if iota[x] == x and G.dir_map[x] == 1]
    g_out = [x for x in flags if iota[x] == x and G.dir_map[x] == -1]
    names = [n for n in G.vertex_names if n != v]
    return validate(
        flags=flags,
        vertex_flags={n: G.vmap[n] for n in names},
        exceptional=G.exceptional,
        iota=iota,
        pi=G.pi_map,
        coloring={x: G.color_map[x] for x in flags},
        direction={x: G.dir_map[x] for x in flags},
        v_in={n: G.vin[n] for n in names},
        v_out={n: G.vout[n] for n in names},
        g_in=tuple(sorted(g_in)),
        g_out=tuple(sorted(g_out)),
    )


def almost_isolated(G: GGraph) -> FrozenSet[str]:
    """Extremal vertices whose deletion leaves a connected wheel-free graph;
    every vertex when there is only one."""
    require(G, connected=True, wheel_free=True)
    if G.n_vertices == 0:
        return frozenset()
    if G.n_vertices == 1:
        return frozenset(G.vertex_names)
    found = set()
    for v in G.vertex_names:
        if not is_extremal(G, v):
            continue
        Gv = delete_vertex(G, v)
        cls = classify(Gv)
        if cls.connected and cls.wheel_free:
            found.add(v)
    return frozenset(found)


def maximal_extremal_path(G: GGraph) -> InternalPath:
    """A maximal extremal path; its end vertices are almost isolated."""
    require(G, connected=True, wheel_free=True)
    if G.n_vertices < 2:
        raise ClassViolation("a maximal extremal path needs >= 2 vertices")
    best: Optional[InternalPath] = None
    # enumerate all trails with distinct vertices, keep extremal maximal ones
    ordinary = _ordinary_edges(G)

    def consider(p: InternalPath) -> None:
        nonlocal best
        if p.vertices[0] == p.vertices[-1]:
            return
        if not (is_extremal(G, p.vertices[0]) and is_extremal(G, p.vertices[-1])):
            return
        if best is None or p.length > best.length:
            best = p

    def extend(at: str, used: Tuple[Edge, ...], seen: Tuple[str, ...]):
        if used:
            consider(InternalPath(used, seen))
        for e in ordinary:
            if e in used or e.kind == LOOP:
                continue
            if e.tail == at:
                nxt = e.head
            elif e.head == at:
                nxt = e.tail
            else:
                continue
            if nxt in seen:
                continue
            extend(nxt, used + (e,), seen + (nxt,))

    for v in G.vertex_names:
        extend(v, (), (v,))
    if best is None:
        raise ClassViolation("no extremal path found")
    # maximality: no extremal path properly contains the found one; the
    # longest extremal path is maximal since containment increases length
    ai = almost_isolated(G)
    if best.vertices[0] not in ai or best.vertices[-1] not in ai:
        raise AssertionError("end vertices of a maximal extremal path "
                             "must be almost isolated")
    return best


def deletable_vertices(G: GGraph) -> FrozenSet[str]:
    """Loop-free vertices adjacent to exactly one internal edge, or the unique
    vertex of a (permuted) corolla with at least one leg."""
    require(G, connected=True)
    out = set()
    if (G.n_vertices == 1 and not G.internal_edges
            and (G.g_in or G.g_out)):
        return frozenset(G.vertex_names)
    for v in G.vertex_names:
        adjacent = [e for e in G.internal_edges
                    if v in (e.tail, e.head)]
        if any(e.kind == LOOP for e in adjacent):
            continue
        if len(adjacent) == 1:
            out.add(v)
    return frozenset(out)


def disconnectable_edges(G: GGraph) -> FrozenSet[Edge]:
    """Internal edges lying on a cycle (loops always do), plus the edge of the
    exceptional loop."""
    require(G, connected=True)
    out: Set[Edge] = set()
    for e in G.edges:
        if e.kind == EXCEPTIONAL_LOOP:
            out.add(e)
        elif e.kind == LOOP:
            out.add(e)
        elif e.kind == ORDINARY_EDGE:
            # a path between endpoints avoiding e
            u, v = e.tail, e.head
            if any(e not in p.edges for p in _paths_between(G, u, v)):
                out.add(e)
    return frozenset(out)


def edges_on_cycles(G: GGraph) -> FrozenSet[Edge]:
    """Independent oracle: the internal edges appearing on some cycle."""
    cycles, _ = wheels_and_cycles(G)
    out: Set[Edge] = set()
    for c in cycles:
        out.update(c.edges)
    out |= {e for e in G.edges if e.kind == EXCEPTIONAL_LOOP}
    return frozenset(out)


def loops(G: GGraph) -> FrozenSet[Tuple[str, Edge]]:
    return frozenset((e.tail, e) for e in G.edges if e.kind == LOOP)


@dataclass(frozen=True)
class LinearBranch:
    """A branch between two edges whose interior vertices all have arity (1;1),
    oriented from the first edge toward the last."""

    edges: Tuple[Edge, ...]
    vertices: Tuple[str, ...]


def linear_branch(G: GGraph, a: Edge, b: Edge) -> Optional[LinearBranch]:
    """The linear branch with end edges a and b, if one exists."""
    if a == b:
        raise GraphError("edges must be distinct")

    def interior_ok(v: str) -> bool:
        return G.vertex_arity(v) == (1, 1)

    # a lane: e^1 .. e^r with interior vertices v_1..v_{r-1}; linear branch
    # orientation: e^j runs v_{j-1} -> v_j, e^1 ends at v_1, e^r starts at
    # v_{r-1}.
    def targets(e: Edge):
        if e.kind == ORDINARY_EDGE:
            return e.head
        if e.kind == ORDINARY_LEG:
            # a leg enters its vertex only when it is an input flag
            x = next(iter(e.flags))
            return e.at if G.dir_map[x] == 1 else None
        return None

    for first, last in ((a, b), (b, a)):
        v1 = targets(first)
        if v1 is None or not interior_ok(v1):
            continue
        # walk forward through (1;1) vertices
        chain_edges = [first]
        chain_vertices = [v1]
        current = v1
        found = False
        while True:
            out_flag = G.vout[current][0]
            e = G.edge_of_flag[out_flag]
            chain_edges.append(e)
            if e == last:
                found = True
                break
            if e.kind != ORDINARY_EDGE or e.tail != current:
                break
            nxt = e.head
            if nxt in chain_vertices or not interior_ok(nxt):
                break
            chain_vertices.append(nxt)
            current = nxt
        if found and len(chain_edges) >= 2:
            return LinearBranch(tuple(chain_edges), tuple(chain_vertices))
    return None
