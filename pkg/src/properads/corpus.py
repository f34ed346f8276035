"""Deterministic corpora of one-colored connected graphs up to listing.

Wheel-free graphs are grown from corollas by splitting a vertex across a
partially grafted corollas; general connected graphs additionally connect an
input leg to an output leg (which creates loops, cycles, and wheels).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import analysis
from .graphs import (
    DEFAULT_COLOR,
    GGraph,
    corolla_mn,
    exceptional_edge,
    exceptional_loop,
    make_graph,
)


@dataclass(frozen=True)
class CorpusBounds:
    max_vertices: int
    max_internal_edges: int
    max_legs: int
    wheeled: bool = False

    def admits(self, sig: "GraphSig") -> bool:
        return (len(sig.arities) <= self.max_vertices
                and sig.edge_count <= self.max_internal_edges
                and sig.leg_count <= self.max_legs)


@dataclass(frozen=True)
class GraphSig:
    """A one-colored connected graph up to all listings: vertex leg counts
    plus a directed adjacency multiset."""

    arities: Tuple[Tuple[int, int], ...]  # per vertex: (input legs, output legs)
    adjacency: Tuple[Tuple[int, int, int], ...]  # (tail, head, multiplicity)

    @property
    def edge_count(self) -> int:
        return sum(m for _, _, m in self.adjacency)

    @property
    def leg_count(self) -> int:
        return sum(a + b for a, b in self.arities)

    def canonical(self) -> "GraphSig":
        n = len(self.arities)
        best = None
        for perm in itertools.permutations(range(n)):
            inv = {v: k for k, v in enumerate(perm)}
            ar = tuple(self.arities[perm[k]] for k in range(n))
            adj = tuple(sorted((inv[t], inv[h], m)
                               for (t, h, m) in self.adjacency))
            cand = (ar, adj)
            if best is None or cand < best:
                best = cand
        return GraphSig(best[0], best[1])


def sig_to_graph(sig: GraphSig) -> GGraph:
    """Materialize a signature as a concrete one-colored graph."""
    n = len(sig.arities)
    nxt = 0
    vertices: Dict[str, dict] = {}
    ins: Dict[int, List[int]] = {k: [] for k in range(n)}
    outs: Dict[int, List[int]] = {k: [] for k in range(n)}
    iota: Dict[int, int] = {}
    g_in: List[int] = []
    g_out: List[int] = []
    for (t, h, m) in sorted(sig.adjacency):
        for _ in range(m):
            a, b = nxt, nxt + 1
            nxt += 2
            outs[t].append(a)
            ins[h].append(b)
            iota[a] = b
            iota[b] = a
    for k, (li, lo) in enumerate(sig.arities):
        for _ in range(li):
            ins[k].append(nxt)
            g_in.append(nxt)
            nxt += 1
        for _ in range(lo):
            outs[k].append(nxt)
            g_out.append(nxt)
            nxt += 1
    for k in range(n):
        vertices[f"v{k}"] = {"in": tuple(sorted(ins[k])),
                             "out": tuple(sorted(outs[k]))}
    return make_graph(vertices, iota=iota, g_in=tuple(sorted(g_in)),
                      g_out=tuple(sorted(g_out)))


def _connected(sig: GraphSig) -> bool:
    n = len(sig.arities)
    if n <= 1:
        return True
    adj: Dict[int, Set[int]] = {k: set() for k in range(n)}
    for (t, h, _) in sig.adjacency:
        adj[t].add(h)
        adj[h].add(t)
    seen = {0}
    todo = [0]
    while todo:
        a = todo.pop()
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return len(seen) == n


def _wheel_free(sig: GraphSig) -> bool:
    if any(t == h for (t, h, _) in sig.adjacency):
        return False
    n = len(sig.arities)
    adj: Dict[int, Set[int]] = {k: set() for k in range(n)}
    for (t, h, _) in sig.adjacency:
        adj[t].add(h)
    color: Dict[int, int] = {}

    def dfs(v: int) -> bool:
        color[v] = 1
        for w in adj[v]:
            c = color.get(w, 0)
            if c == 1 or (c == 0 and dfs(w)):
                return True
        color[v] = 2
        return False

    return not any(color.get(v, 0) == 0 and dfs(v) for v in range(n))


def _splits(sig: GraphSig, bounds: CorpusBounds) -> Iterable[GraphSig]:
    """All ways to split one vertex across alpha new bottom-to-top edges."""
    n = len(sig.arities)
    max_alpha = bounds.max_internal_edges - sig.edge_count
    if n + 1 > bounds.max_vertices or max_alpha < 1:
        return
    for v in range(n):
        li, lo = sig.arities[v]
        incident = []
        for (t, h, m) in sig.adjacency:
            if t == v or h == v:
                incident.append((t, h, m))
        # distribute: each leg group and each incident edge bundle splits
        # between bottom (new index v) and top (new index n)
        leg_in_opts = [(a, li - a) for a in range(li + 1)]
        leg_out_opts = [(a, lo - a) for a in range(lo + 1)]
        bundle_opts = []
        for (t, h, m) in incident:
            if t == v and h == v:
                # a loop splits (bottom loop, top loop, bottom->top)
                opts = []
                for bb in range(m + 1):
                    for tt in range(m - bb + 1):
                        ct = m - bb - tt
                        opts.append((bb, tt, ct))
                bundle_opts.append(((t, h, m), opts))
            else:
                opts = [(a, m - a) for a in range(m + 1)]
                bundle_opts.append(((t, h, m), opts))
        for alpha in range(1, max_alpha + 1):
            for lin in leg_in_opts:
                for lout in leg_out_opts:
                    for combo in itertools.product(
                            *(opts for _, opts in bundle_opts)):
                        yield from _build_split(
                            sig, v, n, alpha, lin, lout,
                            [b for b, _ in bundle_opts], combo, bounds)


def _build_split(sig, v, top, alpha, lin, lout, bundles, combo, bounds):
    n = len(sig.arities)
    arities = list(sig.arities)
    arities[v] = (lin[0], lout[0])
    arities.append((lin[1], lout[1]))
    adj: Dict[Tuple[int, int], int] = {}
    for (t, h, m) in sig.adjacency:
        if t != v and h != v:
            adj[(t, h)] = adj.get((t, h), 0) + m
    for (t, h, m), pick in zip(bundles, combo):
        if t == v and h == v:
            bb, tt, ct = pick
            if bb:
                adj[(v, v)] = adj.get((v, v), 0) + bb
            if tt:
                adj[(top, top)] = adj.get((top, top), 0) + tt
            if ct:
                adj[(v, top)] = adj.get((v, top), 0) + ct
        elif t == v:
            stay, move = pick
            if stay:
                adj[(v, h)] = adj.get((v, h), 0) + stay
            if move:
                adj[(top, h)] = adj.get((top, h), 0) + move
        else:
            stay, move = pick
            if stay:
                adj[(t, v)] = adj.get((t, v), 0) + stay
            if move:
                adj[(t, top)] = adj.get((t, top), 0) + move
    adj[(v, top)] = adj.get((v, top), 0) + alpha
    out = GraphSig(tuple(arities),
                   tuple(sorted((t, h, m) for (t, h), m in adj.items())))
    if bounds.admits(out):
        yield out


def _connects(sig: GraphSig, bounds: CorpusBounds) -> Iterable[GraphSig]:
    """All ways to join one input leg to one output leg (wheeled only)."""
    if sig.edge_count + 1 > bounds.max_internal_edges:
        return
    n = len(sig.arities)
    for vi in range(n):
        for vo in range(n):
            li, _ = sig.arities[vi]
            _, lo = sig.arities[vo]
            if li < 1 or lo < 1:
                continue
            arities = list(sig.arities)
            arities[vi] = (arities[vi][0] - 1, arities[vi][1])
            arities[vo] = (arities[vo][0], arities[vo][1] - 1)
            adj: Dict[Tuple[int, int], int] = {}
            for (t, h, m) in sig.adjacency:
                adj[(t, h)] = adj.get((t, h), 0) + m
            adj[(vo, vi)] = adj.get((vo, vi), 0) + 1
            out = GraphSig(tuple(arities), tuple(sorted(
                (t, h, m) for (t, h), m in adj.items())))
            if bounds.admits(out):
                yield out


def generate_corpus(max_vertices: int, max_internal_edges: int,
                    max_legs: int, wheeled: bool = False) -> List[GGraph]:
    """Every connected (wheel-free) one-colored graph within the bounds, up
    to listing-forgetting isomorphism, deterministically ordered.

    The zero-vertex graphs (the exceptional edge and, in the wheeled case,
    the exceptional loop) are included.
    """
    bounds = CorpusBounds(max_vertices, max_internal_edges, max_legs, wheeled)
    seeds = []
    for li in range(max_legs + 1):
        for lo in range(max_legs - li + 1):
            seeds.append(GraphSig(((li, lo),), ()))
    seen: Set[GraphSig] = set()
    todo: List[GraphSig] = []
    for s in seeds:
        c = s.canonical()
        if c not in seen:
            seen.add(c)
            todo.append(c)
    accepted: List[GraphSig] = []
    while todo:
        sig = todo.pop()
        ok = _connected(sig) and (wheeled or _wheel_free(sig))
        if ok:
            accepted.append(sig)
        moves = list(_splits(sig, bounds))
        if wheeled:
            moves.extend(_connects(sig, bounds))
        for nxt in moves:
            c = nxt.canonical()
            if c in seen:
                continue
            seen.add(c)
            if not wheeled and not _wheel_free(c):
                continue
            todo.append(c)

    accepted.sort(key=lambda s: (len(s.arities), s.edge_count,
                                 s.arities, s.adjacency))
    graphs = [sig_to_graph(s) for s in accepted]
    out = [exceptional_edge(DEFAULT_COLOR)]
    if wheeled:
        out.append(exceptional_loop(DEFAULT_COLOR))
    out.extend(graphs)
    return out


def corpus_name(k: int, G: GGraph) -> str:
    tag = "g"
    if G.n_vertices == 0:
        tag = "x"
    return f"{tag}{k:03d}-v{G.n_vertices}e{len(G.internal_edges)}"
