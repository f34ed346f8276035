"""Tensor products of free (wheeled) properads: smash products of generating
objects, generating distributivity relations, finite presentations, and
explicit step-by-step distributivity decompositions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .decorated import DecoratedGraph, DecorationError, corolla_element
from .finprop import FinitePropad, PropadError
from .graphs import GGraph, GraphError


class TensorError(GraphError):
    pass


@dataclass(frozen=True)
class SmashElement:
    """p (x) d or c (x) q: a generator of the smash product."""

    side: str  # "pd" or "cq"
    generator: Hashable
    color: Hashable
    ins: Tuple[Tuple[Hashable, Hashable], ...]
    outs: Tuple[Tuple[Hashable, Hashable], ...]

    def label(self) -> str:
        if self.side == "pd":
            return f"{self.generator}(x){self.color}"
        return f"{self.color}(x){self.generator}"


@dataclass(frozen=True)
class GeneratingObject:
    """A colored generating set: elements with fixed in/out color profiles."""

    colors: Tuple[Hashable, ...]
    elements: Tuple[Tuple[Hashable, Tuple[Hashable, ...],
                          Tuple[Hashable, ...]], ...]

    def is_special(self) -> bool:
        return all(ins and outs for _, ins, outs in self.elements)


def generating_object_of_graph(G: GGraph) -> GeneratingObject:
    """The generating object of a graphical properad: vertices with their
    edge profiles."""
    elements = []
    for v in G.vertex_names:
        elements.append((v, G.in_edges(v), G.out_edges(v)))
    return GeneratingObject(tuple(G.edges), tuple(elements))


@dataclass(frozen=True)
class SmashObject:
    colors: Tuple[Tuple[Hashable, Hashable], ...]
    elements: Tuple[SmashElement, ...]


def smash(A: GeneratingObject, B: GeneratingObject) -> SmashObject:
    """A wedge B: elements p(x)d for p in A, d a B-color, and c(x)q."""
    colors = tuple((c, d) for c in A.colors for d in B.colors)
    elements: List[SmashElement] = []
    for (p, ins, outs) in A.elements:
        for d in B.colors:
            elements.append(SmashElement(
                "pd", p, d,
                tuple((c, d) for c in ins),
                tuple((c, d) for c in outs)))
    for c in A.colors:
        for (q, ins, outs) in B.elements:
            elements.append(SmashElement(
                "cq", q, c,
                tuple((c, d) for d in ins),
                tuple((c, d) for d in outs)))
    return SmashObject(colors, tuple(elements))


@dataclass(frozen=True)
class Relation:
    """One generating distributivity relation: two decorated graphs with
    equal input/output color multisets (the stated block permutations
    relate their orders)."""

    p: Hashable
    q: Hashable
    left: DecoratedGraph
    right: DecoratedGraph


def _pd(smashed: SmashObject, p, d) -> SmashElement:
    return next(e for e in smashed.elements
                if e.side == "pd" and e.generator == p and e.color == d)


def _cq(smashed: SmashObject, c, q) -> SmashElement:
    return next(e for e in smashed.elements
                if e.side == "cq" and e.generator == q and e.color == c)


def distributivity_sides(A: GeneratingObject, B: GeneratingObject,
                         smashed: SmashObject, p_entry, q_entry
                         ) -> Tuple[DecoratedGraph, DecoratedGraph]:
    """The two sides of the (p, q) distributivity relation as decorated
    graphs over the smash generators, including the degenerate shapes when
    some of the four arities vanish."""
    p, a_in, b_out = p_entry
    q, c_in, d_out = q_entry
    k, l = len(a_in), len(b_out)
    m, n = len(c_in), len(d_out)
    if (k, l) == (0, 0) or (m, n) == (0, 0):
        raise TensorError("distributivity needs generators with flags")
    # degenerate constraints
    if k == 0 and n != 1:
        raise TensorError("k = 0 requires n = 1")
    if n == 0 and k != 1:
        raise TensorError("n = 0 requires k = 1")
    if l == 0 and m != 1:
        raise TensorError("l = 0 requires m = 1")
    if m == 0 and l != 1:
        raise TensorError("m = 0 requires l = 1")

    def bipartite(tops: List[SmashElement], bots: List[SmashElement],
                  top_in_colors, bot_out_colors) -> DecoratedGraph:
        """bots below tops, the r-th output of bot i wired to the i-th input
        of top r (the complete bipartite pattern of distributivity)."""
        n_top, n_bot = len(tops), len(bots)
        decorations = tuple(tops + bots)
        ins = tuple(e.ins for e in decorations)
        outs = tuple(e.outs for e in decorations)
        edges = []
        for i in range(n_bot):
            for r in range(n_top):
                edges.append(((n_top + i, bot_out_colors(i, r)),
                              (r, top_in_colors(r, i))))
        used_in = {e[1] for e in edges}
        used_out = {e[0] for e in edges}
        inputs = tuple((inst, s) for inst in range(len(decorations))
                       for s in range(len(ins[inst]))
                       if (inst, s) not in used_in)
        outputs = tuple((inst, s) for inst in range(len(decorations))
                        for s in range(len(outs[inst]))
                        if (inst, s) not in used_out)
        return DecoratedGraph(decorations, ins, outs,
                              tuple(sorted(edges)), inputs, outputs).check()

    # left side: p(x)d_j on top (one per output of q), a_i(x)q below
    tops = [_pd(smashed, p, d_out[j]) for j in range(n)]
    bots = [_cq(smashed, a_in[i], q) for i in range(k)]
    left = bipartite(tops, bots,
                     top_in_colors=lambda r, i: i,
                     bot_out_colors=lambda i, r: r)
    # right side: b_j(x)q on top (one per output of p), p(x)c_i below
    tops2 = [_cq(smashed, b_out[j], q) for j in range(l)]
    bots2 = [_pd(smashed, p, c_in[i]) for i in range(m)]
    right = bipartite(tops2, bots2,
                      top_in_colors=lambda r, i: i,
                      bot_out_colors=lambda i, r: r)
    return left, right


def generating_distributivity(A: GeneratingObject, B: GeneratingObject
                              ) -> List[Relation]:
    """One relation per generator pair; both objects must be special."""
    if not A.is_special() or not B.is_special():
        raise TensorError("generating distributivity requires special "
                          "generating objects")
    smashed = smash(A, B)
    out = []
    for p_entry in A.elements:
        for q_entry in B.elements:
            left, right = distributivity_sides(A, B, smashed, p_entry,
                                               q_entry)
            out.append(Relation(p_entry[0], q_entry[0], left, right))
    return out


@dataclass(frozen=True)
class Presentation:
    generators: SmashObject
    relations: Tuple[Relation, ...]


def tensor_presentation(G: GGraph, H: GGraph) -> Presentation:
    """The finite presentation of the tensor product of two graphical
    properads with special shapes."""
    from . import analysis

    for X in (G, H):
        cls = analysis.classify(X)
        if not (cls.connected and cls.special):
            raise TensorError("tensor presentation needs special connected "
                              "shapes")
    A = generating_object_of_graph(G)
    B = generating_object_of_graph(H)
    smashed = smash(A, B)
    relations = tuple(generating_distributivity(A, B))
    return Presentation(smashed, relations)


# ---------------------------------------------------------------------------
# the map-out characterization
# ---------------------------------------------------------------------------


def extends_to_tensor(A: GeneratingObject, B: GeneratingObject,
                      target: FinitePropad,
                      color_map: Dict[Tuple[Hashable, Hashable], Hashable],
                      element_map: Dict[str, Hashable]) -> bool:
    """Does a generator assignment extend to the tensor product?  True iff
    every generating distributivity holds in the target under evaluation.

    ``element_map`` is keyed by SmashElement.label().
    """
    smashed = smash(A, B)
    for rel in generating_distributivity(A, B):
        vals = {}
        for side_graph in (rel.left, rel.right):
            decorated = DecoratedGraph(
                decorations=tuple(element_map[e.label()]
                                  for e in side_graph.decorations),
                ins=tuple(tuple(color_map[c] for c in t)
                          for t in side_graph.ins),
                outs=tuple(tuple(color_map[c] for c in t)
                           for t in side_graph.outs),
                edges=side_graph.edges,
                inputs=side_graph.inputs,
                outputs=side_graph.outputs,
            )
            # align boundary orders between the two sides by color multiset:
            # evaluate with boundary sorted canonically
            decorated = decorated.relist(
                tuple(sorted(decorated.inputs,
                             key=lambda p: (repr(decorated.ins[p[0]][p[1]]),
                                            p))),
                tuple(sorted(decorated.outputs,
                             key=lambda p: (repr(decorated.outs[p[0]][p[1]]),
                                            p))),
            )
            vals[id(side_graph)] = target.evaluate(decorated)
        if vals[id(rel.left)] != vals[id(rel.right)]:
            return False
    return True


# ---------------------------------------------------------------------------
# mn-step decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteStep:
    """One application of a generating relation inside a decorated graph."""

    p: Hashable
    q: Hashable
    before: DecoratedGraph
    after: DecoratedGraph


@dataclass(frozen=True)
class RewriteChain:
    start: DecoratedGraph
    steps: Tuple[RewriteStep, ...]

    @property
    def end(self) -> DecoratedGraph:
        return self.steps[-1].after if self.steps else self.start


def _shape_edges(D: DecoratedGraph):
    """Edges of a decorated shape with top/bottom instance indices: internal
    edges, input legs, and output legs, each tagged with its color.

    Returns a list of (edge id, color, bottom, top); bottom/top is None at
    the boundary.
    """
    out = []
    for k, (o, ip) in enumerate(D.edges):
        out.append((("e", k), D.outs[o[0]][o[1]], o, ip))
    for k, (i, s) in enumerate(D.inputs):
        out.append((("in", k), D.ins[i][s], None, (i, s)))
    for k, (i, s) in enumerate(D.outputs):
        out.append((("out", k), D.outs[i][s], (i, s), None))
    return out


def _topo_order(D: DecoratedGraph) -> List[int]:
    n = D.n_instances
    preds = {i: set() for i in range(n)}
    for (o, ip) in D.edges:
        if o[0] != ip[0]:
            preds[ip[0]].add(o[0])
    order = []
    left = {i: set(p) for i, p in preds.items()}
    ready = sorted(i for i in range(n) if not left[i])
    while ready:
        i = ready.pop(0)
        order.append(i)
        for j in range(n):
            if i in left[j]:
                left[j].discard(i)
                if not left[j] and j not in order and j not in ready:
                    ready.append(j)
        ready.sort()
    if len(order) != n:
        raise TensorError("decorated shapes must be wheel-free")
    return order


def _grid_state(smashed: SmashObject, P: DecoratedGraph, Q: DecoratedGraph,
                flipped: set) -> DecoratedGraph:
    """The mixed element of the smash-generated free properad determined by
    a set of flipped (p-instance, q-instance) cells.

    With no cell flipped this is the expanded left side of the (P, Q)
    distributivity; with every cell flipped, the expanded right side.  A
    present row copy ``p_v (x) f`` pairs a P-instance with a Q-shape edge;
    a column copy ``e (x) q_u`` pairs a P-shape edge with a Q-instance.
    """
    p_edges = _shape_edges(P)
    q_edges = _shape_edges(Q)

    instances: List[Tuple] = []
    element_of: List[SmashElement] = []

    def present_row(v: int, fid, fbot, ftop) -> bool:
        top_ok = ftop is None or (v, ftop[0]) in flipped
        bot_ok = fbot is None or (v, fbot[0]) not in flipped
        return top_ok and bot_ok

    def present_col(eid, ebot, etop, u: int) -> bool:
        bot_ok = ebot is None or (ebot[0], u) in flipped
        top_ok = etop is None or (etop[0], u) not in flipped
        return bot_ok and top_ok

    row_index: Dict[Tuple, int] = {}
    col_index: Dict[Tuple, int] = {}
    for v in range(P.n_instances):
        for (fid, fcol, fbot, ftop) in q_edges:
            if present_row(v, fid, fbot, ftop):
                row_index[(v, fid)] = len(instances)
                el = _pd(smashed, P.decorations[v], fcol)
                instances.append(("row", v, fid))
                element_of.append(el)
    for (eid, ecol, ebot, etop) in p_edges:
        for u in range(Q.n_instances):
            if present_col(eid, ebot, etop, u):
                col_index[(eid, u)] = len(instances)
                el = _cq(smashed, ecol, Q.decorations[u])
                instances.append(("col", eid, u))
                element_of.append(el)

    edges: List[Tuple] = []
    # vertical edges inside a row lane: a P-internal edge between two row
    # copies sharing the same Q-edge
    for k, (o, ip) in enumerate(P.edges):
        for (fid, _, fbot, ftop) in q_edges:
            a = row_index.get((o[0], fid))
            b = row_index.get((ip[0], fid))
            if a is not None and b is not None:
                edges.append(((a, o[1]), (b, ip[1])))
    # horizontal edges inside a column lane: a Q-internal edge between two
    # column copies sharing the same P-edge
    for k, (o, ip) in enumerate(Q.edges):
        for (eid, _, _, _) in p_edges:
            a = col_index.get((eid, o[0]))
            b = col_index.get((eid, ip[0]))
            if a is not None and b is not None:
                edges.append(((a, o[1]), (b, ip[1])))
    # interface edges
    for (eid, ecol, ebot, etop) in p_edges:
        for (fid, fcol, fbot, ftop) in q_edges:
            # unflipped: column copy (e, bottom(f)) feeds row copy
            # (top(e), f)
            if etop is not None and fbot is not None and \
                    (etop[0], fbot[0]) not in flipped:
                a = col_index.get((eid, fbot[0]))
                b = row_index.get((etop[0], fid))
                if a is not None and b is not None:
                    edges.append(((a, fbot[1]), (b, etop[1])))
            # flipped: row copy (bottom(e), f) feeds column copy (e, top(f))
            if ebot is not None and ftop is not None and \
                    (ebot[0], ftop[0]) in flipped:
                a = row_index.get((ebot[0], fid))
                b = col_index.get((eid, ftop[0]))
                if a is not None and b is not None:
                    edges.append(((a, ebot[1]), (b, ftop[1])))

    used_in = {e[1] for e in edges}
    used_out = {e[0] for e in edges}
    ins = tuple(el.ins for el in element_of)
    outs = tuple(el.outs for el in element_of)
    inputs = tuple((i, s) for i in range(len(instances))
                   for s in range(len(ins[i])) if (i, s) not in used_in)
    outputs = tuple((i, s) for i in range(len(instances))
                    for s in range(len(outs[i])) if (i, s) not in used_out)
    return DecoratedGraph(
        decorations=tuple(element_of),
        ins=ins,
        outs=outs,
        edges=tuple(sorted(edges)),
        inputs=inputs,
        outputs=outputs,
    ).check()


def distributivity_decompose(A: GeneratingObject, B: GeneratingObject,
                             p_graph: DecoratedGraph,
                             q_graph: DecoratedGraph,
                             max_size: int = 3) -> RewriteChain:
    """The chain of generating rewrites from the left side of the (p, q)
    distributivity to the right side; its length is |Vt(p)| * |Vt(q)|.

    Cells flip row by row (rows in topological order of p's shape) and,
    within a row, against q's instances in reverse topological order; each
    flip is one generating distributivity application.
    """
    if p_graph.exc is not None or q_graph.exc is not None:
        # tensoring with a unit: distributivity is the unit axiom
        return RewriteChain(start=None, steps=())
    if p_graph.n_instances > max_size or q_graph.n_instances > max_size:
        raise TensorError("desk-scale bound exceeded")
    for D, O in ((p_graph, A), (q_graph, B)):
        for i in range(D.n_instances):
            if not D.ins[i] or not D.outs[i]:
                raise TensorError("decomposition requires special decorated "
                                  "graphs")
    smashed = smash(A, B)
    rows = _topo_order(p_graph)
    cols = list(reversed(_topo_order(q_graph)))
    flipped: set = set()
    current = _grid_state(smashed, p_graph, q_graph, flipped)
    start = current
    steps: List[RewriteStep] = []
    for v in rows:
        for u in cols:
            flipped.add((v, u))
            nxt = _grid_state(smashed, p_graph, q_graph, set(flipped))
            steps.append(RewriteStep(
                p=p_graph.decorations[v],
                q=q_graph.decorations[u],
                before=current,
                after=nxt,
            ))
            current = nxt
    return RewriteChain(start=start, steps=tuple(steps))
