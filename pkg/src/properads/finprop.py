"""Finite biased (wheeled) properads over sets.

A finite properad is specified by its colors, finite components, units, and
an evaluator for decorated graphs; evaluation subsumes the bimodule actions,
units, and all (wheeled) compositions, and its well-definedness under
decomposition order is what the axiom checker verifies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .decorated import DecoratedGraph, corolla_element
from .graphs import GraphError


class PropadError(GraphError):
    pass


class FinitePropad:
    """Interface: colors, components, units, and graph evaluation."""

    colors: Tuple[Hashable, ...]
    wheeled: bool = False
    name: str = "propad"

    def components(self, ins: Tuple, outs: Tuple) -> Tuple:
        raise NotImplementedError

    def unit(self, c: Hashable):
        raise NotImplementedError

    def evaluate(self, D: DecoratedGraph):
        """Evaluate a decorated graph whose edge colors are this properad's
        colors and whose decorations are elements; the result lies in the
        component of D's boundary profile."""
        raise NotImplementedError

    # -- derived operations ------------------------------------------------

    def act(self, sigma: Sequence[int], p, tau: Sequence[int],
            ins: Tuple, outs: Tuple):
        """The bimodule action sigma p tau, computed by relisting a corolla."""
        el = corolla_element(p, ins, outs)
        new_in = tuple(el.inputs[tau[k]] for k in range(len(ins)))
        new_out = [None] * len(outs)
        for j in range(len(outs)):
            new_out[invert(sigma)[j]] = el.outputs[j]
        return self.evaluate(el.relist(new_in, tuple(new_out)))

    def boxtimes(self, p, p_ins, p_outs, q, q_ins, q_outs,
                 out_start: int, in_start: int, k: int):
        """p over q along the k-segment of q's outputs starting at
        ``out_start`` glued to the k-segment of p's inputs at ``in_start``
        (0-indexed)."""
        if k <= 0:
            raise PropadError("properadic composition needs k >= 1")
        top = 0
        bot = 1
        edges = []
        for t in range(k):
            if q_outs[out_start + t] != p_ins[in_start + t]:
                raise PropadError("segment colors do not match")
            edges.append(((bot, out_start + t), (top, in_start + t)))
        inputs = tuple((top, s) for s in range(in_start)) + \
            tuple((bot, s) for s in range(len(q_ins))) + \
            tuple((top, s) for s in range(in_start + k, len(p_ins)))
        outputs = tuple((bot, s) for s in range(out_start)) + \
            tuple((top, s) for s in range(len(p_outs))) + \
            tuple((bot, s) for s in range(out_start + k, len(q_outs)))
        D = DecoratedGraph(
            decorations=(p, q),
            ins=(tuple(p_ins), tuple(q_ins)),
            outs=(tuple(p_outs), tuple(q_outs)),
            edges=tuple(edges),
            inputs=inputs,
            outputs=outputs,
        ).check(wheeled=self.wheeled)
        return self.evaluate(D)

    def dioperadic(self, p, p_ins, p_outs, q, q_ins, q_outs,
                   i: int, j: int):
        """q's i-th output into p's j-th input (0-indexed)."""
        return self.boxtimes(p, p_ins, p_outs, q, q_ins, q_outs, i, j, 1)

    def contract(self, p, p_ins, p_outs, i: int, j: int):
        """Contract p's i-th output against its j-th input (0-indexed)."""
        if not self.wheeled:
            raise PropadError("contraction needs a wheeled properad")
        if p_outs[i] != p_ins[j]:
            raise PropadError("contraction colors do not match")
        D = DecoratedGraph(
            decorations=(p,),
            ins=(tuple(p_ins),),
            outs=(tuple(p_outs),),
            edges=(((0, i), (0, j)),),
            inputs=tuple((0, s) for s in range(len(p_ins)) if s != j),
            outputs=tuple((0, s) for s in range(len(p_outs)) if s != i),
        ).check(wheeled=True)
        return self.evaluate(D)


def invert(perm: Sequence[int]) -> Dict[int, int]:
    return {v: k for k, v in enumerate(perm)}


class MonoidPropad(FinitePropad):
    """Every component is a fixed commutative monoid; composition adds the
    decorations; wheeled (contractions are free)."""

    wheeled = True

    def __init__(self, elements: Sequence, add, zero,
                 colors: Sequence[Hashable] = ("*",), name: str = "monoid"):
        self.elements = tuple(elements)
        self.add = add
        self.zero = zero
        self.colors = tuple(colors)
        self.name = name

    def components(self, ins, outs):
        return self.elements

    def unit(self, c):
        return self.zero

    def evaluate(self, D: DecoratedGraph):
        if D.exc is not None:
            return self.zero
        acc = self.zero
        for p in D.decorations:
            acc = self.add(acc, p)
        return acc


class EndPropad(FinitePropad):
    """The endomorphism properad of finite color-indexed sets.

    An element of component (c1..cm; d1..dn) is a function from the product
    of the input sets to the product of the output sets, tabulated as a
    tuple indexed by input tuples in lexicographic order.
    """

    wheeled = False

    def __init__(self, sets: Dict[Hashable, Sequence], name: str = "end"):
        self.sets = {c: tuple(vals) for c, vals in sets.items()}
        self.colors = tuple(sorted(self.sets, key=repr))
        self.name = name

    def _domain(self, profile: Tuple) -> List[tuple]:
        pools = [self.sets[c] for c in profile]
        return list(itertools.product(*pools))

    def components(self, ins, outs):
        dom = self._domain(tuple(ins))
        cod = self._domain(tuple(outs))
        out = []
        for table in itertools.product(cod, repeat=len(dom)):
            out.append(("fn", tuple(ins), tuple(outs), tuple(table)))
        return tuple(out)

    def unit(self, c):
        dom = self._domain((c,))
        return ("fn", (c,), (c,), tuple(dom))

    def apply(self, fn, args: tuple) -> tuple:
        _, ins, outs, table = fn
        dom = self._domain(ins)
        return table[dom.index(tuple(args))]

    def evaluate(self, D: DecoratedGraph):
        if D.exc is not None:
            if D.exc[0] == "edge":
                return self.unit(D.exc[1])
            raise PropadError("no traces over sets")
        in_profile, out_profile = D.profile()
        dom = self._domain(in_profile)
        # topologically order instances along internal edges
        n = D.n_instances
        preds: Dict[int, set] = {i: set() for i in range(n)}
        for (o, ip) in D.edges:
            preds[ip[0]].add(o[0])
        order: List[int] = []
        ready = [i for i in range(n) if not preds[i]]
        left = {i: set(p) for i, p in preds.items()}
        while ready:
            i = ready.pop()
            order.append(i)
            for j in range(n):
                if i in left[j]:
                    left[j].discard(i)
                    if not left[j] and j not in order and j not in ready:
                        ready.append(j)
        if len(order) != n:
            raise PropadError("cannot evaluate a wheeled wiring over sets")
        feeds: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for (o, ip) in D.edges:
            feeds[ip] = o
        table = []
        for args in dom:
            in_val = {p: v for p, v in zip(D.inputs, args)}
            out_val: Dict[Tuple[int, int], object] = {}
            for i in order:
                vals = []
                for s in range(len(D.ins[i])):
                    port = (i, s)
                    if port in feeds:
                        vals.append(out_val[feeds[port]])
                    else:
                        vals.append(in_val[port])
                res = self.apply(D.decorations[i], tuple(vals))
                for s in range(len(D.outs[i])):
                    out_val[(i, s)] = res[s]
            table.append(tuple(out_val[p] for p in D.outputs))
        return ("fn", tuple(in_profile), tuple(out_profile), tuple(table))


class UnitWheeledPropad(FinitePropad):
    """The unit wheeled properad: one color, one (1;1) element, one (;)
    element, nothing else."""

    wheeled = True

    def __init__(self, color: Hashable = "*", name: str = "unit-wheeled"):
        self.colors = (color,)
        self.name = name

    def components(self, ins, outs):
        c = self.colors[0]
        if tuple(ins) == (c,) and tuple(outs) == (c,):
            return ("id",)
        if not ins and not outs:
            return ("wheel",)
        return ()

    def unit(self, c):
        return "id"

    def evaluate(self, D: DecoratedGraph):
        if D.exc is not None:
            return "id" if D.exc[0] == "edge" else "wheel"
        ins, outs = D.profile()
        if len(ins) == 1 and len(outs) == 1:
            return "id"
        if not ins and not outs:
            return "wheel"
        raise PropadError("no element with this profile")


class GraphicalPropad(FinitePropad):
    """The free (wheeled) properad of a finite simply connected shape,
    with elements canonical decorated graphs."""

    def __init__(self, G, wheeled: bool = False, max_vertices: int = None,
                 name: str = "graphical"):
        from .category import enumerate_elements

        self.base = G
        self.wheeled = wheeled
        self.name = name
        self.colors = tuple(G.edges)
        bound = max_vertices if max_vertices is not None else G.n_vertices
        self._canon: Dict[tuple, DecoratedGraph] = {}
        reps = enumerate_elements(G, bound, wheeled=wheeled)
        self._unlisted = {}
        for el in reps:
            self._unlisted[el.canonical_unlisted] = el

    def _store(self, el: DecoratedGraph) -> DecoratedGraph:
        key = el.canonical_strict
        if key not in self._canon:
            self._canon[key] = el
        return self._canon[key]

    def components(self, ins, outs):
        out = []
        for el in self._unlisted.values():
            try:
                out.append(self._store(
                    el.relist_for_profile(tuple(ins), tuple(outs))))
            except Exception:
                continue
        return tuple(out)

    def unit(self, c):
        from .decorated import exceptional_element
        return self._store(exceptional_element(c))

    def evaluate(self, D: DecoratedGraph):
        from .decorated import plug

        if D.exc is not None:
            from .decorated import exceptional_element, exceptional_loop_element
            if D.exc[0] == "edge":
                return self._store(exceptional_element(D.exc[1]))
            return self._store(exceptional_loop_element(D.exc[1]))
        fillers = {i: D.decorations[i] for i in range(D.n_instances)}
        result, _ = plug(D, fillers, wheeled=self.wheeled)
        return self._store(result)


# ---------------------------------------------------------------------------
# axiom checking
# ---------------------------------------------------------------------------


def _profiles_up_to(P: FinitePropad, max_arity: int) -> List[Tuple]:
    out = []
    for m in range(max_arity + 1):
        for n in range(max_arity + 1):
            for ins in itertools.product(P.colors, repeat=m):
                for outs in itertools.product(P.colors, repeat=n):
                    out.append((ins, outs))
    return out


def check_axioms(P: FinitePropad, max_arity: int = 2,
                 max_component: int = 9) -> List[str]:
    """Exhaustively check bi-equivariance, unity, and associativity on all
    composable configurations up to the stated arity; returns failures."""
    failures = []
    profiles = _profiles_up_to(P, max_arity)
    small = [(ins, outs, p) for (ins, outs) in profiles
             for p in P.components(ins, outs)[:max_component]]

    # unity: unit composed into anything is the identity operation
    for (ins, outs, p) in small:
        for j, c in enumerate(ins):
            got = P.dioperadic(p, ins, outs, P.unit(c), (c,), (c,), 0, j)
            if got != p:
                failures.append(f"left unity fails at {p}/{j}")
        for i, c in enumerate(outs):
            got = P.dioperadic(P.unit(c), (c,), (c,), p, ins, outs, i, 0)
            if got != p:
                failures.append(f"right unity fails at {p}/{i}")

    # associativity: 3-vertex linear configurations evaluated two ways
    for (ins1, outs1, p) in small:
        for (ins2, outs2, q) in small:
            for i, co in enumerate(outs2):
                for j, ci in enumerate(ins1):
                    if co != ci:
                        continue
                    pq = P.dioperadic(p, ins1, outs1, q, ins2, outs2, i, j)
                    pq_ins = ins1[:j] + ins2 + ins1[j + 1:]
                    pq_outs = outs2[:i] + outs1 + outs2[i + 1:]
                    for (ins3, outs3, r) in small:
                        for i2, co2 in enumerate(outs3):
                            for j2, ci2 in enumerate(ins2):
                                if co2 != ci2:
                                    continue
                                qr = P.dioperadic(q, ins2, outs2, r, ins3,
                                                  outs3, i2, j2)
                                qr_ins = ins2[:j2] + ins3 + ins2[j2 + 1:]
                                qr_outs = outs3[:i2] + outs2 + outs3[i2 + 1:]
                                lhs = P.dioperadic(
                                    pq, pq_ins, pq_outs, r, ins3, outs3,
                                    i2, len(ins1[:j]) + j2)
                                rhs = P.dioperadic(
                                    p, ins1, outs1, qr, qr_ins, qr_outs,
                                    len(outs3[:i2]) + i, j)
                                if lhs != rhs:
                                    failures.append(
                                        f"associativity fails at {p},{q},{r}")
                                if failures:
                                    return failures
    return failures


class TablePropad(FinitePropad):
    """A finite properad given by explicit tables: components per profile,
    units, adjacent-transposition actions, segment compositions, and (in
    wheeled mode) contractions.

    Components are stored up to a fixed arity; evaluation peels decorated
    graphs one merge at a time, using the action tables to align segments.
    """

    def __init__(self, colors, components, units, act_in, act_out,
                 compose, contract=None, wheeled=False, name="table"):
        self.colors = tuple(colors)
        self._components = {k: tuple(v) for k, v in components.items()}
        self._units = dict(units)
        self._act_in = dict(act_in)      # (profile-key, p, pos) -> q
        self._act_out = dict(act_out)
        self._compose = dict(compose)    # see _merge for the key shape
        self._contract = dict(contract or {})
        self.wheeled = wheeled
        self.name = name

    @staticmethod
    def profile_key(ins, outs) -> tuple:
        return (tuple(ins), tuple(outs))

    def components(self, ins, outs):
        return self._components.get(self.profile_key(ins, outs), ())

    def unit(self, c):
        return self._units[c]

    def _swap_in(self, key, p, pos):
        return self._act_in[(key, p, pos)]

    def _swap_out(self, key, p, pos):
        return self._act_out[(key, p, pos)]

    def evaluate(self, D: DecoratedGraph):
        if D.exc is not None:
            if D.exc[0] == "edge":
                return self.unit(D.exc[1])
            if not self.wheeled:
                raise PropadError("no loops in a properadic table")
            u = self.unit(D.exc[1])
            key = ((D.exc[1],), (D.exc[1],))
            return self._contract[(key, u, 0, 0)]
        state = _EvalState(D)
        while state.has_structure():
            if not state.step(self):
                raise PropadError("evaluation is stuck; tables incomplete")
        return state.result(self)


class _EvalState:
    """Mutable peeling state for TablePropad evaluation: a list of live
    instances with explicit slot orders and a wiring."""

    def __init__(self, D: DecoratedGraph):
        self.items = []
        for i in range(D.n_instances):
            self.items.append({
                "element": D.decorations[i],
                "ins": list(D.ins[i]),
                "outs": list(D.outs[i]),
                "in_wire": [None] * len(D.ins[i]),
                "out_wire": [None] * len(D.outs[i]),
            })
        for k, (o, ip) in enumerate(D.edges):
            self.items[o[0]]["out_wire"][o[1]] = (ip[0], ip[1])
            self.items[ip[0]]["in_wire"][ip[1]] = (o[0], o[1])
        self.boundary_in = list(D.inputs)
        self.boundary_out = list(D.outputs)

    def has_structure(self) -> bool:
        live = [it for it in self.items if it is not None]
        if len(live) > 1:
            return True
        return any(w is not None for it in live for w in it["out_wire"])

    def _renumber(self, idx, side, removed_pos):
        """Fix wires after deleting one slot."""
        for jt in self.items:
            if jt is None:
                continue
            for wires in (jt["in_wire"], jt["out_wire"]):
                for k, w in enumerate(wires):
                    if w and w[0] == idx:
                        s = w[1]
                        if (side == "in" and wires is jt["out_wire"]) or \
                           (side == "out" and wires is jt["in_wire"]):
                            if s > removed_pos:
                                wires[k] = (idx, s - 1)
        fixed = []
        for (i, s) in self.boundary_in:
            if i == idx and side == "in" and s > removed_pos:
                fixed.append((i, s - 1))
            else:
                fixed.append((i, s))
        self.boundary_in = fixed
        fixed = []
        for (i, s) in self.boundary_out:
            if i == idx and side == "out" and s > removed_pos:
                fixed.append((i, s - 1))
            else:
                fixed.append((i, s))
        self.boundary_out = fixed

    def _apply_swap(self, P: TablePropad, idx: int, side: str, pos: int):
        it = self.items[idx]
        key = (tuple(it["ins"]), tuple(it["outs"]))
        if side == "in":
            it["element"] = P._swap_in(key, it["element"], pos)
            seq, wires = it["ins"], it["in_wire"]
        else:
            it["element"] = P._swap_out(key, it["element"], pos)
            seq, wires = it["outs"], it["out_wire"]
        seq[pos], seq[pos + 1] = seq[pos + 1], seq[pos]
        wires[pos], wires[pos + 1] = wires[pos + 1], wires[pos]
        # external references
        for jt in self.items:
            if jt is None:
                continue
            for ws in (jt["in_wire"], jt["out_wire"]):
                for k, w in enumerate(ws):
                    if w and w[0] == idx:
                        target = ("out" if ws is jt["in_wire"] else "in")
                        if target == side:
                            if w[1] == pos:
                                ws[k] = (idx, pos + 1)
                            elif w[1] == pos + 1:
                                ws[k] = (idx, pos)
        for blist, bside in ((self.boundary_in, "in"),
                             (self.boundary_out, "out")):
            if bside != side:
                continue
            for k, (i, s) in enumerate(blist):
                if i == idx and s == pos:
                    blist[k] = (i, pos + 1)
                elif i == idx and s == pos + 1:
                    blist[k] = (i, pos)

    def step(self, P: TablePropad) -> bool:
        # 1. contract a self-loop when wheeled
        for idx, it in enumerate(self.items):
            if it is None:
                continue
            for o_pos, w in enumerate(it["out_wire"]):
                if w and w[0] == idx:
                    if not P.wheeled:
                        raise PropadError("loop in a properadic evaluation")
                    i_pos = w[1]
                    key = (tuple(it["ins"]), tuple(it["outs"]))
                    it["element"] = P._contract[
                        (key, it["element"], o_pos, i_pos)]
                    del it["outs"][o_pos]
                    del it["out_wire"][o_pos]
                    self._renumber(idx, "out", o_pos)
                    del it["ins"][i_pos]
                    del it["in_wire"][i_pos]
                    self._renumber(idx, "in", i_pos)
                    return True
        # 2. merge two instances joined by at least one wire
        for bot, it in enumerate(self.items):
            if it is None:
                continue
            tops = [w[0] for w in it["out_wire"] if w]
            if not tops:
                continue
            top = tops[0]
            if top == bot:
                continue
            self._merge(P, bot, top)
            return True
        return False

    def _merge(self, P: TablePropad, bot: int, top: int):
        ib, itp = self.items[bot], self.items[top]
        conn = [(o_pos, w[1]) for o_pos, w in enumerate(ib["out_wire"])
                if w and w[0] == top]
        k = len(conn)
        # align: move the connecting outputs of bot into a trailing block in
        # top-slot order, and the connecting inputs of top into a leading
        # block
        total_out = len(ib["outs"])

        def out_block_positions():
            return [o for o, w in enumerate(ib["out_wire"])
                    if w and w[0] == top]

        # bubble the connecting outputs of bot into a trailing block ordered
        # by their top-side positions, one adjacent transposition at a time
        changed = True
        while changed:
            changed = False
            positions = out_block_positions()
            layout = list(range(total_out - k, total_out))
            if positions == layout and \
                    [ib["out_wire"][o][1] for o in positions] == \
                    sorted(ib["out_wire"][o][1] for o in positions):
                break
            # find an adjacent swap that makes progress: move any
            # non-connecting slot left past a connecting one, or order two
            # connecting slots by top position
            for pos in range(total_out - 1):
                a = ib["out_wire"][pos]
                b = ib["out_wire"][pos + 1]
                a_conn = a is not None and a[0] == top
                b_conn = b is not None and b[0] == top
                if a_conn and not b_conn:
                    self._apply_swap(P, bot, "out", pos)
                    changed = True
                    break
                if a_conn and b_conn and a[1] > b[1]:
                    self._apply_swap(P, bot, "out", pos)
                    changed = True
                    break

        changed = True
        total_in = len(itp["ins"])
        while changed:
            changed = False
            for pos in range(total_in - 1):
                a = itp["in_wire"][pos]
                b = itp["in_wire"][pos + 1]
                a_conn = a is not None and a[0] == bot
                b_conn = b is not None and b[0] == bot
                if b_conn and not a_conn:
                    self._apply_swap(P, top, "in", pos)
                    changed = True
                    break
                if a_conn and b_conn and a[1] > b[1]:
                    self._apply_swap(P, top, "in", pos)
                    changed = True
                    break

        # now bot's last k outputs connect to top's first k inputs in order
        key_top = (tuple(itp["ins"]), tuple(itp["outs"]))
        key_bot = (tuple(ib["ins"]), tuple(ib["outs"]))
        comp_key = (key_top, itp["element"], key_bot, ib["element"],
                    len(ib["outs"]) - k, 0, k)
        if comp_key not in P._compose:
            raise PropadError(f"missing composition table entry {comp_key}")
        merged = P._compose[comp_key]
        # profile of the merged element per the segment composition with
        # in_start = 0 and out_start = len(bot outs) - k:
        # inputs = bot inputs ++ top inputs after the segment,
        # outputs = bot outputs before the segment ++ top outputs
        new_ins = ib["ins"] + itp["ins"][k:]
        new_outs = ib["outs"][: len(ib["outs"]) - k] + itp["outs"]
        new_in_wire = ib["in_wire"] + itp["in_wire"][k:]
        new_out_wire = ib["out_wire"][: len(ib["outs"]) - k] + itp["out_wire"]
        mapping = {}
        for s in range(len(ib["ins"])):
            mapping[("in", bot, s)] = ("in", bot, s)
        for s in range(k, len(itp["ins"])):
            mapping[("in", top, s)] = ("in", bot, len(ib["ins"]) + s - k)
        for s in range(len(ib["outs"]) - k):
            mapping[("out", bot, s)] = ("out", bot, s)
        for s in range(len(itp["outs"])):
            mapping[("out", top, s)] = ("out", bot,
                                        len(ib["outs"]) - k + s)
        self.items[bot] = {
            "element": merged,
            "ins": new_ins,
            "outs": new_outs,
            "in_wire": new_in_wire,
            "out_wire": new_out_wire,
        }
        self.items[top] = None
        for jt in self.items:
            if jt is None:
                continue
            for ws, side in ((jt["in_wire"], "out"), (jt["out_wire"], "in")):
                for kk, w in enumerate(ws):
                    if w is None:
                        continue
                    got = mapping.get((side, w[0], w[1]))
                    if got is not None:
                        ws[kk] = (got[1], got[2])
        for blist, side in ((self.boundary_in, "in"),
                            (self.boundary_out, "out")):
            for kk, (i, s) in enumerate(blist):
                got = mapping.get((side, i, s))
                if got is not None:
                    blist[kk] = (got[1], got[2])

    def result(self, P: TablePropad):
        live = [(i, it) for i, it in enumerate(self.items) if it is not None]
        if len(live) != 1:
            raise PropadError("evaluation did not converge to one element")
        idx, it = live[0]
        # align boundary orders with the requested listing
        want_in = [s for (i, s) in self.boundary_in]
        # bubble-sort the instance's inputs into boundary order
        def in_rank():
            return {s: r for r, (i, s) in enumerate(self.boundary_in)}

        changed = True
        while changed:
            changed = False
            rank = in_rank()
            for pos in range(len(it["ins"]) - 1):
                if rank[pos] > rank[pos + 1]:
                    self._apply_swap(P, idx, "in", pos)
                    changed = True
                    break
        changed = True
        while changed:
            changed = False
            rank = {s: r for r, (i, s) in enumerate(self.boundary_out)}
            for pos in range(len(it["outs"]) - 1):
                if rank[pos] > rank[pos + 1]:
                    self._apply_swap(P, idx, "out", pos)
                    changed = True
                    break
        return it["element"]


def tabulate(P: FinitePropad, max_arity: int = 2,
             name: str = None) -> TablePropad:
    """Extract explicit tables from a properad, up to the given arity."""
    components = {}
    for m in range(max_arity + 1):
        for n in range(max_arity + 1):
            for ins in itertools.product(P.colors, repeat=m):
                for outs in itertools.product(P.colors, repeat=n):
                    els = P.components(ins, outs)
                    if els:
                        components[(ins, outs)] = els
    units = {c: P.unit(c) for c in P.colors}
    act_in = {}
    act_out = {}
    for (ins, outs), els in components.items():
        for p in els:
            for pos in range(len(ins) - 1):
                el = corolla_element(p, ins, outs)
                swapped = list(el.inputs)
                swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
                act_in[((ins, outs), p, pos)] = P.evaluate(
                    el.relist(tuple(swapped), el.outputs))
            for pos in range(len(outs) - 1):
                el = corolla_element(p, ins, outs)
                swapped = list(el.outputs)
                swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
                act_out[((ins, outs), p, pos)] = P.evaluate(
                    el.relist(el.inputs, tuple(swapped)))
    compose = {}
    for (ins1, outs1), els1 in components.items():
        for (ins2, outs2), els2 in components.items():
            for k in range(1, min(len(ins1), len(outs2)) + 1):
                for out_start in range(len(outs2) - k + 1):
                    for in_start in range(len(ins1) - k + 1):
                        if outs2[out_start:out_start + k] != \
                                ins1[in_start:in_start + k]:
                            continue
                        for p in els1:
                            for q in els2:
                                try:
                                    val = P.boxtimes(
                                        p, ins1, outs1, q, ins2, outs2,
                                        out_start, in_start, k)
                                except PropadError:
                                    continue
                                compose[((ins1, outs1), p,
                                         (ins2, outs2), q,
                                         out_start, in_start, k)] = val
    contract = {}
    if P.wheeled:
        for (ins, outs), els in components.items():
            for i, co in enumerate(outs):
                for j, ci in enumerate(ins):
                    if co != ci:
                        continue
                    for p in els:
                        contract[((ins, outs), p, i, j)] = P.contract(
                            p, ins, outs, i, j)
    return TablePropad(P.colors, components, units, act_in, act_out,
                       compose, contract, wheeled=P.wheeled,
                       name=name or f"table({P.name})")
