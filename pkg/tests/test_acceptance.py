"""Acceptance criteria, one test per criterion, each printing a verdict line.

Corpus bounds: criteria 1-3 sweep connected (wheeled) graphs with <= 4
vertices, <= 5 internal edges, and <= 2 legs; the codimension-2 sweeps use
<= 3 vertices and <= 3 internal edges (the sanctioned reduced bound); nerve
criteria use shapes with <= 3 vertices / <= 2 internal edges as stated.
"""

import itertools
import random

import pytest

from properads import analysis, substitution
from properads.category import (
    GMap,
    all_isomorphisms,
    all_subgraph_elements,
    codegeneracy_map,
    codim2_alternatives,
    compose,
    contracting_expansion,
    cycle_witness_family,
    degeneracy_vertices,
    enumerate_graphical_maps,
    faces,
    factorize,
    identity_map,
    inner_expansion,
    is_graphical,
    loop_expansion,
    loop_witness_family,
    maps_equal_up_to_source_iso,
    outer_expansion,
    reedy_classify,
    reedy_degree,
    relabel_map,
    _pair_equivalent,
)
from properads.category import is_finite as cat_is_finite
from properads.decorated import (
    DecoratedGraph,
    DecorationError,
    corolla_element,
    exceptional_element,
)
from properads.finprop import EndPropad, MonoidPropad, UnitWheeledPropad
from properads.graphs import (
    GGraph,
    corolla,
    corolla_mn,
    exceptional_edge,
    exceptional_loop,
    linear_graph,
    make_graph,
    strict_iso,
)
from properads.nerve import (
    MutatedNerve,
    NerveSet,
    TaggedNerve,
    degenerate_element,
    eta_bijective,
    fundamental_propad,
    homotopy_related,
    segal_is_bijective,
    standard_corolla,
    strict_check,
)
from properads.substitution import (
    FACTORIZATION_KINDS,
    corolla_of_vertex,
    substitute,
)
from properads.tensor import (
    GeneratingObject,
    distributivity_decompose,
    generating_distributivity,
    generating_object_of_graph,
    smash,
    tensor_presentation,
)
from properads.wheeled import (
    is_wheeled_graphical,
    wheeled_factorize,
)

SEED = 20260810


def verdict(num: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {status}: {detail}")
    assert ok, f"criterion {num} failed: {detail}"


# ---------------------------------------------------------------------------
# seeded generators
# ---------------------------------------------------------------------------


def seed_graphs(corpus, rng, count, max_v=2, max_e=2):
    pool = [G for G in corpus
            if 1 <= G.n_vertices <= max_v
            and len(G.internal_edges) <= max_e]
    return [pool[rng.randrange(len(pool))] for _ in range(count)]


def random_inner_graph(rng, G: GGraph, v: str, wheeled: bool) -> GGraph:
    """A random graph with the profiles of vertex v."""
    C = corolla_of_vertex(G, v)
    roll = rng.random()
    if roll < 0.4:
        return C
    w = C.vertex_names[0]
    ins, outs = C.in_profile(w), C.out_profile(w)
    if roll < 0.8:
        # split across a partially grafted corollas
        in_split = [rng.randrange(2) for _ in ins]
        out_split = [rng.randrange(2) for _ in outs]
        alpha = 1 if (wheeled or rng.random() < 0.6) else 2
        m = inner_expansion(C, w, in_split, out_split, alpha,
                            wheeled=wheeled)
        return m.target
    if wheeled:
        return loop_expansion(C, w).target
    in_split = [1 for _ in ins]
    out_split = [0 for _ in outs]
    return inner_expansion(C, w, in_split, out_split, 1).target


def random_generator_map(rng, X: GGraph, wheeled: bool):
    """A random codegeneracy / relabeling / coface out of X, or None."""
    options = []
    degs = degeneracy_vertices(X)
    if degs:
        options.append("s")
    if X.g_in or X.g_out:
        options.append("r")
    if X.n_vertices >= 1:
        options.append("inner")
        options.append("outer")
    if wheeled and X.n_vertices >= 1:
        options.append("loop")
    if wheeled and X.g_in and X.g_out:
        options.append("contract")
    if not options:
        return None
    kind = options[rng.randrange(len(options))]
    try:
        if kind == "s":
            return codegeneracy_map(X, degs[rng.randrange(len(degs))])
        if kind == "r":
            sigma = list(range(len(X.g_out)))
            tau = list(range(len(X.g_in)))
            rng.shuffle(sigma)
            rng.shuffle(tau)
            return relabel_map(X, tuple(sigma), tuple(tau))
        if kind == "inner":
            v = X.vertex_names[rng.randrange(X.n_vertices)]
            ins = X.in_profile(v)
            outs = X.out_profile(v)
            alpha = 1 if (wheeled or rng.random() < 0.6) else 2
            return inner_expansion(
                X, v, [rng.randrange(2) for _ in ins],
                [rng.randrange(2) for _ in outs], alpha, wheeled=wheeled)
        if kind == "outer":
            attach_out = bool(rng.randrange(2))
            pool = X.g_out if attach_out else X.g_in
            if not pool:
                attach_out = not attach_out
                pool = X.g_out if attach_out else X.g_in
            if not pool:
                return None
            alpha = 1
            return outer_expansion(X, rng.randrange(2), rng.randrange(2) + 1,
                                   alpha, attach_out=attach_out,
                                   wheeled=wheeled)
        if kind == "loop":
            v = X.vertex_names[rng.randrange(X.n_vertices)]
            return loop_expansion(X, v)
        if kind == "contract":
            return contracting_expansion(X, rng.randrange(len(X.g_in)),
                                         rng.randrange(len(X.g_out)))
    except Exception:
        return None
    return None


def random_composite(rng, start: GGraph, wheeled: bool, steps: int):
    m = identity_map(start)
    cur = start
    for _ in range(steps):
        if cur.n_vertices > 4 or len(cur.internal_edges) > 4:
            break
        g = random_generator_map(rng, cur, wheeled)
        if g is None:
            continue
        m = compose(g, m, wheeled=wheeled)
        cur = g.target
    return m


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def test_criterion_01_substitution_laws(corpus_w_45):
    rng = random.Random(SEED)
    unity_fail = None
    for G in corpus_w_45:
        if G.n_vertices == 0:
            continue
        H, _ = substitution.identity_substitution(G)
        if strict_iso(G, H) is None:
            unity_fail = G
            break
        C = substitution.corolla_of(G)
        H2, _ = substitute(C, {"v": G})
        if strict_iso(G, H2) is None:
            unity_fail = G
            break
    assoc_fail = 0
    candidates = [G for G in corpus_w_45
                  if 1 <= G.n_vertices <= 3
                  and len(G.internal_edges) <= 3]
    for trial in range(200):
        G = candidates[rng.randrange(len(candidates))]
        wheeled = not analysis.classify(G).wheel_free
        inner = {v: random_inner_graph(rng, G, v, wheeled)
                 for v in G.vertex_names}
        step1, _ = substitute(G, inner)
        inner2 = {}
        for u in step1.vertex_names:
            Cu = corolla(step1.in_profile(u), step1.out_profile(u), name=u)
            inner2[u] = Cu if rng.random() < 0.5 else \
                random_inner_graph(rng, step1, u, wheeled)
        lhs, _ = substitute(step1, inner2)
        # right-hand side: push the second layer inside the first
        prov_names = {}
        nested = {}
        for v in G.vertex_names:
            Hv = inner[v]
            inner_for_H = {}
            for w in Hv.vertex_names:
                inner_for_H[w] = inner2[f"{v}/{w}"]
            nested[v], _ = substitute(Hv, inner_for_H)
        rhs, _ = substitute(G, nested)
        if strict_iso(lhs, rhs) is None:
            assoc_fail += 1
    ok = unity_fail is None and assoc_fail == 0
    verdict(1, ok,
            f"unity on {len(corpus_w_45)} graphs, associativity on 200 "
            f"seeded nested assignments ({assoc_fail} failures)")


def test_criterion_02_factorization_bijections(corpus_w_45):
    checked = 0
    failures = []
    for K in corpus_w_45:
        cls = analysis.classify(K)
        if not cls.connected:
            continue
        detectors = {}
        if cls.wheel_free:
            detectors["inner-prop"] = len(analysis.closest_neighbors(K))
            if cls.ordinary:
                detectors["outer-prop"] = (
                    len(K.g_in) + len(K.g_out) if K.n_vertices == 1
                    else len(analysis.almost_isolated(K)))
        if K.n_vertices == 1 and not K.internal_edges:
            detectors["outer-diop"] = len(K.g_in) + len(K.g_out)
        else:
            detectors["outer-diop"] = len(analysis.deletable_vertices(K))
        detectors["inner-diop"] = len(
            [e for e in K.internal_edges if e.kind == "ordinary-edge"])
        detectors["inner-contr"] = len(analysis.loops(K))
        detectors["outer-contr"] = len(analysis.disconnectable_edges(K))
        for kind, want in detectors.items():
            facts = FACTORIZATION_KINDS[kind](K)
            if len(facts) != want:
                failures.append((K, kind, len(facts), want))
                continue
            for f in facts:
                checked += 1
                if strict_iso(f.recompose(), K) is None:
                    failures.append((K, kind, "recompose", f.witness))
    verdict(2, not failures,
            f"{checked} factorizations recomposed strictly across "
            f"{len(corpus_w_45)} graphs; {len(failures)} failures")


def test_criterion_03_finiteness(corpus_w_45, corpus_wf_45):
    bad = []
    for G in corpus_wf_45:
        cls = analysis.classify(G)
        if not cls.connected:
            continue
        if cat_is_finite(G) != cls.simply_connected:
            bad.append(("wf", G))
    witnesses = 0
    for G in corpus_wf_45:
        cls = analysis.classify(G)
        if not (cls.connected and cls.wheel_free) or cls.simply_connected:
            continue
        if G.n_vertices == 0:
            continue
        sizes = set()
        for n in range(1, 6):
            el = cycle_witness_family(G, n)
            el.check()
            sizes.add(el.n_instances)
        if len(sizes) != 5:
            bad.append(("witness", G))
        else:
            witnesses += 1
    # wheeled: the exceptional wheel is the finite exception; loop witnesses
    wheel = exceptional_loop("*")
    from properads.wheeled import is_finite_wheeled
    if not is_finite_wheeled(wheel):
        bad.append(("wheel-exception", wheel))
    loop_checked = 0
    for G in corpus_w_45[:400]:
        cls = analysis.classify(G)
        if not cls.connected or G.n_vertices == 0:
            continue
        if is_finite_wheeled(G) != cls.simply_connected:
            bad.append(("w", G))
        lps = analysis.loops(G)
        if lps:
            v, loop = sorted(lps, key=lambda t: (t[0], t[1].key()))[0]
            sizes = set()
            for n in range(1, 6):
                el = loop_witness_family(G, v, loop, n)
                el.check(wheeled=True)
                sizes.add(el.n_instances)
            if len(sizes) == 5:
                loop_checked += 1
            else:
                bad.append(("loop-witness", G))
    verdict(3, not bad,
            f"finiteness matches simple connectivity; {witnesses} cycle "
            f"witness families and {loop_checked} loop families of >= 5 "
            f"distinct elements; {len(bad)} failures")


def test_criterion_04_delta_embedding():
    def monotone_count(m, n):
        count = 0
        for fn in itertools.product(range(n + 1), repeat=m + 1):
            if all(fn[i] <= fn[i + 1] for i in range(m)):
                count += 1
        return count

    bad = []
    for m in range(0, 4):
        for n in range(0, 4):
            got = len(enumerate_graphical_maps(linear_graph(m),
                                               linear_graph(n)))
            want = monotone_count(m, n)
            if got != want:
                bad.append((m, n, got, want))
    verdict(4, not bad,
            f"hom-set sizes match monotone-map counts for 0 <= m,n <= 3"
            f"{'' if not bad else f'; mismatches {bad}'}")


def _counterexample_maps():
    """The five non-graphical properad maps, and the wheeled-only map psi."""
    out = []
    # phizero
    G = corolla_mn(2, 2, name="u")
    H = make_graph(
        {"v": {"in": (), "out": (0, 1, 2)}, "w": {"in": (3, 4, 5),
                                                  "out": ()}},
        iota={0: 3, 3: 0, 1: 4, 4: 1, 2: 5, 5: 2})
    e, f, g = H.internal_edges
    i1, i2 = G.in_edges()
    o1, o2 = G.out_edges()
    el = DecoratedGraph(
        decorations=("v", "w"),
        ins=(H.in_edges("v"), H.in_edges("w")),
        outs=(H.out_edges("v"), H.out_edges("w")),
        edges=(((0, 1), (1, 1)),),
        inputs=((1, 0), (1, 2)),
        outputs=((0, 0), (0, 2)),
    )
    out.append(("phizero", GMap(G, H, {i1: e, i2: g, o1: e, o2: g},
                                {"u": el}).check()))
    # idonedge
    D = make_graph(
        {"u": {"in": (), "out": (0, 1)}, "v": {"in": (2, 3), "out": ()}},
        iota={0: 2, 2: 0, 1: 3, 3: 1})
    e2, f2 = D.internal_edges
    elv = corolla_element("v", D.in_edges("v"), D.out_edges("v"))
    elu = DecoratedGraph(
        decorations=("u", "u", "v"),
        ins=(D.in_edges("u"), D.in_edges("u"), D.in_edges("v")),
        outs=(D.out_edges("u"), D.out_edges("u"), D.out_edges("v")),
        edges=(((0, 0), (2, 0)), ((1, 1), (2, 1))),
        inputs=(),
        outputs=((0, 1), (1, 0)),
    ).relist_for_profile((), (e2, f2))
    out.append(("idonedge", GMap(D, D, {e2: e2, f2: f2},
                                 {"v": elv, "u": elu}).check()))
    # noninjection 1: psi (wheeled-acceptable)
    Hp = make_graph(
        {"u2": {"in": (), "out": (0, 1)}, "v2": {"in": (2, 3), "out": ()}},
        iota={1: 2, 2: 1}, g_in=(3,), g_out=(0,))
    fprime = next(x for x in Hp.internal_edges)
    leg_in = Hp.edge_of_flag[3]
    leg_out = Hp.edge_of_flag[0]
    psi = GMap(Hp, D, {fprime: f2, leg_in: e2, leg_out: e2}, {
        "u2": corolla_element("u", D.in_edges("u"), D.out_edges("u"))
        .relist_for_profile((), (e2, f2)),
        "v2": corolla_element("v", D.in_edges("v"), D.out_edges("v"))
        .relist_for_profile((f2, e2), ()),
    }).check(wheeled=True)
    out.append(("noninjection1", psi))
    # noninjection 2: the (1;1) corolla into D through a 2-vertex element
    J = corolla_mn(1, 1, name="w")
    ein = J.in_edges()[0]
    eout = J.out_edges()[0]
    elw = DecoratedGraph(
        decorations=("u", "v"),
        ins=(D.in_edges("u"), D.in_edges("v")),
        outs=(D.out_edges("u"), D.out_edges("v")),
        edges=(((0, 1), (1, 1)),),
        inputs=((1, 0),),
        outputs=((0, 0),),
    )
    out.append(("noninjection2", GMap(J, D, {ein: e2, eout: e2},
                                      {"w": elw}).check()))
    # noninjection 3: two input flags with the same image
    K = corolla_mn(2, 0, name="u")
    L = make_graph(
        {"v": {"in": (0,), "out": (1, 2)}, "w": {"in": (3, 4), "out": ()}},
        iota={1: 3, 3: 1, 2: 4, 4: 2},
        g_in=(0,))
    fe, ge = L.internal_edges
    le = L.edge_of_flag[0]
    k1, k2 = K.in_edges()
    elu3 = DecoratedGraph(
        decorations=("v", "v", "w", "w"),
        ins=(L.in_edges("v"), L.in_edges("v"), L.in_edges("w"),
             L.in_edges("w")),
        outs=(L.out_edges("v"), L.out_edges("v"), L.out_edges("w"),
              L.out_edges("w")),
        edges=(((0, 0), (2, 0)), ((0, 1), (3, 1)),
               ((1, 0), (3, 0)), ((1, 1), (2, 1))),
        inputs=((0, 0), (1, 0)),
        outputs=(),
    )
    out.append(("noninjection3", GMap(K, L, {k1: le, k2: le},
                                      {"u": elu3}).check()))
    return out, psi


def test_criterion_05_graphical_map_factorization(corpus_wf_33, corpus_w_33):
    rng = random.Random(SEED + 5)
    failures = []
    runs = 0
    for wheeled, corpus in ((False, corpus_wf_33), (True, corpus_w_33)):
        starts = seed_graphs(corpus, rng, 250, max_v=2, max_e=2)
        for start in starts:
            runs += 1
            f = random_composite(rng, start, wheeled, rng.randrange(1, 4))
            rev = lambda name: tuple(-ord(c) for c in str(name))
            try:
                mf1 = (wheeled_factorize(f) if wheeled else factorize(f))
                mf2 = (wheeled_factorize(f, order_key=rev) if wheeled else
                       factorize(f, order_key=rev))
                r1 = mf1.recompose(wheeled=wheeled)
                r2 = mf2.recompose(wheeled=wheeled)
                if not (r1.same(f) and r2.same(f)):
                    failures.append(("recompose", f.tag))
                if wheeled:
                    # the image/outer split: g hits everything, h is outer,
                    # and the splitting object is unique up to iso
                    from properads.wheeled import image_outer_split
                    from properads.category import image as _image
                    from properads.graphs import iso_up_to_listing

                    g, h = image_outer_split(f)
                    if not compose(h, g, wheeled=True).same(f):
                        failures.append(("split-compose", f.tag))
                    g_img = _image(g, wheeled=True)
                    if iso_up_to_listing(g_img.shape, g.target) is None:
                        failures.append(("split-surjective", f.tag))
                    start1 = (mf1.outer_cofaces[0].source
                              if mf1.outer_cofaces else f.target)
                    if iso_up_to_listing(start1, g.target) is None:
                        failures.append(("split-unique", f.tag))
            except Exception as exc:
                failures.append(("error", f.tag, str(exc)))
    counterexamples, psi = _counterexample_maps()
    for name, m in counterexamples:
        try:
            if is_graphical(m):
                failures.append(("accepted", name))
        except DecorationError:
            pass
    if not is_wheeled_graphical(psi):
        failures.append(("psi-rejected-wheeled",))
    verdict(5, not failures,
            f"{runs} seeded composites factorized and recomposed in both "
            f"internal orderings; {len(counterexamples)} counterexamples "
            f"rejected and psi accepted wheeled; "
            f"{len(failures)} failures {failures[:3]}")


def _rebuild_from_f0(G, K, f0, sub_lookup):
    f1 = {}
    for v in G.vertex_names:
        want_in = tuple(f0[e] for e in G.in_edges(v))
        want_out = tuple(f0[e] for e in G.out_edges(v))
        key = (tuple(sorted(want_in, key=repr)),
               tuple(sorted(want_out, key=repr)))
        cands = sub_lookup.get(key, [])
        fits = []
        for el in cands:
            try:
                fits.append(el.relist_for_profile(want_in, want_out))
            except DecorationError:
                continue
        if len(fits) != 1:
            return None
        f1[v] = fits[0]
    return GMap(G, K, dict(f0), f1, tag=("rebuilt",)).check()


def test_criterion_06_edge_determination(corpus_wf_32):
    rng = random.Random(SEED + 6)
    pairs = 0
    failures = []
    sub_cache = {}

    def lookup(K):
        if id(K) not in sub_cache:
            table = {}
            for el in all_subgraph_elements(K):
                key = (tuple(sorted(el.input_colors(), key=repr)),
                       tuple(sorted(el.output_colors(), key=repr)))
                table.setdefault(key, []).append(el)
            sub_cache[id(K)] = (K, table)
        return sub_cache[id(K)][1]

    # hom-set sweep: every enumerated graphical map must be recoverable
    # from its edge function alone
    sources = [linear_graph(1), linear_graph(2), corolla_mn(2, 1),
               corolla_mn(1, 2), corolla_mn(1, 1)]
    targets = [K for K in corpus_wf_32
               if K.n_vertices in (2, 3) and len(K.internal_edges) <= 2]
    rng.shuffle(targets)
    for K in targets:
        table = lookup(K)
        for G in sources:
            for m in enumerate_graphical_maps(G, K):
                rebuilt = _rebuild_from_f0(G, K, m.f0, table)
                pairs += 1
                if rebuilt is None or not rebuilt.same(m):
                    failures.append(("hom", G, K))
        if pairs >= 7000:
            break
    # seeded composite sweep for the remainder
    while pairs < 10000:
        start = corolla_mn(rng.randrange(3), rng.randrange(1, 3))
        f = random_composite(rng, start, False, rng.randrange(1, 3))
        table = lookup(f.target)
        rebuilt = _rebuild_from_f0(f.source, f.target, f.f0, table)
        pairs += 1
        if rebuilt is None or not rebuilt.same(f):
            failures.append(("seeded", f.tag))

    # simply connected targets: every properad map is graphical, has a
    # simply connected source, injective vertex edge functions, and is
    # determined by f0
    sc_checked = 0
    budget = 3_000_000
    sc_targets = [K for K in corpus_wf_32
                  if analysis.classify(K).simply_connected
                  and K.n_vertices <= 3 and len(K.edges) <= 5]
    sc_sources = [G for G in corpus_wf_32
                  if G.n_vertices <= 3 and len(G.edges) <= 5]
    from properads.category import enumerate_elements

    for K in sc_targets:
        if budget <= 0:
            break
        elements = enumerate_elements(K, K.n_vertices)
        by_profile = {}
        for el in elements:
            by_profile.setdefault(
                (tuple(sorted(el.input_colors(), key=repr)),
                 tuple(sorted(el.output_colors(), key=repr))),
                []).append(el)
        for G in sc_sources:
            cost = len(K.edges) ** len(G.edges)
            if cost > budget:
                continue
            budget -= cost
            for f0_vals in itertools.product(
                    K.edges, repeat=len(G.edges)):
                f0 = dict(zip(G.edges, f0_vals))
                pools = []
                feasible = True
                for v in G.vertex_names:
                    want_in = tuple(f0[e] for e in G.in_edges(v))
                    want_out = tuple(f0[e] for e in G.out_edges(v))
                    key = (tuple(sorted(want_in, key=repr)),
                           tuple(sorted(want_out, key=repr)))
                    fits = []
                    for el in by_profile.get(key, []):
                        try:
                            fits.append(el.relist_for_profile(
                                want_in, want_out))
                        except DecorationError:
                            continue
                    if not fits:
                        feasible = False
                        break
                    pools.append((v, fits))
                if not feasible:
                    continue
                count = 1
                for _, fits in pools:
                    count *= len(fits)
                sc_checked += count
                if count > 1:
                    failures.append(("mapdetermined", G, K))
                    continue
                f1 = {v: fits[0] for v, fits in pools}
                m = GMap(G, K, f0, f1, tag=("sc",)).check()
                if not analysis.classify(G).simply_connected:
                    failures.append(("sconnsource", G, K))
                for v in G.vertex_names:
                    ins = [f0[e] for e in G.in_edges(v)]
                    outs = [f0[e] for e in G.out_edges(v)]
                    if len(set(ins)) != len(ins) or \
                            len(set(outs)) != len(outs):
                        failures.append(("inoutinject", G, K))
    verdict(6, not failures,
            f"{pairs} equal-f0 pairs agree; {sc_checked} maps into simply "
            f"connected targets verified; {len(failures)} failures "
            f"{failures[:3]}")


def _composable_coface_pairs(corpus, wheeled):
    for G in corpus:
        if G.n_vertices < 1:
            continue
        try:
            fs = faces(G, wheeled=wheeled)
        except analysis.ClassViolation:
            continue
        for d_u in fs:
            if d_u.tag[0] == "exceptional-inner":
                continue
            try:
                fs2 = faces(d_u.source, wheeled=wheeled)
            except analysis.ClassViolation:
                continue
            for d_v in fs2:
                if d_v.tag[0] == "exceptional-inner":
                    continue
                yield d_v, d_u


def _codim2_sweep(corpus, wheeled):
    pairs = unique = 0
    failures = []
    for d_v, d_u in _composable_coface_pairs(corpus, wheeled):
        pairs += 1
        alts = codim2_alternatives(d_v, d_u, wheeled=wheeled)
        if not alts:
            failures.append(("missing", d_u.tag, d_v.tag))
            continue
        reps = []
        for (dy, dx) in alts:
            if not any(_pair_equivalent(dy, dx, ry, rx)
                       for (ry, rx) in reps):
                reps.append((dy, dx))
        if len(reps) == 1:
            unique += 1
        else:
            failures.append(("non-unique", d_u.tag, d_v.tag, len(reps)))
    return pairs, unique, failures


def test_criterion_07_codimension_two(corpus_wf_33, corpus_w_33):
    p1, u1, f1 = _codim2_sweep(corpus_wf_33, wheeled=False)
    p2, u2, f2 = _codim2_sweep(corpus_w_33, wheeled=True)
    failures = f1 + f2
    verdict(7, not failures,
            f"properadic: {u1}/{p1} unique alternatives; wheeled: "
            f"{u2}/{p2}; {len(failures)} failures {failures[:3]}")


def test_criterion_08_reedy(corpus_wf_33):
    rng = random.Random(SEED + 8)
    failures = []
    checked = 0
    # generators classify correctly and respect degree
    for G in corpus_wf_33[:120]:
        if G.n_vertices < 1:
            continue
        if reedy_classify(identity_map(G)) != "iso":
            failures.append(("id", G))
        try:
            fs = faces(G)
        except analysis.ClassViolation:
            continue
        for d in fs:
            checked += 1
            if reedy_classify(d) != "plus":
                failures.append(("coface-class", d.tag))
            if not reedy_degree(d.source) < reedy_degree(d.target):
                failures.append(("coface-degree", d.tag))
        for v in degeneracy_vertices(G):
            s = codegeneracy_map(G, v)
            checked += 1
            if reedy_classify(s) != "minus":
                failures.append(("codegen-class", s.tag))
            if not reedy_degree(s.source) > reedy_degree(s.target):
                failures.append(("codegen-degree", s.tag))
    # seeded maps: plus/minus factorization with uniqueness, and the
    # automorphism conditions (iv)/(iv')
    starts = seed_graphs(corpus_wf_33, rng, 60, max_v=2, max_e=2)
    for start in starts:
        f = random_composite(rng, start, False, rng.randrange(1, 4))
        checked += 1
        cls = reedy_classify(f)
        mf = factorize(f)
        minus_part = mf.codegeneracies
        plus_part = mf.inner_cofaces + mf.outer_cofaces
        if cls == "plus" and minus_part:
            failures.append(("plus-with-minus", f.tag))
        if cls == "minus" and plus_part:
            failures.append(("minus-with-plus", f.tag))
        if cls == "iso" and (minus_part or plus_part):
            failures.append(("iso-split", f.tag))
        if not mf.recompose().same(f):
            failures.append(("recompose", f.tag))
        # (iv): theta f = f with f minus implies theta identity
        if cls in ("minus", "iso"):
            for theta in all_isomorphisms(f.target, f.target):
                if compose(theta, f).same(f):
                    if not theta.same(identity_map(f.target)):
                        failures.append(("axiom-iv", f.tag))
        # (iv'): f theta = f with f plus implies theta identity
        if cls in ("plus", "iso"):
            for theta in all_isomorphisms(f.source, f.source):
                if compose(f, theta).same(f):
                    if not theta.same(identity_map(f.source)):
                        failures.append(("axiom-iv-prime", f.tag))
    # plus cap minus = iso on generators and seeded maps
    verdict(8, not failures,
            f"{checked} maps classified; degree, factorization, and "
            f"automorphism axioms hold; {len(failures)} failures "
            f"{failures[:3]}")


def _nerve_seeds():
    seeds = []
    monoids = [
        ("Z1", [0], lambda a, b: 0, 0),
        ("Z2", [0, 1], lambda a, b: (a + b) % 2, 0),
        ("Z3", [0, 1, 2], lambda a, b: (a + b) % 3, 0),
        ("or", [0, 1], lambda a, b: a | b, 0),
        ("and", [0, 1], lambda a, b: a & b, 1),
        ("max3", [0, 1, 2], lambda a, b: max(a, b), 0),
        ("min3", [0, 1, 2], lambda a, b: min(a, b), 2),
    ]
    for name, els, add, zero in monoids:
        seeds.append(MonoidPropad(els, add, zero, name=name))
        seeds.append(MonoidPropad(els, add, zero, colors=("a", "b"),
                                  name=name + "-ab"))
    seeds.append(EndPropad({"*": (0,)}, name="End1"))
    seeds.append(EndPropad({"*": (0, 1)}, name="End2"))
    seeds.append(EndPropad({"a": (0,), "b": (0, 1)}, name="End-ab"))
    seeds.append(EndPropad({"a": (0, 1), "b": (0, 1)}, name="End-2x2"))
    seeds.append(MonoidPropad([0, 1, 2, 3],
                              lambda a, b: (a + b) % 4, 0, name="Z4"))
    seeds.append(MonoidPropad([0, 1], lambda a, b: (a * b) % 2, 1,
                              name="mul2"))
    return seeds[:20]


def _nerve_size(P, G, cap):
    edges = sorted(G.edges, key=lambda e: e.key())
    total = 0
    for colors in itertools.product(P.colors, repeat=len(edges)):
        phi0 = dict(zip(edges, colors))
        prod = 1
        for v in G.vertex_names:
            ins = tuple(phi0[e] for e in G.in_edges(v))
            outs = tuple(phi0[e] for e in G.out_edges(v))
            prod *= len(P.components(ins, outs))
            if prod == 0:
                break
        total += prod
        if total > cap:
            return total
    return total


def test_criterion_09_nerve_segal_strict(corpus_wf_32, corpus_w_22):
    failures = []
    seeds = _nerve_seeds()
    assert len(seeds) == 20
    details = []
    for P in seeds:
        X = NerveSet(P)
        usable = [G for G in corpus_wf_32
                  if _nerve_size(P, G, 600) <= 600]
        vdt = strict_check(X, usable)
        if not (vdt.segal and vdt.fillers_exist and vdt.fillers_unique):
            failures.append(("strict", P.name))
        # reconstruction: the fundamental properad recovers P
        Q = fundamental_propad(X, strict=True)
        if len(Q.colors) != len(P.colors):
            failures.append(("colors", P.name))
        for m in range(0, 3):
            for n in range(0, 3):
                if (m, n) == (2, 2):
                    continue
                for pin in itertools.product(P.colors, repeat=m):
                    for pout in itertools.product(P.colors, repeat=n):
                        lp = len(P.components(pin, pout))
                        # identify Q colors with P colors through X(^)
                        arrow = exceptional_edge("*")
                        color_of = {}
                        for qc in Q.colors:
                            phi0, _ = X.unpack(arrow, qc)
                            color_of[list(phi0.values())[0]] = qc
                        qin = tuple(color_of[c] for c in pin)
                        qout = tuple(color_of[c] for c in pout)
                        lq = len(Q.components(qin, qout))
                        if lp != lq:
                            failures.append(("component", P.name, m, n))
        if not eta_bijective(X, Q, [G for G in usable
                                    if G.n_vertices <= 2]):
            failures.append(("eta", P.name))
        details.append(P.name)
    # mutated nerves fail Segal and strictness together
    base = NerveSet(MonoidPropad([0, 1], lambda a, b: (a + b) % 2, 0,
                                 name="Z2m"))
    tops = [G for G in corpus_wf_32 if len(G.internal_edges) == 2]
    G0 = tops[0]
    x0 = base.value(G0)[0]
    key = MutatedNerve.shape_key(G0)
    sweep = [G for G in corpus_wf_32 if len(G.internal_edges) <= 2]
    dup = strict_check(MutatedNerve(base, duplicated=[(key, x0)]), sweep)
    if dup.segal or dup.fillers_unique:
        failures.append(("mutated-dup",))
    base2 = NerveSet(MonoidPropad([0, 1], lambda a, b: (a + b) % 2, 0,
                                  name="Z2d"))
    dele = strict_check(MutatedNerve(base2, deleted=[(key, x0)]), sweep)
    if dele.segal or dele.fillers_exist:
        failures.append(("mutated-del",))
    # wheeled: unit wheeled properad components and wheeled strictness
    from properads.wheeled import enumerate_wheeled
    for G in (exceptional_edge("*"), exceptional_loop("*")):
        if len(enumerate_wheeled(G, 3)) != 2:
            failures.append(("unit-wheeled-elements",))
    wheeled_seeds = [
        MonoidPropad([0, 1], lambda a, b: (a + b) % 2, 0, name="Z2w"),
        MonoidPropad([0, 1, 2], lambda a, b: max(a, b), 0, name="max3w"),
        UnitWheeledPropad(),
    ]
    wheeled_corpus = [G for G in corpus_w_22
                      if len(G.internal_edges) <= 2]
    for P in wheeled_seeds:
        Xw = NerveSet(P, wheeled=True)
        vdt = strict_check(Xw, wheeled_corpus)
        if not (vdt.segal and vdt.fillers_exist and vdt.fillers_unique):
            failures.append(("wheeled-strict", P.name))
    verdict(9, not failures,
            f"20 seeded properads strict with reconstruction; mutations "
            f"fail together; wheeled analogue over {len(wheeled_corpus)} "
            f"shapes; {len(failures)} failures {failures[:4]}")


def test_criterion_10_homotopy():
    failures = []
    P = MonoidPropad([0, 1], lambda a, b: (a + b) % 2, 0, name="Z2h")
    X = NerveSet(P)
    level_corpus_max = 2
    XT = TaggedNerve(X, level_corpus_max)
    for Y, strictly in ((X, True), (XT, False)):
        for (m, n) in ((1, 1), (2, 1)):
            C = standard_corolla(m, n)
            els = list(Y.value(C))
            rel = {}
            for f in els:
                for g in els:
                    rel[(f, g)] = homotopy_related(Y, f, g, m, n, 0, "in") \
                        is not None
            # reflexive, symmetric, transitive
            for f in els:
                if not rel[(f, f)]:
                    failures.append(("reflexive", Y.name, m, n))
            for f in els:
                for g in els:
                    if rel[(f, g)] != rel[(g, f)]:
                        failures.append(("symmetric", Y.name, m, n))
                    for h in els:
                        if rel[(f, g)] and rel[(g, h)] and not rel[(f, h)]:
                            failures.append(("transitive", Y.name, m, n))
            # input/output relations agree where defined
            for f in els:
                for g in els:
                    along = [homotopy_related(Y, f, g, m, n, k, "in")
                             is not None for k in range(m)]
                    along += [homotopy_related(Y, f, g, m, n, k, "out")
                              is not None for k in range(n)]
                    if len(set(along)) != 1:
                        failures.append(("in-out-agree", Y.name, m, n))
            # on nerves homotopy is equality
            if strictly:
                for f in els:
                    for g in els:
                        if rel[(f, g)] != (f == g):
                            failures.append(("equality", m, n))
    verdict(10, not failures,
            f"homotopy relations are equivalences, agree across legs, and "
            f"collapse to equality on nerves; {len(failures)} failures "
            f"{failures[:3]}")


def test_criterion_11_tensor():
    failures = []
    # the worked example: note the element list of the paper gives
    # 3*7 + 9*2 = 39 generators on 63 colors with 6 relations
    from test_tensor import worked_G, worked_H

    G, H = worked_G(), worked_H()
    pres = tensor_presentation(G, H)
    n_gen = len(pres.generators.elements)
    n_col = len(pres.generators.colors)
    A = generating_object_of_graph(G)
    B = generating_object_of_graph(H)
    formula = len(A.elements) * len(B.colors) + \
        len(A.colors) * len(B.elements)
    if n_col != 63:
        failures.append(("colors", n_col))
    if n_gen != formula or formula != 39:
        failures.append(("generators", n_gen, formula))
    if len(pres.relations) != 6:
        failures.append(("relations", len(pres.relations)))
    # decomposition lengths equal m*n on special pairs up to 3 vertices
    A1 = GeneratingObject(("a",), (("p", ("a",), ("a", "a")),
                                   ("r", ("a", "a"), ("a",))))
    B1 = GeneratingObject(("b",), (("q", ("b",), ("b",)),))

    def linear_el(O, names):
        els = {nm: (i, o) for nm, i, o in O.elements}
        decs = tuple(names)
        ins = tuple(els[nm][0] for nm in names)
        outs = tuple(els[nm][1] for nm in names)
        edges = tuple(((k, 0), (k + 1, 0)) for k in range(len(names) - 1))
        used_in = {e[1] for e in edges}
        used_out = {e[0] for e in edges}
        inputs = tuple((i, s) for i in range(len(names))
                       for s in range(len(ins[i]))
                       if (i, s) not in used_in)
        outputs = tuple((i, s) for i in range(len(names))
                        for s in range(len(outs[i]))
                        if (i, s) not in used_out)
        return DecoratedGraph(decs, ins, outs, edges, inputs,
                              outputs).check()

    shapes_p = [["p"], ["r"], ["p", "r"], ["r", "p"], ["p", "r", "p"]]
    shapes_q = [["q"], ["q", "q"], ["q", "q", "q"]]
    counted = 0
    for np_ in shapes_p:
        for nq in shapes_q:
            p_el = linear_el(A1, np_)
            q_el = linear_el(B1, nq)
            chain = distributivity_decompose(A1, B1, p_el, q_el)
            counted += 1
            if len(chain.steps) != len(np_) * len(nq):
                failures.append(("length", np_, nq, len(chain.steps)))
            for step in chain.steps:
                step.before.check()
                step.after.check()
    # the (1, 2) case is two steps
    two = distributivity_decompose(
        A1, B1, linear_el(A1, ["p", "r"]), linear_el(B1, ["q"]))
    if len(two.steps) != 2:
        failures.append(("one-two-case", len(two.steps)))
    verdict(11, not failures,
            f"worked presentation: {n_gen} generators on {n_col} colors "
            f"with {len(pres.relations)} relations; {counted} rewrite "
            f"chains of length mn; {len(failures)} failures {failures[:3]}")
