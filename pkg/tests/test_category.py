"""Graphical category: morphisms, images, graphical maps, factorization."""

import pytest

from properads import analysis
from properads.category import (
    GMap,
    MorphismError,
    codegeneracy_map,
    codim2_alternatives,
    coface_map,
    compose,
    corolla_inclusion,
    enumerate_elements,
    enumerate_graphical_maps,
    faces,
    factorize,
    identity_map,
    image,
    is_finite,
    is_graphical,
    maps_equal_up_to_source_iso,
    reedy_classify,
    subgraph_witness,
    cycle_witness_family,
)
from properads.decorated import (
    DecoratedGraph,
    corolla_element,
    exceptional_element,
)
from properads.graphs import (
    contracted_corolla,
    corolla_mn,
    dioperadic,
    exceptional_edge,
    linear_graph,
    make_graph,
    partially_grafted,
    strict_iso,
)
from properads.substitution import (
    inner_properadic_factorizations,
    outer_properadic_factorizations,
)


def double_edge():
    """u doubly above v: the simplest non simply connected wheel-free graph."""
    return make_graph(
        {
            "u": {"in": (), "out": (0, 1)},
            "v": {"in": (2, 3), "out": ()},
        },
        iota={0: 2, 2: 0, 1: 3, 3: 1},
    )


def graph_K():
    return make_graph(
        {
            "u": {"in": (), "out": (0, 1)},
            "v": {"in": (2,), "out": (3, 4)},
            "w": {"in": (5, 6, 7), "out": ()},
        },
        iota={0: 2, 2: 0, 1: 5, 5: 1, 3: 6, 6: 3, 4: 7, 7: 4},
    )


def test_identity_and_compose():
    G = linear_graph(2)
    i = identity_map(G)
    assert compose(i, i).same(i)


def test_generating_object_double_edge():
    from properads.category import generating_object
    G = double_edge()
    gen = generating_object(G)
    assert set(gen) == {"u", "v"}
    assert len(gen["u"][0]) == 0 and len(gen["u"][1]) == 2
    assert len(gen["v"][0]) == 2 and len(gen["v"][1]) == 0


def test_enumerate_linear2_six_elements():
    L2 = linear_graph(2)
    els = enumerate_elements(L2, 2)
    assert len(els) == 6


def test_enumerate_arrow_unit_only():
    up = exceptional_edge("c")
    els = enumerate_elements(up, 5)
    assert len(els) == 1


def test_is_finite_matches_simple_connectivity():
    assert is_finite(linear_graph(3))
    assert is_finite(corolla_mn(2, 1))
    assert not is_finite(double_edge())
    assert not is_finite(graph_K())


def test_enumeration_growth_iff_not_simply_connected():
    # simply connected: counts stabilize; otherwise they grow
    L2 = linear_graph(2)
    assert len(enumerate_elements(L2, 2)) == len(enumerate_elements(L2, 3))
    D = double_edge()
    assert len(enumerate_elements(D, 2)) < len(enumerate_elements(D, 4))


def test_cycle_witness_family_distinct():
    D = double_edge()
    seen = set()
    for n in range(1, 6):
        el = cycle_witness_family(D, n)
        assert el.n_instances == 2 * n
        seen.add(el.canonical_unlisted)
    assert len(seen) == 5


def test_image_of_codegeneracy_is_target():
    L3 = linear_graph(3)
    s = codegeneracy_map(L3, "v1")
    img = image(s)
    assert strict_iso(img.shape, s.target) is not None



def test_image_of_inner_coface_is_target():
    K = graph_K()
    fact = inner_properadic_factorizations(K)[0]
    d = coface_map(K, fact)
    img = image(d)
    assert strict_iso(img.shape, K) is not None



def test_image_of_outer_coface_is_source():
    K = graph_K()
    fact = next(f for f in outer_properadic_factorizations(K)
                if f.witness == ("almost-isolated", "u"))
    d = coface_map(K, fact)
    img = image(d)
    assert strict_iso(img.shape, d.source) is not None



def test_cofaces_and_codegeneracies_are_graphical():
    K = graph_K()
    for d in faces(K):
        assert is_graphical(d)
    L3 = linear_graph(3)
    for v in L3.vertex_names:
        assert is_graphical(codegeneracy_map(L3, v))


def test_counterexample_phizero_not_graphical():
    # G: corolla with 2 in, 2 out; H: double edge graph with 3 edges e,f,g
    G = corolla_mn(2, 2, name="u")
    H = make_graph(
        {
            "v": {"in": (), "out": (0, 1, 2)},
            "w": {"in": (3, 4, 5), "out": ()},
        },
        iota={0: 3, 3: 0, 1: 4, 4: 1, 2: 5, 5: 2},
    )
    e, f, g = H.internal_edges
    i1, i2 = G.in_edges(None)
    o1, o2 = G.out_edges(None)
    f0 = {i1: e, i2: g, o1: e, o2: g}
    # phi1(u): w above... the 2-vertex element with one internal edge f
    el = DecoratedGraph(
        decorations=("v", "w"),
        ins=(H.in_edges("v"), H.in_edges("w")),
        outs=(H.out_edges("v"), H.out_edges("w")),
        edges=(((0, 1), (1, 1)),),
        inputs=((1, 0), (1, 2)),
        outputs=((0, 0), (0, 2)),
    )
    phi = GMap(G, H, f0, {"u": el}).check()
    assert not is_graphical(phi)


def test_counterexample_idonedge_not_graphical():
    G = double_edge()
    e, f = G.internal_edges
    f0 = {e: e, f: f}
    elv = corolla_element("v", G.in_edges("v"), G.out_edges("v"))
    elu = DecoratedGraph(
        decorations=("u", "u", "v"),
        ins=(G.in_edges("u"), G.in_edges("u"), G.in_edges("v")),
        outs=(G.out_edges("u"), G.out_edges("u"), G.out_edges("v")),
        edges=(((0, 0), (2, 0)), ((1, 1), (2, 1))),
        inputs=(),
        outputs=((0, 1), (1, 0)),
    ).relist_for_profile((), (e, f))
    phi = GMap(G, G, f0, {"v": elv, "u": elu}).check()
    assert not is_graphical(phi)
    assert is_graphical(identity_map(G))


def test_subgraph_corolla_inclusion():
    K = graph_K()
    for v in K.vertex_names:
        inc = corolla_inclusion(K, v)
        w = subgraph_witness(inc)
        assert w is not None
        assert len(w.chain) == K.n_vertices - 1


def test_subgraph_uniqueness_by_profiles():
    from properads.category import all_subgraph_elements
    K = graph_K()
    subs = all_subgraph_elements(K)
    profiles = [(tuple(sorted(s.input_colors(), key=repr)),
                 tuple(sorted(s.output_colors(), key=repr)))
                for s in subs]
    assert len(profiles) == len(set(profiles))


def test_factorize_coface_trivial():
    K = graph_K()
    fact = inner_properadic_factorizations(K)[0]
    d = coface_map(K, fact)
    mf = factorize(d)
    assert not mf.codegeneracies
    assert len(mf.inner_cofaces) == 1
    assert not mf.outer_cofaces
    assert mf.recompose().same(d)


def test_factorize_corolla_inclusion():
    K = graph_K()
    inc = corolla_inclusion(K, "v")
    mf = factorize(inc)
    assert not mf.codegeneracies
    assert not mf.inner_cofaces
    assert len(mf.outer_cofaces) == 2
    assert mf.recompose().same(inc)


def test_factorize_codegeneracy_then_coface_roundtrip():
    from properads.category import inner_expansion
    L3 = linear_graph(3)
    s = codegeneracy_map(L3, "v1")
    L2 = s.target
    v = L2.vertex_names[0]
    d = inner_expansion(L2, v, in_split=[1] * len(L2.vin[v]),
                        out_split=[0] * len(L2.vout[v]), alpha=1)
    f = compose(d, s)
    mf = factorize(f)
    assert len(mf.codegeneracies) == 1
    assert mf.recompose().same(f)


def test_delta_embedding_counts():
    # |graphical maps L_m -> L_n| = |monotone maps [m] -> [n]|
    def monotone_count(m, n):
        import itertools
        count = 0
        for fn in itertools.product(range(n + 1), repeat=m + 1):
            if all(fn[i] <= fn[i + 1] for i in range(m)):
                count += 1
        return count

    for m in range(0, 3):
        for n in range(0, 3):
            Lm, Ln = linear_graph(m), linear_graph(n)
            maps = enumerate_graphical_maps(Lm, Ln)
            assert len(maps) == monotone_count(m, n), (m, n)


def test_maps_from_arrow_are_edges():
    K = graph_K()
    maps = enumerate_graphical_maps(exceptional_edge("*"), K)
    assert len(maps) == len(K.edges)


def test_no_maps_to_arrow_from_multi_output():
    G = corolla_mn(1, 2)
    assert enumerate_graphical_maps(G, exceptional_edge("*")) == []


def test_edge_determination():
    # two graphical maps with the same f0 agree
    K = graph_K()
    maps = enumerate_graphical_maps(linear_graph(1), K)
    by_f0 = {}
    for m in maps:
        key = tuple(sorted((e.key(), m.f0[e].key()) for e in m.source.edges))
        assert key not in by_f0
        by_f0[key] = m


def test_reedy_classification():
    K = graph_K()
    d = coface_map(K, inner_properadic_factorizations(K)[0])
    assert reedy_classify(d) == "plus"
    L3 = linear_graph(3)
    s = codegeneracy_map(L3, "v1")
    assert reedy_classify(s) == "minus"
    assert reedy_classify(identity_map(K)) == "iso"


def test_codim2_inner_inner():
    K = graph_K()
    # two composable inner cofaces: merge (v,w) then (u,vw)
    fact1 = next(f for f in inner_properadic_factorizations(K)
                 if frozenset(f.witness[1:]) == frozenset({"v", "w"}))
    d_u = coface_map(K, fact1)
    H = d_u.source
    fact2 = inner_properadic_factorizations(H)[0]
    d_v = coface_map(H, fact2)
    alts = codim2_alternatives(d_v, d_u)
    assert len(alts) >= 1
    d_y, d_x = alts[0]
    comp1 = compose(d_u, d_v)
    comp2 = compose(d_x, d_y)
    assert maps_equal_up_to_source_iso(comp1, comp2)
