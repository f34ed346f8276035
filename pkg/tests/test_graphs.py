"""Kernel tests: constructors, validation, edge classification, isomorphism."""

import pytest

from properads.graphs import (
    GraphError,
    contracted_corolla,
    corolla,
    corolla_mn,
    dioperadic,
    empty_graph,
    exceptional_edge,
    exceptional_loop,
    iso_up_to_listing,
    isolated_vertices,
    linear_graph,
    make_graph,
    partially_grafted,
    permuted_corolla,
    relabel,
    standard_graph,
    strict_iso,
)


def test_empty_graph():
    G = empty_graph()
    assert G.flags == ()
    assert G.vertex_names == ()
    assert G.edges == ()


def test_exceptional_edge_structure():
    G = exceptional_edge("c")
    assert len(G.flags) == 2
    assert G.vertex_names == ()
    (e,) = G.edges
    assert e.kind == "exceptional-edge"
    assert not e.is_internal
    assert G.in_profile() == ("c",)
    assert G.out_profile() == ("c",)


def test_exceptional_loop_structure():
    G = exceptional_loop("c")
    (e,) = G.edges
    assert e.kind == "exceptional-loop"
    assert e.is_internal
    assert G.in_profile() == ()
    assert G.out_profile() == ()


def test_non_involutive_iota_rejected():
    with pytest.raises(GraphError, match="non-involutive"):
        make_graph(
            {"v": {"in": (0, 1, 2), "out": ()}},
            iota={0: 1, 1: 2, 2: 0},
        )


def test_pi_fixed_point_rejected():
    with pytest.raises(GraphError):
        make_graph(
            {},
            exceptional=(0,),
            pi={0: 0},
            exceptional_direction={0: 1},
        )


def test_corolla_counts():
    C = corolla(("a", "b"), ("c",))
    assert len(C.flags) == 3
    assert C.n_vertices == 1
    assert not C.internal_edges
    assert C.in_profile() == ("a", "b")
    assert C.out_profile() == ("c",)


def test_contracted_corolla_one_internal_edge():
    G = contracted_corolla(("a", "b"), ("b", "c"), i=1, j=2)
    assert len(G.internal_edges) == 1
    (e,) = G.internal_edges
    assert e.kind == "loop"
    assert G.in_profile() == ("a",)
    assert G.out_profile() == ("c",)


def test_contracted_corolla_color_mismatch():
    with pytest.raises(GraphError):
        contracted_corolla(("a",), ("b",), i=1, j=1)


def test_partially_grafted_alpha_edges():
    for alpha in (1, 2, 3):
        cols = ["*"] * alpha
        G = partially_grafted(cols + ["x"], ["y"], ["z"], cols,
                              j=1, i=1, alpha=alpha)
        assert len(G.internal_edges) == alpha
        assert G.n_vertices == 2


def test_dioperadic_profiles():
    G = dioperadic(("c1", "c2"), ("d1",), ("a1",), ("c2", "b2"), j=2, i=1)
    assert G.in_profile() == ("c1", "a1")
    assert G.out_profile() == ("d1", "b2")
    assert len(G.internal_edges) == 1


def test_linear_graph():
    L3 = linear_graph(3)
    assert L3.n_vertices == 3
    assert len(L3.internal_edges) == 2
    assert len(L3.g_in) == 1 and len(L3.g_out) == 1
    L0 = linear_graph(0)
    assert L0.vertex_names == ()


def test_standard_graph_validates():
    cases = [
        ("empty", {}),
        ("isolated-vertices", {"n": 2}),
        ("exceptional-edge", {"color": "c"}),
        ("exceptional-loop", {"color": "c"}),
        ("corolla", {"inputs": ("a",), "outputs": ("b", "c")}),
        ("contracted-corolla", {"inputs": ("a", "b"), "outputs": ("b",),
                                "i": 1, "j": 2}),
        ("partially-grafted", {"top_in": ("s", "t"), "top_out": ("u",),
                               "bot_in": ("w",), "bot_out": ("s", "t"),
                               "j": 1, "i": 1, "alpha": 2}),
        ("dioperadic", {"top_in": ("s",), "top_out": ("u",),
                        "bot_in": ("w",), "bot_out": ("s",), "j": 1, "i": 1}),
        ("linear", {"n": 2}),
    ]
    for kind, kw in cases:
        G = standard_graph(kind, **kw)
        assert G is not None


def test_relabel_identity_and_inverse():
    C = corolla_mn(2, 1)
    ident = relabel(C, (0,), (0, 1))
    assert strict_iso(C, ident) is not None
    tau = (1, 0)
    twice = relabel(relabel(C, (0,), tau), (0,), tau)
    assert strict_iso(C, twice) is not None


def test_relabel_breaks_strict_iso_with_colors():
    C = corolla(("a", "b"), ("c",))
    P = relabel(C, (0,), (1, 0))
    assert strict_iso(C, P) is None
    assert iso_up_to_listing(C, P) is not None


def test_relabel_one_colored_swap_not_strict():
    # one-colored C(2;1): swapping the two inputs preserves colors but not
    # the listing, so no strict isomorphism exists
    C = corolla_mn(2, 1)
    P = relabel(C, (0,), (1, 0))
    assert strict_iso(C, P) is None
    assert iso_up_to_listing(C, P) is not None


def test_strict_iso_reflexive():
    for G in (corolla_mn(2, 1), linear_graph(3), exceptional_edge("c"),
              exceptional_loop("c")):
        m = strict_iso(G, G)
        assert m is not None
        assert all(m[x] == x for x in G.flags)


def test_iso_arity_mismatch():
    assert strict_iso(corolla_mn(2, 1), corolla_mn(1, 2)) is None
    assert iso_up_to_listing(linear_graph(2), linear_graph(3)) is None


def test_iso_distinguishes_internal_edge_count():
    pgc = partially_grafted(["*", "*"], ["*"], ["*"], ["*", "*"],
                            j=1, i=1, alpha=2)
    dio = dioperadic(["*", "*"], ["*"], ["*"], ["*", "*"], j=1, i=1)
    assert iso_up_to_listing(pgc, dio) is None


def test_permuted_corolla_roundtrip():
    P = permuted_corolla(("a", "b"), ("c", "d"), (1, 0), (1, 0))
    assert P.in_profile() == ("b", "a")
    assert P.out_profile() == ("d", "c")


def test_isolated_vertices_not_graph_legs():
    G = isolated_vertices(3)
    assert G.n_vertices == 3
    assert G.flags == ()
