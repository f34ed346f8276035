"""Mixed coface/codegeneracy identities, the pgc generation law, class
inclusions, and nerve functoriality on codimension-2 squares."""

import pytest

from properads import analysis
from properads.category import (
    all_isomorphisms,
    codegeneracy_map,
    codim2_alternatives,
    compose,
    contracting_expansion,
    degeneracy_vertices,
    faces,
    factorize,
    identity_map,
    maps_equal_up_to_source_iso,
)
from properads.corpus import generate_corpus
from properads.finprop import MonoidPropad
from properads.graphs import (
    dioperadic,
    iso_up_to_listing,
    partially_grafted,
    strict_iso,
)
from properads.nerve import NerveSet
from properads.wheeled import wheeled_factorize

CORPUS_WF = generate_corpus(3, 2, 1, wheeled=False)
CORPUS_W = generate_corpus(2, 2, 1, wheeled=True)


def equal_up_to_target_iso(m1, m2) -> bool:
    if m1.source is not m2.source:
        return False
    for iso in all_isomorphisms(m1.target, m2.target):
        if compose(iso, m1, wheeled=True).same(m2):
            return True
    return False


def test_codegeneracies_commute():
    # s^u s^v = s^v s^u whenever two (1;1) vertices coexist
    checked = 0
    for G in generate_corpus(3, 2, 2, wheeled=False):
        degs = degeneracy_vertices(G)
        if len(degs) < 2:
            continue
        u, v = degs[0], degs[1]
        su = codegeneracy_map(G, u)
        sv = codegeneracy_map(G, v)
        left = compose(codegeneracy_map(su.target, v), su)
        right = compose(codegeneracy_map(sv.target, u), sv)
        assert equal_up_to_target_iso(left, right), G
        checked += 1
    assert checked >= 3


def test_mixed_coface_codegeneracy_identities():
    """s^v d composites reduce to at most one codegeneracy and at most one
    coface, matching the mixed identities."""
    checked = 0
    for wheeled, corpus in ((False, CORPUS_WF), (True, CORPUS_W)):
        for K in corpus:
            if K.n_vertices < 1:
                continue
            try:
                fs = faces(K, wheeled=wheeled)
            except analysis.ClassViolation:
                continue
            for d in fs:
                if d.tag[0] == "exceptional-inner":
                    continue
                for v in degeneracy_vertices(K):
                    comp = compose(codegeneracy_map(K, v), d,
                                   wheeled=wheeled)
                    mf = (wheeled_factorize(comp) if wheeled
                          else factorize(comp))
                    assert len(mf.codegeneracies) <= 1
                    assert len(mf.inner_cofaces) + \
                        len(mf.outer_cofaces) <= 1
                    assert mf.recompose(wheeled=wheeled).same(comp)
                    checked += 1
            if checked > 60:
                break
        assert checked >= 10


def test_pgc_generated_by_contractions():
    # a partially grafted corollas with alpha edges arises from a dioperadic
    # graph by alpha - 1 outer contracting cofaces
    target3 = partially_grafted(["*", "*", "*"], [], [], ["*", "*", "*"],
                                j=1, i=1, alpha=3)
    cur = dioperadic(["*", "*", "*"], [], [], ["*", "*", "*"], j=1, i=1)
    for _ in range(2):
        # connect the last input leg of the top to the last output leg of
        # the bottom (all one-colored)
        m = contracting_expansion(cur, len(cur.g_in) - 1,
                                  len(cur.g_out) - 1)
        cur = m.target
    assert iso_up_to_listing(cur, target3) is not None



def test_class_inclusion_chain_on_corpus():
    for G in generate_corpus(3, 3, 2, wheeled=True):
        cls = analysis.classify(G)
        if cls.linear:
            assert cls.unital_tree
        if cls.unital_tree:
            assert cls.simply_connected
        if cls.simply_connected:
            assert cls.connected and cls.wheel_free
        if cls.special:
            assert cls.non_empty_inputs and cls.non_empty_outputs


def test_nonempty_inout_remark():
    # a connected wheel-free graph with non-empty inputs has graph inputs
    for G in CORPUS_WF:
        cls = analysis.classify(G)
        if not cls.connected or G.n_vertices == 0:
            continue
        if cls.non_empty_inputs:
            assert len(G.g_in) > 0, G
        if cls.non_empty_outputs:
            assert len(G.g_out) > 0, G


def test_nerve_functorial_on_codim2_squares():
    P = MonoidPropad([0, 1], lambda a, b: (a + b) % 2, 0, name="Z2f")
    X = NerveSet(P)
    squares = 0
    for G in CORPUS_WF:
        if G.n_vertices < 2:
            continue
        try:
            fs = faces(G)
        except analysis.ClassViolation:
            continue
        for d_u in fs[:2]:
            try:
                fs2 = faces(d_u.source)
            except analysis.ClassViolation:
                continue
            for d_v in fs2[:2]:
                alts = codim2_alternatives(d_v, d_u)
                if not alts:
                    continue
                d_y, d_x = alts[0]
                comp1 = compose(d_u, d_v)
                comp2 = compose(d_x, d_y)
                for iso in all_isomorphisms(comp1.source, comp2.source):
                    if compose(comp2, iso, wheeled=True).same(comp1):
                        for x in X.value(G):
                            lhs = X.restrict(comp1, x)
                            rhs = X.restrict(
                                iso, X.restrict(comp2, x))
                            assert lhs == rhs
                        squares += 1
                        break
                if squares >= 8:
                    return
    assert squares >= 1
