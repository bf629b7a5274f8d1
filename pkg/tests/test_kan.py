import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import (chain, chaotic, filtered_diagrams, random_functor, random_preorder, realization_diagram,
                 two_terminal, vee)
from twocat.core import (FinCat, Functor, NatTrans, TwoCat, check_functor, equivalence_of_categories,
                         sort_key)
from twocat.errors import NotFiltered
from twocat.kan import (comparison_functor, constant_functor, count_mediators, factor_through,
                        functor_from_tables, ll_colimit, pseudo_limit_cat, terminal_equivalence)
from twocat.maps import CAT, PseudoCocone, check_pseudo_cocone, check_pseudo_cone
from twocat.pro import inclusion


def _discrete_diagram(rng, I):
    P = I.underlying()
    cats = {a: FinCat.discrete([f"{a}.{k}" for k in range(rng.randint(1, 3))]) for a in P.objects}
    covers = [m for m, (s, t) in P.morphisms.items() if s != t and not any(
        P.hom(s, x) and P.hom(x, t) for x in P.objects if x not in (s, t))]
    fun = {m: random_functor(rng, cats[P.src(m)], cats[P.tgt(m)]) for m in covers}

    def along(s, t):
        if s == t:
            return Functor.identity(cats[s])
        m = next(m for m in covers if P.src(m) == s and P.hom(P.tgt(m), t))
        return fun[m].then(along(P.tgt(m), t))

    return functor_from_tables(I, cats, {m: along(s, t) for m, (s, t) in P.morphisms.items() if s != t})


def _set_colimit_size(F, I):
    # oracle: disjoint union modulo x ~ F(u)(x), by union-find
    parent = {}
    for i in I.objects:
        for x in F.ob(i).objects:
            parent[(x, i)] = (x, i)

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for u in I.cells1:
        i, j = I.src1(u), I.tgt1(u)
        for x in F.ob(i).objects:
            ra, rb = find((x, i)), find((F.on1(u)(x), j))
            if ra != rb:
                parent[ra] = rb
    return len({find(a) for a in parent})


def _iso_classes(C):
    seen, n = set(), 0
    for a in C.objects:
        if a in seen:
            continue
        n += 1
        seen |= {b for b in C.objects if C.isos(a, b)}
    return n


@given(st.integers(0, 10**6), st.sampled_from(["chain2", "chain3", "vee"]))
@settings(max_examples=25, deadline=None)
def test_colimit_of_sets(seed, shape):
    I = TwoCat.locally_discrete({"chain2": chain(2), "chain3": chain(3), "vee": vee()}[shape])
    F = _discrete_diagram(random.Random(seed), I)
    P = ll_colimit(F)
    L = P.category
    assert check_pseudo_cocone(P.cocone).ok
    assert _iso_classes(L) == _set_colimit_size(F, I)
    # a colimit of discrete categories is equivalent to a discrete one: every arrow is invertible
    # and parallel arrows agree
    assert all(L.is_iso(m) for m in L.morphisms)
    assert all(len(L.hom(a, b)) <= 1 for a in L.objects for b in L.objects)


def test_classes_are_named_by_least_member():
    name, I, F = filtered_diagrams(count=1, seed=3)[0]
    P = ll_colimit(F)
    for c, members in P.classes.items():
        assert c == min(members, key=sort_key)
        assert all(P.class_of[m] == c for m in members)


def test_not_filtered_is_rejected():
    I = TwoCat.locally_discrete(FinCat.discrete(["x", "y"]))
    F = constant_functor(I, chain(2))
    with pytest.raises(NotFiltered):
        ll_colimit(F)


def test_colimit_of_constant_diagram():
    I = TwoCat.locally_discrete(chain(3))
    F = constant_functor(I, chaotic(2))
    P = ll_colimit(F)
    for i in I.objects:
        assert equivalence_of_categories(P.leg(i)).verdict


@pytest.mark.parametrize("k", range(6))
def test_terminal_legs_are_equivalences(k):
    name, I, F = filtered_diagrams(count=6, seed=11)[k]
    P = ll_colimit(F)
    for t in two_terminal(I):
        assert terminal_equivalence(P, t).verdict


def test_mediator_from_a_second_cocone():
    rng = random.Random(4)
    I = TwoCat.locally_discrete(chain(2))
    A, B = random_preorder(rng, 2, name="A"), random_preorder(rng, 3, name="B")
    u = random_functor(rng, A, B)
    F = functor_from_tables(I, {"0": A, "1": B}, {"0->1": u})
    P = ll_colimit(F)
    # cocone with vertex F(1): legs u and id, identity cells
    idB = Functor.identity(B)
    legs = {"0": u, "1": idB}
    cells = {m: NatTrans.identity(CAT.comp1(legs[I.tgt1(m)], F.on1(m))) for m in I.cells1}
    test = PseudoCocone(F, B, legs, cells)
    assert check_pseudo_cocone(test).ok
    M, cert = factor_through(P, test)
    assert cert and check_functor(M).ok
    assert M.then(idB) == M
    assert CAT.comp1(M, P.leg("1")) == idB
    assert CAT.comp1(M, P.leg("0")) == u
    assert count_mediators(P, test) == 1


def test_own_cocone_factors_through_identity():
    name, I, F = filtered_diagrams(count=2, seed=5)[1]
    P = ll_colimit(F)
    M, cert = factor_through(P, P.cocone)
    assert cert and M == Functor.identity(P.category)


# ---------------------------------------------------------------- pseudo-limits


def _limit_oracle_arrow(A, B, u):
    # objects (x, y, phi: u x ~ y); morphisms (f, g) with phi' u(f) = g phi
    objs = [(x, y, p) for x in A.objects for y in B.objects for p in B.isos(u(x), y)]
    n = 0
    for (x, y, p), (x2, y2, p2) in itertools.product(objs, repeat=2):
        for f in A.hom(x, x2):
            for g in B.hom(y, y2):
                if B.compose(p2, u(f)) == B.compose(g, p):
                    n += 1
    return len(objs), n


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_pseudo_limit_of_an_arrow(seed):
    rng = random.Random(seed)
    A, B = random_preorder(rng, rng.randint(1, 3), name="A"), random_preorder(rng, rng.randint(1, 3), name="B")
    u = random_functor(rng, A, B)
    D = TwoCat.locally_discrete(chain(2))
    F = functor_from_tables(D, {"0": A, "1": B}, {"0->1": u})
    P = pseudo_limit_cat(F)
    assert (len(P.category.objects), len(P.category.morphisms)) == _limit_oracle_arrow(A, B, u)
    assert check_pseudo_cone(P.cone).ok
    M, exact = factor_through(P, P.cone)
    assert exact and M == Functor.identity(P.category)


def test_pseudo_limit_of_discrete_diagram_is_product():
    D = TwoCat.locally_discrete(FinCat.discrete(["x", "y"]))
    A, B = chain(2), chaotic(2)
    F = functor_from_tables(D, {"x": A, "y": B}, {})
    P = pseudo_limit_cat(F)
    assert len(P.category.objects) == 4
    assert len(P.category.morphisms) == len(A.morphisms) * len(B.morphisms)
    assert count_mediators(P, P.cone) == 1


# ---------------------------------------------------------------- comparison along cofinal maps


@pytest.mark.parametrize("k", range(8))
def test_comparison_along_terminal_inclusion(k):
    name, I, F = filtered_diagrams(count=8, seed=21)[k]
    t = two_terminal(I)[0]
    _, inc = inclusion(I, [t])
    h, d, _ = comparison_functor(inc, F)
    assert d.verdict and check_functor(h).ok


def test_comparison_fails_for_non_cofinal():
    I = TwoCat.locally_discrete(chain(2))
    A, B = FinCat.discrete(["a"]), FinCat.discrete(["b0", "b1"])
    F = functor_from_tables(I, {"0": A, "1": B}, {"0->1": Functor(A, B, {"a": "b0"}, {"1_a": "1_b0"})})
    _, inc = inclusion(I, ["0"])
    _, d, _ = comparison_functor(inc, F)
    assert not d.verdict and d.clause == "ess-surj"


def test_realization_diagram_of_cat_1c():
    K = TwoCat.from_categories({"1": FinCat.terminal(), "C": chaotic(2)})
    P = ll_colimit(realization_diagram(K))
    assert equivalence_of_categories(P.leg("1")).verdict
    assert equivalence_of_categories(P.leg("C")).verdict
