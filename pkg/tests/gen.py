"""Generators and small fixtures shared by the tests."""

import itertools
import random
from pathlib import Path

from twocat.core import FinCat, Functor, TwoCat, enumerate_functors
from twocat.kan import functor_from_tables

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def chain(n, name=None):
    els = [str(i) for i in range(n)]
    return FinCat.preorder(els, [(a, b) for a in els for b in els if int(a) < int(b)], name=name or f"[{n}]")


def chaotic(n, name="C"):
    els = "abcdefgh"[:n]
    return FinCat.preorder(list(els), [(a, b) for a in els for b in els], name=name)


def vee():
    """Two minimal elements under a top."""
    return FinCat.preorder(["0", "1", "2"], [("0", "2"), ("1", "2")], name="V")


def bz2():
    """One object, one 1-cell, 2-cells the group Z/2."""
    cells2 = {"e": ("i", "i"), "s": ("i", "i")}
    mult = {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"}
    return TwoCat(["*"], {"i": ("*", "*")}, {"*": "i"}, {("i", "i"): "i"}, cells2, {"i": "e"},
                  mult, mult, name="BZ2")


def cat_1c():
    return TwoCat.from_categories({"1": FinCat.terminal(), "C": chaotic(2)}, name="Cat(1,C)")


def cat_1_2():
    return TwoCat.from_categories({"1": FinCat.terminal(), "2": chain(2)}, name="Cat(1,2)")


def random_preorder(rng, n, name=None):
    els = [str(i) for i in range(n)]
    rel = {(a, a) for a in els}
    for a in els:
        for b in els:
            if a != b and rng.random() < 0.35:
                rel.add((a, b))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return FinCat.preorder(els, sorted(rel), name=name)


def random_functor(rng, C, D):
    fs = list(enumerate_functors(C, D))
    return fs[rng.randrange(len(fs))]


def poset_diagram(rng, I, max_size=3):
    """A strict functor from a locally discrete poset I into CAT.

    Covering arrows get random monotone maps between random preorders; the
    rest are composites, so functoriality holds by construction.
    """
    P = I.underlying()
    cats = {a: random_preorder(rng, rng.randint(1, max_size), name=f"F{a}") for a in P.objects}
    covers = [m for m, (s, t) in P.morphisms.items() if s != t and not any(
        P.hom(s, x) and P.hom(x, t) for x in P.objects if x not in (s, t))]
    fun = {m: random_functor(rng, cats[P.src(m)], cats[P.tgt(m)]) for m in covers}

    def along(s, t):
        if s == t:
            return Functor.identity(cats[s])
        m = next(m for m in covers if P.src(m) == s and P.hom(P.tgt(m), t))
        return fun[m].then(along(P.tgt(m), t))

    functors = {m: along(s, t) for m, (s, t) in P.morphisms.items() if s != t}
    return functor_from_tables(I, cats, functors, name="F")


def realization_diagram(K):
    """The inclusion of a sub-2-category of CAT built by from_categories."""
    r = K.realization
    return functor_from_tables(K, {a: r["categories"][a] for a in K.objects}, dict(r["functors"]),
                               dict(r["transformations"]), name="incl")


def two_terminal(I):
    out = []
    for t in I.objects:
        ok = True
        for i in I.objects:
            fs = I.one_cells(i, t)
            if not fs or any(len(I.two_cells(f, g)) != 1 for f in fs for g in fs):
                ok = False
        if ok:
            out.append(t)
    return out


def filtered_diagrams(count=20, seed=7):
    """(name, I, F) with I 2-filtered, at most 3 objects, a 2-terminal object, hom sizes <= 6."""
    rng = random.Random(seed)
    shapes = [
        ("point", lambda: TwoCat.locally_discrete(chain(1))),
        ("chain2", lambda: TwoCat.locally_discrete(chain(2))),
        ("chain3", lambda: TwoCat.locally_discrete(chain(3))),
        ("vee", lambda: TwoCat.locally_discrete(vee())),
    ]
    cat_shapes = [
        ("Cat(1,C)", lambda: TwoCat.from_categories({"1": FinCat.terminal(), "C": chaotic(2)})),
        ("Cat(C)", lambda: TwoCat.from_categories({"C": chaotic(2)})),
        ("Cat(C,D)", lambda: TwoCat.from_categories({"C": chaotic(2), "D": chaotic(2, name="D")})),
    ]
    out = []
    for k in range(count):
        if k % 4 == 3:
            name, make = cat_shapes[(k // 4) % len(cat_shapes)]
            I = make()
            out.append((name, I, realization_diagram(I)))
        else:
            name, make = shapes[rng.randrange(len(shapes))]
            I = make()
            out.append((name, I, poset_diagram(rng, I)))
    return out


def fork():
    """a -x-> b with f, g: b -> c and f x = g x."""
    mors = {"1_a": ("a", "a"), "1_b": ("b", "b"), "1_c": ("c", "c"),
            "x": ("a", "b"), "f": ("b", "c"), "g": ("b", "c"), "fx": ("a", "c")}
    ids = {"a": "1_a", "b": "1_b", "c": "1_c"}
    comp = {}
    for m, (s, t) in mors.items():
        comp[(ids[t], m)] = m
        comp[(m, ids[s])] = m
    comp[("f", "x")] = comp[("g", "x")] = "fx"
    return FinCat(["a", "b", "c"], mors, ids, comp, name="E")


def cat_fork():
    return TwoCat.from_categories({"1": FinCat.terminal(), "2": chain(2), "E": fork()}, name="Cat(1,2,E)")


def iso_pair():
    """Parallel 1-cells f, g: A -> B joined by an invertible 2-cell phi."""
    ones = {"id_A": ("A", "A"), "id_B": ("B", "B"), "f": ("A", "B"), "g": ("A", "B")}
    comp1 = {("id_A", "id_A"): "id_A", ("id_B", "id_B"): "id_B"}
    for h in ("f", "g"):
        comp1[(h, "id_A")] = comp1[("id_B", h)] = h
    cells2 = {"1_" + h: (h, h) for h in ones}
    cells2.update({"phi": ("f", "g"), "psi": ("g", "f")})
    id2 = {h: "1_" + h for h in ones}
    v = {}
    for c, (s, t) in cells2.items():
        v[(id2[t], c)] = c
        v[(c, id2[s])] = c
    v[("psi", "phi")], v[("phi", "psi")] = "1_f", "1_g"
    hc = {("1_id_A", "1_id_A"): "1_id_A", ("1_id_B", "1_id_B"): "1_id_B"}
    for c, (s, t) in cells2.items():
        if s in ("f", "g"):
            hc[(c, "1_id_A")] = hc[("1_id_B", c)] = c
    return TwoCat(["A", "B"], ones, {"A": "id_A", "B": "id_B"}, comp1, cells2, id2, v, hc, name="Iso2")


def _covers(P):
    return [m for m, (s, t) in P.morphisms.items() if s != t and not any(
        P.hom(s, x) and P.hom(x, t) for x in P.objects if x not in (s, t))]


def random_pro_object(rng, K, P, name=None):
    """A strict X: P^op -> K over a locally discrete poset, built from random cover images."""
    from twocat.pro import ProObject
    covers = _covers(P)
    for _ in range(200):
        obj = {a: rng.choice(list(K.objects)) for a in P.objects}
        if all(K.one_cells(obj[P.tgt(m)], obj[P.src(m)]) for m in covers):
            break
    cover_img = {m: rng.choice(K.one_cells(obj[P.tgt(m)], obj[P.src(m)])) for m in covers}

    def along(s, t):
        # X of the arrow s -> t, a 1-cell X_t -> X_s
        if s == t:
            return K.id1(obj[s])
        m = next(m for m in covers if P.src(m) == s and P.hom(P.tgt(m), t))
        return K.comp1(cover_img[m], along(P.tgt(m), t))

    one = {m: along(s, t) for m, (s, t) in P.morphisms.items() if s != t}
    return ProObject(TwoCat.locally_discrete(P), K, obj, one, name=name)
