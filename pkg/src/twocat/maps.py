"""Maps between 2-categories: pseudo-functors, pseudo-natural transformations,
modifications, pseudo-cones and their coherence checkers.

Conventions: juxtaposition ``K.hcomp(b, a)`` is "b a" (a first) and
``K.vcomp(b, a)`` is "b after a".  A compositor ``comp(f, g)`` is the cell
``F(g) F(f) => F(g f)``.
"""

from __future__ import annotations

from typing import Mapping

from .core import (Decision, FinCat, Functor, ImplicitTwoCat, NatTrans, TwoCat, ValidationReport,
                   compose_functors, enumerate_nat_trans, hcomp_nat, inverse_nat, vcomp_nat)
from .errors import NonInvertibleCell, ShapeMismatch, UnknownCell


def _as_fn(m, what):
    if m is None:
        return None
    if callable(m) and not isinstance(m, Mapping):
        return m

    def look(x):
        try:
            return m[x]
        except KeyError:
            raise UnknownCell(f"{what} undefined on {x!r}") from None
    return look


# ---------------------------------------------------------------- CAT


class CatTwoCat(ImplicitTwoCat):
    """The 2-category of finite categories, functors and natural transformations."""

    objects = ()

    def src1(self, F):
        return F.source

    def tgt1(self, F):
        return F.target

    def id1(self, C):
        return Functor.identity(C)

    def comp1(self, G, F):
        return compose_functors(G, F)

    def src2(self, a):
        return a.source

    def tgt2(self, a):
        return a.target

    def id2(self, F):
        return NatTrans.identity(F)

    def vcomp(self, b, a):
        return vcomp_nat(b, a)

    def hcomp(self, b, a):
        return hcomp_nat(b, a)

    def inverse2(self, a):
        return inverse_nat(a)

    def two_cells(self, F, G):
        return enumerate_nat_trans(F, G)


CAT = CatTwoCat()


def as_twocat(K):
    """Accept a FinCat wherever a 2-category is expected (locally discrete)."""
    if isinstance(K, FinCat):
        return TwoCat.locally_discrete(K)
    return K


# ---------------------------------------------------------------- pseudo-functors


class PseudoFunctor:
    """A pseudo-functor; unit/compositor left as None means identity cells (strict)."""

    def __init__(self, source, target, obj, one, two, unit=None, comp=None, name=None):
        self.source = as_twocat(source)
        self.target = target
        self.name = name
        self._obj = _as_fn(obj, "object map")
        self._one = _as_fn(one, "1-cell map")
        self._two = _as_fn(two, "2-cell map")
        self._unit = _as_fn(unit, "unit cells")
        self._comp = comp if (comp is None or callable(comp)) else dict(comp)
        self.tables = {"obj": obj, "one": one, "two": two, "unit": unit, "comp": comp}

    @property
    def strict(self):
        return self._unit is None and self._comp is None

    def ob(self, a):
        return self._obj(a)

    def on1(self, f):
        return self._one(f)

    def on2(self, a):
        return self._two(a)

    def __call__(self, x):
        return self.on1(x)

    def unit(self, a):
        if self._unit is None:
            return self.target.id2(self.on1(self.source.id1(a)))
        return self._unit(a)

    def compositor(self, f, g):
        if self._comp is None:
            return self.target.id2(self.on1(self.source.comp1(g, f)))
        if callable(self._comp):
            return self._comp(f, g)
        try:
            return self._comp[(f, g)]
        except KeyError:
            raise UnknownCell(f"compositor undefined on {(f, g)!r}") from None


def _cells(S, bound):
    objs = list(S.objects)
    ones = {(a, b): list(S.one_cells(a, b, bound) if not S.explicit else S.one_cells(a, b))
            for a in objs for b in objs}
    probe = {f for fs in ones.values() for f in fs}
    return objs, ones, probe


def _require_invertible(K, cell, what):
    if K.inverse2(cell) is None:
        raise NonInvertibleCell(f"{what} is not invertible")


def check_pseudo_functor(F: PseudoFunctor, bound=None) -> ValidationReport:
    """Exhaustive coherence check (on the probe ``bound`` when the source is implicit)."""
    S, T = F.source, F.target
    rep = ValidationReport()
    objs, ones, probe = _cells(S, bound)
    rep.coverage = {"objects": len(objs), "one_cells": len(probe), "bound": bound}
    for (a, b), fs in ones.items():
        for f in fs:
            Ff = F.on1(f)
            if T.src1(Ff) != F.ob(a) or T.tgt1(Ff) != F.ob(b):
                raise ShapeMismatch(f"F({f!r}) has the wrong endpoints")
    twos = {}
    for fs in ones.values():
        for f in fs:
            for g in fs:
                twos[(f, g)] = list(S.two_cells(f, g))
                for x in twos[(f, g)]:
                    Fx = F.on2(x)
                    if T.src2(Fx) != F.on1(f) or T.tgt2(Fx) != F.on1(g):
                        raise ShapeMismatch(f"F({x!r}) has the wrong boundary")
    for a in objs:
        u = F.unit(a)
        if T.src2(u) != T.id1(F.ob(a)) or T.tgt2(u) != F.on1(S.id1(a)):
            raise ShapeMismatch(f"unit cell at {a!r} has the wrong boundary")
        _require_invertible(T, u, f"unit cell at {a!r}")
    comps = {}
    for (a, b), fs in ones.items():
        for c in objs:
            for f in fs:
                for g in ones[(b, c)]:
                    gf = S.comp1(g, f)
                    if gf not in probe:
                        continue
                    cell = F.compositor(f, g)
                    if T.src2(cell) != T.comp1(F.on1(g), F.on1(f)) or T.tgt2(cell) != F.on1(gf):
                        raise ShapeMismatch(f"compositor at {(f, g)!r} has the wrong boundary")
                    _require_invertible(T, cell, f"compositor at {(f, g)!r}")
                    comps[(f, g)] = cell
    rep.coverage["composable_pairs"] = len(comps)
    # functoriality on 2-cells
    for (f, g), xs in twos.items():
        if F.on2(S.id2(f)) != T.id2(F.on1(f)):
            rep.add("IdentityPreservation", (f,))
        for x in xs:
            for h in ones[(S.src1(f), S.tgt1(f))]:
                for y in twos.get((g, h), ()):
                    if F.on2(S.vcomp(y, x)) != T.vcomp(F.on2(y), F.on2(x)):
                        rep.add("VerticalPreservation", (y, x))
    # naturality of the compositor
    for (f, g), cell in comps.items():
        a, b = S.src1(f), S.tgt1(f)
        c = S.tgt1(g)
        for f2 in ones[(a, b)]:
            for g2 in ones[(b, c)]:
                if (f2, g2) not in comps:
                    continue
                for th in twos[(f, f2)]:
                    for rh in twos[(g, g2)]:
                        lhs = T.vcomp(F.on2(S.hcomp(rh, th)), cell)
                        rhs = T.vcomp(comps[(f2, g2)], T.hcomp(F.on2(rh), F.on2(th)))
                        if lhs != rhs:
                            rep.add("CompositorNaturality", (f, g, th, rh))
    # unit laws
    for (a, b), fs in ones.items():
        for f in fs:
            Ff = F.on1(f)
            idb, ida = S.id1(b), S.id1(a)
            if (f, idb) in comps:
                if T.vcomp(comps[(f, idb)], T.rw(F.unit(b), Ff)) != T.id2(Ff):
                    rep.add("LeftUnitViolation", (f,))
            if (ida, f) in comps:
                if T.vcomp(comps[(ida, f)], T.lw(Ff, F.unit(a))) != T.id2(Ff):
                    rep.add("RightUnitViolation", (f,))
    # associativity hexagon
    for (f, g), cfg in comps.items():
        c = S.tgt1(g)
        gf = S.comp1(g, f)
        for d in objs:
            for h in ones[(c, d)]:
                if (g, h) not in comps or (gf, h) not in comps:
                    continue
                hg = S.comp1(h, g)
                if (f, hg) not in comps:
                    continue
                lhs = T.vcomp(comps[(gf, h)], T.lw(F.on1(h), cfg))
                rhs = T.vcomp(comps[(f, hg)], T.rw(comps[(g, h)], F.on1(f)))
                if lhs != rhs:
                    rep.add("AssociativityHexagonViolation", (f, g, h))
    return rep.finish()


def compose_pseudo_functors(G: PseudoFunctor, F: PseudoFunctor) -> PseudoFunctor:
    """G after F, with unit G(u^F) after u^G and compositor G(c^F) after c^G."""
    T = G.target
    if F.strict and G.strict:
        return PseudoFunctor(F.source, T, lambda a: G.ob(F.ob(a)), lambda f: G.on1(F.on1(f)),
                             lambda x: G.on2(F.on2(x)))

    def unit(a):
        return T.vcomp(G.on2(F.unit(a)), G.unit(F.ob(a)))

    def comp(f, g):
        return T.vcomp(G.on2(F.compositor(f, g)), G.compositor(F.on1(f), F.on1(g)))

    return PseudoFunctor(F.source, T, lambda a: G.ob(F.ob(a)), lambda f: G.on1(F.on1(f)),
                         lambda x: G.on2(F.on2(x)), unit, comp)


def identity_functor(K) -> PseudoFunctor:
    K = as_twocat(K)
    return PseudoFunctor(K, K, lambda a: a, lambda f: f, lambda x: x)


# ---------------------------------------------------------------- transformations


class PseudoNatural:
    """theta: F => G with components theta_C and cells theta_f: G(f) theta_C => theta_D F(f)."""

    def __init__(self, F: PseudoFunctor, G: PseudoFunctor, components, cells, name=None):
        self.F, self.G = F, G
        self._c = _as_fn(components, "components")
        self._cell = _as_fn(cells, "naturality cells")
        self.name = name

    def component(self, a):
        return self._c(a)

    def cell(self, f):
        return self._cell(f)


def check_pseudo_natural(t: PseudoNatural, bound=None) -> ValidationReport:
    F, G = t.F, t.G
    S, T = F.source, F.target
    rep = ValidationReport()
    objs, ones, probe = _cells(S, bound)
    rep.coverage = {"objects": len(objs), "one_cells": len(probe), "bound": bound}
    for a in objs:
        c = t.component(a)
        if T.src1(c) != F.ob(a) or T.tgt1(c) != G.ob(a):
            raise ShapeMismatch(f"component at {a!r} has the wrong endpoints")
    for (a, b), fs in ones.items():
        for f in fs:
            x = t.cell(f)
            want = (T.comp1(G.on1(f), t.component(a)), T.comp1(t.component(b), F.on1(f)))
            if (T.src2(x), T.tgt2(x)) != want:
                raise ShapeMismatch(f"naturality cell at {f!r} has the wrong boundary")
            _require_invertible(T, x, f"naturality cell at {f!r}")
    for a in objs:
        ta = t.component(a)
        lhs = T.lw(ta, F.unit(a))
        rhs = T.vcomp(t.cell(S.id1(a)), T.rw(G.unit(a), ta))
        if lhs != rhs:
            rep.add("PN0", (a,))
    for (a, b), fs in ones.items():
        for c in objs:
            for f in fs:
                for g in ones[(b, c)]:
                    gf = S.comp1(g, f)
                    if gf not in probe:
                        continue
                    lhs = T.vcomp_all(T.lw(G.on1(g), t.cell(f)), T.rw(t.cell(g), F.on1(f)),
                                      T.lw(t.component(c), F.compositor(f, g)))
                    rhs = T.vcomp(t.cell(gf), T.rw(G.compositor(f, g), t.component(a)))
                    if lhs != rhs:
                        rep.add("PN1", (f, g))
        for f in fs:
            for f2 in fs:
                for x in S.two_cells(f, f2):
                    lhs = T.vcomp(t.cell(f2), T.rw(G.on2(x), t.component(a)))
                    rhs = T.vcomp(T.lw(t.component(b), F.on2(x)), t.cell(f))
                    if lhs != rhs:
                        rep.add("PN2", (x,))
    return rep.finish()


def identity_natural(F: PseudoFunctor) -> PseudoNatural:
    T = F.target
    return PseudoNatural(F, F, lambda a: T.id1(F.ob(a)), lambda f: T.id2(F.on1(f)))


def vertical_natural(t2: PseudoNatural, t1: PseudoNatural) -> PseudoNatural:
    """(t2 t1)_C = t2_C t1_C and (t2 t1)_f = (t2_D t1_f) after (t2_f t1_C)."""
    T = t1.F.target
    S = t1.F.source

    def comp(a):
        return T.comp1(t2.component(a), t1.component(a))

    def cell(f):
        a, b = S.src1(f), S.tgt1(f)
        return T.vcomp(T.lw(t2.component(b), t1.cell(f)), T.rw(t2.cell(f), t1.component(a)))

    return PseudoNatural(t1.F, t2.G, comp, cell)


def horizontal_natural(t2: PseudoNatural, t1: PseudoNatural) -> PseudoNatural:
    """Horizontal composite of t1: F => G (C -> D) and t2: F' => G' (D -> E).

    Component (t2 t1)_C = t2_{GC} F'(t1_C); when F' is strict the cell is
    (t2_{GD} F'(t1_f)) after (t2_{Gf} F'(t1_C)), and compositors of F' are
    inserted otherwise.
    """
    F, G, Fp, Gp = t1.F, t1.G, t2.F, t2.G
    E = Fp.target
    S = F.source

    def comp(a):
        return E.comp1(t2.component(G.ob(a)), Fp.on1(t1.component(a)))

    def cell(f):
        a, b = S.src1(f), S.tgt1(f)
        first = E.rw(t2.cell(G.on1(f)), Fp.on1(t1.component(a)))
        mid = E.vcomp_all(Fp.compositor(t1.component(a), G.on1(f)), Fp.on2(t1.cell(f)),
                          E.inverse2(Fp.compositor(F.on1(f), t1.component(b))))
        return E.vcomp(E.lw(t2.component(G.ob(b)), mid), first)

    return PseudoNatural(compose_pseudo_functors(Fp, F), compose_pseudo_functors(Gp, G), comp, cell)


class Modification:
    def __init__(self, source: PseudoNatural, target: PseudoNatural, components, name=None):
        self.source, self.target = source, target
        self._c = _as_fn(components, "components")
        self.name = name

    def component(self, a):
        return self._c(a)


def check_modification(m: Modification, bound=None) -> ValidationReport:
    th, et = m.source, m.target
    F = th.F
    S, T = F.source, F.target
    rep = ValidationReport()
    objs, ones, _ = _cells(S, bound)
    for a in objs:
        x = m.component(a)
        if (T.src2(x), T.tgt2(x)) != (th.component(a), et.component(a)):
            raise ShapeMismatch(f"modification component at {a!r} has the wrong boundary")
    for (a, b), fs in ones.items():
        for f in fs:
            lhs = T.vcomp(T.rw(m.component(b), F.on1(f)), th.cell(f))
            rhs = T.vcomp(et.cell(f), T.lw(th.G.on1(f), m.component(a)))
            if lhs != rhs:
                rep.add("PM", (f,))
    return rep.finish()


def identity_modification(t: PseudoNatural) -> Modification:
    T = t.F.target
    return Modification(t, t, lambda a: T.id2(t.component(a)))


def vertical_modification(e: Modification, r: Modification) -> Modification:
    T = r.source.F.target
    return Modification(r.source, e.target, lambda a: T.vcomp(e.component(a), r.component(a)))


def horizontal_modification(r2: Modification, r1: Modification) -> Modification:
    """(r2 r1)_C = r2_C r1_C between vertically composed transformations."""
    T = r1.source.F.target
    return Modification(vertical_natural(r2.source, r1.source), vertical_natural(r2.target, r1.target),
                        lambda a: T.hcomp(r2.component(a), r1.component(a)))


def compose_pseudo(outer, inner, mode="vertical"):
    """Dispatch for vertical/horizontal composition of transformations or modifications."""
    if isinstance(outer, PseudoNatural) and isinstance(inner, PseudoNatural):
        if mode == "vertical":
            if inner.G is not outer.F:
                raise ShapeMismatch("transformations are not vertically composable")
            return vertical_natural(outer, inner)
        return horizontal_natural(outer, inner)
    if isinstance(outer, Modification) and isinstance(inner, Modification):
        if mode == "vertical":
            return vertical_modification(outer, inner)
        return horizontal_modification(outer, inner)
    raise ShapeMismatch("cannot compose these structures")


# ---------------------------------------------------------------- cones


class PseudoCone:
    """Cone over F: D -> K (D plays the role of I^op) with the given vertex.

    For a 1-cell u: a -> b of D the cell is ``theta_u: F(u) theta_a => theta_b``.
    """

    def __init__(self, F: PseudoFunctor, vertex, legs, cells, name=None):
        self.F = F
        self.vertex = vertex
        self._legs = _as_fn(legs, "legs")
        self._cells = _as_fn(cells, "cone cells")
        self.name = name

    def leg(self, a):
        return self._legs(a)

    def cell(self, u):
        return self._cells(u)


def check_pseudo_cone(c: PseudoCone, bound=None) -> ValidationReport:
    F = c.F
    D, K = F.source, F.target
    rep = ValidationReport()
    objs, ones, probe = _cells(D, bound)
    for a in objs:
        leg = c.leg(a)
        if K.src1(leg) != c.vertex or K.tgt1(leg) != F.ob(a):
            raise ShapeMismatch(f"leg at {a!r} has the wrong endpoints")
    for (a, b), us in ones.items():
        for u in us:
            x = c.cell(u)
            if (K.src2(x), K.tgt2(x)) != (K.comp1(F.on1(u), c.leg(a)), c.leg(b)):
                raise ShapeMismatch(f"cone cell at {u!r} has the wrong boundary")
            _require_invertible(K, x, f"cone cell at {u!r}")
    for a in objs:
        if K.vcomp(c.cell(D.id1(a)), K.rw(F.unit(a), c.leg(a))) != K.id2(c.leg(a)):
            rep.add("PC0", (a,))
    for (a, b), us in ones.items():
        for e in objs:
            for u in us:
                for v in ones[(b, e)]:
                    vu = D.comp1(v, u)
                    if vu not in probe:
                        continue
                    lhs = K.vcomp(c.cell(v), K.lw(F.on1(v), c.cell(u)))
                    rhs = K.vcomp(c.cell(vu), K.rw(F.compositor(u, v), c.leg(a)))
                    if lhs != rhs:
                        rep.add("PC1", (u, v))
        for u in us:
            for u2 in us:
                for x in D.two_cells(u, u2):
                    if c.cell(u) != K.vcomp(c.cell(u2), K.rw(F.on2(x), c.leg(a))):
                        rep.add("PC2", (x,))
    return rep.finish()


class ConeMorphism:
    def __init__(self, source: PseudoCone, target: PseudoCone, components):
        self.source, self.target = source, target
        self._c = _as_fn(components, "components")

    def component(self, a):
        return self._c(a)


def check_cone_morphism(m: ConeMorphism, bound=None) -> ValidationReport:
    th, et = m.source, m.target
    F = th.F
    D, K = F.source, F.target
    rep = ValidationReport()
    objs, ones, _ = _cells(D, bound)
    for a in objs:
        x = m.component(a)
        if (K.src2(x), K.tgt2(x)) != (th.leg(a), et.leg(a)):
            raise ShapeMismatch(f"component at {a!r} has the wrong boundary")
    for (a, b), us in ones.items():
        for u in us:
            lhs = K.vcomp(m.component(b), th.cell(u))
            rhs = K.vcomp(et.cell(u), K.lw(F.on1(u), m.component(a)))
            if lhs != rhs:
                rep.add("PCM", (u,))
    return rep.finish()


class PseudoCocone:
    """Cocone under F: I -> K: legs l_i: F(i) -> L and cells l_u: l_i => l_j F(u)."""

    def __init__(self, F: PseudoFunctor, vertex, legs, cells):
        self.F = F
        self.vertex = vertex
        self._legs = _as_fn(legs, "legs")
        self._cells = _as_fn(cells, "cocone cells")

    def leg(self, a):
        return self._legs(a)

    def cell(self, u):
        return self._cells(u)


def check_pseudo_cocone(c: PseudoCocone, bound=None) -> ValidationReport:
    F = c.F
    I, K = F.source, F.target
    rep = ValidationReport()
    objs, ones, probe = _cells(I, bound)
    for a in objs:
        leg = c.leg(a)
        if K.src1(leg) != F.ob(a) or K.tgt1(leg) != c.vertex:
            raise ShapeMismatch(f"leg at {a!r} has the wrong endpoints")
    for (a, b), us in ones.items():
        for u in us:
            x = c.cell(u)
            if (K.src2(x), K.tgt2(x)) != (c.leg(a), K.comp1(c.leg(b), F.on1(u))):
                raise ShapeMismatch(f"cocone cell at {u!r} has the wrong boundary")
            _require_invertible(K, x, f"cocone cell at {u!r}")
    for a in objs:
        if c.cell(I.id1(a)) != K.lw(c.leg(a), F.unit(a)):
            rep.add("CC0", (a,))
    for (a, b), us in ones.items():
        for e in objs:
            for u in us:
                for v in ones[(b, e)]:
                    vu = I.comp1(v, u)
                    if vu not in probe:
                        continue
                    rhs = K.vcomp_all(c.cell(u), K.rw(c.cell(v), F.on1(u)),
                                      K.lw(c.leg(e), F.compositor(u, v)))
                    if c.cell(vu) != rhs:
                        rep.add("CC1", (u, v))
        for u in us:
            for u2 in us:
                for x in I.two_cells(u, u2):
                    if c.cell(u2) != K.vcomp(K.lw(c.leg(b), F.on2(x)), c.cell(u)):
                        rep.add("CC2", (x,))
    return rep.finish()


# ---------------------------------------------------------------- equivalences


def check_equivalence_1cell(K: TwoCat, f) -> Decision:
    """Search g with invertible cells f g => id and g f => id."""
    if f not in K.cells1:
        raise UnknownCell(f)
    a, b = K.src1(f), K.tgt1(f)
    for g in K.one_cells(b, a):
        alphas = K.invertible_cells(K.comp1(f, g), K.id1(b))
        betas = K.invertible_cells(K.comp1(g, f), K.id1(a))
        if alphas and betas:
            return Decision(True, None, (g, alphas[0], betas[0]))
    return Decision(False, "no-quasi-inverse", (f,))


def is_isomorphism_1cell(K: TwoCat, f):
    a, b = K.src1(f), K.tgt1(f)
    return any(K.comp1(g, f) == K.id1(a) and K.comp1(f, g) == K.id1(b) for g in K.one_cells(b, a))
