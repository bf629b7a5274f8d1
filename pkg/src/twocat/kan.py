"""Pseudo-colimits over 2-filtered indices and pseudo-limits of category-valued
2-functors, with their universal cones and mediators.

A 2-functor into categories is a ``PseudoFunctor`` whose target is ``CAT``:
``on1`` gives ``Functor`` objects and ``on2`` gives ``NatTrans`` objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (Decision, FinCat, Functor, NatTrans, TwoCat, check_functor,
                   equivalence_of_categories, ordered, sort_key)
from .errors import HomotopyNotEquivalence, NoMediator, NotFiltered, ShapeMismatch
from .maps import (CAT, PseudoCocone, PseudoCone, PseudoFunctor, as_twocat, check_pseudo_cocone,
                   check_pseudo_cone)
from .shape import check_2filtered


def _fmap(F, u, x):
    return F.on1(u)(x)


# ---------------------------------------------------------------- construction LL


@dataclass
class ColimitPresentation:
    """L(F) as a FinCat whose morphisms are homotopy classes of premorphisms.

    A premorphism is ``(X, Y, (u, r, v))`` with ``X = (C, i)``, ``Y = (D, j)``,
    a cospan ``u: i -> k``, ``v: j -> k`` and ``r: Fu(C) -> Fv(D)`` in F(k).
    Classes are named by their least premorphism.
    """

    F: PseudoFunctor
    category: FinCat
    classes: dict
    class_of: dict
    cocone: PseudoCocone
    stats: dict = field(default_factory=dict)

    def cls(self, X, Y, u, r, v):
        return self.class_of[(X, Y, (u, r, v))]

    def leg(self, i):
        return self.cocone.leg(i)


def _premorphisms(F, I):
    objs = [(C, i) for i in I.objects for C in ordered(F.ob(i).objects)]
    out = []
    for X in objs:
        C, i = X
        for Y in objs:
            D, j = Y
            for k in I.objects:
                Fk = F.ob(k)
                for u in I.one_cells(i, k):
                    a = _fmap(F, u, C)
                    for v in I.one_cells(j, k):
                        b = _fmap(F, v, D)
                        for r in Fk.hom(a, b):
                            out.append((X, Y, (u, r, v)))
    return objs, out


def _inv_out(I, f):
    """Invertible 2-cells out of f, with their targets."""
    a, b = I.src1(f), I.tgt1(f)
    return [(x, g) for g in I.one_cells(a, b) for x in I.two_cells(f, g) if I.inverse2(x) is not None]


def _homotopy_relation(F, I, prems):
    index = {}
    for p in prems:
        X, Y, (u, r, v) = p
        k2 = I.tgt1(u)
        for k in I.objects:
            for w2 in I.one_cells(k2, k):
                key = (X, Y, I.comp1(w2, u), I.comp1(w2, v), _fmap(F, w2, r))
                index.setdefault(key, []).append(p)
    rel = {p: set() for p in prems}
    for p in prems:
        X, Y, (u, r, v) = p
        (C, _), (D, _) = X, Y
        k1 = I.tgt1(u)
        for k in I.objects:
            Fk = F.ob(k)
            for w1 in I.one_cells(k1, k):
                Fr = _fmap(F, w1, r)
                for beta, h in _inv_out(I, I.comp1(w1, u)):
                    bC = F.on2(beta)[C]
                    bCi = Fk.inverse(bC)
                    for alpha, g in _inv_out(I, I.comp1(w1, v)):
                        m = Fk.compose_path(F.on2(alpha)[D], Fr, bCi)
                        rel[p].update(index.get((X, Y, h, g, m), ()))
    return rel


def _check_equivalence(rel):
    for a, ra in rel.items():
        if a not in ra:
            raise HomotopyNotEquivalence(f"not reflexive at {a!r}")
        for b in ra:
            if a not in rel[b]:
                raise HomotopyNotEquivalence(f"not symmetric at {a!r}, {b!r}")
            if not rel[b] <= ra:
                raise HomotopyNotEquivalence(f"not transitive through {b!r}")


def _compose_prems(F, I, p1, p2, first=True):
    """Composites of p2 after p1 over every common refinement (or just the first)."""
    X, Y, (u1, r1, v1) = p1
    Y2, Z, (u2, r2, v2) = p2
    D = Y[0]
    k1, k2 = I.tgt1(u1), I.tgt1(u2)
    out = []
    for k in I.objects:
        Fk = F.ob(k)
        for w1 in I.one_cells(k1, k):
            a = I.comp1(w1, v1)
            Fr1 = _fmap(F, w1, r1)
            for w2 in I.one_cells(k2, k):
                b = I.comp1(w2, u2)
                for g in I.two_cells(a, b):
                    if I.inverse2(g) is None:
                        continue
                    r = Fk.compose_path(_fmap(F, w2, r2), F.on2(g)[D], Fr1)
                    out.append((X, Z, (I.comp1(w1, u1), r, I.comp1(w2, v2))))
                    if first:
                        return out
    return out


def ll_colimit(F: PseudoFunctor, verify="full") -> ColimitPresentation:
    """Pseudo-colimit of a strict 2-functor F: I -> CAT over a finite 2-filtered I.

    ``verify="full"`` checks class-level well-definedness of composition
    against every member of both classes; ``"reps"`` only checks all
    refinements of the representatives.
    """
    I = F.source
    if not check_2filtered(I).ok:
        raise NotFiltered(f"index {I.name or ''} is not 2-filtered")
    objs, prems = _premorphisms(F, I)
    rel = _homotopy_relation(F, I, prems)
    _check_equivalence(rel)
    class_of, classes = {}, {}
    for p in sorted(prems, key=sort_key):
        if p in class_of:
            continue
        members = sorted(rel[p], key=sort_key)
        for q in members:
            class_of[q] = p
        classes[p] = tuple(members)
    mors = {c: (c[0], c[1]) for c in classes}
    ident = {}
    for X in objs:
        C, i = X
        ident[X] = class_of[(X, X, (I.id1(i), F.ob(i).ident(C), I.id1(i)))]
    by_src = {}
    for c in classes:
        by_src.setdefault(c[0], []).append(c)
    comp = {}
    for c1 in classes:
        for c2 in by_src.get(c1[1], ()):
            found = {class_of[q] for q in _compose_prems(F, I, c1, c2, first=(verify != "full"))}
            if verify == "full":
                for m in classes[c1]:
                    found.add(class_of[_compose_prems(F, I, m, c2)[0]])
                for m in classes[c2]:
                    found.add(class_of[_compose_prems(F, I, c1, m)[0]])
            if len(found) != 1:
                raise HomotopyNotEquivalence(f"composition of {c2!r} after {c1!r} is not well defined")
            comp[(c2, c1)] = found.pop()
    L = FinCat(objs, mors, ident, comp, name=f"L({F.name or 'F'})")

    legs = {}
    for i in I.objects:
        Fi = F.ob(i)
        idi = I.id1(i)
        legs[i] = Functor(Fi, L, {C: (C, i) for C in Fi.objects},
                          {r: class_of[((Fi.src(r), i), (Fi.tgt(r), i), (idi, r, idi))] for r in Fi.morphisms},
                          name=f"lambda_{i}")

    def cell(u):
        i, j = I.src1(u), I.tgt1(u)
        Fu = F.on1(u)
        comps = {}
        for C in F.ob(i).objects:
            D = Fu(C)
            comps[C] = class_of[((C, i), (D, j), (u, F.ob(j).ident(D), I.id1(j)))]
        return NatTrans(legs[i], CAT.comp1(legs[j], Fu), comps, name=f"lambda_{u}")

    cells = {u: cell(u) for u in I.cells1}
    cocone = PseudoCocone(F, L, legs, cells)
    stats = {"objects": len(objs), "premorphisms": len(prems), "classes": len(classes)}
    return ColimitPresentation(F, L, classes, class_of, cocone, stats)


def colimit_mediator(P: ColimitPresentation, test: PseudoCocone, target: FinCat):
    """The functor L(F) -> E induced by a cocone (phi_i, phi_u) with vertex E.

    [u, r, v] goes to phi_{v,D}^{-1} phi_k(r) phi_{u,C}.  Raises NoMediator if
    the assignment is not constant on a class or not a functor.  Returns the
    functor and a factorization certificate: every class equals
    (lambda_v)_D^{-1} lambda_k(r) (lambda_u)_C inside L(F), which pins down any
    functor with the prescribed legs and cells.
    """
    L, I = P.category, P.F.source
    E = target

    def image(p):
        X, Y, (u, r, v) = p
        (C, _), (D, _) = X, Y
        k = I.tgt1(u)
        phi_k = test.leg(k)
        return E.compose_path(E.inverse(test.cell(v)[D]), phi_k(r), test.cell(u)[C])

    mor = {}
    for c, members in P.classes.items():
        vals = {image(p) for p in members}
        if len(vals) != 1:
            raise NoMediator(f"cocone does not respect the class of {c!r}")
        mor[c] = vals.pop()
    obj = {(C, i): test.leg(i)(C) for (C, i) in L.objects}
    M = Functor(L, E, obj, mor, name="mediator")
    if not check_functor(M).ok:
        raise NoMediator("induced assignment is not a functor")
    certificate = True
    for c in P.classes:
        X, Y, (u, r, v) = c
        (C, _), (D, _) = X, Y
        lam_k = P.leg(I.tgt1(u))
        lu = P.cocone.cell(u)[C]
        lv = P.cocone.cell(v)[D]
        if L.compose_path(L.inverse(lv), lam_k(r), lu) != c:
            certificate = False
    return M, certificate


def canonical_functor(P: ColimitPresentation, i):
    return P.leg(i)


# ---------------------------------------------------------------- pseudo-limits


@dataclass(frozen=True)
class DescentObject:
    """x_a in F(a) per index object and isomorphisms x_u: F(u)(x_a) -> x_b per 1-cell."""

    family: tuple
    isos: tuple

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.family, self.isos)))

    def __hash__(self):
        return self._hash

    def at(self, a):
        return dict(self.family)[a]

    def iso(self, u):
        return dict(self.isos)[u]

    def __str__(self):
        return "{" + ",".join(f"{a}:{x}" for a, x in self.family) + "}"


@dataclass
class LimitPresentation:
    F: PseudoFunctor
    category: FinCat
    cone: PseudoCone

    def leg(self, a):
        return self.cone.leg(a)


def _descent_objects(F, D):
    objs = list(D.objects)
    ones = ordered(D.cells1)
    out = []
    for fam in itertools.product(*[ordered(F.ob(a).objects) for a in objs]):
        x = dict(zip(objs, fam))
        choices = []
        for u in ones:
            a, b = D.src1(u), D.tgt1(u)
            choices.append(F.ob(b).isos(_fmap(F, u, x[a]), x[b]))
        if any(not c for c in choices):
            continue
        for pick in itertools.product(*choices):
            xu = dict(zip(ones, pick))
            if _descent_ok(F, D, x, xu):
                out.append(DescentObject(tuple((a, x[a]) for a in objs),
                                         tuple((u, xu[u]) for u in ones)))
    return out


def _descent_ok(F, D, x, xu):
    for a in D.objects:
        Fa = F.ob(a)
        if Fa.compose(xu[D.id1(a)], F.unit(a)[x[a]]) != Fa.ident(x[a]):
            return False
    for u in D.cells1:
        a, b = D.src1(u), D.tgt1(u)
        for v in D.one_cells(b):
            c = D.tgt1(v)
            Fc = F.ob(c)
            vu = D.comp1(v, u)
            lhs = Fc.compose(xu[v], _fmap(F, v, xu[u]))
            rhs = Fc.compose(xu[vu], F.compositor(u, v)[x[a]])
            if lhs != rhs:
                return False
        for u2 in D.one_cells(a, b):
            for t in D.two_cells(u, u2):
                if xu[u] != F.ob(b).compose(xu[u2], F.on2(t)[x[a]]):
                    return False
    return True


def pseudo_limit_cat(F: PseudoFunctor) -> LimitPresentation:
    """Pseudo-limit of F: D -> CAT (D plays the role of I^op) as descent data."""
    D = F.source
    objs = _descent_objects(F, D)
    mors, comp, ident = {}, {}, {}
    homs = {}
    for x in objs:
        for y in objs:
            fams = itertools.product(*[F.ob(a).hom(x.at(a), y.at(a)) for a in D.objects])
            for fam in fams:
                g = dict(zip(D.objects, fam))
                ok = True
                for u in D.cells1:
                    a, b = D.src1(u), D.tgt1(u)
                    Fb = F.ob(b)
                    if Fb.compose(y.iso(u), _fmap(F, u, g[a])) != Fb.compose(g[b], x.iso(u)):
                        ok = False
                        break
                if ok:
                    m = (x, y, tuple(fam))
                    mors[m] = (x, y)
                    homs.setdefault((x, y), []).append(m)
        ident[x] = (x, x, tuple(F.ob(a).ident(x.at(a)) for a in D.objects))
    into = {}
    for (x, y), fs in homs.items():
        into.setdefault(y, []).append((x, fs))
    for (y, z), gs in homs.items():
        for x, fs in into.get(y, ()):
            for g in gs:
                for f in fs:
                    comp[(g, f)] = (x, z, tuple(F.ob(a).compose(ga, fa)
                                                for a, ga, fa in zip(D.objects, g[2], f[2])))
    Lim = FinCat(objs, mors, ident, comp, name=f"lim({F.name or 'F'})")
    pos = {a: n for n, a in enumerate(D.objects)}
    legs = {a: Functor(Lim, F.ob(a), {x: x.at(a) for x in objs}, {m: m[2][pos[a]] for m in mors},
                       name=f"pi_{a}") for a in D.objects}
    cells = {}
    for u in D.cells1:
        a, b = D.src1(u), D.tgt1(u)
        cells[u] = NatTrans(CAT.comp1(F.on1(u), legs[a]), legs[b], {x: x.iso(u) for x in objs},
                            name=f"pi_{u}")
    return LimitPresentation(F, Lim, PseudoCone(F, Lim, legs, cells))


def limit_mediator(P: LimitPresentation, test: PseudoCone):
    """The unique functor m: E -> lim with pi_a m = theta_a and pi_u m = theta_u."""
    D, Lim = P.F.source, P.category
    E = test.vertex
    lookup = {(x.family, x.isos): x for x in Lim.objects}
    obj = {}
    for e in E.objects:
        key = (tuple((a, test.leg(a)(e)) for a in D.objects),
               tuple((u, test.cell(u)[e]) for u in ordered(D.cells1)))
        if key not in lookup:
            raise NoMediator(f"cone at {e!r} does not give descent data")
        obj[e] = lookup[key]
    mor = {}
    for h in E.morphisms:
        m = (obj[E.src(h)], obj[E.tgt(h)], tuple(test.leg(a)(h) for a in D.objects))
        if m not in Lim.morphisms:
            raise NoMediator(f"cone image of {h!r} is not a descent morphism")
        mor[h] = m
    M = Functor(E, Lim, obj, mor, name="mediator")
    exact = all(compose_leg(P, a, M) == test.leg(a) for a in D.objects)
    exact = exact and all(test.cell(u)[e] == P.cone.cell(u)[obj[e]] for u in D.cells1 for e in E.objects)
    return M, exact


def compose_leg(P, a, M):
    return CAT.comp1(P.leg(a), M)


def factor_through(P, test, target=None):
    """Mediator from a test cone (limit case) or into a test cocone's vertex (colimit case).

    Returns ``(functor, certificate)``.  For limits the certificate records
    exact leg and cell equalities; uniqueness holds because a descent object
    is determined by its components.  For colimits it is the factorization
    certificate of ``colimit_mediator``.
    """
    if isinstance(P, LimitPresentation):
        if not check_pseudo_cone(test).ok:
            raise ShapeMismatch("test cone fails the cone checks")
        return limit_mediator(P, test)
    if not check_pseudo_cocone(test).ok:
        raise ShapeMismatch("test cocone fails the cocone checks")
    return colimit_mediator(P, test, target if target is not None else test.vertex)


def count_mediators(P, test):
    """Brute-force count of functors with the prescribed legs (desk scale only)."""
    from .core import enumerate_functors
    n = 0
    if isinstance(P, LimitPresentation):
        D = P.F.source
        for M in enumerate_functors(test.vertex, P.category):
            if all(compose_leg(P, a, M) == test.leg(a) for a in D.objects) and all(
                    P.cone.cell(u)[M(e)] == test.cell(u)[e] for u in D.cells1 for e in test.vertex.objects):
                n += 1
        return n
    I = P.F.source
    for M in enumerate_functors(P.category, test.vertex):
        if all(CAT.comp1(M, P.leg(i)) == test.leg(i) for i in I.objects) and all(
                M(P.cocone.cell(u)[C]) == test.cell(u)[C] for u in I.cells1 for C in P.F.ob(I.src1(u)).objects):
            n += 1
    return n


# ---------------------------------------------------------------- comparison


def precompose(G: PseudoFunctor, F: PseudoFunctor, name=None) -> PseudoFunctor:
    """G F for strict F into an explicit index and G into CAT."""
    return PseudoFunctor(F.source, CAT, lambda i: G.ob(F.ob(i)), lambda u: G.on1(F.on1(u)),
                         lambda x: G.on2(F.on2(x)), name=name or f"{G.name or 'G'}{F.name or 'F'}")


def comparison_functor(F: PseudoFunctor, G: PseudoFunctor, LGF=None, LG=None):
    """h: L(G F) -> L(G), h(x,i) = (x,Fi), h[u,r,v] = [Fu,r,Fv], with its equivalence Decision."""
    LGF = LGF or ll_colimit(precompose(G, F))
    LG = LG or ll_colimit(G)
    A, B = LGF.category, LG.category
    obj = {(x, i): (x, F.ob(i)) for (x, i) in A.objects}
    mor = {}
    for c in A.morphisms:
        (C, i), (D, j), (u, r, v) = c
        mor[c] = LG.class_of[((C, F.ob(i)), (D, F.ob(j)), (F.on1(u), r, F.on1(v)))]
    h = Functor(A, B, obj, mor, name="h")
    return h, equivalence_of_categories(h), (LGF, LG)


def terminal_equivalence(P: ColimitPresentation, t) -> Decision:
    """Decide whether lambda_t: F(t) -> L(F) is an equivalence."""
    return equivalence_of_categories(P.leg(t))


def constant_functor(I, C: FinCat, name=None) -> PseudoFunctor:
    I = as_twocat(I)
    idC = Functor.identity(C)
    return PseudoFunctor(I, CAT, lambda i: C, lambda u: idC, lambda x: NatTrans.identity(idC), name=name)


def functor_from_tables(I: TwoCat, cats: dict, functors: dict, transformations=None, name=None):
    """A strict 2-functor into CAT from per-cell tables.

    Identity 1-cells default to identity functors and missing 2-cell entries
    to identity transformations.
    """
    transformations = transformations or {}
    ids = {I.id1(a): a for a in I.objects}

    def on1(u):
        if u in functors:
            return functors[u]
        if u in ids:
            return Functor.identity(cats[ids[u]])
        raise ShapeMismatch(f"no functor given for {u!r}")

    def on2(x):
        if x in transformations:
            return transformations[x]
        f = I.src2(x)
        return NatTrans.identity(on1(f))

    return PseudoFunctor(I, CAT, lambda a: cats[a], on1, on2, name=name)
