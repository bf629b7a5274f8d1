"""Finite 2-pro-objects: hom-categories as a limit of colimits of hom-categories,
representatives of pro-morphisms and 2-cells, and the M_f and K_X indices.

A pro-object is a strict 2-functor X: I^op -> C with I finite and 2-filtered.
For u: i -> i' in I, ``X.map(u)`` is the 1-cell X_u: X_{i'} -> X_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import FinCat, Functor, NatTrans, TwoCat, hom_category, sort_key, validate_twocat
from .errors import BoundTooSmall, HypothesisFails, NotFiltered, NotFound, ShapeMismatch
from .kan import (ColimitPresentation, DescentObject, LimitPresentation, comparison_functor, ll_colimit,
                  pseudo_limit_cat)
from .maps import CAT, PseudoCone, PseudoFunctor, check_pseudo_functor
from .shape import check_2cofinal, check_2filtered


def _homcat(C, a, b):
    cache = C.__dict__.setdefault("_homcat_cache", {})
    if (a, b) not in cache:
        cache[(a, b)] = hom_category(C, a, b)
    return cache[(a, b)]


class ProObject:
    """A strict 2-functor X: I^op -> C over a finite 2-filtered index I."""

    def __init__(self, I: TwoCat, C: TwoCat, obj, one=None, two=None, name=None, check=True):
        self.I = I
        self.C = C
        self.name = name
        self.Iop = I.op()
        ids = {I.id1(a): a for a in I.objects}
        one = dict(one or {})
        two = dict(two or {})

        def on1(u):
            if u in one:
                return one[u]
            if u in ids:
                return C.id1(obj[ids[u]])
            raise ShapeMismatch(f"pro-object {name}: no 1-cell for {u!r}")

        def on2(x):
            if x in two:
                return two[x]
            if I.src2(x) == I.tgt2(x):
                return C.id2(on1(I.src2(x)))
            raise ShapeMismatch(f"pro-object {name}: no 2-cell for {x!r}")

        self._obj = dict(obj)
        self.functor = PseudoFunctor(self.Iop, C, self._obj, on1, on2, name=name)
        if check:
            self.validate()

    def validate(self):
        if not check_2filtered(self.I).ok:
            raise NotFiltered(f"index of {self.name} is not 2-filtered")
        rep = check_pseudo_functor(self.functor)
        if not rep.ok:
            raise ShapeMismatch(f"pro-object {self.name} is not a 2-functor: {rep.violations[0]}")

    def at(self, i):
        return self._obj[i]

    def map(self, u):
        return self.functor.on1(u)

    def map2(self, x):
        return self.functor.on2(x)

    @classmethod
    def constant(cls, C: TwoCat, C0, name=None):
        """c(C0): the pro-object indexed by the point."""
        I = TwoCat.locally_discrete(FinCat.terminal(), name="1")
        return cls(I, C, {"*": C0}, name=name or f"c({C0})")

    def __repr__(self):
        return f"ProObject({self.name})"


def hom_functor(X: ProObject, D) -> PseudoFunctor:
    """i |-> C(X_i, D) with u |-> precomposition by X_u, as a 2-functor I -> CAT."""
    C, I = X.C, X.I
    cache = {}

    def on1(u):
        if u not in cache:
            i, i2 = I.src1(u), I.tgt1(u)
            A, B = _homcat(C, X.at(i), D), _homcat(C, X.at(i2), D)
            Xu = X.map(u)
            cache[u] = Functor(A, B, {r: C.comp1(r, Xu) for r in A.objects},
                               {t: C.rw(t, Xu) for t in A.morphisms}, name=f"-.X_{u}")
        return cache[u]

    def on2(x):
        u, v = I.src2(x), I.tgt2(x)
        Xx = X.map2(x)
        A = _homcat(C, X.at(I.src1(u)), D)
        return NatTrans(on1(u), on1(v), {r: C.lw(r, Xx) for r in A.objects})

    return PseudoFunctor(I, CAT, lambda i: _homcat(C, X.at(i), D), on1, on2, name=f"C(X_-,{D})")


def postcompose_classes(L1: ColimitPresentation, L2: ColimitPresentation, C, s):
    """The functor L1 -> L2 induced by postcomposing with the 1-cell s.

    L1 is colim_i C(X_i, B) and L2 is colim_i C(X_i, B') with s: B -> B'.
    """
    A, B = L1.category, L2.category
    obj = {(r, i): (C.comp1(s, r), i) for (r, i) in A.objects}
    mor = {}
    for c in A.morphisms:
        X, Y, (u, t, w) = c
        mor[c] = L2.class_of[((C.comp1(s, X[0]), X[1]), (C.comp1(s, Y[0]), Y[1]), (u, C.lw(s, t), w))]
    return Functor(A, B, obj, mor, name=f"{s}.-")


class ProHom:
    """Pro(C)(X, Y) computed as the pseudo-limit over J of colim_i C(X_i, Y_j)."""

    def __init__(self, X: ProObject, Y: ProObject):
        if X.C is not Y.C:
            raise ShapeMismatch("pro-objects live in different 2-categories")
        self.X, self.Y = X, Y
        C, J = X.C, Y.I
        self.C = C
        self.L = {j: ll_colimit(hom_functor(X, Y.at(j))) for j in J.objects}
        post = {}

        def on1(v):
            # v: j -> j' in J, seen as a 1-cell j' -> j of J^op
            if v not in post:
                j, j2 = J.src1(v), J.tgt1(v)
                post[v] = postcompose_classes(self.L[j2], self.L[j], C, Y.map(v))
            return post[v]

        def on2(b):
            v, v2 = J.src2(b), J.tgt2(b)
            j2 = J.tgt1(v)
            Yb = Y.map2(b)
            Lj = self.L[J.src1(v)]
            comps = {}
            for (r, i) in self.L[j2].category.objects:
                a, c = C.comp1(Y.map(v), r), C.comp1(Y.map(v2), r)
                comps[(r, i)] = Lj.class_of[((a, i), (c, i), (X.I.id1(i), C.rw(Yb, r), X.I.id1(i)))]
            return NatTrans(on1(v), on1(v2), comps)

        self.diagram = PseudoFunctor(Y.Iop, CAT, lambda j: self.L[j].category, on1, on2,
                                     name="colim C(X_-,Y_-)")
        self.limit: LimitPresentation = pseudo_limit_cat(self.diagram)
        self.category: FinCat = self.limit.category

    def component(self, f: DescentObject, j):
        """f_j as an object (r, i) of colim_i C(X_i, Y_j)."""
        return f.at(j)

    def decode(self, f: DescentObject):
        return {j: f.at(j) for j in self.Y.I.objects}

    def find(self, family: dict, isos: dict | None = None):
        """The pro-morphism with the given components (and structure isos if ambiguous)."""
        for x in self.category.objects:
            if all(x.at(j) == family[j] for j in family) and (
                    isos is None or all(x.iso(v) == isos[v] for v in isos)):
                return x
        raise NotFound(f"no pro-morphism with components {family!r}")

    def identity_class(self, j, r, i):
        I = self.X.I
        return self.L[j].class_of[((r, i), (r, i), (I.id1(i), self.C.id2(r), I.id1(i)))]

    def cls(self, j, r, i, s, i2, u, t, v):
        return self.L[j].class_of[((r, i), (s, i2), (u, t, v))]


def pro_hom(X: ProObject, Y: ProObject) -> ProHom:
    return ProHom(X, Y)


def hom_isomorphism(H: ProHom):
    """For point-indexed X, Y the functor C(X_*, Y_*) -> Pro(C)(X, Y) and whether it is an isomorphism."""
    C = H.C
    A = _homcat(C, H.X.at("*"), H.Y.at("*"))
    L = H.L["*"]
    obj, mor = {}, {}
    for r in A.objects:
        obj[r] = H.find({"*": (r, "*")})
    ii = H.X.I.id1("*")
    for t in A.morphisms:
        a, b = A.src(t), A.tgt(t)
        c = L.class_of[((a, "*"), (b, "*"), (ii, t, ii))]
        mor[t] = (obj[a], obj[b], (c,))
    F = Functor(A, H.category, obj, mor, name="C(X,Y)->Pro")
    bij = (len(set(obj.values())) == len(H.category.objects) == len(obj)
           and len(set(mor.values())) == len(H.category.morphisms) == len(mor))
    return F, bij


# ---------------------------------------------------------------- projections


def projection(X: ProObject, i, H: ProHom | None = None):
    """pi_i as an object of Pro(C)(X, c(X_i)): the class of (id_{X_i}, i)."""
    H = H or ProHom(X, ProObject.constant(X.C, X.at(i)))
    return H.find({"*": (X.C.id1(X.at(i)), i)}), H


def projection_cone(X: ProObject):
    """The cone with vertex the point over i |-> Pro(C)(X, c(X_i)); checkable by check_pseudo_cone."""
    C, I = X.C, X.I
    homs = {i: ProHom(X, ProObject.constant(C, X.at(i))) for i in I.objects}
    one = FinCat.terminal()
    pis = {i: projection(X, i, homs[i])[0] for i in I.objects}
    post = {}

    def on1(u):
        # u: i -> i' in I is a 1-cell i' -> i of I^op, acting by X_u: X_{i'} -> X_i
        if u not in post:
            i, i2 = I.src1(u), I.tgt1(u)
            Hs, Ht = homs[i2], homs[i]
            P = postcompose_classes(Hs.L["*"], Ht.L["*"], C, X.map(u))
            obj = {x: Ht.find({"*": P(x.at("*"))}) for x in Hs.category.objects}
            mor = {m: (obj[m[0]], obj[m[1]], (P(m[2][0]),)) for m in Hs.category.morphisms}
            post[u] = Functor(Hs.category, Ht.category, obj, mor, name=f"X_{u}.-")
        return post[u]

    def on2(x):
        u, v = I.src2(x), I.tgt2(x)
        i2 = I.tgt1(u)
        i = I.src1(u)
        Hs, Ht = homs[i2], homs[i]
        Xx = X.map2(x)
        comps = {}
        for y in Hs.category.objects:
            r, k = y.at("*")
            a, b = C.comp1(X.map(u), r), C.comp1(X.map(v), r)
            c = Ht.L["*"].class_of[((a, k), (b, k), (I.id1(k), C.rw(Xx, r), I.id1(k)))]
            src, tgt = on1(u)(y), on1(v)(y)
            comps[y] = (src, tgt, (c,))
        return NatTrans(on1(u), on1(v), comps)

    P = PseudoFunctor(X.Iop, CAT, lambda i: homs[i].category, on1, on2, name="Pro(X,c(X_-))")
    legs = {i: Functor(one, homs[i].category, {"*": pis[i]}, {"1": homs[i].category.identities[pis[i]]},
                       name=f"pi_{i}") for i in I.objects}

    def cell(u):
        i, i2 = I.src1(u), I.tgt1(u)
        Ht = homs[i]
        src = on1(u)(pis[i2])
        c = Ht.L["*"].class_of[((X.map(u), i2), (C.id1(X.at(i)), i), (I.id1(i2), C.id2(X.map(u)), u))]
        return NatTrans(CAT.comp1(on1(u), legs[i2]), legs[i], {"*": (src, pis[i], (c,))})

    cone = PseudoCone(P, one, legs, {u: cell(u) for u in I.cells1})
    return cone, homs


# ---------------------------------------------------------------- representatives


@dataclass(frozen=True)
class Representative:
    i: object
    j: object
    r: object
    phi: object


def check_represents(H: ProHom, rep: Representative, f: DescentObject) -> bool:
    """(r, phi) represents f: phi is an isomorphism (r, i) -> f_j in colim_i C(X_i, Y_j)."""
    L = H.L[rep.j].category
    if rep.phi not in L.morphisms:
        raise ShapeMismatch(f"{rep.phi!r} is not a morphism of the colimit at {rep.j!r}")
    if H.C.src1(rep.r) != H.X.at(rep.i) or H.C.tgt1(rep.r) != H.Y.at(rep.j):
        raise ShapeMismatch("representative 1-cell has the wrong boundary")
    return L.morphisms[rep.phi] == ((rep.r, rep.i), f.at(rep.j)) and L.is_iso(rep.phi)


def check_represents_2cell(H: ProHom, data, alpha) -> bool:
    """(theta, r, phi, s, psi) represents alpha: psi [id, theta, id] = alpha_j phi."""
    theta, rep_r, rep_s = data[0], data[1], data[2]
    if rep_r.j != rep_s.j or rep_r.i != rep_s.i:
        raise ShapeMismatch("representatives must share the index pair")
    f, g = alpha[0], alpha[1]
    if not (check_represents(H, rep_r, f) and check_represents(H, rep_s, g)):
        return False
    C = H.C
    if (C.src2(theta), C.tgt2(theta)) != (rep_r.r, rep_s.r):
        raise ShapeMismatch("theta has the wrong boundary")
    j = rep_r.j
    L = H.L[j].category
    aj = alpha[2][_jpos(H, j)]
    t = H.cls(j, rep_r.r, rep_r.i, rep_s.r, rep_s.i, H.X.I.id1(rep_r.i), theta, H.X.I.id1(rep_r.i))
    return L.compose(rep_s.phi, t) == L.compose(aj, rep_r.phi)


def _jpos(H, j):
    return list(H.Y.I.objects).index(j)


def find_representative(H: ProHom, f: DescentObject, j) -> Representative:
    """(r, id) read off the component f_j = (r, i)."""
    r, i = f.at(j)
    return Representative(i, j, r, H.identity_class(j, r, i))


def _invertible(C, x):
    return C.inverse2(x) is not None


def find_representative_2cell(H: ProHom, alpha, j):
    """(theta, (r', phi), (s', psi)) representing alpha at j.

    With alpha_j = [u, theta, v]: r' = r X_u, phi = [id, id, u], s' = s X_v,
    psi = [id, id, v].  An invertible theta is preferred (and exists when
    alpha is invertible).
    """
    C, I = H.C, H.X.I
    aj = alpha[2][_jpos(H, j)]
    members = H.L[j].classes[aj]
    pick = next((m for m in members if _invertible(C, m[2][1])), members[0])
    (r, i), (s, i2), (u, theta, v) = pick
    k = I.tgt1(u)
    r2, s2 = C.comp1(r, H.X.map(u)), C.comp1(s, H.X.map(v))
    phi = H.cls(j, r2, k, r, i, I.id1(k), C.id2(r2), u)
    psi = H.cls(j, s2, k, s, i2, I.id1(k), C.id2(s2), v)
    return theta, Representative(k, j, r2, phi), Representative(k, j, s2, psi)


def straighten(H: ProHom, alpha_class, j=None):
    """(k, u, v, theta) with alpha [id_k, id, u] = [id_k, id, v] [id_k, theta, id_k].

    Chooses u = v when both ends sit at the same index, and an invertible
    theta when alpha is invertible.
    """
    j = _only(H, j)
    P = H.L[j]
    C, I = H.C, H.X.I
    members = P.classes[alpha_class]
    (r, i), (s, i2), _ = alpha_class
    inv = P.category.is_iso(alpha_class)

    def score(m):
        u, t, v = m[2]
        return (not (i == i2 and u == v), not (inv and _invertible(C, t)))

    best = min(members, key=lambda m: (score(m), sort_key(m)))
    u, theta, v = best[2]
    if i == i2 and u != v:
        raise NotFound("no representative with u = v in the class")
    if inv and not _invertible(C, theta):
        raise NotFound("no representative with invertible theta in the class")
    return I.tgt1(u), u, v, theta


def straighten_holds(H: ProHom, alpha_class, out, j=None) -> bool:
    j = _only(H, j)
    k, u, v, theta = out
    C, I = H.C, H.X.I
    L = H.L[j].category
    (r, i), (s, i2), _ = alpha_class
    ru, sv = C.comp1(r, H.X.map(u)), C.comp1(s, H.X.map(v))
    pu = H.cls(j, ru, k, r, i, I.id1(k), C.id2(ru), u)
    pv = H.cls(j, sv, k, s, i2, I.id1(k), C.id2(sv), v)
    t = H.cls(j, ru, k, sv, k, I.id1(k), theta, I.id1(k))
    return L.compose(alpha_class, pu) == L.compose(pv, t)


def _only(H, j):
    if j is None:
        js = list(H.Y.I.objects)
        if len(js) != 1:
            raise ShapeMismatch("target pro-object has several indices; pass j")
        return js[0]
    return j


def equalize(H: ProHom, pairs, i, j=None):
    """u: i -> i' with theta X_u = theta' X_u for every pair.

    The hypothesis theta pi_i = theta' pi_i is checked first (equal classes
    of [id, theta, id] and [id, theta', id]).
    """
    j = _only(H, j)
    C, I = H.C, H.X.I
    pairs = list(pairs)
    for t1, t2 in pairs:
        if (C.src2(t1), C.tgt2(t1)) != (C.src2(t2), C.tgt2(t2)):
            raise ShapeMismatch("pair is not parallel")
        r, s = C.src2(t1), C.tgt2(t1)
        if H.cls(j, r, i, s, i, I.id1(i), t1, I.id1(i)) != H.cls(j, r, i, s, i, I.id1(i), t2, I.id1(i)):
            raise HypothesisFails(f"{t1!r} and {t2!r} differ after projection")
    outs = sorted(I.one_cells(i), key=lambda u: (u != I.id1(i), sort_key(u)))
    for u in outs:
        Xu = H.X.map(u)
        if all(C.rw(t1, Xu) == C.rw(t2, Xu) for t1, t2 in pairs):
            return u
    raise NotFound("no equalizing 1-cell (contradicts the hypothesis)")


# ---------------------------------------------------------------- composition of pro-morphisms


def identity_promorphism(H: ProHom):
    """id_X in Pro(C)(X, X)."""
    X, C, I = H.X, H.C, H.X.I
    fam = {j: (C.id1(X.at(j)), j) for j in I.objects}
    isos = {}
    for v in I.cells1:
        j, j2 = I.src1(v), I.tgt1(v)
        isos[v] = H.cls(j, X.map(v), j2, C.id1(X.at(j)), j, I.id1(j2), C.id2(X.map(v)), v)
    return H.find(fam, isos)


def precomposition_functor(H_xy: ProHom, H_xz: ProHom, H_yz: ProHom, f: DescentObject, k):
    """P_f: colim_j C(Y_j, Z_k) -> colim_i C(X_i, Z_k), (s, j) |-> (s r_j, i_j)."""
    C, J = H_xy.C, H_xy.Y.I
    A = H_yz.L[k]
    B = H_xz.L[k]

    def post(s, m, j):
        # postcompose a morphism of colim C(X_-, Y_j) by s: Y_j -> Z_k
        X_, Y_, (u, t, w) = m
        return B.class_of[((C.comp1(s, X_[0]), X_[1]), (C.comp1(s, Y_[0]), Y_[1]), (u, C.lw(s, t), w))]

    obj, mor = {}, {}
    for (s, j) in A.category.objects:
        r, i = f.at(j)
        obj[(s, j)] = (C.comp1(s, r), i)
    Lb = B.category
    for c in A.category.morphisms:
        (s, j), (s2, j2), (u, theta, v) = c
        j3 = J.tgt1(u)
        r3, i3 = f.at(j3)
        fu, fv = f.iso(u), f.iso(v)
        a = post(s, fu, j)
        b = post(s2, fv, j2)
        t = B.class_of[((C.comp1(C.src2(theta), r3), i3), (C.comp1(C.tgt2(theta), r3), i3),
                        (H_xy.X.I.id1(i3), C.rw(theta, r3), H_xy.X.I.id1(i3)))]
        mor[c] = Lb.compose_path(b, t, Lb.inverse(a))
    return Functor(A.category, Lb, obj, mor, name=f"P_f@{k}")


def compose_promorphisms(H_xy: ProHom, H_yz: ProHom, H_xz: ProHom, f, g):
    """g f in Pro(C)(X, Z): (g f)_k = P_f(g_k), (g f)_w = P_f(g_w)."""
    K = H_yz.Y.I
    Ps = {k: precomposition_functor(H_xy, H_xz, H_yz, f, k) for k in K.objects}
    fam = {k: Ps[k](g.at(k)) for k in K.objects}
    isos = {w: Ps[K.src1(w)](g.iso(w)) for w in K.cells1}
    return H_xz.find(fam, isos)


# ---------------------------------------------------------------- M_f


@dataclass
class MfTruncation:
    twocat: TwoCat
    proj_I: PseudoFunctor
    proj_J: PseudoFunctor
    objects: list
    reports: dict = field(default_factory=dict)


def build_Mf(H: ProHom, f: DescentObject, bound=None, slack=0, check=True) -> MfTruncation:
    """Objects (i, j, r, phi) representing f; 1-cells (u, a, theta); 2-cells (mu, alpha).

    ``bound`` caps the quantified objects of the filtered and cofinal checks
    (objects are taken in canonical order); witnesses may use ``slack`` more.
    """
    X, Y, C = H.X, H.Y, H.C
    I, J = X.I, Y.I
    objs = []
    for j in J.objects:
        L = H.L[j].category
        for i in I.objects:
            for r in C.one_cells(X.at(i), Y.at(j)):
                for phi in L.hom((r, i), f.at(j)):
                    if L.is_iso(phi):
                        objs.append((i, j, r, phi))
    objs.sort(key=sort_key)
    n_all = len(objs)
    if bound is not None:
        objs = objs[:bound + slack]
    cells1, comp1, cells2 = {}, {}, {}
    for A in objs:
        i, j, r, phi = A
        for B in objs:
            i2, j2, s, psi = B
            Lj = H.L[j].category
            for u in I.one_cells(i, i2):
                for a in J.one_cells(j, j2):
                    Ya = Y.map(a)
                    Ysa = C.comp1(Ya, s)
                    rXu = C.comp1(r, X.map(u))
                    La = H.diagram.on1(a)
                    rhs = Lj.compose(f.iso(a), La(psi))
                    for theta in C.two_cells(Ysa, rXu):
                        if not _invertible(C, theta):
                            continue
                        t = H.cls(j, Ysa, i2, rXu, i2, I.id1(i2), theta, I.id1(i2))
                        pu = H.cls(j, rXu, i2, r, i, I.id1(i2), C.id2(rXu), u)
                        if Lj.compose_path(phi, pu, t) == rhs:
                            cells1[(A, B, (u, a, theta))] = (A, B)
    ids = {}
    for A in objs:
        i, j, r, phi = A
        e = (A, A, (I.id1(i), J.id1(j), C.id2(r)))
        if e not in cells1:
            raise ShapeMismatch(f"identity at {A!r} fails the defining equation")
        ids[A] = e
    by_src = {}
    for m in cells1:
        by_src.setdefault(m[0], []).append(m)
    for m in cells1:
        A, B, (u, a, th) = m
        r = A[2]
        for m2 in by_src.get(B, ()):
            _, Cc, (u2, a2, th2) = m2
            t = C.vcomp(C.rw(th, X.map(u2)), C.lw(Y.map(a), th2))
            comp1[(m2, m)] = (A, Cc, (I.comp1(u2, u), J.comp1(a2, a), t))
            if comp1[(m2, m)] not in cells1:
                raise ShapeMismatch("M_f composite fails the defining equation")
    homs = {}
    for m in cells1:
        homs.setdefault(cells1[m], []).append(m)
    for (A, B), ms in homs.items():
        r, s = A[2], B[2]
        for m in ms:
            u, a, th = m[2]
            for m2 in ms:
                u2, a2, eta = m2[2]
                for mu in I.two_cells(u, u2):
                    for al in J.two_cells(a, a2):
                        lhs = C.vcomp(eta, C.rw(Y.map2(al), s))
                        rhs = C.vcomp(C.lw(r, X.map2(mu)), th)
                        if lhs == rhs:
                            cells2[(m, m2, (mu, al))] = (m, m2)
    id2 = {m: (m, m, (I.id2(m[2][0]), J.id2(m[2][1]))) for m in cells1}
    vc, hc = {}, {}
    for x, (m, m2) in cells2.items():
        for y, (n, n2) in cells2.items():
            if n == m2:
                vc[(y, x)] = (m, n2, (I.vcomp(y[2][0], x[2][0]), J.vcomp(y[2][1], x[2][1])))
            if m[1] == n[0]:
                hc[(y, x)] = (comp1[(n, m)], comp1[(n2, m2)],
                              (I.hcomp(y[2][0], x[2][0]), J.hcomp(y[2][1], x[2][1])))
    K = TwoCat(objs, cells1, ids, comp1, cells2, id2, vc, hc, name="M_f")
    pI = PseudoFunctor(K, I, lambda A: A[0], lambda m: m[2][0], lambda x: x[2][0], name="M_f->I")
    pJ = PseudoFunctor(K, J, lambda A: A[1], lambda m: m[2][1], lambda x: x[2][1], name="M_f->J")
    out = MfTruncation(K, pI, pJ, objs)
    if check:
        core = objs[:bound] if bound is not None else objs
        out.reports["valid"] = validate_twocat(K)
        out.reports["filtered"] = check_2filtered(K, core=core)
        out.reports["cofinal_I"] = check_2cofinal(pI, core=core)
        out.reports["cofinal_J"] = check_2cofinal(pJ, core=core)
        inconclusive = not (out.reports["filtered"].ok and out.reports["cofinal_I"].ok
                            and out.reports["cofinal_J"].ok)
        if inconclusive and len(objs) < n_all:
            raise BoundTooSmall(f"M_f checks inconclusive with {len(objs)} of {n_all} objects")
    return out


# ---------------------------------------------------------------- K_X


@dataclass
class KXTruncation:
    twocat: TwoCat
    Xtilde: PseudoFunctor
    proj_J: PseudoFunctor
    reports: dict = field(default_factory=dict)


def build_KX(J: TwoCat, Xs: dict, maps: dict, homs: dict | None = None, bound=None, check=True) -> KXTruncation:
    """K_X for X: J^op -> Pro(C) given by pro-objects ``Xs[j]`` and pro-morphisms
    ``maps[a]`` in Pro(C)(X^{j'}, X^j) for a: j -> j' (locally discrete J).

    0-cells (i, j); 1-cells (a, r, phi) with (r, phi) representing X^a;
    composite (a' a, r r', P_{X^{a'}}(phi) (r . phi')); 2-cells (id_a, theta)
    with phi_2 [id, theta, id] = phi.
    """
    C = next(iter(Xs.values())).C
    homs = dict(homs or {})

    def hom(j2, j):
        if (j2, j) not in homs:
            homs[(j2, j)] = ProHom(Xs[j2], Xs[j])
        return homs[(j2, j)]

    Xa = {}
    for a in J.cells1:
        j, j2 = J.src1(a), J.tgt1(a)
        Xa[a] = maps[a] if a in maps else identity_promorphism(hom(j, j))
    objs = [(i, j) for j in J.objects for i in Xs[j].I.objects]
    cells1 = {}
    for (i, j) in objs:
        for (i2, j2) in objs:
            for a in J.one_cells(j, j2):
                H = hom(j2, j)
                L = H.L[i].category
                target = Xa[a].at(i)
                for r in C.one_cells(Xs[j2].at(i2), Xs[j].at(i)):
                    for phi in L.hom((r, i2), target):
                        if L.is_iso(phi):
                            cells1[((i, j), (i2, j2), (a, r, phi))] = ((i, j), (i2, j2))
    if bound is not None and len(cells1) > bound:
        raise BoundTooSmall(f"K_X has {len(cells1)} 1-cells, above the bound {bound}")
    ids = {}
    for (i, j) in objs:
        r = C.id1(Xs[j].at(i))
        e = ((i, j), (i, j), (J.id1(j), r, hom(j, j).identity_class(i, r, i)))
        if e not in cells1:
            raise ShapeMismatch(f"identity at {(i, j)!r} is not a 1-cell of K_X")
        ids[(i, j)] = e
    comp1 = {}
    pre, postc = {}, {}
    by_src = {}
    for m2 in cells1:
        by_src.setdefault(m2[0], []).append(m2)
    for m in cells1:
        A, B, (a, r, phi) = m
        for m2 in by_src.get(B, ()):
            _, Cc, (a2, r2, phi2) = m2
            j, j2, j3 = A[1], B[1], Cc[1]
            key = (j3, j2, j, a2, A[0])
            if key not in pre:
                pre[key] = precomposition_functor(hom(j3, j2), hom(j3, j), hom(j2, j), Xa[a2], A[0])
            P = pre[key]
            H13 = hom(j3, j)
            L = H13.L[A[0]].category
            key = (j3, j2, j, B[0], A[0], r)
            if key not in postc:
                postc[key] = postcompose_classes(hom(j3, j2).L[B[0]], H13.L[A[0]], C, r)
            rphi2 = postc[key](phi2)
            phi3 = L.compose(P(phi), rphi2)
            comp1[(m2, m)] = (A, Cc, (J.comp1(a2, a), C.comp1(r, r2), phi3))
            if comp1[(m2, m)] not in cells1:
                raise ShapeMismatch("K_X composite is not a 1-cell")
    cells2 = {}
    homs1 = {}
    for m in cells1:
        homs1.setdefault(cells1[m], []).append(m)
    for (A, B), ms in homs1.items():
        H = hom(B[1], A[1])
        for m in ms:
            a, r, phi = m[2]
            for m2 in ms:
                a2, r2, phi2 = m2[2]
                if a2 != a:
                    continue
                for theta in C.two_cells(r, r2):
                    t = H.cls(A[0], r, B[0], r2, B[0], Xs[B[1]].I.id1(B[0]), theta, Xs[B[1]].I.id1(B[0]))
                    if H.L[A[0]].category.compose(phi2, t) == phi:
                        cells2[(m, m2, (J.id2(a), theta))] = (m, m2)
    id2 = {m: (m, m, (J.id2(m[2][0]), C.id2(m[2][1]))) for m in cells1}
    vc, hc = {}, {}
    for x, (m, m2) in cells2.items():
        for y, (n, n2) in cells2.items():
            if n == m2:
                vc[(y, x)] = (m, n2, (J.vcomp(y[2][0], x[2][0]), C.vcomp(y[2][1], x[2][1])))
            if m[1] == n[0]:
                # 1-cells compose as r r', so 2-cells juxtapose as theta theta'
                hc[(y, x)] = (comp1[(n, m)], comp1[(n2, m2)],
                              (J.hcomp(y[2][0], x[2][0]), C.hcomp(x[2][1], y[2][1])))
    K = TwoCat(objs, cells1, ids, comp1, cells2, id2, vc, hc, name="K_X")
    Kop = K.op()
    Xt = PseudoFunctor(Kop, C, lambda A: Xs[A[1]].at(A[0]), lambda m: m[2][1], lambda x: x[2][1],
                       name="X~")
    pJ = PseudoFunctor(K, J, lambda A: A[1], lambda m: m[2][0], lambda x: x[2][0], name="K_X->J")
    out = KXTruncation(K, Xt, pJ)
    if check:
        out.reports["valid"] = validate_twocat(K)
        out.reports["filtered"] = check_2filtered(K)
        out.reports["Xtilde"] = check_pseudo_functor(Xt)
    return out


# ---------------------------------------------------------------- reindexing


def reindex(X: ProObject, F: PseudoFunctor, targets=None):
    """X_F = X F^op with a per-target equivalence certificate.

    For each object D of C (or of ``targets``) the comparison functor
    colim C((X_F)_-, D) -> colim C(X_-, D) is decided.
    """
    I2 = F.source
    one = {u: X.map(F.on1(u)) for u in I2.cells1}
    two = {x: X.map2(F.on2(x)) for x in I2.cells2}
    XF = ProObject(I2, X.C, {i: X.at(F.ob(i)) for i in I2.objects}, one, two,
                   name=f"{X.name}.F", check=False)
    cert = {}
    for D in (targets if targets is not None else X.C.objects):
        h, dec, _ = comparison_functor(F, hom_functor(X, D))
        cert[D] = dec
    return XF, cert


def inclusion(I: TwoCat, objects, name=None):
    """The full sub-2-category on ``objects`` with its inclusion into I."""
    from .shape import _restrict
    S = _restrict(I, objects)
    return S, PseudoFunctor(S, I, lambda a: a, lambda f: f, lambda x: x, name=name or "incl")
