"""Index-shape analysis: 2-filteredness, 2-cofinality, the poset M(J) of
finite diagrams with its comparison map Phi, and the 2-category A-hat of
composable tuples with its pseudo-functor T.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import FinCat, ImplicitTwoCat, TwoCat, ordered
from .errors import BoundTooSmall, ShapeMismatch
from .maps import PseudoFunctor, as_twocat, check_pseudo_functor


def _ones(K, a, b, bound):
    return K.one_cells(a, b) if K.explicit else K.one_cells(a, b, bound)


# ---------------------------------------------------------------- 2-filteredness


@dataclass
class FilteredReport:
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)
    nonempty: bool = True
    coverage: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.nonempty and all(self.verdicts.values())

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "nonempty": self.nonempty, "verdicts": self.verdicts,
                "witnesses": {k: [[str(x) for x in w] for w in v] for k, v in self.witnesses.items()},
                "counterexamples": {k: [[str(x) for x in w] for w in v] for k, v in self.counterexamples.items()},
                "coverage": self.coverage}


def _cospan(K, a, b, objs, bound):
    for c in objs:
        fs = _ones(K, a, c, bound)
        gs = _ones(K, b, c, bound)
        if fs and gs:
            return (c, fs[0], gs[0])
    return None


def _coequalize(K, f, g, objs, bound):
    b = K.tgt1(f)
    for c in objs:
        for h in _ones(K, b, c, bound):
            for x in K.two_cells(K.comp1(h, f), K.comp1(h, g)):
                if K.inverse2(x) is not None:
                    return (h, x)
    return None


def _equalize2(K, x, y, objs, bound):
    b = K.tgt1(K.src2(x))
    for c in objs:
        for h in _ones(K, b, c, bound):
            if K.lw(h, x) == K.lw(h, y):
                return (h,)
    return None


def check_2filtered(K, core=None, bound=None) -> FilteredReport:
    """Exhaustive F0/F1/F2 check.

    ``core`` restricts the quantified objects (witnesses may use any object),
    which is how truncations are checked with slack.  ``bound`` caps tuple
    length for implicit 2-categories.
    """
    K = as_twocat(K)
    objs = list(K.objects)
    core = objs if core is None else [a for a in objs if a in set(core)]
    rep = FilteredReport(nonempty=bool(objs))
    rep.coverage = {"core_objects": len(core), "objects": len(objs), "bound": bound}
    for ax in ("F0", "F1", "F2"):
        rep.verdicts[ax] = True
        rep.witnesses[ax] = []
        rep.counterexamples[ax] = []
    for i, a in enumerate(core):
        for b in core[i:]:
            w = _cospan(K, a, b, objs, bound)
            if w is None:
                rep.verdicts["F0"] = False
                rep.counterexamples["F0"].append((a, b))
            else:
                rep.witnesses["F0"].append((a, b) + w)
    for a in core:
        for b in core:
            fs = _ones(K, a, b, bound)
            for i, f in enumerate(fs):
                for g in fs[i + 1:]:
                    w = _coequalize(K, f, g, objs, bound)
                    if w is None:
                        rep.verdicts["F1"] = False
                        rep.counterexamples["F1"].append((f, g))
                    else:
                        rep.witnesses["F1"].append((f, g) + w)
            for f in fs:
                for g in fs:
                    xs = list(K.two_cells(f, g))
                    for i, x in enumerate(xs):
                        for y in xs[i + 1:]:
                            w = _equalize2(K, x, y, objs, bound)
                            if w is None:
                                rep.verdicts["F2"] = False
                                rep.counterexamples["F2"].append((x, y))
                            else:
                                rep.witnesses["F2"].append((x, y) + w)
    return rep


def recheck_filtered(K, rep: FilteredReport) -> bool:
    """Re-validate every stored witness against the raw structure."""
    K = as_twocat(K)
    for a, b, c, f, g in rep.witnesses.get("F0", []):
        if (K.src1(f), K.tgt1(f), K.src1(g), K.tgt1(g)) != (a, c, b, c):
            return False
    for f, g, h, x in rep.witnesses.get("F1", []):
        if (K.src2(x), K.tgt2(x)) != (K.comp1(h, f), K.comp1(h, g)) or K.inverse2(x) is None:
            return False
    for x, y, h in rep.witnesses.get("F2", []):
        if K.lw(h, x) != K.lw(h, y):
            return False
    return True


# ---------------------------------------------------------------- 2-cofinality


@dataclass
class CofinalReport:
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)
    target_filtered: FilteredReport | None = None
    coverage: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.verdicts.values())

    def __bool__(self):
        return self.ok

    def to_dict(self):
        out = {"ok": self.ok, "verdicts": self.verdicts,
               "witnesses": {k: [[str(x) for x in w] for w in v] for k, v in self.witnesses.items()},
               "counterexamples": {k: [[str(x) for x in w] for w in v] for k, v in self.counterexamples.items()},
               "coverage": self.coverage}
        if self.target_filtered is not None:
            out["target_filtered"] = self.target_filtered.ok
        return out


def check_2cofinal(F: PseudoFunctor, core=None, bound=None, witness_objects=None) -> CofinalReport:
    """Exhaustive CF0/CF1/CF2 check for F: I -> J.

    ``core`` restricts the quantified source objects, ``witness_objects``
    restricts where witnesses u: i -> i' may land (defaults to all of I).
    ``bound`` caps tuple length when J is implicit; a CF0 search that finds
    nothing within the bound raises BoundTooSmall.
    """
    I, J = F.source, F.target
    objs = list(I.objects)
    core = objs if core is None else [a for a in objs if a in set(core)]
    wobjs = objs if witness_objects is None else [a for a in objs if a in set(witness_objects)]
    rep = CofinalReport()
    rep.coverage = {"core_objects": len(core), "bound": bound, "implicit_target": not J.explicit}
    for ax in ("CF0", "CF1", "CF2"):
        rep.verdicts[ax] = True
        rep.witnesses[ax] = []
        rep.counterexamples[ax] = []
    for j in J.objects:
        found = None
        for i in wobjs:
            fs = _ones(J, j, F.ob(i), bound)
            if fs:
                found = (j, i, fs[0])
                break
        if found is None:
            if not J.explicit:
                raise BoundTooSmall(f"no arrow out of {j!r} within bound {bound}")
            rep.verdicts["CF0"] = False
            rep.counterexamples["CF0"].append((j,))
        else:
            rep.witnesses["CF0"].append(found)
    outs = {i: [(u, I.tgt1(u)) for i2 in wobjs for u in I.one_cells(i, i2)] for i in core}
    for i in core:
        for j in J.objects:
            fs = _ones(J, j, F.ob(i), bound)
            for k, a in enumerate(fs):
                for b in fs[k + 1:]:
                    w = None
                    for u, _ in outs[i]:
                        Fu = F.on1(u)
                        for x in J.two_cells(J.comp1(Fu, a), J.comp1(Fu, b)):
                            if J.inverse2(x) is not None:
                                w = (a, b, u, x)
                                break
                        if w:
                            break
                    if w is None:
                        rep.verdicts["CF1"] = False
                        rep.counterexamples["CF1"].append((i, a, b))
                    else:
                        rep.witnesses["CF1"].append(w)
            for a in fs:
                for b in fs:
                    xs = list(J.two_cells(a, b))
                    for k, x in enumerate(xs):
                        for y in xs[k + 1:]:
                            w = None
                            for u, _ in outs[i]:
                                if J.lw(F.on1(u), x) == J.lw(F.on1(u), y):
                                    w = (x, y, u)
                                    break
                            if w is None:
                                rep.verdicts["CF2"] = False
                                rep.counterexamples["CF2"].append((i, x, y))
                            else:
                                rep.witnesses["CF2"].append(w)
    if rep.ok:
        # a cofinal functor out of a filtered index forces a filtered target
        rep.target_filtered = check_2filtered(J, bound=bound)
    return rep


# ---------------------------------------------------------------- M(J)


@dataclass(frozen=True)
class MJDiagram:
    """A functor from a finite poset with top into the underlying category of J.

    Elements are 0..m-1 with m-1 the top; ``rel`` holds the strict pairs x<y;
    ``objs[x]`` is the image of x and ``arrows`` maps each pair to a 1-cell.
    """

    objs: tuple
    rel: frozenset
    arrows: tuple

    @property
    def m(self):
        return len(self.objs)

    @property
    def top(self):
        return self.m - 1

    @property
    def size(self):
        return self.m + len(self.rel)

    def arrow(self, x, y):
        return dict(self.arrows)[(x, y)]

    @property
    def key(self):
        body = ";".join(f"{x}<{y}:{a}" for (x, y), a in self.arrows)
        return "(" + ",".join(map(str, self.objs)) + "){" + body + "}"

    def __str__(self):
        return self.key


def _posets_with_top(max_size):
    """Posets on 0..m-1 with top m-1, as frozensets of strict pairs, size <= max_size."""
    out = []
    m = 1
    while m + (m - 1) <= max_size:
        k = m - 1
        pairs = [(x, y) for x in range(k) for y in range(k) if x != y]
        for r in range(len(pairs) + 1):
            if m + (m - 1) + r > max_size:
                break
            for sub in itertools.combinations(pairs, r):
                s = set(sub)
                if any((y, x) in s for (x, y) in s):
                    continue
                if any((x, z) not in s for (x, y) in s for (y2, z) in s if y == y2):
                    continue
                rel = frozenset(s | {(x, k) for x in range(k)})
                out.append((m, rel))
        m += 1
    return out


def _canonical(objs, rel, arrows, m):
    best = None
    for perm in itertools.permutations(range(m - 1)):
        p = list(perm) + [m - 1]
        o = [None] * m
        for x in range(m):
            o[p[x]] = objs[x]
        arr = tuple(sorted(((p[x], p[y]), arrows[(x, y)]) for (x, y) in rel))
        enc = (tuple(map(str, o)), tuple((xy, str(a)) for xy, a in arr))
        if best is None or enc < best[0]:
            best = (enc, MJDiagram(tuple(o), frozenset(xy for xy, _ in arr), arr))
    return best[1]


def enumerate_diagrams(J, max_size):
    """All isomorphism classes of diagrams of size <= max_size, canonically ordered."""
    J = as_twocat(J)
    found = {}
    jobjs = ordered(J.objects)
    for m, rel in _posets_with_top(max_size):
        order = sorted(rel)
        for objs in itertools.product(jobjs, repeat=m):
            choices = [J.one_cells(objs[x], objs[y]) for (x, y) in order]
            if any(not c for c in choices):
                continue
            for pick in itertools.product(*choices):
                arrows = dict(zip(order, pick))
                ok = True
                for (x, y) in order:
                    for (y2, z) in order:
                        if y2 == y and J.comp1(arrows[(y, z)], arrows[(x, y)]) != arrows[(x, z)]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    d = _canonical(objs, rel, arrows, m)
                    found[d.key] = d
    return sorted(found.values(), key=lambda d: (d.size, d.key))


def embeddings(C: MJDiagram, D: MJDiagram):
    """All injective order-preserving h with D o h = C."""
    out = []
    cl = dict(C.arrows)
    dl = dict(D.arrows)

    def rec(x, h):
        if x == C.m:
            out.append(tuple(h))
            return
        for y in range(D.m):
            if y in h or D.objs[y] != C.objs[x]:
                continue
            ok = True
            for x2 in range(x):
                if (x2, x) in C.rel:
                    if not ((h[x2], y) in D.rel and dl[(h[x2], y)] == cl[(x2, x)]):
                        ok = False
                        break
                if (x, x2) in C.rel:
                    if not ((y, h[x2]) in D.rel and dl[(y, h[x2])] == cl[(x, x2)]):
                        ok = False
                        break
            if ok:
                rec(x + 1, h + [y])

    rec(0, [])
    return out


@dataclass
class MJ:
    J: object
    n: int
    slack: int
    diagrams: list
    leq: dict
    poset: TwoCat
    phi: PseudoFunctor
    report: dict

    def core(self):
        return [d.key for d in self.diagrams if d.size <= self.n]

    def by_key(self, key):
        return next(d for d in self.diagrams if d.key == key)


def _phi_arrow(J, C, D, h):
    x = h[C.top]
    if x == D.top:
        return J.id1(D.objs[D.top])
    return dict(D.arrows)[(x, D.top)]


def build_MJ(J, n, slack=1, filtered_slack=None, strict=True) -> MJ:
    """Truncation of M(J) to diagrams of size <= n + slack, with Phi and checks.

    Quantifiers of the filtered and cofinal checks range over diagrams of size
    <= n; witnesses may use the whole truncation.  ``filtered_slack`` lets the
    filtered check use a larger truncation than the cofinality check.
    """
    J = as_twocat(J)
    fs = slack if filtered_slack is None else filtered_slack
    top_size = n + max(slack, fs)
    diagrams = enumerate_diagrams(J, top_size)
    keys = [d.key for d in diagrams]
    leq = {}
    phi_arrow = {}
    well_defined = True
    for C in diagrams:
        for D in diagrams:
            if C.size > D.size:
                continue
            hs = embeddings(C, D)
            if hs:
                leq[(C.key, D.key)] = True
                arrows = {_phi_arrow(J, C, D, h) for h in hs}
                phi_arrow[(C.key, D.key)] = _phi_arrow(J, C, D, hs[0])
                if len(arrows) > 1:
                    well_defined = False
    antisym = all(not (leq.get((a, b)) and leq.get((b, a))) for a in keys for b in keys if a != b)
    P = FinCat.preorder(keys, [p for p in leq])
    poset = TwoCat.locally_discrete(P, name=f"M({J.name})<= {top_size}")
    by_key = {d.key: d for d in diagrams}

    def one(u):
        a, b = P.morphisms[u]
        return phi_arrow[(a, b)]

    phi = PseudoFunctor(poset, J, lambda k: by_key[k].objs[by_key[k].top], one,
                        lambda x: J.id2(one(poset.cells2[x][0])))
    phi_rep = check_pseudo_functor(phi)
    core_n = [d.key for d in diagrams if d.size <= n]
    cofinite = all(by_key[a].size <= by_key[b].size for (a, b) in leq)
    minimal = [k for k in keys if not any(leq.get((o, k)) for o in keys if o != k)]
    sub = _restrict(poset, [d.key for d in diagrams if d.size <= n + fs])
    filt = check_2filtered(sub, core=core_n)
    if not filt.ok and strict:
        raise BoundTooSmall(f"a filtered witness needs more than {n + fs} cells: "
                            f"{filt.counterexamples['F0'][:1]}")
    within = [d.key for d in diagrams if d.size <= n + slack]
    cof = check_2cofinal(_restrict_functor(phi, _restrict(poset, within)), core=core_n)
    report = {"diagrams": len(diagrams), "core": len(core_n), "antisymmetric": antisym,
              "cofinite": cofinite, "filtered": filt.ok, "filtered_slack": fs,
              "phi_functorial": phi_rep.ok, "phi_well_defined": well_defined,
              "cofinal": cof.ok, "cofinal_slack": slack, "minimal_elements": minimal,
              "initial_object_claim": "not asserted", "filtered_report": filt, "cofinal_report": cof}
    return MJ(J, n, slack, diagrams, leq, poset, phi, report)


def _restrict(K: TwoCat, objects):
    """Full sub-2-category on the given objects."""
    keep = set(objects)
    c1 = {f: st for f, st in K.cells1.items() if st[0] in keep and st[1] in keep}
    c2 = {a: st for a, st in K.cells2.items() if st[0] in c1}
    return TwoCat([a for a in K.objects if a in keep], c1, {a: K.id1(a) for a in keep},
                  {k: v for k, v in K.hcomp1.items() if k[0] in c1 and k[1] in c1}, c2,
                  {f: K.id2(f) for f in c1},
                  {k: v for k, v in K.vcomp_table.items() if k[1] in c2},
                  {k: v for k, v in K.hcomp2.items() if k[0] in c2 and k[1] in c2}, name=K.name)


def _restrict_functor(F: PseudoFunctor, S: TwoCat):
    return PseudoFunctor(S, F.target, F.ob, F.on1, F.on2)


def filtered_index(mj: MJ):
    """A finite filtered sub-poset: the size-<=n diagrams plus one common upper bound.

    Returns the sub-2-category and the restriction of Phi to it.
    """
    core = mj.core()
    chosen = list(core)
    if not check_2filtered(_restrict(mj.poset, core)).ok:
        tops = [d.key for d in mj.diagrams if all(mj.leq.get((c, d.key)) for c in core)]
        if not tops:
            raise BoundTooSmall("no common upper bound of the core inside the truncation")
        chosen.append(tops[0])
    sub = _restrict(mj.poset, chosen)
    return sub, _restrict_functor(mj.phi, sub)


# ---------------------------------------------------------------- A-hat


@dataclass(frozen=True)
class Path:
    """A tuple of composable arrows of A from ``src`` to ``tgt`` (empty allowed)."""

    src: object
    tgt: object
    arrows: tuple

    def __str__(self):
        return "(" + ",".join(map(str, self.arrows)) + ")" if self.arrows else f"()_{self.src}"


@dataclass(frozen=True)
class HatCell:
    """The unique 2-cell from ``src`` to ``tgt`` between parallel tuples."""

    src: Path
    tgt: Path

    def __str__(self):
        return f"theta[{self.tgt},{self.src}]"


class HatTwoCat(ImplicitTwoCat):
    """Tuples of composable arrows of A, at most one (invertible) 2-cell between parallel tuples."""

    def __init__(self, A: FinCat):
        self.A = A
        self.objects = A.objects
        self.name = f"{A.name}^"

    def composite(self, p: Path):
        if not p.arrows:
            return self.A.ident(p.src)
        return self.A.compose_path(*reversed(p.arrows))

    def src1(self, p):
        return p.src

    def tgt1(self, p):
        return p.tgt

    def id1(self, a):
        return Path(a, a, ())

    def comp1(self, g, f):
        if f.tgt != g.src:
            raise ShapeMismatch(f"{g} and {f} are not composable")
        return Path(f.src, g.tgt, f.arrows + g.arrows)

    def one_cells(self, a=None, b=None, bound=4):
        bound = 4 if bound is None else bound
        starts = self.objects if a is None else [a]
        out = []
        for s in starts:
            frontier = [Path(s, s, ())]
            for _ in range(bound + 1):
                nxt = []
                for p in frontier:
                    if b is None or p.tgt == b:
                        out.append(p)
                    if len(p.arrows) < bound:
                        for m in ordered(self.A.morphisms):
                            if self.A.src(m) == p.tgt:
                                nxt.append(Path(s, self.A.tgt(m), p.arrows + (m,)))
                frontier = nxt
        return out

    def two_cells(self, f, g):
        if (f.src, f.tgt) == (g.src, g.tgt) and self.composite(f) == self.composite(g):
            return [HatCell(f, g)]
        return []

    def src2(self, x):
        return x.src

    def tgt2(self, x):
        return x.tgt

    def id2(self, f):
        return HatCell(f, f)

    def vcomp(self, b, a):
        if a.tgt != b.src:
            raise ShapeMismatch("2-cells are not vertically composable")
        return HatCell(a.src, b.tgt)

    def hcomp(self, b, a):
        return HatCell(self.comp1(b.src, a.src), self.comp1(b.tgt, a.tgt))

    def inverse2(self, x):
        return HatCell(x.tgt, x.src)


def build_hat(A: FinCat):
    """The implicit 2-category A-hat and the pseudo-functor T: A -> A-hat."""
    H = HatTwoCat(A)
    src = TwoCat.locally_discrete(A)

    def one(f):
        return Path(A.src(f), A.tgt(f), (f,))

    def unit(a):
        return HatCell(Path(a, a, ()), one(A.ident(a)))

    def comp(f, g):
        return HatCell(Path(A.src(f), A.tgt(g), (f, g)), one(A.compose(g, f)))

    T = PseudoFunctor(src, H, lambda a: a, one, lambda x: H.id2(one(src.cells2[x][0])), unit, comp,
                      name="T")
    return H, T


def iterated_compositor(F: PseudoFunctor, arrows, a):
    """theta_f: F f_n ... F f_1 => F(f_n ... f_1); the unit cell for the empty tuple."""
    S, C = F.source, F.target
    if not arrows:
        return F.unit(a)
    cell = C.id2(F.on1(arrows[0]))
    c = arrows[0]
    for f in arrows[1:]:
        cell = C.vcomp(F.compositor(c, f), C.lw(F.on1(f), cell))
        c = S.comp1(f, c)
    return cell


def transport_along_hat(F: PseudoFunctor, H: HatTwoCat | None = None) -> PseudoFunctor:
    """The strict 2-functor F-hat: A-hat -> C with F-hat T = F."""
    H = H or HatTwoCat(F.source.underlying() if hasattr(F.source, "underlying") else F.source)
    C = F.target

    def one(p):
        out = C.id1(F.ob(p.src))
        for f in p.arrows:
            out = C.comp1(F.on1(f), out)
        return out

    def theta(p):
        return iterated_compositor(F, p.arrows, p.src)

    def two(x):
        return C.vcomp(C.inverse2(theta(x.tgt)), theta(x.src))

    return PseudoFunctor(H, C, F.ob, one, two, name="F^")


def restrict_along_T(G: PseudoFunctor, T: PseudoFunctor) -> PseudoFunctor:
    """G T as a pseudo-functor A -> C (G strict)."""
    C = G.target
    return PseudoFunctor(T.source, C, lambda a: G.ob(T.ob(a)), lambda f: G.on1(T.on1(f)),
                         lambda x: G.on2(T.on2(x)), lambda a: G.on2(T.unit(a)),
                         lambda f, g: G.on2(T.compositor(f, g)))


def agree_on_probe(G1: PseudoFunctor, G2: PseudoFunctor, H: HatTwoCat, bound) -> bool:
    """Compare two 2-functors out of A-hat on every probed tuple and 2-cell."""
    for a in H.objects:
        if G1.ob(a) != G2.ob(a):
            return False
    cells = H.one_cells(bound=bound)
    for p in cells:
        if G1.on1(p) != G2.on1(p):
            return False
    by_bd: dict = {}
    for p in cells:
        by_bd.setdefault((p.src, p.tgt, H.composite(p)), []).append(p)
    for ps in by_bd.values():
        for p in ps:
            for q in ps:
                if G1.on2(HatCell(p, q)) != G2.on2(HatCell(p, q)):
                    return False
    return True
