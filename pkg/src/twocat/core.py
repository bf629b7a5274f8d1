"""Finite categories and finite 2-categories as explicit tables.

Cells are hashable ids (strings in hand-written fixtures, tuples in derived
constructions).  Everything is immutable after construction; validation
reports list every violated law with the witnessing cells.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping

import numpy as np

from . import kernels
from .errors import DanglingId, ShapeMismatch, UnknownCell, UnknownObject

Cell = Hashable


def sort_key(x):
    return str(x)


def ordered(xs):
    return sorted(xs, key=sort_key)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    coverage: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, kind, witness, detail=""):
        self.violations.append(Violation(kind, tuple(witness), detail))

    def extend(self, other):
        self.violations.extend(other.violations)
        self.coverage.update(other.coverage)

    def kinds(self):
        return {v.kind for v in self.violations}

    def finish(self):
        self.violations = sorted(set(self.violations), key=lambda v: (v.kind, sort_key(v.witness)))
        return self

    def to_dict(self):
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "witness": [str(w) for w in v.witness], "detail": v.detail}
                for v in self.violations
            ],
            "coverage": {k: v for k, v in self.coverage.items()},
        }


@dataclass
class Decision:
    verdict: bool
    clause: str | None = None
    witness: Any = None
    data: Any = None

    def __bool__(self):
        return self.verdict


# ---------------------------------------------------------------- FinCat


class FinCat:
    """A finite category given by explicit tables."""

    def __init__(self, objects: Iterable, morphisms: Mapping, identities: Mapping,
                 composition: Mapping, name: str | None = None):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = {m: tuple(st) for m, st in morphisms.items()}
        self.identities = dict(identities)
        self.comp = dict(composition)
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise DanglingId("duplicate object id")
        for m, (s, t) in self.morphisms.items():
            if s not in objs or t not in objs:
                raise DanglingId(f"morphism {m!r} has undeclared endpoint")
        for a, m in self.identities.items():
            if a not in objs or m not in self.morphisms:
                raise DanglingId(f"identity entry {a!r} -> {m!r}")
        for a in self.objects:
            if a not in self.identities:
                raise DanglingId(f"object {a!r} has no identity")
        for (g, f), h in self.comp.items():
            for x in (g, f, h):
                if x not in self.morphisms:
                    raise DanglingId(f"composition entry mentions {x!r}")

    def __repr__(self):
        return f"FinCat({self.name or ''}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    # basic structure
    def src(self, m):
        try:
            return self.morphisms[m][0]
        except KeyError:
            raise UnknownCell(m) from None

    def tgt(self, m):
        try:
            return self.morphisms[m][1]
        except KeyError:
            raise UnknownCell(m) from None

    def ident(self, a):
        try:
            return self.identities[a]
        except KeyError:
            raise UnknownObject(a) from None

    def compose(self, g, f):
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise ShapeMismatch(f"{g!r} after {f!r} is not defined") from None

    def compose_path(self, *ms):
        """Compose right to left: ``compose_path(h, g, f)`` is h after g after f."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    @cached_property
    def _homs(self):
        homs = {}
        for m in ordered(self.morphisms):
            homs.setdefault(self.morphisms[m], []).append(m)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, a, b):
        return self._homs.get((a, b), ())

    @cached_property
    def _inverses(self):
        inv = {}
        for m, (s, t) in self.morphisms.items():
            for n in self.hom(t, s):
                if self.comp.get((n, m)) == self.identities[s] and self.comp.get((m, n)) == self.identities[t]:
                    inv[m] = n
                    break
        return inv

    def inverse(self, m):
        return self._inverses.get(m)

    def is_iso(self, m):
        return m in self._inverses

    def isos(self, a, b):
        return tuple(m for m in self.hom(a, b) if m in self._inverses)

    def is_identity(self, m):
        s, t = self.morphisms[m]
        return s == t and self.identities[s] == m

    # integer tables for the kernels
    @cached_property
    def tables(self):
        mors = ordered(self.morphisms)
        index = {m: i for i, m in enumerate(mors)}
        n = len(mors)
        comp = np.full((n, n), -1, dtype=np.intc)
        for (g, f), h in self.comp.items():
            comp[index[g], index[f]] = index[h]
        return mors, index, comp

    # constructors
    @classmethod
    def terminal(cls):
        return cls(["*"], {"1": ("*", "*")}, {"*": "1"}, {("1", "1"): "1"}, name="1")

    @classmethod
    def discrete(cls, objects):
        objects = list(objects)
        ids = {a: f"1_{a}" for a in objects}
        return cls(objects, {m: (a, a) for a, m in ids.items()}, ids,
                   {(m, m): m for m in ids.values()}, name="discrete")

    @classmethod
    def preorder(cls, elements, leq=(), name=None):
        """Thin category on ``elements`` generated by the pairs in ``leq``.

        Morphism ids are ``"a->b"``.
        """
        elements = list(elements)
        rel = {(a, a) for a in elements} | {tuple(p) for p in leq}
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in list(itertools.product(rel, rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        mid = {p: f"{p[0]}->{p[1]}" for p in rel}
        comp = {}
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c:
                    comp[(mid[(c, d)], mid[(a, b)])] = mid[(a, d)]
        return cls(elements, {mid[p]: p for p in rel}, {a: mid[(a, a)] for a in elements}, comp, name=name)

    @classmethod
    def group(cls, elements, mult, unit, name=None):
        """One-object category of a finite group or monoid (``mult[(g, f)]`` is g after f)."""
        return cls(["*"], {g: ("*", "*") for g in elements}, {"*": unit},
                   {(g, f): mult[(g, f)] for g in elements for f in elements}, name=name)

    @classmethod
    def free(cls, objects, arrows, name=None):
        """Free category on a finite acyclic graph; composites are named ``"g*f"``."""
        objects = list(objects)
        arrows = dict(arrows)
        paths = {(a,): st for a, st in arrows.items()}
        frontier = dict(paths)
        while frontier:
            nxt = {}
            for p, (s, t) in frontier.items():
                for a, (s2, t2) in arrows.items():
                    if s2 == t:
                        q = p + (a,)
                        if len(q) > len(arrows) + 1:
                            raise ShapeMismatch("graph has a cycle; free category is infinite")
                        nxt[q] = (s, t2)
            paths.update(nxt)
            frontier = nxt

        def name_of(p):
            return "*".join(reversed(p))

        ids = {a: f"1_{a}" for a in objects}
        mors = {m: (a, a) for a, m in ids.items()}
        mors.update({name_of(p): st for p, st in paths.items()})
        comp = {}
        for m, (s, t) in mors.items():
            comp[(ids[t], m)] = m
            comp[(m, ids[s])] = m
        for p, (s, t) in paths.items():
            for q, (s2, t2) in paths.items():
                if s2 == t:
                    comp[(name_of(q), name_of(p))] = name_of(p + q)
        return cls(objects, mors, ids, comp, name=name)

    def opposite(self):
        return FinCat(self.objects, {m: (t, s) for m, (s, t) in self.morphisms.items()},
                      self.identities, {(f, g): h for (g, f), h in self.comp.items()},
                      name=f"{self.name}^op" if self.name else None)


def validate_fincat(C: FinCat) -> ValidationReport:
    rep = ValidationReport()
    for a, m in C.identities.items():
        if C.morphisms[m] != (a, a):
            rep.add("IdentityBoundary", (a, m))
    for (g, f), h in C.comp.items():
        if C.tgt(f) != C.src(g):
            rep.add("SpuriousComposite", (g, f))
        elif C.morphisms[h] != (C.src(f), C.tgt(g)):
            rep.add("CompositeBoundary", (g, f, h))
    for f, (s, t) in C.morphisms.items():
        for g in (m for m, (s2, _) in C.morphisms.items() if s2 == t):
            if (g, f) not in C.comp:
                rep.add("MissingComposite", (g, f))
        if C.comp.get((C.identities[t], f)) != f:
            rep.add("UnitViolation", (f, "left"))
        if C.comp.get((f, C.identities[s])) != f:
            rep.add("UnitViolation", (f, "right"))
    mors, _, table = C.tables
    for h, g, f in kernels.associativity_violations(table, limit=10_000):
        rep.add("AssociativityViolation", (mors[h], mors[g], mors[f]))
    return rep.finish()


# ---------------------------------------------------------------- functors


class Functor:
    """A functor between FinCats, given by object and morphism maps."""

    def __init__(self, source: FinCat, target: FinCat, obj: Mapping, mor: Mapping, name=None):
        self.source = source
        self.target = target
        self.obj = dict(obj)
        self.mor = dict(mor)
        self.name = name

    def __call__(self, x):
        if x in self.mor:
            return self.mor[x]
        return self.obj[x]

    def _sig(self):
        return (id(self.source), id(self.target), tuple(sorted(self.obj.items(), key=sort_key)),
                tuple(sorted(self.mor.items(), key=sort_key)))

    def __eq__(self, other):
        return isinstance(other, Functor) and self._sig() == other._sig()

    def __hash__(self):
        return hash(self._sig())

    def __repr__(self):
        return f"Functor({self.name or '?'})"

    def __str__(self):
        return self.name or f"<functor {abs(hash(self)) % 10**6}>"

    @classmethod
    def identity(cls, C):
        return cls(C, C, {a: a for a in C.objects}, {m: m for m in C.morphisms}, name=f"id[{C.name}]")

    def then(self, G):
        return compose_functors(G, self)


def compose_functors(G: Functor, F: Functor) -> Functor:
    if F.target is not G.source:
        raise ShapeMismatch("functors are not composable")
    return Functor(F.source, G.target, {a: G.obj[b] for a, b in F.obj.items()},
                   {m: G.mor[n] for m, n in F.mor.items()})


def check_functor(F: Functor) -> ValidationReport:
    rep = ValidationReport()
    C, D = F.source, F.target
    for a in C.objects:
        if F.obj.get(a) not in D.identities:
            rep.add("ObjectMap", (a,))
    for m, (s, t) in C.morphisms.items():
        n = F.mor.get(m)
        if n not in D.morphisms or D.morphisms[n] != (F.obj.get(s), F.obj.get(t)):
            rep.add("MorphismBoundary", (m,))
    if rep.violations:
        return rep.finish()
    for a in C.objects:
        if F.mor[C.identities[a]] != D.identities[F.obj[a]]:
            rep.add("IdentityPreservation", (a,))
    for (g, f), h in C.comp.items():
        if D.comp.get((F.mor[g], F.mor[f])) != F.mor[h]:
            rep.add("CompositionPreservation", (g, f))
    return rep.finish()


class NatTrans:
    """A natural transformation between parallel functors."""

    def __init__(self, source: Functor, target: Functor, components: Mapping, name=None):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name

    def __getitem__(self, a):
        return self.components[a]

    def _sig(self):
        return (self.source, self.target, tuple(sorted(self.components.items(), key=sort_key)))

    def __eq__(self, other):
        return isinstance(other, NatTrans) and self._sig() == other._sig()

    def __hash__(self):
        return hash(self._sig())

    def __repr__(self):
        return f"NatTrans({self.name or '?'})"

    @classmethod
    def identity(cls, F):
        return cls(F, F, {a: F.target.ident(F.obj[a]) for a in F.source.objects})


def check_nat_trans(t: NatTrans) -> ValidationReport:
    rep = ValidationReport()
    F, G = t.source, t.target
    D = F.target
    for a in F.source.objects:
        c = t.components.get(a)
        if c not in D.morphisms or D.morphisms[c] != (F.obj[a], G.obj[a]):
            rep.add("ComponentBoundary", (a,))
    if rep.violations:
        return rep.finish()
    for m, (s, u) in F.source.morphisms.items():
        if D.compose(t[u], F.mor[m]) != D.compose(G.mor[m], t[s]):
            rep.add("Naturality", (m,))
    return rep.finish()


def vcomp_nat(b: NatTrans, a: NatTrans) -> NatTrans:
    if a.target != b.source:
        raise ShapeMismatch("transformations are not vertically composable")
    D = a.source.target
    return NatTrans(a.source, b.target, {x: D.compose(b[x], a[x]) for x in a.components})


def hcomp_nat(b: NatTrans, a: NatTrans) -> NatTrans:
    """(b a)_x = b_{F' x} after G(a_x) for a: F => F', b: G => G'."""
    G, Fp = b.source, a.target
    if a.source.target is not G.source:
        raise ShapeMismatch("transformations are not horizontally composable")
    E = G.target
    comps = {x: E.compose(b[Fp.obj[x]], G.mor[a[x]]) for x in a.components}
    return NatTrans(compose_functors(b.source, a.source), compose_functors(b.target, a.target), comps)


def inverse_nat(a: NatTrans):
    D = a.source.target
    comps = {}
    for x, m in a.components.items():
        n = D.inverse(m)
        if n is None:
            return None
        comps[x] = n
    return NatTrans(a.target, a.source, comps)


def enumerate_functors(C: FinCat, D: FinCat):
    """All functors C -> D, in deterministic order."""
    objs = list(C.objects)
    nonid = [m for m in ordered(C.morphisms) if not C.is_identity(m)]
    out = []
    for images in itertools.product(ordered(D.objects), repeat=len(objs)):
        obj = dict(zip(objs, images))
        mor = {C.identities[a]: D.identities[obj[a]] for a in objs}

        def ok_so_far():
            for (g, f), h in C.comp.items():
                if g in mor and f in mor and h in mor:
                    if D.comp.get((mor[g], mor[f])) != mor[h]:
                        return False
            return True

        def rec(k):
            if k == len(nonid):
                out.append(Functor(C, D, obj, mor))
                return
            m = nonid[k]
            s, t = C.morphisms[m]
            for n in D.hom(obj[s], obj[t]):
                mor[m] = n
                if ok_so_far():
                    rec(k + 1)
                del mor[m]

        if ok_so_far():
            rec(0)
    return out


def enumerate_nat_trans(F: Functor, G: Functor):
    D = F.target
    objs = list(F.source.objects)
    out = []
    for comps in itertools.product(*[D.hom(F.obj[a], G.obj[a]) for a in objs]):
        t = NatTrans(F, G, dict(zip(objs, comps)))
        if check_nat_trans(t).ok:
            out.append(t)
    return out


# ---------------------------------------------------------------- 2-categories


class TwoCatLike:
    """Operations shared by explicit and implicit 2-categories."""

    explicit = False

    def lw(self, f, a):
        """Whisker a 2-cell on the left by a 1-cell: f a."""
        return self.hcomp(self.id2(f), a)

    def rw(self, a, f):
        """Whisker a 2-cell on the right by a 1-cell: a f."""
        return self.hcomp(a, self.id2(f))

    def hcomp_all(self, *cells):
        out = cells[-1]
        for c in reversed(cells[:-1]):
            out = self.hcomp(c, out)
        return out

    def vcomp_all(self, *cells):
        """Vertical composite, listed in application order (first applied first)."""
        out = cells[0]
        for c in cells[1:]:
            out = self.vcomp(c, out)
        return out

    def comp1_all(self, *cells):
        out = cells[-1]
        for c in reversed(cells[:-1]):
            out = self.comp1(c, out)
        return out

    def is_invertible(self, a):
        return self.inverse2(a) is not None


class TwoCat(TwoCatLike):
    """A finite (strict) 2-category given by explicit tables."""

    explicit = True

    def __init__(self, objects, cells1, id1, hcomp1, cells2, id2, vcomp, hcomp2, name=None):
        self.name = name
        self.objects = tuple(objects)
        self.cells1 = {f: tuple(st) for f, st in cells1.items()}
        self._id1 = dict(id1)
        self.hcomp1 = dict(hcomp1)
        self.cells2 = {a: tuple(st) for a, st in cells2.items()}
        self._id2 = dict(id2)
        self.vcomp_table = dict(vcomp)
        self.hcomp2 = dict(hcomp2)
        objs = set(self.objects)
        for f, (s, t) in self.cells1.items():
            if s not in objs or t not in objs:
                raise DanglingId(f"1-cell {f!r} has undeclared endpoint")
        for a in self.objects:
            if self._id1.get(a) not in self.cells1:
                raise DanglingId(f"object {a!r} has no identity 1-cell")
        for (g, f), h in self.hcomp1.items():
            for x in (g, f, h):
                if x not in self.cells1:
                    raise DanglingId(f"hcomp1 entry mentions {x!r}")
        for a, (s, t) in self.cells2.items():
            if s not in self.cells1 or t not in self.cells1:
                raise DanglingId(f"2-cell {a!r} has undeclared boundary")
        for f in self.cells1:
            if self._id2.get(f) not in self.cells2:
                raise DanglingId(f"1-cell {f!r} has no identity 2-cell")
        for table in (self.vcomp_table, self.hcomp2):
            for (b, a), c in table.items():
                for x in (b, a, c):
                    if x not in self.cells2:
                        raise DanglingId(f"2-cell table mentions {x!r}")

    def __repr__(self):
        return (f"TwoCat({self.name or ''}: {len(self.objects)} objects, {len(self.cells1)} 1-cells, "
                f"{len(self.cells2)} 2-cells)")

    # 1-cells
    def src1(self, f):
        return self.cells1[f][0]

    def tgt1(self, f):
        return self.cells1[f][1]

    def id1(self, a):
        try:
            return self._id1[a]
        except KeyError:
            raise UnknownObject(a) from None

    def comp1(self, g, f):
        try:
            return self.hcomp1[(g, f)]
        except KeyError:
            raise ShapeMismatch(f"1-cells {g!r}, {f!r} are not composable") from None

    @cached_property
    def _homs1(self):
        out = {}
        for f in ordered(self.cells1):
            out.setdefault(self.cells1[f], []).append(f)
        return out

    def one_cells(self, a=None, b=None, bound=None):
        if a is not None and b is not None:
            return tuple(self._homs1.get((a, b), ()))
        return tuple(f for f in ordered(self.cells1)
                     if (a is None or self.src1(f) == a) and (b is None or self.tgt1(f) == b))

    # 2-cells
    def src2(self, a):
        return self.cells2[a][0]

    def tgt2(self, a):
        return self.cells2[a][1]

    def id2(self, f):
        try:
            return self._id2[f]
        except KeyError:
            raise UnknownCell(f) from None

    def vcomp(self, b, a):
        """b after a (a on top)."""
        try:
            return self.vcomp_table[(b, a)]
        except KeyError:
            raise ShapeMismatch(f"2-cells {b!r}, {a!r} are not vertically composable") from None

    def hcomp(self, b, a):
        """Juxtaposition b a (a applied first)."""
        try:
            return self.hcomp2[(b, a)]
        except KeyError:
            raise ShapeMismatch(f"2-cells {b!r}, {a!r} are not horizontally composable") from None

    @cached_property
    def _homs2(self):
        out = {}
        for a in ordered(self.cells2):
            out.setdefault(self.cells2[a], []).append(a)
        return out

    def two_cells(self, f, g):
        return tuple(self._homs2.get((f, g), ()))

    @cached_property
    def _inv2(self):
        inv = {}
        for a, (f, g) in self.cells2.items():
            for b in self.two_cells(g, f):
                if self.vcomp_table.get((b, a)) == self._id2[f] and self.vcomp_table.get((a, b)) == self._id2[g]:
                    inv[a] = b
                    break
        return inv

    def inverse2(self, a):
        return self._inv2.get(a)

    def invertible_cells(self, f, g):
        return tuple(a for a in self.two_cells(f, g) if a in self._inv2)

    def is_identity2(self, a):
        return self._id2.get(self.cells2[a][0]) == a

    @cached_property
    def tables2(self):
        cells = ordered(self.cells2)
        index = {a: i for i, a in enumerate(cells)}
        n = len(cells)
        v = np.full((n, n), -1, dtype=np.intc)
        h = np.full((n, n), -1, dtype=np.intc)
        for (b, a), c in self.vcomp_table.items():
            v[index[b], index[a]] = index[c]
        for (b, a), c in self.hcomp2.items():
            h[index[b], index[a]] = index[c]
        return cells, index, v, h

    # derived categories
    def underlying(self) -> FinCat:
        return FinCat(self.objects, self.cells1, self._id1, self.hcomp1, name=f"|{self.name}|")

    def vertical(self) -> FinCat:
        """All hom-categories at once: objects are 1-cells, morphisms 2-cells."""
        return FinCat(ordered(self.cells1), self.cells2, self._id2, self.vcomp_table)

    def op(self) -> "TwoCat":
        """Reverse 1-cells, keep 2-cells."""
        return TwoCat(self.objects, {f: (t, s) for f, (s, t) in self.cells1.items()}, self._id1,
                      {(f, g): h for (g, f), h in self.hcomp1.items()}, self.cells2, self._id2,
                      self.vcomp_table, {(a, b): c for (b, a), c in self.hcomp2.items()},
                      name=f"{self.name}^op" if self.name else None)

    @classmethod
    def locally_discrete(cls, C: FinCat, name=None):
        ids2 = {m: f"1_{m}" for m in C.morphisms}
        hc2 = {(ids2[g], ids2[f]): ids2[h] for (g, f), h in C.comp.items()}
        return cls(C.objects, C.morphisms, C.identities, C.comp, {a: (m, m) for m, a in ids2.items()}, ids2,
                   {(a, a): a for a in ids2.values()}, hc2, name=name or C.name)

    @classmethod
    def from_categories(cls, categories: Mapping[str, FinCat], functors: Mapping | None = None, name=None):
        """Sub-2-category of CAT on the given categories.

        With ``functors`` omitted every functor between them is a 1-cell; otherwise
        the given named functors (which must be closed under composition and
        contain identities) are used.  2-cells are all natural transformations.
        """
        by_cat = {id(C): n for n, C in categories.items()}
        fnames: dict = {}
        if functors is None:
            for (na, A), (nb, B) in itertools.product(categories.items(), repeat=2):
                for k, F in enumerate(enumerate_functors(A, B)):
                    if F == Functor.identity(A):
                        fnames[F] = f"id_{na}"
                    else:
                        fnames[F] = f"{na}->{nb}#{k}"
        else:
            for n, F in functors.items():
                fnames[F] = n
            for na, A in categories.items():
                if Functor.identity(A) not in fnames:
                    fnames[Functor.identity(A)] = f"id_{na}"
        cells1 = {n: (by_cat[id(F.source)], by_cat[id(F.target)]) for F, n in fnames.items()}
        id1 = {na: fnames[Functor.identity(A)] for na, A in categories.items()}
        hc1 = {}
        for F, nf in fnames.items():
            for G, ng in fnames.items():
                if F.target is G.source:
                    H = compose_functors(G, F)
                    if H not in fnames:
                        raise ShapeMismatch(f"composite {ng} after {nf} is not among the 1-cells")
                    hc1[(ng, nf)] = fnames[H]
        tnames: dict = {}
        cells2, id2 = {}, {}
        for F, nf in fnames.items():
            for G, ng in fnames.items():
                if F.source is G.source and F.target is G.target:
                    for k, t in enumerate(enumerate_nat_trans(F, G)):
                        n = f"1_{nf}" if (F == G and t == NatTrans.identity(F)) else f"{nf}=>{ng}#{k}"
                        tnames[t] = n
                        cells2[n] = (nf, ng)
                        if n == f"1_{nf}":
                            id2[nf] = n
        vc, hc2 = {}, {}
        items = list(tnames.items())
        for t, nt in items:
            for s, ns in items:
                if t.target == s.source:
                    vc[(ns, nt)] = tnames[vcomp_nat(s, t)]
                if t.source.target is s.source.source:
                    hc2[(ns, nt)] = tnames[hcomp_nat(s, t)]
        K = cls(ordered(categories), cells1, id1, hc1, cells2, id2, vc, hc2, name=name)
        K.realization = {"categories": dict(categories), "functors": {n: F for F, n in fnames.items()},
                         "transformations": {n: t for t, n in tnames.items()}}
        return K


def hom_category(K: TwoCat, a, b) -> FinCat:
    if a not in K.objects:
        raise UnknownObject(a)
    if b not in K.objects:
        raise UnknownObject(b)
    objs = K.one_cells(a, b)
    mors = {x: K.cells2[x] for f in objs for g in objs for x in K.two_cells(f, g)}
    comp = {(y, x): z for (y, x), z in K.vcomp_table.items() if x in mors}
    return FinCat(objs, mors, {f: K.id2(f) for f in objs}, comp, name=f"{K.name}({a},{b})")


def validate_twocat(K: TwoCat) -> ValidationReport:
    rep = ValidationReport()
    under = validate_fincat(K.underlying())
    for v in under.violations:
        rep.add("1-cell " + v.kind, v.witness, v.detail)
    for a, (f, g) in K.cells2.items():
        if K.cells1[f] != K.cells1[g]:
            rep.add("TwoCellBoundary", (a,))
    vert = validate_fincat(K.vertical())
    for v in vert.violations:
        rep.add("Vertical" + v.kind, v.witness, v.detail)
    hcomp_ok = {}
    for (b, a), c in K.hcomp2.items():
        fa, ga = K.cells2[a]
        fb, gb = K.cells2[b]
        if K.tgt1(fa) != K.src1(fb):
            rep.add("SpuriousHorizontal", (b, a))
            continue
        want = (K.hcomp1.get((fb, fa)), K.hcomp1.get((gb, ga)))
        if K.cells2[c] != want:
            rep.add("HorizontalBoundary", (b, a, c))
        else:
            hcomp_ok[(b, a)] = c
    by_src: dict = {}
    for a, (f, _) in K.cells2.items():
        by_src.setdefault(K.src1(f), []).append(a)
    for a, (f, _) in K.cells2.items():
        for b in by_src.get(K.tgt1(f), ()):
            if (b, a) not in K.hcomp2:
                rep.add("MissingHorizontal", (b, a))
    for (g, f), h in K.hcomp1.items():
        if K.tgt1(f) == K.src1(g) and K.hcomp2.get((K.id2(g), K.id2(f))) != K.id2(h):
            rep.add("IdentityInterchange", (g, f))
    for a, (f, _) in K.cells2.items():
        ia = K.id2(K.id1(K.src1(f)))
        ib = K.id2(K.id1(K.tgt1(f)))
        if K.hcomp2.get((ib, a)) != a or K.hcomp2.get((a, ia)) != a:
            rep.add("HorizontalUnit", (a,))
    cells, _, v, h = K.tables2
    for c, b, a in kernels.associativity_violations(h, limit=10_000):
        rep.add("HorizontalAssociativity", (cells[c], cells[b], cells[a]))
    for b2, a2, b, a in kernels.interchange_violations(v, h, limit=10_000):
        rep.add("InterchangeViolation", (cells[b2], cells[a2], cells[b], cells[a]))
    return rep.finish()


# ---------------------------------------------------------------- implicit 2-categories


class ImplicitTwoCat(TwoCatLike):
    """A 2-category whose cells are produced on demand.

    Subclasses implement the TwoCat accessors; ``one_cells`` takes a bound
    because the set of 1-cells may be infinite.
    """

    def one_cells(self, a=None, b=None, bound=None):  # pragma: no cover - interface
        raise NotImplementedError

    def two_cells(self, f, g):  # pragma: no cover - interface
        raise NotImplementedError


def validate_fragment(K: TwoCatLike, bound) -> ValidationReport:
    """Check every 2-category law on the cells reachable within ``bound``.

    A law instance is checked only when all composites it mentions are
    themselves inside the probed fragment.
    """
    rep = ValidationReport()
    objs = list(K.objects)
    ones = {(a, b): list(K.one_cells(a, b, bound)) for a in objs for b in objs}
    probed = {f for fs in ones.values() for f in fs}
    twos = {}
    for fs in ones.values():
        for f in fs:
            for g in fs:
                twos[(f, g)] = list(K.two_cells(f, g))
    rep.coverage = {"bound": bound, "one_cells": len(probed), "two_cells": sum(map(len, twos.values()))}
    for a in objs:
        i = K.id1(a)
        for b in objs:
            for f in ones[(a, b)]:
                if K.comp1(f, i) != f or K.comp1(K.id1(b), f) != f:
                    rep.add("1-cell UnitViolation", (f,))
                for c in objs:
                    for g in ones[(b, c)]:
                        gf = K.comp1(g, f)
                        for d in objs:
                            for h in ones[(c, d)]:
                                hg = K.comp1(h, g)
                                if K.comp1(h, gf) != K.comp1(hg, f):
                                    rep.add("1-cell AssociativityViolation", (h, g, f))
    for (f, g), cells in twos.items():
        for x in cells:
            if K.vcomp(K.id2(g), x) != x or K.vcomp(x, K.id2(f)) != x:
                rep.add("VerticalUnitViolation", (x,))
            for h in ones[(K.src1(f), K.tgt1(f))]:
                for y in twos.get((g, h), ()):
                    yx = K.vcomp(y, x)
                    for k in ones[(K.src1(f), K.tgt1(f))]:
                        for z in twos.get((h, k), ()):
                            if K.vcomp(z, yx) != K.vcomp(K.vcomp(z, y), x):
                                rep.add("VerticalAssociativityViolation", (z, y, x))
    for (f, g), cells in twos.items():
        a, b = K.src1(f), K.tgt1(f)
        for c in objs:
            for f2 in ones[(b, c)]:
                for g2 in ones[(b, c)]:
                    if K.comp1(f2, f) not in probed or K.comp1(g2, g) not in probed:
                        continue
                    for x in cells:
                        for x2 in twos[(f2, g2)]:
                            y = K.hcomp(x2, x)
                            if (K.src2(y), K.tgt2(y)) != (K.comp1(f2, f), K.comp1(g2, g)):
                                rep.add("HorizontalBoundary", (x2, x))
                            for h in ones[(a, b)]:
                                for z in twos.get((g, h), ()):
                                    for h2 in ones[(b, c)]:
                                        if K.comp1(h2, h) not in probed:
                                            continue
                                        for z2 in twos.get((g2, h2), ()):
                                            lhs = K.vcomp(K.hcomp(z2, z), y)
                                            rhs = K.hcomp(K.vcomp(z2, x2), K.vcomp(z, x))
                                            if lhs != rhs:
                                                rep.add("InterchangeViolation", (z2, x2, z, x))
    return rep.finish()


# ---------------------------------------------------------------- equivalence and quotients


def equivalence_of_categories(F: Functor) -> Decision:
    """Decide whether F is an equivalence (essentially surjective, full, faithful)."""
    rep = check_functor(F)
    if not rep.ok:
        raise ShapeMismatch(f"not a functor: {rep.violations[0]}")
    C, D = F.source, F.target
    for x in ordered(C.objects):
        for y in ordered(C.objects):
            images = [F.mor[m] for m in C.hom(x, y)]
            if len(set(images)) != len(images):
                dup = next(m for m in C.hom(x, y) if images.count(F.mor[m]) > 1)
                return Decision(False, "faithful", (x, y, dup))
            missing = [n for n in D.hom(F.obj[x], F.obj[y]) if n not in set(images)]
            if missing:
                return Decision(False, "full", (x, y, missing[0]))
    quasi = {}
    for d in ordered(D.objects):
        found = None
        for x in ordered(C.objects):
            isos = D.isos(F.obj[x], d)
            if isos:
                found = (x, isos[0])
                break
        if found is None:
            return Decision(False, "ess-surj", (d,))
        quasi[d] = found
    return Decision(True, None, None, quasi)


class Congruence:
    """A partition of the morphisms of a FinCat compatible with composition."""

    def __init__(self, C: FinCat, rep: Mapping):
        self.category = C
        self.rep = dict(rep)
        classes: dict = {}
        for m in ordered(C.morphisms):
            classes.setdefault(self.rep[m], []).append(m)
        self.classes = {r: tuple(ms) for r, ms in classes.items()}

    def find(self, m):
        return self.rep[m]

    def check(self) -> ValidationReport:
        rep = ValidationReport()
        C = self.category
        for r, ms in self.classes.items():
            for m in ms:
                if C.morphisms[m] != C.morphisms[r]:
                    rep.add("ClassBoundary", (r, m))
        for (g, f), h in C.comp.items():
            rg, rf = self.rep[g], self.rep[f]
            if self.rep[C.comp[(rg, rf)]] != self.rep[h]:
                rep.add("CompositionNotWellDefined", (g, f))
        return rep.finish()


def congruence_closure(C: FinCat, relation: Iterable) -> Congruence:
    mors, index, table = C.tables
    pairs = []
    for x, y in relation:
        if C.morphisms[x] != C.morphisms[y]:
            raise ShapeMismatch(f"relation pairs non-parallel morphisms {x!r}, {y!r}")
        pairs.append((index[x], index[y]))
    roots = kernels.congruence_closure(table, pairs)
    members: dict = {}
    for i, r in enumerate(roots):
        members.setdefault(r, []).append(mors[i])
    rep = {}
    for ms in members.values():
        r = min(ms, key=sort_key)
        for m in ms:
            rep[m] = r
    return Congruence(C, rep)


def quotient(C: FinCat, relation: Iterable = ()):
    """Quotient by the smallest congruence containing ``relation``.

    Returns the quotient category and the projection functor; classes are
    named by their least member.
    """
    cong = congruence_closure(C, relation)
    reps = cong.classes
    mors = {r: C.morphisms[r] for r in reps}
    comp = {}
    for g in reps:
        for f in reps:
            if C.tgt(f) == C.src(g):
                comp[(g, f)] = cong.find(C.compose(g, f))
    Q = FinCat(C.objects, mors, {a: cong.find(m) for a, m in C.identities.items()}, comp,
               name=f"{C.name}/~" if C.name else None)
    proj = Functor(C, Q, {a: a for a in C.objects}, {m: cong.find(m) for m in C.morphisms})
    return Q, proj
