"""JSON file formats for every structure, with schema checks and canonical output.

Every file is one JSON object with ``format_version`` and ``kind``.  Other
files are referenced by relative path; any reference may also be inlined.
Ids are strings.  ``dumps`` writes the canonical form (explicit tables,
sorted keys and rows), so loading and re-serializing a canonical file is
byte-identical.
"""

from __future__ import annotations

import json
import os

from .core import FinCat, Functor, NatTrans, TwoCat, check_functor, check_nat_trans, validate_fincat, validate_twocat
from .errors import SchemaError, TwoCatError, UnknownName
from .maps import PseudoFunctor, check_pseudo_functor
from .model import LiftingSquare, ModelClasses
from .pro import ProObject

FORMAT_VERSION = 1

EXTENSIONS = {".cat": "category", ".2cat": "2-category", ".fun": "functor", ".pfun": "pseudofunctor",
              ".nat": "transformation", ".pro": "pro-object", ".classes": "model-classes", ".sq": "square"}


def _need(d, key, typ, path, loc):
    if not isinstance(d, dict):
        raise SchemaError(path, loc, "expected an object")
    if key not in d:
        raise SchemaError(path, f"{loc}.{key}", "missing field")
    v = d[key]
    if typ is not None and not isinstance(v, typ):
        raise SchemaError(path, f"{loc}.{key}", f"expected {getattr(typ, '__name__', typ)}")
    return v


def _pairs(d, path, loc):
    if not isinstance(d, dict):
        raise SchemaError(path, loc, "expected an object")
    out = {}
    for k, v in d.items():
        if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, str) for x in v)):
            raise SchemaError(path, f"{loc}.{k}", "expected [source, target]")
        out[k] = tuple(v)
    return out


def _triples(rows, path, loc):
    if not isinstance(rows, list):
        raise SchemaError(path, loc, "expected a list of [second, first, result] rows")
    out = {}
    for n, r in enumerate(rows):
        if not (isinstance(r, list) and len(r) == 3 and all(isinstance(x, str) for x in r)):
            raise SchemaError(path, f"{loc}[{n}]", "expected [second, first, result]")
        out[(r[0], r[1])] = r[2]
    return out


def _strmap(d, path, loc):
    if not isinstance(d, dict) or not all(isinstance(v, str) for v in d.values()):
        raise SchemaError(path, loc, "expected an object of strings")
    return dict(d)


class Loader:
    """Loads files (with caching, so shared references give identical objects)."""

    def __init__(self):
        self.cache = {}

    def read(self, path):
        path = os.path.normpath(path)
        try:
            with open(path) as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise SchemaError(path, "$", "file not found") from None
        except json.JSONDecodeError as e:
            raise SchemaError(path, f"line {e.lineno}", e.msg) from None
        return data

    def load(self, path, expect=None):
        path = os.path.normpath(path)
        if path in self.cache:
            return self.cache[path]
        data = self.read(path)
        obj = self.build(data, path, expect)
        self.cache[path] = obj
        return obj

    def ref(self, value, base, loc, expect):
        if isinstance(value, str):
            return self.load(os.path.join(os.path.dirname(base), value), expect)
        if isinstance(value, dict):
            return self.build(value, f"{base}#{loc}", expect)
        raise SchemaError(base, loc, "expected a file reference or an inline object")

    def build(self, data, path, expect=None):
        if not isinstance(data, dict):
            raise SchemaError(path, "$", "expected an object")
        ver = data.get("format_version", FORMAT_VERSION)
        if ver != FORMAT_VERSION:
            raise SchemaError(path, "$.format_version", f"unsupported version {ver!r}")
        kind = _need(data, "kind", str, path, "$")
        if expect is not None and kind != expect:
            raise SchemaError(path, "$.kind", f"expected {expect!r}, found {kind!r}")
        fn = {"category": self.category, "2-category": self.twocat, "functor": self.functor,
              "pseudofunctor": self.pseudofunctor, "transformation": self.transformation,
              "pro-object": self.proobject, "model-classes": self.classes, "square": self.square}.get(kind)
        if fn is None:
            raise SchemaError(path, "$.kind", f"unknown kind {kind!r}")
        try:
            return fn(data, path)
        except (SchemaError, UnknownName):
            raise
        except TwoCatError as e:
            raise SchemaError(path, "$", f"{type(e).__name__}: {e}") from None

    # kinds
    def category(self, d, path):
        name = d.get("name")
        if "from" in d:
            src = d["from"]
            if "preorder" in src:
                p = src["preorder"]
                return FinCat.preorder(_need(p, "elements", list, path, "$.from.preorder"),
                                       [tuple(x) for x in p.get("leq", [])], name=name)
            if "free" in src:
                p = src["free"]
                return FinCat.free(_need(p, "objects", list, path, "$.from.free"),
                                   _pairs(_need(p, "arrows", dict, path, "$.from.free"), path, "$.from.free.arrows"),
                                   name=name)
            if "terminal" in src:
                C = FinCat.terminal()
                C.name = name or C.name
                return C
            if "discrete" in src:
                return FinCat.discrete(src["discrete"])
            raise SchemaError(path, "$.from", "unknown constructor")
        objs = _need(d, "objects", list, path, "$")
        C = FinCat(objs, _pairs(_need(d, "morphisms", dict, path, "$"), path, "$.morphisms"),
                   _strmap(_need(d, "identities", dict, path, "$"), path, "$.identities"),
                   _triples(_need(d, "composition", list, path, "$"), path, "$.composition"), name=name)
        rep = validate_fincat(C)
        if not rep.ok:
            v = rep.violations[0]
            raise SchemaError(path, "$", f"{v.kind} at {v.witness}")
        return C

    def twocat(self, d, path):
        name = d.get("name")
        if "from" in d:
            src = d["from"]
            if "locally_discrete" in src:
                return TwoCat.locally_discrete(self.ref(src["locally_discrete"], path, "$.from.locally_discrete",
                                                       "category"), name=name)
            if "categories" in src:
                cats = {k: self.ref(v, path, f"$.from.categories.{k}", "category")
                        for k, v in src["categories"].items()}
                funs = None
                if "functors" in src:
                    funs = {k: self.ref(v, path, f"$.from.functors.{k}", "functor")
                            for k, v in src["functors"].items()}
                    for k, F in funs.items():
                        if all(F.source is not C for C in cats.values()) or all(F.target is not C for C in cats.values()):
                            raise UnknownName(f"functor {k} does not run between listed categories")
                return TwoCat.from_categories(cats, funs, name=name)
            raise SchemaError(path, "$.from", "unknown constructor")
        K = TwoCat(_need(d, "objects", list, path, "$"),
                   _pairs(_need(d, "cells1", dict, path, "$"), path, "$.cells1"),
                   _strmap(_need(d, "id1", dict, path, "$"), path, "$.id1"),
                   _triples(_need(d, "hcomp1", list, path, "$"), path, "$.hcomp1"),
                   _pairs(_need(d, "cells2", dict, path, "$"), path, "$.cells2"),
                   _strmap(_need(d, "id2", dict, path, "$"), path, "$.id2"),
                   _triples(_need(d, "vcomp", list, path, "$"), path, "$.vcomp"),
                   _triples(_need(d, "hcomp2", list, path, "$"), path, "$.hcomp2"), name=name)
        if d.get("validate", True):
            rep = validate_twocat(K)
            if not rep.ok:
                v = rep.violations[0]
                raise SchemaError(path, "$", f"{v.kind} at {v.witness}")
        return K

    def functor(self, d, path):
        A = self.ref(_need(d, "source", None, path, "$"), path, "$.source", "category")
        B = self.ref(_need(d, "target", None, path, "$"), path, "$.target", "category")
        F = Functor(A, B, _strmap(_need(d, "objects", dict, path, "$"), path, "$.objects"),
                    _strmap(_need(d, "morphisms", dict, path, "$"), path, "$.morphisms"), name=d.get("name"))
        for x in A.objects:
            if x not in F.obj:
                raise UnknownName(f"{path}: object {x!r} has no image")
        for m in A.morphisms:
            if m not in F.mor:
                raise UnknownName(f"{path}: morphism {m!r} has no image")
        rep = check_functor(F)
        if not rep.ok:
            raise SchemaError(path, "$", f"not a functor: {rep.violations[0].kind}")
        return F

    def transformation(self, d, path):
        F = self.ref(_need(d, "source", None, path, "$"), path, "$.source", "functor")
        G = self.ref(_need(d, "target", None, path, "$"), path, "$.target", "functor")
        t = NatTrans(F, G, _strmap(_need(d, "components", dict, path, "$"), path, "$.components"),
                     name=d.get("name"))
        if not check_nat_trans(t).ok:
            raise SchemaError(path, "$", "not natural")
        return t

    def pseudofunctor(self, d, path):
        S = self.ref(_need(d, "source", None, path, "$"), path, "$.source", "2-category")
        tgt = _need(d, "target", None, path, "$")
        if tgt == "CAT":
            cats = {k: self.ref(v, path, f"$.objects.{k}", "category")
                    for k, v in _need(d, "objects", dict, path, "$").items()}
            one = {k: self.ref(v, path, f"$.one.{k}", "functor") for k, v in d.get("one", {}).items()}
            two = {k: self.ref(v, path, f"$.two.{k}", "transformation") for k, v in d.get("two", {}).items()}
            for a in S.objects:
                if a not in cats:
                    raise UnknownName(f"{path}: no category for index object {a!r}")
            from .kan import functor_from_tables
            F = functor_from_tables(S, cats, one, two, name=d.get("name"))
            for u in S.cells1:
                F.on1(u)
        else:
            T = self.ref(tgt, path, "$.target", "2-category")
            comp = None
            if "comp" in d:
                comp = {(r[0], r[1]): r[2] for r in d["comp"]}
            F = PseudoFunctor(S, T, _strmap(_need(d, "objects", dict, path, "$"), path, "$.objects"),
                              _strmap(_need(d, "one", dict, path, "$"), path, "$.one"),
                              _strmap(_need(d, "two", dict, path, "$"), path, "$.two"),
                              d.get("unit"), comp, name=d.get("name"))
            for a in S.objects:
                if a not in F.tables["obj"]:
                    raise UnknownName(f"{path}: object {a!r} has no image")
        rep = check_pseudo_functor(F)
        if not rep.ok:
            raise SchemaError(path, "$", f"not a pseudo-functor: {rep.violations[0].kind} at {rep.violations[0].witness}")
        F.file_data = d
        return F

    def proobject(self, d, path):
        I = self.ref(_need(d, "index", None, path, "$"), path, "$.index", "2-category")
        C = self.ref(_need(d, "target", None, path, "$"), path, "$.target", "2-category")
        objs = _strmap(_need(d, "objects", dict, path, "$"), path, "$.objects")
        for i in I.objects:
            if i not in objs:
                raise UnknownName(f"{path}: index object {i!r} has no image")
            if objs[i] not in C.objects:
                raise UnknownName(f"{path}: {objs[i]!r} is not an object of the target")
        return ProObject(I, C, objs, d.get("one", {}), d.get("two", {}), name=d.get("name"))

    def classes(self, d, path):
        K = self.ref(_need(d, "twocat", None, path, "$"), path, "$.twocat", "2-category")
        cl = ModelClasses(d.get("fib", []), d.get("cof", []), d.get("weq", []))
        for nm in ("fib", "cof", "weq"):
            for f in getattr(cl, nm):
                if f not in K.cells1:
                    raise UnknownName(f"{path}: {nm} mentions unknown 1-cell {f!r}")
        cl.twocat = K
        return cl

    def square(self, d, path):
        K = self.ref(_need(d, "twocat", None, path, "$"), path, "$.twocat", "2-category")
        vals = [_need(d, k, str, path, "$") for k in ("i", "p", "a", "b", "gamma")]
        for k, v in zip(("i", "p", "a", "b"), vals[:4]):
            if v not in K.cells1:
                raise UnknownName(f"{path}: {k} names unknown 1-cell {v!r}")
        if vals[4] not in K.cells2:
            raise UnknownName(f"{path}: gamma names unknown 2-cell {vals[4]!r}")
        sq = LiftingSquare(*vals)
        from .model import check_square
        check_square(K, sq)
        sq_obj = _Square(K, sq)
        return sq_obj


class _Square:
    def __init__(self, K, sq):
        self.twocat = K
        self.square = sq


def load(path, expect=None):
    return Loader().load(path, expect)


def kind_of(path):
    return EXTENSIONS.get(os.path.splitext(path)[1])


# ---------------------------------------------------------------- canonical output


def _rows(table):
    return sorted([[str(k[0]), str(k[1]), str(v)] for k, v in table.items()])


def to_data(x, name=None):
    """Canonical JSON-ready data for a FinCat or TwoCat (explicit tables)."""
    if isinstance(x, FinCat):
        return {"format_version": FORMAT_VERSION, "kind": "category", "name": name or x.name,
                "objects": sorted(map(str, x.objects)),
                "morphisms": {str(m): [str(s), str(t)] for m, (s, t) in x.morphisms.items()},
                "identities": {str(a): str(m) for a, m in x.identities.items()},
                "composition": _rows(x.comp)}
    if isinstance(x, TwoCat):
        return {"format_version": FORMAT_VERSION, "kind": "2-category", "name": name or x.name,
                "objects": sorted(map(str, x.objects)),
                "cells1": {str(f): [str(s), str(t)] for f, (s, t) in x.cells1.items()},
                "id1": {str(a): str(x.id1(a)) for a in x.objects},
                "hcomp1": _rows(x.hcomp1),
                "cells2": {str(a): [str(s), str(t)] for a, (s, t) in x.cells2.items()},
                "id2": {str(f): str(x.id2(f)) for f in x.cells1},
                "vcomp": _rows(x.vcomp_table), "hcomp2": _rows(x.hcomp2)}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(data) -> str:
    if not isinstance(data, dict):
        data = to_data(data)
    if data.get("name") is None:
        data = {k: v for k, v in data.items() if k != "name"}
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def canonicalize(path) -> str:
    """Canonical text of an explicit-table .cat or .2cat file."""
    return dumps(load(path))


# ---------------------------------------------------------------- DOT


def _q(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(x, name="G") -> str:
    """1-skeleton as a DOT digraph; 2-cells become labels on the edge of their source 1-cell."""
    lines = [f"digraph {_q(name)} {{"]
    if isinstance(x, FinCat):
        for a in sorted(map(str, x.objects)):
            lines.append(f"  {_q(a)};")
        for m in sorted(x.morphisms, key=str):
            if x.is_identity(m):
                continue
            s, t = x.morphisms[m]
            lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(m)}];")
    elif isinstance(x, TwoCat):
        for a in sorted(map(str, x.objects)):
            lines.append(f"  {_q(a)};")
        idents = {x.id1(a) for a in x.objects}
        for f in sorted(x.cells1, key=str):
            if f in idents:
                continue
            s, t = x.cells1[f]
            cells = sorted(str(c) for c in x.cells2 if x.cells2[c][0] == f and not x.is_identity2(c))
            parts = [str(f)] + [f"{c}: {f} => {x.cells2[c][1]}" for c in cells]
            label = "\\n".join(_q(p)[1:-1] for p in parts)
            lines.append(f"  {_q(s)} -> {_q(t)} [label=\"{label}\"];")
    else:
        raise TypeError(f"cannot export {type(x).__name__}")
    lines.append("}")
    return "\n".join(lines) + "\n"
