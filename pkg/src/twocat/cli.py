"""Command-line interface.

Exit codes: 0 when every verdict is positive, 1 when some verdict is
negative, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import formats
from .core import FinCat, TwoCat, equivalence_of_categories, ordered
from .errors import BoundTooSmall, HypothesisFails, NoFiller, NotFound, SchemaError, TwoCatError, UnknownName
from .maps import check_pseudo_cocone, check_pseudo_cone, check_pseudo_functor
from .pasting import CellEnv, elevator_evaluations, evaluate, parse_elevator


class Result:
    def __init__(self, ok=True, **data):
        self.ok = ok
        self.data = data
        self.lines = []

    def line(self, text):
        self.lines.append(text)
        return self


_LOADER = None


def _load(path, expect=None):
    # one loader per invocation, so files referring to the same 2-category share it
    global _LOADER
    if _LOADER is None:
        _LOADER = formats.Loader()
    return _LOADER.load(path, expect or formats.kind_of(path))


def _s(x):
    return str(x)


def _yes(b):
    return "yes" if b else "no"


# ---------------------------------------------------------------- commands


def cmd_validate(args):
    obj = _load(args.file)
    res = Result(True, kind=formats.kind_of(args.file) or type(obj).__name__, valid=True)
    res.line(f"{args.file}: valid")
    if isinstance(obj, TwoCat):
        rng = random.Random(args.seed)
        grid = [(a, a2) for a in ordered(obj.cells2) for a2 in ordered(obj.cells2)
                if obj.tgt1(obj.src2(a)) == obj.src1(obj.src2(a2))]
        sample = rng.sample(grid, min(args.samples, len(grid))) if grid else []
        bad = [(a, a2) for a, a2 in sample if len(set(elevator_evaluations(obj, a, a2))) != 1]
        res.data.update(objects=len(obj.objects), one_cells=len(obj.cells1), two_cells=len(obj.cells2),
                        interchange_samples=len(sample), interchange_failures=[list(map(_s, b)) for b in bad])
        res.line(f"objects {len(obj.objects)}, 1-cells {len(obj.cells1)}, 2-cells {len(obj.cells2)}")
        res.line(f"interchange: {len(sample)} sampled grids, {len(bad)} failures")
        res.ok = not bad
    return res


def _report(res, rep, label):
    d = rep.to_dict()
    res.data[label] = d
    for k, v in d.get("verdicts", {}).items():
        res.line(f"{label} {k}: {v if isinstance(v, str) else ('pass' if v else 'fail')}")
    return res


def cmd_check_filtered(args):
    from .shape import check_2filtered
    K = _load(args.file)
    core = args.core.split(",") if args.core else None
    rep = check_2filtered(K, core=core, bound=args.bound)
    res = Result(rep.ok)
    _report(res, rep, "filtered")
    res.line(f"2-filtered: {_yes(rep.ok)}")
    return res


def cmd_check_cofinal(args):
    from .shape import check_2cofinal
    F = _load(args.file, "pseudofunctor")
    rep = check_2cofinal(F, bound=args.bound)
    res = Result(rep.ok)
    _report(res, rep, "cofinal")
    res.line(f"2-cofinal: {_yes(rep.ok)}")
    return res


def _two_terminal(I):
    out = []
    for t in ordered(I.objects):
        good = True
        for i in I.objects:
            fs = I.one_cells(i, t)
            if not fs or any(len(I.two_cells(f, g)) != 1 for f in fs for g in fs):
                good = False
                break
        if good:
            out.append(t)
    return out


def cmd_colim(args):
    from .kan import ll_colimit
    F = _load(args.file, "pseudofunctor")
    P = ll_colimit(F)
    cc = check_pseudo_cocone(P.cocone)
    res = Result(cc.ok, objects=len(P.category.objects), morphisms=len(P.category.morphisms),
                 premorphisms=P.stats["premorphisms"], cocone_ok=cc.ok)
    res.line(f"L(F): {len(P.category.objects)} objects, {len(P.category.morphisms)} morphisms "
             f"({P.stats['premorphisms']} premorphisms)")
    res.line(f"cocone checks: {'pass' if cc.ok else 'fail'}")
    if args.check_terminal_oracle:
        ts = _two_terminal(F.source)
        if not ts:
            res.data["equivalence"] = "no 2-terminal object"
            res.line("equivalence: no 2-terminal object in the index")
            res.ok = False
        else:
            d = equivalence_of_categories(P.leg(ts[0]))
            res.data["terminal"] = _s(ts[0])
            res.data["equivalence"] = _yes(d.verdict)
            res.line(f"equivalence=({_yes(d.verdict)}) for lambda_{ts[0]}: F({ts[0]}) -> L(F)")
            res.ok = res.ok and d.verdict
    return res


def cmd_lim(args):
    from .kan import pseudo_limit_cat
    F = _load(args.file, "pseudofunctor")
    P = pseudo_limit_cat(F)
    c = check_pseudo_cone(P.cone)
    res = Result(c.ok, objects=len(P.category.objects), morphisms=len(P.category.morphisms), cone_ok=c.ok)
    res.line(f"pseudo-limit: {len(P.category.objects)} objects, {len(P.category.morphisms)} morphisms")
    res.line(f"cone checks: {'pass' if c.ok else 'fail'}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(formats.dumps(formats.to_data(_stringify(P.category))))
    return res


def _stringify(C: FinCat):
    """A copy of C with string ids (for export)."""
    o = {x: str(x) for x in C.objects}
    m = {x: str(x) for x in C.morphisms}
    return FinCat([o[x] for x in C.objects], {m[x]: (o[s], o[t]) for x, (s, t) in C.morphisms.items()},
                  {o[a]: m[x] for a, x in C.identities.items()},
                  {(m[g], m[f]): m[h] for (g, f), h in C.comp.items()}, name=C.name)


def cmd_factor(args):
    from .kan import count_mediators, factor_through, ll_colimit, pseudo_limit_cat
    from .core import Functor
    F = _load(args.file, "pseudofunctor")
    if args.kind == "lim":
        P = pseudo_limit_cat(F)
        M, exact = factor_through(P, P.cone)
        ident = M == Functor.identity(P.category)
    else:
        P = ll_colimit(F)
        M, exact = factor_through(P, P.cocone)
        ident = M == Functor.identity(P.category)
    res = Result(exact and ident, identity=ident, certificate=exact)
    res.line(f"mediator for the presentation's own cone is the identity: {_yes(ident)}")
    res.line(f"{'exact leg equalities' if args.kind == 'lim' else 'factorization certificate'}: {_yes(exact)}")
    if args.count:
        n = count_mediators(P, P.cone if args.kind == "lim" else P.cocone)
        res.data["mediators"] = n
        res.line(f"functors with the prescribed legs: {n}")
        res.ok = res.ok and n == 1
    return res


def cmd_compare(args):
    from .kan import comparison_functor
    F = _load(args.functor, "pseudofunctor")
    G = _load(args.diagram, "pseudofunctor")
    h, d, _ = comparison_functor(F, G)
    res = Result(d.verdict, equivalence=_yes(d.verdict), clause=d.clause,
                 witness=None if d.witness is None else list(map(_s, d.witness)))
    res.line(f"h: L(GF) -> L(G) is an equivalence: {_yes(d.verdict)}")
    if not d.verdict:
        res.line(f"fails {d.clause} at {d.witness}")
    return res


def cmd_mj(args):
    from .shape import build_MJ
    J = _load(args.file)
    try:
        mj = build_MJ(J, args.n, slack=args.slack, filtered_slack=args.filtered_slack)
    except BoundTooSmall as e:
        res = Result(False, inconclusive=str(e))
        res.line(f"inconclusive: {e}")
        return res
    r = {k: v for k, v in mj.report.items() if not k.endswith("_report")}
    ok = r["cofinite"] and r["filtered"] and r["cofinal"] and r["phi_functorial"] and r["antisymmetric"]
    res = Result(ok, **r)
    for k in ("diagrams", "core", "cofinite", "filtered", "cofinal", "phi_functorial", "phi_well_defined"):
        res.line(f"{k}: {r[k]}")
    return res


def cmd_hat(args):
    from .core import validate_fragment
    from .shape import build_hat, check_2cofinal
    A = _load(args.file, "category")
    H, T = build_hat(A)
    b = args.bound if args.bound is not None else 3
    v = validate_fragment(H, b)
    t = check_pseudo_functor(T, bound=b)
    c = check_2cofinal(T, bound=b)
    res = Result(v.ok and t.ok and c.ok, fragment_valid=v.ok, T_valid=t.ok, T_cofinal=c.ok, bound=b,
                 one_cells=v.coverage["one_cells"])
    res.line(f"A-hat fragment (tuples of length <= {b}): {v.coverage['one_cells']} 1-cells, valid: {_yes(v.ok)}")
    res.line(f"T is a pseudo-functor: {_yes(t.ok)}; 2-cofinal: {_yes(c.ok)}")
    return res


def _prohom(args):
    from .pro import pro_hom
    X = _load(args.source, "pro-object")
    Y = _load(args.target, "pro-object")
    return pro_hom(X, Y)


def cmd_pro_hom(args):
    from .pro import hom_isomorphism
    H = _prohom(args)
    res = Result(True, objects=len(H.category.objects), morphisms=len(H.category.morphisms))
    res.line(f"Pro(C)(X,Y): {len(H.category.objects)} objects, {len(H.category.morphisms)} morphisms")
    for x in ordered(H.category.objects):
        res.line(f"  {x}")
    if len(H.X.I.objects) == 1 and len(H.Y.I.objects) == 1:
        _, iso = hom_isomorphism(H)
        res.data["isomorphic_to_hom"] = iso
        res.line(f"isomorphic to C(X_*,Y_*): {_yes(iso)}")
        res.ok = iso
    return res


def cmd_represent(args):
    from .pro import check_represents, check_represents_2cell, find_representative, find_representative_2cell
    H = _prohom(args)
    rows, ok = [], True
    for f in ordered(H.category.objects):
        for j in H.Y.I.objects:
            rep = find_representative(H, f, j)
            good = check_represents(H, rep, f)
            ok &= good
            rows.append({"f": str(f), "j": str(j), "i": str(rep.i), "r": str(rep.r), "ok": good})
    n2 = 0
    for m in ordered(H.category.morphisms):
        for j in H.Y.I.objects:
            th, a, b = find_representative_2cell(H, m, j)
            ok &= check_represents_2cell(H, (th, a, b), m)
            n2 += 1
    res = Result(ok, representatives=rows, two_cells_checked=n2)
    for r in rows:
        res.line(f"{r['f']} at {r['j']}: (r={r['r']}, i={r['i']}) {'ok' if r['ok'] else 'FAIL'}")
    res.line(f"2-cell representatives checked: {n2}")
    return res


def cmd_straighten(args):
    from .pro import straighten, straighten_holds
    H = _prohom(args)
    j = args.j
    js = [j] if j else list(H.Y.I.objects)
    ok, n = True, 0
    res = Result(True)
    for j in js:
        L = H.L[j].category
        for c in ordered(L.morphisms):
            out = straighten(H, c, j)
            good = straighten_holds(H, c, out, j)
            ok &= good
            n += 1
            if args.verbose:
                res.line(f"{c}: k={out[0]} u={out[1]} v={out[2]} theta={out[3]} {'ok' if good else 'FAIL'}")
    res.ok = ok
    res.data.update(checked=n, all_hold=ok)
    res.line(f"straightened {n} 2-cells; equation holds for all: {_yes(ok)}")
    return res


def cmd_equalize(args):
    from .pro import equalize
    H = _prohom(args)
    j = args.j or list(H.Y.I.objects)[0]
    try:
        u = equalize(H, [(args.theta, args.theta2)], args.i, j)
    except HypothesisFails as e:
        res = Result(False, hypothesis="fails", detail=str(e))
        res.line(f"hypothesis fails: {e}")
        return res
    res = Result(True, u=str(u))
    res.line(f"equalizing 1-cell: {u}")
    return res


def cmd_mf(args):
    from .pro import build_Mf, identity_promorphism
    H = _prohom(args)
    objs = ordered(H.category.objects)
    if args.index is None and H.X is H.Y:
        f = identity_promorphism(H)
    else:
        f = objs[args.index or 0]
    try:
        M = build_Mf(H, f, bound=args.bound, slack=args.slack)
    except BoundTooSmall as e:
        res = Result(False, inconclusive=str(e))
        res.line(f"inconclusive: {e}")
        return res
    verdicts = {k: v.ok for k, v in M.reports.items()}
    res = Result(all(verdicts.values()), objects=len(M.objects), one_cells=len(M.twocat.cells1),
                 two_cells=len(M.twocat.cells2), **verdicts)
    res.line(f"M_f for {f}: {len(M.objects)} objects, {len(M.twocat.cells1)} 1-cells, "
             f"{len(M.twocat.cells2)} 2-cells")
    for k, v in verdicts.items():
        res.line(f"{k}: {_yes(v)}")
    return res


def cmd_kx(args):
    from .pro import build_KX
    X = _load(args.file, "pro-object")
    J = TwoCat.locally_discrete(FinCat.terminal())
    try:
        KX = build_KX(J, {"*": X}, {}, bound=args.bound)
    except BoundTooSmall as e:
        res = Result(False, inconclusive=str(e))
        res.line(f"inconclusive: {e}")
        return res
    verdicts = {k: v.ok for k, v in KX.reports.items()}
    res = Result(all(verdicts.values()), zero_cells=len(KX.twocat.objects), one_cells=len(KX.twocat.cells1),
                 two_cells=len(KX.twocat.cells2), **verdicts)
    res.line(f"K_X: {len(KX.twocat.objects)} 0-cells, {len(KX.twocat.cells1)} 1-cells, "
             f"{len(KX.twocat.cells2)} 2-cells")
    for k, v in verdicts.items():
        res.line(f"{k}: {_yes(v)}")
    return res


def cmd_reindex(args):
    from .pro import inclusion, reindex
    from .shape import check_2cofinal
    X = _load(args.file, "pro-object")
    S, F = inclusion(X.I, args.to.split(","))
    cof = check_2cofinal(F)
    if not cof.ok:
        res = Result(False, cofinal=False)
        res.line("the inclusion is not 2-cofinal")
        return res
    XF, cert = reindex(X, F)
    ok = all(d.verdict for d in cert.values())
    res = Result(ok, cofinal=True, equivalences={str(k): _yes(v.verdict) for k, v in cert.items()})
    for k, v in cert.items():
        res.line(f"colim C(X_F,{k}) -> colim C(X,{k}) equivalence: {_yes(v.verdict)}")
    return res


def cmd_lift(args):
    from .model import check_filler, identity_filler, inverse_filler, solve_lifting
    S = _load(args.file, "square")
    K, sq = S.twocat, S.square
    fl, how = None, "search"
    # canonical fillers first: i an identity, or p strictly invertible
    if sq.i == K.id1(K.src1(sq.i)):
        fl, how = identity_filler(K, sq), "i is an identity: (a, id, gamma)"
    else:
        for g in ordered(K.one_cells(K.tgt1(sq.p), K.src1(sq.p))):
            if K.comp1(g, sq.p) == K.id1(K.src1(sq.p)) and K.comp1(sq.p, g) == K.id1(K.tgt1(sq.p)):
                fl, how = inverse_filler(K, sq, g), f"p has strict inverse g={g}: (g b, g gamma, id)"
                break
    if fl is not None and not check_filler(K, sq, fl):
        fl, how = None, "search"
    if fl is None:
        fl = solve_lifting(K, sq)
    if fl is None:
        res = Result(False, filler=None)
        res.line("no filler")
        return res
    res = Result(True, filler={"f": str(fl.f), "lambda": str(fl.lam), "rho": str(fl.rho)}, method=how)
    res.line(f"filler: f={fl.f}, lambda={fl.lam}, rho={fl.rho}")
    res.line(f"method: {how}")
    return res


def cmd_retract(args):
    from .model import check_retract, retract_argument
    K = _load(args.file, "2-category")
    try:
        d, big = retract_argument(K, args.f, args.i, args.p, args.gamma, case=args.case)
    except NoFiller as e:
        res = Result(False, filler=None)
        res.line(f"no filler: {e}")
        return res
    ok = check_retract(K, args.f, big, d)
    octo = [str(x) for x in (d.t0, d.t1, d.tm, d.e0, d.e1, d.em, d.m0, d.m1)]
    res = Result(ok, retract_of=str(big), octuple=octo, check=ok)
    res.line(f"{args.f} is a retract of {big} via ({', '.join(octo)})")
    res.line(f"retract equation holds: {_yes(ok)}")
    return res


def cmd_model_check(args):
    from .model import check_model_axioms
    cl = _load(args.file, "model-classes")
    rep = check_model_axioms(cl.twocat, cl)
    res = Result(rep.ok, **{k: v for k, v in rep.to_dict().items() if k != "ok"})
    for k, v in sorted(rep.verdicts.items()):
        res.line(f"{k}: {v}")
    return res


def cmd_export_dot(args):
    obj = _load(args.file)
    text = formats.export_dot(obj, name=getattr(obj, "name", None) or "G")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    res = Result(True, dot=text)
    res.lines = text.rstrip("\n").split("\n")
    return res


def cmd_eval(args):
    K = _load(args.file, "2-category")
    cells = dict(kv.split("=", 1) for kv in args.cell or [])
    ones = dict(kv.split("=", 1) for kv in args.one or [])
    for k, v in cells.items():
        if v not in K.cells2:
            raise UnknownName(f"unknown 2-cell {v!r}")
    for k, v in ones.items():
        if v not in K.cells1:
            raise UnknownName(f"unknown 1-cell {v!r}")
    env = CellEnv(K, cells, ones)
    e = parse_elevator(args.expr, env)
    c = evaluate(e, env)
    res = Result(True, value=str(c), source=str(K.src2(c)), target=str(K.tgt2(c)))
    res.line(f"{c}: {K.src2(c)} => {K.tgt2(c)}")
    if args.equals:
        e2 = parse_elevator(args.equals, env)
        c2 = evaluate(e2, env)
        res.ok = c == c2
        res.data["equal"] = res.ok
        res.line(f"equal: {_yes(res.ok)}")
    return res


def cmd_canonical(args):
    text = formats.canonicalize(args.file)
    sys.stdout.write(text)
    res = Result(True)
    res.printed = True
    return res


COMMANDS = {
    "validate": cmd_validate, "check-filtered": cmd_check_filtered, "check-cofinal": cmd_check_cofinal,
    "colim": cmd_colim, "lim": cmd_lim, "factor": cmd_factor, "compare": cmd_compare, "mj": cmd_mj,
    "hat": cmd_hat, "pro-hom": cmd_pro_hom, "represent": cmd_represent, "straighten": cmd_straighten,
    "equalize": cmd_equalize, "mf": cmd_mf, "kx": cmd_kx, "reindex": cmd_reindex, "lift": cmd_lift,
    "retract": cmd_retract, "model-check": cmd_model_check, "export-dot": cmd_export_dot, "eval": cmd_eval,
    "canonical": cmd_canonical,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=None, help="cap on tuple length or enumerated cells")
    common.add_argument("--slack", type=int, default=1, help="extra size allowed for witnesses")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--format", choices=["text", "structured"], default="text")
    p = argparse.ArgumentParser(prog="twocat", description="Finite 2-categories, pseudo-limits and pro-objects.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("validate", "validate a structure file")
    s.add_argument("file")
    s.add_argument("--samples", type=int, default=1000, help="interchange grids sampled for 2-categories")
    s = add("check-filtered", "decide 2-filteredness")
    s.add_argument("file")
    s.add_argument("--core", help="comma-separated objects to quantify over")
    s = add("check-cofinal", "decide 2-cofinality of a pseudo-functor")
    s.add_argument("file")
    s = add("colim", "pseudo-colimit of a 2-functor into CAT")
    s.add_argument("file")
    s.add_argument("--check-terminal-oracle", action="store_true")
    s = add("lim", "pseudo-limit of a 2-functor into CAT")
    s.add_argument("file")
    s.add_argument("--out")
    s = add("factor", "mediator for a presentation's own cone")
    s.add_argument("file")
    s.add_argument("--kind", choices=["lim", "colim"], default="colim")
    s.add_argument("--count", action="store_true", help="count mediators by brute force")
    s = add("compare", "comparison functor along a 2-cofinal functor")
    s.add_argument("functor")
    s.add_argument("diagram")
    s = add("mj", "truncation of the poset of finite diagrams")
    s.add_argument("file")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--filtered-slack", type=int, default=None)
    s = add("hat", "the 2-category of composable tuples")
    s.add_argument("file")
    pro_help = {
        "pro-hom": "hom category between two pro-objects",
        "represent": "a representative for every pro-morphism",
        "straighten": "straighten each class of the colimit presentation",
        "equalize": "an index 1-cell identifying two 2-cells",
        "mf": "truncated 2-category of a pro-morphism",
    }
    for name, help_ in pro_help.items():
        s = add(name, help_)
        s.add_argument("source")
        s.add_argument("target")
        if name == "straighten":
            s.add_argument("--j")
            s.add_argument("--verbose", action="store_true")
        if name == "equalize":
            s.add_argument("--i", required=True)
            s.add_argument("--j")
            s.add_argument("--theta", required=True)
            s.add_argument("--theta2", required=True)
        if name == "mf":
            s.add_argument("--index", type=int)
    s = add("kx", "K_X for a single pro-object")
    s.add_argument("file")
    s = add("reindex", "reindex a pro-object along a full inclusion")
    s.add_argument("file")
    s.add_argument("--to", required=True, help="comma-separated index objects")
    s = add("lift", "solve a lifting square")
    s.add_argument("file")
    s = add("retract", "the retract argument")
    s.add_argument("file")
    for k in ("f", "i", "p", "gamma"):
        s.add_argument(f"--{k}", required=True)
    s.add_argument("--case", type=int, choices=[1, 2], default=1)
    s = add("model-check", "check the model axioms")
    s.add_argument("file")
    s = add("export-dot", "DOT export of the 1-skeleton")
    s.add_argument("file")
    s.add_argument("--out")
    s = add("eval", "evaluate an elevator expression")
    s.add_argument("file")
    s.add_argument("expr")
    s.add_argument("--cell", action="append", help="name=2-cell id")
    s.add_argument("--one", action="append", help="name=1-cell id")
    s.add_argument("--equals", help="second expression to compare with")
    s = add("canonical", "print the canonical form of a .cat or .2cat file")
    s.add_argument("file")
    return p


def main(argv=None):
    global _LOADER
    p = build_parser()
    args = p.parse_args(argv)
    _LOADER = formats.Loader()
    try:
        res = COMMANDS[args.command](args)
    except (SchemaError, UnknownName, FileNotFoundError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (NotFound, TwoCatError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    if getattr(res, "printed", False):
        return 0
    if args.format == "structured":
        out = {"command": args.command, "ok": res.ok, **res.data}
        print(json.dumps(out, sort_keys=True, indent=2, default=str))
    else:
        for line in res.lines:
            print(line)
        print(f"verdict: {'positive' if res.ok else 'negative'}")
    return 0 if res.ok else 1


if __name__ == "__main__":
    sys.exit(main())
