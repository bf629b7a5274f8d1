import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from gen import bz2, cat_1_2, cat_1c, chain, chaotic, iso_pair
from twocat.core import FinCat, TwoCat
from twocat.errors import NoFiller, NonInvertibleCell, ShapeMismatch
from twocat.model import (Filler, LiftingSquare, ModelClasses, check_filler, check_model_axioms, check_retract,
                          fillers, has_lifting, identity_filler, identity_retract, inverse_filler,
                          retract_argument, solve_lifting, transfer_lifting)

SMALL = [iso_pair, bz2, lambda: TwoCat.locally_discrete(chaotic(2)), lambda: TwoCat.locally_discrete(chain(2))]


def _all_squares(K):
    for i in K.cells1:
        for p in K.cells1:
            for a, b, g in O.squares(K, i, p):
                yield LiftingSquare(i, p, a, b, g)


@pytest.mark.parametrize("make", SMALL + [cat_1c])
def test_fillers_match_brute_force(make):
    K = make()
    n = 0
    for sq in _all_squares(K):
        want = O.fillers(K, sq.i, sq.p, sq.a, sq.b, sq.gamma)
        got = {(f.f, f.lam, f.rho) for f in fillers(K, sq)}
        assert got == want
        first = solve_lifting(K, sq)
        assert (first is None) == (not want)
        if first is not None:
            assert check_filler(K, sq, first)
        n += 1
    assert n > 0


def test_lifting_relation_on_cat_1c():
    K = cat_1c()
    for i in K.cells1:
        for p in K.cells1:
            assert has_lifting(K, i, p) == O.lifts(K, i, p)


def test_bad_squares_rejected():
    K = iso_pair()
    with pytest.raises(ShapeMismatch):
        solve_lifting(K, LiftingSquare("f", "id_B", "id_A", "id_B", "1_f"))
    K = cat_1_2()
    r = K.realization["functors"]
    top = next(f for f in K.one_cells("2", "2") if r[f].obj == {"0": "1", "1": "1"})
    x = K.two_cells("id_2", top)[0]
    with pytest.raises(NonInvertibleCell):
        solve_lifting(K, LiftingSquare("id_2", "id_2", "id_2", top, x))


def test_canonical_fillers():
    K = cat_1c()
    for sq in _all_squares(K):
        if sq.i == K.id1(K.src1(sq.i)):
            assert check_filler(K, sq, identity_filler(K, sq))
        g = next((g for g in K.one_cells(K.tgt1(sq.p), K.src1(sq.p))
                  if K.comp1(g, sq.p) == K.id1(K.src1(sq.p)) and K.comp1(sq.p, g) == K.id1(K.tgt1(sq.p))), None)
        if g is not None:
            fl = inverse_filler(K, sq, g)
            assert check_filler(K, sq, fl)
            assert (fl.f, fl.lam, fl.rho) in O.fillers(K, sq.i, sq.p, sq.a, sq.b, sq.gamma)


# ---------------------------------------------------------------- retracts


def _factorizations(K):
    out = []
    for f in sorted(K.cells1):
        for p, i in O.factorizations(K, f):
            for g in O.iso_cells(K, O.comp1(K, p, i), f):
                out.append((f, i, p, g))
    return out


@pytest.mark.parametrize("make", [cat_1c, cat_1_2, iso_pair])
def test_retract_argument_both_cases(make):
    K = make()
    n = 0
    for f, i, p, g in _factorizations(K):
        X, Y = K.cells1[f]
        for case in (1, 2):
            if case == 1:
                want = bool(O.fillers(K, f, p, i, K.id1(Y), g))
            else:
                want = bool(O.fillers(K, i, f, K.id1(X), p, O.inverse(K, g)))
            if not want:
                with pytest.raises(NoFiller):
                    retract_argument(K, f, i, p, g, case=case)
                continue
            d, big = retract_argument(K, f, i, p, g, case=case)
            assert big == (i if case == 1 else p)
            assert check_retract(K, f, big, d)
            assert O.retract_equation(K, f, d)
            n += 1
    assert n > 0


def test_retract_rejects_wrong_equation():
    K = iso_pair()
    d = identity_retract(K, "f")
    assert check_retract(K, "f", "f", d)
    bad = replace(d, tm="phi")
    with pytest.raises(ShapeMismatch):
        check_retract(K, "f", "f", bad)
    K = bz2()
    d = identity_retract(K, "i")
    assert check_retract(K, "i", "i", d)
    twisted = replace(d, tm="s")
    assert not check_retract(K, "i", "i", twisted)
    assert not O.retract_equation(K, "i", twisted)


def _transfer_cases(K):
    # (i', i, ri) with i' a retract of i from the first case of the argument
    out = []
    for f, i, p, g in _factorizations(K):
        try:
            d, big = retract_argument(K, f, i, p, g, case=1)
        except NoFiller:
            continue
        out.append((f, big, d))
    return out


@pytest.mark.parametrize("make", [cat_1c, iso_pair])
def test_transfer_lifting_along_retracts(make):
    K = make()
    n = 0
    for small, big, ri in _transfer_cases(K):
        for p in sorted(K.cells1):
            if not O.lifts(K, big, p):
                continue
            rp = identity_retract(K, p)
            for a, b, g in O.squares(K, small, p):
                sq = LiftingSquare(small, p, a, b, g)
                fl = transfer_lifting(K, sq, big, p, rp, ri)
                assert (fl.f, fl.lam, fl.rho) in O.fillers(K, small, p, a, b, g)
                n += 1
    assert n > 0


def test_transfer_rejects_non_retract():
    K = bz2()
    d = identity_retract(K, "i")
    twisted = replace(d, tm="s")
    sq = LiftingSquare("i", "i", "i", "i", "e")
    with pytest.raises(ShapeMismatch):
        transfer_lifting(K, sq, "i", "i", twisted, d)
    with pytest.raises(ShapeMismatch):
        transfer_lifting(K, sq, "i", "i", d, d, inner=Filler("i", "s", "e"))


# ---------------------------------------------------------------- axioms


def test_terminal_with_trivial_classes():
    K = TwoCat.locally_discrete(FinCat.terminal())
    one = set(K.cells1)
    rep = check_model_axioms(K, ModelClasses(one, one, one))
    assert rep.ok
    assert rep.verdicts["2-M0b"] == "not checked"
    assert all(v == "pass" for k, v in rep.verdicts.items() if v != "not checked")


def test_undeclared_class_member():
    with pytest.raises(ShapeMismatch):
        check_model_axioms(iso_pair(), ModelClasses({"nope"}, (), ()))


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_axiom_verdicts_match_oracle(seed):
    rng = random.Random(seed)
    K = rng.choice([iso_pair, lambda: TwoCat.locally_discrete(chain(2))])()
    ones = sorted(K.cells1)

    def pick():
        return {f for f in ones if rng.random() < 0.6}

    fib, cof, weq = pick(), pick(), pick()
    rep = check_model_axioms(K, ModelClasses(fib, cof, weq))
    want = O.axiom_verdicts(K, fib, cof, weq)
    assert {k: rep.verdicts[k] for k in want} == want


def test_a_genuine_model_structure_passes():
    # isomorphisms as weak equivalences, everything a fibration and a cofibration
    K = iso_pair()
    ones = set(K.cells1)
    weq = {f for f in ones if K.src1(f) == K.tgt1(f)}
    rep = check_model_axioms(K, ModelClasses(ones, ones, weq))
    want = O.axiom_verdicts(K, ones, ones, weq)
    assert {k: rep.verdicts[k] for k in want} == want
    assert rep.ok
