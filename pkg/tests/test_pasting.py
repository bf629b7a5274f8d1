import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import bz2, cat_1_2, cat_1c
from twocat.errors import BoundaryMismatch, ElevatorSyntaxError, UnknownAtom
from twocat.pasting import (ELEVATOR_FORMS, CellEnv, HComp, VComp, boundary, elevator_evaluations, equal,
                            evaluate, parse_elevator)


def test_precedence_and_associativity():
    e = parse_elevator("a . b v c")
    assert e == VComp(HComp(parse_elevator("a"), parse_elevator("b")), parse_elevator("c"))
    e = parse_elevator("a v b v c")
    assert isinstance(e, VComp) and isinstance(e.top, VComp)
    assert str(parse_elevator("id(f) . a")) == "(id(f) . a)"


@pytest.mark.parametrize("text", ["", "a v", "(a", "a . . b", "id(", "a $ b", "v"])
def test_syntax_errors(text):
    with pytest.raises(ElevatorSyntaxError):
        parse_elevator(text)


def test_unknown_atom():
    K = bz2()
    env = CellEnv(K, {"s": "s"}, {})
    with pytest.raises(UnknownAtom):
        parse_elevator("s v t", env)
    with pytest.raises(UnknownAtom):
        parse_elevator("id(f)", env)


def test_group_arithmetic():
    K = bz2()
    env = CellEnv(K, {"s": "s", "e": "e"}, {"i": "i"})
    assert evaluate("s v s", env) == "e"
    assert evaluate("s . s", env) == "e"
    assert evaluate("i . s", env) == "s"
    assert boundary(parse_elevator("s"), env) == ("i", "i")


def test_whiskering_and_mismatch():
    K = cat_1c()
    x = "1->C#0=>1->C#1#0"
    env = CellEnv(K, {"x": x}, {"sw": "C->C#2", "c": "1->C#0"})
    # swap after a point-to-point cell lands between the swapped points
    w = evaluate("sw . x", env)
    assert K.cells2[w] == ("1->C#1", "1->C#0")
    with pytest.raises(BoundaryMismatch):
        evaluate("x . sw", env)
    with pytest.raises(BoundaryMismatch):
        evaluate("x v x", env)
    assert equal("sw . x", "(sw . x) v id(c)", env.bind1(c="1->C#0")) is True


def test_three_forms_are_the_interchange_identity():
    assert len(ELEVATOR_FORMS) == 3
    assert ELEVATOR_FORMS[2] == "a2 . a"


def _grids(K):
    return [(a, a2) for a in K.cells2 for a2 in K.cells2 if K.tgt1(K.src2(a)) == K.src1(K.src2(a2))]


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_interchange_on_fixtures(seed):
    rng = random.Random(seed)
    for K in (bz2(), cat_1c(), cat_1_2()):
        a, a2 = rng.choice(_grids(K))
        vals = elevator_evaluations(K, a, a2)
        assert len(set(vals)) == 1
        # independent check: the juxtaposition table entry itself
        assert vals[2] == K.hcomp2[(a2, a)]
