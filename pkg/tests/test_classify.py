import pytest
from hypothesis import given

from ltlreduce.classify import NotInNNFError, Variant, classify_all, is_pure_eventuality
from ltlreduce.syntax import (
    And, Atom, FalseConst, Finally, Globally, Next, Not, Or, Release,
    TrueConst, Until, children, nnf, parse,
)

from .strategies import formulas

B, C, P = Variant.BUGGY, Variant.CORRECTED, Variant.PATCHED

# Independent oracle: each clause as (node kind, operand positions that must
# be pure eventualities). Membership is the least fixpoint, computed by
# iterating over all subformulas until nothing new is added.
CLAUSES = {
    B: {Finally: None, Or: (0, 1), And: (0, 1), Until: (0,), Globally: (0,), Release: (0, 1), Next: (0,)},
    C: {Finally: None, Or: (0, 1), And: (0, 1), Until: (0, 1), Globally: (0,), Release: (0, 1), Next: (0,)},
    P: {Finally: None, Or: (0, 1), And: (0, 1), Until: (1,), Globally: (0,), Release: (0, 1), Next: (0,)},
}


def _all_subformulas(f):
    out = [f]
    for k in children(f):
        out.extend(_all_subformulas(k))
    return out


def oracle(f, variant):
    subs = _all_subformulas(f)
    members = set()
    grew = True
    while grew:
        grew = False
        for g in subs:
            if g in members or type(g) not in CLAUSES[variant]:
                continue
            need = CLAUSES[variant][type(g)]
            kids = children(g)
            if need is None or all(kids[i] in members for i in need):
                members.add(g)
                grew = True
    return f in members


a, b, c = Atom("a"), Atom("b"), Atom("c")
FB_U_C = Until(Finally(b), c)
A_U_FB = Until(a, Finally(b))


@pytest.mark.parametrize("variant", list(Variant))
def test_finally_is_always_pure(variant):
    assert is_pure_eventuality(Finally(b), variant)
    assert is_pure_eventuality(Finally(Globally(Not(a))), variant)


@pytest.mark.parametrize("f, variant, expected", [
    (FB_U_C, B, True),
    (FB_U_C, C, False),
    (FB_U_C, P, False),
    (A_U_FB, P, True),
    (A_U_FB, C, False),
    (A_U_FB, B, False),
    (Until(Finally(a), Finally(b)), C, True),
    (Release(Finally(a), Finally(b)), C, True),
    (Release(a, Finally(b)), P, False),
    (Globally(Finally(a)), C, True),
    (Next(Finally(a)), C, True),
    (Or(Finally(a), b), B, False),
])
def test_examples(f, variant, expected):
    assert is_pure_eventuality(f, variant) is expected
    assert oracle(f, variant) is expected


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("f", [a, Not(a), TrueConst(), FalseConst()])
def test_literals_never_pure(f, variant):
    assert not is_pure_eventuality(f, variant)


def test_rejects_non_nnf_and_names_node():
    with pytest.raises(NotInNNFError) as info:
        is_pure_eventuality(Finally(Not(Until(a, b))), B)
    assert info.value.path == (0,)
    assert info.value.node == Not(Until(a, b))
    assert "!(a U b)" in str(info.value)


@given(formulas)
def test_matches_oracle(f):
    g = nnf(f)
    for v in Variant:
        assert is_pure_eventuality(g, v) == oracle(g, v)


@given(formulas)
def test_corrected_is_contained_in_both_other_classes(f):
    flags = classify_all(nnf(f))
    assert not flags[C] or flags[P]
    assert not flags[C] or flags[B]


def test_patched_is_not_contained_in_buggy():
    # the patched U clause admits a non-pure left operand, the buggy one does not
    assert classify_all(A_U_FB) == {B: False, C: False, P: True}
    assert classify_all(parse("true U F true")) == {B: False, C: False, P: True}


def test_strictness_witnesses():
    assert classify_all(FB_U_C) == {B: True, C: False, P: False}
    assert classify_all(A_U_FB) == {B: False, C: False, P: True}
    assert classify_all(parse("(F a) U (F b)")) == {B: True, C: True, P: True}
