import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlreduce.semantics import (
    Bounds, Counterexample, LassoWord, PassUpToBound, WordSyntaxError,
    count_lassos, default_letters, enumerate_lassos, equivalent_bounded,
    eval_reference, evaluate, format_word, implies_bounded,
    left_append_closed_bounded, parse_word, powerset_letters,
    singleton_letters, verify_counterexample,
)
from ltlreduce.syntax import Atom, Finally, Globally, Not, TrueConst, Until, nnf, parse

from .strategies import formulas, letters, words

a, b, c = Atom("a"), Atom("b"), Atom("c")
FB_U_C = Until(Finally(b), c)
A_U_FB_U_C = Until(a, FB_U_C)
C_OMEGA = LassoWord((), (frozenset("c"),))
A_C_OMEGA = LassoWord((frozenset("a"),), (frozenset("c"),))
TINY = Bounds(max_prefix=1, max_period=2, max_append=2)


# -- words ------------------------------------------------------------------

@pytest.mark.parametrize("text, word", [
    ("a | c", A_C_OMEGA),
    ("| c", C_OMEGA),
    ("{a,b}; {} | c; {b}", LassoWord.of([{"a", "b"}, set()], [{"c"}, {"b"}])),
])
def test_word_syntax(text, word):
    assert parse_word(text) == word
    assert parse_word(format_word(word)) == word


@pytest.mark.parametrize("text", ["a c", "a |", "| ", "a | b | c", "| {A}", "| a;;b"])
def test_word_syntax_errors(text):
    with pytest.raises(WordSyntaxError):
        parse_word(text)


def test_lasso_positions():
    w = parse_word("a; b | c; {}")
    assert [w.letter(i) for i in range(6)] == [
        frozenset("a"), frozenset("b"), frozenset("c"), frozenset(), frozenset("c"), frozenset()]
    assert w.normalize(7) == 3
    with pytest.raises(ValueError):
        LassoWord((), ())


# -- evaluation -------------------------------------------------------------

@pytest.mark.parametrize("f, w, expected", [
    (FB_U_C, C_OMEGA, True),
    (FB_U_C, A_C_OMEGA, False),
    (A_U_FB_U_C, A_C_OMEGA, True),
    (Globally(a), LassoWord((), (frozenset("a"),)), True),
    (Finally(b), A_C_OMEGA, False),
    (TrueConst(), A_C_OMEGA, True),
])
@pytest.mark.parametrize("evaluator", [evaluate, eval_reference])
def test_eval_examples(evaluator, f, w, expected):
    assert evaluator(f, w, 0) is expected


@given(formulas, words, st.integers(0, 12))
def test_evaluators_agree(f, w, i):
    assert evaluate(f, w, i) == eval_reference(f, w, i)


@given(formulas, words, st.integers(0, 6))
def test_periodicity(f, w, k):
    m, p = len(w.prefix), len(w.period)
    assert evaluate(f, w, m + k) == evaluate(f, w, m + k % p)


@given(formulas, words, st.lists(letters, min_size=1, max_size=3))
def test_prepend_shift(f, w, v):
    assert evaluate(f, w.prepend(v), len(v)) == evaluate(f, w, 0)


@given(formulas, words)
def test_duality(f, w):
    assert evaluate(nnf(Not(f)), w, 0) == (not evaluate(f, w, 0))


@given(formulas, formulas, words)
def test_universal_implications(phi, psi, w):
    if evaluate(psi, w, 0):
        assert evaluate(Finally(psi), w, 0)
        assert evaluate(Until(phi, psi), w, 0)


def test_unlisted_atoms_are_false():
    assert evaluate(Atom("z"), C_OMEGA) is False
    assert eval_reference(Atom("z"), C_OMEGA) is False


# -- enumeration ------------------------------------------------------------

@pytest.mark.parametrize("props, max_prefix, max_period, expected", [
    ({"a"}, 0, 1, 2),
    ({"a", "b"}, 1, 1, 20),
    (set(), 0, 1, 1),
])
def test_enumeration_counts(props, max_prefix, max_period, expected):
    got = list(enumerate_lassos(props, max_prefix, max_period))
    assert len(got) == expected == count_lassos(2 ** len(props), max_prefix, max_period)
    assert len(set(got)) == len(got)


def test_enumeration_small_case_exact():
    assert list(enumerate_lassos({"a"}, 0, 1)) == [
        LassoWord((), (frozenset(),)), LassoWord((), (frozenset("a"),))]


@pytest.mark.parametrize("n_props, max_prefix, max_period", [(1, 2, 2), (2, 1, 3), (3, 2, 1)])
def test_enumeration_closed_form(n_props, max_prefix, max_period):
    props = "abc"[:n_props]
    k = 2 ** n_props
    closed = sum(k ** (m + p) for m in range(max_prefix + 1) for p in range(1, max_period + 1))
    assert sum(1 for _ in enumerate_lassos(props, max_prefix, max_period)) == closed


def test_enumeration_rejects_empty_period():
    with pytest.raises(ValueError):
        list(enumerate_lassos({"a"}, 1, 0))


def test_letter_sets():
    assert powerset_letters("ba") == (frozenset(), frozenset("a"), frozenset("b"), frozenset("ab"))
    assert singleton_letters("cab") == (frozenset("a"), frozenset("b"), frozenset("c"))
    assert default_letters([parse("a U (b U (c U d))")]) == powerset_letters("abc")


# -- bounded checks against brute force ---------------------------------------

def brute_first_discrepancy(f, g, bounds, implication_only=False):
    letters = default_letters([f, g], bounds)
    for w in enumerate_lassos((), bounds.max_prefix, bounds.max_period, letters=letters):
        lf, lg = eval_reference(f, w), eval_reference(g, w)
        if (lf and not lg) if implication_only else lf != lg:
            return w
    return None


def brute_first_lac_violation(f, bounds):
    letters = default_letters([f], bounds)
    for w in enumerate_lassos((), bounds.max_prefix, bounds.max_period, letters=letters):
        if not eval_reference(f, w):
            continue
        for n in range(1, bounds.max_append + 1):
            for v in itertools.product(letters, repeat=n):
                if not eval_reference(f, w.prepend(v)):
                    return w, v
    return None


@settings(max_examples=40, deadline=None)
@given(formulas, formulas)
def test_equivalence_matches_brute_force(f, g):
    for implication_only in (False, True):
        check = implies_bounded if implication_only else equivalent_bounded
        verdict = check(f, g, TINY)
        expected = brute_first_discrepancy(f, g, TINY, implication_only)
        if expected is None:
            assert isinstance(verdict, PassUpToBound)
        else:
            assert verdict.word == expected
            assert verify_counterexample(f, g, verdict)


@settings(max_examples=40, deadline=None)
@given(formulas)
def test_left_append_matches_brute_force(f):
    verdict = left_append_closed_bounded(f, TINY)
    expected = brute_first_lac_violation(f, TINY)
    if expected is None:
        assert verdict.ok
    else:
        assert (verdict.word, verdict.appended) == expected
        assert verify_counterexample(f, None, verdict)


def test_equivalence_examples():
    verdict = equivalent_bounded(A_U_FB_U_C, FB_U_C)
    assert isinstance(verdict, Counterexample)
    assert verify_counterexample(A_U_FB_U_C, FB_U_C, verdict)
    assert evaluate(A_U_FB_U_C, A_C_OMEGA) and not evaluate(FB_U_C, A_C_OMEGA)
    assert not equivalent_bounded(Finally(FB_U_C), FB_U_C).ok
    assert equivalent_bounded(A_U_FB_U_C, A_U_FB_U_C).ok


def test_a_c_omega_is_among_discrepancies():
    bad = [w for w in enumerate_lassos("abc", 1, 1)
           if evaluate(A_U_FB_U_C, w) != evaluate(FB_U_C, w)]
    assert A_C_OMEGA in bad


def test_implication_examples():
    assert implies_bounded(FB_U_C, A_U_FB_U_C).ok
    assert implies_bounded(c, Finally(c)).ok
    verdict = implies_bounded(Finally(c), c)
    # first word over [{}, {c}] whose first letter lacks c and that has c later
    assert verdict.word == parse_word("| {}; c")


def test_left_append_examples():
    verdict = left_append_closed_bounded(FB_U_C, letters=singleton_letters("abc"))
    assert (verdict.word, verdict.appended) == (C_OMEGA, (frozenset("a"),))
    assert not left_append_closed_bounded(FB_U_C).ok
    assert left_append_closed_bounded(Finally(b)).ok
    verdict = left_append_closed_bounded(a)
    assert (verdict.word, verdict.appended) == (parse_word("| a"), (frozenset(),))
    with pytest.raises(ValueError):
        left_append_closed_bounded(a, max_append=0)


def test_pass_reports_bounds():
    verdict = equivalent_bounded(a, a)
    assert verdict.bounds == Bounds()
    assert verdict.words_checked == count_lassos(2, 3, 3)
    assert "up to bound" in verdict.describe()
