"""LTL semantics over ultimately periodic words and bounded checks built on it.

A lasso word ``prefix . period^omega`` has finitely many distinct suffixes,
so the truth value of every subformula is a table over the positions
``0 .. len(prefix) + len(period) - 1``; the successor of the last position
is the start of the period.  Until/Finally are least fixpoints around the
loop and Release/Globally greatest fixpoints.

The bounded checks evaluate all words of one ``(len(prefix), len(period))``
shape at once as numpy boolean arrays of shape ``(words, positions)``.
Every counterexample they report is re-checked with :func:`evaluate`
before it is returned.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .syntax import (
    And, Atom, FalseConst, Finally, Formula, Globally, Next, Not, Or,
    Release, TrueConst, Until, children, props,
)

__all__ = [
    "LassoWord", "WordSyntaxError", "parse_word", "format_word",
    "evaluate", "eval_reference", "enumerate_lassos", "count_lassos",
    "powerset_letters", "singleton_letters", "default_letters",
    "Bounds", "DEFAULT_BOUNDS", "PassUpToBound", "Counterexample", "Verdict",
    "equivalent_bounded", "equivalent_many", "implies_bounded",
    "left_append_closed_bounded", "verify_counterexample",
]

@dataclass(frozen=True)
class LassoWord:
    prefix: tuple[frozenset[str], ...]
    period: tuple[frozenset[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(frozenset(x) for x in self.prefix))
        object.__setattr__(self, "period", tuple(frozenset(x) for x in self.period))
        if not self.period:
            raise ValueError("period of a lasso word must be nonempty")

    @classmethod
    def of(cls, prefix: Iterable[Iterable[str]], period: Iterable[Iterable[str]]) -> "LassoWord":
        return cls(tuple(frozenset(x) for x in prefix), tuple(frozenset(x) for x in period))

    @property
    def span(self) -> int:
        return len(self.prefix) + len(self.period)

    def normalize(self, i: int) -> int:
        """Map position ``i`` onto the canonical range ``0 .. span - 1``."""
        if i < 0:
            raise ValueError("positions are nonnegative")
        m = len(self.prefix)
        return i if i < m else m + (i - m) % len(self.period)

    def letter(self, i: int) -> frozenset[str]:
        j = self.normalize(i)
        m = len(self.prefix)
        return self.prefix[j] if j < m else self.period[j - m]

    def successor(self, j: int) -> int:
        return j + 1 if j + 1 < self.span else len(self.prefix)

    def prepend(self, letters: Sequence[Iterable[str]]) -> "LassoWord":
        return LassoWord(tuple(frozenset(x) for x in letters) + self.prefix, self.period)

    def letters_used(self) -> set[str]:
        return set().union(*self.prefix, *self.period)

    def __str__(self) -> str:
        return format_word(self)


# ---------------------------------------------------------------------------
# word syntax:  "a; {a,b} | c"  ==  {a}.{a,b}.({c})^omega
# ---------------------------------------------------------------------------

class WordSyntaxError(ValueError):
    pass


_IDENT = re.compile(r"[a-z][a-z0-9_]*\Z")


def _format_letter(letter: frozenset[str]) -> str:
    if len(letter) == 1:
        return next(iter(letter))
    return "{" + ",".join(sorted(letter)) + "}"


def format_word(w: LassoWord) -> str:
    pre = "; ".join(_format_letter(x) for x in w.prefix)
    per = "; ".join(_format_letter(x) for x in w.period)
    return f"{pre} | {per}" if pre else f"| {per}"


def _parse_letters(text: str) -> list[frozenset[str]]:
    text = text.strip()
    if not text:
        return []
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk.startswith("{") and chunk.endswith("}"):
            inner = chunk[1:-1].strip()
            names = [n.strip() for n in inner.split(",")] if inner else []
        else:
            names = [chunk]
        for n in names:
            if not _IDENT.match(n):
                raise WordSyntaxError(f"bad letter {chunk!r}")
        out.append(frozenset(names))
    return out


def parse_word(text: str) -> LassoWord:
    if text.count("|") != 1:
        raise WordSyntaxError("a word needs exactly one '|' separating prefix and period")
    pre, per = text.split("|")
    period = _parse_letters(per)
    if not period:
        raise WordSyntaxError("period must contain at least one letter")
    return LassoWord(tuple(_parse_letters(pre)), tuple(period))


# ---------------------------------------------------------------------------
# batched table evaluation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _shape_codes(k: int, length: int) -> np.ndarray:
    """All sequences of ``length`` letter indices below ``k``, in
    lexicographic order (first position most significant)."""
    idx = np.arange(k ** length, dtype=np.int64)
    codes = np.empty((k ** length, length), dtype=np.int64)
    for j in range(length):
        codes[:, j] = (idx // k ** (length - 1 - j)) % k
    codes.setflags(write=False)
    return codes


class _Batch:
    """Truth tables of formulas over a batch of lasso words sharing one shape.

    ``codes[w, j]`` indexes into ``letters`` and gives the letter of word
    ``w`` at canonical position ``j``.
    """

    def __init__(self, codes: np.ndarray, prefix_len: int, letters: Sequence[frozenset[str]]):
        self.codes = codes
        self.m = prefix_len
        self.n = codes.shape[1]
        self.letters = tuple(letters)
        self.succ = [j + 1 for j in range(self.n - 1)] + [self.m]
        self.memo: dict[Formula, np.ndarray] = {}

    def table(self, f: Formula) -> np.ndarray:
        t = self.memo.get(f)
        if t is None:
            t = self._compute(f)
            self.memo[f] = t
        return t

    def word(self, idx: int) -> LassoWord:
        seq = [self.letters[c] for c in self.codes[idx]]
        return LassoWord(tuple(seq[: self.m]), tuple(seq[self.m:]))

    def _fix(self, seed: bool, step) -> np.ndarray:
        val = np.full(self.codes.shape, seed, dtype=bool)
        changed = True
        while changed:
            changed = False
            for j in reversed(range(self.n)):
                new = step(j, val[:, self.succ[j]])
                if not np.array_equal(new, val[:, j]):
                    val[:, j] = new
                    changed = True
        return val

    def _compute(self, f: Formula) -> np.ndarray:
        shape = self.codes.shape
        if isinstance(f, TrueConst):
            return np.ones(shape, dtype=bool)
        if isinstance(f, FalseConst):
            return np.zeros(shape, dtype=bool)
        if isinstance(f, Atom):
            mask = np.array([f.name in x for x in self.letters], dtype=bool)
            return mask[self.codes]
        if isinstance(f, Not):
            return ~self.table(f.child)
        if isinstance(f, And):
            return self.table(f.left) & self.table(f.right)
        if isinstance(f, Or):
            return self.table(f.left) | self.table(f.right)
        if isinstance(f, Next):
            return self.table(f.child)[:, self.succ]
        if isinstance(f, Finally):
            a = self.table(f.child)
            return self._fix(False, lambda j, nxt: a[:, j] | nxt)
        if isinstance(f, Globally):
            a = self.table(f.child)
            return self._fix(True, lambda j, nxt: a[:, j] & nxt)
        if isinstance(f, Until):
            a, b = self.table(f.left), self.table(f.right)
            return self._fix(False, lambda j, nxt: b[:, j] | (a[:, j] & nxt))
        if isinstance(f, Release):
            a, b = self.table(f.left), self.table(f.right)
            return self._fix(True, lambda j, nxt: b[:, j] & (a[:, j] | nxt))
        raise TypeError(f"not a formula: {f!r}")


def evaluate(f: Formula, w: LassoWord, i: int = 0) -> bool:
    """Truth of ``f`` at position ``i`` of ``w`` via per-subformula tables."""
    letters = sorted(set(w.prefix + w.period), key=sorted)
    index = {x: k for k, x in enumerate(letters)}
    codes = np.array([[index[w.letter(j)] for j in range(w.span)]], dtype=np.int64)
    return bool(_Batch(codes, len(w.prefix), letters).table(f)[0, w.normalize(i)])


# ---------------------------------------------------------------------------
# reference evaluator: memoised top-down recursion
# ---------------------------------------------------------------------------

def eval_reference(f: Formula, w: LassoWord, i: int = 0) -> bool:
    """Independent evaluator used to cross-check :func:`evaluate`.

    Recurses over ``(subformula, position)`` pairs.  Re-entering a pair that
    is still being computed means the loop was closed without resolving it:
    the answer there is ``False`` for Until/Finally and ``True`` for
    Release/Globally.
    """
    memo: dict[tuple[int, int], bool] = {}
    active: set[tuple[int, int]] = set()

    def holds(g: Formula, j: int) -> bool:
        key = (id(g), j)
        if key in memo:
            return memo[key]
        if key in active:
            return isinstance(g, (Release, Globally))
        active.add(key)
        nxt = w.successor(j)
        if isinstance(g, TrueConst):
            r = True
        elif isinstance(g, FalseConst):
            r = False
        elif isinstance(g, Atom):
            r = g.name in w.letter(j)
        elif isinstance(g, Not):
            r = not holds(g.child, j)
        elif isinstance(g, And):
            r = holds(g.left, j) and holds(g.right, j)
        elif isinstance(g, Or):
            r = holds(g.left, j) or holds(g.right, j)
        elif isinstance(g, Next):
            r = holds(g.child, nxt)
        elif isinstance(g, Finally):
            r = holds(g.child, j) or holds(g, nxt)
        elif isinstance(g, Globally):
            r = holds(g.child, j) and holds(g, nxt)
        elif isinstance(g, Until):
            r = holds(g.right, j) or (holds(g.left, j) and holds(g, nxt))
        elif isinstance(g, Release):
            r = holds(g.right, j) and (holds(g.left, j) or holds(g, nxt))
        else:
            raise TypeError(f"not a formula: {g!r}")
        active.discard(key)
        memo[key] = r
        return r

    return holds(f, w.normalize(i))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def powerset_letters(props_: Iterable[str]) -> tuple[frozenset[str], ...]:
    """All subsets of ``props_``. Letter ``k`` contains the ``j``-th proposition
    (sorted order) iff bit ``j`` of ``k`` is set, so ``{}`` comes first."""
    alphabet = sorted(set(props_))
    return tuple(frozenset(p for b, p in enumerate(alphabet) if code >> b & 1)
                 for code in range(2 ** len(alphabet)))


def singleton_letters(props_: Iterable[str]) -> tuple[frozenset[str], ...]:
    """One letter per proposition: the propositions are mutually exclusive."""
    return tuple(frozenset([p]) for p in sorted(set(props_)))


def _shapes(max_prefix: int, max_period: int) -> Iterator[tuple[int, int]]:
    for m in range(max_prefix + 1):
        for p in range(1, max_period + 1):
            yield m, p


def enumerate_lassos(props_: Iterable[str], max_prefix: int, max_period: int,
                     letters: Sequence[frozenset[str]] | None = None) -> Iterator[LassoWord]:
    """Every lasso word within the bounds.

    Words are grouped by prefix length, then period length; within a group
    they come in lexicographic order of letter index.  Letters default to
    the powerset of ``props_``.
    """
    if max_period < 1:
        raise ValueError("max_period must be at least 1")
    letters = powerset_letters(props_) if letters is None else tuple(letters)
    for m, p in _shapes(max_prefix, max_period):
        for seq in itertools.product(letters, repeat=m + p):
            yield LassoWord(seq[:m], seq[m:])


def count_lassos(n_letters: int, max_prefix: int, max_period: int) -> int:
    return sum(n_letters ** (m + p) for m, p in _shapes(max_prefix, max_period))


# ---------------------------------------------------------------------------
# verdicts and bounded checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    max_prefix: int = 3
    max_period: int = 3
    max_props: int = 3
    max_append: int = 2

    def __post_init__(self):
        if self.max_prefix < 0 or self.max_period < 1 or self.max_props < 0 or self.max_append < 1:
            raise ValueError(f"invalid bounds {self}")

    def as_dict(self) -> dict:
        return {"max_prefix": self.max_prefix, "max_period": self.max_period,
                "max_props": self.max_props, "max_append": self.max_append}


DEFAULT_BOUNDS = Bounds()


@dataclass(frozen=True)
class PassUpToBound:
    """No counterexample among the enumerated words. Not a proof."""

    bounds: Bounds
    letters: tuple[frozenset[str], ...]
    words_checked: int
    ok: bool = field(default=True, init=False)

    def describe(self) -> str:
        b = self.bounds
        letters = ", ".join("{" + ",".join(sorted(x)) + "}" for x in self.letters)
        return (f"no counterexample up to bound (letters=[{letters}], "
                f"max_prefix={b.max_prefix}, max_period={b.max_period}, "
                f"{self.words_checked} words)")


@dataclass(frozen=True)
class Counterexample:
    """A witness word. For left-append checks ``appended`` is the prepended
    finite word ``v``; the violating word is then ``v . word``."""

    word: LassoWord
    tag: str
    appended: tuple[frozenset[str], ...] | None = None
    ok: bool = field(default=False, init=False)

    @property
    def full_word(self) -> LassoWord:
        return self.word if self.appended is None else self.word.prepend(self.appended)

    def describe(self) -> str:
        if self.appended is None:
            return f"counterexample {format_word(self.word)} ({self.tag})"
        v = "; ".join(_format_letter(x) for x in self.appended)
        return (f"counterexample w = {format_word(self.word)}, v = {v}, "
                f"v.w = {format_word(self.full_word)} ({self.tag})")


Verdict = PassUpToBound | Counterexample

LEFT_ONLY = "left-true-right-false"
RIGHT_ONLY = "left-false-right-true"
NOT_LAC = "w-accepted-vw-rejected"


def default_letters(formulas: Iterable[Formula], bounds: Bounds = DEFAULT_BOUNDS) -> tuple[frozenset[str], ...]:
    """Powerset of the propositions occurring in ``formulas``, keeping at most
    ``bounds.max_props`` of them (alphabetically first); the rest stay false."""
    names: set[str] = set()
    for f in formulas:
        names |= props(f)
    return powerset_letters(sorted(names)[: bounds.max_props])


def _batches(letters: Sequence[frozenset[str]], bounds: Bounds) -> Iterator[_Batch]:
    for m, p in _shapes(bounds.max_prefix, bounds.max_period):
        yield _Batch(_shape_codes(len(letters), m + p), m, letters)


def _passed(bounds: Bounds, letters: Sequence[frozenset[str]]) -> PassUpToBound:
    return PassUpToBound(bounds, tuple(letters),
                         count_lassos(len(letters), bounds.max_prefix, bounds.max_period))


def verify_counterexample(f: Formula, g: Formula | None, cx: Counterexample) -> bool:
    """Re-run :func:`evaluate` on a witness and confirm the discrepancy."""
    if cx.tag == NOT_LAC:
        return evaluate(f, cx.word, 0) and not evaluate(f, cx.full_word, 0)
    lf, lg = evaluate(f, cx.word, 0), evaluate(g, cx.word, 0)
    if cx.tag == LEFT_ONLY:
        return lf and not lg
    if cx.tag == RIGHT_ONLY:
        return lg and not lf
    return False


def _checked(cx: Counterexample, f: Formula, g: Formula | None) -> Counterexample:
    if not verify_counterexample(f, g, cx):
        raise AssertionError(f"bounded check produced a spurious witness: {cx.describe()}")
    return cx


def equivalent_many(f: Formula, others: Sequence[Formula], bounds: Bounds = DEFAULT_BOUNDS,
                    implication_only: bool = False,
                    letters: Sequence[frozenset[str]] | None = None) -> list[Verdict]:
    """Compare ``f`` against each formula in ``others`` in one enumeration pass.

    Tables for shared subformulas are computed once per word shape.
    """
    letters = default_letters([f, *others], bounds) if letters is None else tuple(letters)
    found: list[Counterexample | None] = [None] * len(others)
    for batch in _batches(letters, bounds):
        pending = [i for i, c in enumerate(found) if c is None and others[i] != f]
        if not pending:
            break
        left = batch.table(f)[:, 0]
        for i in pending:
            right = batch.table(others[i])[:, 0]
            bad = left & ~right if implication_only else left != right
            if bad.any():
                idx = int(np.argmax(bad))
                tag = LEFT_ONLY if left[idx] else RIGHT_ONLY
                found[i] = _checked(Counterexample(batch.word(idx), tag), f, others[i])
    return [c if c is not None else _passed(bounds, letters) for c in found]


def equivalent_bounded(f: Formula, g: Formula, bounds: Bounds = DEFAULT_BOUNDS,
                       letters: Sequence[frozenset[str]] | None = None) -> Verdict:
    """First enumerated word on which ``f`` and ``g`` disagree at position 0."""
    return equivalent_many(f, [g], bounds, letters=letters)[0]


def implies_bounded(f: Formula, g: Formula, bounds: Bounds = DEFAULT_BOUNDS,
                    letters: Sequence[frozenset[str]] | None = None) -> Verdict:
    """First enumerated word satisfying ``f`` but not ``g``."""
    return equivalent_many(f, [g], bounds, implication_only=True, letters=letters)[0]


def _postorder(f: Formula) -> list[Formula]:
    out: list[Formula] = []
    seen: set[Formula] = set()

    def walk(g: Formula) -> None:
        if g in seen:
            return
        for c in children(g):
            walk(c)
        seen.add(g)
        out.append(g)

    walk(f)
    return out


def _prepend_values(subs: list[Formula], start: dict[Formula, np.ndarray],
                    v: Sequence[frozenset[str]]) -> np.ndarray:
    """Truth of ``subs[-1]`` at position 0 of ``v . w`` for every ``w`` in a
    batch, given each subformula's truth at position 0 of ``w``.  The
    positions of ``v`` are filled in from the back, one letter at a time."""
    n = next(iter(start.values())).shape[0]
    nxt = start
    for letter in reversed(v):
        cur: dict[Formula, np.ndarray] = {}
        for g in subs:
            if isinstance(g, (TrueConst, FalseConst, Atom)):
                val = isinstance(g, TrueConst) or (isinstance(g, Atom) and g.name in letter)
                r = np.full(n, val, dtype=bool)
            elif isinstance(g, Not):
                r = ~cur[g.child]
            elif isinstance(g, And):
                r = cur[g.left] & cur[g.right]
            elif isinstance(g, Or):
                r = cur[g.left] | cur[g.right]
            elif isinstance(g, Next):
                r = nxt[g.child]
            elif isinstance(g, Finally):
                r = cur[g.child] | nxt[g]
            elif isinstance(g, Globally):
                r = cur[g.child] & nxt[g]
            elif isinstance(g, Until):
                r = cur[g.right] | (cur[g.left] & nxt[g])
            elif isinstance(g, Release):
                r = cur[g.right] & (cur[g.left] | nxt[g])
            else:
                raise TypeError(f"not a formula: {g!r}")
            cur[g] = r
        nxt = cur
    return nxt[subs[-1]]


def left_append_closed_bounded(f: Formula, bounds: Bounds = DEFAULT_BOUNDS,
                               max_append: int | None = None,
                               letters: Sequence[frozenset[str]] | None = None) -> Verdict:
    """Look for ``w`` with ``w |= f`` and ``v . w |/= f``, ``1 <= |v| <= max_append``.

    Candidates are ordered by ``w`` (enumeration order), then by ``|v|``,
    then lexicographically in ``v``.  ``v`` ranges over the same letters
    as ``w``.
    """
    max_append = bounds.max_append if max_append is None else max_append
    if max_append < 1:
        raise ValueError("max_append must be at least 1")
    letters = default_letters([f], bounds) if letters is None else tuple(letters)
    subs = _postorder(f)
    appendices = [v for a in range(1, max_append + 1) for v in itertools.product(letters, repeat=a)]
    for batch in _batches(letters, bounds):
        start = {g: batch.table(g)[:, 0] for g in subs}
        accepted = start[f]
        if not accepted.any():
            continue
        violations = [accepted & ~_prepend_values(subs, start, v) for v in appendices]
        any_bad = np.logical_or.reduce(violations)
        if any_bad.any():
            idx = int(np.argmax(any_bad))
            v = next(v for v, bad in zip(appendices, violations) if bad[idx])
            return _checked(Counterexample(batch.word(idx), NOT_LAC, tuple(v)), f, None)
    return _passed(bounds, letters)
