"""Syntactic pure-eventuality classes.

Three competing definitions are supported. They share every clause except
the one for ``U``:

* ``BUGGY``      ``p1 U g``   left operand pure eventuality, right arbitrary
* ``CORRECTED``  ``p1 U p2``  both operands pure eventuality
* ``PATCHED``    ``g U p1``   left arbitrary, right operand pure eventuality

Common clauses: ``F phi`` for any ``phi``; ``p1 | p2``, ``p1 & p2``,
``p1 R p2``, ``G p1`` and ``X p1`` with pure eventuality operands.
Atoms, constants and negated atoms never qualify.
"""

from __future__ import annotations

import enum

from .syntax import (
    And, Atom, Finally, Formula, Globally, Next, Not, Or, Release, Until,
    format_formula, iter_subformulas,
)

__all__ = ["Variant", "NotInNNFError", "is_pure_eventuality", "classify_all"]


class Variant(enum.Enum):
    BUGGY = "buggy"
    CORRECTED = "corrected"
    PATCHED = "patched"

    def __str__(self) -> str:
        return self.value


class NotInNNFError(ValueError):
    """Raised when classification is asked about a formula outside NNF."""

    def __init__(self, formula: Formula, path: tuple[int, ...], node: Not):
        self.formula = formula
        self.path = path
        self.node = node
        super().__init__(
            f"formula is not in negation normal form: negation {format_formula(node)} "
            f"at path {list(path)} is applied to a non-atom"
        )


def _check_nnf(f: Formula) -> None:
    for path, sub in iter_subformulas(f):
        if isinstance(sub, Not) and not isinstance(sub.child, Atom):
            raise NotInNNFError(f, path, sub)


def _pe(f: Formula, variant: Variant) -> bool:
    if isinstance(f, Finally):
        return True
    if isinstance(f, (And, Or, Release)):
        return _pe(f.left, variant) and _pe(f.right, variant)
    if isinstance(f, (Globally, Next)):
        return _pe(f.child, variant)
    if isinstance(f, Until):
        if variant is Variant.BUGGY:
            return _pe(f.left, variant)
        if variant is Variant.CORRECTED:
            return _pe(f.left, variant) and _pe(f.right, variant)
        return _pe(f.right, variant)
    return False


def is_pure_eventuality(f: Formula, variant: Variant) -> bool:
    """Decide membership of NNF formula ``f`` in the class chosen by ``variant``.

    Raises :class:`NotInNNFError` naming the first offending negation if
    ``f`` is not in negation normal form.
    """
    _check_nnf(f)
    return _pe(f, Variant(variant))


def classify_all(f: Formula) -> dict[Variant, bool]:
    return {v: is_pure_eventuality(f, v) for v in Variant}
