"""Pure-eventuality reduction: ``phi U psi -> psi`` and ``F psi -> psi``.

Both rules fire only when ``psi`` is a pure eventuality under the chosen
classifier variant. Rewriting is leftmost-innermost and runs to a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classify import Variant, is_pure_eventuality
from .syntax import (
    Finally, Formula, Until, format_formula, is_nnf, iter_subformulas, nnf,
    replace_at, subformula_at,
)

__all__ = ["UNTIL_RULE", "FINALLY_RULE", "Step", "ReductionTrace", "TraceError", "reduce", "replay"]

UNTIL_RULE = "UntilRule"
FINALLY_RULE = "FinallyRule"


@dataclass(frozen=True)
class Step:
    rule: str
    path: tuple[int, ...]
    before: Formula
    after: Formula

    def __str__(self) -> str:
        path = ".".join(map(str, self.path)) or "."
        return f"{self.rule} {path} {format_formula(self.before)} => {format_formula(self.after)}"


@dataclass
class ReductionTrace:
    """Record of one reduction run.

    ``initial`` is the formula as given; ``normalized`` is its NNF, which
    is where the steps start (identical to ``initial`` for NNF input).
    """

    initial: Formula
    normalized: Formula
    variant: Variant
    steps: list[Step] = field(default_factory=list)
    final: Formula | None = None

    @property
    def normalized_input(self) -> bool:
        return self.normalized != self.initial

    def lines(self) -> list[str]:
        return [str(s) for s in self.steps]


class TraceError(ValueError):
    """A trace does not replay; it was built incorrectly or tampered with."""


def _rule_result(node: Formula) -> tuple[str, Formula] | None:
    if isinstance(node, Until):
        return UNTIL_RULE, node.right
    if isinstance(node, Finally):
        return FINALLY_RULE, node.child
    return None


def _find_redex(f: Formula, variant: Variant) -> Step | None:
    for path, node in iter_subformulas(f):
        hit = _rule_result(node)
        if hit is not None and is_pure_eventuality(hit[1], variant):
            return Step(hit[0], path, node, hit[1])
    return None


def reduce(f: Formula, variant: Variant) -> tuple[Formula, ReductionTrace]:
    variant = Variant(variant)
    g = f if is_nnf(f) else nnf(f)
    trace = ReductionTrace(initial=f, normalized=g, variant=variant)
    while (step := _find_redex(g, variant)) is not None:
        g = replace_at(g, step.path, step.after)
        trace.steps.append(step)
    trace.final = g
    return g, trace


def replay(trace: ReductionTrace) -> Formula:
    """Re-apply the steps of ``trace`` and return the resulting formula.

    Every step is validated: the path must exist, the subformula there must
    equal the recorded ``before``, and ``after`` must be what the rule
    produces. The result must equal the recorded final formula.
    """
    if nnf(trace.initial) != trace.normalized:
        raise TraceError("normalized formula is not the NNF of the initial formula")
    g = trace.normalized
    for k, step in enumerate(trace.steps):
        try:
            node = subformula_at(g, step.path)
        except IndexError as exc:
            raise TraceError(f"step {k}: {exc}") from None
        if node != step.before:
            raise TraceError(
                f"step {k}: expected {format_formula(step.before)} at path {list(step.path)}, "
                f"found {format_formula(node)}"
            )
        expected = _rule_result(node)
        if expected is None or expected != (step.rule, step.after):
            raise TraceError(f"step {k}: {step.rule} does not rewrite {format_formula(node)} "
                             f"into {format_formula(step.after)}")
        g = replace_at(g, step.path, step.after)
    if trace.final is not None and g != trace.final:
        raise TraceError(f"replay produced {format_formula(g)}, trace records "
                         f"{format_formula(trace.final)}")
    return g
