"""Pure-eventuality LTL reduction under three classifier variants, with a
bounded lasso-word oracle for checking soundness."""

from .classify import NotInNNFError, Variant, classify_all, is_pure_eventuality
from .reduce import ReductionTrace, Step, TraceError, reduce, replay
from .semantics import (
    DEFAULT_BOUNDS, Bounds, Counterexample, LassoWord, PassUpToBound,
    enumerate_lassos, equivalent_bounded, eval_reference, evaluate,
    implies_bounded, left_append_closed_bounded, parse_word, format_word,
)
from .syntax import Formula, ParseError, format_formula, is_nnf, nnf, parse, size

__version__ = "0.1.0"
