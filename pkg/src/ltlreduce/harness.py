"""Random formula generation and differential soundness runs.

Every formula is reduced under all three classifier variants and each
result is compared with the original by the bounded oracle.  A discrepancy
becomes a :class:`DivergenceRecord`.  Divergences are expected for the
buggy variant and are a hard failure for the other two.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .classify import Variant, classify_all
from .reduce import ReductionTrace, reduce, replay
from .semantics import (
    DEFAULT_BOUNDS, Bounds, Counterexample, Verdict, equivalent_bounded,
    equivalent_many, evaluate, format_word,
)
from .syntax import (
    And, Atom, FalseConst, Finally, Formula, Globally, Next, Not, Or,
    ParseError, Release, TrueConst, Until, format_formula, parse, replace_at,
)

EXIT_CLEAN = 0
EXIT_BUGGY_DIVERGENCE = 3
EXIT_UNSOUND_FIX = 4

LEAF_KINDS = ("atom", "true", "false")
UNARY_KINDS = {"not": Not, "next": Next, "finally": Finally, "globally": Globally}
BINARY_KINDS = {"and": And, "or": Or, "until": Until, "release": Release}

# temporal operators get twice the weight of propositional ones
DEFAULT_WEIGHTS = {
    "atom": 3.0, "true": 0.25, "false": 0.25,
    "not": 1.0, "and": 1.0, "or": 1.0,
    "next": 2.0, "finally": 2.0, "globally": 2.0, "until": 2.0, "release": 2.0,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 42
    count: int = 1000
    max_depth: int = 6
    props: tuple[str, ...] = ("a", "b", "c")
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    bounds: Bounds = DEFAULT_BOUNDS

    def validate(self) -> None:
        if self.count < 1:
            raise ConfigError("count must be at least 1")
        if self.max_depth < 1:
            raise ConfigError("max_depth must be at least 1")
        if not self.props:
            raise ConfigError("props must not be empty")
        unknown = set(self.weights) - set(DEFAULT_WEIGHTS)
        if unknown:
            raise ConfigError(f"unknown operator weights: {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ConfigError("weights must be nonnegative")
        if not any(self.weights.get(k, 0) > 0 for k in LEAF_KINDS):
            raise ConfigError("at least one leaf kind needs a positive weight")

    def as_dict(self) -> dict:
        return {
            "seed": self.seed, "count": self.count, "max_depth": self.max_depth,
            "props": list(self.props),
            "weights": {k: self.weights.get(k, 0.0) for k in DEFAULT_WEIGHTS},
            "bounds": self.bounds.as_dict(),
        }


def _pick(rng: random.Random, kinds: Sequence[str], weights: Mapping[str, float]) -> str:
    ws = [weights.get(k, 0.0) for k in kinds]
    return rng.choices(kinds, weights=ws)[0]


def gen_formula(seed: int, config: FuzzConfig = FuzzConfig()) -> Formula:
    """Random formula of depth at most ``config.max_depth``; a pure function of
    ``(seed, config)``. The output need not be in NNF."""
    config.validate()
    rng = random.Random(seed)
    all_kinds = (*LEAF_KINDS, *UNARY_KINDS, *BINARY_KINDS)

    def gen(budget: int) -> Formula:
        kind = _pick(rng, LEAF_KINDS if budget == 1 else all_kinds, config.weights)
        if kind == "atom":
            return Atom(rng.choice(config.props))
        if kind == "true":
            return TrueConst()
        if kind == "false":
            return FalseConst()
        if kind in UNARY_KINDS:
            return UNARY_KINDS[kind](gen(budget - 1))
        left = gen(budget - 1)
        return BINARY_KINDS[kind](left, gen(budget - 1))

    return gen(config.max_depth)


def case_seeds(config: FuzzConfig) -> list[int]:
    rng = random.Random(config.seed)
    return [rng.getrandbits(64) for _ in range(config.count)]


def gen_suite(config: FuzzConfig) -> list[Formula]:
    config.validate()
    return [gen_formula(s, config) for s in case_seeds(config)]


# ---------------------------------------------------------------------------
# differential check
# ---------------------------------------------------------------------------

@dataclass
class DivergenceRecord:
    original: Formula
    variant: Variant
    reduced: Formula
    trace: ReductionTrace
    counterexample: Counterexample
    pivot: Formula | None
    pivot_flags: dict[Variant, bool]

    def verify(self) -> bool:
        """Replay the trace and re-run the oracle on the witness."""
        if replay(self.trace) != self.reduced:
            return False
        w = self.counterexample.word
        return evaluate(self.original, w, 0) != evaluate(self.reduced, w, 0)

    def to_dict(self) -> dict:
        return {
            "formula": format_formula(self.original),
            "variant": str(self.variant),
            "reduced": format_formula(self.reduced),
            "counterexample_word": format_word(self.counterexample.word),
            "pivot": None if self.pivot is None else format_formula(self.pivot),
            "pivot_pure_eventuality": {str(v): b for v, b in self.pivot_flags.items()},
        }


def _pivot(original: Formula, trace: ReductionTrace, cx: Counterexample) -> Formula | None:
    """The operand ``psi`` of the first step that changes the truth value on the witness."""
    w = cx.word
    target = evaluate(original, w, 0)
    g = trace.normalized
    for step in trace.steps:
        g = replace_at(g, step.path, step.after)
        if evaluate(g, w, 0) != target:
            return step.after
    return None


@dataclass
class VariantOutcome:
    reduced: Formula
    trace: ReductionTrace
    verdict: Verdict


@dataclass
class CaseResult:
    index: int
    formula: Formula
    outcomes: dict[Variant, VariantOutcome]
    final_effect: Verdict

    @property
    def final_effect_syntactic(self) -> bool:
        return self.outcomes[Variant.CORRECTED].reduced == self.outcomes[Variant.PATCHED].reduced

    def records(self) -> list[DivergenceRecord]:
        out = []
        for v, o in self.outcomes.items():
            if isinstance(o.verdict, Counterexample):
                pivot = _pivot(self.formula, o.trace, o.verdict)
                flags = classify_all(pivot) if pivot is not None else {}
                out.append(DivergenceRecord(self.formula, v, o.reduced, o.trace, o.verdict, pivot, flags))
        return out


def check_formula(f: Formula, bounds: Bounds = DEFAULT_BOUNDS, index: int = 0) -> CaseResult:
    reductions = {v: reduce(f, v) for v in Variant}
    verdicts = equivalent_many(f, [r for r, _ in reductions.values()], bounds)
    outcomes = {v: VariantOutcome(r, t, verdict)
                for (v, (r, t)), verdict in zip(reductions.items(), verdicts)}
    final = equivalent_bounded(outcomes[Variant.CORRECTED].reduced,
                               outcomes[Variant.PATCHED].reduced, bounds)
    return CaseResult(index, f, outcomes, final)


@dataclass
class SuiteReport:
    config: dict
    cases: list[CaseResult]
    records: list[DivergenceRecord]

    def divergences(self, variant: Variant) -> list[DivergenceRecord]:
        return [r for r in self.records if r.variant is variant]

    @property
    def exit_code(self) -> int:
        if self.divergences(Variant.CORRECTED) or self.divergences(Variant.PATCHED):
            return EXIT_UNSOUND_FIX
        if self.divergences(Variant.BUGGY):
            return EXIT_BUGGY_DIVERGENCE
        return EXIT_CLEAN

    def summary(self) -> dict:
        n = len(self.cases)
        variants = {}
        for v in Variant:
            outs = [c.outcomes[v] for c in self.cases]
            variants[str(v)] = {
                "divergences": len(self.divergences(v)),
                "rewritten": sum(1 for o in outs if o.trace.steps),
                "steps": sum(len(o.trace.steps) for o in outs),
            }
        equal = sum(1 for c in self.cases if c.final_effect_syntactic)
        status = {EXIT_CLEAN: "clean", EXIT_BUGGY_DIVERGENCE: "buggy-divergences",
                  EXIT_UNSOUND_FIX: "unsound-fix"}[self.exit_code]
        return {
            "formulas": n,
            "variants": variants,
            "final_effect": {
                "compared": n,
                "bounded_equivalent": sum(1 for c in self.cases if c.final_effect.ok),
                "syntactically_equal": equal,
                "syntactic_equality_rate": round(equal / n, 6) if n else None,
            },
            "status": status,
        }

    def to_dict(self) -> dict:
        cases = []
        for c in self.cases:
            for v, o in c.outcomes.items():
                entry = {
                    "formula": format_formula(c.formula),
                    "variant": str(v),
                    "reduced": format_formula(o.reduced),
                    "equivalent": o.verdict.ok,
                }
                if isinstance(o.verdict, Counterexample):
                    entry["counterexample_word"] = format_word(o.verdict.word)
                    entry["trace"] = o.trace.lines()
                cases.append(entry)
        return {"config": self.config, "cases": cases, "summary": self.summary()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_tsv(self) -> str:
        """One tab-separated row per (formula, variant) pair."""
        rows = ["index\tvariant\tformula\treduced\tequivalent\tcounterexample_word"]
        for c in self.cases:
            for v, o in c.outcomes.items():
                cx = format_word(o.verdict.word) if isinstance(o.verdict, Counterexample) else ""
                rows.append(f"{c.index}\t{v}\t{format_formula(c.formula)}\t"
                            f"{format_formula(o.reduced)}\t{str(o.verdict.ok).lower()}\t{cx}")
        return "\n".join(rows)


def run_suite(formulas: Sequence[Formula], bounds: Bounds = DEFAULT_BOUNDS,
              config: dict | None = None) -> SuiteReport:
    cases = [check_formula(f, bounds, i) for i, f in enumerate(formulas)]
    records = [r for c in cases for r in c.records()]
    return SuiteReport(config or {}, cases, records)


def fuzz(config: FuzzConfig) -> SuiteReport:
    return run_suite(gen_suite(config), config.bounds, config.as_dict())


def fuzz_differential(config: FuzzConfig) -> list[DivergenceRecord]:
    return fuzz(config).records


# ---------------------------------------------------------------------------
# corpus files
# ---------------------------------------------------------------------------

class CorpusError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def read_corpus(path: str | Path) -> list[Formula]:
    """One formula per line; blank lines and ``#`` comments are skipped."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CorpusError(str(path), 0, f"cannot read corpus: {exc.strerror}") from exc
    formulas = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            formulas.append(parse(line))
        except ParseError as exc:
            raise CorpusError(str(path), lineno, str(exc)) from exc
    return formulas


def run_corpus(path: str | Path, bounds: Bounds = DEFAULT_BOUNDS) -> SuiteReport:
    formulas = read_corpus(path)
    return run_suite(formulas, bounds, {"corpus": str(path), "bounds": bounds.as_dict()})
