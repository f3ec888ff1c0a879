"""Figures for suite reports, written next to the tabular/JSON output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .classify import Variant  # noqa: E402
from .harness import SuiteReport  # noqa: E402
from .syntax import size  # noqa: E402

COLORS = {Variant.BUGGY: "#c0392b", Variant.CORRECTED: "#2471a3", Variant.PATCHED: "#229954"}

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.fontsize": 8,
    "savefig.dpi": 150,
    # fixed metadata keeps the files byte-stable across runs
    "svg.hashsalt": "ltlreduce",
}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else {"Date": None})
    plt.close(fig)
    return path


def plot_divergences(report: SuiteReport, path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 2.8))
        variants = list(Variant)
        rewritten = [sum(1 for c in report.cases if c.outcomes[v].trace.steps) for v in variants]
        diverged = [len(report.divergences(v)) for v in variants]
        xs = range(len(variants))
        ax.bar([x - 0.2 for x in xs], rewritten, width=0.4, color="#bbbbbb", label="rewritten")
        ax.bar([x + 0.2 for x in xs], diverged, width=0.4,
               color=[COLORS[v] for v in variants], label="not equivalent")
        for x, d in zip(xs, diverged):
            ax.annotate(str(d), (x + 0.2, d), ha="center", va="bottom", fontsize=8)
        ax.set_xticks(list(xs), [str(v) for v in variants])
        ax.set_ylabel("formulas")
        ax.set_title(f"{len(report.cases)} formulas", fontsize=9)
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_size_reduction(report: SuiteReport, path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 2.8))
        removed = {v: [size(c.outcomes[v].trace.normalized) - size(c.outcomes[v].reduced)
                       for c in report.cases] for v in Variant}
        top = max((max(r, default=0) for r in removed.values()), default=0)
        bins = [b - 0.5 for b in range(top + 2)]
        for v in Variant:
            ax.hist(removed[v], bins=bins, histtype="step", color=COLORS[v], label=str(v), linewidth=1.2)
        ax.set_yscale("log")
        ax.set_xlabel("nodes removed by reduction")
        ax.set_ylabel("formulas")
        ax.legend(frameon=False)
        return _save(fig, path)


def render_report_figures(report: SuiteReport, outdir: str | Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        plot_divergences(report, outdir / "divergences.png"),
        plot_size_reduction(report, outdir / "size_reduction.png"),
    ]
