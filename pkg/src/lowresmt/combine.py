"""Merging per-source-language translations into one output.

Each line's candidates form a cluster; the kept translation is the one
maximizing the sum of similarities to all other candidates, i.e. the
cluster center.  Similarity is smoothed sentence BLEU averaged over both
directions, which is symmetric and reference-free within the cluster.
The O(k^2) pairwise cost is fine: clusters hold at most one candidate
per source language and sentences are short.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bleu import Tokens, sentence_bleu
from .corpus import ParallelText


@dataclass(frozen=True)
class TranslationCluster:
    """All candidate translations of one line, ordered by source language."""

    line_id: str
    candidates: tuple[tuple[str, tuple[str, ...]], ...]


@dataclass(frozen=True)
class CentroidChoice:
    line_id: str
    chosen_language: str
    chosen_tokens: tuple[str, ...]
    centrality: float


@dataclass(frozen=True)
class CombineReport:
    choices: tuple[CentroidChoice, ...]
    histogram: dict[str, int]


def similarity(a: Tokens, b: Tokens) -> float:
    """Symmetric similarity in [0, 1]: sentence BLEU averaged both ways."""
    if not a and not b:
        return 1.0
    return 0.5 * (sentence_bleu(a, b) + sentence_bleu(b, a))


def select_center(cluster: TranslationCluster) -> CentroidChoice:
    """Pick the candidate with the highest similarity sum to the rest.

    Ties break toward the first candidate in input order; a singleton
    cluster returns its only candidate with centrality 0.
    """
    candidates = cluster.candidates
    if not candidates:
        raise ValueError(f"empty cluster for line {cluster.line_id!r}")
    k = len(candidates)
    if k == 1:
        language, tokens = candidates[0]
        return CentroidChoice(cluster.line_id, language, tuple(tokens), 0.0)
    sims = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            value = similarity(candidates[i][1], candidates[j][1])
            sims[i][j] = value
            sims[j][i] = value
    best_index = 0
    best_score = -1.0
    for i in range(k):
        score = sum(sims[i])
        if score > best_score:
            best_score = score
            best_index = i
    language, tokens = candidates[best_index]
    return CentroidChoice(cluster.line_id, language, tuple(tokens), best_score)


def combine_corpus(
    translations: Sequence[ParallelText], *, output_language: str = "combined"
) -> tuple[ParallelText, CombineReport]:
    """Per-line cluster-center selection over line-aligned translations.

    All inputs must carry exactly the same line ids; the first ragged id
    is named in the error.  The report records the chosen language per
    line and the per-language selection histogram.
    """
    if not translations:
        raise ValueError("no translations to combine")
    reference = translations[0]
    ids = list(reference.lines)
    for text in translations[1:]:
        for lid in ids:
            if lid not in text.lines:
                raise ValueError(f"{text.language!r} is missing line id {lid!r}")
        for lid in text.lines:
            if lid not in reference.lines:
                raise ValueError(f"{text.language!r} has extra line id {lid!r}")
    histogram = {text.language: 0 for text in translations}
    choices: list[CentroidChoice] = []
    lines: dict[str, tuple[str, ...]] = {}
    for lid in ids:
        cluster = TranslationCluster(
            line_id=lid,
            candidates=tuple((text.language, text.lines[lid]) for text in translations),
        )
        choice = select_center(cluster)
        choices.append(choice)
        histogram[choice.chosen_language] += 1
        lines[lid] = choice.chosen_tokens
    combined = ParallelText(language=output_language, lines=lines)
    return combined, CombineReport(choices=tuple(choices), histogram=histogram)


def write_combine_report(report: CombineReport, path: str | Path) -> None:
    """Emit line_id<TAB>chosen_language<TAB>centrality rows."""
    rows = [
        f"{choice.line_id}\t{choice.chosen_language}\t{choice.centrality!r}"
        for choice in report.choices
    ]
    Path(path).write_text("".join(row + "\n" for row in rows), encoding="utf-8")
