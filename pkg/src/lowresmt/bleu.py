"""Corpus and sentence BLEU on whitespace tokens.

Case sensitive, four-gram, single reference per line.  The corpus score
follows the standard modified-precision formulation with a brevity
penalty; the sentence score add-one smooths every order above unigram so
short hypotheses keep a usable signal.  Scores are in [0, 1].
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

MAX_ORDER = 4

Tokens = Sequence[str]


@dataclass(frozen=True)
class BleuScore:
    value: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float


def _ngrams(tokens: Tokens, order: int) -> Counter:
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def _clipped_matches(hypothesis: Tokens, reference: Tokens, order: int) -> int:
    ref_counts = _ngrams(reference, order)
    return sum(min(count, ref_counts[gram]) for gram, count in _ngrams(hypothesis, order).items())


def brevity_penalty(hyp_len: int, ref_len: int) -> float:
    if hyp_len == 0:
        return 0.0
    if hyp_len >= ref_len:
        return 1.0
    return math.exp(1.0 - ref_len / hyp_len)


def corpus_bleu(hypotheses: Sequence[Tokens], references: Sequence[Tokens]) -> BleuScore:
    """Four-gram corpus BLEU, pooled modified precisions, one reference per line.

    Orders whose n-gram total is zero (hypotheses shorter than the order)
    drop out of the geometric mean; any remaining zero precision yields 0.
    """
    if len(hypotheses) != len(references):
        raise ValueError(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not hypotheses:
        raise ValueError("empty corpus")
    matches = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for order in range(1, MAX_ORDER + 1):
            totals[order - 1] += max(len(hyp) - order + 1, 0)
            matches[order - 1] += _clipped_matches(hyp, ref, order)
    precisions = tuple(m / t if t else 0.0 for m, t in zip(matches, totals))
    bp = brevity_penalty(hyp_len, ref_len)
    usable = [(m, t) for m, t in zip(matches, totals) if t > 0]
    if not usable or any(m == 0 for m, _ in usable):
        value = 0.0
    else:
        value = bp * math.exp(sum(math.log(m / t) for m, t in usable) / len(usable))
    return BleuScore(value=value, precisions=precisions, brevity_penalty=bp)


def sentence_bleu(hypothesis: Tokens, reference: Tokens) -> float:
    """Smoothed four-gram sentence BLEU; identical inputs score 1.0.

    Unigram precision is unsmoothed (no shared token means 0); orders
    above unigram are add-one smoothed on both counts.
    """
    if not hypothesis and not reference:
        return 1.0
    if not hypothesis or not reference:
        return 0.0
    log_sum = 0.0
    for order in range(1, MAX_ORDER + 1):
        match = _clipped_matches(hypothesis, reference, order)
        total = max(len(hypothesis) - order + 1, 0)
        if order == 1:
            precision = match / total
        else:
            precision = (match + 1) / (total + 1)
        if precision == 0.0:
            return 0.0
        log_sum += math.log(precision)
    return brevity_penalty(len(hypothesis), len(reference)) * math.exp(log_sum / MAX_ORDER)
