"""Lexical translation model trained by expectation-maximization.

The model family is deliberately small: a translation table t(target |
source) over co-occurring word pairs, a dedicated null source token, and
a fixed null-alignment prior.  Given a sentence pair, each target token
is generated by one source token or by null; the prior puts ``p_null``
mass on null and spreads the rest uniformly over real source positions.
Length conditioning is pooled over all sentence lengths, which is the
right trade at the ~1,000-line corpus sizes this is built for.

Hard (Viterbi) alignments from the trained table drive the per-word
fertility and distortion statistics that the ranking metrics consume.
Everything here is deterministic: uniform initialization, fixed
iteration counts, no sampling.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

NULL_TOKEN = "<null>"

Tokens = Sequence[str]
Bitext = Sequence[tuple[Tokens, Tokens]]


@dataclass
class AlignmentModel:
    """Translation table plus the constants needed to decode with it.

    Every row of ``ttable`` (including the null token's row) is a
    probability distribution over target word types.
    """

    ttable: dict[str, dict[str, float]]
    p_null: float = 0.08
    epsilon: float = 1e-9
    iterations: int = 0
    log_likelihoods: list[float] = field(default_factory=list)

    def prob(self, source: str, target: str) -> float:
        return self.ttable.get(source, {}).get(target, 0.0)


@dataclass(frozen=True)
class SentenceAlignment:
    """Hard alignment links as (source index, target index) pairs.

    Each target token carries at most one link; targets decoded to null
    are simply absent.  Links are ordered by target index.
    """

    links: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class WordStatistics:
    """Empirical rates for one source word type over its aligned occurrences."""

    n_obs: int
    p_fert1: float
    p_dist0: float
    p_joint: float


@dataclass(frozen=True)
class AlignmentStatistics:
    """Per-word fertility/distortion rates plus the source length histogram."""

    words: dict[str, WordStatistics]
    source_lengths: dict[int, int]


def _usable_pairs(bitext: Bitext) -> list[tuple[Tokens, Tokens]]:
    pairs = [(src, tgt) for src, tgt in bitext if src and tgt]
    skipped = len(bitext) - len(pairs)
    if skipped:
        log.warning("skipped %d sentence pair(s) with an empty side", skipped)
    if not pairs:
        raise ValueError("no usable sentence pairs (all had an empty side)")
    return pairs


def _log_likelihood(model: AlignmentModel, pairs: Sequence[tuple[Tokens, Tokens]]) -> float:
    total = 0.0
    null_row = model.ttable.get(NULL_TOKEN, {})
    for src, tgt in pairs:
        prior_real = (1.0 - model.p_null) / len(src)
        for t in tgt:
            p = model.p_null * null_row.get(t, 0.0)
            for s in src:
                p += prior_real * model.ttable.get(s, {}).get(t, 0.0)
            total += math.log(max(p, 1e-300))
    return total


def train_alignment(
    bitext: Bitext,
    iterations: int = 10,
    *,
    p_null: float = 0.08,
    epsilon: float = 1e-9,
) -> AlignmentModel:
    """EM-train the lexical table on a bitext, source side conditioning.

    Rows start uniform over co-occurring target words (the null row
    co-occurs with everything), so the first expectation step is well
    defined without smoothing.  The per-iteration corpus log-likelihood
    is recorded on the returned model and is non-decreasing.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not 0.0 < p_null < 1.0:
        raise ValueError("p_null must lie strictly between 0 and 1")
    pairs = _usable_pairs(bitext)

    cooc: dict[str, dict[str, None]] = {NULL_TOKEN: {}}
    for src, tgt in pairs:
        null_row = cooc[NULL_TOKEN]
        for t in tgt:
            null_row[t] = None
        for s in src:
            row = cooc.setdefault(s, {})
            for t in tgt:
                row[t] = None
    ttable = {s: {t: 1.0 / len(row) for t in row} for s, row in cooc.items()}

    model = AlignmentModel(
        ttable=ttable, p_null=p_null, epsilon=epsilon, iterations=iterations
    )
    model.log_likelihoods.append(_log_likelihood(model, pairs))
    for _ in range(iterations):
        counts: dict[str, dict[str, float]] = {}
        for src, tgt in pairs:
            prior_real = (1.0 - p_null) / len(src)
            null_row = ttable[NULL_TOKEN]
            for t in tgt:
                null_score = p_null * null_row.get(t, 0.0)
                scores = [prior_real * ttable[s].get(t, 0.0) for s in src]
                denom = null_score + sum(scores)
                if denom <= 0.0:
                    continue
                _bump(counts, NULL_TOKEN, t, null_score / denom)
                for s, score in zip(src, scores):
                    if score > 0.0:
                        _bump(counts, s, t, score / denom)
        for s, row in counts.items():
            total = sum(row.values())
            if total > 0.0:
                ttable[s] = {t: c / total for t, c in row.items()}
        model.log_likelihoods.append(_log_likelihood(model, pairs))
    return model


def _bump(counts: dict[str, dict[str, float]], s: str, t: str, value: float) -> None:
    row = counts.setdefault(s, {})
    row[t] = row.get(t, 0.0) + value


def viterbi_align(model: AlignmentModel, pair: tuple[Tokens, Tokens]) -> SentenceAlignment:
    """Link each target token to its argmax source token, or to null.

    Ties between real source tokens break toward the lowest index.  The
    null option's translation probability is floored at epsilon, so a
    target word the model has never seen falls to null rather than to an
    arbitrary source token.
    """
    src, tgt = pair
    prior_real = (1.0 - model.p_null) / len(src) if src else 0.0
    null_row = model.ttable.get(NULL_TOKEN, {})
    links: list[tuple[int, int]] = []
    for j, t in enumerate(tgt):
        best_score = model.p_null * max(null_row.get(t, 0.0), model.epsilon)
        best_i = -1
        for i, s in enumerate(src):
            score = prior_real * model.ttable.get(s, {}).get(t, 0.0)
            if score > best_score:
                best_score = score
                best_i = i
        if best_i >= 0:
            links.append((best_i, j))
    return SentenceAlignment(links=tuple(links))


def collect_statistics(model: AlignmentModel, bitext: Bitext) -> AlignmentStatistics:
    """Viterbi-align every pair and tally per-word fertility and distortion.

    For a target token linked to source position i, with the previous
    linked target token at source position i', distortion is
    (i - i') - 1; a sentence-initial link uses i' = -1, so a fully
    monotone alignment has distortion 0 everywhere.  A source occurrence
    counts toward p_dist0 when every token linked to it continues
    monotonically, which keeps p_joint <= min(p_fert1, p_dist0).
    Word types that never receive a link get an n_obs = 0 entry with all
    rates 0.
    """
    tallies: dict[str, list[int]] = {}
    lengths: Counter = Counter()
    for src, tgt in bitext:
        if not src or not tgt:
            continue
        lengths[len(src)] += 1
        for s in src:
            tallies.setdefault(s, [0, 0, 0, 0])
        alignment = viterbi_align(model, (src, tgt))
        distortion: dict[int, int] = {}
        by_source: dict[int, list[int]] = {}
        prev_i = -1
        for i, j in alignment.links:
            distortion[j] = (i - prev_i) - 1
            prev_i = i
            by_source.setdefault(i, []).append(j)
        for i, linked in by_source.items():
            tally = tallies[src[i]]
            tally[0] += 1
            monotone = all(distortion[j] == 0 for j in linked)
            if len(linked) == 1:
                tally[1] += 1
                if monotone:
                    tally[3] += 1
            if monotone:
                tally[2] += 1
    words = {
        word: WordStatistics(
            n_obs=n,
            p_fert1=f / n if n else 0.0,
            p_dist0=d / n if n else 0.0,
            p_joint=j / n if n else 0.0,
        )
        for word, (n, f, d, j) in tallies.items()
    }
    return AlignmentStatistics(words=words, source_lengths=dict(lengths))


def save_model(model: AlignmentModel, path: str | Path) -> None:
    """Serialize as header lines plus source<TAB>target<TAB>prob rows."""
    rows = [
        f"#p_null\t{model.p_null!r}",
        f"#epsilon\t{model.epsilon!r}",
        f"#iterations\t{model.iterations}",
    ]
    for s in sorted(model.ttable):
        row = model.ttable[s]
        for t in sorted(row):
            rows.append(f"{s}\t{t}\t{row[t]!r}")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> AlignmentModel:
    path = Path(path)
    ttable: dict[str, dict[str, float]] = {}
    p_null, epsilon, iterations = 0.08, 1e-9, 0
    for number, row in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not row:
            continue
        fields = row.split("\t")
        if fields[0] == "#p_null":
            p_null = float(fields[1])
        elif fields[0] == "#epsilon":
            epsilon = float(fields[1])
        elif fields[0] == "#iterations":
            iterations = int(fields[1])
        elif len(fields) == 3:
            ttable.setdefault(fields[0], {})[fields[1]] = float(fields[2])
        else:
            raise ValueError(f"{path}:{number}: malformed model row")
    if not ttable:
        raise ValueError(f"{path}: no translation rows")
    return AlignmentModel(
        ttable=ttable, p_null=p_null, epsilon=epsilon, iterations=iterations
    )


def save_statistics(stats: AlignmentStatistics, path: str | Path) -> None:
    """Serialize as word<TAB>n_obs<TAB>p_fert1<TAB>p_dist0<TAB>p_joint rows."""
    rows = []
    for length in sorted(stats.source_lengths):
        rows.append(f"#source_length\t{length}\t{stats.source_lengths[length]}")
    for word in sorted(stats.words):
        w = stats.words[word]
        rows.append(f"{word}\t{w.n_obs}\t{w.p_fert1!r}\t{w.p_dist0!r}\t{w.p_joint!r}")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def load_statistics(path: str | Path) -> AlignmentStatistics:
    path = Path(path)
    words: dict[str, WordStatistics] = {}
    lengths: dict[int, int] = {}
    for number, row in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not row:
            continue
        fields = row.split("\t")
        if fields[0] == "#source_length":
            lengths[int(fields[1])] = int(fields[2])
        elif len(fields) == 5:
            words[fields[0]] = WordStatistics(
                n_obs=int(fields[1]),
                p_fert1=float(fields[2]),
                p_dist0=float(fields[3]),
                p_joint=float(fields[4]),
            )
        else:
            raise ValueError(f"{path}:{number}: malformed statistics row")
    return AlignmentStatistics(words=words, source_lengths=lengths)
